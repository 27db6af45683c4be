#![no_main]

use lattice_schlicht::search::{SearchConfig, TraceRecord};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    for line in data.split(|&b| b == b'\n') {
        if let Ok(rec) = serde_json::from_slice::<TraceRecord>(line) {
            let json = serde_json::to_vec(&rec).unwrap();
            assert_eq!(serde_json::from_slice::<TraceRecord>(&json).unwrap(), rec);
        }
    }
    if let Ok(cfg) = serde_json::from_slice::<SearchConfig>(data) {
        let _ = cfg.validate();
    }
});
