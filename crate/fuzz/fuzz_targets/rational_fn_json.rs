#![no_main]

use lattice_schlicht::reconstruct::{CatalogEntry, RationalFn};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(f) = serde_json::from_slice::<RationalFn>(data) {
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(serde_json::from_str::<RationalFn>(&json).unwrap(), f);
        let _ = f.taylor_dense(8);
    }
    let _ = serde_json::from_slice::<CatalogEntry>(data);
});
