#![no_main]

use lattice_schlicht::Rat;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(x) = s.parse::<Rat>() {
        assert_eq!(x.to_string().parse::<Rat>().unwrap(), x);
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(serde_json::from_str::<Rat>(&json).unwrap(), x);
    }
});
