#![no_main]

use lattice_schlicht::parse::parse_function;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(f) = parse_function(s) {
        // the display form must parse back to the same function
        let again = parse_function(&f.to_string()).expect("display form reparses");
        assert_eq!(again, f);
    }
});
