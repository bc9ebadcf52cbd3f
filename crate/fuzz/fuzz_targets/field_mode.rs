#![no_main]

use libfuzzer_sys::fuzz_target;
use symlie::FieldMode;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(m) = s.parse::<FieldMode>() {
        assert_eq!(m.to_string().parse::<FieldMode>().unwrap(), m);
    }
});
