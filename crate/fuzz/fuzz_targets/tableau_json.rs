#![no_main]

use libfuzzer_sys::fuzz_target;
use symlie::StandardTableau;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(t) = StandardTableau::parse_json(s) {
        let text = serde_json::to_string(&t.to_json()).unwrap();
        assert_eq!(StandardTableau::parse_json(&text).unwrap(), t);
        assert_eq!(t.conjugate().conjugate(), t);
    }
});
