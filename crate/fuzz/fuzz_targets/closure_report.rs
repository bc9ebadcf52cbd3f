#![no_main]

use libfuzzer_sys::fuzz_target;
use symlie::lie_closure::ClosureReport;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(r) = ClosureReport::parse(s) {
        assert_eq!(ClosureReport::parse(&serde_json::to_string(&r).unwrap()).unwrap(), r);
    }
});
