#![no_main]

use libfuzzer_sys::fuzz_target;
use symlie::MatrixDump;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok((dump, m)) = MatrixDump::parse(s) {
        let (again, m2) = MatrixDump::parse(&serde_json::to_string(&dump).unwrap()).unwrap();
        assert_eq!(again, dump);
        assert_eq!(m2, m);
    }
});
