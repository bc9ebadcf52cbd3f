#![no_main]

use libfuzzer_sys::fuzz_target;
use symlie::Partition;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(p) = s.parse::<Partition>() {
        assert_eq!(p.to_string().parse::<Partition>().unwrap(), p);
        assert_eq!(p.conjugate().conjugate(), p);
    }
    if let Ok(p) = serde_json::from_str::<Partition>(s) {
        assert_eq!(serde_json::from_str::<Partition>(&serde_json::to_string(&p).unwrap()).unwrap(), p);
    }
});
