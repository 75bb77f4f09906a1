#![no_main]

use libfuzzer_sys::fuzz_target;
use supermaps::io::{object_to_string, parse_object};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(obj) = parse_object(text) {
        let out = object_to_string(&obj).expect("decoded objects are finite");
        let again = parse_object(&out).expect("canonical text decodes");
        assert_eq!(again, obj);
    }
});
