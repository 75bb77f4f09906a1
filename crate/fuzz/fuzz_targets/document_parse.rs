#![no_main]

use libfuzzer_sys::fuzz_target;
use supermaps::io::{document_to_string, parse_document};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(doc) = parse_document(text) {
        // anything that parses must serialize and parse back to itself
        if let Ok(out) = document_to_string(&doc) {
            let again = parse_document(&out).expect("canonical text parses");
            assert_eq!(again, doc);
        }
    }
});
