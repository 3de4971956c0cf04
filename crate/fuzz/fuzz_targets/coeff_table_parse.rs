#![no_main]

use libfuzzer_sys::fuzz_target;
use modrecon::optimizer::{format_coeff_table, parse_coeff_table};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    // Parsing must never panic; accepted tables must survive a
    // format/parse/format cycle byte-for-byte.
    if let Ok(table) = parse_coeff_table(text) {
        let serialized = format_coeff_table(&table);
        let reparsed = parse_coeff_table(&serialized).expect("serialized table must parse");
        assert_eq!(reparsed, table);
        assert_eq!(format_coeff_table(&reparsed), serialized);
    }
});
