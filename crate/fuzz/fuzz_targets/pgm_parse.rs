#![no_main]

use libfuzzer_sys::fuzz_target;
use modrecon::io::pgm::{read_pgm_bytes, write_pgm_bytes};

fuzz_target!(|data: &[u8]| {
    // Parsing must never panic; accepted images must round-trip exactly
    // through the canonical writer.
    if let Ok(image) = read_pgm_bytes(data) {
        let bytes = write_pgm_bytes(&image);
        let back = read_pgm_bytes(&bytes).expect("canonical output must parse");
        assert_eq!(back, image);
        assert_eq!(write_pgm_bytes(&back), bytes);
    }
});
