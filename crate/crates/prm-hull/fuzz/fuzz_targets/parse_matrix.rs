#![no_main]

use libfuzzer_sys::fuzz_target;
use prm_hull::linalg::{format_matrix, parse_matrix};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(m) = parse_matrix(text, None) {
        let again = parse_matrix(&format_matrix(&m), Some(m.field())).expect("formatted matrix parses");
        assert_eq!(again, m);
    }
});
