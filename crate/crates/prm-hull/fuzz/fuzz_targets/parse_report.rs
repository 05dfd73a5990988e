#![no_main]

use libfuzzer_sys::fuzz_target;
use prm_hull::report::{format_record, parse_record, parse_report};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(r) = parse_report(text) {
        assert_eq!(parse_report(&r.to_text()).expect("written report parses"), r);
    }
    if let Ok(rec) = parse_record(text) {
        assert_eq!(parse_record(&format_record(&rec)).expect("written record parses"), rec);
    }
});
