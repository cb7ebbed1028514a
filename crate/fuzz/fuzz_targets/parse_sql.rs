#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = tysql::sql::parse_statement(text);
        let _ = tysql::sql::parse_script(text);
    }
});
