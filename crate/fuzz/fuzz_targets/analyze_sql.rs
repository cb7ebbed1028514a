#![no_main]

use std::sync::OnceLock;

use libfuzzer_sys::fuzz_target;
use tysql::erd::{build_parser_info, parse_erd, transform, ParserInfo};

// statements are analyzed against a fixed model, so unknown identifiers,
// alias games, and type mixtures all take the rejection paths
fn info() -> &'static ParserInfo {
    static INFO: OnceLock<ParserInfo> = OnceLock::new();
    INFO.get_or_init(|| {
        let model = parse_erd(include_str!("../uni.erd")).expect("fixture model");
        let schema = transform(&model);
        build_parser_info(&model, &schema, "/tmp/fuzz.db")
    })
}

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(stmt) = tysql::sql::parse_statement(text) {
            if let Ok(typed) = tysql::analysis::analyze(&stmt, info()) {
                let plan = tysql::plan::translate(&typed, info());
                let _ = tysql::plan::render(&plan);
            }
        }
    }
});
