//! The semantic analysis pipeline: name resolution, consistency checking,
//! and type inference. Each phase is pure; [`analyze`] chains them in
//! order and stops at the first failing phase.

pub mod consistency;
pub mod error;
pub mod namer;
pub mod tree;
pub mod typer;

pub use consistency::check_consistency;
pub use error::{AnalysisError, Phase};
pub use namer::resolve_names;
pub use tree::{
    NamedCol, NamedCond, NamedStmt, NamedVal, ResolvedTable, TypedColumn, TypedCond, TypedSelect,
    TypedStmt, TypedVal,
};
pub use typer::infer_types;

use crate::erd::ParserInfo;
use crate::sql::Stmt;

/// Runs namer, consistency, and typer over a parsed statement.
pub fn analyze(stmt: &Stmt, info: &ParserInfo) -> Result<TypedStmt, Vec<AnalysisError>> {
    let named = resolve_names(stmt, info)?;
    check_consistency(&named, info)?;
    infer_types(&named, info)
}
