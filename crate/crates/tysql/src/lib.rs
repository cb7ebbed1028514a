//! An ER-model-checked SQL dialect compiler with a typed SQLite runtime.
//!
//! The toolchain has two halves. At compile time, a textual ER model is
//! transformed into a relational schema (`erd`), and statements written in
//! an extended SQL dialect are parsed (`sql`), checked against the model
//! for name, consistency, and type errors (`analysis`), and lowered into
//! typed query plans (`plan`). At run time, plans are rendered into
//! parameterized SQL, every value traveling through a `?` hole, and
//! executed over SQLite (`db`).
//!
//! The dialect extends standard SQL with `Satisfies a rel b` conditions
//! that express ER relationships without spelling out foreign keys, and
//! `{name}` placeholders whose types are inferred from context and bound
//! at execution time.

pub mod analysis;
pub mod db;
pub mod erd;
pub mod plan;
pub mod sql;
pub mod value;

pub use analysis::{analyze, AnalysisError, TypedStmt};
pub use db::{
    run_plan, run_with_db, Connection, DbAction, DbError, DbErrorKind, DbResult,
    EntityDescription, PlanOutput, Session,
};
pub use erd::{
    build_parser_info, emit_ddl, parse_erd, read_info, write_info, ErModel, ParserInfo,
    RelationalSchema,
};
pub use plan::{render, translate, QueryPlan, RenderedSql, Slot};
pub use sql::{parse_script, parse_statement, Stmt, SyntaxError};
pub use value::{SqlType, SqlValue};

/// A compile-time failure: a syntax error or the analysis errors of one
/// statement.
#[derive(Debug, Clone, PartialEq)]
pub enum CompileError {
    Syntax(SyntaxError),
    Analysis(Vec<AnalysisError>),
}

impl std::fmt::Display for CompileError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CompileError::Syntax(e) => write!(f, "{e}"),
            CompileError::Analysis(errors) => {
                for (i, e) in errors.iter().enumerate() {
                    if i > 0 {
                        writeln!(f)?;
                    }
                    write!(f, "{e}")?;
                }
                Ok(())
            }
        }
    }
}

impl std::error::Error for CompileError {}

/// Parses, analyzes, and translates a single statement against a model.
pub fn compile(text: &str, info: &ParserInfo) -> Result<QueryPlan, CompileError> {
    let stmt = parse_statement(text).map_err(CompileError::Syntax)?;
    let typed = analyze(&stmt, info).map_err(CompileError::Analysis)?;
    Ok(translate(&typed, info))
}
