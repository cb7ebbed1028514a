//! Errors of the semantic analysis phases.

use std::fmt;

use crate::sql::Pos;

/// The phase that rejected the statement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Namer,
    Consistency,
    Typer,
}

impl Phase {
    pub fn name(self) -> &'static str {
        match self {
            Phase::Namer => "namer",
            Phase::Consistency => "consistency",
            Phase::Typer => "typer",
        }
    }
}

/// A positioned analysis error. `Display` uses the format shared with the
/// command line: `<line>:<column> [<phase>] <message>`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisError {
    pub phase: Phase,
    pub message: String,
    pub pos: Pos,
}

impl AnalysisError {
    pub fn new(phase: Phase, message: impl Into<String>, pos: Pos) -> Self {
        AnalysisError {
            phase,
            message: message.into(),
            pos,
        }
    }
}

impl fmt::Display for AnalysisError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}] {}", self.pos, self.phase.name(), self.message)
    }
}

impl std::error::Error for AnalysisError {}
