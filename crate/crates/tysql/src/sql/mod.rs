//! The SQL dialect front end: tokens, lexer, AST, parser, and a canonical
//! printer.
//!
//! The dialect covers select/insert/update/delete with two extensions:
//! `Satisfies a rel b` conditions over ER relationships and `{name}`
//! placeholders bound at execution time. See `docs/sql-grammar.ebnf` for
//! the grammar.

pub mod ast;
pub mod lexer;
pub mod parser;
pub mod pretty;
pub mod token;

pub use ast::{
    Assign, ColRef, Cond, DeleteStmt, InsertStmt, Lit, Projection, Quantifier, SelectStmt,
    SortDir, Stmt, TableRef, UpdateStmt, ValExpr,
};
pub use lexer::{tokenize, SyntaxError};
pub use parser::{parse_script, parse_statement};
pub use pretty::pretty_stmt;
pub use token::{CmpOp, Keyword, Pos, Token, TokenKind};
