//! Output trees of the analysis phases.
//!
//! The namer rewrites the raw AST into a `Named*` tree where every alias
//! has been replaced by a numbered table reference and `*` projections are
//! expanded. The typer then produces a `Typed*` tree where every value
//! carries its [`SqlType`] and placeholders have an inferred type and a
//! nullable-context flag.

use crate::sql::{CmpOp, Pos, Quantifier, SortDir};
use crate::value::{SqlType, SqlValue};

pub use crate::sql::Lit;

/// A table reference after alias resolution. Repeated references to the
/// same table are told apart by `number`, dense from zero per table name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvedTable {
    pub table: String,
    pub number: u32,
}

impl ResolvedTable {
    pub fn new(table: impl Into<String>, number: u32) -> Self {
        ResolvedTable {
            table: table.into(),
            number,
        }
    }
}

/// A column reference resolved to a numbered table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedCol {
    pub table: ResolvedTable,
    pub column: String,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq)]
pub enum NamedVal {
    Col(NamedCol),
    Const { lit: Lit, pos: Pos },
    Placeholder { name: String, pos: Pos },
}

impl NamedVal {
    pub fn pos(&self) -> Pos {
        match self {
            NamedVal::Col(c) => c.pos,
            NamedVal::Const { pos, .. } | NamedVal::Placeholder { pos, .. } => *pos,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum NamedCond {
    Cmp {
        op: CmpOp,
        lhs: NamedVal,
        rhs: NamedVal,
        pos: Pos,
    },
    Between {
        subject: NamedVal,
        lo: NamedVal,
        hi: NamedVal,
        pos: Pos,
    },
    IsNull {
        col: NamedCol,
        negated: bool,
        pos: Pos,
    },
    Satisfies {
        lhs: ResolvedTable,
        rel: String,
        rhs: ResolvedTable,
        pos: Pos,
    },
    And(Vec<NamedCond>),
    Or(Vec<NamedCond>),
    Not(Box<NamedCond>, Pos),
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedSelect {
    pub quantifier: Quantifier,
    pub projection: Vec<NamedCol>,
    pub from: Vec<ResolvedTable>,
    pub where_cond: Option<NamedCond>,
    pub group_by: Vec<NamedCol>,
    pub order_by: Vec<(NamedCol, SortDir)>,
    pub limit: Option<u64>,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedInsert {
    pub table: String,
    pub table_pos: Pos,
    pub columns: Vec<(String, Pos)>,
    pub rows: Vec<Vec<NamedVal>>,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedUpdate {
    pub table: String,
    pub table_pos: Pos,
    pub assigns: Vec<(String, Pos, NamedVal)>,
    pub where_cond: Option<NamedCond>,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedDelete {
    pub table: String,
    pub table_pos: Pos,
    pub where_cond: Option<NamedCond>,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq)]
pub enum NamedStmt {
    Select(NamedSelect),
    Insert(NamedInsert),
    Update(NamedUpdate),
    Delete(NamedDelete),
}

/// A column reference with its resolved table, number, and type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypedColumn {
    pub table: String,
    pub number: u32,
    pub column: String,
    pub ty: SqlType,
}

impl TypedColumn {
    pub fn table_ref(&self) -> ResolvedTable {
        ResolvedTable::new(self.table.clone(), self.number)
    }
}

/// A typed value: a column, a concrete constant, or a named parameter with
/// its inferred type. `nullable` records whether a null binding is
/// admissible for the parameter.
#[derive(Debug, Clone, PartialEq)]
pub enum TypedVal {
    Col(TypedColumn),
    Const(SqlValue),
    Param {
        name: String,
        ty: SqlType,
        nullable: bool,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum TypedCond {
    Cmp {
        op: CmpOp,
        lhs: TypedVal,
        rhs: TypedVal,
    },
    Between {
        subject: TypedVal,
        lo: TypedVal,
        hi: TypedVal,
    },
    IsNull {
        col: TypedColumn,
        negated: bool,
    },
    Satisfies {
        lhs: ResolvedTable,
        rel: String,
        rhs: ResolvedTable,
    },
    And(Vec<TypedCond>),
    Or(Vec<TypedCond>),
    Not(Box<TypedCond>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TypedSelect {
    pub quantifier: Quantifier,
    pub projection: Vec<TypedColumn>,
    pub from: Vec<ResolvedTable>,
    pub where_cond: Option<TypedCond>,
    pub group_by: Vec<TypedColumn>,
    pub order_by: Vec<(TypedColumn, SortDir)>,
    pub limit: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TypedInsert {
    pub table: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<TypedVal>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TypedUpdate {
    pub table: String,
    pub assigns: Vec<(String, TypedVal)>,
    pub where_cond: Option<TypedCond>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TypedDelete {
    pub table: String,
    pub where_cond: Option<TypedCond>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TypedStmt {
    Select(TypedSelect),
    Insert(TypedInsert),
    Update(TypedUpdate),
    Delete(TypedDelete),
}
