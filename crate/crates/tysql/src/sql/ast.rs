//! Abstract syntax of the SQL dialect.
//!
//! Every node carries the source position of its first token. Structural
//! comparisons that should ignore positions can normalize them first with
//! [`Stmt::clear_positions`].

use super::token::{CmpOp, Pos};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Quantifier {
    #[default]
    All,
    Distinct,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SortDir {
    Asc,
    Desc,
}

/// A possibly qualified column reference.
#[derive(Debug, Clone, PartialEq)]
pub struct ColRef {
    pub qualifier: Option<String>,
    pub column: String,
    pub pos: Pos,
}

/// A literal constant as written in the source.
#[derive(Debug, Clone, PartialEq)]
pub enum Lit {
    Int(i64),
    Float(f64),
    Str(String),
    Bool(bool),
    Null,
}

/// A value expression: a column, a constant, or a `{name}` placeholder.
#[derive(Debug, Clone, PartialEq)]
pub enum ValExpr {
    Col(ColRef),
    Const { lit: Lit, pos: Pos },
    Placeholder { name: String, pos: Pos },
}

impl ValExpr {
    pub fn pos(&self) -> Pos {
        match self {
            ValExpr::Col(c) => c.pos,
            ValExpr::Const { pos, .. } => *pos,
            ValExpr::Placeholder { pos, .. } => *pos,
        }
    }
}

/// A condition tree. `And`/`Or` chains are flattened into lists.
#[derive(Debug, Clone, PartialEq)]
pub enum Cond {
    Cmp {
        op: CmpOp,
        lhs: ValExpr,
        rhs: ValExpr,
        pos: Pos,
    },
    Between {
        subject: ValExpr,
        lo: ValExpr,
        hi: ValExpr,
        pos: Pos,
    },
    IsNull {
        col: ColRef,
        negated: bool,
        pos: Pos,
    },
    /// `Satisfies a rel b`: operands are table names or aliases.
    Satisfies {
        lhs: String,
        rel: String,
        rhs: String,
        pos: Pos,
    },
    And(Vec<Cond>),
    Or(Vec<Cond>),
    Not(Box<Cond>, Pos),
}

impl Cond {
    pub fn pos(&self) -> Pos {
        match self {
            Cond::Cmp { pos, .. }
            | Cond::Between { pos, .. }
            | Cond::IsNull { pos, .. }
            | Cond::Satisfies { pos, .. } => *pos,
            Cond::And(list) | Cond::Or(list) => list[0].pos(),
            Cond::Not(_, pos) => *pos,
        }
    }
}

/// A referenced table with an optional `as` alias.
#[derive(Debug, Clone, PartialEq)]
pub struct TableRef {
    pub table: String,
    pub alias: Option<String>,
    pub pos: Pos,
}

/// The projection of a select statement: `*` or explicit columns.
#[derive(Debug, Clone, PartialEq)]
pub enum Projection {
    Star(Pos),
    Items(Vec<ColRef>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectStmt {
    pub quantifier: Quantifier,
    pub projection: Projection,
    pub from: Vec<TableRef>,
    pub where_cond: Option<Cond>,
    pub group_by: Vec<ColRef>,
    pub order_by: Vec<(ColRef, SortDir)>,
    pub limit: Option<u64>,
    pub pos: Pos,
}

/// Insert rows may contain constants and placeholders only.
#[derive(Debug, Clone, PartialEq)]
pub struct InsertStmt {
    pub table: String,
    pub table_pos: Pos,
    pub columns: Vec<(String, Pos)>,
    pub rows: Vec<Vec<ValExpr>>,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Assign {
    pub column: String,
    pub value: ValExpr,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UpdateStmt {
    pub table: String,
    pub table_pos: Pos,
    pub assigns: Vec<Assign>,
    pub where_cond: Option<Cond>,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeleteStmt {
    pub table: String,
    pub table_pos: Pos,
    pub where_cond: Option<Cond>,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Stmt {
    Select(SelectStmt),
    Insert(InsertStmt),
    Update(UpdateStmt),
    Delete(DeleteStmt),
}

impl Stmt {
    pub fn pos(&self) -> Pos {
        match self {
            Stmt::Select(s) => s.pos,
            Stmt::Insert(s) => s.pos,
            Stmt::Update(s) => s.pos,
            Stmt::Delete(s) => s.pos,
        }
    }

    /// Resets every position to the default, for position-insensitive
    /// structural comparison.
    pub fn clear_positions(&mut self) {
        fn clear_col(c: &mut ColRef) {
            c.pos = Pos::default();
        }
        fn clear_val(v: &mut ValExpr) {
            match v {
                ValExpr::Col(c) => clear_col(c),
                ValExpr::Const { pos, .. } | ValExpr::Placeholder { pos, .. } => {
                    *pos = Pos::default()
                }
            }
        }
        fn clear_cond(c: &mut Cond) {
            match c {
                Cond::Cmp { lhs, rhs, pos, .. } => {
                    clear_val(lhs);
                    clear_val(rhs);
                    *pos = Pos::default();
                }
                Cond::Between {
                    subject,
                    lo,
                    hi,
                    pos,
                } => {
                    clear_val(subject);
                    clear_val(lo);
                    clear_val(hi);
                    *pos = Pos::default();
                }
                Cond::IsNull { col, pos, .. } => {
                    clear_col(col);
                    *pos = Pos::default();
                }
                Cond::Satisfies { pos, .. } => *pos = Pos::default(),
                Cond::And(list) | Cond::Or(list) => list.iter_mut().for_each(clear_cond),
                Cond::Not(inner, pos) => {
                    clear_cond(inner);
                    *pos = Pos::default();
                }
            }
        }
        match self {
            Stmt::Select(s) => {
                s.pos = Pos::default();
                match &mut s.projection {
                    Projection::Star(pos) => *pos = Pos::default(),
                    Projection::Items(items) => items.iter_mut().for_each(clear_col),
                }
                for t in &mut s.from {
                    t.pos = Pos::default();
                }
                if let Some(c) = &mut s.where_cond {
                    clear_cond(c);
                }
                s.group_by.iter_mut().for_each(clear_col);
                for (c, _) in &mut s.order_by {
                    clear_col(c);
                }
            }
            Stmt::Insert(s) => {
                s.pos = Pos::default();
                s.table_pos = Pos::default();
                for (_, pos) in &mut s.columns {
                    *pos = Pos::default();
                }
                for row in &mut s.rows {
                    row.iter_mut().for_each(clear_val);
                }
            }
            Stmt::Update(s) => {
                s.pos = Pos::default();
                s.table_pos = Pos::default();
                for a in &mut s.assigns {
                    a.pos = Pos::default();
                    clear_val(&mut a.value);
                }
                if let Some(c) = &mut s.where_cond {
                    clear_cond(c);
                }
            }
            Stmt::Delete(s) => {
                s.pos = Pos::default();
                s.table_pos = Pos::default();
                if let Some(c) = &mut s.where_cond {
                    clear_cond(c);
                }
            }
        }
    }
}
