//! Typed query plans and their rendering into parameterized SQL.
//!
//! A plan is the executable form of an analyzed statement: projections and
//! criteria carry concrete types, `Satisfies` conditions have been
//! desugared into foreign-key equalities (appending join tables for n:m
//! relationships), and every constant or placeholder has become a
//! parameter slot. Rendering produces SQL text with `?` holes only; no
//! value payload ever appears in the text.

pub mod render;
pub mod translate;

pub use render::{render, RenderedSql, Slot};
pub use translate::{desugar_satisfies, translate};

use crate::analysis::{ResolvedTable, TypedColumn};
use crate::sql::{CmpOp, Quantifier, SortDir};
use crate::value::{SqlType, SqlValue};

/// A value in plan criteria: a constant, a column, or a named parameter.
#[derive(Debug, Clone, PartialEq)]
pub enum PlanValue {
    Const(SqlValue),
    Col(TypedColumn),
    Param {
        name: String,
        ty: SqlType,
        nullable: bool,
    },
}

/// Selection criteria over typed values. `True` is the empty criterion of
/// a statement without a `Where` clause.
#[derive(Debug, Clone, PartialEq)]
pub enum Constraint {
    Cmp {
        op: CmpOp,
        lhs: PlanValue,
        rhs: PlanValue,
    },
    Between {
        subject: PlanValue,
        lo: PlanValue,
        hi: PlanValue,
    },
    IsNull {
        col: TypedColumn,
        negated: bool,
    },
    And(Vec<Constraint>),
    Or(Vec<Constraint>),
    Not(Box<Constraint>),
    True,
}

impl Constraint {
    pub fn eq(lhs: PlanValue, rhs: PlanValue) -> Constraint {
        Constraint::Cmp {
            op: CmpOp::Eq,
            lhs,
            rhs,
        }
    }

    pub fn cmp(op: CmpOp, lhs: PlanValue, rhs: PlanValue) -> Constraint {
        Constraint::Cmp { op, lhs, rhs }
    }
}

/// The table clause: a head table and a chain of cross joins.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableClause {
    pub head: ResolvedTable,
    pub joins: Vec<ResolvedTable>,
}

impl TableClause {
    pub fn new(head: ResolvedTable) -> Self {
        TableClause {
            head,
            joins: Vec::new(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &ResolvedTable> {
        std::iter::once(&self.head).chain(self.joins.iter())
    }

    /// Appends a fresh reference to `table`, returning its dense number.
    pub fn append(&mut self, table: &str) -> u32 {
        let number = self.iter().filter(|t| t.table == table).count() as u32;
        self.joins.push(ResolvedTable::new(table, number));
        number
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectPlan {
    pub quantifier: Quantifier,
    pub projection: Vec<TypedColumn>,
    pub tables: TableClause,
    pub criteria: Constraint,
    pub group_by: Vec<TypedColumn>,
    pub order_by: Vec<(TypedColumn, SortDir)>,
    pub limit: Option<u64>,
}

/// Insert rows hold constants and parameters only.
#[derive(Debug, Clone, PartialEq)]
pub struct InsertPlan {
    pub table: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<PlanValue>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UpdatePlan {
    pub table: String,
    pub assigns: Vec<(String, PlanValue)>,
    pub criteria: Constraint,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeletePlan {
    pub table: String,
    pub criteria: Constraint,
}

#[derive(Debug, Clone, PartialEq)]
pub enum QueryPlan {
    Select(SelectPlan),
    Insert(InsertPlan),
    Update(UpdatePlan),
    Delete(DeletePlan),
}

impl QueryPlan {
    /// The distinct named parameters of the plan in first-occurrence
    /// order, with their types and nullability.
    pub fn params(&self) -> Vec<(String, SqlType, bool)> {
        let rendered = render(self);
        let mut out: Vec<(String, SqlType, bool)> = Vec::new();
        for slot in &rendered.slots {
            if let Slot::Param { name, ty, nullable } = slot {
                if !out.iter().any(|(n, _, _)| n == name) {
                    out.push((name.clone(), *ty, *nullable));
                }
            }
        }
        out
    }

    /// A stable, indented description of the plan for diagnostics.
    pub fn describe(&self) -> String {
        render::describe(self)
    }
}
