//! Schema conformance checks: every table, column, and relationship named
//! in a statement must be part of the model, `Satisfies` endpoints must
//! match the declared relationship, and null literals may only appear
//! where SQL permits them (insert rows and update assignments of nullable
//! columns, never in conditions).

use std::collections::BTreeSet;

use crate::erd::ParserInfo;
use crate::sql::Pos;

use super::error::{AnalysisError, Phase};
use super::tree::*;

/// Checks a name-resolved statement against the model. On success the
/// statement passes through unchanged.
pub fn check_consistency(
    stmt: &NamedStmt,
    info: &ParserInfo,
) -> Result<(), Vec<AnalysisError>> {
    let mut ck = Checker {
        info,
        errors: Vec::new(),
    };
    match stmt {
        NamedStmt::Select(s) => ck.check_select(s),
        NamedStmt::Insert(s) => ck.check_insert(s),
        NamedStmt::Update(s) => ck.check_update(s),
        NamedStmt::Delete(s) => ck.check_table(&s.table, s.table_pos) && {
            if let Some(c) = &s.where_cond {
                ck.check_cond(c, false);
            }
            true
        },
    };
    if ck.errors.is_empty() {
        Ok(())
    } else {
        Err(ck.errors)
    }
}

struct Checker<'a> {
    info: &'a ParserInfo,
    errors: Vec<AnalysisError>,
}

impl Checker<'_> {
    fn error(&mut self, message: String, pos: Pos) {
        self.errors
            .push(AnalysisError::new(Phase::Consistency, message, pos));
    }

    fn check_table(&mut self, table: &str, pos: Pos) -> bool {
        if self.info.has_table(table) {
            true
        } else {
            self.error(format!("unknown table `{table}`"), pos);
            false
        }
    }

    fn check_col(&mut self, col: &NamedCol) {
        if !self.info.has_table(&col.table.table) {
            // the From-clause check already reported the table
            return;
        }
        if !self.info.has_column(&col.table.table, &col.column) {
            self.error(
                format!(
                    "unknown column `{}` in table `{}`",
                    col.column, col.table.table
                ),
                col.pos,
            );
        }
    }

    fn check_select(&mut self, s: &NamedSelect) -> bool {
        let mut seen = BTreeSet::new();
        for table in &s.from {
            if seen.insert(&table.table) {
                self.check_table(&table.table, s.pos);
            }
        }
        for col in s
            .projection
            .iter()
            .chain(s.group_by.iter())
            .chain(s.order_by.iter().map(|(c, _)| c))
        {
            self.check_col(col);
        }
        if let Some(c) = &s.where_cond {
            self.check_cond(c, false);
        }
        true
    }

    fn check_insert(&mut self, s: &NamedInsert) -> bool {
        if !self.check_table(&s.table, s.table_pos) {
            return false;
        }
        let mut seen = BTreeSet::new();
        for (column, pos) in &s.columns {
            if !self.info.has_column(&s.table, column) {
                self.error(
                    format!("unknown column `{column}` in table `{}`", s.table),
                    *pos,
                );
            } else if !seen.insert(column) {
                self.error(format!("column `{column}` listed twice"), *pos);
            }
        }
        for row in &s.rows {
            if row.len() != s.columns.len() {
                self.error(
                    format!(
                        "row has {} values but {} columns are listed",
                        row.len(),
                        s.columns.len()
                    ),
                    row.first().map(|v| v.pos()).unwrap_or(s.pos),
                );
                continue;
            }
            for ((column, _), value) in s.columns.iter().zip(row) {
                if let NamedVal::Const { lit: Lit::Null, pos } = value {
                    if self.info.column_nullable(&s.table, column) == Some(false) {
                        self.error(
                            format!("column `{column}` of `{}` is not nullable", s.table),
                            *pos,
                        );
                    }
                }
            }
        }
        true
    }

    fn check_update(&mut self, s: &NamedUpdate) -> bool {
        if !self.check_table(&s.table, s.table_pos) {
            return false;
        }
        let mut seen = BTreeSet::new();
        for (column, pos, value) in &s.assigns {
            if !self.info.has_column(&s.table, column) {
                self.error(
                    format!("unknown column `{column}` in table `{}`", s.table),
                    *pos,
                );
                continue;
            }
            if !seen.insert(column) {
                self.error(format!("column `{column}` assigned twice"), *pos);
            }
            if let NamedVal::Const { lit: Lit::Null, pos } = value {
                if self.info.column_nullable(&s.table, column) == Some(false) {
                    self.error(
                        format!("column `{column}` of `{}` is not nullable", s.table),
                        *pos,
                    );
                }
            }
        }
        if let Some(c) = &s.where_cond {
            self.check_cond(c, false);
        }
        true
    }

    fn check_cond(&mut self, c: &NamedCond, under_not: bool) {
        match c {
            NamedCond::Cmp { lhs, rhs, .. } => {
                self.check_value(lhs);
                self.check_value(rhs);
            }
            NamedCond::Between {
                subject, lo, hi, ..
            } => {
                self.check_value(subject);
                self.check_value(lo);
                self.check_value(hi);
            }
            NamedCond::IsNull { col, .. } => self.check_col(col),
            NamedCond::Satisfies { lhs, rel, rhs, pos } => {
                if under_not {
                    self.error("`Satisfies` may not appear under `Not`".into(), *pos);
                }
                match self.info.relation(rel) {
                    None => self.error(format!("unknown relationship `{rel}`"), *pos),
                    Some(relation) => {
                        if relation.entity_a != lhs.table || relation.entity_b != rhs.table {
                            self.error(
                                format!(
                                    "relationship `{rel}` does not relate `{}` and `{}` (declared between `{}` and `{}`)",
                                    lhs.table, rhs.table, relation.entity_a, relation.entity_b
                                ),
                                *pos,
                            );
                        }
                    }
                }
            }
            NamedCond::And(list) | NamedCond::Or(list) => {
                for c in list {
                    self.check_cond(c, under_not);
                }
            }
            NamedCond::Not(inner, _) => self.check_cond(inner, true),
        }
    }

    fn check_value(&mut self, v: &NamedVal) {
        match v {
            NamedVal::Col(col) => self.check_col(col),
            NamedVal::Const { lit: Lit::Null, pos } => {
                self.error(
                    "null values are not allowed in conditions; use `Is Null` or `Is Not Null`"
                        .into(),
                    *pos,
                );
            }
            NamedVal::Const { .. } | NamedVal::Placeholder { .. } => {}
        }
    }
}
