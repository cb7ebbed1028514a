//! Alias resolution and table numbering.
//!
//! Pseudonyms introduced with `as` are replaced by numbered table
//! references; repeated references to the same table get dense numbers in
//! clause order. Unqualified columns are resolved when exactly one table
//! of the `From` clause owns the column. Every declared pseudonym must be
//! used; `*` counts as a use of every table, and resolving an unqualified
//! column through a table counts as a use of its pseudonym.

use crate::erd::ParserInfo;
use crate::sql::{ColRef, Cond, Pos, Projection, Stmt, ValExpr};

use super::error::{AnalysisError, Phase};
use super::tree::*;

/// Resolves every table and column reference of `stmt`, returning the
/// renamed tree or all resolution errors.
pub fn resolve_names(stmt: &Stmt, info: &ParserInfo) -> Result<NamedStmt, Vec<AnalysisError>> {
    match stmt {
        Stmt::Select(s) => resolve_select(s, info).map(NamedStmt::Select),
        Stmt::Insert(s) => Ok(NamedStmt::Insert(NamedInsert {
            table: s.table.clone(),
            table_pos: s.table_pos,
            columns: s.columns.clone(),
            rows: s
                .rows
                .iter()
                .map(|row| row.iter().map(plain_value).collect())
                .collect(),
            pos: s.pos,
        })),
        Stmt::Update(s) => {
            let scope = Scope::single(&s.table, s.table_pos, info);
            let mut errors = Vec::new();
            let where_cond = s
                .where_cond
                .as_ref()
                .map(|c| resolve_cond(c, &scope, &mut errors));
            if errors.is_empty() {
                Ok(NamedStmt::Update(NamedUpdate {
                    table: s.table.clone(),
                    table_pos: s.table_pos,
                    assigns: s
                        .assigns
                        .iter()
                        .map(|a| (a.column.clone(), a.pos, plain_value(&a.value)))
                        .collect(),
                    where_cond,
                    pos: s.pos,
                }))
            } else {
                Err(errors)
            }
        }
        Stmt::Delete(s) => {
            let scope = Scope::single(&s.table, s.table_pos, info);
            let mut errors = Vec::new();
            let where_cond = s
                .where_cond
                .as_ref()
                .map(|c| resolve_cond(c, &scope, &mut errors));
            if errors.is_empty() {
                Ok(NamedStmt::Delete(NamedDelete {
                    table: s.table.clone(),
                    table_pos: s.table_pos,
                    where_cond,
                    pos: s.pos,
                }))
            } else {
                Err(errors)
            }
        }
    }
}

/// Insert rows and update assignments hold constants and placeholders
/// only; the grammar guarantees it.
fn plain_value(v: &ValExpr) -> NamedVal {
    match v {
        ValExpr::Const { lit, pos } => NamedVal::Const {
            lit: lit.clone(),
            pos: *pos,
        },
        ValExpr::Placeholder { name, pos } => NamedVal::Placeholder {
            name: name.clone(),
            pos: *pos,
        },
        ValExpr::Col(c) => unreachable!("column reference {c:?} in a value row"),
    }
}

struct ScopeEntry {
    qualifier: String,
    table: ResolvedTable,
    aliased: bool,
    pos: Pos,
    used: std::cell::Cell<bool>,
}

struct Scope<'a> {
    entries: Vec<ScopeEntry>,
    info: &'a ParserInfo,
}

impl<'a> Scope<'a> {
    fn single(table: &str, pos: Pos, info: &'a ParserInfo) -> Scope<'a> {
        Scope {
            entries: vec![ScopeEntry {
                qualifier: table.to_string(),
                table: ResolvedTable::new(table, 0),
                aliased: false,
                pos,
                used: true.into(),
            }],
            info,
        }
    }

    fn lookup(&self, qualifier: &str) -> Option<&ScopeEntry> {
        self.entries.iter().find(|e| e.qualifier == qualifier)
    }

    fn resolve_qualifier(
        &self,
        qualifier: &str,
        pos: Pos,
        errors: &mut Vec<AnalysisError>,
    ) -> ResolvedTable {
        match self.lookup(qualifier) {
            Some(entry) => {
                entry.used.set(true);
                entry.table.clone()
            }
            None => {
                errors.push(AnalysisError::new(
                    Phase::Namer,
                    format!("pseudonym `{qualifier}` was not defined"),
                    pos,
                ));
                ResolvedTable::new(qualifier, 0)
            }
        }
    }

    fn resolve_col(&self, col: &ColRef, errors: &mut Vec<AnalysisError>) -> NamedCol {
        let table = match &col.qualifier {
            Some(q) => self.resolve_qualifier(q, col.pos, errors),
            None => {
                let owners: Vec<&ScopeEntry> = self
                    .entries
                    .iter()
                    .filter(|e| self.info.has_column(&e.table.table, &col.column))
                    .collect();
                match owners.as_slice() {
                    [entry] => {
                        entry.used.set(true);
                        entry.table.clone()
                    }
                    [] => {
                        errors.push(AnalysisError::new(
                            Phase::Namer,
                            format!(
                                "column `{}` does not belong to any table of the From clause",
                                col.column
                            ),
                            col.pos,
                        ));
                        self.entries
                            .first()
                            .map(|e| e.table.clone())
                            .unwrap_or_else(|| ResolvedTable::new("", 0))
                    }
                    _ => {
                        errors.push(AnalysisError::new(
                            Phase::Namer,
                            format!("column `{}` is ambiguous; qualify it", col.column),
                            col.pos,
                        ));
                        owners[0].table.clone()
                    }
                }
            }
        };
        NamedCol {
            table,
            column: col.column.clone(),
            pos: col.pos,
        }
    }
}

fn resolve_select(
    s: &crate::sql::SelectStmt,
    info: &ParserInfo,
) -> Result<NamedSelect, Vec<AnalysisError>> {
    let mut errors = Vec::new();

    let mut entries: Vec<ScopeEntry> = Vec::new();
    let mut per_table_counter: std::collections::BTreeMap<&str, u32> =
        std::collections::BTreeMap::new();
    for table_ref in &s.from {
        let qualifier = table_ref.alias.clone().unwrap_or_else(|| table_ref.table.clone());
        if entries.iter().any(|e| e.qualifier == qualifier) {
            errors.push(AnalysisError::new(
                Phase::Namer,
                format!("pseudonym `{qualifier}` is defined for more than one table"),
                table_ref.pos,
            ));
            continue;
        }
        let counter = per_table_counter.entry(&table_ref.table).or_insert(0);
        let number = *counter;
        *counter += 1;
        entries.push(ScopeEntry {
            qualifier,
            table: ResolvedTable::new(table_ref.table.clone(), number),
            aliased: table_ref.alias.is_some(),
            pos: table_ref.pos,
            used: false.into(),
        });
    }
    let scope = Scope { entries, info };

    let projection = match &s.projection {
        Projection::Star(pos) => {
            let mut cols = Vec::new();
            for entry in &scope.entries {
                entry.used.set(true);
                match info.columns_of(&entry.table.table) {
                    Some(columns) => {
                        cols.extend(columns.iter().map(|c| NamedCol {
                            table: entry.table.clone(),
                            column: c.clone(),
                            pos: *pos,
                        }));
                    }
                    None => errors.push(AnalysisError::new(
                        Phase::Namer,
                        format!(
                            "cannot expand `*`: table `{}` is not part of the model",
                            entry.table.table
                        ),
                        *pos,
                    )),
                }
            }
            cols
        }
        Projection::Items(items) => items
            .iter()
            .map(|c| scope.resolve_col(c, &mut errors))
            .collect(),
    };

    let where_cond = s
        .where_cond
        .as_ref()
        .map(|c| resolve_cond(c, &scope, &mut errors));
    let group_by = s
        .group_by
        .iter()
        .map(|c| scope.resolve_col(c, &mut errors))
        .collect();
    let order_by = s
        .order_by
        .iter()
        .map(|(c, dir)| (scope.resolve_col(c, &mut errors), *dir))
        .collect();

    for entry in &scope.entries {
        if entry.aliased && !entry.used.get() {
            errors.push(AnalysisError::new(
                Phase::Namer,
                format!("pseudonym `{}` was defined but not used", entry.qualifier),
                entry.pos,
            ));
        }
    }

    if errors.is_empty() {
        Ok(NamedSelect {
            quantifier: s.quantifier,
            projection,
            from: scope.entries.iter().map(|e| e.table.clone()).collect(),
            where_cond,
            group_by,
            order_by,
            limit: s.limit,
            pos: s.pos,
        })
    } else {
        Err(errors)
    }
}

fn resolve_cond(c: &Cond, scope: &Scope, errors: &mut Vec<AnalysisError>) -> NamedCond {
    match c {
        Cond::Cmp { op, lhs, rhs, pos } => NamedCond::Cmp {
            op: *op,
            lhs: resolve_value(lhs, scope, errors),
            rhs: resolve_value(rhs, scope, errors),
            pos: *pos,
        },
        Cond::Between {
            subject,
            lo,
            hi,
            pos,
        } => NamedCond::Between {
            subject: resolve_value(subject, scope, errors),
            lo: resolve_value(lo, scope, errors),
            hi: resolve_value(hi, scope, errors),
            pos: *pos,
        },
        Cond::IsNull { col, negated, pos } => NamedCond::IsNull {
            col: scope.resolve_col(col, errors),
            negated: *negated,
            pos: *pos,
        },
        Cond::Satisfies { lhs, rel, rhs, pos } => NamedCond::Satisfies {
            lhs: scope.resolve_qualifier(lhs, *pos, errors),
            rel: rel.clone(),
            rhs: scope.resolve_qualifier(rhs, *pos, errors),
            pos: *pos,
        },
        Cond::And(list) => NamedCond::And(
            list.iter()
                .map(|c| resolve_cond(c, scope, errors))
                .collect(),
        ),
        Cond::Or(list) => NamedCond::Or(
            list.iter()
                .map(|c| resolve_cond(c, scope, errors))
                .collect(),
        ),
        Cond::Not(inner, pos) => NamedCond::Not(Box::new(resolve_cond(inner, scope, errors)), *pos),
    }
}

fn resolve_value(v: &ValExpr, scope: &Scope, errors: &mut Vec<AnalysisError>) -> NamedVal {
    match v {
        ValExpr::Col(c) => NamedVal::Col(scope.resolve_col(c, errors)),
        ValExpr::Const { lit, pos } => NamedVal::Const {
            lit: lit.clone(),
            pos: *pos,
        },
        ValExpr::Placeholder { name, pos } => NamedVal::Placeholder {
            name: name.clone(),
            pos: *pos,
        },
    }
}
