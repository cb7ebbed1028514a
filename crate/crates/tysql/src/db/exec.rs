//! Execution of query plans with named parameter bindings.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use crate::plan::{render, Constraint, QueryPlan, Slot};
use crate::value::SqlValue;

use super::conn::Connection;
use super::error::{DbError, DbResult};

/// What a plan execution produced: typed rows for a select, an
/// affected-row count for a mutation.
#[derive(Debug, Clone, PartialEq)]
pub enum PlanOutput {
    Rows(Vec<Vec<SqlValue>>),
    Affected(usize),
}

impl PlanOutput {
    pub fn rows(self) -> Vec<Vec<SqlValue>> {
        match self {
            PlanOutput::Rows(rows) => rows,
            PlanOutput::Affected(n) => panic!("expected rows, got affected count {n}"),
        }
    }

    pub fn affected(self) -> usize {
        match self {
            PlanOutput::Affected(n) => n,
            PlanOutput::Rows(_) => panic!("expected an affected count, got rows"),
        }
    }
}

/// Renders the plan, fills its slots from `bindings`, and executes it.
/// Bindings must cover every named parameter with a value of the slot's
/// type (null only where the context tolerates it) and must not mention
/// unknown names; violations fail before the database is touched.
pub fn run_plan(
    conn: &Connection,
    plan: &QueryPlan,
    bindings: &BTreeMap<String, SqlValue>,
) -> DbResult<PlanOutput> {
    let rendered = render(plan);
    let values = resolve_slots(&rendered.slots, bindings)?;
    match plan {
        QueryPlan::Select(s) => {
            let result_types: Vec<_> = s.projection.iter().map(|c| c.ty).collect();
            let rows = conn.select_typed(&rendered.text, &values, &result_types)?;
            Ok(PlanOutput::Rows(rows))
        }
        _ => Ok(PlanOutput::Affected(
            conn.execute_with(&rendered.text, &values)?,
        )),
    }
}

/// Materializes slot values in hole order, validating the bindings.
pub fn resolve_slots(
    slots: &[Slot],
    bindings: &BTreeMap<String, SqlValue>,
) -> DbResult<Vec<SqlValue>> {
    let known: BTreeSet<&str> = slots
        .iter()
        .filter_map(|s| match s {
            Slot::Param { name, .. } => Some(name.as_str()),
            Slot::Const(_) => None,
        })
        .collect();
    for name in bindings.keys() {
        if !known.contains(name.as_str()) {
            return Err(DbError::conversion(format!("unknown parameter: {name}")));
        }
    }

    slots
        .iter()
        .map(|slot| match slot {
            Slot::Const(value) => Ok(value.clone()),
            Slot::Param { name, ty, nullable } => match bindings.get(name) {
                None => Err(DbError::conversion(format!("missing parameter: {name}"))),
                Some(value) if value.fits(*ty, *nullable) => Ok(value.clone()),
                Some(SqlValue::Null) => Err(DbError::conversion(format!(
                    "parameter `{name}` must not be null here"
                ))),
                Some(value) => Err(DbError::conversion(format!(
                    "parameter `{name}` expects {ty}, got {}",
                    value
                        .type_of()
                        .map(|t| t.name().to_string())
                        .unwrap_or_else(|| "null".into())
                ))),
            },
        })
        .collect()
}

/// Appends `where ...` for a criteria tree over one table, returning the
/// values bound to its holes. Criteria used here must be fully constant;
/// a named parameter is a misuse.
pub(crate) fn bind_constraint(
    criteria: &Constraint,
    table: &str,
    sql: &mut String,
) -> DbResult<Vec<SqlValue>> {
    if *criteria == Constraint::True {
        return Ok(Vec::new());
    }
    let (text, slots) = crate::plan::render::render_constraint_standalone(criteria, table);
    sql.push_str(" where ");
    sql.push_str(&text);
    slots
        .into_iter()
        .map(|slot| match slot {
            Slot::Const(value) => Ok(value),
            Slot::Param { name, .. } => Err(DbError::conversion(format!(
                "criteria contain unbound parameter `{{{name}}}`"
            ))),
        })
        .collect()
}
