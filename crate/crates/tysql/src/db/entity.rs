//! Typed entity access: descriptions bridging program values and database
//! rows, plus retrieval and manipulation operations over them.

use crate::analysis::TypedColumn;
use crate::plan::Constraint;
use crate::sql::{Quantifier, SortDir};
use crate::value::{SqlType, SqlValue};

use super::conn::Connection;
use super::error::{DbError, DbResult};
use super::exec::bind_constraint;

/// The typed bridge between an entity value and its database row. The
/// first column is always the surrogate `Key`; `to_row` and `from_row`
/// must be mutually inverse on valid values.
pub struct EntityDescription<T> {
    pub name: String,
    pub column_types: Vec<SqlType>,
    pub to_row: fn(&T) -> Vec<SqlValue>,
    pub from_row: fn(&[SqlValue]) -> Option<T>,
}

impl<T> EntityDescription<T> {
    pub fn new(
        name: impl Into<String>,
        column_types: Vec<SqlType>,
        to_row: fn(&T) -> Vec<SqlValue>,
        from_row: fn(&[SqlValue]) -> Option<T>,
    ) -> Self {
        EntityDescription {
            name: name.into(),
            column_types,
            to_row,
            from_row,
        }
    }

    fn decode(&self, row: &[SqlValue]) -> DbResult<T> {
        (self.from_row)(row).ok_or_else(|| {
            DbError::conversion(format!("row does not decode as a `{}` entity", self.name))
        })
    }
}

fn check_criteria_columns(desc_name: &str, criteria: &Constraint) -> DbResult<()> {
    fn check_col(desc_name: &str, col: &TypedColumn) -> DbResult<()> {
        if col.table == desc_name && col.number == 0 {
            Ok(())
        } else {
            Err(DbError::query(format!(
                "criteria reference column `{}` of `{}`, not of entity `{desc_name}`",
                col.column, col.table
            )))
        }
    }
    fn check_value(desc_name: &str, v: &crate::plan::PlanValue) -> DbResult<()> {
        if let crate::plan::PlanValue::Col(col) = v {
            check_col(desc_name, col)?;
        }
        Ok(())
    }
    match criteria {
        Constraint::Cmp { lhs, rhs, .. } => {
            check_value(desc_name, lhs)?;
            check_value(desc_name, rhs)
        }
        Constraint::Between { subject, lo, hi } => {
            check_value(desc_name, subject)?;
            check_value(desc_name, lo)?;
            check_value(desc_name, hi)
        }
        Constraint::IsNull { col, .. } => check_col(desc_name, col),
        Constraint::And(list) | Constraint::Or(list) => {
            list.iter().try_for_each(|c| check_criteria_columns(desc_name, c))
        }
        Constraint::Not(inner) => check_criteria_columns(desc_name, inner),
        Constraint::True => Ok(()),
    }
}

/// Retrieves entities matching `criteria`, ordered and limited as
/// requested. Criteria may reference columns of the description's entity
/// only; constants in criteria travel as bound parameters.
pub fn get_entries<T>(
    conn: &Connection,
    desc: &EntityDescription<T>,
    quantifier: Quantifier,
    criteria: &Constraint,
    order_by: &[(TypedColumn, SortDir)],
    limit: Option<u64>,
) -> DbResult<Vec<T>> {
    check_criteria_columns(&desc.name, criteria)?;
    for (col, _) in order_by {
        if col.table != desc.name {
            return Err(DbError::query(format!(
                "ordering column `{}` does not belong to entity `{}`",
                col.column, desc.name
            )));
        }
    }

    let mut sql = String::from("select ");
    if quantifier == Quantifier::Distinct {
        sql.push_str("Distinct ");
    }
    sql.push_str(&format!("* from '{}'", desc.name));
    let values = bind_constraint(criteria, &desc.name, &mut sql)?;
    if !order_by.is_empty() {
        let terms: Vec<String> = order_by
            .iter()
            .map(|(c, dir)| {
                format!(
                    "\"{}\".\"{}\" {}",
                    desc.name,
                    c.column,
                    match dir {
                        SortDir::Asc => "asc",
                        SortDir::Desc => "desc",
                    }
                )
            })
            .collect();
        sql.push_str(&format!(" order by {}", terms.join(", ")));
    }
    if let Some(n) = limit {
        sql.push_str(&format!(" limit {n}"));
    }
    sql.push(';');

    let rows = conn.select_typed(&sql, &values, &desc.column_types)?;
    rows.iter().map(|row| desc.decode(row)).collect()
}

/// Inserts an entity, letting the engine assign the surrogate key; the
/// entity's own key field is ignored. Returns the assigned key.
pub fn insert_entity<T>(conn: &Connection, desc: &EntityDescription<T>, entity: &T) -> DbResult<i64> {
    let mut row = (desc.to_row)(entity);
    check_row_shape(desc, &row)?;
    row[0] = SqlValue::Null;
    let holes = vec!["?"; row.len()].join(", ");
    let sql = format!("insert into '{}' values ({holes});", desc.name);
    conn.execute_with(&sql, &row)?;
    conn.last_insert_key()
}

/// Rewrites all non-key columns of the row whose key matches the
/// entity's. Returns the number of affected rows; updating an absent key
/// affects zero rows and is not an error. The description carries no
/// column names, so they are read from the live schema.
pub fn update_entity<T>(conn: &Connection, desc: &EntityDescription<T>, entity: &T) -> DbResult<usize> {
    let mut row = (desc.to_row)(entity);
    check_row_shape(desc, &row)?;
    let columns = conn.table_columns(&desc.name)?;
    if columns.len() != row.len() {
        return Err(DbError::conversion(format!(
            "table `{}` has {} columns but the description encodes {}",
            desc.name,
            columns.len(),
            row.len()
        )));
    }
    let assignments: Vec<String> = columns
        .iter()
        .skip(1)
        .map(|c| format!("\"{c}\" = ?"))
        .collect();
    let sql = format!(
        "update '{}' set {} where \"Key\" == ?;",
        desc.name,
        assignments.join(", ")
    );
    let key = row.remove(0);
    row.push(key);
    conn.execute_with(&sql, &row)
}

/// Deletes the row with the given key. Zero affected rows is success.
pub fn delete_entity<T>(conn: &Connection, desc: &EntityDescription<T>, key: i64) -> DbResult<usize> {
    let sql = format!("delete from '{}' where \"Key\" == ?;", desc.name);
    conn.execute_with(&sql, &[SqlValue::Int(key)])
}

fn check_row_shape<T>(desc: &EntityDescription<T>, row: &[SqlValue]) -> DbResult<()> {
    if row.len() != desc.column_types.len() {
        return Err(DbError::conversion(format!(
            "entity `{}` encoded to {} values but has {} columns",
            desc.name,
            row.len(),
            desc.column_types.len()
        )));
    }
    for (i, (value, ty)) in row.iter().zip(&desc.column_types).enumerate() {
        if let Some(t) = value.type_of() {
            if t != *ty {
                return Err(DbError::conversion(format!(
                    "entity `{}` column {i} encoded as {t}, expected {ty}",
                    desc.name
                )));
            }
        }
    }
    Ok(())
}
