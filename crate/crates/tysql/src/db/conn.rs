//! SQLite connections and typed statement execution.
//!
//! Values cross the boundary as [`SqlValue`]s: `Bool` travels as INTEGER
//! 0/1, `Date` as INTEGER epoch seconds, `Char` as one-character TEXT.
//! Result decoding is strict: a column value must match the requested
//! [`SqlType`] exactly (nulls pass through as [`SqlValue::Null`]).

use std::path::Path;

use rusqlite::types::{Value as SqliteValue, ValueRef};

use crate::value::{SqlType, SqlValue};

use super::error::{DbError, DbErrorKind, DbResult};

/// An open database connection with foreign-key enforcement switched on.
/// A connection is confined to one thread of control at a time.
#[derive(Debug)]
pub struct Connection {
    inner: Option<rusqlite::Connection>,
}

impl Connection {
    /// Opens (creating if absent) the SQLite database at `path` and
    /// enables foreign-key enforcement.
    pub fn connect(path: impl AsRef<Path>) -> DbResult<Connection> {
        let conn = rusqlite::Connection::open(path.as_ref()).map_err(|e| {
            DbError::new(DbErrorKind::ConnectionFailed, e.to_string())
        })?;
        Self::init(conn)
    }

    /// An in-memory database, mostly for tests.
    pub fn open_in_memory() -> DbResult<Connection> {
        let conn = rusqlite::Connection::open_in_memory().map_err(|e| {
            DbError::new(DbErrorKind::ConnectionFailed, e.to_string())
        })?;
        Self::init(conn)
    }

    fn init(conn: rusqlite::Connection) -> DbResult<Connection> {
        conn.execute_batch("PRAGMA foreign_keys = ON;")
            .map_err(|e| DbError::new(DbErrorKind::ConnectionFailed, e.to_string()))?;
        Ok(Connection { inner: Some(conn) })
    }

    /// Closes the connection. Any later use fails with a query error.
    pub fn disconnect(&mut self) {
        self.inner = None;
    }

    pub fn is_open(&self) -> bool {
        self.inner.is_some()
    }

    fn handle(&self) -> DbResult<&rusqlite::Connection> {
        self.inner
            .as_ref()
            .ok_or_else(|| DbError::query("connection is closed"))
    }

    /// Runs a batch of semicolon-separated statements, e.g. emitted DDL.
    pub fn execute_batch(&self, sql: &str) -> DbResult<()> {
        Ok(self.handle()?.execute_batch(sql)?)
    }

    /// Executes a query with `?` holes, typed values for the holes, and
    /// the expected column types of the result. Hole and value counts
    /// must agree; this is checked before anything reaches the engine.
    pub fn select_typed(
        &self,
        sql: &str,
        values: &[SqlValue],
        result_types: &[SqlType],
    ) -> DbResult<Vec<Vec<SqlValue>>> {
        let conn = self.handle()?;
        let mut stmt = conn.prepare(sql)?;
        check_hole_count(stmt.parameter_count(), values.len())?;
        let params = rusqlite::params_from_iter(values.iter().map(to_sqlite));
        let mut rows = stmt.query(params)?;
        let mut out = Vec::new();
        while let Some(row) = rows.next()? {
            let mut decoded = Vec::with_capacity(result_types.len());
            for (i, ty) in result_types.iter().enumerate() {
                decoded.push(decode(row.get_ref(i)?, *ty, i)?);
            }
            out.push(decoded);
        }
        Ok(out)
    }

    /// Executes a non-query statement with `?` holes, returning the
    /// number of affected rows.
    pub fn execute_with(&self, sql: &str, values: &[SqlValue]) -> DbResult<usize> {
        let conn = self.handle()?;
        let mut stmt = conn.prepare(sql)?;
        check_hole_count(stmt.parameter_count(), values.len())?;
        let params = rusqlite::params_from_iter(values.iter().map(to_sqlite));
        Ok(stmt.execute(params)?)
    }

    /// The key assigned by the most recent insert on this connection.
    pub fn last_insert_key(&self) -> DbResult<i64> {
        Ok(self.handle()?.last_insert_rowid())
    }

    pub fn begin(&self) -> DbResult<()> {
        self.execute_batch("BEGIN;")
    }

    pub fn commit(&self) -> DbResult<()> {
        self.execute_batch("COMMIT;")
    }

    pub fn rollback(&self) -> DbResult<()> {
        self.execute_batch("ROLLBACK;")
    }

    /// Names of all tables in the database, sorted. Useful for integrity
    /// checks.
    pub fn table_names(&self) -> DbResult<Vec<String>> {
        let conn = self.handle()?;
        let mut stmt =
            conn.prepare("select name from sqlite_master where type = 'table' order by name")?;
        let names = stmt
            .query_map([], |row| row.get::<_, String>(0))?
            .collect::<Result<Vec<_>, _>>()?;
        Ok(names)
    }

    /// Column names of a table in declaration order.
    pub fn table_columns(&self, table: &str) -> DbResult<Vec<String>> {
        let conn = self.handle()?;
        let mut stmt = conn.prepare(&format!("PRAGMA table_info(\"{table}\")"))?;
        let names = stmt
            .query_map([], |row| row.get::<_, String>(1))?
            .collect::<Result<Vec<_>, _>>()?;
        if names.is_empty() {
            return Err(DbError::query(format!("no such table `{table}`")));
        }
        Ok(names)
    }
}

fn check_hole_count(holes: usize, values: usize) -> DbResult<()> {
    if holes != values {
        return Err(DbError::query(format!(
            "statement has {holes} holes but {values} values were supplied"
        )));
    }
    Ok(())
}

pub(crate) fn to_sqlite(v: &SqlValue) -> SqliteValue {
    match v {
        SqlValue::String(s) => SqliteValue::Text(s.clone()),
        SqlValue::Int(i) => SqliteValue::Integer(*i),
        SqlValue::Float(x) => SqliteValue::Real(*x),
        SqlValue::Char(c) => SqliteValue::Text(c.to_string()),
        SqlValue::Bool(b) => SqliteValue::Integer(i64::from(*b)),
        SqlValue::Date(d) => SqliteValue::Integer(*d),
        SqlValue::Null => SqliteValue::Null,
    }
}

fn decode(value: ValueRef<'_>, ty: SqlType, index: usize) -> DbResult<SqlValue> {
    let mismatch = |found: &str| {
        DbError::conversion(format!(
            "column {index}: expected {ty}, found {found} value"
        ))
    };
    Ok(match (value, ty) {
        (ValueRef::Null, _) => SqlValue::Null,
        (ValueRef::Integer(i), SqlType::Int) => SqlValue::Int(i),
        (ValueRef::Integer(0), SqlType::Bool) => SqlValue::Bool(false),
        (ValueRef::Integer(1), SqlType::Bool) => SqlValue::Bool(true),
        (ValueRef::Integer(_), SqlType::Bool) => return Err(mismatch("non-boolean INTEGER")),
        (ValueRef::Integer(i), SqlType::Date) => SqlValue::Date(i),
        (ValueRef::Real(x), SqlType::Float) => SqlValue::Float(x),
        (ValueRef::Text(bytes), SqlType::String) => SqlValue::String(
            std::str::from_utf8(bytes)
                .map_err(|_| mismatch("non-UTF-8 TEXT"))?
                .to_string(),
        ),
        (ValueRef::Text(bytes), SqlType::Char) => {
            let s = std::str::from_utf8(bytes).map_err(|_| mismatch("non-UTF-8 TEXT"))?;
            let mut chars = s.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) => SqlValue::Char(c),
                _ => return Err(mismatch("multi-character TEXT")),
            }
        }
        (ValueRef::Integer(_), _) => return Err(mismatch("INTEGER")),
        (ValueRef::Real(_), _) => return Err(mismatch("REAL")),
        (ValueRef::Text(_), _) => return Err(mismatch("TEXT")),
        (ValueRef::Blob(_), _) => return Err(mismatch("BLOB")),
    })
}
