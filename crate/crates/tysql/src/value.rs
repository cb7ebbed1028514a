//! The typed value universe exchanged with the database.
//!
//! Every column of a compiled model carries one of the six [`SqlType`]s, and
//! every value crossing the database boundary is an [`SqlValue`]. SQLite has
//! no native `Bool`, `Char`, or `Date` storage classes, so the encodings are
//! fixed here and shared by the schema generator and the runtime marshalling:
//! `Bool` is INTEGER 0/1, `Date` is INTEGER epoch seconds, and `Char` is
//! single-character TEXT.

use std::fmt;

/// Type tags for columns, literals, and parameter slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SqlType {
    String,
    Int,
    Float,
    Char,
    Bool,
    Date,
}

impl SqlType {
    /// The name used in ER sources, info files, and error messages.
    pub fn name(self) -> &'static str {
        match self {
            SqlType::String => "String",
            SqlType::Int => "Int",
            SqlType::Float => "Float",
            SqlType::Char => "Char",
            SqlType::Bool => "Bool",
            SqlType::Date => "Date",
        }
    }

    /// The SQLite column type emitted in DDL.
    pub fn sqlite_type(self) -> &'static str {
        match self {
            SqlType::String | SqlType::Char => "TEXT",
            SqlType::Int | SqlType::Bool | SqlType::Date => "INTEGER",
            SqlType::Float => "REAL",
        }
    }

    /// Inverse of [`SqlType::name`].
    pub fn parse(name: &str) -> Option<SqlType> {
        Some(match name {
            "String" => SqlType::String,
            "Int" => SqlType::Int,
            "Float" => SqlType::Float,
            "Char" => SqlType::Char,
            "Bool" => SqlType::Bool,
            "Date" => SqlType::Date,
            _ => return None,
        })
    }

    pub const ALL: [SqlType; 6] = [
        SqlType::String,
        SqlType::Int,
        SqlType::Float,
        SqlType::Char,
        SqlType::Bool,
        SqlType::Date,
    ];
}

impl fmt::Display for SqlType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A typed database value. `Null` carries no type of its own; whether it is
/// admissible in a given slot depends on the slot's nullability.
#[derive(Debug, Clone, PartialEq)]
pub enum SqlValue {
    String(String),
    Int(i64),
    Float(f64),
    Char(char),
    Bool(bool),
    /// Seconds since the Unix epoch.
    Date(i64),
    Null,
}

impl SqlValue {
    /// The type tag of this value, or `None` for `Null`.
    pub fn type_of(&self) -> Option<SqlType> {
        match self {
            SqlValue::String(_) => Some(SqlType::String),
            SqlValue::Int(_) => Some(SqlType::Int),
            SqlValue::Float(_) => Some(SqlType::Float),
            SqlValue::Char(_) => Some(SqlType::Char),
            SqlValue::Bool(_) => Some(SqlType::Bool),
            SqlValue::Date(_) => Some(SqlType::Date),
            SqlValue::Null => None,
        }
    }

    pub fn is_null(&self) -> bool {
        matches!(self, SqlValue::Null)
    }

    /// True if this value can fill a slot of type `ty` with the given
    /// nullability.
    pub fn fits(&self, ty: SqlType, nullable: bool) -> bool {
        match self.type_of() {
            Some(t) => t == ty,
            None => nullable,
        }
    }
}

impl fmt::Display for SqlValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SqlValue::String(s) => f.write_str(s),
            SqlValue::Int(i) => write!(f, "{i}"),
            // Debug formatting keeps a trailing ".0" on whole floats.
            SqlValue::Float(x) => write!(f, "{x:?}"),
            SqlValue::Char(c) => write!(f, "{c}"),
            SqlValue::Bool(b) => write!(f, "{b}"),
            SqlValue::Date(d) => write!(f, "{d}"),
            SqlValue::Null => f.write_str("null"),
        }
    }
}
