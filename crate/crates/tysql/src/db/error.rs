//! Database error classification.

use std::fmt;

/// What went wrong at the database boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DbErrorKind {
    /// The database file could not be opened or is not a database.
    ConnectionFailed,
    /// The engine rejected the statement or the connection is closed.
    QueryFailed,
    /// Another connection holds a conflicting lock.
    LockedDb,
    /// A value did not fit the requested type, or a binding was missing
    /// or ill-typed. Raised before the database is touched when possible.
    ConversionFailed,
    /// A NOT NULL, UNIQUE, or FOREIGN KEY constraint fired.
    ConstraintViolated,
}

impl DbErrorKind {
    pub fn name(self) -> &'static str {
        match self {
            DbErrorKind::ConnectionFailed => "connection failed",
            DbErrorKind::QueryFailed => "query failed",
            DbErrorKind::LockedDb => "database locked",
            DbErrorKind::ConversionFailed => "conversion failed",
            DbErrorKind::ConstraintViolated => "constraint violated",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DbError {
    pub kind: DbErrorKind,
    pub message: String,
}

impl DbError {
    pub fn new(kind: DbErrorKind, message: impl Into<String>) -> Self {
        DbError {
            kind,
            message: message.into(),
        }
    }

    pub fn conversion(message: impl Into<String>) -> Self {
        DbError::new(DbErrorKind::ConversionFailed, message)
    }

    pub fn query(message: impl Into<String>) -> Self {
        DbError::new(DbErrorKind::QueryFailed, message)
    }
}

impl fmt::Display for DbError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind.name(), self.message)
    }
}

impl std::error::Error for DbError {}

/// Result of a database action.
pub type DbResult<T> = Result<T, DbError>;

impl From<rusqlite::Error> for DbError {
    fn from(e: rusqlite::Error) -> Self {
        use rusqlite::ffi::ErrorCode;
        let kind = match &e {
            rusqlite::Error::SqliteFailure(fe, _) => match fe.code {
                ErrorCode::DatabaseBusy | ErrorCode::DatabaseLocked => DbErrorKind::LockedDb,
                ErrorCode::ConstraintViolation => DbErrorKind::ConstraintViolated,
                ErrorCode::CannotOpen | ErrorCode::NotADatabase => DbErrorKind::ConnectionFailed,
                _ => DbErrorKind::QueryFailed,
            },
            rusqlite::Error::FromSqlConversionFailure(..)
            | rusqlite::Error::IntegralValueOutOfRange(..)
            | rusqlite::Error::InvalidColumnType(..) => DbErrorKind::ConversionFailed,
            _ => DbErrorKind::QueryFailed,
        };
        DbError::new(kind, e.to_string())
    }
}
