//! Composable database actions.
//!
//! A [`DbAction`] is a deferred computation against an open connection
//! yielding a [`DbResult`]. Actions sequence with [`DbAction::and_then`];
//! a failing step short-circuits everything after it. [`run_with_db`]
//! opens a connection, runs one action, and closes the connection whether
//! or not the action succeeded; a [`Session`] keeps the connection open
//! across several actions instead.

use std::path::Path;

use super::conn::Connection;
use super::error::{DbError, DbResult};

type Thunk<T> = Box<dyn FnOnce(&mut Connection) -> DbResult<T>>;

pub struct DbAction<T> {
    run: Thunk<T>,
}

impl<T: 'static> DbAction<T> {
    /// Wraps a raw computation over the connection.
    pub fn new(f: impl FnOnce(&mut Connection) -> DbResult<T> + 'static) -> Self {
        DbAction { run: Box::new(f) }
    }

    /// An action that succeeds with `value` without touching the
    /// database.
    pub fn pure(value: T) -> Self {
        DbAction::new(move |_| Ok(value))
    }

    /// An action that fails immediately.
    pub fn fail(error: DbError) -> Self {
        DbAction::new(move |_| Err(error))
    }

    /// Runs the action against an open connection.
    pub fn run(self, conn: &mut Connection) -> DbResult<T> {
        (self.run)(conn)
    }

    /// Sequences a dependent action. If `self` fails, `f` never runs.
    pub fn and_then<U: 'static>(self, f: impl FnOnce(T) -> DbAction<U> + 'static) -> DbAction<U> {
        DbAction::new(move |conn| {
            let value = (self.run)(conn)?;
            f(value).run(conn)
        })
    }

    /// Sequences an independent action, keeping the second result.
    pub fn then<U: 'static>(self, next: DbAction<U>) -> DbAction<U> {
        self.and_then(move |_| next)
    }

    pub fn map<U: 'static>(self, f: impl FnOnce(T) -> U + 'static) -> DbAction<U> {
        DbAction::new(move |conn| (self.run)(conn).map(f))
    }
}

/// Opens the database at `path`, runs the action, and closes the
/// connection again, on the failure path too.
pub fn run_with_db<T: 'static>(path: impl AsRef<Path>, action: DbAction<T>) -> DbResult<T> {
    let mut conn = Connection::connect(path)?;
    let result = action.run(&mut conn);
    conn.disconnect();
    result
}

/// A stored open connection for running several actions without
/// reconnecting.
pub struct Session {
    conn: Connection,
}

impl Session {
    pub fn open(path: impl AsRef<Path>) -> DbResult<Session> {
        Ok(Session {
            conn: Connection::connect(path)?,
        })
    }

    pub fn run<T: 'static>(&mut self, action: DbAction<T>) -> DbResult<T> {
        action.run(&mut self.conn)
    }

    pub fn connection(&mut self) -> &mut Connection {
        &mut self.conn
    }

    pub fn close(mut self) {
        self.conn.disconnect();
    }
}
