//! The database runtime: connections, composable actions, typed entity
//! access, and plan execution over SQLite.

pub mod action;
pub mod conn;
pub mod entity;
pub mod error;
pub mod exec;

pub use action::{run_with_db, DbAction, Session};
pub use conn::Connection;
pub use entity::{delete_entity, get_entries, insert_entity, update_entity, EntityDescription};
pub use error::{DbError, DbErrorKind, DbResult};
pub use exec::{run_plan, PlanOutput};
