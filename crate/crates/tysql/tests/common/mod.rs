//! Shared test support: fixture models and seeded databases, the
//! independent in-memory select evaluator, and random generators.

#![allow(dead_code)]

pub mod fixtures;
pub mod gen;
pub mod oracle;
