//! ER models: parsing, validation, relational transformation, DDL, and the
//! info-file knowledge base.

pub mod info;
pub mod model;
pub mod parse;
pub mod schema;

pub use info::{
    build_parser_info, info_from_str, info_to_string, read_info, write_info, InfoError,
    ParserInfo, RelLink, RelationInfo,
};
pub use model::{
    classify_relationship, Attribute, Cardinality, Entity, ErModel, ErdError, ErdPos, KeyStatus,
    RelEnd, RelKind, Relationship,
};
pub use parse::parse_erd;
pub use schema::{emit_ddl, fk_column_name, transform, ColumnDef, RelationalSchema, TableDef, KEY_COLUMN};
