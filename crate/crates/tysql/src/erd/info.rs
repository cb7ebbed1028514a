//! The compiler's knowledge base and its on-disk format.
//!
//! A [`ParserInfo`] is everything the SQL analysis phases need to know
//! about a compiled model: which tables and columns exist, their types and
//! nullability, and how each relationship is realized (foreign key or join
//! table). It is produced together with the database by `erd-compile` and
//! stored in a line-oriented text file so it can be diffed and golden
//! tested:
//!
//! ```text
//! tysql-info 1
//! model Uni
//! db /path/to/Uni.db
//! relation has_a Student Result one-to-many fk Result StudentTakingKey
//! relation Participation Student Lecture many-to-many join Participation StudentParticipationKey LectureParticipationKey
//! table Student Key Name First MatNum Email Age
//! column Student.Key Int notnull
//! column Student.Name String notnull
//! ...
//! ```
//!
//! `relation` and `table` sections are sorted by name; `column` lines
//! follow their table in declaration order. The `db` value is the rest of
//! the line, so paths may contain spaces.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io;
use std::path::Path;

use crate::value::SqlType;

use super::model::{classify_relationship, ErModel, RelKind};
use super::schema::{fk_column_name, fk_placement, RelationalSchema};

const HEADER: &str = "tysql-info 1";

/// How a relationship maps onto tables and columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RelLink {
    /// `table.column` references the other endpoint's `Key`.
    ForeignKey { table: String, column: String },
    /// A join table whose two columns reference entity A and entity B.
    JoinTable {
        table: String,
        column_a: String,
        column_b: String,
    },
}

/// Everything known about one relationship.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationInfo {
    pub entity_a: String,
    pub entity_b: String,
    pub kind: RelKind,
    pub link: RelLink,
}

/// The knowledge base consumed by the SQL compiler.
#[derive(Debug, Clone, PartialEq)]
pub struct ParserInfo {
    /// Path of the SQLite database this model was compiled into.
    pub db_path: String,
    pub model_name: String,
    pub relation_types: BTreeMap<String, RelationInfo>,
    /// Qualified `Table.Column` name to nullability.
    pub nullable_flags: BTreeMap<String, bool>,
    /// Table name to its column names in declaration order.
    pub attribute_lists: BTreeMap<String, Vec<String>>,
    /// Qualified `Table.Column` name to column type.
    pub attribute_types: BTreeMap<String, SqlType>,
}

impl ParserInfo {
    pub fn has_table(&self, table: &str) -> bool {
        self.attribute_lists.contains_key(table)
    }

    pub fn columns_of(&self, table: &str) -> Option<&[String]> {
        self.attribute_lists.get(table).map(|v| v.as_slice())
    }

    pub fn has_column(&self, table: &str, column: &str) -> bool {
        self.columns_of(table)
            .is_some_and(|cols| cols.iter().any(|c| c == column))
    }

    pub fn column_type(&self, table: &str, column: &str) -> Option<SqlType> {
        self.attribute_types.get(&qualify(table, column)).copied()
    }

    pub fn column_nullable(&self, table: &str, column: &str) -> Option<bool> {
        self.nullable_flags.get(&qualify(table, column)).copied()
    }

    pub fn relation(&self, name: &str) -> Option<&RelationInfo> {
        self.relation_types.get(name)
    }
}

pub(crate) fn qualify(table: &str, column: &str) -> String {
    format!("{table}.{column}")
}

/// Builds the knowledge base for a model and its transformed schema.
/// `schema` must be `transform(model)`.
pub fn build_parser_info(
    model: &ErModel,
    schema: &RelationalSchema,
    db_path: impl Into<String>,
) -> ParserInfo {
    let mut attribute_lists = BTreeMap::new();
    let mut attribute_types = BTreeMap::new();
    let mut nullable_flags = BTreeMap::new();
    for table in &schema.tables {
        let columns: Vec<String> = table.columns.iter().map(|c| c.name.clone()).collect();
        attribute_lists.insert(table.name.clone(), columns);
        for col in &table.columns {
            let qualified = qualify(&table.name, &col.name);
            attribute_types.insert(qualified.clone(), col.sql_type);
            nullable_flags.insert(qualified, !col.not_null);
        }
    }

    let mut relation_types = BTreeMap::new();
    for rel in &model.relationships {
        let kind = classify_relationship(rel);
        let link = match fk_placement(rel) {
            Some((holder, referenced, _)) => RelLink::ForeignKey {
                table: holder,
                column: fk_column_name(&referenced, &rel.role),
            },
            None => RelLink::JoinTable {
                table: rel.name.clone(),
                column_a: fk_column_name(&rel.end_a.entity, &rel.role),
                column_b: fk_column_name(&rel.end_b.entity, &rel.role),
            },
        };
        relation_types.insert(
            rel.name.clone(),
            RelationInfo {
                entity_a: rel.end_a.entity.clone(),
                entity_b: rel.end_b.entity.clone(),
                kind,
                link,
            },
        );
    }

    ParserInfo {
        db_path: db_path.into(),
        model_name: model.name.clone(),
        relation_types,
        nullable_flags,
        attribute_lists,
        attribute_types,
    }
}

/// Error reading an info file: an I/O failure or a malformed line.
#[derive(Debug)]
pub enum InfoError {
    Io(io::Error),
    Malformed { line: u32, message: String },
}

impl InfoError {
    fn at(line: u32, message: impl Into<String>) -> Self {
        InfoError::Malformed {
            line,
            message: message.into(),
        }
    }
}

impl fmt::Display for InfoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InfoError::Io(e) => write!(f, "{e}"),
            InfoError::Malformed { line, message } => {
                write!(f, "malformed info file at line {line}: {message}")
            }
        }
    }
}

impl std::error::Error for InfoError {}

impl From<io::Error> for InfoError {
    fn from(e: io::Error) -> Self {
        InfoError::Io(e)
    }
}

/// Serializes the knowledge base to its canonical text form.
pub fn info_to_string(info: &ParserInfo) -> String {
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    out.push_str(&format!("model {}\n", info.model_name));
    out.push_str(&format!("db {}\n", info.db_path));
    for (name, rel) in &info.relation_types {
        let link = match &rel.link {
            RelLink::ForeignKey { table, column } => format!("fk {table} {column}"),
            RelLink::JoinTable {
                table,
                column_a,
                column_b,
            } => format!("join {table} {column_a} {column_b}"),
        };
        out.push_str(&format!(
            "relation {name} {} {} {} {link}\n",
            rel.entity_a, rel.entity_b, rel.kind
        ));
    }
    for (table, columns) in &info.attribute_lists {
        out.push_str(&format!("table {table} {}\n", columns.join(" ")));
        for column in columns {
            let qualified = qualify(table, column);
            let ty = info.attribute_types[&qualified];
            let null = if info.nullable_flags[&qualified] {
                "null"
            } else {
                "notnull"
            };
            out.push_str(&format!("column {qualified} {ty} {null}\n"));
        }
    }
    out
}

/// Parses the canonical text form back into a [`ParserInfo`].
pub fn info_from_str(text: &str) -> Result<ParserInfo, InfoError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i as u32 + 1, l));
    let (_, header) = lines.next().ok_or_else(|| InfoError::at(1, "empty file"))?;
    if header != HEADER {
        return Err(InfoError::at(1, format!("expected header `{HEADER}`")));
    }

    let mut model_name = None;
    let mut db_path = None;
    let mut relation_types = BTreeMap::new();
    let mut attribute_lists: BTreeMap<String, Vec<String>> = BTreeMap::new();
    let mut attribute_types = BTreeMap::new();
    let mut nullable_flags = BTreeMap::new();

    for (line_no, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let (directive, rest) = line.split_once(' ').unwrap_or((line, ""));
        match directive {
            "model" => model_name = Some(rest.trim().to_string()),
            "db" => db_path = Some(rest.to_string()),
            "relation" => {
                let fields: Vec<&str> = rest.split_whitespace().collect();
                if fields.len() < 5 {
                    return Err(InfoError::at(line_no, "incomplete relation line"));
                }
                let kind = RelKind::parse(fields[3])
                    .ok_or_else(|| InfoError::at(line_no, format!("unknown relation kind `{}`", fields[3])))?;
                let link = match (fields[4], &fields[5..]) {
                    ("fk", [table, column]) => RelLink::ForeignKey {
                        table: table.to_string(),
                        column: column.to_string(),
                    },
                    ("join", [table, ca, cb]) => RelLink::JoinTable {
                        table: table.to_string(),
                        column_a: ca.to_string(),
                        column_b: cb.to_string(),
                    },
                    _ => return Err(InfoError::at(line_no, "malformed relation link")),
                };
                relation_types.insert(
                    fields[0].to_string(),
                    RelationInfo {
                        entity_a: fields[1].to_string(),
                        entity_b: fields[2].to_string(),
                        kind,
                        link,
                    },
                );
            }
            "table" => {
                let mut fields = rest.split_whitespace();
                let table = fields
                    .next()
                    .ok_or_else(|| InfoError::at(line_no, "missing table name"))?;
                let columns: Vec<String> = fields.map(str::to_string).collect();
                if columns.is_empty() {
                    return Err(InfoError::at(line_no, "table has no columns"));
                }
                attribute_lists.insert(table.to_string(), columns);
            }
            "column" => {
                let fields: Vec<&str> = rest.split_whitespace().collect();
                let [qualified, ty, null] = fields[..] else {
                    return Err(InfoError::at(line_no, "malformed column line"));
                };
                if !qualified.contains('.') {
                    return Err(InfoError::at(line_no, "column name is not qualified"));
                }
                let ty = SqlType::parse(ty)
                    .ok_or_else(|| InfoError::at(line_no, format!("unknown type `{ty}`")))?;
                let nullable = match null {
                    "null" => true,
                    "notnull" => false,
                    _ => return Err(InfoError::at(line_no, format!("expected null/notnull, found `{null}`"))),
                };
                attribute_types.insert(qualified.to_string(), ty);
                nullable_flags.insert(qualified.to_string(), nullable);
            }
            _ => return Err(InfoError::at(line_no, format!("unknown directive `{directive}`"))),
        }
    }

    let info = ParserInfo {
        db_path: db_path.ok_or_else(|| InfoError::at(1, "missing db line"))?,
        model_name: model_name.ok_or_else(|| InfoError::at(1, "missing model line"))?,
        relation_types,
        nullable_flags,
        attribute_lists,
        attribute_types,
    };
    for (table, columns) in &info.attribute_lists {
        for column in columns {
            let qualified = qualify(table, column);
            if !info.attribute_types.contains_key(&qualified)
                || !info.nullable_flags.contains_key(&qualified)
            {
                return Err(InfoError::at(1, format!("no column line for `{qualified}`")));
            }
        }
    }
    Ok(info)
}

/// Writes the info file; the parent directory must exist.
pub fn write_info(info: &ParserInfo, path: impl AsRef<Path>) -> io::Result<()> {
    fs::write(path, info_to_string(info))
}

/// Reads an info file written by [`write_info`].
pub fn read_info(path: impl AsRef<Path>) -> Result<ParserInfo, InfoError> {
    info_from_str(&fs::read_to_string(path)?)
}
