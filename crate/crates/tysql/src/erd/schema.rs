//! Transformation of a validated ER model into a relational schema, and
//! deterministic DDL emission.
//!
//! Every table gets a surrogate integer primary key named `Key`. A 1:1 or
//! 1:n relationship adds one foreign-key column on the side whose maximum
//! participation is one (for 1:1, on the endpoint declared second); an n:m
//! relationship becomes a join table named after the relationship with two
//! non-null foreign keys. Foreign-key columns are named
//! `<ReferencedEntity><Role>Key`, e.g. `StudentTakingKey` for a
//! relationship with role `Taking` that references `Student`.

use crate::value::SqlType;

use super::model::{classify_relationship, ErModel, KeyStatus, RelKind, Relationship};

/// Name of the surrogate primary-key column present on every table.
pub const KEY_COLUMN: &str = "Key";

/// The foreign-key column name for a relationship role referencing an
/// entity. This single rule covers both entity tables and join tables.
pub fn fk_column_name(referenced_entity: &str, role: &str) -> String {
    format!("{referenced_entity}{role}{KEY_COLUMN}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct ColumnDef {
    pub name: String,
    pub sql_type: SqlType,
    pub not_null: bool,
    pub primary_key: bool,
    pub unique: bool,
    /// `(table, column)` this column references, if it is a foreign key.
    pub foreign_key: Option<(String, String)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableDef {
    pub name: String,
    pub columns: Vec<ColumnDef>,
}

impl TableDef {
    pub fn column(&self, name: &str) -> Option<&ColumnDef> {
        self.columns.iter().find(|c| c.name == name)
    }

    fn new(name: &str) -> TableDef {
        TableDef {
            name: name.to_string(),
            columns: vec![ColumnDef {
                name: KEY_COLUMN.to_string(),
                sql_type: SqlType::Int,
                not_null: true,
                primary_key: true,
                unique: false,
                foreign_key: None,
            }],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RelationalSchema {
    pub tables: Vec<TableDef>,
}

impl RelationalSchema {
    pub fn table(&self, name: &str) -> Option<&TableDef> {
        self.tables.iter().find(|t| t.name == name)
    }
}

/// Which table holds the foreign key of a 1:1 or 1:n relationship, and
/// which entity it references. For n:m relationships there is no holder.
pub(crate) fn fk_placement(rel: &Relationship) -> Option<(String, String, bool)> {
    let (holder, referenced) = match classify_relationship(rel) {
        RelKind::ManyToMany => return None,
        RelKind::OneToOne => (&rel.end_b, &rel.end_a),
        RelKind::OneToMany => {
            if rel.end_a.card.at_most_one() {
                (&rel.end_a, &rel.end_b)
            } else {
                (&rel.end_b, &rel.end_a)
            }
        }
    };
    Some((
        holder.entity.clone(),
        referenced.entity.clone(),
        holder.card.mandatory(),
    ))
}

/// Maps a validated model to its relational schema. Total and
/// deterministic: entity tables in declaration order, then join tables in
/// relationship order; foreign-key columns are appended in relationship
/// order.
pub fn transform(model: &ErModel) -> RelationalSchema {
    let mut tables: Vec<TableDef> = model
        .entities
        .iter()
        .map(|entity| {
            let mut table = TableDef::new(&entity.name);
            for attr in &entity.attributes {
                table.columns.push(ColumnDef {
                    name: attr.name.clone(),
                    sql_type: attr.domain,
                    not_null: !attr.nullable,
                    primary_key: false,
                    unique: attr.key != KeyStatus::NoKey,
                    foreign_key: None,
                });
            }
            table
        })
        .collect();

    let mut join_tables = Vec::new();
    for rel in &model.relationships {
        match fk_placement(rel) {
            Some((holder, referenced, mandatory)) => {
                let unique = classify_relationship(rel) == RelKind::OneToOne;
                let column = ColumnDef {
                    name: fk_column_name(&referenced, &rel.role),
                    sql_type: SqlType::Int,
                    not_null: mandatory,
                    primary_key: false,
                    unique,
                    foreign_key: Some((referenced, KEY_COLUMN.to_string())),
                };
                tables
                    .iter_mut()
                    .find(|t| t.name == holder)
                    .expect("validated relationship endpoint")
                    .columns
                    .push(column);
            }
            None => {
                let mut table = TableDef::new(&rel.name);
                for end in [&rel.end_a, &rel.end_b] {
                    table.columns.push(ColumnDef {
                        name: fk_column_name(&end.entity, &rel.role),
                        sql_type: SqlType::Int,
                        not_null: true,
                        primary_key: false,
                        unique: false,
                        foreign_key: Some((end.entity.clone(), KEY_COLUMN.to_string())),
                    });
                }
                join_tables.push(table);
            }
        }
    }
    tables.extend(join_tables);
    RelationalSchema { tables }
}

/// Renders `CREATE TABLE` statements for the schema. Re-emitting the same
/// schema yields byte-identical text; an empty schema yields empty text.
pub fn emit_ddl(schema: &RelationalSchema) -> String {
    let mut out = String::new();
    for (i, table) in schema.tables.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&format!("CREATE TABLE \"{}\" (\n", table.name));
        for (j, col) in table.columns.iter().enumerate() {
            out.push_str(&format!("  \"{}\" {}", col.name, col.sql_type.sqlite_type()));
            if col.primary_key {
                out.push_str(" PRIMARY KEY");
            } else {
                if col.not_null {
                    out.push_str(" NOT NULL");
                }
                if col.unique {
                    out.push_str(" UNIQUE");
                }
            }
            if let Some((table, column)) = &col.foreign_key {
                out.push_str(&format!(" REFERENCES \"{table}\" (\"{column}\")"));
            }
            if j + 1 < table.columns.len() {
                out.push(',');
            }
            out.push('\n');
        }
        out.push_str(");\n");
    }
    out
}
