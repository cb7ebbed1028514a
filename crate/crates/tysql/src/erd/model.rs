//! Entity-relationship model types and validation.

use std::collections::BTreeSet;
use std::fmt;

use crate::value::SqlType;

/// A source position in an ER model file, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ErdPos {
    pub line: u32,
    pub column: u32,
}

impl ErdPos {
    pub fn new(line: u32, column: u32) -> Self {
        ErdPos { line, column }
    }
}

/// A parse or validation error with its position in the ER source.
#[derive(Debug, Clone, PartialEq)]
pub struct ErdError {
    pub message: String,
    pub pos: ErdPos,
}

impl ErdError {
    pub fn new(message: impl Into<String>, pos: ErdPos) -> Self {
        ErdError {
            message: message.into(),
            pos,
        }
    }
}

impl fmt::Display for ErdError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.pos.line, self.pos.column, self.message)
    }
}

impl std::error::Error for ErdError {}

/// Key property of an attribute. Entities always get a surrogate integer
/// primary key named `Key`, so a `PrimaryKey` attribute is realized as a
/// unique, non-null column rather than as the table's primary key.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KeyStatus {
    PrimaryKey,
    Unique,
    NoKey,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Attribute {
    pub name: String,
    pub domain: SqlType,
    pub key: KeyStatus,
    pub nullable: bool,
    pub pos: ErdPos,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Entity {
    pub name: String,
    pub attributes: Vec<Attribute>,
    pub pos: ErdPos,
}

impl Entity {
    pub fn attribute(&self, name: &str) -> Option<&Attribute> {
        self.attributes.iter().find(|a| a.name == name)
    }
}

/// Participation bounds of one relationship endpoint: how many relationship
/// instances each entity instance may appear in. `max == None` is unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cardinality {
    pub min: u32,
    pub max: Option<u32>,
}

impl Cardinality {
    pub fn new(min: u32, max: Option<u32>) -> Self {
        Cardinality { min, max }
    }

    /// True when an instance participates at most once.
    pub fn at_most_one(&self) -> bool {
        self.max == Some(1)
    }

    /// True when participation is mandatory.
    pub fn mandatory(&self) -> bool {
        self.min >= 1
    }
}

impl fmt::Display for Cardinality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.max {
            Some(max) => write!(f, "{}..{}", self.min, max),
            None => write!(f, "{}..*", self.min),
        }
    }
}

/// One end of a relationship: the entity it attaches to and its bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct RelEnd {
    pub entity: String,
    pub card: Cardinality,
    pub pos: ErdPos,
}

/// A named relationship between two entities.
///
/// The `role` names the link for foreign-key columns (see
/// [`fk_column_name`](crate::erd::schema::fk_column_name)); it defaults to
/// the relationship name.
#[derive(Debug, Clone, PartialEq)]
pub struct Relationship {
    pub name: String,
    pub role: String,
    pub end_a: RelEnd,
    pub end_b: RelEnd,
    pub pos: ErdPos,
}

/// How a relationship is realized in the relational schema.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelKind {
    OneToOne,
    OneToMany,
    ManyToMany,
}

impl RelKind {
    pub fn name(self) -> &'static str {
        match self {
            RelKind::OneToOne => "one-to-one",
            RelKind::OneToMany => "one-to-many",
            RelKind::ManyToMany => "many-to-many",
        }
    }

    pub fn parse(s: &str) -> Option<RelKind> {
        Some(match s {
            "one-to-one" => RelKind::OneToOne,
            "one-to-many" => RelKind::OneToMany,
            "many-to-many" => RelKind::ManyToMany,
            _ => return None,
        })
    }
}

impl fmt::Display for RelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Classifies a relationship from its two maxima: both 1 is 1:1, exactly one
/// 1 is 1:n, anything else is n:m.
pub fn classify_relationship(rel: &Relationship) -> RelKind {
    match (rel.end_a.card.at_most_one(), rel.end_b.card.at_most_one()) {
        (true, true) => RelKind::OneToOne,
        (true, false) | (false, true) => RelKind::OneToMany,
        (false, false) => RelKind::ManyToMany,
    }
}

/// A validated ER model: uniquely named entities and relationships over them.
#[derive(Debug, Clone, PartialEq)]
pub struct ErModel {
    pub name: String,
    pub entities: Vec<Entity>,
    pub relationships: Vec<Relationship>,
}

impl ErModel {
    pub fn entity(&self, name: &str) -> Option<&Entity> {
        self.entities.iter().find(|e| e.name == name)
    }

    pub fn relationship(&self, name: &str) -> Option<&Relationship> {
        self.relationships.iter().find(|r| r.name == name)
    }

    /// Checks every model invariant; returns all violations.
    pub fn validate(&self) -> Vec<ErdError> {
        let mut errors = Vec::new();

        let mut entity_names = BTreeSet::new();
        for entity in &self.entities {
            if !entity_names.insert(entity.name.as_str()) {
                errors.push(ErdError::new(
                    format!("duplicate entity name `{}`", entity.name),
                    entity.pos,
                ));
            }
            if entity.attributes.is_empty() {
                errors.push(ErdError::new(
                    format!("entity `{}` has no attributes", entity.name),
                    entity.pos,
                ));
            }
            let mut attr_names = BTreeSet::new();
            for attr in &entity.attributes {
                if !attr_names.insert(attr.name.as_str()) {
                    errors.push(ErdError::new(
                        format!(
                            "duplicate attribute `{}` in entity `{}`",
                            attr.name, entity.name
                        ),
                        attr.pos,
                    ));
                }
                if attr.name == crate::erd::schema::KEY_COLUMN {
                    errors.push(ErdError::new(
                        format!(
                            "attribute name `{}` is reserved for the surrogate key",
                            attr.name
                        ),
                        attr.pos,
                    ));
                }
                if attr.key == KeyStatus::PrimaryKey && attr.nullable {
                    errors.push(ErdError::new(
                        format!("key attribute `{}` must not be nullable", attr.name),
                        attr.pos,
                    ));
                }
            }
        }

        let mut rel_names = BTreeSet::new();
        for rel in &self.relationships {
            if !rel_names.insert(rel.name.as_str()) {
                errors.push(ErdError::new(
                    format!("duplicate relationship name `{}`", rel.name),
                    rel.pos,
                ));
            }
            if entity_names.contains(rel.name.as_str()) {
                errors.push(ErdError::new(
                    format!(
                        "relationship name `{}` collides with an entity name",
                        rel.name
                    ),
                    rel.pos,
                ));
            }
            for end in [&rel.end_a, &rel.end_b] {
                if self.entity(&end.entity).is_none() {
                    errors.push(ErdError::new(
                        format!("unknown entity `{}` in relationship `{}`", end.entity, rel.name),
                        end.pos,
                    ));
                }
                if let Some(max) = end.card.max {
                    if max == 0 {
                        errors.push(ErdError::new(
                            format!("cardinality upper bound must be positive in `{}`", rel.name),
                            end.pos,
                        ));
                    } else if end.card.min > max {
                        errors.push(ErdError::new(
                            format!(
                                "cardinality lower bound {} exceeds upper bound {} in `{}`",
                                end.card.min, max, rel.name
                            ),
                            end.pos,
                        ));
                    }
                }
            }
            if rel.end_a.entity == rel.end_b.entity {
                errors.push(ErdError::new(
                    format!(
                        "relationship `{}` relates entity `{}` to itself; self-relationships are not supported",
                        rel.name, rel.end_a.entity
                    ),
                    rel.pos,
                ));
            }
        }

        // Foreign-key columns must not collide with declared attributes or
        // with each other on the entity that receives them.
        let mut added: BTreeSet<(String, String)> = BTreeSet::new();
        for rel in &self.relationships {
            let (holder, referenced) = match classify_relationship(rel) {
                RelKind::ManyToMany => continue,
                RelKind::OneToOne => (&rel.end_b, &rel.end_a),
                RelKind::OneToMany => {
                    if rel.end_a.card.at_most_one() {
                        (&rel.end_a, &rel.end_b)
                    } else {
                        (&rel.end_b, &rel.end_a)
                    }
                }
            };
            let column = crate::erd::schema::fk_column_name(&referenced.entity, &rel.role);
            let clash = self
                .entity(&holder.entity)
                .is_some_and(|e| e.attribute(&column).is_some());
            if clash || !added.insert((holder.entity.clone(), column.clone())) {
                errors.push(ErdError::new(
                    format!(
                        "foreign-key column `{}` for relationship `{}` collides with an existing column of `{}`",
                        column, rel.name, holder.entity
                    ),
                    rel.pos,
                ));
            }
        }

        errors
    }
}
