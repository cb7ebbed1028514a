//! Shared fixture models, entity types, and seeded databases.

use tysql::db::{insert_entity, Connection, EntityDescription};
use tysql::erd::{build_parser_info, parse_erd, transform, ErModel, ParserInfo, RelationalSchema};
use tysql::value::{SqlType, SqlValue};
use tysql::{emit_ddl, SqlValue as V};

pub const UNI_ERD: &str = include_str!("../fixtures/uni.erd");
pub const GADGETS_ERD: &str = include_str!("../fixtures/gadgets.erd");

pub fn uni_model() -> ErModel {
    parse_erd(UNI_ERD).expect("uni fixture parses")
}

pub fn gadgets_model() -> ErModel {
    parse_erd(GADGETS_ERD).expect("gadgets fixture parses")
}

/// Model, schema, and info for an in-memory database.
pub fn compile_model(source: &str) -> (ErModel, RelationalSchema, ParserInfo) {
    let model = parse_erd(source).expect("fixture parses");
    let schema = transform(&model);
    let info = build_parser_info(&model, &schema, ":memory:");
    (model, schema, info)
}

/// An empty in-memory database carrying the model's schema.
pub fn empty_db(schema: &RelationalSchema) -> Connection {
    let conn = Connection::open_in_memory().expect("in-memory db");
    conn.execute_batch(&emit_ddl(schema)).expect("ddl loads");
    conn
}

#[derive(Debug, Clone, PartialEq)]
pub struct Student {
    pub key: i64,
    pub name: String,
    pub first: String,
    pub mat_num: i64,
    pub email: Option<String>,
    pub age: Option<i64>,
}

pub fn student_description() -> EntityDescription<Student> {
    EntityDescription::new(
        "Student",
        vec![
            SqlType::Int,
            SqlType::String,
            SqlType::String,
            SqlType::Int,
            SqlType::String,
            SqlType::Int,
        ],
        |s: &Student| {
            vec![
                V::Int(s.key),
                V::String(s.name.clone()),
                V::String(s.first.clone()),
                V::Int(s.mat_num),
                s.email.clone().map_or(V::Null, V::String),
                s.age.map_or(V::Null, V::Int),
            ]
        },
        |row| match row {
            [V::Int(key), V::String(name), V::String(first), V::Int(mat_num), email, age] => {
                Some(Student {
                    key: *key,
                    name: name.clone(),
                    first: first.clone(),
                    mat_num: *mat_num,
                    email: match email {
                        V::String(s) => Some(s.clone()),
                        V::Null => None,
                        _ => return None,
                    },
                    age: match age {
                        V::Int(n) => Some(*n),
                        V::Null => None,
                        _ => return None,
                    },
                })
            }
            _ => None,
        },
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lecture {
    pub key: i64,
    pub title: String,
    pub topic: Option<String>,
}

pub fn lecture_description() -> EntityDescription<Lecture> {
    EntityDescription::new(
        "Lecture",
        vec![SqlType::Int, SqlType::String, SqlType::String],
        |l: &Lecture| {
            vec![
                V::Int(l.key),
                V::String(l.title.clone()),
                l.topic.clone().map_or(V::Null, V::String),
            ]
        },
        |row| match row {
            [V::Int(key), V::String(title), topic] => Some(Lecture {
                key: *key,
                title: title.clone(),
                topic: match topic {
                    V::String(s) => Some(s.clone()),
                    V::Null => None,
                    _ => return None,
                },
            }),
            _ => None,
        },
    )
}

/// The Result entity of the Uni model (named to dodge `std::result`).
#[derive(Debug, Clone, PartialEq)]
pub struct ExamResult {
    pub key: i64,
    pub attempt: i64,
    pub grade: Option<f64>,
    pub student_key: i64,
}

pub fn result_description() -> EntityDescription<ExamResult> {
    EntityDescription::new(
        "Result",
        vec![SqlType::Int, SqlType::Int, SqlType::Float, SqlType::Int],
        |r: &ExamResult| {
            vec![
                V::Int(r.key),
                V::Int(r.attempt),
                r.grade.map_or(V::Null, V::Float),
                V::Int(r.student_key),
            ]
        },
        |row| match row {
            [V::Int(key), V::Int(attempt), grade, V::Int(student_key)] => Some(ExamResult {
                key: *key,
                attempt: *attempt,
                grade: match grade {
                    V::Float(x) => Some(*x),
                    V::Null => None,
                    _ => return None,
                },
                student_key: *student_key,
            }),
            _ => None,
        },
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct Participation {
    pub key: i64,
    pub student_key: i64,
    pub lecture_key: i64,
}

pub fn participation_description() -> EntityDescription<Participation> {
    EntityDescription::new(
        "Participation",
        vec![SqlType::Int, SqlType::Int, SqlType::Int],
        |p: &Participation| vec![V::Int(p.key), V::Int(p.student_key), V::Int(p.lecture_key)],
        |row| match row {
            [V::Int(key), V::Int(student_key), V::Int(lecture_key)] => Some(Participation {
                key: *key,
                student_key: *student_key,
                lecture_key: *lecture_key,
            }),
            _ => None,
        },
    )
}

/// The Device entity of the Gadgets model, covering every value type.
#[derive(Debug, Clone, PartialEq)]
pub struct Device {
    pub key: i64,
    pub serial: String,
    pub active: bool,
    pub grade: Option<char>,
    pub bought: i64,
    pub weight: Option<f64>,
    pub owner_key: i64,
    pub repairer_key: Option<i64>,
}

pub fn device_description() -> EntityDescription<Device> {
    EntityDescription::new(
        "Device",
        vec![
            SqlType::Int,
            SqlType::String,
            SqlType::Bool,
            SqlType::Char,
            SqlType::Date,
            SqlType::Float,
            SqlType::Int,
            SqlType::Int,
        ],
        |d: &Device| {
            vec![
                V::Int(d.key),
                V::String(d.serial.clone()),
                V::Bool(d.active),
                d.grade.map_or(V::Null, V::Char),
                V::Date(d.bought),
                d.weight.map_or(V::Null, V::Float),
                V::Int(d.owner_key),
                d.repairer_key.map_or(V::Null, V::Int),
            ]
        },
        |row| match row {
            [V::Int(key), V::String(serial), V::Bool(active), grade, V::Date(bought), weight, V::Int(owner_key), repairer] => {
                Some(Device {
                    key: *key,
                    serial: serial.clone(),
                    active: *active,
                    grade: match grade {
                        V::Char(c) => Some(*c),
                        V::Null => None,
                        _ => return None,
                    },
                    bought: *bought,
                    weight: match weight {
                        V::Float(x) => Some(*x),
                        V::Null => None,
                        _ => return None,
                    },
                    owner_key: *owner_key,
                    repairer_key: match repairer {
                        V::Int(k) => Some(*k),
                        V::Null => None,
                        _ => return None,
                    },
                })
            }
            _ => None,
        },
    )
}

/// A Uni database seeded with a small student body: three students, two
/// lectures, three results, and three participations.
pub fn seeded_uni_db() -> (Connection, ParserInfo) {
    let (_, schema, info) = compile_model(UNI_ERD);
    let conn = empty_db(&schema);

    let students = [
        ("Fisher", "Joe", 101, Some("jf@uni.org"), Some(30)),
        ("Miller", "Ann", 102, None, Some(25)),
        ("Stone", "Bob", 103, Some("bs@uni.org"), None),
    ];
    let mut student_keys = Vec::new();
    for (name, first, mat_num, email, age) in students {
        let key = insert_entity(
            &conn,
            &student_description(),
            &Student {
                key: 0,
                name: name.into(),
                first: first.into(),
                mat_num,
                email: email.map(Into::into),
                age,
            },
        )
        .expect("seed student");
        student_keys.push(key);
    }

    let mut lecture_keys = Vec::new();
    for (title, topic) in [("Databases", Some("SQL")), ("Logic", None)] {
        let key = insert_entity(
            &conn,
            &lecture_description(),
            &Lecture {
                key: 0,
                title: title.into(),
                topic: topic.map(Into::into),
            },
        )
        .expect("seed lecture");
        lecture_keys.push(key);
    }

    for (attempt, grade, student) in [
        (1, Some(1.3), student_keys[0]),
        (1, Some(2.7), student_keys[1]),
        (2, None, student_keys[0]),
    ] {
        insert_entity(
            &conn,
            &result_description(),
            &ExamResult {
                key: 0,
                attempt,
                grade,
                student_key: student,
            },
        )
        .expect("seed result");
    }

    for (student, lecture) in [
        (student_keys[0], lecture_keys[0]),
        (student_keys[0], lecture_keys[1]),
        (student_keys[1], lecture_keys[0]),
    ] {
        insert_entity(
            &conn,
            &participation_description(),
            &Participation {
                key: 0,
                student_key: student,
                lecture_key: lecture,
            },
        )
        .expect("seed participation");
    }

    (conn, info)
}

/// Display form used by the CLI for a row of values.
pub fn render_row(row: &[SqlValue]) -> String {
    row.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("\t")
}
