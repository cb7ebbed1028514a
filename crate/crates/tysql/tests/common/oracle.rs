//! An independent in-memory evaluator for accepted select statements.
//!
//! This is the reference semantics the executed plans are checked
//! against: cross product of the referenced tables (n:m `Satisfies`
//! conditions extend the product with their join table, in condition
//! order), three-valued filtering, projection, distinct, order, limit.
//! It shares no code with the plan translator, renderer, or SQLite
//! execution path.
//!
//! Ordered output is produced as *tie groups*: runs of rows whose order
//! keys compare equal. Within a group the engine may emit rows in any
//! order, so result comparison checks group-by-group multiset equality
//! (and sub-multiset membership for a limit cutting into a group).

use std::collections::BTreeMap;

use tysql::analysis::{ResolvedTable, TypedColumn, TypedCond, TypedSelect, TypedVal};
use tysql::erd::{ParserInfo, RelLink, RelationalSchema};
use tysql::sql::{CmpOp, Quantifier, SortDir};
use tysql::value::SqlValue;
use tysql::Connection;

/// An in-memory database: tables with column names and rows of values.
#[derive(Debug, Clone, Default)]
pub struct MemDb {
    pub tables: BTreeMap<String, MemTable>,
}

#[derive(Debug, Clone, Default)]
pub struct MemTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<SqlValue>>,
}

impl MemDb {
    pub fn from_schema(schema: &RelationalSchema) -> MemDb {
        let mut db = MemDb::default();
        for table in &schema.tables {
            db.tables.insert(
                table.name.clone(),
                MemTable {
                    columns: table.columns.iter().map(|c| c.name.clone()).collect(),
                    rows: Vec::new(),
                },
            );
        }
        db
    }

    /// Copies every row into a live database created from the same
    /// schema, keys included. Insertion order follows the map, not the
    /// dependency graph, so foreign-key checks are deferred to the
    /// enclosing commit.
    pub fn materialize(&self, conn: &Connection) {
        conn.execute_batch("BEGIN; PRAGMA defer_foreign_keys = ON;")
            .expect("begin materialize");
        for (name, table) in &self.tables {
            let columns: Vec<String> = table.columns.iter().map(|c| format!("\"{c}\"")).collect();
            let holes = vec!["?"; table.columns.len()].join(", ");
            let sql = format!(
                "insert into '{name}' ({}) values ({holes});",
                columns.join(", ")
            );
            for row in &table.rows {
                conn.execute_with(&sql, row).expect("materialize row");
            }
        }
        conn.execute_batch("COMMIT;").expect("commit materialize");
    }

    fn column_index(&self, table: &str, column: &str) -> usize {
        self.tables[table]
            .columns
            .iter()
            .position(|c| c == column)
            .unwrap_or_else(|| panic!("no column {table}.{column}"))
    }
}

/// Kleene three-valued logic, as SQL conditions require.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Truth {
    True,
    False,
    Unknown,
}

impl Truth {
    fn from_bool(b: bool) -> Truth {
        if b {
            Truth::True
        } else {
            Truth::False
        }
    }

    fn and(self, other: Truth) -> Truth {
        match (self, other) {
            (Truth::False, _) | (_, Truth::False) => Truth::False,
            (Truth::True, Truth::True) => Truth::True,
            _ => Truth::Unknown,
        }
    }

    fn or(self, other: Truth) -> Truth {
        match (self, other) {
            (Truth::True, _) | (_, Truth::True) => Truth::True,
            (Truth::False, Truth::False) => Truth::False,
            _ => Truth::Unknown,
        }
    }

    fn not(self) -> Truth {
        match self {
            Truth::True => Truth::False,
            Truth::False => Truth::True,
            Truth::Unknown => Truth::Unknown,
        }
    }
}

/// The oracle's own condition form. `Satisfies` nodes are resolved into
/// key/foreign-key tests up front, with n:m nodes pinned to the join
/// table instance appended for them.
enum OCond {
    Cmp {
        op: CmpOp,
        lhs: TypedVal,
        rhs: TypedVal,
    },
    Between {
        subject: TypedVal,
        lo: TypedVal,
        hi: TypedVal,
    },
    IsNull {
        col: TypedColumn,
        negated: bool,
    },
    /// `referenced.Key == holder.fk`
    KeyMatch {
        referenced: ResolvedTable,
        holder: ResolvedTable,
        fk_column: String,
    },
    /// `a.Key == join.col_a and join.col_b == b.Key`
    JoinMatch {
        a: ResolvedTable,
        join: ResolvedTable,
        b: ResolvedTable,
        column_a: String,
        column_b: String,
    },
    And(Vec<OCond>),
    Or(Vec<OCond>),
    Not(Box<OCond>),
}

/// Lowers a typed condition into oracle form, appending join tables for
/// n:m `Satisfies` nodes in traversal order.
fn lower(cond: &TypedCond, info: &ParserInfo, tables: &mut Vec<ResolvedTable>) -> OCond {
    match cond {
        TypedCond::Cmp { op, lhs, rhs } => OCond::Cmp {
            op: *op,
            lhs: lhs.clone(),
            rhs: rhs.clone(),
        },
        TypedCond::Between { subject, lo, hi } => OCond::Between {
            subject: subject.clone(),
            lo: lo.clone(),
            hi: hi.clone(),
        },
        TypedCond::IsNull { col, negated } => OCond::IsNull {
            col: col.clone(),
            negated: *negated,
        },
        TypedCond::Satisfies { lhs, rel, rhs } => {
            let relation = info.relation(rel).expect("checked relationship");
            match &relation.link {
                RelLink::ForeignKey { table, column } => {
                    let (referenced, holder) = if *table == relation.entity_b {
                        (lhs.clone(), rhs.clone())
                    } else {
                        (rhs.clone(), lhs.clone())
                    };
                    OCond::KeyMatch {
                        referenced,
                        holder,
                        fk_column: column.clone(),
                    }
                }
                RelLink::JoinTable {
                    table,
                    column_a,
                    column_b,
                } => {
                    let number = tables.iter().filter(|t| t.table == *table).count() as u32;
                    tables.push(ResolvedTable::new(table.clone(), number));
                    OCond::JoinMatch {
                        a: lhs.clone(),
                        join: ResolvedTable::new(table.clone(), number),
                        b: rhs.clone(),
                        column_a: column_a.clone(),
                        column_b: column_b.clone(),
                    }
                }
            }
        }
        TypedCond::And(list) => OCond::And(list.iter().map(|c| lower(c, info, tables)).collect()),
        TypedCond::Or(list) => OCond::Or(list.iter().map(|c| lower(c, info, tables)).collect()),
        TypedCond::Not(inner) => OCond::Not(Box::new(lower(inner, info, tables))),
    }
}

/// Result rows grouped by equal order keys, before any limit.
pub type TieGroups = Vec<Vec<Vec<SqlValue>>>;

/// Evaluates an accepted select statement over the in-memory database.
pub fn eval_select(
    stmt: &TypedSelect,
    info: &ParserInfo,
    db: &MemDb,
    bindings: &BTreeMap<String, SqlValue>,
) -> TieGroups {
    let mut tables: Vec<ResolvedTable> = stmt.from.clone();
    let cond = stmt
        .where_cond
        .as_ref()
        .map(|c| lower(c, info, &mut tables));

    let row_sets: Vec<&MemTable> = tables.iter().map(|t| &db.tables[&t.table]).collect();
    let position: BTreeMap<(String, u32), usize> = tables
        .iter()
        .enumerate()
        .map(|(i, t)| ((t.table.clone(), t.number), i))
        .collect();

    let mut tuples: Vec<Vec<usize>> = vec![Vec::new()];
    for set in &row_sets {
        let mut next = Vec::new();
        for prefix in &tuples {
            for row_index in 0..set.rows.len() {
                let mut tuple = prefix.clone();
                tuple.push(row_index);
                next.push(tuple);
            }
        }
        tuples = next;
    }

    let env = Env {
        db,
        row_sets: &row_sets,
        position: &position,
        bindings,
    };

    let mut kept: Vec<(Vec<SqlValue>, Vec<SqlValue>)> = Vec::new();
    for tuple in &tuples {
        let keep = match &cond {
            Some(c) => env.eval(c, tuple),
            None => Truth::True,
        };
        if keep != Truth::True {
            continue;
        }
        let projected: Vec<SqlValue> = stmt
            .projection
            .iter()
            .map(|c| env.column(tuple, &c.table, c.number, &c.column))
            .collect();
        let keys: Vec<SqlValue> = stmt
            .order_by
            .iter()
            .map(|(c, _)| env.column(tuple, &c.table, c.number, &c.column))
            .collect();
        kept.push((keys, projected));
    }

    if stmt.quantifier == Quantifier::Distinct {
        let mut seen = std::collections::BTreeSet::new();
        kept.retain(|(_, projected)| seen.insert(row_key(projected)));
    }

    let dirs: Vec<SortDir> = stmt.order_by.iter().map(|(_, d)| *d).collect();
    kept.sort_by(|(a, _), (b, _)| compare_keys(a, b, &dirs));

    let mut groups: TieGroups = Vec::new();
    let mut open_key: Option<String> = None;
    for (keys, projected) in kept {
        let key = row_key(&keys);
        if open_key.as_deref() == Some(key.as_str()) {
            groups.last_mut().expect("open group").push(projected);
        } else {
            groups.push(vec![projected]);
            open_key = Some(key);
        }
    }
    groups
}

struct Env<'a> {
    db: &'a MemDb,
    row_sets: &'a [&'a MemTable],
    position: &'a BTreeMap<(String, u32), usize>,
    bindings: &'a BTreeMap<String, SqlValue>,
}

impl Env<'_> {
    fn column(&self, tuple: &[usize], table: &str, number: u32, column: &str) -> SqlValue {
        let slot = self.position[&(table.to_string(), number)];
        let idx = self.db.column_index(table, column);
        self.row_sets[slot].rows[tuple[slot]][idx].clone()
    }

    fn value(&self, tuple: &[usize], v: &TypedVal) -> SqlValue {
        match v {
            TypedVal::Col(c) => self.column(tuple, &c.table, c.number, &c.column),
            TypedVal::Const(value) => value.clone(),
            TypedVal::Param { name, .. } => self
                .bindings
                .get(name)
                .cloned()
                .unwrap_or_else(|| panic!("unbound parameter {name}")),
        }
    }

    fn eval(&self, cond: &OCond, tuple: &[usize]) -> Truth {
        match cond {
            OCond::Cmp { op, lhs, rhs } => {
                compare_sql(*op, &self.value(tuple, lhs), &self.value(tuple, rhs))
            }
            OCond::Between { subject, lo, hi } => {
                let s = self.value(tuple, subject);
                compare_sql(CmpOp::Ge, &s, &self.value(tuple, lo))
                    .and(compare_sql(CmpOp::Le, &s, &self.value(tuple, hi)))
            }
            OCond::IsNull { col, negated } => {
                let is_null = self
                    .column(tuple, &col.table, col.number, &col.column)
                    .is_null();
                Truth::from_bool(is_null != *negated)
            }
            OCond::KeyMatch {
                referenced,
                holder,
                fk_column,
            } => {
                let key = self.column(tuple, &referenced.table, referenced.number, "Key");
                let fk = self.column(tuple, &holder.table, holder.number, fk_column);
                compare_sql(CmpOp::Eq, &key, &fk)
            }
            OCond::JoinMatch {
                a,
                join,
                b,
                column_a,
                column_b,
            } => {
                let a_key = self.column(tuple, &a.table, a.number, "Key");
                let a_fk = self.column(tuple, &join.table, join.number, column_a);
                let b_fk = self.column(tuple, &join.table, join.number, column_b);
                let b_key = self.column(tuple, &b.table, b.number, "Key");
                compare_sql(CmpOp::Eq, &a_key, &a_fk).and(compare_sql(CmpOp::Eq, &b_fk, &b_key))
            }
            OCond::And(list) => list
                .iter()
                .fold(Truth::True, |acc, c| acc.and(self.eval(c, tuple))),
            OCond::Or(list) => list
                .iter()
                .fold(Truth::False, |acc, c| acc.or(self.eval(c, tuple))),
            OCond::Not(inner) => self.eval(inner, tuple).not(),
        }
    }
}

/// SQL comparison semantics: null operands make the result unknown.
fn compare_sql(op: CmpOp, lhs: &SqlValue, rhs: &SqlValue) -> Truth {
    if lhs.is_null() || rhs.is_null() {
        return Truth::Unknown;
    }
    let ord = cmp_values(lhs, rhs);
    Truth::from_bool(match op {
        CmpOp::Eq => ord == std::cmp::Ordering::Equal,
        CmpOp::Ne => ord != std::cmp::Ordering::Equal,
        CmpOp::Lt => ord == std::cmp::Ordering::Less,
        CmpOp::Le => ord != std::cmp::Ordering::Greater,
        CmpOp::Gt => ord == std::cmp::Ordering::Greater,
        CmpOp::Ge => ord != std::cmp::Ordering::Less,
    })
}

/// Total order on non-null values of one type, matching the engine's
/// ordering of the stored representations.
pub fn cmp_values(a: &SqlValue, b: &SqlValue) -> std::cmp::Ordering {
    use SqlValue::*;
    match (a, b) {
        (Int(x), Int(y)) => x.cmp(y),
        (Float(x), Float(y)) => x.partial_cmp(y).expect("no NaN in fixtures"),
        (String(x), String(y)) => x.cmp(y),
        (Char(x), Char(y)) => x.to_string().cmp(&y.to_string()),
        (Bool(x), Bool(y)) => x.cmp(y),
        (Date(x), Date(y)) => x.cmp(y),
        other => panic!("mixed-type comparison {other:?}"),
    }
}

/// Sort comparator over order keys: nulls sort first ascending (and thus
/// last descending), matching the engine.
fn compare_keys(a: &[SqlValue], b: &[SqlValue], dirs: &[SortDir]) -> std::cmp::Ordering {
    for ((x, y), dir) in a.iter().zip(b).zip(dirs) {
        let ord = match (x.is_null(), y.is_null()) {
            (true, true) => std::cmp::Ordering::Equal,
            (true, false) => std::cmp::Ordering::Less,
            (false, true) => std::cmp::Ordering::Greater,
            (false, false) => cmp_values(x, y),
        };
        let ord = match dir {
            SortDir::Asc => ord,
            SortDir::Desc => ord.reverse(),
        };
        if ord != std::cmp::Ordering::Equal {
            return ord;
        }
    }
    std::cmp::Ordering::Equal
}

/// A canonical, hashable encoding of a row for multiset comparison.
/// Floats encode by bit pattern; values round-trip the engine unchanged,
/// so bitwise equality is the right notion.
pub fn row_key(row: &[SqlValue]) -> String {
    let mut out = String::new();
    for v in row {
        match v {
            SqlValue::String(s) => out.push_str(&format!("s{}:{s}", s.len())),
            SqlValue::Int(i) => out.push_str(&format!("i{i}")),
            SqlValue::Float(x) => out.push_str(&format!("f{:016x}", x.to_bits())),
            SqlValue::Char(c) => out.push_str(&format!("c{c}")),
            SqlValue::Bool(b) => out.push_str(&format!("b{b}")),
            SqlValue::Date(d) => out.push_str(&format!("d{d}")),
            SqlValue::Null => out.push('n'),
        }
        out.push('|');
    }
    out
}

/// Checks an engine result against the oracle's tie groups: rows must
/// consume the groups in order, matching each fully consumed group as a
/// multiset, and a partially consumed final group (a limit boundary) as a
/// sub-multiset. Panics with a description on mismatch.
pub fn assert_result_matches(
    engine: &[Vec<SqlValue>],
    groups: &TieGroups,
    limit: Option<u64>,
    context: &str,
) {
    let total: usize = groups.iter().map(Vec::len).sum();
    let expected = match limit {
        Some(n) => total.min(n as usize),
        None => total,
    };
    assert_eq!(
        engine.len(),
        expected,
        "{context}: expected {expected} rows, engine returned {}",
        engine.len()
    );

    let mut index = 0;
    let mut remaining = expected;
    for group in groups {
        if remaining == 0 {
            break;
        }
        let take = group.len().min(remaining);
        let slice = &engine[index..index + take];
        let mut expected_keys: Vec<String> = group.iter().map(|r| row_key(r)).collect();
        let mut got_keys: Vec<String> = slice.iter().map(|r| row_key(r)).collect();
        expected_keys.sort();
        got_keys.sort();
        if take == group.len() {
            assert_eq!(
                got_keys, expected_keys,
                "{context}: group mismatch at row {index}"
            );
        } else {
            // partial group: every engine row must come from the group
            let mut pool = expected_keys;
            for key in got_keys {
                let at = pool
                    .iter()
                    .position(|k| *k == key)
                    .unwrap_or_else(|| panic!("{context}: row {key} not in its tie group"));
                pool.remove(at);
            }
        }
        index += take;
        remaining -= take;
    }
}
