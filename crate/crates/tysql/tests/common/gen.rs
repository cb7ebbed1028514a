//! Seeded random generators: ER models, typed row data, and accepted
//! select statements with bindings.

use std::collections::BTreeMap;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

use tysql::erd::{parse_erd, ErModel, ParserInfo, RelationalSchema};
use tysql::sql::ast::{ColRef, Cond, Projection, Quantifier, SelectStmt, SortDir, Stmt, TableRef, ValExpr};
use tysql::sql::pretty_stmt;
use tysql::sql::token::CmpOp;
use tysql::sql::{Lit, Pos};
use tysql::value::{SqlType, SqlValue};

use super::oracle::MemDb;

const DOMAIN_POOL: [SqlType; 6] = [
    SqlType::String,
    SqlType::Int,
    SqlType::Float,
    SqlType::Char,
    SqlType::Bool,
    SqlType::Date,
];

const CARD_POOL: [(u32, Option<u32>); 6] = [
    (0, Some(1)),
    (1, Some(1)),
    (0, None),
    (1, None),
    (0, Some(3)),
    (2, Some(5)),
];

/// Emits a random valid ER model as source text and parses it back.
pub fn random_model(rng: &mut StdRng) -> (String, ErModel) {
    let entity_count = rng.gen_range(1..=5);
    let mut text = format!("model M{};\n", rng.gen_range(0..1000));
    for e in 0..entity_count {
        text.push_str(&format!("entity E{e} {{\n"));
        let attr_count = rng.gen_range(1..=4);
        for a in 0..attr_count {
            let domain = DOMAIN_POOL[rng.gen_range(0..DOMAIN_POOL.len())];
            // a unique Bool column caps a table at two rows; skip that
            let unique = domain != SqlType::Bool && rng.gen_bool(0.15);
            let nullable = rng.gen_bool(0.3);
            text.push_str(&format!("  A{a}: {}", domain.name()));
            if unique {
                text.push_str(" unique");
            }
            if nullable {
                text.push_str(" null");
            }
            text.push_str(";\n");
        }
        text.push_str("}\n");
    }
    let rel_count = if entity_count < 2 {
        0
    } else {
        rng.gen_range(0..=4)
    };
    for r in 0..rel_count {
        let a = rng.gen_range(0..entity_count);
        let b = loop {
            let b = rng.gen_range(0..entity_count);
            if b != a {
                break b;
            }
        };
        let (min_a, max_a) = CARD_POOL[rng.gen_range(0..CARD_POOL.len())];
        let (min_b, max_b) = CARD_POOL[rng.gen_range(0..CARD_POOL.len())];
        let card = |min: u32, max: Option<u32>| match max {
            Some(max) => format!("({min}..{max})"),
            None => format!("({min}..*)"),
        };
        let role = if rng.gen_bool(0.3) {
            format!(" as Role{r}")
        } else {
            String::new()
        };
        text.push_str(&format!(
            "relationship R{r}{role}: E{a} {} -- E{b} {};\n",
            card(min_a, max_a),
            card(min_b, max_b)
        ));
    }
    let model = parse_erd(&text).unwrap_or_else(|errors| {
        panic!("generated model must be valid: {errors:?}\n{text}")
    });
    (text, model)
}

fn value_pool(rng: &mut StdRng, ty: SqlType) -> SqlValue {
    match ty {
        SqlType::Int => SqlValue::Int(rng.gen_range(-2..=6)),
        SqlType::Float => {
            const POOL: [f64; 7] = [0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 20.5];
            SqlValue::Float(POOL[rng.gen_range(0..POOL.len())])
        }
        SqlType::String => {
            const POOL: [&str; 6] = ["a", "b", "ab", "x", "u0", "u1"];
            SqlValue::String(POOL[rng.gen_range(0..POOL.len())].to_string())
        }
        SqlType::Char => SqlValue::Char((b'a' + rng.gen_range(0..5u8)) as char),
        SqlType::Bool => SqlValue::Bool(rng.gen_bool(0.5)),
        SqlType::Date => SqlValue::Date(rng.gen_range(0..=5)),
    }
}

fn unique_value(ty: SqlType, index: usize) -> SqlValue {
    match ty {
        SqlType::Int => SqlValue::Int(1000 + index as i64),
        SqlType::Float => SqlValue::Float(1000.5 + index as f64),
        SqlType::String => SqlValue::String(format!("uq{index}")),
        SqlType::Char => SqlValue::Char((b'p' + index as u8) as char),
        SqlType::Bool => SqlValue::Bool(index.is_multiple_of(2)),
        SqlType::Date => SqlValue::Date(9000 + index as i64),
    }
}

/// Fills an in-memory database for the model with up to `max_rows` rows
/// per table. Foreign keys reference existing parents (unique ones
/// distinct parents), join tables hold distinct pairs, and nullable
/// columns carry occasional nulls.
pub fn random_db(
    rng: &mut StdRng,
    model: &ErModel,
    schema: &RelationalSchema,
    max_rows: usize,
) -> MemDb {
    let mut db = MemDb::from_schema(schema);

    // row counts per entity table first, so foreign keys always have
    // their parents decided
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for entity in &model.entities {
        counts.insert(entity.name.clone(), rng.gen_range(0..=max_rows));
    }

    for table in &schema.tables {
        let is_join = model.entity(&table.name).is_none();
        let mut rows = Vec::new();
        if is_join {
            // distinct (a, b) pairs over the two referenced tables
            let fks: Vec<&tysql::erd::ColumnDef> = table
                .columns
                .iter()
                .filter(|c| c.foreign_key.is_some())
                .collect();
            let parent_a = &fks[0].foreign_key.as_ref().unwrap().0;
            let parent_b = &fks[1].foreign_key.as_ref().unwrap().0;
            let n_a = counts.get(parent_a).copied().unwrap_or(0);
            let n_b = counts.get(parent_b).copied().unwrap_or(0);
            let mut pairs: Vec<(i64, i64)> = (1..=n_a as i64)
                .flat_map(|a| (1..=n_b as i64).map(move |b| (a, b)))
                .collect();
            pairs.shuffle(rng);
            pairs.truncate(rng.gen_range(0..=max_rows.min(pairs.len())));
            for (key, (a, b)) in pairs.into_iter().enumerate() {
                rows.push(vec![
                    SqlValue::Int(key as i64 + 1),
                    SqlValue::Int(a),
                    SqlValue::Int(b),
                ]);
            }
        } else {
            let mut count = counts[&table.name];
            // mandatory or unique foreign keys bound the row count
            for col in &table.columns {
                if let Some((parent, _)) = &col.foreign_key {
                    let available = counts.get(parent).copied().unwrap_or(0);
                    if col.not_null && available == 0 {
                        count = 0;
                    }
                    if col.unique {
                        count = count.min(available);
                    }
                }
            }
            counts.insert(table.name.clone(), count);

            for key in 1..=count {
                let mut row = Vec::with_capacity(table.columns.len());
                for (c, col) in table.columns.iter().enumerate() {
                    if col.primary_key {
                        row.push(SqlValue::Int(key as i64));
                    } else if let Some((parent, _)) = &col.foreign_key {
                        let available = counts.get(parent).copied().unwrap_or(0);
                        let value = if col.unique {
                            // distinct parents: walk them in key order
                            SqlValue::Int(key as i64)
                        } else if available == 0 || (!col.not_null && rng.gen_bool(0.25)) {
                            SqlValue::Null
                        } else {
                            SqlValue::Int(rng.gen_range(1..=available as i64))
                        };
                        row.push(value);
                    } else if !col.not_null && rng.gen_bool(0.25) {
                        row.push(SqlValue::Null);
                    } else if col.unique {
                        row.push(unique_value(col.sql_type, key * 10 + c));
                    } else {
                        row.push(value_pool(rng, col.sql_type));
                    }
                }
                rows.push(row);
            }
        }
        db.tables.get_mut(&table.name).expect("table exists").rows = rows;
    }
    db
}

/// A generated statement with the bindings for its placeholders.
pub struct StatementCase {
    pub text: String,
    pub bindings: BTreeMap<String, SqlValue>,
}

struct FromEntry {
    table: String,
    alias: Option<String>,
    /// (column, type, nullable) of every column of the table
    columns: Vec<(String, SqlType, bool)>,
}

impl FromEntry {
    fn qualifier(&self) -> &str {
        self.alias.as_deref().unwrap_or(&self.table)
    }

    fn colref(&self, column: &str) -> ColRef {
        ColRef {
            qualifier: Some(self.qualifier().to_string()),
            column: column.to_string(),
            pos: Pos::default(),
        }
    }
}

fn table_columns(info: &ParserInfo, table: &str) -> Vec<(String, SqlType, bool)> {
    info.columns_of(table)
        .expect("table known")
        .iter()
        .map(|c| {
            (
                c.clone(),
                info.column_type(table, c).expect("typed column"),
                info.column_nullable(table, c).expect("flagged column"),
            )
        })
        .collect()
}

/// Generates a random accepted select statement against the model, with
/// bindings for every placeholder it contains. Covers `Satisfies` over
/// every relationship kind, `Between`, `Distinct`, `Order By`, `Limit`,
/// placeholders, and occasional self-products. `Limit` is only emitted
/// together with `Order By`.
pub fn random_select(
    rng: &mut StdRng,
    info: &ParserInfo,
    relations: &[(String, String, String)],
) -> StatementCase {
    let tables: Vec<&String> = info.attribute_lists.keys().collect();
    let mut from: Vec<FromEntry> = Vec::new();
    let mut satisfies: Vec<Cond> = Vec::new();
    let mut alias_counter = 0usize;
    let fresh_alias = |counter: &mut usize| {
        let alias = format!("t{counter}");
        *counter += 1;
        alias
    };

    let use_satisfies = !relations.is_empty() && rng.gen_bool(0.6);
    if use_satisfies {
        let (rel, entity_a, entity_b) = &relations[rng.gen_range(0..relations.len())];
        let alias_a = fresh_alias(&mut alias_counter);
        let alias_b = fresh_alias(&mut alias_counter);
        from.push(FromEntry {
            table: entity_a.clone(),
            alias: Some(alias_a.clone()),
            columns: table_columns(info, entity_a),
        });
        from.push(FromEntry {
            table: entity_b.clone(),
            alias: Some(alias_b.clone()),
            columns: table_columns(info, entity_b),
        });
        satisfies.push(Cond::Satisfies {
            lhs: alias_a,
            rel: rel.clone(),
            rhs: alias_b,
            pos: Pos::default(),
        });
    } else {
        let table = tables[rng.gen_range(0..tables.len())].clone();
        let bare = rng.gen_bool(0.4);
        from.push(FromEntry {
            alias: (!bare).then(|| fresh_alias(&mut alias_counter)),
            columns: table_columns(info, &table),
            table,
        });
    }
    // occasionally widen the product, possibly repeating a table
    if from.len() < 3 && rng.gen_bool(0.3) {
        let table = if rng.gen_bool(0.3) {
            from[rng.gen_range(0..from.len())].table.clone()
        } else {
            tables[rng.gen_range(0..tables.len())].clone()
        };
        from.push(FromEntry {
            alias: Some(fresh_alias(&mut alias_counter)),
            columns: table_columns(info, &table),
            table,
        });
    }
    // bare single tables aside, every alias must be used: projecting one
    // column per table takes care of it
    if from.len() > 1 {
        for entry in &mut from {
            if entry.alias.is_none() {
                entry.alias = Some(fresh_alias(&mut alias_counter));
            }
        }
    }

    let mut bindings = BTreeMap::new();
    let mut param_counter = 0usize;

    let mut projection: Vec<ColRef> = Vec::new();
    for entry in &from {
        for _ in 0..rng.gen_range(1..=2) {
            let (column, _, _) = &entry.columns[rng.gen_range(0..entry.columns.len())];
            projection.push(entry.colref(column));
        }
    }
    let quantifier = if rng.gen_bool(0.25) {
        Quantifier::Distinct
    } else {
        Quantifier::All
    };

    let mut extras: Vec<Cond> = Vec::new();
    for _ in 0..rng.gen_range(0..=2) {
        extras.push(random_predicate(
            rng,
            &from,
            &mut bindings,
            &mut param_counter,
        ));
    }
    // a dash of structure: wrap two extras in Or / Not occasionally
    let extra_tree = match extras.len() {
        0 => None,
        1 => Some(extras.pop().unwrap()),
        _ => {
            let b = extras.pop().unwrap();
            let a = extras.pop().unwrap();
            Some(match rng.gen_range(0..3) {
                0 => Cond::And(vec![a, b]),
                1 => Cond::Or(vec![a, b]),
                _ => Cond::And(vec![a, Cond::Not(Box::new(b), Pos::default())]),
            })
        }
    };

    let mut conjuncts = satisfies;
    conjuncts.extend(extra_tree);
    let where_cond = match conjuncts.len() {
        0 => None,
        1 => Some(conjuncts.pop().unwrap()),
        _ => {
            // rarely, satisfies participates in a disjunction
            if rng.gen_bool(0.1) {
                Some(Cond::Or(conjuncts))
            } else {
                Some(Cond::And(conjuncts))
            }
        }
    };

    let mut order_by: Vec<(ColRef, SortDir)> = Vec::new();
    if rng.gen_bool(0.5) {
        let candidates: Vec<ColRef> = if quantifier == Quantifier::Distinct {
            projection.clone()
        } else {
            from.iter()
                .flat_map(|e| e.columns.iter().map(|(c, _, _)| e.colref(c)))
                .collect()
        };
        for _ in 0..rng.gen_range(1..=2) {
            let col = candidates[rng.gen_range(0..candidates.len())].clone();
            let dir = if rng.gen_bool(0.5) {
                SortDir::Asc
            } else {
                SortDir::Desc
            };
            order_by.push((col, dir));
        }
    }
    let limit = if !order_by.is_empty() && rng.gen_bool(0.5) {
        Some(rng.gen_range(1..=5))
    } else {
        None
    };

    let stmt = Stmt::Select(SelectStmt {
        quantifier,
        projection: Projection::Items(projection),
        from: from
            .iter()
            .map(|e| TableRef {
                table: e.table.clone(),
                alias: e.alias.clone(),
                pos: Pos::default(),
            })
            .collect(),
        where_cond,
        group_by: Vec::new(),
        order_by,
        limit,
        pos: Pos::default(),
    });

    StatementCase {
        text: pretty_stmt(&stmt),
        bindings,
    }
}

fn random_predicate(
    rng: &mut StdRng,
    from: &[FromEntry],
    bindings: &mut BTreeMap<String, SqlValue>,
    param_counter: &mut usize,
) -> Cond {
    let entry = &from[rng.gen_range(0..from.len())];
    let (column, ty, nullable) = entry.columns[rng.gen_range(0..entry.columns.len())].clone();
    let col = ValExpr::Col(entry.colref(&column));

    let numeric = matches!(ty, SqlType::Int | SqlType::Float);
    // Date and Char have no literal form usable in every position, so
    // they lean on placeholders and null tests
    let literal_ok = !matches!(ty, SqlType::Date);

    let choice = rng.gen_range(0..100);
    if choice < 20 && nullable {
        return Cond::IsNull {
            col: entry.colref(&column),
            negated: rng.gen_bool(0.5),
            pos: Pos::default(),
        };
    }
    if choice < 40 && numeric && literal_ok {
        let (lo, hi) = ordered_bounds(rng, ty);
        return Cond::Between {
            subject: col,
            lo: ValExpr::Const {
                lit: to_lit(&lo),
                pos: Pos::default(),
            },
            hi: ValExpr::Const {
                lit: to_lit(&hi),
                pos: Pos::default(),
            },
            pos: Pos::default(),
        };
    }
    if choice < 60 {
        // column vs column of the same type
        let mut partners = Vec::new();
        for other in from {
            for (c, t, _) in &other.columns {
                if *t == ty && !(std::ptr::eq(other, entry) && *c == column) {
                    partners.push(other.colref(c));
                }
            }
        }
        if let Some(partner) = partners.get(rng.gen_range(0..partners.len().max(1))) {
            return Cond::Cmp {
                op: random_op(rng),
                lhs: col,
                rhs: ValExpr::Col(partner.clone()),
                pos: Pos::default(),
            };
        }
    }
    if choice < 80 || !literal_ok {
        // column vs placeholder, with a generated binding
        let name = format!("p{param_counter}");
        *param_counter += 1;
        let value = if nullable && rng.gen_bool(0.15) {
            SqlValue::Null
        } else {
            value_pool(rng, ty)
        };
        bindings.insert(name.clone(), value);
        return Cond::Cmp {
            op: random_op(rng),
            lhs: col,
            rhs: ValExpr::Placeholder {
                name,
                pos: Pos::default(),
            },
            pos: Pos::default(),
        };
    }
    // column vs constant
    let value = value_pool(rng, ty);
    Cond::Cmp {
        op: random_op(rng),
        lhs: col,
        rhs: ValExpr::Const {
            lit: to_lit(&value),
            pos: Pos::default(),
        },
        pos: Pos::default(),
    }
}

fn random_op(rng: &mut StdRng) -> CmpOp {
    const OPS: [CmpOp; 6] = [
        CmpOp::Eq,
        CmpOp::Ne,
        CmpOp::Lt,
        CmpOp::Le,
        CmpOp::Gt,
        CmpOp::Ge,
    ];
    OPS[rng.gen_range(0..OPS.len())]
}

fn ordered_bounds(rng: &mut StdRng, ty: SqlType) -> (SqlValue, SqlValue) {
    let a = value_pool(rng, ty);
    let b = value_pool(rng, ty);
    match super::oracle::cmp_values(&a, &b) {
        std::cmp::Ordering::Greater => (b, a),
        _ => (a, b),
    }
}

fn to_lit(value: &SqlValue) -> Lit {
    match value {
        SqlValue::Int(n) => Lit::Int(*n),
        SqlValue::Float(x) => Lit::Float(*x),
        SqlValue::String(s) => Lit::Str(s.clone()),
        SqlValue::Char(c) => Lit::Str(c.to_string()),
        SqlValue::Bool(b) => Lit::Bool(*b),
        SqlValue::Date(_) | SqlValue::Null => unreachable!("no literal form"),
    }
}

/// The relationships of a model as (name, entity_a, entity_b), the
/// operand order `Satisfies` requires.
pub fn relation_triples(info: &ParserInfo) -> Vec<(String, String, String)> {
    info.relation_types
        .iter()
        .map(|(name, rel)| (name.clone(), rel.entity_a.clone(), rel.entity_b.clone()))
        .collect()
}
