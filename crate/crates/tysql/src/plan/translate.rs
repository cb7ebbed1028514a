//! Lowering of typed statements into query plans.
//!
//! The interesting part is desugaring `Satisfies`. A 1:1 or 1:n
//! relationship becomes an equality between the referenced entity's `Key`
//! and the foreign-key column, e.g. `Student.Key = Result.StudentTakingKey`.
//! An n:m relationship appends its join table to the table clause with a
//! fresh number and links both endpoints through it with two equalities.

use crate::analysis::{TypedColumn, TypedCond, TypedStmt, TypedVal};
use crate::erd::{ParserInfo, RelLink, KEY_COLUMN};
use crate::value::SqlType;

use super::{Constraint, DeletePlan, InsertPlan, PlanValue, QueryPlan, SelectPlan, TableClause, UpdatePlan};

/// Translates a fully typed statement. All failure cases were rejected by
/// the analysis phases, so translation is total.
pub fn translate(stmt: &TypedStmt, info: &ParserInfo) -> QueryPlan {
    match stmt {
        TypedStmt::Select(s) => {
            let mut from = s.from.iter();
            let mut tables = TableClause::new(from.next().expect("grammar requires a table").clone());
            tables.joins.extend(from.cloned());
            let criteria = match &s.where_cond {
                Some(cond) => lower_cond(cond, info, &mut tables),
                None => Constraint::True,
            };
            QueryPlan::Select(SelectPlan {
                quantifier: s.quantifier,
                projection: s.projection.clone(),
                tables,
                criteria,
                group_by: s.group_by.clone(),
                order_by: s.order_by.clone(),
                limit: s.limit,
            })
        }
        TypedStmt::Insert(s) => QueryPlan::Insert(InsertPlan {
            table: s.table.clone(),
            columns: s.columns.clone(),
            rows: s
                .rows
                .iter()
                .map(|row| row.iter().map(lower_value).collect())
                .collect(),
        }),
        TypedStmt::Update(s) => {
            let mut tables = TableClause::new(crate::analysis::ResolvedTable::new(&s.table, 0));
            QueryPlan::Update(UpdatePlan {
                table: s.table.clone(),
                assigns: s
                    .assigns
                    .iter()
                    .map(|(c, v)| (c.clone(), lower_value(v)))
                    .collect(),
                criteria: match &s.where_cond {
                    Some(cond) => lower_cond(cond, info, &mut tables),
                    None => Constraint::True,
                },
            })
        }
        TypedStmt::Delete(s) => {
            let mut tables = TableClause::new(crate::analysis::ResolvedTable::new(&s.table, 0));
            QueryPlan::Delete(DeletePlan {
                table: s.table.clone(),
                criteria: match &s.where_cond {
                    Some(cond) => lower_cond(cond, info, &mut tables),
                    None => Constraint::True,
                },
            })
        }
    }
}

fn lower_value(v: &TypedVal) -> PlanValue {
    match v {
        TypedVal::Col(c) => PlanValue::Col(c.clone()),
        TypedVal::Const(value) => PlanValue::Const(value.clone()),
        TypedVal::Param { name, ty, nullable } => PlanValue::Param {
            name: name.clone(),
            ty: *ty,
            nullable: *nullable,
        },
    }
}

fn key_col(table: &str, number: u32) -> TypedColumn {
    TypedColumn {
        table: table.to_string(),
        number,
        column: KEY_COLUMN.to_string(),
        ty: SqlType::Int,
    }
}

fn fk_col(table: &str, number: u32, column: &str) -> TypedColumn {
    TypedColumn {
        table: table.to_string(),
        number,
        column: column.to_string(),
        ty: SqlType::Int,
    }
}

/// Rewrites one `Satisfies lhs rel rhs` condition. A 1:1 or 1:n
/// relationship becomes the key/foreign-key equality; an n:m relationship
/// appends its join table to the clause under a fresh number and links
/// both operands through it. The operands must already match the
/// relationship's declared endpoints.
pub fn desugar_satisfies(
    lhs: &crate::analysis::ResolvedTable,
    rel: &str,
    rhs: &crate::analysis::ResolvedTable,
    info: &ParserInfo,
    tables: &mut TableClause,
) -> Constraint {
    let relation = info.relation(rel).expect("consistency checked relationship");
    match &relation.link {
        RelLink::ForeignKey { table, column } => {
            // the holder side carries the fk; the other end is referenced
            // through its key
            let (referenced, holder) = if *table == relation.entity_b {
                (lhs, rhs)
            } else {
                (rhs, lhs)
            };
            Constraint::eq(
                PlanValue::Col(key_col(&referenced.table, referenced.number)),
                PlanValue::Col(fk_col(&holder.table, holder.number, column)),
            )
        }
        RelLink::JoinTable {
            table,
            column_a,
            column_b,
        } => {
            let number = tables.append(table);
            Constraint::And(vec![
                Constraint::eq(
                    PlanValue::Col(key_col(&lhs.table, lhs.number)),
                    PlanValue::Col(fk_col(table, number, column_a)),
                ),
                Constraint::eq(
                    PlanValue::Col(fk_col(table, number, column_b)),
                    PlanValue::Col(key_col(&rhs.table, rhs.number)),
                ),
            ])
        }
    }
}

fn lower_cond(cond: &TypedCond, info: &ParserInfo, tables: &mut TableClause) -> Constraint {
    match cond {
        TypedCond::Cmp { op, lhs, rhs } => Constraint::Cmp {
            op: *op,
            lhs: lower_value(lhs),
            rhs: lower_value(rhs),
        },
        TypedCond::Between { subject, lo, hi } => Constraint::Between {
            subject: lower_value(subject),
            lo: lower_value(lo),
            hi: lower_value(hi),
        },
        TypedCond::IsNull { col, negated } => Constraint::IsNull {
            col: col.clone(),
            negated: *negated,
        },
        TypedCond::Satisfies { lhs, rel, rhs } => desugar_satisfies(lhs, rel, rhs, info, tables),
        TypedCond::And(list) => {
            // a desugared n:m Satisfies already contributes an And pair;
            // splice it to keep the tree flat
            let mut out = Vec::new();
            for c in list {
                match lower_cond(c, info, tables) {
                    Constraint::And(inner) => out.extend(inner),
                    other => out.push(other),
                }
            }
            Constraint::And(out)
        }
        TypedCond::Or(list) => {
            Constraint::Or(list.iter().map(|c| lower_cond(c, info, tables)).collect())
        }
        TypedCond::Not(inner) => Constraint::Not(Box::new(lower_cond(inner, info, tables))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::analyze;
    use crate::analysis::ResolvedTable;
    use crate::erd::{build_parser_info, parse_erd, transform};
    use crate::sql::{parse_statement, CmpOp, Quantifier};
    use crate::value::SqlValue;

    fn uni_info() -> ParserInfo {
        let model = parse_erd(include_str!("../../tests/fixtures/uni.erd")).unwrap();
        let schema = transform(&model);
        build_parser_info(&model, &schema, "/tmp/Uni.db")
    }

    fn plan(text: &str) -> QueryPlan {
        let info = uni_info();
        let stmt = parse_statement(text).unwrap();
        let typed = analyze(&stmt, &info).unwrap();
        translate(&typed, &info)
    }

    fn select_plan(text: &str) -> SelectPlan {
        match plan(text) {
            QueryPlan::Select(s) => s,
            other => panic!("expected select plan, got {other:?}"),
        }
    }

    #[test]
    fn single_table_placeholder_plan_shape() {
        let p = select_plan("Select s.Name From Student as s Where s.Age = {x};");
        assert_eq!(p.quantifier, Quantifier::All);
        assert_eq!(p.projection.len(), 1);
        assert_eq!(p.projection[0].column, "Name");
        assert_eq!(p.tables.head, ResolvedTable::new("Student", 0));
        assert!(p.tables.joins.is_empty());
        let Constraint::Cmp { op: CmpOp::Eq, lhs, rhs } = &p.criteria else {
            panic!("expected equality, got {:?}", p.criteria)
        };
        assert_eq!(
            *lhs,
            PlanValue::Col(TypedColumn {
                table: "Student".into(),
                number: 0,
                column: "Age".into(),
                ty: SqlType::Int,
            })
        );
        assert!(matches!(rhs, PlanValue::Param { name, ty: SqlType::Int, .. } if name == "x"));
    }

    #[test]
    fn relationship_join_plan_shape() {
        let p = select_plan(
            "Select Distinct s.Name, r.Grade From Student as s, Result as r \
             Where Satisfies s has_a r And r.Grade < 2.0;",
        );
        assert_eq!(p.quantifier, Quantifier::Distinct);
        assert_eq!(p.tables.head, ResolvedTable::new("Student", 0));
        assert_eq!(p.tables.joins, vec![ResolvedTable::new("Result", 0)]);
        let Constraint::And(parts) = &p.criteria else { panic!() };
        assert_eq!(parts.len(), 2);
        // Satisfies became Student.Key = Result.StudentTakingKey
        let Constraint::Cmp { op: CmpOp::Eq, lhs, rhs } = &parts[0] else { panic!() };
        assert!(matches!(lhs, PlanValue::Col(c) if c.table == "Student" && c.column == "Key"));
        assert!(
            matches!(rhs, PlanValue::Col(c) if c.table == "Result" && c.column == "StudentTakingKey")
        );
        // the 2.0 literal became a constant slot
        let Constraint::Cmp { op: CmpOp::Lt, rhs, .. } = &parts[1] else { panic!() };
        assert_eq!(*rhs, PlanValue::Const(SqlValue::Float(2.0)));
    }

    #[test]
    fn absent_where_becomes_the_true_criterion() {
        let p = select_plan("Select Name From Student;");
        assert_eq!(p.criteria, Constraint::True);
    }

    #[test]
    fn many_to_many_satisfies_appends_the_join_table() {
        let p = select_plan(
            "Select s.Name, l.Title From Student as s, Lecture as l Where Satisfies s Participation l;",
        );
        assert_eq!(
            p.tables.joins,
            vec![
                ResolvedTable::new("Lecture", 0),
                ResolvedTable::new("Participation", 0),
            ]
        );
        let Constraint::And(parts) = &p.criteria else { panic!() };
        assert_eq!(parts.len(), 2);
        let Constraint::Cmp { lhs, rhs, .. } = &parts[0] else { panic!() };
        assert!(matches!(lhs, PlanValue::Col(c) if c.table == "Student" && c.column == "Key"));
        assert!(matches!(
            rhs,
            PlanValue::Col(c) if c.table == "Participation" && c.column == "StudentParticipationKey"
        ));
        let Constraint::Cmp { lhs, rhs, .. } = &parts[1] else { panic!() };
        assert!(matches!(
            lhs,
            PlanValue::Col(c) if c.table == "Participation" && c.column == "LectureParticipationKey"
        ));
        assert!(matches!(rhs, PlanValue::Col(c) if c.table == "Lecture" && c.column == "Key"));
    }

    #[test]
    fn join_table_numbers_stay_dense_when_it_is_also_in_from() {
        let p = select_plan(
            "Select s.Name, p.Key From Student as s, Lecture as l, Participation as p \
             Where Satisfies s Participation l And p.Key = 1;",
        );
        // explicit Participation got 0, the appended one got 1
        assert_eq!(
            p.tables.joins,
            vec![
                ResolvedTable::new("Lecture", 0),
                ResolvedTable::new("Participation", 0),
                ResolvedTable::new("Participation", 1),
            ]
        );
    }

    #[test]
    fn update_and_delete_plans() {
        let QueryPlan::Update(u) = plan("Update Student Set Age = {a} Where Name = 'Joe';") else {
            panic!()
        };
        assert_eq!(u.table, "Student");
        assert!(matches!(&u.assigns[0].1, PlanValue::Param { ty: SqlType::Int, .. }));

        let QueryPlan::Delete(d) = plan("Delete From Result;") else { panic!() };
        assert_eq!(d.criteria, Constraint::True);
    }
}
