//! Type checking and placeholder inference.
//!
//! Columns are typed from the model, constants from their literal form,
//! and each `{name}` placeholder receives the type of the context it is
//! compared with or assigned to. There is no widening: `Int` and `Float`
//! never unify. A single-character string literal may serve as a `Char`
//! constant when the context requires it.
//!
//! A placeholder used several times must infer one type everywhere; its
//! binding may be null only if every context of the name tolerates null.

use std::collections::BTreeMap;

use crate::erd::ParserInfo;
use crate::sql::Pos;
use crate::value::{SqlType, SqlValue};

use super::error::{AnalysisError, Phase};
use super::tree::*;

/// Types a consistency-checked statement, inferring placeholder types from
/// context.
pub fn infer_types(stmt: &NamedStmt, info: &ParserInfo) -> Result<TypedStmt, Vec<AnalysisError>> {
    let mut typer = Typer {
        info,
        errors: Vec::new(),
        params: BTreeMap::new(),
    };
    let mut typed = match stmt {
        NamedStmt::Select(s) => TypedStmt::Select(typer.type_select(s)),
        NamedStmt::Insert(s) => TypedStmt::Insert(typer.type_insert(s)),
        NamedStmt::Update(s) => TypedStmt::Update(typer.type_update(s)),
        NamedStmt::Delete(s) => TypedStmt::Delete(TypedDelete {
            table: s.table.clone(),
            where_cond: s.where_cond.as_ref().map(|c| typer.type_cond(c)),
        }),
    };
    if typer.errors.is_empty() {
        // nullability of a name is the meet over all its contexts, so the
        // final flags are only known once the whole statement is walked
        let params = typer.params;
        patch_params(&mut typed, &params);
        Ok(typed)
    } else {
        Err(typer.errors)
    }
}

struct Inferred {
    ty: SqlType,
    nullable: bool,
}

struct Typer<'a> {
    info: &'a ParserInfo,
    errors: Vec<AnalysisError>,
    params: BTreeMap<String, Inferred>,
}

/// An operand under analysis: already typed, or a placeholder waiting for
/// a context type.
enum Operand {
    Typed {
        val: TypedVal,
        ty: SqlType,
        /// True for references to nullable columns.
        nullable: bool,
        desc: String,
        pos: Pos,
    },
    Pending {
        name: String,
        pos: Pos,
    },
}

impl Typer<'_> {
    fn error(&mut self, message: String, pos: Pos) {
        self.errors.push(AnalysisError::new(Phase::Typer, message, pos));
    }

    fn type_col(&mut self, col: &NamedCol) -> TypedColumn {
        let ty = self
            .info
            .column_type(&col.table.table, &col.column)
            .expect("consistency checked column");
        TypedColumn {
            table: col.table.table.clone(),
            number: col.table.number,
            column: col.column.clone(),
            ty,
        }
    }

    fn analyze(&mut self, v: &NamedVal) -> Operand {
        match v {
            NamedVal::Col(col) => {
                let typed = self.type_col(col);
                let nullable = self
                    .info
                    .column_nullable(&col.table.table, &col.column)
                    .unwrap_or(false);
                Operand::Typed {
                    ty: typed.ty,
                    desc: format!("{} ({})", typed.ty, typed.column),
                    nullable,
                    pos: col.pos,
                    val: TypedVal::Col(typed),
                }
            }
            NamedVal::Const { lit, pos } => {
                let (value, ty) = lit_value(lit);
                Operand::Typed {
                    desc: ty.to_string(),
                    ty,
                    nullable: false,
                    pos: *pos,
                    val: TypedVal::Const(value),
                }
            }
            NamedVal::Placeholder { name, pos } => Operand::Pending {
                name: name.clone(),
                pos: *pos,
            },
        }
    }

    /// Records a context type for a placeholder. A second context must
    /// agree on the type; null stays admissible only if every context
    /// allows it.
    fn unify(&mut self, name: &str, ty: SqlType, nullable: bool, pos: Pos) -> TypedVal {
        let conflict = match self.params.get_mut(name) {
            Some(existing) => {
                existing.nullable &= nullable;
                (existing.ty != ty).then_some(existing.ty)
            }
            None => {
                self.params.insert(name.to_string(), Inferred { ty, nullable });
                None
            }
        };
        if let Some(prev) = conflict {
            self.error(
                format!(
                    "placeholder `{{{name}}}` was inferred as {prev} but is used here as {ty}"
                ),
                pos,
            );
        }
        TypedVal::Param {
            name: name.to_string(),
            ty,
            nullable,
        }
    }

    fn incompatible(&mut self, lhs_desc: &str, rhs_desc: &str, pos: Pos) {
        self.error(
            format!("Type error: {lhs_desc} and {rhs_desc} are not compatible."),
            pos,
        );
    }

    /// A single-character string constant becomes a `Char` constant when
    /// the other side of the comparison is `Char`-typed.
    fn adapt_char(operand: &mut Operand, other_ty: SqlType) {
        if other_ty != SqlType::Char {
            return;
        }
        if let Operand::Typed { val, ty, desc, .. } = operand {
            if let TypedVal::Const(SqlValue::String(s)) = val {
                let mut chars = s.chars();
                if let (Some(c), None) = (chars.next(), chars.next()) {
                    *val = TypedVal::Const(SqlValue::Char(c));
                    *ty = SqlType::Char;
                    *desc = SqlType::Char.to_string();
                }
            }
        }
    }

    fn type_cmp(&mut self, op: crate::sql::CmpOp, lhs: &NamedVal, rhs: &NamedVal, pos: Pos) -> TypedCond {
        let mut left = self.analyze(lhs);
        let mut right = self.analyze(rhs);
        if let Operand::Typed { ty, .. } = right {
            Self::adapt_char(&mut left, ty);
        }
        if let Operand::Typed { ty, .. } = left {
            Self::adapt_char(&mut right, ty);
        }
        let (lhs, rhs) = match (left, right) {
            (Operand::Pending { name: a, .. }, Operand::Pending { name: b, pos }) => {
                self.error(
                    format!(
                        "it is not allowed to compare two embedded expressions `{{{a}}}` and `{{{b}}}`"
                    ),
                    pos,
                );
                (dummy(), dummy())
            }
            (
                Operand::Pending { name, pos },
                Operand::Typed {
                    val, ty, nullable, ..
                },
            ) => (self.unify(&name, ty, nullable, pos), val),
            (
                Operand::Typed {
                    val, ty, nullable, ..
                },
                Operand::Pending { name, pos },
            ) => {
                let param = self.unify(&name, ty, nullable, pos);
                (val, param)
            }
            (
                Operand::Typed {
                    val: lv,
                    ty: lt,
                    desc: ld,
                    ..
                },
                Operand::Typed {
                    val: rv,
                    ty: rt,
                    desc: rd,
                    ..
                },
            ) => {
                if lt != rt {
                    self.incompatible(&ld, &rd, pos);
                }
                (lv, rv)
            }
        };
        TypedCond::Cmp { op, lhs, rhs }
    }

    fn type_between(
        &mut self,
        subject: &NamedVal,
        lo: &NamedVal,
        hi: &NamedVal,
        pos: Pos,
    ) -> TypedCond {
        let operands = [self.analyze(subject), self.analyze(lo), self.analyze(hi)];

        let mut agreed: Option<(SqlType, bool, String)> = None;
        for op in &operands {
            if let Operand::Typed {
                ty, desc, nullable, ..
            } = op
            {
                match &mut agreed {
                    None => agreed = Some((*ty, *nullable, desc.clone())),
                    Some((t, n, first_desc)) => {
                        if t != ty {
                            let first = first_desc.clone();
                            let second = desc.clone();
                            self.incompatible(&first, &second, pos);
                        }
                        *n |= *nullable;
                    }
                }
            }
        }
        let Some((ty, nullable, _)) = agreed else {
            self.error(
                "cannot infer types in `Between` with only embedded expressions".into(),
                pos,
            );
            return TypedCond::Between {
                subject: dummy(),
                lo: dummy(),
                hi: dummy(),
            };
        };
        if !matches!(ty, SqlType::Int | SqlType::Float) {
            self.error(format!("`Between` requires a numeric type, got {ty}"), pos);
        }

        let mut vals = operands.into_iter().map(|op| match op {
            Operand::Typed { val, .. } => val,
            Operand::Pending { name, pos } => self.unify(&name, ty, nullable, pos),
        });
        TypedCond::Between {
            subject: vals.next().unwrap(),
            lo: vals.next().unwrap(),
            hi: vals.next().unwrap(),
        }
    }

    fn type_cond(&mut self, c: &NamedCond) -> TypedCond {
        match c {
            NamedCond::Cmp { op, lhs, rhs, pos } => self.type_cmp(*op, lhs, rhs, *pos),
            NamedCond::Between {
                subject,
                lo,
                hi,
                pos,
            } => self.type_between(subject, lo, hi, *pos),
            NamedCond::IsNull { col, negated, .. } => TypedCond::IsNull {
                col: self.type_col(col),
                negated: *negated,
            },
            NamedCond::Satisfies { lhs, rel, rhs, .. } => TypedCond::Satisfies {
                lhs: lhs.clone(),
                rel: rel.clone(),
                rhs: rhs.clone(),
            },
            NamedCond::And(list) => TypedCond::And(list.iter().map(|c| self.type_cond(c)).collect()),
            NamedCond::Or(list) => TypedCond::Or(list.iter().map(|c| self.type_cond(c)).collect()),
            NamedCond::Not(inner, _) => TypedCond::Not(Box::new(self.type_cond(inner))),
        }
    }

    fn type_select(&mut self, s: &NamedSelect) -> TypedSelect {
        TypedSelect {
            quantifier: s.quantifier,
            projection: s.projection.iter().map(|c| self.type_col(c)).collect(),
            from: s.from.clone(),
            where_cond: s.where_cond.as_ref().map(|c| self.type_cond(c)),
            group_by: s.group_by.iter().map(|c| self.type_col(c)).collect(),
            order_by: s
                .order_by
                .iter()
                .map(|(c, dir)| (self.type_col(c), *dir))
                .collect(),
            limit: s.limit,
        }
    }

    /// Types a value against its target column in an insert row or update
    /// assignment.
    fn type_against_column(&mut self, table: &str, column: &str, value: &NamedVal) -> TypedVal {
        let ty = self
            .info
            .column_type(table, column)
            .expect("consistency checked column");
        let nullable = self.info.column_nullable(table, column).unwrap_or(false);
        match value {
            NamedVal::Const { lit: Lit::Null, .. } => TypedVal::Const(SqlValue::Null),
            NamedVal::Const { .. } => {
                let mut operand = self.analyze(value);
                Self::adapt_char(&mut operand, ty);
                match operand {
                    Operand::Typed {
                        val,
                        ty: value_ty,
                        desc,
                        pos,
                        ..
                    } => {
                        if value_ty != ty {
                            let col_desc = format!("{ty} ({column})");
                            self.incompatible(&col_desc, &desc, pos);
                        }
                        val
                    }
                    Operand::Pending { .. } => unreachable!("constants are typed"),
                }
            }
            NamedVal::Placeholder { name, pos } => self.unify(name, ty, nullable, *pos),
            NamedVal::Col(c) => unreachable!("column reference {c:?} in a value position"),
        }
    }

    fn type_insert(&mut self, s: &NamedInsert) -> TypedInsert {
        TypedInsert {
            table: s.table.clone(),
            columns: s.columns.iter().map(|(c, _)| c.clone()).collect(),
            rows: s
                .rows
                .iter()
                .map(|row| {
                    s.columns
                        .iter()
                        .zip(row)
                        .map(|((column, _), value)| self.type_against_column(&s.table, column, value))
                        .collect()
                })
                .collect(),
        }
    }

    fn type_update(&mut self, s: &NamedUpdate) -> TypedUpdate {
        TypedUpdate {
            table: s.table.clone(),
            assigns: s
                .assigns
                .iter()
                .map(|(column, _, value)| {
                    (
                        column.clone(),
                        self.type_against_column(&s.table, column, value),
                    )
                })
                .collect(),
            where_cond: s.where_cond.as_ref().map(|c| self.type_cond(c)),
        }
    }
}

fn lit_value(lit: &Lit) -> (SqlValue, SqlType) {
    match lit {
        Lit::Int(n) => (SqlValue::Int(*n), SqlType::Int),
        Lit::Float(x) => (SqlValue::Float(*x), SqlType::Float),
        Lit::Str(s) => (SqlValue::String(s.clone()), SqlType::String),
        Lit::Bool(b) => (SqlValue::Bool(*b), SqlType::Bool),
        Lit::Null => (SqlValue::Null, SqlType::String),
    }
}

fn dummy() -> TypedVal {
    TypedVal::Const(SqlValue::Int(0))
}

/// Rewrites every `Param` node with the final nullability of its name.
fn patch_params(stmt: &mut TypedStmt, params: &BTreeMap<String, Inferred>) {
    fn patch_val(v: &mut TypedVal, params: &BTreeMap<String, Inferred>) {
        if let TypedVal::Param { name, nullable, .. } = v {
            if let Some(inferred) = params.get(name) {
                *nullable = inferred.nullable;
            }
        }
    }
    fn patch_cond(c: &mut TypedCond, params: &BTreeMap<String, Inferred>) {
        match c {
            TypedCond::Cmp { lhs, rhs, .. } => {
                patch_val(lhs, params);
                patch_val(rhs, params);
            }
            TypedCond::Between { subject, lo, hi } => {
                patch_val(subject, params);
                patch_val(lo, params);
                patch_val(hi, params);
            }
            TypedCond::IsNull { .. } | TypedCond::Satisfies { .. } => {}
            TypedCond::And(list) | TypedCond::Or(list) => {
                list.iter_mut().for_each(|c| patch_cond(c, params))
            }
            TypedCond::Not(inner) => patch_cond(inner, params),
        }
    }
    match stmt {
        TypedStmt::Select(s) => {
            if let Some(c) = &mut s.where_cond {
                patch_cond(c, params);
            }
        }
        TypedStmt::Insert(s) => {
            for row in &mut s.rows {
                row.iter_mut().for_each(|v| patch_val(v, params));
            }
        }
        TypedStmt::Update(s) => {
            for (_, v) in &mut s.assigns {
                patch_val(v, params);
            }
            if let Some(c) = &mut s.where_cond {
                patch_cond(c, params);
            }
        }
        TypedStmt::Delete(s) => {
            if let Some(c) = &mut s.where_cond {
                patch_cond(c, params);
            }
        }
    }
}
