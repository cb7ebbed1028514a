//! Rendering of query plans into parameterized SQL text.
//!
//! The output style follows the runtime library the plans are modeled on:
//! lowercase keywords, `Distinct` capitalized, single-quoted table names,
//! `("Table"."Column")` projections, equality spelled `==`, and cross
//! joins for multi-table clauses:
//!
//! ```text
//! select ("Student"."Name") from 'Student' where (("Student"."Age") == ?);
//! ```
//!
//! Every constant and parameter becomes a `?` hole with a slot recorded in
//! left-to-right order; user values never appear in the text. When a table
//! occurs more than once in the clause, each occurrence is aliased as
//! `"Name#k"` (`#` cannot occur in model identifiers, so aliases never
//! collide with real tables).

use std::collections::BTreeMap;

use crate::analysis::TypedColumn;
use crate::sql::{CmpOp, Quantifier, SortDir};
use crate::value::{SqlType, SqlValue};

use super::{Constraint, PlanValue, QueryPlan, SelectPlan, TableClause};

/// One `?` hole of a rendered statement: a constant from the statement
/// text or a named parameter to be bound at execution time.
#[derive(Debug, Clone, PartialEq)]
pub enum Slot {
    Const(SqlValue),
    Param {
        name: String,
        ty: SqlType,
        nullable: bool,
    },
}

/// SQL text with `?` holes plus its slots in hole order.
#[derive(Debug, Clone, PartialEq)]
pub struct RenderedSql {
    pub text: String,
    pub slots: Vec<Slot>,
}

/// Renders a plan deterministically. Two plans differing only in constant
/// payloads render identical text with different slots.
pub fn render(plan: &QueryPlan) -> RenderedSql {
    let mut out = Renderer::default();
    match plan {
        QueryPlan::Select(s) => out.select(s),
        QueryPlan::Insert(s) => {
            out.text.push_str(&format!(
                "insert into '{}' ({})",
                s.table,
                s.columns
                    .iter()
                    .map(|c| format!("\"{c}\""))
                    .collect::<Vec<_>>()
                    .join(", ")
            ));
            out.text.push_str(" values ");
            for (i, row) in s.rows.iter().enumerate() {
                if i > 0 {
                    out.text.push_str(", ");
                }
                out.text.push('(');
                for (j, value) in row.iter().enumerate() {
                    if j > 0 {
                        out.text.push_str(", ");
                    }
                    out.hole(value);
                }
                out.text.push(')');
            }
        }
        QueryPlan::Update(s) => {
            let quals = single_table_qualifiers(&s.table);
            out.text.push_str(&format!("update '{}' set ", s.table));
            for (i, (column, value)) in s.assigns.iter().enumerate() {
                if i > 0 {
                    out.text.push_str(", ");
                }
                out.text.push_str(&format!("\"{column}\" = "));
                out.hole(value);
            }
            out.where_clause(&s.criteria, &quals);
        }
        QueryPlan::Delete(s) => {
            let quals = single_table_qualifiers(&s.table);
            out.text.push_str(&format!("delete from '{}'", s.table));
            out.where_clause(&s.criteria, &quals);
        }
    }
    out.text.push(';');
    RenderedSql {
        text: out.text,
        slots: out.slots,
    }
}

/// Rendered qualifier per (table, number). Tables referenced once keep
/// their plain name; repeated ones get `Name#k` aliases.
type Qualifiers = BTreeMap<(String, u32), String>;

fn clause_qualifiers(tables: &TableClause) -> Qualifiers {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for t in tables.iter() {
        *counts.entry(t.table.as_str()).or_insert(0) += 1;
    }
    let mut quals = Qualifiers::new();
    for t in tables.iter() {
        let name = if counts[t.table.as_str()] > 1 {
            format!("{}#{}", t.table, t.number)
        } else {
            t.table.clone()
        };
        quals.insert((t.table.clone(), t.number), name);
    }
    quals
}

fn single_table_qualifiers(table: &str) -> Qualifiers {
    let mut quals = Qualifiers::new();
    quals.insert((table.to_string(), 0), table.to_string());
    quals
}

#[derive(Default)]
struct Renderer {
    text: String,
    slots: Vec<Slot>,
}

impl Renderer {
    fn select(&mut self, s: &SelectPlan) {
        let quals = clause_qualifiers(&s.tables);
        self.text.push_str("select ");
        if s.quantifier == Quantifier::Distinct {
            self.text.push_str("Distinct ");
        }
        let projection: Vec<String> = s
            .projection
            .iter()
            .map(|c| format!("({})", qualified_col(c, &quals)))
            .collect();
        self.text.push_str(&projection.join(", "));
        self.text.push_str(" from ");
        for (i, t) in s.tables.iter().enumerate() {
            if i > 0 {
                self.text.push_str(" cross join ");
            }
            let qual = &quals[&(t.table.clone(), t.number)];
            if *qual == t.table {
                self.text.push_str(&format!("'{}'", t.table));
            } else {
                self.text.push_str(&format!("'{}' as \"{qual}\"", t.table));
            }
        }
        self.where_clause(&s.criteria, &quals);
        if !s.group_by.is_empty() {
            let cols: Vec<String> = s.group_by.iter().map(|c| qualified_col(c, &quals)).collect();
            self.text.push_str(&format!(" group by {}", cols.join(", ")));
        }
        if !s.order_by.is_empty() {
            let terms: Vec<String> = s
                .order_by
                .iter()
                .map(|(c, dir)| {
                    let dir = match dir {
                        SortDir::Asc => "asc",
                        SortDir::Desc => "desc",
                    };
                    format!("{} {dir}", qualified_col(c, &quals))
                })
                .collect();
            self.text.push_str(&format!(" order by {}", terms.join(", ")));
        }
        if let Some(n) = s.limit {
            self.text.push_str(&format!(" limit {n}"));
        }
    }

    fn where_clause(&mut self, criteria: &Constraint, quals: &Qualifiers) {
        if *criteria == Constraint::True {
            return;
        }
        self.text.push_str(" where ");
        self.constraint(criteria, quals);
    }

    fn constraint(&mut self, c: &Constraint, quals: &Qualifiers) {
        match c {
            Constraint::Cmp { op, lhs, rhs } => {
                self.text.push('(');
                self.value(lhs, quals, true);
                self.text.push_str(&format!(" {} ", op_text(*op)));
                self.value(rhs, quals, false);
                self.text.push(')');
            }
            Constraint::Between { subject, lo, hi } => {
                self.text.push('(');
                self.value(subject, quals, true);
                self.text.push_str(" between ");
                self.value(lo, quals, false);
                self.text.push_str(" and ");
                self.value(hi, quals, false);
                self.text.push(')');
            }
            Constraint::IsNull { col, negated } => {
                let test = if *negated { "is not null" } else { "is null" };
                self.text
                    .push_str(&format!("(({}) {test})", qualified_col(col, quals)));
            }
            Constraint::And(list) => self.junction(list, " and ", quals),
            Constraint::Or(list) => self.junction(list, " or ", quals),
            Constraint::Not(inner) => {
                self.text.push_str("(not ");
                self.wrapped(inner, quals);
                self.text.push(')');
            }
            Constraint::True => self.text.push_str("(1 == 1)"),
        }
    }

    fn junction(&mut self, list: &[Constraint], sep: &str, quals: &Qualifiers) {
        for (i, c) in list.iter().enumerate() {
            if i > 0 {
                self.text.push_str(sep);
            }
            self.wrapped(c, quals);
        }
    }

    /// Nested junctions need their own parentheses; atoms already carry
    /// them.
    fn wrapped(&mut self, c: &Constraint, quals: &Qualifiers) {
        match c {
            Constraint::And(_) | Constraint::Or(_) | Constraint::True => {
                self.text.push('(');
                self.constraint(c, quals);
                self.text.push(')');
            }
            _ => self.constraint(c, quals),
        }
    }

    fn value(&mut self, v: &PlanValue, quals: &Qualifiers, lhs: bool) {
        match v {
            PlanValue::Col(c) => {
                if lhs {
                    self.text.push_str(&format!("({})", qualified_col(c, quals)));
                } else {
                    self.text.push_str(&qualified_col(c, quals));
                }
            }
            _ => self.hole(v),
        }
    }

    fn hole(&mut self, v: &PlanValue) {
        match v {
            PlanValue::Const(value) => self.slots.push(Slot::Const(value.clone())),
            PlanValue::Param { name, ty, nullable } => self.slots.push(Slot::Param {
                name: name.clone(),
                ty: *ty,
                nullable: *nullable,
            }),
            PlanValue::Col(c) => unreachable!("column {c:?} is not a hole"),
        }
        self.text.push('?');
    }
}

fn qualified_col(c: &TypedColumn, quals: &Qualifiers) -> String {
    let fallback = c.table.clone();
    let qual = quals
        .get(&(c.table.clone(), c.number))
        .unwrap_or(&fallback);
    format!("\"{qual}\".\"{}\"", c.column)
}

fn op_text(op: CmpOp) -> &'static str {
    match op {
        CmpOp::Eq => "==",
        CmpOp::Ne => "!=",
        CmpOp::Lt => "<",
        CmpOp::Le => "<=",
        CmpOp::Gt => ">",
        CmpOp::Ge => ">=",
    }
}

/// Renders a bare criteria tree qualified by a single table, for callers
/// that assemble their own statement text around it.
pub(crate) fn render_constraint_standalone(c: &Constraint, table: &str) -> (String, Vec<Slot>) {
    let mut out = Renderer::default();
    out.constraint(c, &single_table_qualifiers(table));
    (out.text, out.slots)
}

/// A stable, indented, human-readable plan description for diagnostics.
pub fn describe(plan: &QueryPlan) -> String {
    let mut out = String::new();
    match plan {
        QueryPlan::Select(s) => {
            out.push_str("select\n");
            out.push_str(&format!(
                "  quantifier: {}\n",
                match s.quantifier {
                    Quantifier::All => "all",
                    Quantifier::Distinct => "distinct",
                }
            ));
            for c in &s.projection {
                out.push_str(&format!("  project {}: {}\n", col_id(c), c.ty));
            }
            let tables: Vec<String> = s
                .tables
                .iter()
                .map(|t| format!("{}#{}", t.table, t.number))
                .collect();
            out.push_str(&format!("  from {}\n", tables.join(" cross join ")));
            if s.criteria != Constraint::True {
                out.push_str("  where\n");
                describe_constraint(&s.criteria, 4, &mut out);
            }
            if !s.group_by.is_empty() {
                let cols: Vec<String> = s.group_by.iter().map(col_id).collect();
                out.push_str(&format!("  group by {}\n", cols.join(", ")));
            }
            if !s.order_by.is_empty() {
                let terms: Vec<String> = s
                    .order_by
                    .iter()
                    .map(|(c, dir)| {
                        format!(
                            "{} {}",
                            col_id(c),
                            match dir {
                                SortDir::Asc => "asc",
                                SortDir::Desc => "desc",
                            }
                        )
                    })
                    .collect();
                out.push_str(&format!("  order by {}\n", terms.join(", ")));
            }
            if let Some(n) = s.limit {
                out.push_str(&format!("  limit {n}\n"));
            }
        }
        QueryPlan::Insert(s) => {
            out.push_str(&format!("insert into {}\n", s.table));
            out.push_str(&format!("  columns {}\n", s.columns.join(", ")));
            for row in &s.rows {
                let vals: Vec<String> = row.iter().map(value_id).collect();
                out.push_str(&format!("  row ({})\n", vals.join(", ")));
            }
        }
        QueryPlan::Update(s) => {
            out.push_str(&format!("update {}\n", s.table));
            for (column, value) in &s.assigns {
                out.push_str(&format!("  set {column} = {}\n", value_id(value)));
            }
            if s.criteria != Constraint::True {
                out.push_str("  where\n");
                describe_constraint(&s.criteria, 4, &mut out);
            }
        }
        QueryPlan::Delete(s) => {
            out.push_str(&format!("delete from {}\n", s.table));
            if s.criteria != Constraint::True {
                out.push_str("  where\n");
                describe_constraint(&s.criteria, 4, &mut out);
            }
        }
    }
    out
}

fn col_id(c: &TypedColumn) -> String {
    format!("{}#{}.{}", c.table, c.number, c.column)
}

fn value_id(v: &PlanValue) -> String {
    match v {
        PlanValue::Col(c) => col_id(c),
        PlanValue::Const(value) => match value {
            SqlValue::Null => "const null".into(),
            other => format!(
                "const {} {other}",
                other.type_of().expect("non-null value").name()
            ),
        },
        PlanValue::Param { name, ty, nullable } => {
            let suffix = if *nullable { "?" } else { "" };
            format!("param {{{name}}}: {ty}{suffix}")
        }
    }
}

fn describe_constraint(c: &Constraint, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    match c {
        Constraint::Cmp { op, lhs, rhs } => {
            out.push_str(&format!(
                "{pad}{} {} {}\n",
                value_id(lhs),
                op_text(*op),
                value_id(rhs)
            ));
        }
        Constraint::Between { subject, lo, hi } => {
            out.push_str(&format!(
                "{pad}{} between {} and {}\n",
                value_id(subject),
                value_id(lo),
                value_id(hi)
            ));
        }
        Constraint::IsNull { col, negated } => {
            let test = if *negated { "is not null" } else { "is null" };
            out.push_str(&format!("{pad}{} {test}\n", col_id(col)));
        }
        Constraint::And(list) => {
            out.push_str(&format!("{pad}and\n"));
            for c in list {
                describe_constraint(c, indent + 2, out);
            }
        }
        Constraint::Or(list) => {
            out.push_str(&format!("{pad}or\n"));
            for c in list {
                describe_constraint(c, indent + 2, out);
            }
        }
        Constraint::Not(inner) => {
            out.push_str(&format!("{pad}not\n"));
            describe_constraint(inner, indent + 2, out);
        }
        Constraint::True => out.push_str(&format!("{pad}true\n")),
    }
}
