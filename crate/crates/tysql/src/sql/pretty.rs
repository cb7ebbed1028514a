//! Canonical re-rendering of dialect ASTs as source text. Re-parsing the
//! output yields a structurally equal tree, which the parser tests lean on.

use super::ast::*;


pub fn pretty_stmt(stmt: &Stmt) -> String {
    match stmt {
        Stmt::Select(s) => pretty_select(s),
        Stmt::Insert(s) => pretty_insert(s),
        Stmt::Update(s) => pretty_update(s),
        Stmt::Delete(s) => pretty_delete(s),
    }
}

fn pretty_select(s: &SelectStmt) -> String {
    let mut out = String::from("Select ");
    if s.quantifier == Quantifier::Distinct {
        out.push_str("Distinct ");
    }
    match &s.projection {
        Projection::Star(_) => out.push('*'),
        Projection::Items(items) => out.push_str(&join(items.iter().map(colref), ", ")),
    }
    out.push_str(" From ");
    out.push_str(&join(
        s.from.iter().map(|t| match &t.alias {
            Some(a) => format!("{} as {a}", t.table),
            None => t.table.clone(),
        }),
        ", ",
    ));
    if let Some(c) = &s.where_cond {
        out.push_str(" Where ");
        out.push_str(&cond(c, false));
    }
    if !s.group_by.is_empty() {
        out.push_str(" Group By ");
        out.push_str(&join(s.group_by.iter().map(colref), ", "));
    }
    if !s.order_by.is_empty() {
        out.push_str(" Order By ");
        out.push_str(&join(
            s.order_by.iter().map(|(c, dir)| {
                let dir = match dir {
                    SortDir::Asc => "Asc",
                    SortDir::Desc => "Desc",
                };
                format!("{} {dir}", colref(c))
            }),
            ", ",
        ));
    }
    if let Some(n) = s.limit {
        out.push_str(&format!(" Limit {n}"));
    }
    out.push(';');
    out
}

fn pretty_insert(s: &InsertStmt) -> String {
    format!(
        "Insert Into {} ({}) Values {};",
        s.table,
        join(s.columns.iter().map(|(c, _)| c.clone()), ", "),
        join(
            s.rows
                .iter()
                .map(|row| format!("({})", join(row.iter().map(val), ", "))),
            ", "
        )
    )
}

fn pretty_update(s: &UpdateStmt) -> String {
    let mut out = format!(
        "Update {} Set {}",
        s.table,
        join(
            s.assigns
                .iter()
                .map(|a| format!("{} = {}", a.column, val(&a.value))),
            ", "
        )
    );
    if let Some(c) = &s.where_cond {
        out.push_str(" Where ");
        out.push_str(&cond(c, false));
    }
    out.push(';');
    out
}

fn pretty_delete(s: &DeleteStmt) -> String {
    let mut out = format!("Delete From {}", s.table);
    if let Some(c) = &s.where_cond {
        out.push_str(" Where ");
        out.push_str(&cond(c, false));
    }
    out.push(';');
    out
}

fn cond(c: &Cond, parenthesize: bool) -> String {
    let text = match c {
        Cond::Cmp { op, lhs, rhs, .. } => format!("{} {} {}", val(lhs), op.as_str(), val(rhs)),
        Cond::Between {
            subject, lo, hi, ..
        } => format!("{} Between {} And {}", val(subject), val(lo), val(hi)),
        Cond::IsNull { col, negated, .. } => {
            if *negated {
                format!("{} Is Not Null", colref(col))
            } else {
                format!("{} Is Null", colref(col))
            }
        }
        Cond::Satisfies { lhs, rel, rhs, .. } => format!("Satisfies {lhs} {rel} {rhs}"),
        Cond::And(list) => {
            return wrap(
                join(list.iter().map(|c| cond(c, true)), " And "),
                parenthesize,
            )
        }
        Cond::Or(list) => {
            return wrap(
                join(list.iter().map(|c| cond(c, true)), " Or "),
                parenthesize,
            )
        }
        Cond::Not(inner, _) => format!("Not {}", cond(inner, true)),
    };
    text
}

fn wrap(text: String, parenthesize: bool) -> String {
    if parenthesize {
        format!("({text})")
    } else {
        text
    }
}

fn val(v: &ValExpr) -> String {
    match v {
        ValExpr::Col(c) => colref(c),
        ValExpr::Const { lit, .. } => match lit {
            Lit::Int(n) => format!("{n}"),
            Lit::Float(x) => format!("{x:?}"),
            Lit::Str(s) => format!("'{}'", s.replace('\'', "''")),
            Lit::Bool(b) => format!("{b}"),
            Lit::Null => "null".into(),
        },
        ValExpr::Placeholder { name, .. } => format!("{{{name}}}"),
    }
}

fn colref(c: &ColRef) -> String {
    match &c.qualifier {
        Some(q) => format!("{q}.{}", c.column),
        None => c.column.clone(),
    }
}

fn join(items: impl Iterator<Item = String>, sep: &str) -> String {
    items.collect::<Vec<_>>().join(sep)
}
