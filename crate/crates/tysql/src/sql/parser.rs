//! Recursive-descent parser for the SQL dialect. The grammar is documented
//! in `docs/sql-grammar.ebnf`.

use super::ast::*;
use super::lexer::{tokenize, SyntaxError};
use super::token::{CmpOp, Keyword, Pos, Token, TokenKind};

/// Parses exactly one statement; the trailing semicolon is required and
/// nothing may follow it.
pub fn parse_statement(text: &str) -> Result<Stmt, SyntaxError> {
    let mut parser = Parser::new(text)?;
    let stmt = parser.parse_stmt()?;
    parser.expect_eof()?;
    Ok(stmt)
}

/// Parses a script of statements. After a syntax error the parser resumes
/// at the next semicolon, so every statement gets its own result.
pub fn parse_script(text: &str) -> Vec<Result<Stmt, SyntaxError>> {
    let mut results = Vec::new();
    let mut parser = match Parser::new(text) {
        Ok(p) => p,
        Err(e) => return vec![Err(e)],
    };
    while !parser.at_eof() {
        match parser.parse_stmt() {
            Ok(stmt) => results.push(Ok(stmt)),
            Err(e) => {
                results.push(Err(e));
                parser.resync();
            }
        }
    }
    results
}

struct Parser {
    tokens: Vec<Token>,
    index: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, SyntaxError> {
        Ok(Parser {
            tokens: tokenize(text)?,
            index: 0,
        })
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.index.min(self.tokens.len() - 1)]
    }

    fn next(&mut self) -> Token {
        let t = self.peek().clone();
        if self.index < self.tokens.len() - 1 {
            self.index += 1;
        }
        t
    }

    fn at_eof(&self) -> bool {
        self.peek().kind == TokenKind::Eof
    }

    fn at_kw(&self, kw: Keyword) -> bool {
        self.peek().kind == TokenKind::Keyword(kw)
    }

    fn eat_kw(&mut self, kw: Keyword) -> bool {
        if self.at_kw(kw) {
            self.next();
            true
        } else {
            false
        }
    }

    fn error_here(&self, expected: &str) -> SyntaxError {
        let tok = self.peek();
        SyntaxError::new(
            format!("unexpected {}, expected {expected}", tok.kind.describe()),
            tok.pos,
        )
    }

    fn expect_kw(&mut self, kw: Keyword) -> Result<Pos, SyntaxError> {
        if self.at_kw(kw) {
            Ok(self.next().pos)
        } else {
            Err(self.error_here(&format!("`{}`", kw.as_str())))
        }
    }

    fn expect_tok(&mut self, kind: TokenKind, expected: &str) -> Result<Pos, SyntaxError> {
        if self.peek().kind == kind {
            Ok(self.next().pos)
        } else {
            Err(self.error_here(expected))
        }
    }

    fn expect_ident(&mut self, what: &str) -> Result<(String, Pos), SyntaxError> {
        match &self.peek().kind {
            TokenKind::Ident(_) => {
                let tok = self.next();
                match tok.kind {
                    TokenKind::Ident(name) => Ok((name, tok.pos)),
                    _ => unreachable!(),
                }
            }
            _ => Err(self.error_here(what)),
        }
    }

    fn expect_semicolon(&mut self) -> Result<(), SyntaxError> {
        self.expect_tok(TokenKind::Semicolon, "`;`")?;
        Ok(())
    }

    fn expect_eof(&mut self) -> Result<(), SyntaxError> {
        if self.at_eof() {
            Ok(())
        } else {
            Err(self.error_here("end of input"))
        }
    }

    /// Skips past the next semicolon (or to end of input) after an error.
    fn resync(&mut self) {
        loop {
            match &self.peek().kind {
                TokenKind::Eof => break,
                TokenKind::Semicolon => {
                    self.next();
                    break;
                }
                _ => {
                    self.next();
                }
            }
        }
    }

    fn parse_stmt(&mut self) -> Result<Stmt, SyntaxError> {
        match &self.peek().kind {
            TokenKind::Keyword(Keyword::Select) => self.parse_select().map(Stmt::Select),
            TokenKind::Keyword(Keyword::Insert) => self.parse_insert().map(Stmt::Insert),
            TokenKind::Keyword(Keyword::Update) => self.parse_update().map(Stmt::Update),
            TokenKind::Keyword(Keyword::Delete) => self.parse_delete().map(Stmt::Delete),
            _ => Err(self.error_here("`Select`, `Insert`, `Update`, or `Delete`")),
        }
    }

    fn parse_select(&mut self) -> Result<SelectStmt, SyntaxError> {
        let pos = self.expect_kw(Keyword::Select)?;
        let quantifier = if self.eat_kw(Keyword::Distinct) {
            Quantifier::Distinct
        } else {
            self.eat_kw(Keyword::All);
            Quantifier::All
        };

        let projection = if self.peek().kind == TokenKind::Star {
            Projection::Star(self.next().pos)
        } else {
            let mut items = vec![self.parse_colref()?];
            while self.peek().kind == TokenKind::Comma {
                self.next();
                items.push(self.parse_colref()?);
            }
            Projection::Items(items)
        };

        self.expect_kw(Keyword::From)?;
        let mut from = vec![self.parse_tableref()?];
        while self.peek().kind == TokenKind::Comma {
            self.next();
            from.push(self.parse_tableref()?);
        }

        let where_cond = if self.eat_kw(Keyword::Where) {
            Some(self.parse_cond()?)
        } else {
            None
        };

        let mut group_by = Vec::new();
        if self.eat_kw(Keyword::Group) {
            self.expect_kw(Keyword::By)?;
            group_by.push(self.parse_colref()?);
            while self.peek().kind == TokenKind::Comma {
                self.next();
                group_by.push(self.parse_colref()?);
            }
        }

        let mut order_by = Vec::new();
        if self.eat_kw(Keyword::Order) {
            self.expect_kw(Keyword::By)?;
            loop {
                let col = self.parse_colref()?;
                let dir = if self.eat_kw(Keyword::Desc) {
                    SortDir::Desc
                } else {
                    self.eat_kw(Keyword::Asc);
                    SortDir::Asc
                };
                order_by.push((col, dir));
                if self.peek().kind == TokenKind::Comma {
                    self.next();
                } else {
                    break;
                }
            }
        }

        let limit = if self.eat_kw(Keyword::Limit) {
            match &self.peek().kind {
                TokenKind::IntLit(n) if *n > 0 => {
                    let n = *n as u64;
                    self.next();
                    Some(n)
                }
                _ => return Err(self.error_here("a positive integer")),
            }
        } else {
            None
        };

        self.expect_semicolon()?;
        Ok(SelectStmt {
            quantifier,
            projection,
            from,
            where_cond,
            group_by,
            order_by,
            limit,
            pos,
        })
    }

    fn parse_insert(&mut self) -> Result<InsertStmt, SyntaxError> {
        let pos = self.expect_kw(Keyword::Insert)?;
        self.expect_kw(Keyword::Into)?;
        let (table, table_pos) = self.expect_ident("table name")?;
        self.expect_tok(TokenKind::LParen, "`(`")?;
        let mut columns = vec![self.expect_ident("column name")?];
        while self.peek().kind == TokenKind::Comma {
            self.next();
            columns.push(self.expect_ident("column name")?);
        }
        self.expect_tok(TokenKind::RParen, "`)`")?;
        self.expect_kw(Keyword::Values)?;
        let mut rows = vec![self.parse_value_row()?];
        while self.peek().kind == TokenKind::Comma {
            self.next();
            rows.push(self.parse_value_row()?);
        }
        self.expect_semicolon()?;
        Ok(InsertStmt {
            table,
            table_pos,
            columns,
            rows,
            pos,
        })
    }

    fn parse_value_row(&mut self) -> Result<Vec<ValExpr>, SyntaxError> {
        self.expect_tok(TokenKind::LParen, "`(`")?;
        let mut row = vec![self.parse_plain_value()?];
        while self.peek().kind == TokenKind::Comma {
            self.next();
            row.push(self.parse_plain_value()?);
        }
        self.expect_tok(TokenKind::RParen, "`)`")?;
        Ok(row)
    }

    /// A value in insert rows and update assignments: a constant or a
    /// placeholder, never a column reference.
    fn parse_plain_value(&mut self) -> Result<ValExpr, SyntaxError> {
        match &self.peek().kind {
            TokenKind::IntLit(_)
            | TokenKind::FloatLit(_)
            | TokenKind::StrLit(_)
            | TokenKind::BoolLit(_)
            | TokenKind::NullLit
            | TokenKind::Placeholder(_) => self.parse_value(),
            _ => Err(self.error_here("a literal or `{name}` placeholder")),
        }
    }

    fn parse_update(&mut self) -> Result<UpdateStmt, SyntaxError> {
        let pos = self.expect_kw(Keyword::Update)?;
        let (table, table_pos) = self.expect_ident("table name")?;
        self.expect_kw(Keyword::Set)?;
        let mut assigns = vec![self.parse_assign()?];
        while self.peek().kind == TokenKind::Comma {
            self.next();
            assigns.push(self.parse_assign()?);
        }
        let where_cond = if self.eat_kw(Keyword::Where) {
            Some(self.parse_cond()?)
        } else {
            None
        };
        self.expect_semicolon()?;
        Ok(UpdateStmt {
            table,
            table_pos,
            assigns,
            where_cond,
            pos,
        })
    }

    fn parse_assign(&mut self) -> Result<Assign, SyntaxError> {
        let (column, pos) = self.expect_ident("column name")?;
        self.expect_tok(TokenKind::Op(CmpOp::Eq), "`=`")?;
        let value = self.parse_plain_value()?;
        Ok(Assign { column, value, pos })
    }

    fn parse_delete(&mut self) -> Result<DeleteStmt, SyntaxError> {
        let pos = self.expect_kw(Keyword::Delete)?;
        self.expect_kw(Keyword::From)?;
        let (table, table_pos) = self.expect_ident("table name")?;
        let where_cond = if self.eat_kw(Keyword::Where) {
            Some(self.parse_cond()?)
        } else {
            None
        };
        self.expect_semicolon()?;
        Ok(DeleteStmt {
            table,
            table_pos,
            where_cond,
            pos,
        })
    }

    fn parse_tableref(&mut self) -> Result<TableRef, SyntaxError> {
        let (table, pos) = self.expect_ident("table name")?;
        let alias = if self.eat_kw(Keyword::As) {
            Some(self.expect_ident("alias")?.0)
        } else {
            None
        };
        Ok(TableRef { table, alias, pos })
    }

    fn parse_colref(&mut self) -> Result<ColRef, SyntaxError> {
        let (first, pos) = self.expect_ident("column name")?;
        if self.peek().kind == TokenKind::Dot {
            self.next();
            let (column, _) = self.expect_ident("column name")?;
            Ok(ColRef {
                qualifier: Some(first),
                column,
                pos,
            })
        } else {
            Ok(ColRef {
                qualifier: None,
                column: first,
                pos,
            })
        }
    }

    fn parse_cond(&mut self) -> Result<Cond, SyntaxError> {
        let first = self.parse_and_cond()?;
        if !self.at_kw(Keyword::Or) {
            return Ok(first);
        }
        let mut list = vec![first];
        while self.eat_kw(Keyword::Or) {
            list.push(self.parse_and_cond()?);
        }
        Ok(Cond::Or(list))
    }

    fn parse_and_cond(&mut self) -> Result<Cond, SyntaxError> {
        let first = self.parse_not_cond()?;
        if !self.at_kw(Keyword::And) {
            return Ok(first);
        }
        let mut list = vec![first];
        while self.eat_kw(Keyword::And) {
            list.push(self.parse_not_cond()?);
        }
        Ok(Cond::And(list))
    }

    fn parse_not_cond(&mut self) -> Result<Cond, SyntaxError> {
        if self.at_kw(Keyword::Not) {
            let pos = self.next().pos;
            let inner = self.parse_not_cond()?;
            return Ok(Cond::Not(Box::new(inner), pos));
        }
        self.parse_atom_cond()
    }

    fn parse_atom_cond(&mut self) -> Result<Cond, SyntaxError> {
        if self.at_kw(Keyword::Satisfies) {
            let pos = self.next().pos;
            let (lhs, _) = self.expect_ident("table or alias")?;
            let (rel, _) = self.expect_ident("relationship name")?;
            let (rhs, _) = self.expect_ident("table or alias")?;
            return Ok(Cond::Satisfies { lhs, rel, rhs, pos });
        }
        if self.peek().kind == TokenKind::LParen {
            self.next();
            let inner = self.parse_cond()?;
            self.expect_tok(TokenKind::RParen, "`)`")?;
            return Ok(inner);
        }

        let lhs = self.parse_value()?;
        match &self.peek().kind {
            TokenKind::Op(_) => {
                let tok = self.next();
                let (op, pos) = match tok.kind {
                    TokenKind::Op(op) => (op, tok.pos),
                    _ => unreachable!(),
                };
                let rhs = self.parse_value()?;
                Ok(Cond::Cmp { op, lhs, rhs, pos })
            }
            TokenKind::Keyword(Keyword::Between) => {
                let pos = self.next().pos;
                let lo = self.parse_value()?;
                self.expect_kw(Keyword::And)?;
                let hi = self.parse_value()?;
                Ok(Cond::Between {
                    subject: lhs,
                    lo,
                    hi,
                    pos,
                })
            }
            TokenKind::Keyword(Keyword::Is) => {
                let pos = self.next().pos;
                let negated = self.eat_kw(Keyword::Not);
                self.expect_tok(TokenKind::NullLit, "`Null`")?;
                match lhs {
                    ValExpr::Col(col) => Ok(Cond::IsNull { col, negated, pos }),
                    other => Err(SyntaxError::new(
                        "`Is Null` applies to a column reference",
                        other.pos(),
                    )),
                }
            }
            _ => Err(self.error_here("a comparison operator, `Between`, or `Is`")),
        }
    }

    fn parse_value(&mut self) -> Result<ValExpr, SyntaxError> {
        let tok = self.peek().clone();
        match tok.kind {
            TokenKind::Ident(_) => Ok(ValExpr::Col(self.parse_colref()?)),
            TokenKind::IntLit(n) => {
                self.next();
                Ok(ValExpr::Const {
                    lit: Lit::Int(n),
                    pos: tok.pos,
                })
            }
            TokenKind::FloatLit(x) => {
                self.next();
                Ok(ValExpr::Const {
                    lit: Lit::Float(x),
                    pos: tok.pos,
                })
            }
            TokenKind::StrLit(ref s) => {
                self.next();
                Ok(ValExpr::Const {
                    lit: Lit::Str(s.clone()),
                    pos: tok.pos,
                })
            }
            TokenKind::BoolLit(b) => {
                self.next();
                Ok(ValExpr::Const {
                    lit: Lit::Bool(b),
                    pos: tok.pos,
                })
            }
            TokenKind::NullLit => {
                self.next();
                Ok(ValExpr::Const {
                    lit: Lit::Null,
                    pos: tok.pos,
                })
            }
            TokenKind::Placeholder(ref name) => {
                self.next();
                Ok(ValExpr::Placeholder {
                    name: name.clone(),
                    pos: tok.pos,
                })
            }
            _ => Err(self.error_here("a value")),
        }
    }
}
