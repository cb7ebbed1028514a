//! Parser for the textual ER model format.
//!
//! The format is line-comment (`#`) friendly and mirrors the model types
//! directly:
//!
//! ```text
//! model Uni;
//!
//! entity Student {
//!   Name: String;
//!   MatNum: Int unique;
//!   Email: String null;
//! }
//!
//! relationship has_a as Taking: Student (0..*) -- Result (1..1);
//! ```
//!
//! An attribute is `Name: Domain [key|unique] [null];` with domains
//! `String`, `Int`, `Float`, `Bool`, `Char`, and `Date`. A relationship
//! names two endpoints with participation bounds `min..max` where `max`
//! may be `*`; the optional `as Role` sets the role used in foreign-key
//! column names.

use crate::value::SqlType;

use super::model::{
    Attribute, Cardinality, Entity, ErModel, ErdError, ErdPos, KeyStatus, RelEnd, Relationship,
};

/// Parses and validates an ER model. All parse and validation errors are
/// reported together; a structurally broken source stops at the first
/// syntax error.
pub fn parse_erd(text: &str) -> Result<ErModel, Vec<ErdError>> {
    let model = Parser::new(text).parse().map_err(|e| vec![e])?;
    let errors = model.validate();
    if errors.is_empty() {
        Ok(model)
    } else {
        Err(errors)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Nat(u32),
    Colon,
    Semi,
    Comma,
    LBrace,
    RBrace,
    LParen,
    RParen,
    DotDot,
    Dashes,
    Star,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Nat(n) => format!("`{n}`"),
            Tok::Colon => "`:`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Comma => "`,`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::DotDot => "`..`".into(),
            Tok::Dashes => "`--`".into(),
            Tok::Star => "`*`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

struct Parser {
    tokens: Vec<(Tok, ErdPos)>,
    index: usize,
    lex_error: Option<ErdError>,
}

impl Parser {
    fn new(text: &str) -> Self {
        let mut tokens = Vec::new();
        let mut lex_error = None;
        let mut line = 1u32;
        let mut column = 1u32;
        let mut chars = text.chars().peekable();
        while let Some(&c) = chars.peek() {
            let pos = ErdPos::new(line, column);
            let mut advance = |chars: &mut std::iter::Peekable<std::str::Chars>| {
                let c = chars.next().unwrap();
                if c == '\n' {
                    line += 1;
                    column = 1;
                } else {
                    column += 1;
                }
                c
            };
            if c.is_whitespace() {
                advance(&mut chars);
                continue;
            }
            if c == '#' {
                while let Some(&c) = chars.peek() {
                    advance(&mut chars);
                    if c == '\n' {
                        break;
                    }
                }
                continue;
            }
            if c.is_ascii_alphabetic() || c == '_' {
                let mut ident = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        ident.push(advance(&mut chars));
                    } else {
                        break;
                    }
                }
                tokens.push((Tok::Ident(ident), pos));
                continue;
            }
            if c.is_ascii_digit() {
                let mut num = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_digit() {
                        num.push(advance(&mut chars));
                    } else {
                        break;
                    }
                }
                match num.parse::<u32>() {
                    Ok(n) => tokens.push((Tok::Nat(n), pos)),
                    Err(_) => {
                        lex_error = Some(ErdError::new(format!("number `{num}` is too large"), pos));
                        break;
                    }
                }
                continue;
            }
            let tok = match c {
                ':' => {
                    advance(&mut chars);
                    Tok::Colon
                }
                ';' => {
                    advance(&mut chars);
                    Tok::Semi
                }
                ',' => {
                    advance(&mut chars);
                    Tok::Comma
                }
                '{' => {
                    advance(&mut chars);
                    Tok::LBrace
                }
                '}' => {
                    advance(&mut chars);
                    Tok::RBrace
                }
                '(' => {
                    advance(&mut chars);
                    Tok::LParen
                }
                ')' => {
                    advance(&mut chars);
                    Tok::RParen
                }
                '*' => {
                    advance(&mut chars);
                    Tok::Star
                }
                '.' => {
                    advance(&mut chars);
                    if chars.peek() == Some(&'.') {
                        advance(&mut chars);
                        Tok::DotDot
                    } else {
                        lex_error = Some(ErdError::new("expected `..`", pos));
                        break;
                    }
                }
                '-' => {
                    advance(&mut chars);
                    if chars.peek() == Some(&'-') {
                        advance(&mut chars);
                        Tok::Dashes
                    } else {
                        lex_error = Some(ErdError::new("expected `--`", pos));
                        break;
                    }
                }
                other => {
                    lex_error = Some(ErdError::new(format!("illegal character `{other}`"), pos));
                    break;
                }
            };
            tokens.push((tok, pos));
        }
        tokens.push((Tok::Eof, ErdPos::new(line, column)));
        Parser {
            tokens,
            index: 0,
            lex_error,
        }
    }

    fn peek(&self) -> &(Tok, ErdPos) {
        &self.tokens[self.index.min(self.tokens.len() - 1)]
    }

    fn next(&mut self) -> (Tok, ErdPos) {
        let t = self.tokens[self.index.min(self.tokens.len() - 1)].clone();
        if self.index < self.tokens.len() - 1 {
            self.index += 1;
        }
        t
    }

    fn error_here(&self, expected: &str) -> ErdError {
        let (tok, pos) = self.peek();
        // a lexer failure shows up as a truncated stream; report it instead
        if let (Tok::Eof, Some(err)) = (tok, &self.lex_error) {
            return err.clone();
        }
        ErdError::new(format!("expected {expected}, found {}", tok.describe()), *pos)
    }

    fn expect_ident(&mut self, what: &str) -> Result<(String, ErdPos), ErdError> {
        match self.peek() {
            (Tok::Ident(_), _) => {
                let (tok, pos) = self.next();
                match tok {
                    Tok::Ident(s) => Ok((s, pos)),
                    _ => unreachable!(),
                }
            }
            _ => Err(self.error_here(what)),
        }
    }

    fn expect_tok(&mut self, tok: Tok, what: &str) -> Result<ErdPos, ErdError> {
        if self.peek().0 == tok {
            Ok(self.next().1)
        } else {
            Err(self.error_here(what))
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<ErdPos, ErdError> {
        match self.peek() {
            (Tok::Ident(s), _) if s == kw => Ok(self.next().1),
            _ => Err(self.error_here(&format!("`{kw}`"))),
        }
    }

    fn parse(mut self) -> Result<ErModel, ErdError> {
        self.expect_keyword("model")?;
        let (name, _) = self.expect_ident("model name")?;
        self.expect_tok(Tok::Semi, "`;`")?;

        let mut entities = Vec::new();
        let mut relationships = Vec::new();
        loop {
            match self.peek() {
                (Tok::Eof, _) => break,
                (Tok::Ident(kw), _) if kw == "entity" => {
                    entities.push(self.parse_entity()?);
                }
                (Tok::Ident(kw), _) if kw == "relationship" => {
                    relationships.push(self.parse_relationship()?);
                }
                _ => return Err(self.error_here("`entity` or `relationship`")),
            }
        }
        Ok(ErModel {
            name,
            entities,
            relationships,
        })
    }

    fn parse_entity(&mut self) -> Result<Entity, ErdError> {
        let pos = self.expect_keyword("entity")?;
        let (name, _) = self.expect_ident("entity name")?;
        self.expect_tok(Tok::LBrace, "`{`")?;
        let mut attributes = Vec::new();
        while self.peek().0 != Tok::RBrace {
            attributes.push(self.parse_attribute()?);
        }
        self.expect_tok(Tok::RBrace, "`}`")?;
        Ok(Entity {
            name,
            attributes,
            pos,
        })
    }

    fn parse_attribute(&mut self) -> Result<Attribute, ErdError> {
        let (name, pos) = self.expect_ident("attribute name")?;
        self.expect_tok(Tok::Colon, "`:`")?;
        let (domain_name, domain_pos) = self.expect_ident("attribute domain")?;
        let domain = SqlType::parse(&domain_name).ok_or_else(|| {
            ErdError::new(format!("unknown domain `{domain_name}`"), domain_pos)
        })?;
        let mut key = KeyStatus::NoKey;
        if let (Tok::Ident(word), _) = self.peek() {
            match word.as_str() {
                "key" => {
                    self.next();
                    key = KeyStatus::PrimaryKey;
                }
                "unique" => {
                    self.next();
                    key = KeyStatus::Unique;
                }
                _ => {}
            }
        }
        let mut nullable = false;
        if let (Tok::Ident(word), _) = self.peek() {
            if word == "null" {
                self.next();
                nullable = true;
            }
        }
        self.expect_tok(Tok::Semi, "`;`")?;
        Ok(Attribute {
            name,
            domain,
            key,
            nullable,
            pos,
        })
    }

    fn parse_relationship(&mut self) -> Result<Relationship, ErdError> {
        let pos = self.expect_keyword("relationship")?;
        let (name, _) = self.expect_ident("relationship name")?;
        let mut role = name.clone();
        if let (Tok::Ident(kw), _) = self.peek() {
            if kw == "as" {
                self.next();
                role = self.expect_ident("role name")?.0;
            }
        }
        self.expect_tok(Tok::Colon, "`:`")?;
        let end_a = self.parse_endpoint()?;
        self.expect_tok(Tok::Dashes, "`--`")?;
        let end_b = self.parse_endpoint()?;
        self.expect_tok(Tok::Semi, "`;`")?;
        Ok(Relationship {
            name,
            role,
            end_a,
            end_b,
            pos,
        })
    }

    fn parse_endpoint(&mut self) -> Result<RelEnd, ErdError> {
        let (entity, pos) = self.expect_ident("entity name")?;
        self.expect_tok(Tok::LParen, "`(`")?;
        let min = match self.peek() {
            (Tok::Nat(_), _) => match self.next().0 {
                Tok::Nat(n) => n,
                _ => unreachable!(),
            },
            _ => return Err(self.error_here("lower bound")),
        };
        self.expect_tok(Tok::DotDot, "`..`")?;
        let max = match self.peek() {
            (Tok::Star, _) => {
                self.next();
                None
            }
            (Tok::Nat(_), _) => match self.next().0 {
                Tok::Nat(n) => Some(n),
                _ => unreachable!(),
            },
            _ => return Err(self.error_here("upper bound or `*`")),
        };
        self.expect_tok(Tok::RParen, "`)`")?;
        Ok(RelEnd {
            entity,
            card: Cardinality::new(min, max),
            pos,
        })
    }
}
