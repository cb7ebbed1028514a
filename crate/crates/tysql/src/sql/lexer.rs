//! Lexer for the SQL dialect.

use std::fmt;

use super::token::{CmpOp, Keyword, Pos, Token, TokenKind};

/// A positioned syntax error, produced by the lexer or the parser.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntaxError {
    pub message: String,
    pub pos: Pos,
}

impl SyntaxError {
    pub fn new(message: impl Into<String>, pos: Pos) -> Self {
        SyntaxError {
            message: message.into(),
            pos,
        }
    }
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [parse] {}", self.pos, self.message)
    }
}

impl std::error::Error for SyntaxError {}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: u32,
    column: u32,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.chars().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn pos(&self) -> Pos {
        Pos::new(self.line, self.column)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn eat_ident(&mut self, first: char) -> String {
        let mut s = String::from(first);
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' {
                s.push(self.bump().unwrap());
            } else {
                break;
            }
        }
        s
    }
}

/// Tokenizes dialect source. Keywords are case-insensitive, identifiers are
/// case-sensitive. `--` starts a line comment. The stream always ends with
/// an `Eof` token.
pub fn tokenize(text: &str) -> Result<Vec<Token>, SyntaxError> {
    let mut lx = Lexer::new(text);
    let mut tokens = Vec::new();
    loop {
        while let Some(c) = lx.peek() {
            if c.is_whitespace() {
                lx.bump();
            } else {
                break;
            }
        }
        let pos = lx.pos();
        let Some(c) = lx.peek() else {
            tokens.push(Token {
                kind: TokenKind::Eof,
                pos,
            });
            return Ok(tokens);
        };

        let kind = match c {
            c if c.is_ascii_alphabetic() || c == '_' => {
                lx.bump();
                let word = lx.eat_ident(c);
                if word.eq_ignore_ascii_case("true") {
                    TokenKind::BoolLit(true)
                } else if word.eq_ignore_ascii_case("false") {
                    TokenKind::BoolLit(false)
                } else if word.eq_ignore_ascii_case("null") {
                    TokenKind::NullLit
                } else if let Some(kw) = Keyword::from_ident(&word) {
                    TokenKind::Keyword(kw)
                } else {
                    TokenKind::Ident(word)
                }
            }
            c if c.is_ascii_digit() => lex_number(&mut lx, false, pos)?,
            '-' => {
                lx.bump();
                match lx.peek() {
                    Some('-') => {
                        while let Some(c) = lx.bump() {
                            if c == '\n' {
                                break;
                            }
                        }
                        continue;
                    }
                    Some(c) if c.is_ascii_digit() => lex_number(&mut lx, true, pos)?,
                    _ => return Err(SyntaxError::new("illegal character `-`", pos)),
                }
            }
            '\'' => {
                lx.bump();
                let mut s = String::new();
                loop {
                    match lx.bump() {
                        Some('\'') => {
                            // a doubled quote is an escaped quote
                            if lx.peek() == Some('\'') {
                                lx.bump();
                                s.push('\'');
                            } else {
                                break;
                            }
                        }
                        Some(c) => s.push(c),
                        None => return Err(SyntaxError::new("unterminated string literal", pos)),
                    }
                }
                TokenKind::StrLit(s)
            }
            '{' => {
                lx.bump();
                let name = match lx.peek() {
                    Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                        lx.bump();
                        lx.eat_ident(c)
                    }
                    _ => return Err(SyntaxError::new("expected placeholder name after `{`", pos)),
                };
                match lx.bump() {
                    Some('}') => TokenKind::Placeholder(name),
                    _ => return Err(SyntaxError::new("unterminated placeholder", pos)),
                }
            }
            '=' => {
                lx.bump();
                TokenKind::Op(CmpOp::Eq)
            }
            '<' => {
                lx.bump();
                match lx.peek() {
                    Some('>') => {
                        lx.bump();
                        TokenKind::Op(CmpOp::Ne)
                    }
                    Some('=') => {
                        lx.bump();
                        TokenKind::Op(CmpOp::Le)
                    }
                    _ => TokenKind::Op(CmpOp::Lt),
                }
            }
            '>' => {
                lx.bump();
                if lx.peek() == Some('=') {
                    lx.bump();
                    TokenKind::Op(CmpOp::Ge)
                } else {
                    TokenKind::Op(CmpOp::Gt)
                }
            }
            ',' => {
                lx.bump();
                TokenKind::Comma
            }
            '.' => {
                lx.bump();
                TokenKind::Dot
            }
            '*' => {
                lx.bump();
                TokenKind::Star
            }
            '(' => {
                lx.bump();
                TokenKind::LParen
            }
            ')' => {
                lx.bump();
                TokenKind::RParen
            }
            ';' => {
                lx.bump();
                TokenKind::Semicolon
            }
            other => return Err(SyntaxError::new(format!("illegal character `{other}`"), pos)),
        };
        tokens.push(Token { kind, pos });
    }
}

fn lex_number(lx: &mut Lexer, negative: bool, pos: Pos) -> Result<TokenKind, SyntaxError> {
    let mut digits = String::new();
    if negative {
        digits.push('-');
    }
    while let Some(c) = lx.peek() {
        if c.is_ascii_digit() {
            digits.push(lx.bump().unwrap());
        } else {
            break;
        }
    }
    // a fraction requires digits on both sides of the dot; `1.` and `.5`
    // are rejected
    if lx.peek() == Some('.') {
        let mut clone = lx.chars.clone();
        clone.next();
        if clone.peek().is_some_and(|c| c.is_ascii_digit()) {
            lx.bump();
            digits.push('.');
            while let Some(c) = lx.peek() {
                if c.is_ascii_digit() {
                    digits.push(lx.bump().unwrap());
                } else {
                    break;
                }
            }
            let value: f64 = digits
                .parse()
                .map_err(|_| SyntaxError::new(format!("invalid number `{digits}`"), pos))?;
            return Ok(TokenKind::FloatLit(value));
        }
    }
    let value: i64 = digits
        .parse()
        .map_err(|_| SyntaxError::new(format!("integer `{digits}` out of range"), pos))?;
    Ok(TokenKind::IntLit(value))
}
