//! Tokens of the SQL dialect.

use std::fmt;

/// A position in the statement source, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: u32,
    pub column: u32,
}

impl Pos {
    pub fn new(line: u32, column: u32) -> Self {
        Pos { line, column }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

/// Reserved words. Recognition is case-insensitive; `true`, `false`, and
/// `null` lex as literal tokens instead.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keyword {
    Select,
    All,
    Distinct,
    From,
    Where,
    Group,
    By,
    Order,
    Asc,
    Desc,
    Limit,
    Insert,
    Into,
    Values,
    Update,
    Set,
    Delete,
    And,
    Or,
    Not,
    Between,
    Is,
    Satisfies,
    As,
}

impl Keyword {
    pub fn as_str(self) -> &'static str {
        match self {
            Keyword::Select => "Select",
            Keyword::All => "All",
            Keyword::Distinct => "Distinct",
            Keyword::From => "From",
            Keyword::Where => "Where",
            Keyword::Group => "Group",
            Keyword::By => "By",
            Keyword::Order => "Order",
            Keyword::Asc => "Asc",
            Keyword::Desc => "Desc",
            Keyword::Limit => "Limit",
            Keyword::Insert => "Insert",
            Keyword::Into => "Into",
            Keyword::Values => "Values",
            Keyword::Update => "Update",
            Keyword::Set => "Set",
            Keyword::Delete => "Delete",
            Keyword::And => "And",
            Keyword::Or => "Or",
            Keyword::Not => "Not",
            Keyword::Between => "Between",
            Keyword::Is => "Is",
            Keyword::Satisfies => "Satisfies",
            Keyword::As => "As",
        }
    }

    pub fn from_ident(word: &str) -> Option<Keyword> {
        // keywords are few; a linear scan over lowercase forms is fine
        const TABLE: [Keyword; 24] = [
            Keyword::Select,
            Keyword::All,
            Keyword::Distinct,
            Keyword::From,
            Keyword::Where,
            Keyword::Group,
            Keyword::By,
            Keyword::Order,
            Keyword::Asc,
            Keyword::Desc,
            Keyword::Limit,
            Keyword::Insert,
            Keyword::Into,
            Keyword::Values,
            Keyword::Update,
            Keyword::Set,
            Keyword::Delete,
            Keyword::And,
            Keyword::Or,
            Keyword::Not,
            Keyword::Between,
            Keyword::Is,
            Keyword::Satisfies,
            Keyword::As,
        ];
        TABLE
            .into_iter()
            .find(|kw| kw.as_str().eq_ignore_ascii_case(word))
    }
}

/// Comparison operators of the dialect. `<>` is the only inequality
/// spelling; `!=` is rejected by the lexer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    /// Source spelling in the dialect.
    pub fn as_str(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "<>",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TokenKind {
    Keyword(Keyword),
    Ident(String),
    IntLit(i64),
    FloatLit(f64),
    /// Single-quoted text. A one-character literal doubles as a char
    /// literal; the typer decides from context.
    StrLit(String),
    BoolLit(bool),
    NullLit,
    Op(CmpOp),
    /// `{name}`; the braces are consumed by the lexer.
    Placeholder(String),
    Comma,
    Dot,
    Star,
    LParen,
    RParen,
    Semicolon,
    Eof,
}

impl TokenKind {
    pub fn describe(&self) -> String {
        match self {
            TokenKind::Keyword(kw) => format!("`{}`", kw.as_str()),
            TokenKind::Ident(s) => format!("`{s}`"),
            TokenKind::IntLit(n) => format!("`{n}`"),
            TokenKind::FloatLit(x) => format!("`{x:?}`"),
            TokenKind::StrLit(_) => "string literal".into(),
            TokenKind::BoolLit(b) => format!("`{b}`"),
            TokenKind::NullLit => "`null`".into(),
            TokenKind::Op(op) => format!("`{}`", op.as_str()),
            TokenKind::Placeholder(name) => format!("`{{{name}}}`"),
            TokenKind::Comma => "`,`".into(),
            TokenKind::Dot => "`.`".into(),
            TokenKind::Star => "`*`".into(),
            TokenKind::LParen => "`(`".into(),
            TokenKind::RParen => "`)`".into(),
            TokenKind::Semicolon => "`;`".into(),
            TokenKind::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub pos: Pos,
}
