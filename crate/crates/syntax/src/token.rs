use crate::text::TextRange;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Punct {
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Dot,
    Ellipsis,
    Semi,
    Comma,
    Lt,
    Gt,
    LtEq,
    GtEq,
    EqEq,
    NotEq,
    EqEqEq,
    NotEqEq,
    Plus,
    Minus,
    Star,
    Slash,
    Percent,
    StarStar,
    PlusPlus,
    MinusMinus,
    Shl,
    Shr,
    UShr,
    Amp,
    Pipe,
    Caret,
    Bang,
    Tilde,
    AmpAmp,
    PipePipe,
    Question,
    QuestionQuestion,
    QuestionDot,
    Colon,
    Eq,
    PlusEq,
    MinusEq,
    StarEq,
    SlashEq,
    PercentEq,
    StarStarEq,
    ShlEq,
    ShrEq,
    UShrEq,
    AmpEq,
    PipeEq,
    CaretEq,
    AmpAmpEq,
    PipePipeEq,
    QuestionQuestionEq,
    Arrow,
    At,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TokenKind {
    /// Identifier or keyword; the parser distinguishes them by text.
    Ident,
    PrivateName,
    Punct(Punct),
    Number,
    BigInt,
    String,
    /// Template chunk. `head` when it starts with a backtick, `tail` when it
    /// ends with one.
    Template {
        head: bool,
        tail: bool,
    },
    Regex,
    Eof,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub range: TextRange,
    /// A line terminator occurred between the previous token and this one.
    pub newline_before: bool,
    /// Identifier spelled with `\u` escapes.
    pub escaped: bool,
}

impl Token {
    pub fn is_punct(&self, p: Punct) -> bool {
        self.kind == TokenKind::Punct(p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommentKind {
    Line,
    Block,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Comment {
    pub kind: CommentKind,
    /// Whole comment including delimiters.
    pub range: TextRange,
}

impl Comment {
    /// Comment body without the `//` or `/* */` delimiters.
    pub fn body<'a>(&self, text: &'a str) -> &'a str {
        let raw = self.range.slice(text);
        match self.kind {
            CommentKind::Line => ["//", "#!", "<!--", "-->"].iter().find_map(|p| raw.strip_prefix(p)).unwrap_or(raw),
            CommentKind::Block => raw.strip_prefix("/*").map(|s| s.strip_suffix("*/").unwrap_or(s)).unwrap_or(raw),
        }
    }
}

pub const KEYWORDS: &[&str] = &[
    "break",
    "case",
    "catch",
    "class",
    "const",
    "continue",
    "debugger",
    "default",
    "delete",
    "do",
    "else",
    "enum",
    "export",
    "extends",
    "false",
    "finally",
    "for",
    "function",
    "if",
    "import",
    "in",
    "instanceof",
    "new",
    "null",
    "return",
    "super",
    "switch",
    "this",
    "throw",
    "true",
    "try",
    "typeof",
    "var",
    "void",
    "while",
    "with",
];

pub fn is_reserved_word(name: &str) -> bool {
    KEYWORDS.contains(&name)
}
