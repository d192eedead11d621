//! On-demand tokenizer. The parser drives it one token at a time and asks
//! for a rescan where the lexical goal depends on syntax: `/` at the start
//! of an expression is a regular expression, `}` inside a template
//! substitution resumes the template.

use crate::error::SyntaxError;
use crate::text::TextRange;
use crate::token::{Comment, CommentKind, Punct, Token, TokenKind};

type LexResult<T> = Result<T, SyntaxError>;

#[derive(Clone, Copy, Debug)]
pub struct Checkpoint {
    pos: usize,
    comments: usize,
}

pub struct Lexer<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    comments: Vec<Comment>,
}

fn is_id_start(c: char) -> bool {
    c == '$' || c == '_' || c.is_ascii_alphabetic() || (!c.is_ascii() && c.is_alphabetic())
}

fn is_id_continue(c: char) -> bool {
    c == '$'
        || c == '_'
        || c.is_ascii_alphanumeric()
        || c == '\u{200c}'
        || c == '\u{200d}'
        || (!c.is_ascii() && (c.is_alphanumeric() || is_combining_mark(c)))
}

fn is_combining_mark(c: char) -> bool {
    matches!(c as u32, 0x0300..=0x036f | 0x1ab0..=0x1aff | 0x1dc0..=0x1dff | 0x20d0..=0x20ff | 0xfe20..=0xfe2f)
}

fn is_line_terminator(c: char) -> bool {
    matches!(c, '\n' | '\r' | '\u{2028}' | '\u{2029}')
}

impl<'a> Lexer<'a> {
    pub fn new(src: &'a str) -> Self {
        Self { src, bytes: src.as_bytes(), pos: 0, comments: Vec::new() }
    }

    pub fn source(&self) -> &'a str {
        self.src
    }

    pub fn checkpoint(&self) -> Checkpoint {
        Checkpoint { pos: self.pos, comments: self.comments.len() }
    }

    pub fn restore(&mut self, cp: Checkpoint) {
        self.pos = cp.pos;
        self.comments.truncate(cp.comments);
    }

    pub fn into_comments(self) -> Vec<Comment> {
        self.comments
    }

    fn err<T>(&self, start: usize, message: impl Into<String>) -> LexResult<T> {
        let end = (start + 1).min(self.src.len()).max(start);
        Err(SyntaxError::new(TextRange::new(start as u32, end as u32), message))
    }

    fn peek_byte(&self, ahead: usize) -> Option<u8> {
        self.bytes.get(self.pos + ahead).copied()
    }

    fn peek_char(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    /// Skips whitespace and comments, returning whether a line terminator was crossed.
    fn skip_trivia(&mut self) -> LexResult<bool> {
        let mut newline = false;
        let first_token = self.pos == 0;
        if self.pos == 0 && self.src.starts_with("#!") {
            let end = self.src.find(['\n', '\r']).unwrap_or(self.src.len());
            self.comments.push(Comment { kind: CommentKind::Line, range: TextRange::new(0, end as u32) });
            self.pos = end;
        }
        while self.pos < self.bytes.len() {
            let b = self.bytes[self.pos];
            match b {
                b' ' | b'\t' | 0x0b | 0x0c => self.pos += 1,
                b'\n' | b'\r' => {
                    newline = true;
                    self.pos += 1;
                }
                b'<' if self.src[self.pos..].starts_with("<!--") => self.skip_line_comment(4),
                b'-' if (newline || first_token) && self.src[self.pos..].starts_with("-->") => {
                    self.skip_line_comment(3)
                }
                b'/' if self.peek_byte(1) == Some(b'/') => self.skip_line_comment(2),
                b'/' if self.peek_byte(1) == Some(b'*') => {
                    let start = self.pos;
                    match self.src[self.pos + 2..].find("*/") {
                        Some(rel) => {
                            let end = self.pos + 2 + rel + 2;
                            if self.src[start..end].contains(is_line_terminator) {
                                newline = true;
                            }
                            self.pos = end;
                            self.comments.push(Comment {
                                kind: CommentKind::Block,
                                range: TextRange::new(start as u32, end as u32),
                            });
                        }
                        None => return self.err(start, "unterminated block comment"),
                    }
                }
                _ if b < 0x80 => break,
                _ => {
                    let c = self.peek_char().unwrap();
                    if c == '\u{2028}' || c == '\u{2029}' {
                        newline = true;
                        self.pos += c.len_utf8();
                    } else if c.is_whitespace() || c == '\u{feff}' {
                        self.pos += c.len_utf8();
                    } else {
                        break;
                    }
                }
            }
        }
        Ok(newline)
    }

    /// Line comment starting at `self.pos` with a delimiter of `prefix` bytes
    /// (`//`, or the HTML-like `<!--` and `-->` forms).
    fn skip_line_comment(&mut self, prefix: usize) {
        let start = self.pos;
        self.pos += prefix;
        while let Some(c) = self.peek_char() {
            if is_line_terminator(c) {
                break;
            }
            self.pos += c.len_utf8();
        }
        self.comments.push(Comment { kind: CommentKind::Line, range: TextRange::new(start as u32, self.pos as u32) });
    }

    pub fn next_token(&mut self) -> LexResult<Token> {
        let newline_before = self.skip_trivia()?;
        let start = self.pos;
        let mut escaped = false;
        let kind = match self.peek_char() {
            None => TokenKind::Eof,
            Some(c) => match c {
                '`' => {
                    self.pos += 1;
                    self.scan_template_chunk(start, true)?
                }
                '"' | '\'' => {
                    self.scan_string(c)?;
                    TokenKind::String
                }
                '0'..='9' => self.scan_number()?,
                '.' if matches!(self.peek_byte(1), Some(b'0'..=b'9')) => self.scan_number()?,
                '#' => {
                    self.pos += 1;
                    match self.peek_char() {
                        Some(c) if is_id_start(c) || c == '\\' => {
                            self.scan_identifier_rest(&mut escaped)?;
                            TokenKind::PrivateName
                        }
                        _ => return self.err(start, "unexpected character '#'"),
                    }
                }
                c if is_id_start(c) || c == '\\' => {
                    self.scan_identifier_rest(&mut escaped)?;
                    TokenKind::Ident
                }
                _ => TokenKind::Punct(self.scan_punct(start)?),
            },
        };
        Ok(Token { kind, range: TextRange::new(start as u32, self.pos as u32), newline_before, escaped })
    }

    fn scan_identifier_rest(&mut self, escaped: &mut bool) -> LexResult<()> {
        let mut first = true;
        while let Some(c) = self.peek_char() {
            if c == '\\' {
                let start = self.pos;
                if self.peek_byte(1) != Some(b'u') {
                    return self.err(start, "invalid escape in identifier");
                }
                self.pos += 2;
                self.scan_unicode_escape_body(start)?;
                *escaped = true;
            } else if (first && is_id_start(c)) || (!first && is_id_continue(c)) {
                self.pos += c.len_utf8();
            } else {
                break;
            }
            first = false;
        }
        Ok(())
    }

    /// After `\u`: either four hex digits or `{hex+}`.
    fn scan_unicode_escape_body(&mut self, start: usize) -> LexResult<u32> {
        if self.peek_byte(0) == Some(b'{') {
            self.pos += 1;
            let digits_start = self.pos;
            while matches!(self.peek_byte(0), Some(b) if b.is_ascii_hexdigit()) {
                self.pos += 1;
            }
            if self.peek_byte(0) != Some(b'}') || digits_start == self.pos {
                return self.err(start, "invalid unicode escape");
            }
            let value = u32::from_str_radix(&self.src[digits_start..self.pos], 16).unwrap_or(u32::MAX);
            self.pos += 1;
            if value > 0x10ffff {
                return self.err(start, "unicode escape out of range");
            }
            Ok(value)
        } else {
            let digits = self.src.get(self.pos..self.pos + 4).unwrap_or("");
            if digits.len() != 4 || !digits.bytes().all(|b| b.is_ascii_hexdigit()) {
                return self.err(start, "invalid unicode escape");
            }
            self.pos += 4;
            Ok(u32::from_str_radix(digits, 16).unwrap())
        }
    }

    fn scan_string(&mut self, quote: char) -> LexResult<()> {
        let start = self.pos;
        self.pos += 1;
        loop {
            match self.peek_char() {
                None => return self.err(start, "unterminated string literal"),
                Some(c) if c == quote => {
                    self.pos += 1;
                    return Ok(());
                }
                Some('\\') => {
                    self.pos += 1;
                    match self.peek_char() {
                        None => return self.err(start, "unterminated string literal"),
                        Some('\r') if self.peek_byte(1) == Some(b'\n') => self.pos += 2,
                        Some(c) => self.pos += c.len_utf8(),
                    }
                }
                Some('\n') | Some('\r') => return self.err(start, "unterminated string literal"),
                Some(c) => self.pos += c.len_utf8(),
            }
        }
    }

    fn scan_digits(&mut self, radix: u32) {
        while let Some(b) = self.peek_byte(0) {
            if (b as char).is_digit(radix) || (b == b'_' && self.pos > 0) {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn scan_number(&mut self) -> LexResult<TokenKind> {
        let start = self.pos;
        if self.peek_byte(0) == Some(b'0') {
            let radix = match self.peek_byte(1) {
                Some(b'x' | b'X') => Some(16),
                Some(b'o' | b'O') => Some(8),
                Some(b'b' | b'B') => Some(2),
                _ => None,
            };
            if let Some(radix) = radix {
                self.pos += 2;
                let digits = self.pos;
                self.scan_digits(radix);
                if digits == self.pos {
                    return self.err(start, "missing digits in numeric literal");
                }
                return self.finish_number(start, true);
            }
        }
        self.scan_digits(10);
        let mut integer = true;
        if self.peek_byte(0) == Some(b'.') {
            integer = false;
            self.pos += 1;
            self.scan_digits(10);
        }
        if matches!(self.peek_byte(0), Some(b'e' | b'E')) {
            integer = false;
            self.pos += 1;
            if matches!(self.peek_byte(0), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            let digits = self.pos;
            self.scan_digits(10);
            if digits == self.pos {
                return self.err(start, "missing exponent in numeric literal");
            }
        }
        self.finish_number(start, integer)
    }

    fn finish_number(&mut self, start: usize, integer: bool) -> LexResult<TokenKind> {
        let mut kind = TokenKind::Number;
        if integer && self.peek_byte(0) == Some(b'n') {
            self.pos += 1;
            kind = TokenKind::BigInt;
        }
        if let Some(c) = self.peek_char() {
            if is_id_start(c) || c.is_ascii_digit() {
                return self.err(start, "identifier starts immediately after numeric literal");
            }
        }
        Ok(kind)
    }

    fn scan_punct(&mut self, start: usize) -> LexResult<Punct> {
        use Punct::*;
        let rest = &self.bytes[self.pos..];
        let at = |i: usize| rest.get(i).copied().unwrap_or(0);
        let (p, len) = match at(0) {
            b'{' => (LBrace, 1),
            b'}' => (RBrace, 1),
            b'(' => (LParen, 1),
            b')' => (RParen, 1),
            b'[' => (LBracket, 1),
            b']' => (RBracket, 1),
            b';' => (Semi, 1),
            b',' => (Comma, 1),
            b':' => (Colon, 1),
            b'~' => (Tilde, 1),
            b'@' => (At, 1),
            b'.' => {
                if at(1) == b'.' && at(2) == b'.' {
                    (Ellipsis, 3)
                } else {
                    (Dot, 1)
                }
            }
            b'<' => match (at(1), at(2)) {
                (b'<', b'=') => (ShlEq, 3),
                (b'<', _) => (Shl, 2),
                (b'=', _) => (LtEq, 2),
                _ => (Lt, 1),
            },
            b'>' => match (at(1), at(2), at(3)) {
                (b'>', b'>', b'=') => (UShrEq, 4),
                (b'>', b'>', _) => (UShr, 3),
                (b'>', b'=', _) => (ShrEq, 3),
                (b'>', _, _) => (Shr, 2),
                (b'=', _, _) => (GtEq, 2),
                _ => (Gt, 1),
            },
            b'=' => match (at(1), at(2)) {
                (b'=', b'=') => (EqEqEq, 3),
                (b'=', _) => (EqEq, 2),
                (b'>', _) => (Arrow, 2),
                _ => (Eq, 1),
            },
            b'!' => match (at(1), at(2)) {
                (b'=', b'=') => (NotEqEq, 3),
                (b'=', _) => (NotEq, 2),
                _ => (Bang, 1),
            },
            b'+' => match at(1) {
                b'+' => (PlusPlus, 2),
                b'=' => (PlusEq, 2),
                _ => (Plus, 1),
            },
            b'-' => match at(1) {
                b'-' => (MinusMinus, 2),
                b'=' => (MinusEq, 2),
                _ => (Minus, 1),
            },
            b'*' => match (at(1), at(2)) {
                (b'*', b'=') => (StarStarEq, 3),
                (b'*', _) => (StarStar, 2),
                (b'=', _) => (StarEq, 2),
                _ => (Star, 1),
            },
            b'/' => match at(1) {
                b'=' => (SlashEq, 2),
                _ => (Slash, 1),
            },
            b'%' => match at(1) {
                b'=' => (PercentEq, 2),
                _ => (Percent, 1),
            },
            b'&' => match (at(1), at(2)) {
                (b'&', b'=') => (AmpAmpEq, 3),
                (b'&', _) => (AmpAmp, 2),
                (b'=', _) => (AmpEq, 2),
                _ => (Amp, 1),
            },
            b'|' => match (at(1), at(2)) {
                (b'|', b'=') => (PipePipeEq, 3),
                (b'|', _) => (PipePipe, 2),
                (b'=', _) => (PipeEq, 2),
                _ => (Pipe, 1),
            },
            b'^' => match at(1) {
                b'=' => (CaretEq, 2),
                _ => (Caret, 1),
            },
            b'?' => match (at(1), at(2)) {
                (b'?', b'=') => (QuestionQuestionEq, 3),
                (b'?', _) => (QuestionQuestion, 2),
                (b'.', d) if !d.is_ascii_digit() => (QuestionDot, 2),
                _ => (Question, 1),
            },
            _ => {
                let c = self.peek_char().unwrap_or('\0');
                return self.err(start, format!("unexpected character {c:?}"));
            }
        };
        self.pos += len;
        Ok(p)
    }

    /// Scan a template chunk; `self.pos` is just past the opening backtick or `}`.
    fn scan_template_chunk(&mut self, start: usize, head: bool) -> LexResult<TokenKind> {
        loop {
            match self.peek_byte(0) {
                None => return self.err(start, "unterminated template literal"),
                Some(b'`') => {
                    self.pos += 1;
                    return Ok(TokenKind::Template { head, tail: true });
                }
                Some(b'$') if self.peek_byte(1) == Some(b'{') => {
                    self.pos += 2;
                    return Ok(TokenKind::Template { head, tail: false });
                }
                Some(b'\\') => {
                    self.pos += 1;
                    if let Some(c) = self.peek_char() {
                        self.pos += c.len_utf8();
                    }
                }
                Some(_) => {
                    let c = self.peek_char().unwrap();
                    self.pos += c.len_utf8();
                }
            }
        }
    }

    /// Re-lex from a `}` token as the continuation of a template literal.
    pub fn rescan_template_continuation(&mut self, rbrace: TextRange) -> LexResult<Token> {
        self.pos = rbrace.start as usize + 1;
        let kind = self.scan_template_chunk(rbrace.start as usize, false)?;
        Ok(Token { kind, range: TextRange::new(rbrace.start, self.pos as u32), newline_before: false, escaped: false })
    }

    /// Re-lex from a `/` or `/=` token as a regular expression literal.
    pub fn rescan_regex(&mut self, slash: Token) -> LexResult<Token> {
        let start = slash.range.start as usize;
        self.pos = start + 1;
        let mut in_class = false;
        loop {
            match self.peek_char() {
                None => return self.err(start, "unterminated regular expression"),
                Some(c) if is_line_terminator(c) => return self.err(start, "unterminated regular expression"),
                Some('\\') => {
                    self.pos += 1;
                    match self.peek_char() {
                        Some(c) if !is_line_terminator(c) => self.pos += c.len_utf8(),
                        _ => return self.err(start, "unterminated regular expression"),
                    }
                }
                Some('[') => {
                    in_class = true;
                    self.pos += 1;
                }
                Some(']') => {
                    in_class = false;
                    self.pos += 1;
                }
                Some('/') if !in_class => {
                    self.pos += 1;
                    break;
                }
                Some(c) => self.pos += c.len_utf8(),
            }
        }
        while let Some(c) = self.peek_char() {
            if is_id_continue(c) {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        Ok(Token {
            kind: TokenKind::Regex,
            range: TextRange::new(slash.range.start, self.pos as u32),
            newline_before: slash.newline_before,
            escaped: false,
        })
    }
}

/// Decode an identifier that may contain `\u` escapes.
pub fn decode_identifier(raw: &str) -> String {
    if !raw.contains('\\') {
        return raw.to_string();
    }
    let mut out = String::with_capacity(raw.len());
    let mut chars = raw.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        if c == '\\' {
            let (value, consumed) = parse_unicode_escape(&raw[i + 2..]);
            if let Some(ch) = value.and_then(char::from_u32) {
                out.push(ch);
            }
            // skip 'u' and escape body
            chars.next();
            for _ in 0..consumed {
                chars.next();
            }
        } else {
            out.push(c);
        }
    }
    out
}

/// Parses the body of a `\u` escape; returns the code point and bytes consumed.
fn parse_unicode_escape(s: &str) -> (Option<u32>, usize) {
    if let Some(rest) = s.strip_prefix('{') {
        match rest.find('}') {
            Some(end) => (u32::from_str_radix(&rest[..end], 16).ok(), end + 2),
            None => (None, s.len()),
        }
    } else if s.len() >= 4 {
        (u32::from_str_radix(&s[..4], 16).ok(), 4)
    } else {
        (None, s.len())
    }
}

/// Cooked value of a string literal body (quotes excluded). Invalid escapes
/// are kept verbatim.
pub fn cook_string(body: &str) -> String {
    let mut out = String::with_capacity(body.len());
    let mut chars = body.chars().peekable();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        let Some(e) = chars.next() else { break };
        match e {
            'n' => out.push('\n'),
            't' => out.push('\t'),
            'r' => out.push('\r'),
            'b' => out.push('\u{8}'),
            'f' => out.push('\u{c}'),
            'v' => out.push('\u{b}'),
            '0'..='7' => {
                let mut value = e.to_digit(8).unwrap();
                for _ in 0..2 {
                    match chars.peek().and_then(|c| c.to_digit(8)) {
                        Some(d) if value * 8 + d <= 0o377 => {
                            value = value * 8 + d;
                            chars.next();
                        }
                        _ => break,
                    }
                }
                out.push(char::from_u32(value).unwrap_or('\u{fffd}'));
            }
            'x' => {
                let hex: String = chars.by_ref().take(2).collect();
                match u32::from_str_radix(&hex, 16).ok().and_then(char::from_u32) {
                    Some(ch) => out.push(ch),
                    None => {
                        out.push_str("\\x");
                        out.push_str(&hex);
                    }
                }
            }
            'u' => {
                let rest: String = chars.clone().take(10).collect();
                let (value, consumed) = parse_unicode_escape(&rest);
                for _ in 0..rest[..consumed.min(rest.len())].chars().count() {
                    chars.next();
                }
                match value {
                    // lone surrogates become U+FFFD; pairs are joined below
                    Some(hi @ 0xd800..=0xdbff) => {
                        let tail: String = chars.clone().take(12).collect();
                        if let Some(lo_src) = tail.strip_prefix("\\u") {
                            let (lo, used) = parse_unicode_escape(lo_src);
                            if let Some(lo @ 0xdc00..=0xdfff) = lo {
                                let cp = 0x10000 + ((hi - 0xd800) << 10) + (lo - 0xdc00);
                                out.push(char::from_u32(cp).unwrap_or('\u{fffd}'));
                                for _ in 0..2 + used {
                                    chars.next();
                                }
                                continue;
                            }
                        }
                        out.push('\u{fffd}');
                    }
                    Some(v) => out.push(char::from_u32(v).unwrap_or('\u{fffd}')),
                    None => out.push_str("\\u"),
                }
            }
            '\r' => {
                if chars.peek() == Some(&'\n') {
                    chars.next();
                }
            }
            '\n' | '\u{2028}' | '\u{2029}' => {}
            other => out.push(other),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<TokenKind> {
        let mut lx = Lexer::new(src);
        let mut out = Vec::new();
        loop {
            let t = lx.next_token().unwrap();
            if t.kind == TokenKind::Eof {
                break;
            }
            out.push(t.kind);
        }
        out
    }

    #[test]
    fn punctuators_take_longest_match() {
        assert_eq!(
            kinds(">>>= ?. ?? ?.5 ..."),
            vec![
                TokenKind::Punct(Punct::UShrEq),
                TokenKind::Punct(Punct::QuestionDot),
                TokenKind::Punct(Punct::QuestionQuestion),
                TokenKind::Punct(Punct::Question),
                TokenKind::Number,
                TokenKind::Punct(Punct::Ellipsis),
            ]
        );
    }

    #[test]
    fn numbers() {
        assert_eq!(
            kinds("0x1F 1e3 .5 10n 1_000"),
            vec![TokenKind::Number, TokenKind::Number, TokenKind::Number, TokenKind::BigInt, TokenKind::Number]
        );
        assert!(Lexer::new("3in").next_token().is_err());
    }

    #[test]
    fn comments_are_collected_and_newlines_tracked() {
        let mut lx = Lexer::new("a /* x\n */ b // c");
        let a = lx.next_token().unwrap();
        let b = lx.next_token().unwrap();
        assert!(!a.newline_before);
        assert!(b.newline_before);
        lx.next_token().unwrap();
        let comments = lx.into_comments();
        assert_eq!(comments.len(), 2);
        assert_eq!(comments[1].kind, CommentKind::Line);
    }

    #[test]
    fn cooks_escapes() {
        assert_eq!(cook_string(r"a\nb\x41B\u{43}\'"), "a\nbABC'");
        assert_eq!(cook_string(r"😀"), "😀");
        assert_eq!(decode_identifier(r"abc"), "abc");
    }

    #[test]
    fn regex_rescan_handles_classes() {
        let src = "/[/]x/g;";
        let mut lx = Lexer::new(src);
        let slash = lx.next_token().unwrap();
        let re = lx.rescan_regex(slash).unwrap();
        assert_eq!(re.range.slice(src), "/[/]x/g");
    }
}
