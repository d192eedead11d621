//! Recursive-descent parser for ECMAScript 2020 scripts and modules.
//!
//! A handful of later additions (logical assignment, numeric separators,
//! class fields, private names, static blocks, top-level await) are accepted
//! and reported through [`SyntaxTree::notes`] so callers can surface them.

mod expr;
mod pattern;
mod stmt;

use crate::ast::{Node, NodeId, NodeKind, ParseNote, SyntaxTree};
use crate::error::SyntaxError;
use crate::lexer::{decode_identifier, Lexer};
use crate::text::TextRange;
use crate::token::{Punct, Token, TokenKind};

pub(crate) type PResult<T> = Result<T, SyntaxError>;

const MAX_DEPTH: u32 = 400;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Treat the input as a module even without `import`/`export`.
    pub module: bool,
    /// Accept `return` at the top level (inline event handler bodies).
    pub allow_return: bool,
}

/// Parse a script or module. Module status is inferred from the presence of
/// `import`/`export` declarations.
pub fn parse_program(src: &str) -> Result<SyntaxTree, SyntaxError> {
    parse(src, ParseOptions::default())
}

pub fn parse(src: &str, options: ParseOptions) -> Result<SyntaxTree, SyntaxError> {
    let mut parser = Parser::new(src, options)?;
    let root = parser.parse_top_level()?;
    Ok(parser.finish_tree(root))
}

/// Parse a single expression spanning the whole input. The returned tree is
/// rooted at the expression node.
pub fn parse_expression(src: &str) -> Result<SyntaxTree, SyntaxError> {
    let mut parser = Parser::new(src, ParseOptions::default())?;
    let expr = parser.parse_expression(false)?;
    if parser.tok.kind != TokenKind::Eof {
        return Err(parser.unexpected());
    }
    Ok(parser.finish_tree(expr))
}

#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Context {
    pub in_function: bool,
    pub in_async: bool,
    pub in_generator: bool,
}

pub(crate) struct Parser<'a> {
    pub(crate) src: &'a str,
    lexer: Lexer<'a>,
    pub(crate) tok: Token,
    pub(crate) prev_end: u32,
    nodes: Vec<Node>,
    tokens: Vec<TextRange>,
    notes: Vec<ParseNote>,
    pub(crate) is_module: bool,
    pub(crate) options: ParseOptions,
    pub(crate) ctx: Context,
    depth: u32,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, options: ParseOptions) -> PResult<Self> {
        let mut lexer = Lexer::new(src);
        let tok = lexer.next_token()?;
        Ok(Self {
            src,
            lexer,
            tok,
            prev_end: 0,
            nodes: Vec::new(),
            tokens: Vec::new(),
            notes: Vec::new(),
            is_module: options.module,
            options,
            ctx: Context::default(),
            depth: 0,
        })
    }

    fn parse_top_level(&mut self) -> PResult<NodeId> {
        let mut body = Vec::new();
        while self.tok.kind != TokenKind::Eof {
            body.push(self.parse_statement_list_item()?);
        }
        let end = self.src.len() as u32;
        Ok(self.alloc(NodeKind::Program { body }, TextRange::new(0, end)))
    }

    fn finish_tree(mut self, root: NodeId) -> SyntaxTree {
        let mut stack = vec![root];
        while let Some(id) = stack.pop() {
            for child in self.nodes[id.index()].kind.children() {
                self.nodes[child.index()].parent = Some(id);
                stack.push(child);
            }
        }
        let comments = self.lexer.into_comments();
        SyntaxTree {
            nodes: self.nodes,
            root,
            comments,
            tokens: self.tokens,
            is_module: self.is_module,
            notes: self.notes,
        }
    }

    // ---- token helpers ----

    pub(crate) fn bump(&mut self) -> PResult<Token> {
        let t = self.tok;
        if t.kind != TokenKind::Eof {
            self.tokens.push(t.range);
            self.prev_end = t.range.end;
        }
        self.tok = self.lexer.next_token()?;
        Ok(t)
    }

    pub(crate) fn peek(&mut self) -> PResult<Token> {
        let cp = self.lexer.checkpoint();
        let t = self.lexer.next_token();
        self.lexer.restore(cp);
        t
    }

    pub(crate) fn at(&self, p: Punct) -> bool {
        self.tok.is_punct(p)
    }

    pub(crate) fn eat(&mut self, p: Punct) -> PResult<bool> {
        if self.at(p) {
            self.bump()?;
            Ok(true)
        } else {
            Ok(false)
        }
    }

    pub(crate) fn expect(&mut self, p: Punct) -> PResult<Token> {
        if self.at(p) {
            self.bump()
        } else {
            Err(self.unexpected())
        }
    }

    pub(crate) fn text_of(&self, t: Token) -> &'a str {
        t.range.slice(self.src)
    }

    /// Unescaped identifier token with exactly this spelling.
    pub(crate) fn is_word(&self, word: &str) -> bool {
        Self::token_is_word(self.src, self.tok, word)
    }

    pub(crate) fn token_is_word(src: &str, t: Token, word: &str) -> bool {
        t.kind == TokenKind::Ident && !t.escaped && t.range.slice(src) == word
    }

    pub(crate) fn ident_name(&self, t: Token) -> String {
        let raw = self.text_of(t);
        if t.escaped {
            decode_identifier(raw)
        } else {
            raw.to_string()
        }
    }

    pub(crate) fn expect_word(&mut self, word: &str) -> PResult<Token> {
        if self.is_word(word) {
            self.bump()
        } else {
            Err(self.unexpected())
        }
    }

    /// Automatic semicolon insertion.
    pub(crate) fn consume_semicolon(&mut self) -> PResult<()> {
        if self.eat(Punct::Semi)? {
            return Ok(());
        }
        if self.at(Punct::RBrace) || self.tok.kind == TokenKind::Eof || self.tok.newline_before {
            return Ok(());
        }
        Err(self.unexpected())
    }

    pub(crate) fn unexpected(&self) -> SyntaxError {
        match self.tok.kind {
            TokenKind::Eof => SyntaxError::new(self.tok.range, "unexpected end of input"),
            _ => {
                let text: String = self.text_of(self.tok).chars().take(20).collect();
                SyntaxError::new(self.tok.range, format!("unexpected token `{text}`"))
            }
        }
    }

    pub(crate) fn error_at(&self, range: TextRange, message: impl Into<String>) -> SyntaxError {
        SyntaxError::new(range, message)
    }

    pub(crate) fn note(&mut self, range: TextRange, message: &str) {
        if !self.notes.iter().any(|n| n.message == message) {
            self.notes.push(ParseNote { range, message: message.to_string() });
        }
    }

    pub(crate) fn enter(&mut self) -> PResult<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(SyntaxError::new(self.tok.range, "nesting too deep"));
        }
        Ok(())
    }

    pub(crate) fn leave(&mut self) {
        self.depth -= 1;
    }

    pub(crate) fn rescan_regex(&mut self) -> PResult<()> {
        self.tok = self.lexer.rescan_regex(self.tok)?;
        Ok(())
    }

    pub(crate) fn rescan_template(&mut self) -> PResult<()> {
        self.tok = self.lexer.rescan_template_continuation(self.tok.range)?;
        Ok(())
    }

    // ---- node helpers ----

    pub(crate) fn alloc(&mut self, kind: NodeKind, range: TextRange) -> NodeId {
        let id = NodeId(self.nodes.len() as u32);
        self.nodes.push(Node { kind, range, parent: None });
        id
    }

    /// Allocate a node spanning from `start` to the end of the last consumed token.
    pub(crate) fn finish(&mut self, start: u32, kind: NodeKind) -> NodeId {
        let end = self.prev_end.max(start);
        self.alloc(kind, TextRange::new(start, end))
    }

    pub(crate) fn kind(&self, id: NodeId) -> &NodeKind {
        &self.nodes[id.index()].kind
    }

    pub(crate) fn set_kind(&mut self, id: NodeId, kind: NodeKind) {
        self.nodes[id.index()].kind = kind;
    }

    pub(crate) fn range(&self, id: NodeId) -> TextRange {
        self.nodes[id.index()].range
    }

    pub(crate) fn extend_to_prev(&mut self, id: NodeId) {
        let node = &mut self.nodes[id.index()];
        node.range.end = node.range.end.max(self.prev_end);
    }
}
