use super::{PResult, Parser};
use crate::ast::{
    AssignOp, BinaryOp, Function, FunctionKind, LogicalOp, MethodKind, NodeId, NodeKind, PropertyKind, UnaryOp,
    UpdateOp,
};
use crate::lexer::cook_string;
use crate::text::TextRange;
use crate::token::{is_reserved_word, Punct, TokenKind};

#[derive(Clone, Copy)]
enum BinOp {
    Binary(BinaryOp),
    Logical(LogicalOp),
}

fn assign_op(p: Punct) -> Option<AssignOp> {
    use Punct::*;
    Some(match p {
        Eq => AssignOp::Assign,
        PlusEq => AssignOp::Add,
        MinusEq => AssignOp::Sub,
        StarEq => AssignOp::Mul,
        SlashEq => AssignOp::Div,
        PercentEq => AssignOp::Mod,
        StarStarEq => AssignOp::Exp,
        ShlEq => AssignOp::Shl,
        ShrEq => AssignOp::Shr,
        UShrEq => AssignOp::UShr,
        PipeEq => AssignOp::BitOr,
        CaretEq => AssignOp::BitXor,
        AmpEq => AssignOp::BitAnd,
        AmpAmpEq => AssignOp::And,
        PipePipeEq => AssignOp::Or,
        QuestionQuestionEq => AssignOp::Nullish,
        _ => return None,
    })
}

/// Numeric value of a numeric literal token.
pub(crate) fn numeric_value(raw: &str) -> f64 {
    let text: String = raw.chars().filter(|c| *c != '_').collect();
    let radix_value = |digits: &str, radix: u32| {
        digits.chars().fold(0f64, |acc, c| acc * radix as f64 + c.to_digit(radix).unwrap_or(0) as f64)
    };
    let lower = text.to_ascii_lowercase();
    if let Some(d) = lower.strip_prefix("0x") {
        radix_value(d, 16)
    } else if let Some(d) = lower.strip_prefix("0o") {
        radix_value(d, 8)
    } else if let Some(d) = lower.strip_prefix("0b") {
        radix_value(d, 2)
    } else if text.len() > 1 && text.starts_with('0') && text.bytes().all(|b| b.is_ascii_digit()) {
        if text.bytes().all(|b| (b'0'..=b'7').contains(&b)) {
            radix_value(&text[1..], 8)
        } else {
            text.parse().unwrap_or(f64::NAN)
        }
    } else {
        text.parse().unwrap_or(f64::NAN)
    }
}

impl<'a> Parser<'a> {
    pub(crate) fn parse_expression(&mut self, no_in: bool) -> PResult<NodeId> {
        let start = self.tok.range.start;
        let first = self.parse_assignment(no_in)?;
        if !self.at(Punct::Comma) {
            return Ok(first);
        }
        let mut expressions = vec![first];
        while self.eat(Punct::Comma)? {
            expressions.push(self.parse_assignment(no_in)?);
        }
        Ok(self.finish(start, NodeKind::SequenceExpression { expressions }))
    }

    pub(crate) fn parse_assignment(&mut self, no_in: bool) -> PResult<NodeId> {
        self.enter()?;
        let result = self.parse_assignment_inner(no_in);
        self.leave();
        result
    }

    fn parse_assignment_inner(&mut self, no_in: bool) -> PResult<NodeId> {
        let start = self.tok.range.start;
        if self.tok.kind == TokenKind::Ident && !self.tok.escaped {
            let word = self.text_of(self.tok);
            if word == "yield" && self.ctx.in_generator {
                return self.parse_yield(no_in);
            }
            let next = self.peek()?;
            if next.is_punct(Punct::Arrow) && !next.newline_before && !is_reserved_word(word) {
                let param = self.parse_binding_identifier()?;
                return self.parse_arrow_body(start, vec![param], false);
            }
            if word == "async"
                && next.kind == TokenKind::Ident
                && !next.newline_before
                && !Self::token_is_word(self.src, next, "function")
            {
                self.bump()?;
                let param = self.parse_binding_identifier()?;
                if !self.at(Punct::Arrow) {
                    return Err(self.unexpected());
                }
                return self.parse_arrow_body(start, vec![param], true);
            }
        }

        let left = self.parse_conditional(no_in)?;
        let op = match self.tok.kind {
            TokenKind::Punct(p) => assign_op(p),
            _ => None,
        };
        let Some(operator) = op else {
            return Ok(left);
        };
        if matches!(operator, AssignOp::And | AssignOp::Or | AssignOp::Nullish) {
            self.note(self.tok.range, "logical assignment operators (ES2021)");
        }
        let left_kind = self.kind(left);
        if operator == AssignOp::Assign
            && matches!(left_kind, NodeKind::ObjectExpression { .. } | NodeKind::ArrayExpression { .. })
        {
            self.reinterpret_as_pattern(left)?;
        } else {
            self.check_simple_target(left)?;
        }
        self.bump()?;
        let right = self.parse_assignment(no_in)?;
        Ok(self.finish(start, NodeKind::AssignmentExpression { operator, left, right }))
    }

    fn parse_yield(&mut self, no_in: bool) -> PResult<NodeId> {
        let start = self.bump()?.range.start;
        let mut delegate = false;
        let mut argument = None;
        if !self.tok.newline_before {
            if self.eat(Punct::Star)? {
                delegate = true;
                argument = Some(self.parse_assignment(no_in)?);
            } else if self.starts_expression() {
                argument = Some(self.parse_assignment(no_in)?);
            }
        }
        Ok(self.finish(start, NodeKind::YieldExpression { argument, delegate }))
    }

    fn starts_expression(&self) -> bool {
        match self.tok.kind {
            TokenKind::Eof => false,
            TokenKind::Punct(p) => {
                !matches!(
                    p,
                    Punct::RParen | Punct::RBracket | Punct::RBrace | Punct::Comma | Punct::Semi | Punct::Colon
                ) && assign_op(p).is_none()
            }
            TokenKind::Ident => !self.is_word("in") && !self.is_word("of") && !self.is_word("instanceof"),
            _ => true,
        }
    }

    fn parse_conditional(&mut self, no_in: bool) -> PResult<NodeId> {
        let start = self.tok.range.start;
        let test = self.parse_binary(1, no_in)?;
        if !self.eat(Punct::Question)? {
            return Ok(test);
        }
        let consequent = self.parse_assignment(false)?;
        self.expect(Punct::Colon)?;
        let alternate = self.parse_assignment(no_in)?;
        Ok(self.finish(start, NodeKind::ConditionalExpression { test, consequent, alternate }))
    }

    fn binary_op(&self, no_in: bool) -> Option<(u8, BinOp)> {
        use BinaryOp as B;
        use Punct::*;
        let op = match self.tok.kind {
            TokenKind::Punct(p) => match p {
                QuestionQuestion => (1, BinOp::Logical(LogicalOp::Nullish)),
                PipePipe => (2, BinOp::Logical(LogicalOp::Or)),
                AmpAmp => (3, BinOp::Logical(LogicalOp::And)),
                Pipe => (4, BinOp::Binary(B::BitOr)),
                Caret => (5, BinOp::Binary(B::BitXor)),
                Amp => (6, BinOp::Binary(B::BitAnd)),
                EqEq => (7, BinOp::Binary(B::Eq)),
                NotEq => (7, BinOp::Binary(B::NotEq)),
                EqEqEq => (7, BinOp::Binary(B::StrictEq)),
                NotEqEq => (7, BinOp::Binary(B::StrictNotEq)),
                Lt => (8, BinOp::Binary(B::Lt)),
                Gt => (8, BinOp::Binary(B::Gt)),
                LtEq => (8, BinOp::Binary(B::LtEq)),
                GtEq => (8, BinOp::Binary(B::GtEq)),
                Shl => (9, BinOp::Binary(B::Shl)),
                Shr => (9, BinOp::Binary(B::Shr)),
                UShr => (9, BinOp::Binary(B::UShr)),
                Plus => (10, BinOp::Binary(B::Add)),
                Minus => (10, BinOp::Binary(B::Sub)),
                Star => (11, BinOp::Binary(B::Mul)),
                Slash => (11, BinOp::Binary(B::Div)),
                Percent => (11, BinOp::Binary(B::Mod)),
                StarStar => (12, BinOp::Binary(B::Exp)),
                _ => return None,
            },
            TokenKind::Ident if self.is_word("instanceof") => (8, BinOp::Binary(B::Instanceof)),
            TokenKind::Ident if self.is_word("in") && !no_in => (8, BinOp::Binary(B::In)),
            _ => return None,
        };
        Some(op)
    }

    fn parse_binary(&mut self, min_prec: u8, no_in: bool) -> PResult<NodeId> {
        let start = self.tok.range.start;
        let mut left = self.parse_unary()?;
        while let Some((prec, op)) = self.binary_op(no_in) {
            if prec < min_prec {
                break;
            }
            self.bump()?;
            let next_min = if matches!(op, BinOp::Binary(BinaryOp::Exp)) { prec } else { prec + 1 };
            self.enter()?;
            let right = self.parse_binary(next_min, no_in);
            self.leave();
            let right = right?;
            if matches!(op, BinOp::Logical(LogicalOp::Nullish))
                && [left, right].iter().any(|&side| {
                    matches!(
                        self.kind(side),
                        NodeKind::LogicalExpression { operator: LogicalOp::And | LogicalOp::Or, .. }
                    )
                })
            {
                return Err(self
                    .error_at(TextRange::new(start, self.prev_end), "`??` mixed with `&&` or `||` needs parentheses"));
            }
            let kind = match op {
                BinOp::Binary(operator) => NodeKind::BinaryExpression { operator, left, right },
                BinOp::Logical(operator) => NodeKind::LogicalExpression { operator, left, right },
            };
            left = self.finish(start, kind);
        }
        Ok(left)
    }

    fn parse_unary(&mut self) -> PResult<NodeId> {
        self.enter()?;
        let result = self.parse_unary_inner();
        self.leave();
        result
    }

    fn parse_unary_inner(&mut self) -> PResult<NodeId> {
        let start = self.tok.range.start;
        let unary = match self.tok.kind {
            TokenKind::Punct(Punct::Bang) => Some(UnaryOp::Not),
            TokenKind::Punct(Punct::Tilde) => Some(UnaryOp::BitNot),
            TokenKind::Punct(Punct::Plus) => Some(UnaryOp::Plus),
            TokenKind::Punct(Punct::Minus) => Some(UnaryOp::Minus),
            TokenKind::Ident if self.is_word("typeof") => Some(UnaryOp::Typeof),
            TokenKind::Ident if self.is_word("void") => Some(UnaryOp::Void),
            TokenKind::Ident if self.is_word("delete") => Some(UnaryOp::Delete),
            _ => None,
        };
        if let Some(operator) = unary {
            self.bump()?;
            let argument = self.parse_unary()?;
            return Ok(self.finish(start, NodeKind::UnaryExpression { operator, argument }));
        }
        if self.at(Punct::PlusPlus) || self.at(Punct::MinusMinus) {
            let operator = if self.at(Punct::PlusPlus) { UpdateOp::Increment } else { UpdateOp::Decrement };
            self.bump()?;
            let argument = self.parse_unary()?;
            self.check_simple_target(argument)?;
            return Ok(self.finish(start, NodeKind::UpdateExpression { operator, prefix: true, argument }));
        }
        if self.is_word("await") && self.await_is_keyword() {
            if !self.ctx.in_function {
                self.note(self.tok.range, "top-level await (ES2022)");
            }
            self.bump()?;
            let argument = self.parse_unary()?;
            return Ok(self.finish(start, NodeKind::AwaitExpression { argument }));
        }
        let expr = self.parse_lhs()?;
        if (self.at(Punct::PlusPlus) || self.at(Punct::MinusMinus)) && !self.tok.newline_before {
            self.check_simple_target(expr)?;
            let operator = if self.at(Punct::PlusPlus) { UpdateOp::Increment } else { UpdateOp::Decrement };
            self.bump()?;
            return Ok(self.finish(start, NodeKind::UpdateExpression { operator, prefix: false, argument: expr }));
        }
        Ok(expr)
    }

    fn await_is_keyword(&self) -> bool {
        self.ctx.in_async || (self.is_module && !self.ctx.in_function)
    }

    fn parse_lhs(&mut self) -> PResult<NodeId> {
        let start = self.tok.range.start;
        let expr = if self.is_word("new") {
            self.parse_new()?
        } else if self.is_word("super") {
            self.bump()?;
            self.finish(start, NodeKind::Super)
        } else if self.is_word("import") {
            self.parse_import_expression()?
        } else {
            self.parse_primary()?
        };
        self.parse_call_tail(start, expr, false)
    }

    fn parse_import_expression(&mut self) -> PResult<NodeId> {
        let start = self.tok.range.start;
        let import = self.bump()?;
        if self.eat(Punct::Dot)? {
            let meta = self.alloc(NodeKind::Identifier { name: "import".into() }, import.range);
            let prop = self.expect_word("meta")?;
            let property = self.alloc(NodeKind::Identifier { name: "meta".into() }, prop.range);
            return Ok(self.finish(start, NodeKind::MetaProperty { meta, property }));
        }
        self.expect(Punct::LParen)?;
        let source = self.parse_assignment(false)?;
        self.eat(Punct::Comma)?;
        self.expect(Punct::RParen)?;
        Ok(self.finish(start, NodeKind::ImportExpression { source }))
    }

    fn parse_new(&mut self) -> PResult<NodeId> {
        self.enter()?;
        let result = self.parse_new_inner();
        self.leave();
        result
    }

    fn parse_new_inner(&mut self) -> PResult<NodeId> {
        let start = self.tok.range.start;
        let new_tok = self.bump()?;
        if self.eat(Punct::Dot)? {
            let meta = self.alloc(NodeKind::Identifier { name: "new".into() }, new_tok.range);
            let prop = self.expect_word("target")?;
            let property = self.alloc(NodeKind::Identifier { name: "target".into() }, prop.range);
            return Ok(self.finish(start, NodeKind::MetaProperty { meta, property }));
        }
        let callee_start = self.tok.range.start;
        let callee = if self.is_word("new") {
            self.parse_new()?
        } else if self.is_word("import") {
            return Err(self.unexpected());
        } else {
            self.parse_primary()?
        };
        let callee = self.parse_call_tail(callee_start, callee, true)?;
        let arguments = if self.at(Punct::LParen) { self.parse_arguments()? } else { Vec::new() };
        Ok(self.finish(start, NodeKind::NewExpression { callee, arguments }))
    }

    fn parse_call_tail(&mut self, start: u32, mut expr: NodeId, no_call: bool) -> PResult<NodeId> {
        loop {
            match self.tok.kind {
                TokenKind::Punct(Punct::Dot) => {
                    self.bump()?;
                    let property = self.parse_member_name()?;
                    expr = self.finish(
                        start,
                        NodeKind::MemberExpression { object: expr, property, computed: false, optional: false },
                    );
                }
                TokenKind::Punct(Punct::QuestionDot) => {
                    if no_call {
                        return Err(self.unexpected());
                    }
                    self.bump()?;
                    if self.at(Punct::LParen) {
                        let arguments = self.parse_arguments()?;
                        expr = self.finish(start, NodeKind::CallExpression { callee: expr, arguments, optional: true });
                    } else if self.eat(Punct::LBracket)? {
                        let property = self.parse_expression(false)?;
                        self.expect(Punct::RBracket)?;
                        expr = self.finish(
                            start,
                            NodeKind::MemberExpression { object: expr, property, computed: true, optional: true },
                        );
                    } else {
                        let property = self.parse_member_name()?;
                        expr = self.finish(
                            start,
                            NodeKind::MemberExpression { object: expr, property, computed: false, optional: true },
                        );
                    }
                }
                TokenKind::Punct(Punct::LBracket) => {
                    self.bump()?;
                    let property = self.parse_expression(false)?;
                    self.expect(Punct::RBracket)?;
                    expr = self.finish(
                        start,
                        NodeKind::MemberExpression { object: expr, property, computed: true, optional: false },
                    );
                }
                TokenKind::Punct(Punct::LParen) if !no_call => {
                    let arguments = self.parse_arguments()?;
                    expr = self.finish(start, NodeKind::CallExpression { callee: expr, arguments, optional: false });
                }
                TokenKind::Template { .. } => {
                    let quasi = self.parse_template()?;
                    expr = self.finish(start, NodeKind::TaggedTemplate { tag: expr, quasi });
                }
                _ => return Ok(expr),
            }
        }
    }

    /// Property name after `.`: any identifier name, keywords included, or a private name.
    fn parse_member_name(&mut self) -> PResult<NodeId> {
        match self.tok.kind {
            TokenKind::Ident => {
                let t = self.bump()?;
                let name = self.ident_name(t);
                Ok(self.alloc(NodeKind::Identifier { name }, t.range))
            }
            TokenKind::PrivateName => {
                let t = self.bump()?;
                self.note(t.range, "private class members (ES2022)");
                let name = self.ident_name(t)[1..].to_string();
                Ok(self.alloc(NodeKind::PrivateName { name }, t.range))
            }
            _ => Err(self.unexpected()),
        }
    }

    pub(crate) fn parse_arguments(&mut self) -> PResult<Vec<NodeId>> {
        self.expect(Punct::LParen)?;
        let mut args = Vec::new();
        while !self.at(Punct::RParen) {
            if self.at(Punct::Ellipsis) {
                let start = self.bump()?.range.start;
                let argument = self.parse_assignment(false)?;
                args.push(self.finish(start, NodeKind::SpreadElement { argument }));
            } else {
                args.push(self.parse_assignment(false)?);
            }
            if !self.at(Punct::RParen) {
                self.expect(Punct::Comma)?;
            }
        }
        self.bump()?;
        Ok(args)
    }

    fn parse_primary(&mut self) -> PResult<NodeId> {
        let t = self.tok;
        let start = t.range.start;
        match t.kind {
            TokenKind::Ident => {
                if !t.escaped {
                    match self.text_of(t) {
                        "this" => {
                            self.bump()?;
                            return Ok(self.finish(start, NodeKind::ThisExpression));
                        }
                        "null" => {
                            self.bump()?;
                            return Ok(self.finish(start, NodeKind::NullLiteral));
                        }
                        "true" | "false" => {
                            let value = self.text_of(t) == "true";
                            self.bump()?;
                            return Ok(self.finish(start, NodeKind::BooleanLiteral { value }));
                        }
                        "function" => return self.parse_function(start, FunctionKind::Expression, false, false),
                        "class" => return self.parse_class(false, false),
                        "async" => {
                            let next = self.peek()?;
                            if !next.newline_before && Self::token_is_word(self.src, next, "function") {
                                self.bump()?;
                                return self.parse_function(start, FunctionKind::Expression, true, false);
                            }
                            if !next.newline_before && next.is_punct(Punct::LParen) {
                                return self.parse_async_call_or_arrow();
                            }
                        }
                        _ => {}
                    }
                }
                let name = self.ident_name(t);
                if is_reserved_word(&name) {
                    return Err(self.unexpected());
                }
                self.bump()?;
                Ok(self.finish(start, NodeKind::Identifier { name }))
            }
            TokenKind::Number => {
                self.bump()?;
                let raw = self.text_of(t);
                if raw.contains('_') {
                    self.note(t.range, "numeric separators (ES2021)");
                }
                let value = numeric_value(raw);
                Ok(self.finish(start, NodeKind::NumericLiteral { value }))
            }
            TokenKind::BigInt => {
                self.bump()?;
                let raw = self.text_of(t).to_string();
                Ok(self.finish(start, NodeKind::BigIntLiteral { raw }))
            }
            TokenKind::String => self.parse_string_literal(),
            TokenKind::Template { .. } => self.parse_template(),
            TokenKind::Punct(Punct::LParen) => self.parse_paren_or_arrow(),
            TokenKind::Punct(Punct::LBracket) => self.parse_array_literal(),
            TokenKind::Punct(Punct::LBrace) => self.parse_object_literal(),
            TokenKind::Punct(Punct::Slash) | TokenKind::Punct(Punct::SlashEq) => {
                self.rescan_regex()?;
                let t = self.bump()?;
                let text = self.text_of(t);
                let close = text.rfind('/').unwrap_or(0);
                let pattern = text[1..close.max(1)].to_string();
                let flags = text[close + 1..].to_string();
                Ok(self.finish(start, NodeKind::RegExpLiteral { pattern, flags }))
            }
            _ => Err(self.unexpected()),
        }
    }

    pub(crate) fn parse_string_literal(&mut self) -> PResult<NodeId> {
        if self.tok.kind != TokenKind::String {
            return Err(self.unexpected());
        }
        let t = self.bump()?;
        let raw = self.text_of(t);
        let value = cook_string(&raw[1..raw.len() - 1]);
        Ok(self.alloc(NodeKind::StringLiteral { value }, t.range))
    }

    fn parse_template(&mut self) -> PResult<NodeId> {
        let start = self.tok.range.start;
        let mut quasis = Vec::new();
        let mut expressions = Vec::new();
        loop {
            let t = self.tok;
            let TokenKind::Template { tail, .. } = t.kind else {
                return Err(self.unexpected());
            };
            let raw_start = t.range.start + 1;
            let raw_end = if tail { t.range.end - 1 } else { t.range.end - 2 };
            let raw = &self.src[raw_start as usize..raw_end as usize];
            let cooked = Some(cook_string(raw).replace("\r\n", "\n"));
            let raw = raw.to_string();
            quasis.push(self.alloc(NodeKind::TemplateElement { cooked, raw }, TextRange::new(raw_start, raw_end)));
            self.bump()?;
            if tail {
                break;
            }
            expressions.push(self.parse_expression(false)?);
            if !self.at(Punct::RBrace) {
                return Err(self.unexpected());
            }
            self.rescan_template()?;
        }
        Ok(self.finish(start, NodeKind::TemplateLiteral { quasis, expressions }))
    }

    fn parse_paren_or_arrow(&mut self) -> PResult<NodeId> {
        let start = self.bump()?.range.start;
        let mut items = Vec::new();
        let mut rest = None;
        let mut trailing_comma = false;
        while !self.at(Punct::RParen) {
            if self.at(Punct::Ellipsis) {
                let s = self.bump()?.range.start;
                let argument = self.parse_binding_target()?;
                rest = Some(self.finish(s, NodeKind::RestElement { argument }));
                break;
            }
            items.push(self.parse_assignment(false)?);
            if !self.eat(Punct::Comma)? {
                break;
            }
            trailing_comma = self.at(Punct::RParen);
        }
        self.expect(Punct::RParen)?;
        if self.at(Punct::Arrow) && !self.tok.newline_before {
            for item in &items {
                self.reinterpret_as_pattern(*item)?;
            }
            items.extend(rest);
            return self.parse_arrow_body(start, items, false);
        }
        if items.is_empty() || rest.is_some() || trailing_comma {
            return Err(self.unexpected());
        }
        let expression = if items.len() == 1 {
            items[0]
        } else {
            let range = self.range(items[0]).cover(self.range(*items.last().unwrap()));
            self.alloc(NodeKind::SequenceExpression { expressions: items }, range)
        };
        Ok(self.finish(start, NodeKind::ParenthesizedExpression { expression }))
    }

    /// `async(...)`: a call to something named `async`, or an async arrow function.
    fn parse_async_call_or_arrow(&mut self) -> PResult<NodeId> {
        let async_tok = self.bump()?;
        let start = async_tok.range.start;
        let arguments = self.parse_arguments()?;
        if self.at(Punct::Arrow) && !self.tok.newline_before {
            for arg in &arguments {
                self.reinterpret_as_pattern(*arg)?;
            }
            return self.parse_arrow_body(start, arguments, true);
        }
        let callee = self.alloc(NodeKind::Identifier { name: "async".into() }, async_tok.range);
        Ok(self.finish(start, NodeKind::CallExpression { callee, arguments, optional: false }))
    }

    pub(crate) fn parse_arrow_body(&mut self, start: u32, params: Vec<NodeId>, is_async: bool) -> PResult<NodeId> {
        self.expect(Punct::Arrow)?;
        let saved = self.ctx;
        self.ctx.in_function = true;
        self.ctx.in_async = is_async;
        self.ctx.in_generator = false;
        let body = if self.at(Punct::LBrace) {
            self.parse_function_body().map(|b| (b, false))
        } else {
            self.parse_assignment(false).map(|b| (b, true))
        };
        self.ctx = saved;
        let (body, expression_body) = body?;
        Ok(self.finish(
            start,
            NodeKind::Function(Box::new(Function {
                kind: FunctionKind::Arrow,
                id: None,
                params,
                body,
                is_async,
                is_generator: false,
                expression_body,
            })),
        ))
    }

    fn parse_array_literal(&mut self) -> PResult<NodeId> {
        let start = self.bump()?.range.start;
        let mut elements = Vec::new();
        while !self.at(Punct::RBracket) {
            if self.eat(Punct::Comma)? {
                elements.push(None);
                continue;
            }
            let element = if self.at(Punct::Ellipsis) {
                let s = self.bump()?.range.start;
                let argument = self.parse_assignment(false)?;
                self.finish(s, NodeKind::SpreadElement { argument })
            } else {
                self.parse_assignment(false)?
            };
            elements.push(Some(element));
            if !self.at(Punct::RBracket) {
                self.expect(Punct::Comma)?;
            }
        }
        self.bump()?;
        Ok(self.finish(start, NodeKind::ArrayExpression { elements }))
    }

    fn parse_object_literal(&mut self) -> PResult<NodeId> {
        let start = self.bump()?.range.start;
        let mut properties = Vec::new();
        while !self.at(Punct::RBrace) {
            properties.push(self.parse_object_member()?);
            if !self.at(Punct::RBrace) {
                self.expect(Punct::Comma)?;
            }
        }
        self.bump()?;
        Ok(self.finish(start, NodeKind::ObjectExpression { properties }))
    }

    /// Whether the token after a `get`/`set`/`async`/`static` prefix makes
    /// it a modifier rather than the member name itself.
    pub(crate) fn prefix_is_modifier(&mut self) -> PResult<bool> {
        let next = self.peek()?;
        let ends_name = matches!(
            next.kind,
            TokenKind::Punct(Punct::Comma | Punct::Colon | Punct::LParen | Punct::RBrace | Punct::Eq | Punct::Semi)
                | TokenKind::Eof
        );
        Ok(!ends_name)
    }

    fn parse_object_member(&mut self) -> PResult<NodeId> {
        let start = self.tok.range.start;
        if self.at(Punct::Ellipsis) {
            self.bump()?;
            let argument = self.parse_assignment(false)?;
            return Ok(self.finish(start, NodeKind::SpreadElement { argument }));
        }
        let mut is_async = false;
        let mut is_generator = false;
        let mut kind = PropertyKind::Init;
        if self.is_word("async") && !self.peek()?.newline_before && self.prefix_is_modifier()? {
            self.bump()?;
            is_async = true;
        }
        if self.eat(Punct::Star)? {
            is_generator = true;
        }
        if !is_async && !is_generator && (self.is_word("get") || self.is_word("set")) && self.prefix_is_modifier()? {
            kind = if self.is_word("get") { PropertyKind::Get } else { PropertyKind::Set };
            self.bump()?;
        }
        let (key, computed) = self.parse_property_key(false)?;
        if self.at(Punct::LParen) {
            let value = self.parse_method_function(is_async, is_generator)?;
            let method = kind == PropertyKind::Init;
            return Ok(self.finish(start, NodeKind::Property { key, value, kind, method, shorthand: false, computed }));
        }
        if is_async || is_generator || kind != PropertyKind::Init {
            return Err(self.unexpected());
        }
        if self.eat(Punct::Colon)? {
            let value = self.parse_assignment(false)?;
            return Ok(
                self.finish(start, NodeKind::Property { key, value, kind, method: false, shorthand: false, computed })
            );
        }
        // shorthand, possibly with a cover-grammar default
        match self.kind(key) {
            NodeKind::Identifier { name } if !computed && !is_reserved_word(name) => {}
            _ => return Err(self.unexpected()),
        }
        let value = if self.at(Punct::Eq) {
            self.bump()?;
            let right = self.parse_assignment(false)?;
            let key_start = self.range(key).start;
            self.finish(key_start, NodeKind::AssignmentPattern { left: key, right })
        } else {
            key
        };
        Ok(self.finish(start, NodeKind::Property { key, value, kind, method: false, shorthand: true, computed: false }))
    }

    /// Property key in an object literal, object pattern or class body.
    /// Returns the key node and whether it was computed.
    pub(crate) fn parse_property_key(&mut self, allow_private: bool) -> PResult<(NodeId, bool)> {
        let t = self.tok;
        match t.kind {
            TokenKind::Ident => {
                self.bump()?;
                let name = self.ident_name(t);
                Ok((self.alloc(NodeKind::Identifier { name }, t.range), false))
            }
            TokenKind::String => Ok((self.parse_string_literal()?, false)),
            TokenKind::Number => {
                self.bump()?;
                let value = numeric_value(self.text_of(t));
                Ok((self.alloc(NodeKind::NumericLiteral { value }, t.range), false))
            }
            TokenKind::BigInt => {
                self.bump()?;
                let raw = self.text_of(t).to_string();
                Ok((self.alloc(NodeKind::BigIntLiteral { raw }, t.range), false))
            }
            TokenKind::PrivateName if allow_private => {
                self.bump()?;
                self.note(t.range, "private class members (ES2022)");
                let name = self.ident_name(t)[1..].to_string();
                Ok((self.alloc(NodeKind::PrivateName { name }, t.range), false))
            }
            TokenKind::Punct(Punct::LBracket) => {
                self.bump()?;
                let key = self.parse_assignment(false)?;
                self.expect(Punct::RBracket)?;
                Ok((key, true))
            }
            _ => Err(self.unexpected()),
        }
    }

    /// Parameters and body of an object or class method; the current token is `(`.
    pub(crate) fn parse_method_function(&mut self, is_async: bool, is_generator: bool) -> PResult<NodeId> {
        let start = self.tok.range.start;
        self.parse_function_rest(start, FunctionKind::Method, None, is_async, is_generator)
    }

    /// `function` keyword onwards. `start` is where the node begins (before
    /// any `async`).
    pub(crate) fn parse_function(
        &mut self,
        start: u32,
        kind: FunctionKind,
        is_async: bool,
        id_optional: bool,
    ) -> PResult<NodeId> {
        self.expect_word("function")?;
        let is_generator = self.eat(Punct::Star)?;
        let id = if self.tok.kind == TokenKind::Ident {
            Some(self.parse_binding_identifier()?)
        } else if kind == FunctionKind::Declaration && !id_optional {
            return Err(self.unexpected());
        } else {
            None
        };
        self.parse_function_rest(start, kind, id, is_async, is_generator)
    }

    fn parse_function_rest(
        &mut self,
        start: u32,
        kind: FunctionKind,
        id: Option<NodeId>,
        is_async: bool,
        is_generator: bool,
    ) -> PResult<NodeId> {
        let saved = self.ctx;
        self.ctx.in_function = true;
        self.ctx.in_async = is_async;
        self.ctx.in_generator = is_generator;
        let parts = self.parse_formal_params().and_then(|params| Ok((params, self.parse_function_body()?)));
        self.ctx = saved;
        let (params, body) = parts?;
        Ok(self.finish(
            start,
            NodeKind::Function(Box::new(Function {
                kind,
                id,
                params,
                body,
                is_async,
                is_generator,
                expression_body: false,
            })),
        ))
    }

    fn parse_formal_params(&mut self) -> PResult<Vec<NodeId>> {
        self.expect(Punct::LParen)?;
        let mut params = Vec::new();
        while !self.at(Punct::RParen) {
            if self.at(Punct::Ellipsis) {
                let s = self.bump()?.range.start;
                let argument = self.parse_binding_target()?;
                params.push(self.finish(s, NodeKind::RestElement { argument }));
                break;
            }
            params.push(self.parse_binding_element()?);
            if !self.at(Punct::RParen) {
                self.expect(Punct::Comma)?;
            }
        }
        self.expect(Punct::RParen)?;
        Ok(params)
    }

    pub(crate) fn parse_function_body(&mut self) -> PResult<NodeId> {
        let start = self.expect(Punct::LBrace)?.range.start;
        let mut body = Vec::new();
        while !self.at(Punct::RBrace) {
            if self.tok.kind == TokenKind::Eof {
                return Err(self.unexpected());
            }
            body.push(self.parse_statement_list_item()?);
        }
        self.bump()?;
        Ok(self.finish(start, NodeKind::BlockStatement { body }))
    }

    pub(crate) fn parse_class(&mut self, is_declaration: bool, id_optional: bool) -> PResult<NodeId> {
        let start = self.expect_word("class")?.range.start;
        let id = if self.tok.kind == TokenKind::Ident && !self.is_word("extends") {
            Some(self.parse_binding_identifier()?)
        } else if is_declaration && !id_optional {
            return Err(self.unexpected());
        } else {
            None
        };
        let super_class = if self.is_word("extends") {
            self.bump()?;
            Some(self.parse_lhs()?)
        } else {
            None
        };
        self.expect(Punct::LBrace)?;
        let mut body = Vec::new();
        while !self.at(Punct::RBrace) {
            if self.eat(Punct::Semi)? {
                continue;
            }
            if self.tok.kind == TokenKind::Eof {
                return Err(self.unexpected());
            }
            body.push(self.parse_class_member()?);
        }
        self.bump()?;
        Ok(self.finish(start, NodeKind::Class { id, super_class, body, is_declaration }))
    }

    fn parse_class_member(&mut self) -> PResult<NodeId> {
        let start = self.tok.range.start;
        let mut is_static = false;
        if self.is_word("static") {
            let next = self.peek()?;
            if next.is_punct(Punct::LBrace) {
                self.bump()?;
                self.note(TextRange::new(start, self.tok.range.end), "class static blocks (ES2022)");
                let block = self.parse_function_body_in_static_block()?;
                return Ok(self.finish(start, NodeKind::StaticBlock { body: block }));
            }
            if self.prefix_is_modifier()? {
                self.bump()?;
                is_static = true;
            }
        }
        let mut is_async = false;
        let mut is_generator = false;
        let mut kind = MethodKind::Method;
        if self.is_word("async") && !self.peek()?.newline_before && self.prefix_is_modifier()? {
            self.bump()?;
            is_async = true;
        }
        if self.eat(Punct::Star)? {
            is_generator = true;
        }
        if !is_async && !is_generator && (self.is_word("get") || self.is_word("set")) && self.prefix_is_modifier()? {
            kind = if self.is_word("get") { MethodKind::Get } else { MethodKind::Set };
            self.bump()?;
        }
        let (key, computed) = self.parse_property_key(true)?;
        if self.at(Punct::LParen) {
            let is_constructor = !is_static
                && !computed
                && kind == MethodKind::Method
                && matches!(self.kind(key), NodeKind::Identifier { name } if name == "constructor");
            if is_constructor {
                kind = MethodKind::Constructor;
            }
            let value = self.parse_method_function(is_async, is_generator)?;
            return Ok(self.finish(start, NodeKind::MethodDefinition { key, value, kind, is_static, computed }));
        }
        if is_async || is_generator || kind != MethodKind::Method {
            return Err(self.unexpected());
        }
        self.note(self.range(key), "class fields (ES2022)");
        let value = if self.eat(Punct::Eq)? {
            let saved = self.ctx;
            self.ctx.in_function = true;
            self.ctx.in_async = false;
            self.ctx.in_generator = false;
            let value = self.parse_assignment(false);
            self.ctx = saved;
            Some(value?)
        } else {
            None
        };
        self.consume_semicolon()?;
        Ok(self.finish(start, NodeKind::PropertyDefinition { key, value, is_static, computed }))
    }

    fn parse_function_body_in_static_block(&mut self) -> PResult<Vec<NodeId>> {
        let saved = self.ctx;
        self.ctx.in_function = true;
        self.ctx.in_async = false;
        self.ctx.in_generator = false;
        let block = self.parse_function_body();
        self.ctx = saved;
        let block = block?;
        let NodeKind::BlockStatement { body } = self.kind(block).clone() else {
            unreachable!("function body is a block");
        };
        // the block node itself is dropped; its statements move to the static block
        self.set_kind(block, NodeKind::EmptyStatement);
        Ok(body)
    }
}
