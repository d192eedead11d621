use super::{PResult, Parser};
use crate::ast::{FunctionKind, NodeId, NodeKind, VarKind};
use crate::token::{is_reserved_word, Punct, TokenKind};

impl<'a> Parser<'a> {
    /// A statement or declaration.
    pub(crate) fn parse_statement_list_item(&mut self) -> PResult<NodeId> {
        if self.tok.kind == TokenKind::Ident && !self.tok.escaped {
            let start = self.tok.range.start;
            match self.text_of(self.tok) {
                "function" => return self.parse_function(start, FunctionKind::Declaration, false, false),
                "class" => return self.parse_class(true, false),
                "const" => return self.parse_variable_statement(),
                "let" if self.let_starts_declaration()? => return self.parse_variable_statement(),
                "async" if self.async_function_follows()? => {
                    self.bump()?;
                    return self.parse_function(start, FunctionKind::Declaration, true, false);
                }
                "import" => {
                    let next = self.peek()?;
                    if !next.is_punct(Punct::LParen) && !next.is_punct(Punct::Dot) {
                        return self.parse_import_declaration();
                    }
                }
                "export" => return self.parse_export_declaration(),
                _ => {}
            }
        }
        self.parse_statement()
    }

    fn let_starts_declaration(&mut self) -> PResult<bool> {
        let next = self.peek()?;
        Ok(match next.kind {
            TokenKind::Ident => {
                let text = self.text_of(next);
                text != "in" && text != "instanceof"
            }
            TokenKind::Punct(Punct::LBracket | Punct::LBrace) => true,
            _ => false,
        })
    }

    fn async_function_follows(&mut self) -> PResult<bool> {
        let next = self.peek()?;
        Ok(!next.newline_before && Self::token_is_word(self.src, next, "function"))
    }

    pub(crate) fn parse_statement(&mut self) -> PResult<NodeId> {
        self.enter()?;
        let result = self.parse_statement_inner();
        self.leave();
        result
    }

    fn parse_statement_inner(&mut self) -> PResult<NodeId> {
        let start = self.tok.range.start;
        match self.tok.kind {
            TokenKind::Punct(Punct::LBrace) => return self.parse_block(),
            TokenKind::Punct(Punct::Semi) => {
                self.bump()?;
                return Ok(self.finish(start, NodeKind::EmptyStatement));
            }
            TokenKind::Ident if !self.tok.escaped => {
                match self.text_of(self.tok) {
                    "var" => return self.parse_variable_statement(),
                    "if" => return self.parse_if(),
                    "for" => return self.parse_for(),
                    "while" => {
                        self.bump()?;
                        self.expect(Punct::LParen)?;
                        let test = self.parse_expression(false)?;
                        self.expect(Punct::RParen)?;
                        let body = self.parse_statement()?;
                        return Ok(self.finish(start, NodeKind::WhileStatement { test, body }));
                    }
                    "do" => {
                        self.bump()?;
                        let body = self.parse_statement()?;
                        self.expect_word("while")?;
                        self.expect(Punct::LParen)?;
                        let test = self.parse_expression(false)?;
                        self.expect(Punct::RParen)?;
                        self.eat(Punct::Semi)?;
                        return Ok(self.finish(start, NodeKind::DoWhileStatement { body, test }));
                    }
                    "continue" | "break" => {
                        let is_break = self.is_word("break");
                        self.bump()?;
                        let label = if self.tok.kind == TokenKind::Ident
                            && !self.tok.newline_before
                            && !is_reserved_word(self.text_of(self.tok))
                        {
                            Some(self.parse_binding_identifier()?)
                        } else {
                            None
                        };
                        self.consume_semicolon()?;
                        let kind = if is_break {
                            NodeKind::BreakStatement { label }
                        } else {
                            NodeKind::ContinueStatement { label }
                        };
                        return Ok(self.finish(start, kind));
                    }
                    "return" => {
                        if !self.ctx.in_function && !self.options.allow_return {
                            return Err(self.error_at(self.tok.range, "return outside of function"));
                        }
                        self.bump()?;
                        let argument = if self.at(Punct::Semi)
                            || self.at(Punct::RBrace)
                            || self.tok.kind == TokenKind::Eof
                            || self.tok.newline_before
                        {
                            None
                        } else {
                            Some(self.parse_expression(false)?)
                        };
                        self.consume_semicolon()?;
                        return Ok(self.finish(start, NodeKind::ReturnStatement { argument }));
                    }
                    "throw" => {
                        self.bump()?;
                        if self.tok.newline_before {
                            return Err(self.error_at(self.tok.range, "line break after throw"));
                        }
                        let argument = self.parse_expression(false)?;
                        self.consume_semicolon()?;
                        return Ok(self.finish(start, NodeKind::ThrowStatement { argument }));
                    }
                    "with" => {
                        self.bump()?;
                        self.expect(Punct::LParen)?;
                        let object = self.parse_expression(false)?;
                        self.expect(Punct::RParen)?;
                        let body = self.parse_statement()?;
                        return Ok(self.finish(start, NodeKind::WithStatement { object, body }));
                    }
                    "switch" => return self.parse_switch(),
                    "try" => return self.parse_try(),
                    "debugger" => {
                        self.bump()?;
                        self.consume_semicolon()?;
                        return Ok(self.finish(start, NodeKind::DebuggerStatement));
                    }
                    // sloppy-mode function declarations in statement position
                    "function" => return self.parse_function(start, FunctionKind::Declaration, false, false),
                    "class" | "const" | "export" => return Err(self.unexpected()),
                    _ => {}
                }
            }
            _ => {}
        }

        let expression = self.parse_expression(false)?;
        if let NodeKind::Identifier { name } = self.kind(expression) {
            if self.at(Punct::Colon) && !is_reserved_word(name) {
                self.bump()?;
                let body = if self.is_word("function") {
                    let fstart = self.tok.range.start;
                    self.parse_function(fstart, FunctionKind::Declaration, false, false)?
                } else {
                    self.parse_statement()?
                };
                return Ok(self.finish(start, NodeKind::LabeledStatement { label: expression, body }));
            }
        }
        self.consume_semicolon()?;
        Ok(self.finish(start, NodeKind::ExpressionStatement { expression }))
    }

    pub(crate) fn parse_block(&mut self) -> PResult<NodeId> {
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

    fn parse_variable_statement(&mut self) -> PResult<NodeId> {
        let decl = self.parse_variable_declaration(false)?;
        self.consume_semicolon()?;
        self.extend_to_prev(decl);
        Ok(decl)
    }

    /// `var`/`let`/`const` and its declarators, without the trailing semicolon.
    fn parse_variable_declaration(&mut self, no_in: bool) -> PResult<NodeId> {
        let start = self.tok.range.start;
        let kind = match self.text_of(self.tok) {
            "var" => VarKind::Var,
            "let" => VarKind::Let,
            _ => VarKind::Const,
        };
        self.bump()?;
        let mut declarations = Vec::new();
        loop {
            let dstart = self.tok.range.start;
            let id = self.parse_binding_target()?;
            let init = if self.eat(Punct::Eq)? { Some(self.parse_assignment(no_in)?) } else { None };
            declarations.push(self.finish(dstart, NodeKind::VariableDeclarator { id, init }));
            if !self.eat(Punct::Comma)? {
                break;
            }
        }
        Ok(self.finish(start, NodeKind::VariableDeclaration { kind, declarations }))
    }

    fn parse_if(&mut self) -> PResult<NodeId> {
        let start = self.bump()?.range.start;
        self.expect(Punct::LParen)?;
        let test = self.parse_expression(false)?;
        self.expect(Punct::RParen)?;
        let consequent = self.parse_statement()?;
        let alternate = if self.is_word("else") {
            self.bump()?;
            Some(self.parse_statement()?)
        } else {
            None
        };
        Ok(self.finish(start, NodeKind::IfStatement { test, consequent, alternate }))
    }

    fn parse_for(&mut self) -> PResult<NodeId> {
        let start = self.bump()?.range.start;
        let is_await = if self.is_word("await") {
            self.bump()?;
            true
        } else {
            false
        };
        self.expect(Punct::LParen)?;
        let mut init = None;
        if !self.at(Punct::Semi) {
            let is_decl = self.is_word("var")
                || self.is_word("const")
                || (self.is_word("let") && self.let_starts_declaration()?);
            let left = if is_decl { self.parse_variable_declaration(true)? } else { self.parse_expression(true)? };
            let of = self.is_word("of");
            if of || self.is_word("in") {
                if !is_decl {
                    if matches!(self.kind(left), NodeKind::ObjectExpression { .. } | NodeKind::ArrayExpression { .. }) {
                        self.reinterpret_as_pattern(left)?;
                    } else {
                        self.check_simple_target(left)?;
                    }
                }
                self.bump()?;
                let right = if of { self.parse_assignment(false)? } else { self.parse_expression(false)? };
                self.expect(Punct::RParen)?;
                let body = self.parse_statement()?;
                let kind = if of {
                    NodeKind::ForOfStatement { left, right, body, is_await }
                } else {
                    NodeKind::ForInStatement { left, right, body }
                };
                return Ok(self.finish(start, kind));
            }
            init = Some(left);
        }
        self.expect(Punct::Semi)?;
        let test = if self.at(Punct::Semi) { None } else { Some(self.parse_expression(false)?) };
        self.expect(Punct::Semi)?;
        let update = if self.at(Punct::RParen) { None } else { Some(self.parse_expression(false)?) };
        self.expect(Punct::RParen)?;
        let body = self.parse_statement()?;
        Ok(self.finish(start, NodeKind::ForStatement { init, test, update, body }))
    }

    fn parse_switch(&mut self) -> PResult<NodeId> {
        let start = self.bump()?.range.start;
        self.expect(Punct::LParen)?;
        let discriminant = self.parse_expression(false)?;
        self.expect(Punct::RParen)?;
        self.expect(Punct::LBrace)?;
        let mut cases = Vec::new();
        let mut seen_default = false;
        while !self.at(Punct::RBrace) {
            let cstart = self.tok.range.start;
            let test = if self.is_word("case") {
                self.bump()?;
                Some(self.parse_expression(false)?)
            } else if self.is_word("default") {
                if seen_default {
                    return Err(self.error_at(self.tok.range, "multiple default clauses"));
                }
                seen_default = true;
                self.bump()?;
                None
            } else {
                return Err(self.unexpected());
            };
            self.expect(Punct::Colon)?;
            let mut consequent = Vec::new();
            while !self.at(Punct::RBrace) && !self.is_word("case") && !self.is_word("default") {
                if self.tok.kind == TokenKind::Eof {
                    return Err(self.unexpected());
                }
                consequent.push(self.parse_statement_list_item()?);
            }
            cases.push(self.finish(cstart, NodeKind::SwitchCase { test, consequent }));
        }
        self.bump()?;
        Ok(self.finish(start, NodeKind::SwitchStatement { discriminant, cases }))
    }

    fn parse_try(&mut self) -> PResult<NodeId> {
        let start = self.bump()?.range.start;
        let block = self.parse_block()?;
        let handler = if self.is_word("catch") {
            let cstart = self.bump()?.range.start;
            let param = if self.eat(Punct::LParen)? {
                let param = self.parse_binding_target()?;
                self.expect(Punct::RParen)?;
                Some(param)
            } else {
                None
            };
            let body = self.parse_block()?;
            Some(self.finish(cstart, NodeKind::CatchClause { param, body }))
        } else {
            None
        };
        let finalizer = if self.is_word("finally") {
            self.bump()?;
            Some(self.parse_block()?)
        } else {
            None
        };
        if handler.is_none() && finalizer.is_none() {
            return Err(self.error_at(self.tok.range, "missing catch or finally after try"));
        }
        Ok(self.finish(start, NodeKind::TryStatement { block, handler, finalizer }))
    }

    /// Name in an import/export specifier list: any identifier name or a string.
    fn parse_module_export_name(&mut self) -> PResult<NodeId> {
        match self.tok.kind {
            TokenKind::String => self.parse_string_literal(),
            TokenKind::Ident => {
                let t = self.bump()?;
                let name = self.ident_name(t);
                Ok(self.alloc(NodeKind::Identifier { name }, t.range))
            }
            _ => Err(self.unexpected()),
        }
    }

    fn parse_import_declaration(&mut self) -> PResult<NodeId> {
        let start = self.bump()?.range.start;
        self.is_module = true;
        let mut specifiers = Vec::new();
        if self.tok.kind != TokenKind::String {
            if self.tok.kind == TokenKind::Ident {
                let sstart = self.tok.range.start;
                let local = self.parse_binding_identifier()?;
                specifiers.push(self.finish(sstart, NodeKind::ImportDefaultSpecifier { local }));
                if !self.eat(Punct::Comma)? {
                    self.expect_word("from")?;
                    return self.finish_import(start, specifiers);
                }
            }
            if self.at(Punct::Star) {
                let sstart = self.bump()?.range.start;
                self.expect_word("as")?;
                let local = self.parse_binding_identifier()?;
                specifiers.push(self.finish(sstart, NodeKind::ImportNamespaceSpecifier { local }));
            } else {
                self.expect(Punct::LBrace)?;
                while !self.at(Punct::RBrace) {
                    let sstart = self.tok.range.start;
                    let imported = self.parse_module_export_name()?;
                    let local = if self.is_word("as") {
                        self.bump()?;
                        self.parse_binding_identifier()?
                    } else {
                        match self.kind(imported) {
                            NodeKind::Identifier { name } if !is_reserved_word(name) => imported,
                            _ => return Err(self.error_at(self.range(imported), "invalid import binding")),
                        }
                    };
                    specifiers.push(self.finish(sstart, NodeKind::ImportSpecifier { imported, local }));
                    if !self.at(Punct::RBrace) {
                        self.expect(Punct::Comma)?;
                    }
                }
                self.bump()?;
            }
            self.expect_word("from")?;
        }
        self.finish_import(start, specifiers)
    }

    fn finish_import(&mut self, start: u32, specifiers: Vec<NodeId>) -> PResult<NodeId> {
        let source = self.parse_string_literal()?;
        self.consume_semicolon()?;
        Ok(self.finish(start, NodeKind::ImportDeclaration { specifiers, source }))
    }

    fn parse_export_declaration(&mut self) -> PResult<NodeId> {
        let start = self.bump()?.range.start;
        self.is_module = true;
        if self.eat(Punct::Star)? {
            let exported = if self.is_word("as") {
                self.bump()?;
                Some(self.parse_module_export_name()?)
            } else {
                None
            };
            self.expect_word("from")?;
            let source = self.parse_string_literal()?;
            self.consume_semicolon()?;
            return Ok(self.finish(start, NodeKind::ExportAllDeclaration { exported, source }));
        }
        if self.is_word("default") {
            self.bump()?;
            let dstart = self.tok.range.start;
            let declaration = if self.is_word("function") {
                self.parse_function(dstart, FunctionKind::Declaration, false, true)?
            } else if self.is_word("async") && self.async_function_follows()? {
                self.bump()?;
                self.parse_function(dstart, FunctionKind::Declaration, true, true)?
            } else if self.is_word("class") {
                self.parse_class(true, true)?
            } else {
                let expression = self.parse_assignment(false)?;
                self.consume_semicolon()?;
                expression
            };
            return Ok(self.finish(start, NodeKind::ExportDefaultDeclaration { declaration }));
        }
        if self.eat(Punct::LBrace)? {
            let mut specifiers = Vec::new();
            while !self.at(Punct::RBrace) {
                let sstart = self.tok.range.start;
                let local = self.parse_module_export_name()?;
                let exported = if self.is_word("as") {
                    self.bump()?;
                    self.parse_module_export_name()?
                } else {
                    local
                };
                specifiers.push(self.finish(sstart, NodeKind::ExportSpecifier { local, exported }));
                if !self.at(Punct::RBrace) {
                    self.expect(Punct::Comma)?;
                }
            }
            self.bump()?;
            let source = if self.is_word("from") {
                self.bump()?;
                Some(self.parse_string_literal()?)
            } else {
                None
            };
            self.consume_semicolon()?;
            return Ok(self.finish(start, NodeKind::ExportNamedDeclaration { declaration: None, specifiers, source }));
        }
        let dstart = self.tok.range.start;
        let declaration = if self.is_word("var") || self.is_word("let") || self.is_word("const") {
            self.parse_variable_statement()?
        } else if self.is_word("function") {
            self.parse_function(dstart, FunctionKind::Declaration, false, false)?
        } else if self.is_word("async") && self.async_function_follows()? {
            self.bump()?;
            self.parse_function(dstart, FunctionKind::Declaration, true, false)?
        } else if self.is_word("class") {
            self.parse_class(true, false)?
        } else {
            return Err(self.unexpected());
        };
        Ok(self.finish(
            start,
            NodeKind::ExportNamedDeclaration { declaration: Some(declaration), specifiers: Vec::new(), source: None },
        ))
    }
}
