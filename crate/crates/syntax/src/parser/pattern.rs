use super::{PResult, Parser};
use crate::ast::{NodeId, NodeKind, PropertyKind};
use crate::token::{is_reserved_word, Punct, TokenKind};

impl<'a> Parser<'a> {
    pub(crate) fn parse_binding_identifier(&mut self) -> PResult<NodeId> {
        if self.tok.kind != TokenKind::Ident {
            return Err(self.unexpected());
        }
        let name = self.ident_name(self.tok);
        if is_reserved_word(&name) {
            return Err(self.unexpected());
        }
        let t = self.bump()?;
        Ok(self.alloc(NodeKind::Identifier { name }, t.range))
    }

    /// Identifier, object pattern or array pattern.
    pub(crate) fn parse_binding_target(&mut self) -> PResult<NodeId> {
        self.enter()?;
        let result = match self.tok.kind {
            TokenKind::Punct(Punct::LBracket) => self.parse_array_pattern(),
            TokenKind::Punct(Punct::LBrace) => self.parse_object_pattern(),
            _ => self.parse_binding_identifier(),
        };
        self.leave();
        result
    }

    /// Binding target with an optional `= default`.
    pub(crate) fn parse_binding_element(&mut self) -> PResult<NodeId> {
        let start = self.tok.range.start;
        let target = self.parse_binding_target()?;
        if self.eat(Punct::Eq)? {
            let right = self.parse_assignment(false)?;
            return Ok(self.finish(start, NodeKind::AssignmentPattern { left: target, right }));
        }
        Ok(target)
    }

    fn parse_array_pattern(&mut self) -> PResult<NodeId> {
        let start = self.bump()?.range.start;
        let mut elements = Vec::new();
        while !self.at(Punct::RBracket) {
            if self.eat(Punct::Comma)? {
                elements.push(None);
                continue;
            }
            if self.at(Punct::Ellipsis) {
                let s = self.bump()?.range.start;
                let argument = self.parse_binding_target()?;
                elements.push(Some(self.finish(s, NodeKind::RestElement { argument })));
                break;
            }
            elements.push(Some(self.parse_binding_element()?));
            if !self.at(Punct::RBracket) {
                self.expect(Punct::Comma)?;
            }
        }
        self.expect(Punct::RBracket)?;
        Ok(self.finish(start, NodeKind::ArrayPattern { elements }))
    }

    fn parse_object_pattern(&mut self) -> PResult<NodeId> {
        let start = self.bump()?.range.start;
        let mut properties = Vec::new();
        while !self.at(Punct::RBrace) {
            let pstart = self.tok.range.start;
            if self.at(Punct::Ellipsis) {
                self.bump()?;
                let argument = self.parse_binding_identifier()?;
                properties.push(self.finish(pstart, NodeKind::RestElement { argument }));
                break;
            }
            let (key, computed) = self.parse_property_key(false)?;
            let property = if self.eat(Punct::Colon)? {
                let value = self.parse_binding_element()?;
                NodeKind::Property { key, value, kind: PropertyKind::Init, method: false, shorthand: false, computed }
            } else {
                match self.kind(key) {
                    NodeKind::Identifier { name } if !computed && !is_reserved_word(name) => {}
                    _ => return Err(self.unexpected()),
                }
                let value = if self.eat(Punct::Eq)? {
                    let right = self.parse_assignment(false)?;
                    let key_start = self.range(key).start;
                    self.finish(key_start, NodeKind::AssignmentPattern { left: key, right })
                } else {
                    key
                };
                NodeKind::Property {
                    key,
                    value,
                    kind: PropertyKind::Init,
                    method: false,
                    shorthand: true,
                    computed: false,
                }
            };
            properties.push(self.finish(pstart, property));
            if !self.at(Punct::RBrace) {
                self.expect(Punct::Comma)?;
            }
        }
        self.expect(Punct::RBrace)?;
        Ok(self.finish(start, NodeKind::ObjectPattern { properties }))
    }

    /// Reinterpret an expression parsed under the cover grammar as a
    /// destructuring pattern, rewriting node kinds in place.
    pub(crate) fn reinterpret_as_pattern(&mut self, id: NodeId) -> PResult<()> {
        self.enter()?;
        let result = self.reinterpret_inner(id);
        self.leave();
        result
    }

    fn reinterpret_inner(&mut self, id: NodeId) -> PResult<()> {
        match self.kind(id).clone() {
            NodeKind::Identifier { .. } | NodeKind::MemberExpression { .. } | NodeKind::AssignmentPattern { .. } => {
                Ok(())
            }
            NodeKind::ObjectPattern { .. } | NodeKind::ArrayPattern { .. } | NodeKind::RestElement { .. } => Ok(()),
            NodeKind::ParenthesizedExpression { .. } => self.check_simple_target(id),
            NodeKind::ArrayExpression { elements } => {
                let count = elements.len();
                for (i, element) in elements.iter().enumerate() {
                    let Some(element) = *element else { continue };
                    if let NodeKind::SpreadElement { argument } = *self.kind(element) {
                        if i + 1 != count {
                            return Err(self.error_at(self.range(element), "rest element must be last"));
                        }
                        self.reinterpret_as_pattern(argument)?;
                        self.set_kind(element, NodeKind::RestElement { argument });
                    } else {
                        self.reinterpret_as_pattern(element)?;
                    }
                }
                self.set_kind(id, NodeKind::ArrayPattern { elements });
                Ok(())
            }
            NodeKind::ObjectExpression { properties } => {
                for property in &properties {
                    match self.kind(*property).clone() {
                        NodeKind::SpreadElement { argument } => {
                            self.reinterpret_as_pattern(argument)?;
                            self.set_kind(*property, NodeKind::RestElement { argument });
                        }
                        NodeKind::Property { value, method: false, kind: PropertyKind::Init, .. } => {
                            self.reinterpret_as_pattern(value)?;
                        }
                        _ => return Err(self.error_at(self.range(*property), "invalid destructuring target")),
                    }
                }
                self.set_kind(id, NodeKind::ObjectPattern { properties });
                Ok(())
            }
            NodeKind::AssignmentExpression { operator: crate::ast::AssignOp::Assign, left, right } => {
                self.set_kind(id, NodeKind::AssignmentPattern { left, right });
                Ok(())
            }
            _ => Err(self.error_at(self.range(id), "invalid destructuring target")),
        }
    }

    /// Targets of compound assignment and update expressions.
    pub(crate) fn check_simple_target(&self, id: NodeId) -> PResult<()> {
        match self.kind(id) {
            NodeKind::Identifier { .. } | NodeKind::MemberExpression { .. } => Ok(()),
            NodeKind::ParenthesizedExpression { expression } => self.check_simple_target(*expression),
            // legacy call-expression targets are early errors only in strict code
            NodeKind::CallExpression { .. } => Ok(()),
            _ => Err(self.error_at(self.range(id), "invalid assignment target")),
        }
    }
}
