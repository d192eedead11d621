use std::collections::{BTreeMap, BTreeSet};

use jssec_syntax::ast::AssignOp;
use jssec_syntax::{FunctionKind, NodeId, NodeKind, SourceUnit, Span, SyntaxTree};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObjectKind {
    ObjectLiteral,
    ConstructorFunction,
    Class,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObjectMetrics {
    #[serde(skip)]
    pub node: NodeId,
    pub span: Span,
    pub kind: ObjectKind,
    pub name: String,
    pub member_count: u32,
}

/// `this.<name> = ...` writes belonging to `func` itself (nested
/// non-arrow functions have their own `this`).
fn this_assignments(tree: &SyntaxTree, func: NodeId) -> BTreeSet<String> {
    let mut names = BTreeSet::new();
    let Some(f) = tree.function(func) else { return names };
    let mut stack = vec![f.body];
    while let Some(node) = stack.pop() {
        if let Some(inner) = tree.function(node) {
            if inner.kind != FunctionKind::Arrow {
                continue;
            }
        }
        if let NodeKind::AssignmentExpression { left, .. } = tree.kind(node) {
            if let NodeKind::MemberExpression { object, property, computed, .. } = tree.kind(tree.skip_parens(*left)) {
                if matches!(tree.kind(*object), NodeKind::ThisExpression) {
                    if let Some(name) = tree.property_key_name(*property, *computed) {
                        names.insert(name.to_string());
                    }
                }
            }
        }
        stack.extend(tree.children(node));
    }
    names
}

/// `X.prototype.m = ...` and `X.prototype = { ... }` members keyed by `X`.
/// The object literals assigned to `X.prototype` are returned separately
/// so they are not also counted as standalone objects.
fn prototype_members(tree: &SyntaxTree) -> (BTreeMap<String, BTreeSet<String>>, BTreeSet<NodeId>) {
    let mut members: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    let mut literals = BTreeSet::new();
    for node in tree.descendants(tree.root()) {
        let NodeKind::AssignmentExpression { operator: AssignOp::Assign, left, right } = tree.kind(node) else {
            continue;
        };
        let Some(path) = tree.member_path(*left) else { continue };
        if let Some((owner, member)) = path.rsplit_once(".prototype.") {
            if !owner.contains('.') {
                members.entry(owner.to_string()).or_default().insert(member.to_string());
            }
        } else if let Some(owner) = path.strip_suffix(".prototype") {
            let right = tree.skip_parens(*right);
            if let NodeKind::ObjectExpression { properties } = tree.kind(right) {
                if !owner.contains('.') {
                    let entry = members.entry(owner.to_string()).or_default();
                    for p in properties {
                        if let NodeKind::Property { key, computed, .. } = tree.kind(*p) {
                            if let Some(name) = tree.property_key_name(*key, *computed) {
                                entry.insert(name.to_string());
                            }
                        }
                    }
                    literals.insert(right);
                }
            }
        }
    }
    (members, literals)
}

fn starts_uppercase(name: &str) -> bool {
    name.chars().next().is_some_and(char::is_uppercase)
}

pub fn measure_objects(unit: &SourceUnit, tree: &SyntaxTree) -> Vec<ObjectMetrics> {
    let (proto_members, proto_literals) = prototype_members(tree);
    let mut out = Vec::new();
    for node in tree.descendants(tree.root()) {
        match tree.kind(node) {
            NodeKind::ObjectExpression { properties } if !proto_literals.contains(&node) => {
                let count = properties.iter().filter(|p| matches!(tree.kind(**p), NodeKind::Property { .. })).count();
                out.push(ObjectMetrics {
                    node,
                    span: unit.span(tree.range(node)),
                    kind: ObjectKind::ObjectLiteral,
                    name: super::functions::assigned_name(tree, node).unwrap_or_else(|| "<anonymous>".to_string()),
                    member_count: count as u32,
                });
            }
            NodeKind::Class { id, body, .. } => {
                let mut names = BTreeSet::new();
                let mut anonymous = 0u32;
                for member in body {
                    match tree.kind(*member) {
                        NodeKind::MethodDefinition { key, computed, value, .. } => {
                            match tree.property_key_name(*key, *computed) {
                                Some("constructor") if !computed => names.extend(this_assignments(tree, *value)),
                                Some(name) => {
                                    names.insert(name.to_string());
                                }
                                None => anonymous += 1,
                            }
                        }
                        NodeKind::PropertyDefinition { key, computed, .. } => {
                            match tree.property_key_name(*key, *computed) {
                                Some(name) => {
                                    names.insert(name.to_string());
                                }
                                None => anonymous += 1,
                            }
                        }
                        _ => {}
                    }
                }
                let name = id.and_then(|i| tree.identifier_name(i)).map(str::to_string).unwrap_or_else(|| {
                    super::functions::assigned_name(tree, node).unwrap_or_else(|| "<anonymous>".to_string())
                });
                if let Some(extra) = proto_members.get(&name) {
                    names.extend(extra.iter().cloned());
                }
                out.push(ObjectMetrics {
                    node,
                    span: unit.span(tree.range(node)),
                    kind: ObjectKind::Class,
                    name,
                    member_count: names.len() as u32 + anonymous,
                });
            }
            NodeKind::Function(f) if matches!(f.kind, FunctionKind::Declaration | FunctionKind::Expression) => {
                let name = super::functions::function_name(tree, node);
                if !starts_uppercase(&name) || name.contains('.') {
                    continue;
                }
                let mut names = this_assignments(tree, node);
                if let Some(extra) = proto_members.get(&name) {
                    names.extend(extra.iter().cloned());
                }
                if names.is_empty() {
                    continue;
                }
                out.push(ObjectMetrics {
                    node,
                    span: unit.span(tree.range(node)),
                    kind: ObjectKind::ConstructorFunction,
                    name,
                    member_count: names.len() as u32,
                });
            }
            _ => {}
        }
    }
    out.sort_by_key(|m| (m.span.start_byte, m.span.end_byte));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use jssec_syntax::parse_program;

    fn measure(src: &str) -> Vec<ObjectMetrics> {
        let unit = SourceUnit::js_file("t.js", src);
        let tree = parse_program(src).unwrap();
        measure_objects(&unit, &tree)
    }

    #[test]
    fn literal_members() {
        let m = measure("var o = {a:1,b:2,c:3};");
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].member_count, 3);
        assert_eq!(m[0].name, "o");
    }

    #[test]
    fn nested_literal_counts_once() {
        let m = measure("x = {a: {b: 1, c: 2}, d() {}, ...rest};");
        assert_eq!(m[0].member_count, 2);
        assert_eq!(m[1].member_count, 2);
    }

    #[test]
    fn class_members() {
        let m = measure("class C { m1(){} m2(){} }");
        assert_eq!((m[0].kind, m[0].member_count), (ObjectKind::Class, 2));
        let m = measure("class D { constructor(){ this.a = 1; this.b = 2; } get a(){ return 1 } x = 1; static y; }");
        assert_eq!(m[0].member_count, 4);
    }

    #[test]
    fn constructor_functions() {
        let body: String = (0..22).map(|i| format!("  this.p{i} = {i};\n")).collect();
        let src = format!("function Widget() {{\n{body}}}\nWidget.prototype.render = function(){{}};");
        let m = measure(&src);
        let w = m.iter().find(|o| o.kind == ObjectKind::ConstructorFunction).unwrap();
        assert_eq!(w.member_count, 23);
        let m = measure("function helper(){ this.x = 1; }");
        assert!(m.is_empty());
    }

    #[test]
    fn prototype_literal_folds_into_constructor() {
        let m = measure("function P(){ this.a = 1 } P.prototype = { b(){}, c: 2 };");
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].member_count, 3);
    }
}
