//! Intraprocedural taint heuristic.
//!
//! A value is tainted when it is read from a configured source (`location.*`,
//! `document.cookie`, `req.query`, form field `.value`, message `event.data`,
//! upload file names) or derived from a tainted value through concatenation,
//! templates, assignment, member access, methods of a tainted receiver or a
//! small set of pass-through functions. A sanitizer call ends the chain.
//! Variables only carry taint inside the function that assigned them.

use std::collections::{HashMap, HashSet};

use jssec_syntax::ast::{AssignOp, BinaryOp};
use jssec_syntax::scope::pattern_identifiers;
use jssec_syntax::{BindingId, NodeId, NodeKind, ScopeTable, SourceUnit, SyntaxTree};

use crate::config::Matchers;
use crate::finding::{ChainStep, StepRole};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SourceKind {
    /// Browser globals such as `location` or `document.cookie`.
    Browser,
    /// Server request objects.
    Request,
    /// Client-supplied upload metadata such as `file.originalname`.
    Upload,
    FormField,
    MessageData,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Taint {
    pub kind: SourceKind,
    /// Member path of the source, e.g. `document.cookie`.
    pub source: String,
    /// Source step followed by propagation steps.
    pub steps: Vec<ChainStep>,
}

impl Taint {
    /// Steps with a final sink step appended.
    pub fn chain_to(&self, sink: ChainStep) -> Vec<ChainStep> {
        let mut steps = self.steps.clone();
        steps.push(sink);
        steps
    }

    pub fn is_cookie(&self) -> bool {
        self.source == "document.cookie"
    }
}

/// Function node a handler expression designates, following one
/// identifier to a local function declaration or initializer.
pub fn resolve_function(tree: &SyntaxTree, scopes: &ScopeTable, expr: NodeId) -> Option<NodeId> {
    let expr = tree.skip_parens(expr);
    if tree.is_function(expr) {
        return Some(expr);
    }
    let b = scopes.binding_of(expr)?;
    for decl in &scopes.binding(b).declarations {
        let parent = tree.parent(*decl)?;
        if tree.is_function(parent) && tree.function(parent)?.id == Some(*decl) {
            return Some(parent);
        }
        if let NodeKind::VariableDeclarator { init: Some(init), .. } = tree.kind(parent) {
            let init = tree.skip_parens(*init);
            if tree.is_function(init) {
                return Some(init);
            }
        }
    }
    None
}

const BROWSER_ROOTS: &[&str] = &["location", "document", "window", "self", "top", "parent", "globalThis"];
const PASS_THROUGH: &[&str] = &[
    "decodeURIComponent",
    "decodeURI",
    "unescape",
    "atob",
    "String",
    "JSON.parse",
    "JSON.stringify",
    "Buffer.from",
    "path.join",
    "path.resolve",
    "path.normalize",
    "path.format",
    "Object.assign",
];
const PASS_THROUGH_CONSTRUCTORS: &[&str] = &["URLSearchParams", "URL", "String"];
const DOM_LOOKUPS: &[&str] = &[
    "getElementById",
    "querySelector",
    "querySelectorAll",
    "getElementsByName",
    "getElementsByClassName",
    "getElementsByTagName",
];

pub struct TaintAnalysis<'a> {
    unit: &'a SourceUnit,
    tree: &'a SyntaxTree,
    scopes: &'a ScopeTable,
    matchers: &'a Matchers,
    vars: HashMap<(BindingId, Option<NodeId>), Taint>,
    dom_elements: HashSet<BindingId>,
    message_handlers: HashSet<NodeId>,
}

impl<'a> TaintAnalysis<'a> {
    pub fn new(unit: &'a SourceUnit, tree: &'a SyntaxTree, scopes: &'a ScopeTable, matchers: &'a Matchers) -> Self {
        let mut ta = TaintAnalysis {
            unit,
            tree,
            scopes,
            matchers,
            vars: HashMap::new(),
            dom_elements: HashSet::new(),
            message_handlers: HashSet::new(),
        };
        ta.find_dom_elements();
        ta.find_message_handlers();
        ta.propagate();
        ta
    }

    fn step(&self, role: StepRole, node: NodeId, description: String) -> ChainStep {
        ChainStep { role, span: self.unit.span(self.tree.range(node)), description }
    }

    /// Whether `ident` is a browser global rather than a local of that name.
    fn is_unbound(&self, ident: NodeId) -> bool {
        match self.scopes.binding_of(ident) {
            None => true,
            Some(b) => self.scopes.binding(b).kind == jssec_syntax::BindingKind::ImplicitGlobal,
        }
    }

    fn is_dom_lookup(&self, expr: NodeId) -> bool {
        let expr = self.tree.skip_parens(expr);
        match self.tree.kind(expr) {
            NodeKind::CallExpression { callee, .. } => {
                self.tree.last_name(*callee).is_some_and(|n| DOM_LOOKUPS.contains(&n))
            }
            NodeKind::MemberExpression { object, computed: true, .. } => self.is_dom_lookup(*object),
            _ => false,
        }
    }

    fn find_dom_elements(&mut self) {
        for node in self.tree.descendants(self.tree.root()) {
            if let NodeKind::VariableDeclarator { id, init: Some(init) } = self.tree.kind(node) {
                if self.is_dom_lookup(*init) {
                    if let Some(b) = self.scopes.declared_by(*id) {
                        self.dom_elements.insert(b);
                    }
                }
            }
        }
    }

    pub fn resolve_function(&self, expr: NodeId) -> Option<NodeId> {
        resolve_function(self.tree, self.scopes, expr)
    }

    fn find_message_handlers(&mut self) {
        for node in self.tree.descendants(self.tree.root()) {
            match self.tree.kind(node) {
                NodeKind::CallExpression { callee, arguments, .. }
                    if self.tree.last_name(*callee) == Some("addEventListener") && arguments.len() >= 2 =>
                {
                    if self.tree.string_value(arguments[0]) == Some("message") {
                        if let Some(f) = self.resolve_function(arguments[1]) {
                            self.message_handlers.insert(f);
                        }
                    }
                }
                NodeKind::AssignmentExpression { left, right, .. }
                    if self.tree.last_name(*left) == Some("onmessage") =>
                {
                    if let Some(f) = self.resolve_function(*right) {
                        self.message_handlers.insert(f);
                    }
                }
                _ => {}
            }
        }
    }

    fn propagate(&mut self) {
        let mut sites: Vec<NodeId> = self
            .tree
            .descendants(self.tree.root())
            .filter(|n| {
                matches!(
                    self.tree.kind(*n),
                    NodeKind::VariableDeclarator { init: Some(_), .. }
                        | NodeKind::AssignmentExpression { .. }
                        | NodeKind::ForInStatement { .. }
                        | NodeKind::ForOfStatement { .. }
                )
            })
            .collect();
        sites.sort_by_key(|n| self.tree.range(*n).start);
        for _ in 0..4 {
            let mut changed = false;
            for &site in &sites {
                let (target, value) = match self.tree.kind(site) {
                    NodeKind::VariableDeclarator { id, init: Some(init) } => (*id, *init),
                    NodeKind::AssignmentExpression { operator, left, right } => {
                        if matches!(operator, AssignOp::Assign | AssignOp::Add | AssignOp::Or | AssignOp::Nullish) {
                            (*left, *right)
                        } else {
                            continue;
                        }
                    }
                    NodeKind::ForInStatement { left, right, .. } | NodeKind::ForOfStatement { left, right, .. } => {
                        (*left, *right)
                    }
                    _ => continue,
                };
                let Some(taint) = self.taint_of(value) else { continue };
                let owner = self.tree.enclosing_function(site);
                let mut idents = Vec::new();
                match self.tree.kind(target) {
                    NodeKind::VariableDeclaration { declarations, .. } => {
                        for d in declarations {
                            if let NodeKind::VariableDeclarator { id, .. } = self.tree.kind(*d) {
                                pattern_identifiers(self.tree, *id, &mut idents);
                            }
                        }
                    }
                    _ => pattern_identifiers(self.tree, self.tree.skip_parens(target), &mut idents),
                }
                for ident in idents {
                    let Some(b) = self.scopes.binding_of(ident) else { continue };
                    if self.vars.contains_key(&(b, owner)) {
                        continue;
                    }
                    let name = self.tree.identifier_name(ident).unwrap_or_default();
                    let mut t = taint.clone();
                    t.steps.push(self.step(StepRole::Propagation, site, format!("flows into `{name}`")));
                    self.vars.insert((b, owner), t);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
    }

    fn source(&self, node: NodeId, kind: SourceKind, path: &str) -> Taint {
        let description = match kind {
            SourceKind::FormField => format!("form field value `{path}` is user input"),
            SourceKind::MessageData => format!("`{path}` comes from a cross-window message"),
            SourceKind::Upload => format!("`{path}` is supplied by the uploading client"),
            _ => format!("`{path}` is user-controlled"),
        };
        Taint { kind, source: path.to_string(), steps: vec![self.step(StepRole::Source, node, description)] }
    }

    fn member_source(&self, expr: NodeId) -> Option<Taint> {
        let tree = self.tree;
        let path = tree.member_path(expr)?;
        let root = tree.root_identifier(expr)?;
        let root_name = tree.identifier_name(root)?;
        let browser_root = BROWSER_ROOTS.contains(&root_name);
        if matches!(tree.kind(expr), NodeKind::MemberExpression { .. }) && self.matchers.upload_fields.matches(&path) {
            return Some(self.source(expr, SourceKind::Upload, &path));
        }
        if self.matchers.taint_sources.matches(&path) && (!browser_root || self.is_unbound(root)) {
            let kind = if browser_root { SourceKind::Browser } else { SourceKind::Request };
            return Some(self.source(expr, kind, &path));
        }
        None
    }

    /// Taint of an expression evaluated where it stands.
    pub fn taint_of(&self, expr: NodeId) -> Option<Taint> {
        let tree = self.tree;
        let expr = tree.skip_parens(expr);
        match tree.kind(expr) {
            NodeKind::Identifier { name } => {
                if let Some(b) = self.scopes.binding_of(expr) {
                    let owner = tree.enclosing_function(expr);
                    if let Some(t) = self.vars.get(&(b, owner)) {
                        return Some(t.clone());
                    }
                }
                if BROWSER_ROOTS.contains(&name.as_str()) {
                    return self.member_source(expr);
                }
                None
            }
            NodeKind::MemberExpression { object, property, computed, .. } => {
                if let Some(t) = self.member_source(expr) {
                    return Some(t);
                }
                let prop = tree.property_key_name(*property, *computed);
                let object_node = tree.skip_parens(*object);
                if prop == Some("value") {
                    let element = self.is_dom_lookup(object_node)
                        || self.scopes.binding_of(object_node).is_some_and(|b| self.dom_elements.contains(&b))
                        || tree.last_name(object_node).is_some_and(|n| n == "target" || n == "currentTarget");
                    if element {
                        let path = tree.callee_path(expr).unwrap_or_else(|| "value".to_string());
                        return Some(self.source(expr, SourceKind::FormField, &path));
                    }
                }
                if prop == Some("data") && matches!(tree.kind(object_node), NodeKind::Identifier { .. }) {
                    if let Some(f) = tree.enclosing_function(expr) {
                        let is_event = self.message_handlers.contains(&f)
                            && tree.function(f).and_then(|f| f.params.first()).is_some_and(|p| {
                                self.scopes.binding_of(*p).is_some()
                                    && self.scopes.binding_of(*p) == self.scopes.binding_of(object_node)
                            });
                        if is_event {
                            let path = tree.member_path(expr).unwrap_or_default();
                            return Some(self.source(expr, SourceKind::MessageData, &path));
                        }
                    }
                }
                self.taint_of(*object)
            }
            NodeKind::CallExpression { callee, arguments, .. } => {
                let callee_node = tree.skip_parens(*callee);
                let path = tree.callee_path(callee_node);
                let last = tree.last_name(callee_node);
                if self.is_sanitizer(path.as_deref(), last) {
                    return None;
                }
                if let Some(p) = path.as_deref().filter(|p| PASS_THROUGH.contains(p)) {
                    let name = p.to_string();
                    return arguments.iter().find_map(|a| self.taint_of(*a)).map(|mut t| {
                        t.steps.push(self.step(StepRole::Propagation, expr, format!("passes through `{name}()`")));
                        t
                    });
                }
                if let NodeKind::MemberExpression { object, .. } = tree.kind(callee_node) {
                    return self.taint_of(*object);
                }
                None
            }
            NodeKind::NewExpression { callee, arguments } => {
                let name = tree.identifier_name(tree.skip_parens(*callee))?;
                if PASS_THROUGH_CONSTRUCTORS.contains(&name) {
                    return arguments.iter().find_map(|a| self.taint_of(*a));
                }
                None
            }
            NodeKind::BinaryExpression { operator: BinaryOp::Add, left, right } => {
                self.taint_of(*left).or_else(|| self.taint_of(*right))
            }
            NodeKind::LogicalExpression { left, right, .. } => self.taint_of(*left).or_else(|| self.taint_of(*right)),
            NodeKind::ConditionalExpression { consequent, alternate, .. } => {
                self.taint_of(*consequent).or_else(|| self.taint_of(*alternate))
            }
            NodeKind::TemplateLiteral { expressions, .. } => expressions.iter().find_map(|e| self.taint_of(*e)),
            NodeKind::AssignmentExpression { right, .. } => self.taint_of(*right),
            NodeKind::SequenceExpression { expressions } => expressions.last().and_then(|e| self.taint_of(*e)),
            NodeKind::AwaitExpression { argument } | NodeKind::SpreadElement { argument } => self.taint_of(*argument),
            NodeKind::ArrayExpression { elements } => elements.iter().flatten().find_map(|e| self.taint_of(*e)),
            NodeKind::ObjectExpression { properties } => properties.iter().find_map(|p| match tree.kind(*p) {
                NodeKind::Property { value, .. } => self.taint_of(*value),
                NodeKind::SpreadElement { argument } => self.taint_of(*argument),
                _ => None,
            }),
            _ => None,
        }
    }

    pub fn is_sanitizer(&self, path: Option<&str>, last: Option<&str>) -> bool {
        last.is_some_and(|n| self.matchers.sanitizers.matches(n))
            || path.is_some_and(|p| self.matchers.sanitizers.matches(p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::AnalyzerConfig;
    use jssec_syntax::{build_scope_table, parse_program};

    fn taint_at(src: &str, marker: &str) -> Option<Taint> {
        let unit = SourceUnit::js_file("t.js", src);
        let tree = parse_program(src).unwrap();
        let scopes = build_scope_table(&tree);
        let matchers = AnalyzerConfig::default().matchers();
        let ta = TaintAnalysis::new(&unit, &tree, &scopes, &matchers);
        let at = src.rfind(marker).unwrap() as u32;
        let node = tree
            .ids()
            .filter(|n| tree.range(*n).start == at && tree.range(*n).len() == marker.len() as u32)
            .min_by_key(|n| n.index())
            .unwrap();
        ta.taint_of(node)
    }

    #[test]
    fn location_hash_flows_through_variables() {
        let t = taint_at("var h = location.hash.substring(1); var html = '<b>' + h; sink(html);", "html").unwrap();
        assert_eq!(t.source, "location.hash");
        assert_eq!(t.steps.len(), 3);
        assert_eq!(t.steps[0].role, StepRole::Source);
    }

    #[test]
    fn sanitizers_stop_taint() {
        assert!(taint_at("var x = sanitizeName(req.params.name); use(x);", "x").is_none());
        assert!(taint_at("var x = encodeURIComponent(location.search); use(x);", "x").is_none());
        assert!(taint_at("var x = decodeURIComponent(location.search); use(x);", "x").is_some());
    }

    #[test]
    fn url_search_params() {
        let src = "const params = new URLSearchParams(location.search); const u = params.get('url'); go(u);";
        assert_eq!(taint_at(src, "u").unwrap().source, "location.search");
    }

    #[test]
    fn local_shadowing_is_not_a_source() {
        assert!(taint_at("function f(location){ return location.hash; }", "location.hash").is_none());
        assert!(taint_at("function f(){ return window.location.hash; }", "window.location.hash").is_some());
    }

    #[test]
    fn taint_does_not_cross_functions() {
        let src = "var t = location.hash; function f(){ return t; }";
        assert!(taint_at(src, "t").is_none());
        assert!(taint_at("var t = location.hash; t;", "t").is_some());
    }

    #[test]
    fn special_sources() {
        assert!(taint_at("var q = document.getElementById('q').value;", "document.getElementById('q').value").is_some());
        let src = "window.addEventListener('message', function(e){ run(e.data); });";
        assert_eq!(taint_at(src, "e.data").unwrap().kind, SourceKind::MessageData);
        assert!(taint_at("function g(e){ run(e.data); }", "e.data").is_none());
        let src = "app.post('/u', function(req, res){ var n = req.file.originalname; save(n); });";
        assert_eq!(taint_at(src, "n").unwrap().kind, SourceKind::Upload);
    }

    #[test]
    fn destructuring_and_loops() {
        assert!(taint_at("function h(req){ const {name} = req.body; name; }", "name").is_some());
        assert!(taint_at("function h(req){ for (const k in req.body) { k; } }", "k").is_some());
    }
}
