//! The rule registry and the helpers rules share.
//!
//! Rules see one unit at a time through [`UnitContext`], or the whole run
//! through [`RunContext`] for checks that span files (prototype chains,
//! `javascript:` URLs, global collisions).

mod context;
mod metric;
mod pattern;

pub(crate) use metric::global_declarations;

use std::cell::OnceCell;
use std::collections::{BTreeSet, HashSet};

use jssec_syntax::ast::BinaryOp;
use jssec_syntax::{BindingKind, NodeId, NodeKind, SourceUnit, Span, SyntaxTree, TextRange};

use crate::config::{AnalyzerConfig, Matchers};
use crate::finding::Finding;
use crate::frontend::{JavascriptUrlSite, ParsedUnit};
use crate::mapping::RuleId;
use crate::metrics::{PrototypeGraph, UnitMetrics};
use crate::suppress::Suppression;
use crate::taint::TaintAnalysis;

/// A parsed unit with everything measured about it.
#[derive(Debug)]
pub struct AnalyzedUnit {
    pub parsed: ParsedUnit,
    pub metrics: UnitMetrics,
    pub suppressions: Vec<Suppression>,
}

/// A top-level declaration that lands on the global object.
#[derive(Clone, Debug)]
pub struct GlobalDeclaration {
    pub name: String,
    pub unit: usize,
    pub span: Span,
}

/// Shared, read-only state for one analysis run.
pub struct RunContext<'a> {
    pub cfg: &'a AnalyzerConfig,
    pub matchers: &'a Matchers,
    pub units: &'a [AnalyzedUnit],
    pub graph: &'a PrototypeGraph,
    pub javascript_urls: &'a [JavascriptUrlSite],
    /// Names read as globals anywhere in the run, including `window.<name>`
    /// accesses and identifiers inside `javascript:` URLs.
    pub referenced_names: &'a HashSet<String>,
    pub global_declarations: &'a [GlobalDeclaration],
}

pub struct UnitContext<'a> {
    pub run: &'a RunContext<'a>,
    pub data: &'a AnalyzedUnit,
    taint: OnceCell<TaintAnalysis<'a>>,
}

impl<'a> UnitContext<'a> {
    pub fn new(run: &'a RunContext<'a>, data: &'a AnalyzedUnit) -> Self {
        UnitContext { run, data, taint: OnceCell::new() }
    }

    pub fn unit(&self) -> &'a SourceUnit {
        &self.data.parsed.unit
    }

    pub fn tree(&self) -> &'a SyntaxTree {
        &self.data.parsed.tree
    }

    pub fn scopes(&self) -> &'a jssec_syntax::ScopeTable {
        &self.data.parsed.scopes
    }

    pub fn matchers(&self) -> &'a Matchers {
        self.run.matchers
    }

    pub fn cfg(&self) -> &'a AnalyzerConfig {
        self.run.cfg
    }

    pub fn taint(&self) -> &TaintAnalysis<'a> {
        self.taint.get_or_init(|| TaintAnalysis::new(self.unit(), self.tree(), self.scopes(), self.run.matchers))
    }

    pub fn span(&self, node: NodeId) -> Span {
        self.unit().span(self.tree().range(node))
    }

    pub fn finding(&self, rule: RuleId, node: NodeId, message: impl Into<String>) -> Finding {
        Finding::new(rule, &self.unit().origin_path, self.span(node), message)
    }

    /// Location for unit-wide findings: the first token, or the unit start.
    pub fn anchor(&self) -> Span {
        let range = self.tree().tokens.first().copied().unwrap_or(TextRange::new(0, 0));
        self.unit().span(range)
    }

    /// Source text of a node, shortened for messages.
    pub fn snippet(&self, node: NodeId) -> String {
        shorten(self.tree().text(&self.unit().text, node))
    }

    /// Whether an identifier refers to a global rather than a local binding.
    pub fn is_unbound(&self, ident: NodeId) -> bool {
        match self.scopes().binding_of(ident) {
            None => true,
            Some(b) => self.scopes().binding(b).kind == BindingKind::ImplicitGlobal,
        }
    }

    /// Whether the root identifier of a member chain is a global.
    pub fn root_is_global(&self, expr: NodeId) -> bool {
        self.tree().root_identifier(expr).is_none_or(|r| self.is_unbound(r))
    }

    /// The declarator initializer of the variable an identifier refers to,
    /// when it has exactly one declaration.
    pub fn initializer_of(&self, ident: NodeId) -> Option<NodeId> {
        let tree = self.tree();
        let b = self.scopes().binding_of(tree.skip_parens(ident))?;
        let binding = self.scopes().binding(b);
        let [decl] = binding.declarations.as_slice() else { return None };
        match tree.kind(tree.parent(*decl)?) {
            NodeKind::VariableDeclarator { id, init: Some(init) } if id == decl => Some(*init),
            _ => None,
        }
    }
}

pub fn shorten(text: &str) -> String {
    let one_line: String = text.split_whitespace().collect::<Vec<_>>().join(" ");
    if one_line.chars().count() > 60 {
        let cut: String = one_line.chars().take(57).collect();
        format!("{cut}...")
    } else {
        one_line
    }
}

pub trait Rule: Send + Sync {
    fn id(&self) -> RuleId;

    fn check_unit(&self, _ctx: &UnitContext, _out: &mut Vec<Finding>) {}

    /// Checks over the whole run, executed once after the per-unit pass.
    fn check_run(&self, _run: &RunContext, _out: &mut Vec<Finding>) {}
}

type UnitCheck = fn(&UnitContext, &mut Vec<Finding>);
type RunCheck = fn(&RunContext, &mut Vec<Finding>);

struct FnRule {
    id: RuleId,
    unit: Option<UnitCheck>,
    run: Option<RunCheck>,
}

impl Rule for FnRule {
    fn id(&self) -> RuleId {
        self.id
    }

    fn check_unit(&self, ctx: &UnitContext, out: &mut Vec<Finding>) {
        if let Some(f) = self.unit {
            f(ctx, out)
        }
    }

    fn check_run(&self, run: &RunContext, out: &mut Vec<Finding>) {
        if let Some(f) = self.run {
            f(run, out)
        }
    }
}

fn unit_rule(id: RuleId, f: UnitCheck) -> Box<dyn Rule> {
    Box::new(FnRule { id, unit: Some(f), run: None })
}

/// The 24 built-in rules in id order.
pub fn builtin_rules() -> Vec<Box<dyn Rule>> {
    let mut rules: Vec<Box<dyn Rule>> = vec![
        unit_rule(RuleId::LARGE_OBJECT, metric::large_object),
        unit_rule(RuleId::LONG_FUNCTION, metric::long_function),
        unit_rule(RuleId::LONG_PARAMETER_LIST, metric::long_parameter_list),
        unit_rule(RuleId::EMPTY_CATCH, pattern::empty_catch),
        unit_rule(RuleId::DEAD_CODE, pattern::dead_code),
        unit_rule(RuleId::NESTED_CALLBACK, metric::nested_callback),
        Box::new(FnRule {
            id: RuleId::EXCESSIVE_GLOBALS,
            unit: Some(metric::excessive_globals),
            run: Some(metric::global_collisions),
        }),
        unit_rule(RuleId::HARDCODED_SECRETS, pattern::hardcoded_secrets),
        unit_rule(RuleId::DYNAMIC_CODE, pattern::dynamic_code),
        unit_rule(RuleId::MISSING_DEFAULT, pattern::missing_default),
        Box::new(FnRule {
            id: RuleId::JS_HTML_COUPLING,
            unit: Some(pattern::js_html_coupling),
            run: Some(pattern::javascript_urls),
        }),
        unit_rule(RuleId::CROSS_ORIGIN, context::cross_origin),
        unit_rule(RuleId::ACTIVE_DEBUGGING, pattern::active_debugging),
        unit_rule(RuleId::INSECURE_DOM, context::insecure_dom),
        unit_rule(RuleId::UNVALIDATED_REDIRECT, context::unvalidated_redirect),
        unit_rule(RuleId::JSON_INJECTION, context::json_injection),
        unit_rule(RuleId::UNPROTECTED_COOKIES, context::unprotected_cookies),
        Box::new(FnRule { id: RuleId::LONG_PROTOTYPE_CHAIN, unit: None, run: Some(metric::long_prototype_chain) }),
        unit_rule(RuleId::PROTOTYPE_POLLUTION, context::prototype_pollution),
        unit_rule(RuleId::WEAK_CRYPTO, pattern::weak_crypto),
        unit_rule(RuleId::INSECURE_HTTP, pattern::insecure_http),
        unit_rule(RuleId::LOGGING_SENSITIVE, context::logging_sensitive),
        unit_rule(RuleId::INSECURE_FILE_HANDLING, context::insecure_file_handling),
        unit_rule(RuleId::ERROR_DISCLOSURE, context::error_disclosure),
    ];
    rules.sort_by_key(|r| r.id());
    rules
}

// ---- shared AST helpers ----

/// Text of a string literal or a template literal without substitutions.
pub(crate) fn constant_string(tree: &SyntaxTree, node: NodeId) -> Option<String> {
    match tree.kind(tree.skip_parens(node)) {
        NodeKind::StringLiteral { value } => Some(value.clone()),
        NodeKind::TemplateLiteral { quasis, expressions } if expressions.is_empty() => {
            quasis.first().and_then(|q| quasi_text(tree, *q)).map(str::to_string)
        }
        _ => None,
    }
}

pub(crate) fn quasi_text(tree: &SyntaxTree, quasi: NodeId) -> Option<&str> {
    match tree.kind(quasi) {
        NodeKind::TemplateElement { cooked, raw } => Some(cooked.as_deref().unwrap_or(raw)),
        _ => None,
    }
}

/// One piece of a string being assembled.
#[derive(Clone, Debug)]
pub(crate) enum Part {
    Literal(NodeId, String),
    Value,
}

impl Part {
    pub fn is_literal(&self) -> bool {
        matches!(self, Part::Literal(..))
    }
}

/// Flatten `a + "b" + c` and template literals into ordered parts.
pub(crate) fn string_parts(tree: &SyntaxTree, node: NodeId, out: &mut Vec<Part>) {
    let node = tree.skip_parens(node);
    match tree.kind(node) {
        NodeKind::BinaryExpression { operator: BinaryOp::Add, left, right } => {
            string_parts(tree, *left, out);
            string_parts(tree, *right, out);
        }
        NodeKind::TemplateLiteral { quasis, expressions } => {
            for (i, q) in quasis.iter().enumerate() {
                if let Some(text) = quasi_text(tree, *q) {
                    if !text.is_empty() {
                        out.push(Part::Literal(*q, text.to_string()));
                    }
                }
                if let Some(e) = expressions.get(i) {
                    string_parts(tree, *e, out);
                }
            }
        }
        NodeKind::StringLiteral { value } => out.push(Part::Literal(node, value.clone())),
        NodeKind::NumericLiteral { .. } | NodeKind::BooleanLiteral { .. } | NodeKind::NullLiteral => {
            out.push(Part::Literal(node, String::new()))
        }
        _ => out.push(Part::Value),
    }
}

pub(crate) fn parts_of(tree: &SyntaxTree, node: NodeId) -> Vec<Part> {
    let mut parts = Vec::new();
    string_parts(tree, node, &mut parts);
    parts
}

/// A value fixed at analysis time: literals and concatenations of them.
pub(crate) fn is_constant(tree: &SyntaxTree, node: NodeId) -> bool {
    parts_of(tree, node).iter().all(Part::is_literal)
}

/// Whether an expression evaluates to a string: a string literal, a
/// template, or a concatenation involving one.
pub(crate) fn is_string_valued(tree: &SyntaxTree, node: NodeId) -> bool {
    let node = tree.skip_parens(node);
    match tree.kind(node) {
        NodeKind::StringLiteral { .. } | NodeKind::TemplateLiteral { .. } => true,
        NodeKind::BinaryExpression { operator: BinaryOp::Add, .. } => parts_of(tree, node)
            .iter()
            .any(|p| matches!(p, Part::Literal(n, _) if !matches!(tree.kind(*n), NodeKind::NumericLiteral { .. } | NodeKind::BooleanLiteral { .. } | NodeKind::NullLiteral))),
        _ => false,
    }
}

/// The outermost expression of a `+` chain containing `node`.
pub(crate) fn concat_root(tree: &SyntaxTree, node: NodeId) -> NodeId {
    let mut cur = node;
    while let Some(parent) = tree.parent(cur) {
        match tree.kind(parent) {
            NodeKind::ParenthesizedExpression { .. } | NodeKind::BinaryExpression { operator: BinaryOp::Add, .. } => {
                cur = parent
            }
            _ => break,
        }
    }
    cur
}

/// Call arguments, for both `f()` and `new F()`.
pub(crate) fn call_parts(tree: &SyntaxTree, node: NodeId) -> Option<(NodeId, &[NodeId])> {
    match tree.kind(node) {
        NodeKind::CallExpression { callee, arguments, .. } | NodeKind::NewExpression { callee, arguments } => {
            Some((tree.skip_parens(*callee), arguments))
        }
        _ => None,
    }
}

/// Names of every identifier inside an expression.
pub(crate) fn mentioned_names(tree: &SyntaxTree, node: NodeId) -> BTreeSet<String> {
    tree.descendants(node).filter_map(|n| tree.identifier_name(n).map(str::to_string)).collect()
}

/// Nodes below `root` that are not inside a nested function.
pub(crate) fn own_nodes(tree: &SyntaxTree, root: NodeId) -> Vec<NodeId> {
    let mut out = Vec::new();
    let mut stack = vec![root];
    while let Some(n) = stack.pop() {
        out.push(n);
        for c in tree.children(n).into_iter().rev() {
            if !tree.is_function(c) {
                stack.push(c);
            }
        }
    }
    out
}

fn exits(tree: &SyntaxTree, stmt: NodeId) -> bool {
    match tree.kind(stmt) {
        NodeKind::ReturnStatement { .. }
        | NodeKind::ThrowStatement { .. }
        | NodeKind::BreakStatement { .. }
        | NodeKind::ContinueStatement { .. } => true,
        NodeKind::BlockStatement { body } => body.iter().any(|s| exits(tree, *s)),
        _ => false,
    }
}

fn mentions_any(tree: &SyntaxTree, node: NodeId, names: &BTreeSet<String>) -> bool {
    tree.descendants(node).any(|n| tree.identifier_name(n).is_some_and(|name| names.contains(name)))
}

/// Whether a check on one of the identifiers in `value` controls whether
/// `site` runs: an enclosing `if`/`?:`/`&&` whose test mentions it, or an
/// earlier `if (test) return;` style early exit in an enclosing block.
pub(crate) fn is_guarded(tree: &SyntaxTree, site: NodeId, value: NodeId) -> bool {
    let names = mentioned_names(tree, value);
    if names.is_empty() {
        return false;
    }
    let mut child = site;
    for parent in tree.ancestors(site) {
        match tree.kind(parent) {
            NodeKind::IfStatement { test, .. } | NodeKind::ConditionalExpression { test, .. }
                if *test != child && mentions_any(tree, *test, &names) =>
            {
                return true;
            }
            NodeKind::LogicalExpression { left, right, .. } if *right == child && mentions_any(tree, *left, &names) => {
                return true;
            }
            NodeKind::BlockStatement { body }
            | NodeKind::Program { body }
            | NodeKind::SwitchCase { consequent: body, .. } => {
                let before = body.iter().take_while(|s| **s != child);
                for stmt in before {
                    if let NodeKind::IfStatement { test, consequent, .. } = tree.kind(*stmt) {
                        if exits(tree, *consequent) && mentions_any(tree, *test, &names) {
                            return true;
                        }
                    }
                }
            }
            _ => {}
        }
        if tree.is_function(parent) {
            break;
        }
        child = parent;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use jssec_syntax::parse_program;

    fn find(tree: &SyntaxTree, src: &str, text: &str) -> NodeId {
        find_len(tree, src, text, text.len())
    }

    /// Node starting where `text` last occurs, `len` bytes long.
    fn find_len(tree: &SyntaxTree, src: &str, text: &str, len: usize) -> NodeId {
        let at = src.rfind(text).unwrap() as u32;
        tree.ids().find(|n| tree.range(*n).start == at && tree.range(*n).len() == len as u32).unwrap()
    }

    #[test]
    fn parts_flatten_concat_and_templates() {
        let src = "x = 'a' + b + `c${d}e`;";
        let tree = parse_program(src).unwrap();
        let parts = parts_of(&tree, find(&tree, src, "'a' + b + `c${d}e`"));
        let shape: Vec<bool> = parts.iter().map(Part::is_literal).collect();
        assert_eq!(shape, [true, false, true, false, true]);
    }

    #[test]
    fn guards() {
        let src = "function f(u){ if (!ok(u)) return; go(u); }";
        let tree = parse_program(src).unwrap();
        let call = find(&tree, src, "go(u)");
        let arg = find_len(&tree, src, "u)", 1);
        assert!(is_guarded(&tree, call, arg));
        let src = "function f(u){ go(u); }";
        let tree = parse_program(src).unwrap();
        assert!(!is_guarded(&tree, find(&tree, src, "go(u)"), find_len(&tree, src, "u)", 1)));
        let src = "function f(u){ if (allowed.includes(u)) { go(u); } }";
        let tree = parse_program(src).unwrap();
        assert!(is_guarded(&tree, find(&tree, src, "go(u)"), find_len(&tree, src, "u)", 1)));
    }

    #[test]
    fn constants() {
        let src = "a = 'x' + 1 + `y`; b = 'x' + y; c = `t`;";
        let tree = parse_program(src).unwrap();
        assert!(is_constant(&tree, find(&tree, src, "'x' + 1 + `y`")));
        assert!(!is_constant(&tree, find(&tree, src, "'x' + y")));
        assert_eq!(constant_string(&tree, find(&tree, src, "`t`")).as_deref(), Some("t"));
    }

    #[test]
    fn registry_is_complete() {
        let ids: Vec<u8> = builtin_rules().iter().map(|r| r.id().number()).collect();
        assert_eq!(ids, (1..=24).collect::<Vec<u8>>());
    }
}
