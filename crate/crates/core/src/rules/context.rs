//! Context rules built on the intraprocedural taint pass and on local
//! guard detection.

use std::sync::LazyLock;

use jssec_syntax::ast::AssignOp;
use jssec_syntax::{BindingKind, NodeId, NodeKind, SyntaxTree};
use regex::Regex;

use super::pattern::{is_eval, string_argument};
use super::{
    call_parts, concat_root, constant_string, is_constant, is_guarded, mentioned_names, parts_of, Part, UnitContext,
};
use crate::finding::{ChainStep, Finding, Severity, StepRole};
use crate::mapping::RuleId;
use crate::patterns::{is_sensitive_name, PathMatcher, PathMode};
use crate::taint::{resolve_function, SourceKind, Taint};

static COOKIE_SETTERS: LazyLock<PathMatcher> =
    LazyLock::new(|| PathMatcher::new(PathMode::Ends, &["res.cookie", "response.cookie"]));
static MERGE_NAME: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?i)(merge|extend)$").unwrap());
static JSON_NAME: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?i)json").unwrap());
static STACK_WORD: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?i)\b(stack|trace)\b").unwrap());
static SECURE_ATTR: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?i)\bsecure\b").unwrap());
static COOKIE_DELETE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)max-age\s*=\s*0\b|expires\s*=[^;]*\b1970\b").unwrap());
static WORKER_LIKE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?i)worker|port").unwrap());

const BROWSER_ROOTS: &[&str] = &["location", "window", "document", "top", "self", "parent", "globalThis"];
const BUILTINS: &[&str] =
    &["Object", "Array", "String", "Function", "Number", "Boolean", "Date", "RegExp", "Promise", "Error"];
const PROTO_KEYS: &[&str] = &["__proto__", "constructor", "prototype"];
const ERROR_PARAM_NAMES: &[&str] = &["err", "error", "ex", "exception"];

fn sink_step(ctx: &UnitContext, node: NodeId, what: &str) -> ChainStep {
    ChainStep { role: StepRole::Sink, span: ctx.span(node), description: format!("reaches {what}") }
}

fn with_taint(ctx: &UnitContext, finding: Finding, taint: Option<&Taint>, site: NodeId, what: &str) -> Finding {
    match taint {
        Some(t) => finding.with_chain(t.chain_to(sink_step(ctx, site, what))),
        None => finding,
    }
}

/// Global browser paths such as `document.write`, ignoring a local
/// variable that happens to be called `document`.
fn browser_path(ctx: &UnitContext, expr: NodeId) -> Option<String> {
    let tree = ctx.tree();
    let path = tree.member_path(expr)?;
    let root = tree.root_identifier(expr)?;
    if BROWSER_ROOTS.contains(&tree.identifier_name(root)?) && !ctx.is_unbound(root) {
        return None;
    }
    let mut p = path.as_str();
    while let Some(rest) = p.strip_prefix("window.").or_else(|| p.strip_prefix("globalThis.")) {
        p = rest;
    }
    Some(p.to_string())
}

// ---- JSSEC-012 ----

fn reads_origin(ctx: &UnitContext, func: NodeId) -> bool {
    let tree = ctx.tree();
    let Some(f) = tree.function(func) else { return false };
    let Some(param) = f.params.first() else { return false };
    let param = match tree.kind(*param) {
        NodeKind::AssignmentPattern { left, .. } => *left,
        _ => *param,
    };
    match tree.kind(param) {
        NodeKind::ObjectPattern { properties } => properties.iter().any(|p| match tree.kind(*p) {
            NodeKind::Property { key, computed, .. } => {
                matches!(tree.property_key_name(*key, *computed), Some("origin" | "source"))
            }
            _ => false,
        }),
        NodeKind::Identifier { .. } => {
            let Some(b) = ctx.scopes().declared_by(param) else { return false };
            tree.descendants(f.body).any(|n| match tree.kind(n) {
                NodeKind::MemberExpression { object, property, computed, .. } => {
                    matches!(tree.property_key_name(*property, *computed), Some("origin" | "source"))
                        && ctx.scopes().binding_of(tree.skip_parens(*object)) == Some(b)
                }
                NodeKind::VariableDeclarator { id, init: Some(init) } => {
                    ctx.scopes().binding_of(tree.skip_parens(*init)) == Some(b)
                        && matches!(tree.kind(*id), NodeKind::ObjectPattern { .. })
                        && tree.descendants(*id).any(|k| matches!(tree.identifier_name(k), Some("origin" | "source")))
                }
                _ => false,
            })
        }
        _ => false,
    }
}

pub(super) fn cross_origin(ctx: &UnitContext, out: &mut Vec<Finding>) {
    let tree = ctx.tree();
    for node in tree.descendants(tree.root()) {
        match tree.kind(node) {
            NodeKind::CallExpression { callee, arguments, .. } => {
                let callee = tree.skip_parens(*callee);
                let receiver = match tree.kind(callee) {
                    NodeKind::MemberExpression { object, .. } => tree.callee_path(*object),
                    _ => None,
                };
                match tree.last_name(callee) {
                    Some("postMessage") if arguments.len() >= 2 && tree.string_value(arguments[1]) == Some("*") => {
                        out.push(
                            ctx.finding(
                                RuleId::CROSS_ORIGIN,
                                node,
                                "`postMessage` with target origin `*` delivers to any window",
                            )
                            .with_subcode("wildcard-target"),
                        );
                    }
                    Some("addEventListener")
                        if arguments.len() >= 2 && tree.string_value(arguments[0]) == Some("message") =>
                    {
                        if receiver.as_deref().is_some_and(|r| WORKER_LIKE.is_match(r)) {
                            continue;
                        }
                        if let Some(handler) = resolve_function(tree, ctx.scopes(), arguments[1]) {
                            if !reads_origin(ctx, handler) {
                                out.push(
                                    ctx.finding(
                                        RuleId::CROSS_ORIGIN,
                                        node,
                                        "message handler never checks `event.origin`",
                                    )
                                    .with_subcode("unchecked-origin"),
                                );
                            }
                        }
                    }
                    _ => {}
                }
            }
            NodeKind::AssignmentExpression { left, right, .. } if tree.last_name(*left) == Some("onmessage") => {
                let receiver = match tree.kind(tree.skip_parens(*left)) {
                    NodeKind::MemberExpression { object, .. } => tree.callee_path(*object),
                    _ => None,
                };
                if receiver.as_deref().is_some_and(|r| WORKER_LIKE.is_match(r)) {
                    continue;
                }
                if let Some(handler) = resolve_function(tree, ctx.scopes(), *right) {
                    if !reads_origin(ctx, handler) {
                        out.push(
                            ctx.finding(RuleId::CROSS_ORIGIN, node, "message handler never checks `event.origin`")
                                .with_subcode("unchecked-origin"),
                        );
                    }
                }
            }
            _ => {}
        }
    }
}

// ---- sinks shared by JSSEC-014, 016 and 017 ----

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum SinkKind {
    Html,
    DocumentWrite,
    Code,
    Redirect,
    Json,
}

struct Sink {
    kind: SinkKind,
    site: NodeId,
    value: NodeId,
    what: String,
}

fn html_property(tree: &SyntaxTree, left: NodeId) -> Option<&str> {
    tree.last_name(left).filter(|n| matches!(*n, "innerHTML" | "outerHTML"))
}

fn redirect_value(ctx: &UnitContext, node: NodeId) -> Option<(NodeId, String)> {
    let tree = ctx.tree();
    let m = ctx.matchers();
    match tree.kind(node) {
        NodeKind::AssignmentExpression { operator: AssignOp::Assign, left, right } => {
            let path = browser_path(ctx, *left)?;
            m.redirect_targets.matches(&path).then_some((*right, path))
        }
        NodeKind::CallExpression { callee, arguments, .. } => {
            let path = tree.callee_path(*callee)?;
            if !m.redirect_calls.matches(&path) {
                return None;
            }
            let root = tree.root_identifier(*callee)?;
            if BROWSER_ROOTS.contains(&tree.identifier_name(root)?) && !ctx.is_unbound(root) {
                return None;
            }
            arguments.last().map(|a| (*a, path))
        }
        _ => None,
    }
}

/// Outermost string assembly with a JSON-looking literal next to a
/// non-literal value.
fn manual_json(tree: &SyntaxTree, node: NodeId) -> bool {
    let outermost = match tree.kind(node) {
        NodeKind::BinaryExpression { .. } => concat_root(tree, node) == node,
        NodeKind::TemplateLiteral { .. } => {
            concat_root(tree, node) == node
                && !tree.parent(node).is_some_and(|p| matches!(tree.kind(p), NodeKind::TaggedTemplate { .. }))
        }
        _ => false,
    };
    if !outermost
        || !matches!(
            tree.kind(node),
            NodeKind::BinaryExpression { operator: jssec_syntax::ast::BinaryOp::Add, .. }
                | NodeKind::TemplateLiteral { .. }
        )
    {
        return false;
    }
    let parts = parts_of(tree, node);
    parts.iter().enumerate().any(|(i, p)| match p {
        Part::Literal(_, text) if text.contains("{\"") || text.contains("\":") => {
            let before = i > 0 && !parts[i - 1].is_literal();
            let after = parts.get(i + 1).is_some_and(|n| !n.is_literal());
            before || after
        }
        _ => false,
    })
}

fn sinks(ctx: &UnitContext) -> Vec<Sink> {
    let tree = ctx.tree();
    let mut out = Vec::new();
    for node in tree.descendants(tree.root()) {
        match tree.kind(node) {
            NodeKind::AssignmentExpression { operator: AssignOp::Assign | AssignOp::Add, left, right } => {
                if let Some(prop) = html_property(tree, *left) {
                    out.push(Sink { kind: SinkKind::Html, site: node, value: *right, what: format!("`{prop}`") });
                }
            }
            NodeKind::CallExpression { callee, arguments, .. } => {
                let callee = tree.skip_parens(*callee);
                if tree.last_name(callee) == Some("insertAdjacentHTML") && arguments.len() >= 2 {
                    out.push(Sink {
                        kind: SinkKind::Html,
                        site: node,
                        value: arguments[1],
                        what: "`insertAdjacentHTML`".into(),
                    });
                } else if let Some(p) =
                    browser_path(ctx, callee).filter(|p| p == "document.write" || p == "document.writeln")
                {
                    for a in arguments {
                        out.push(Sink { kind: SinkKind::DocumentWrite, site: node, value: *a, what: format!("`{p}`") });
                    }
                } else if is_eval(ctx, callee) {
                    if let Some(a) = arguments.first() {
                        out.push(Sink { kind: SinkKind::Code, site: node, value: *a, what: "`eval`".into() });
                    }
                } else if let Some(name) =
                    browser_path(ctx, callee).filter(|p| matches!(p.as_str(), "setTimeout" | "setInterval"))
                {
                    if let Some(a) = arguments.first().filter(|a| string_argument(ctx, **a)) {
                        out.push(Sink { kind: SinkKind::Code, site: node, value: *a, what: format!("`{name}`") });
                    }
                }
            }
            NodeKind::NewExpression { callee, arguments }
                if browser_path(ctx, *callee).as_deref() == Some("Function") =>
            {
                if let Some(a) = arguments.last() {
                    out.push(Sink { kind: SinkKind::Code, site: node, value: *a, what: "`Function`".into() });
                }
            }
            _ => {}
        }
        if let NodeKind::CallExpression { callee, arguments, .. } = tree.kind(node) {
            if browser_path(ctx, *callee).as_deref() == Some("Function") {
                if let Some(a) = arguments.last() {
                    out.push(Sink { kind: SinkKind::Code, site: node, value: *a, what: "`Function`".into() });
                }
            }
        }
        if let Some((value, path)) = redirect_value(ctx, node) {
            out.push(Sink { kind: SinkKind::Redirect, site: node, value, what: format!("redirect `{path}`") });
        }
        if manual_json(tree, node) {
            out.push(Sink { kind: SinkKind::Json, site: node, value: node, what: "a hand-built JSON string".into() });
        }
    }
    out
}

// ---- JSSEC-014 ----

pub(super) fn insecure_dom(ctx: &UnitContext, out: &mut Vec<Finding>) {
    let tree = ctx.tree();
    let mut written = Vec::new();
    for sink in sinks(ctx) {
        match sink.kind {
            SinkKind::Html => {
                if is_constant(tree, sink.value) {
                    continue;
                }
                let taint = ctx.taint().taint_of(sink.value);
                let f = match &taint {
                    Some(t) => ctx
                        .finding(
                            RuleId::INSECURE_DOM,
                            sink.site,
                            format!("user-controlled `{}` written to {}", t.source, sink.what),
                        )
                        .with_severity(Severity::Error),
                    None => ctx.finding(
                        RuleId::INSECURE_DOM,
                        sink.site,
                        format!("non-constant markup written to {}", sink.what),
                    ),
                };
                out.push(with_taint(ctx, f, taint.as_ref(), sink.site, &sink.what));
            }
            SinkKind::DocumentWrite => {
                if written.contains(&sink.site) {
                    continue;
                }
                let taint = ctx.taint().taint_of(sink.value);
                if taint.is_none() && !written.contains(&sink.site) {
                    // Report the call once; a later tainted argument upgrades it.
                    let tainted_later = call_parts(tree, sink.site)
                        .is_some_and(|(_, args)| args.iter().any(|a| ctx.taint().taint_of(*a).is_some()));
                    if tainted_later {
                        continue;
                    }
                }
                written.push(sink.site);
                let f = match &taint {
                    Some(t) => ctx
                        .finding(
                            RuleId::INSECURE_DOM,
                            sink.site,
                            format!("user-controlled `{}` written with {}", t.source, sink.what),
                        )
                        .with_severity(Severity::Error),
                    None => ctx.finding(RuleId::INSECURE_DOM, sink.site, format!("{} injects raw markup", sink.what)),
                };
                out.push(with_taint(ctx, f, taint.as_ref(), sink.site, &sink.what));
            }
            _ => {}
        }
    }
}

// ---- JSSEC-015 ----

enum UrlVerdict {
    Safe,
    Scheme(&'static str),
    ProtocolRelative,
}

fn classify_url(text: &str) -> UrlVerdict {
    let t = text.trim_start().to_ascii_lowercase();
    for scheme in ["javascript:", "data:", "vbscript:"] {
        if t.starts_with(scheme) {
            return UrlVerdict::Scheme(scheme);
        }
    }
    if t.starts_with("//") || t.starts_with("/\\") || t.starts_with("\\\\") {
        return UrlVerdict::ProtocolRelative;
    }
    UrlVerdict::Safe
}

/// A fixed prefix that pins the destination: a same-site path such as
/// `/account/` or an absolute URL up to and including the first `/` after
/// the host.
fn pinned_prefix(prefix: &str) -> bool {
    let b = prefix.as_bytes();
    if b.len() >= 2 && b[0] == b'/' && b[1] != b'/' && b[1] != b'\\' {
        return true;
    }
    let lower = prefix.to_ascii_lowercase();
    ["https://", "http://"]
        .iter()
        .find_map(|s| lower.strip_prefix(s))
        .and_then(|rest| rest.find(['/', '?', '#']))
        .is_some_and(|i| i > 0)
}

pub(super) fn unvalidated_redirect(ctx: &UnitContext, out: &mut Vec<Finding>) {
    let tree = ctx.tree();
    for sink in sinks(ctx).into_iter().filter(|s| s.kind == SinkKind::Redirect) {
        let value = tree.skip_parens(sink.value);
        let literal = constant_string(tree, value).or_else(|| {
            matches!(tree.kind(value), NodeKind::Identifier { .. })
                .then(|| ctx.initializer_of(value).and_then(|i| constant_string(tree, i)))
                .flatten()
        });
        let leading = match parts_of(tree, value).first() {
            Some(Part::Literal(_, text)) => Some(text.clone()),
            _ => None,
        };
        let verdict_text = literal.clone().or(leading.clone());
        if let Some(text) = &verdict_text {
            match classify_url(text) {
                UrlVerdict::Scheme(scheme) => {
                    out.push(
                        ctx.finding(RuleId::UNVALIDATED_REDIRECT, sink.site, format!("redirect to a `{scheme}` URL"))
                            .with_subcode("unsafe-scheme"),
                    );
                    continue;
                }
                UrlVerdict::ProtocolRelative => {
                    out.push(
                        ctx.finding(
                            RuleId::UNVALIDATED_REDIRECT,
                            sink.site,
                            format!(
                                "protocol-relative redirect target `{}` can point to another host",
                                super::shorten(text)
                            ),
                        )
                        .with_subcode("protocol-relative")
                        .with_note("`//host` URLs are not same-site, so only a single leading `/` is treated as safe"),
                    );
                    continue;
                }
                UrlVerdict::Safe => {}
            }
        }
        if literal.is_some() || leading.as_deref().is_some_and(pinned_prefix) {
            continue;
        }
        if is_guarded(tree, sink.site, value) {
            continue;
        }
        let taint = ctx.taint().taint_of(value);
        let f = ctx.finding(
            RuleId::UNVALIDATED_REDIRECT,
            sink.site,
            format!("redirect target `{}` is not validated", ctx.snippet(value)),
        );
        out.push(with_taint(ctx, f, taint.as_ref(), sink.site, &sink.what));
    }
}

// ---- JSSEC-016 ----

fn eval_parses_json(tree: &SyntaxTree, arg: NodeId) -> bool {
    let parts = parts_of(tree, arg);
    let json_fragment =
        parts.iter().any(|p| matches!(p, Part::Literal(_, t) if t.contains("{\"") || t.contains("\":")));
    let paren_wrap = parts.len() >= 3
        && matches!(parts.first(), Some(Part::Literal(_, t)) if t.trim_end().ends_with('('))
        && matches!(parts.last(), Some(Part::Literal(_, t)) if t.trim_start().starts_with(')'));
    json_fragment || paren_wrap || mentioned_names(tree, arg).iter().any(|n| JSON_NAME.is_match(n))
}

pub(super) fn json_injection(ctx: &UnitContext, out: &mut Vec<Finding>) {
    let tree = ctx.tree();
    for node in tree.descendants(tree.root()) {
        if let NodeKind::CallExpression { callee, arguments, .. } = tree.kind(node) {
            if is_eval(ctx, *callee) && arguments.first().is_some_and(|a| eval_parses_json(tree, *a)) {
                out.push(
                    ctx.finding(RuleId::JSON_INJECTION, node, "`eval` used to parse JSON; use `JSON.parse`")
                        .with_subcode("eval-json"),
                );
            }
        }
        if manual_json(tree, node) {
            let direct_eval_arg = tree
                .ancestors(node)
                .find(|a| !matches!(tree.kind(*a), NodeKind::ParenthesizedExpression { .. }))
                .is_some_and(
                    |p| matches!(tree.kind(p), NodeKind::CallExpression { callee, .. } if is_eval(ctx, *callee)),
                );
            if direct_eval_arg {
                continue;
            }
            let taint = ctx.taint().taint_of(node);
            let f = ctx
                .finding(RuleId::JSON_INJECTION, node, "JSON assembled by string concatenation; use `JSON.stringify`")
                .with_subcode("manual-json");
            out.push(with_taint(ctx, f, taint.as_ref(), node, "a hand-built JSON string"));
        }
    }
}

// ---- JSSEC-017 ----

fn literal_text(tree: &SyntaxTree, value: NodeId) -> String {
    parts_of(tree, value)
        .into_iter()
        .filter_map(|p| match p {
            Part::Literal(_, t) => Some(t),
            Part::Value => None,
        })
        .collect()
}

fn flag_set(tree: &SyntaxTree, obj: NodeId, name: &str) -> bool {
    let NodeKind::ObjectExpression { properties } = tree.kind(obj) else { return true };
    properties.iter().any(|p| match tree.kind(*p) {
        NodeKind::Property { key, value, computed, .. } => {
            tree.property_key_name(*key, *computed).is_some_and(|k| k.eq_ignore_ascii_case(name))
                && !matches!(tree.kind(tree.skip_parens(*value)), NodeKind::BooleanLiteral { value: false })
        }
        NodeKind::SpreadElement { .. } => true,
        _ => false,
    })
}

pub(super) fn unprotected_cookies(ctx: &UnitContext, out: &mut Vec<Finding>) {
    let tree = ctx.tree();
    for node in tree.descendants(tree.root()) {
        match tree.kind(node) {
            NodeKind::AssignmentExpression { operator: AssignOp::Assign, left, right } => {
                if browser_path(ctx, *left).as_deref() != Some("document.cookie") {
                    continue;
                }
                let mut text = literal_text(tree, *right);
                if let Some(init) = ctx.initializer_of(*right) {
                    text.push_str(&literal_text(tree, init));
                }
                if SECURE_ATTR.is_match(&text) || COOKIE_DELETE.is_match(&text) {
                    continue;
                }
                out.push(
                    ctx.finding(RuleId::UNPROTECTED_COOKIES, node, "cookie set without the `Secure` attribute")
                        .with_subcode("missing-secure"),
                );
            }
            NodeKind::CallExpression { callee, arguments, .. } => {
                let Some(path) = tree.callee_path(*callee) else { continue };
                if !COOKIE_SETTERS.matches(&path) || arguments.len() < 2 {
                    continue;
                }
                let missing: Vec<&str> = match arguments.get(2).map(|a| tree.skip_parens(*a)) {
                    None => vec!["secure", "httpOnly"],
                    Some(opts) if matches!(tree.kind(opts), NodeKind::ObjectExpression { .. }) => {
                        ["secure", "httpOnly"].into_iter().filter(|f| !flag_set(tree, opts, f)).collect()
                    }
                    Some(_) => continue,
                };
                if !missing.is_empty() {
                    let list = missing.iter().map(|m| format!("`{m}`")).collect::<Vec<_>>().join(" and ");
                    out.push(
                        ctx.finding(RuleId::UNPROTECTED_COOKIES, node, format!("cookie options lack {list}"))
                            .with_subcode("cookie-options"),
                    );
                }
            }
            _ => {}
        }
    }
    for sink in sinks(ctx) {
        let Some(taint) = ctx.taint().taint_of(sink.value).filter(Taint::is_cookie) else { continue };
        let f = ctx
            .finding(
                RuleId::UNPROTECTED_COOKIES,
                sink.site,
                format!("cookie used without validation: `document.cookie` reaches {}", sink.what),
            )
            .with_subcode("unvalidated-read")
            .with_note("validation is recognized by sanitizer names only");
        out.push(with_taint(ctx, f, Some(&taint), sink.site, &sink.what));
    }
}

// ---- JSSEC-019 ----

/// Property names along a member chain, root first; `None` for computed
/// non-literal keys.
fn member_names(tree: &SyntaxTree, node: NodeId) -> Vec<Option<String>> {
    let node = tree.skip_parens(node);
    match tree.kind(node) {
        NodeKind::MemberExpression { object, property, computed, .. } => {
            let mut names = member_names(tree, *object);
            names.push(tree.property_key_name(*property, *computed).map(str::to_string));
            names
        }
        NodeKind::Identifier { name } => vec![Some(name.clone())],
        _ => vec![None],
    }
}

fn builtin_prototype(names: &[Option<String>]) -> Option<String> {
    match names {
        [Some(b), Some(p), ..] if BUILTINS.contains(&b.as_str()) && p == "prototype" => Some(format!("{b}.prototype")),
        _ => None,
    }
}

fn prototype_write(tree: &SyntaxTree, target: NodeId) -> Option<String> {
    let names = member_names(tree, target);
    if names.iter().any(|n| n.as_deref() == Some("__proto__")) {
        return Some("write through `__proto__`".into());
    }
    if names.len() >= 3 {
        if let Some(b) = builtin_prototype(&names) {
            return Some(format!("built-in `{b}` modified"));
        }
    }
    if names.windows(2).any(|w| w[0].as_deref() == Some("constructor") && w[1].as_deref() == Some("prototype")) {
        return Some("write through `constructor.prototype`".into());
    }
    None
}

fn is_null_prototype(ctx: &UnitContext, expr: NodeId) -> bool {
    let tree = ctx.tree();
    let Some(root) = tree.root_identifier(expr) else { return false };
    ctx.initializer_of(root).is_some_and(|init| match tree.kind(tree.skip_parens(init)) {
        NodeKind::CallExpression { callee, arguments, .. } => {
            tree.member_path(*callee).as_deref() == Some("Object.create")
                && arguments.first().is_some_and(|a| matches!(tree.kind(tree.skip_parens(*a)), NodeKind::NullLiteral))
        }
        _ => false,
    })
}

fn freezes_object_prototype(tree: &SyntaxTree) -> bool {
    tree.descendants(tree.root()).any(|n| match tree.kind(n) {
        NodeKind::CallExpression { callee, arguments, .. } => {
            tree.member_path(*callee).as_deref() == Some("Object.freeze")
                && arguments.first().and_then(|a| tree.member_path(*a)).as_deref() == Some("Object.prototype")
        }
        _ => false,
    })
}

fn is_json_derived(ctx: &UnitContext, expr: NodeId, hops: u32) -> bool {
    let tree = ctx.tree();
    let expr = tree.skip_parens(expr);
    match tree.kind(expr) {
        NodeKind::CallExpression { callee, arguments, .. }
            if tree.member_path(*callee).as_deref() == Some("JSON.parse") =>
        {
            match arguments.first() {
                Some(a) => match constant_string(tree, *a) {
                    Some(text) => PROTO_KEYS.iter().any(|k| text.contains(k)),
                    None => true,
                },
                None => false,
            }
        }
        NodeKind::Identifier { .. } if hops > 0 => {
            ctx.initializer_of(expr).is_some_and(|i| is_json_derived(ctx, i, hops - 1))
        }
        _ => false,
    }
}

/// A `for (k in src)` loop that copies keys into another object with no
/// check for `__proto__`, `constructor` or `prototype`.
fn is_unfiltered_merge(ctx: &UnitContext, for_in: NodeId) -> bool {
    let tree = ctx.tree();
    let NodeKind::ForInStatement { left, body, .. } = tree.kind(for_in) else { return false };
    let key_ident = match tree.kind(*left) {
        NodeKind::VariableDeclaration { declarations, .. } => declarations.first().and_then(|d| match tree.kind(*d) {
            NodeKind::VariableDeclarator { id, .. } => Some(*id),
            _ => None,
        }),
        NodeKind::Identifier { .. } => Some(*left),
        _ => None,
    };
    let Some(key_binding) = key_ident.and_then(|k| ctx.scopes().declared_by(k).or_else(|| ctx.scopes().binding_of(k)))
    else {
        return false;
    };
    let checks_keys = tree
        .descendants(*body)
        .any(|n| matches!(tree.kind(n), NodeKind::StringLiteral { value } if PROTO_KEYS.contains(&value.as_str())));
    if checks_keys {
        return false;
    }
    tree.descendants(*body).any(|n| match tree.kind(n) {
        NodeKind::AssignmentExpression { left, .. } => match tree.kind(tree.skip_parens(*left)) {
            NodeKind::MemberExpression { object, property, computed: true, .. } => {
                ctx.scopes().binding_of(tree.skip_parens(*property)) == Some(key_binding)
                    && !is_null_prototype(ctx, *object)
            }
            _ => false,
        },
        _ => false,
    })
}

fn merges_param(ctx: &UnitContext, func: NodeId, index: usize) -> bool {
    let tree = ctx.tree();
    let Some(f) = tree.function(func) else { return false };
    let Some(param) = f.params.get(index) else { return false };
    let Some(b) = ctx.scopes().declared_by(*param) else { return false };
    tree.descendants(f.body).any(|n| match tree.kind(n) {
        NodeKind::ForInStatement { right, .. } => {
            ctx.scopes().binding_of(tree.skip_parens(*right)) == Some(b) && is_unfiltered_merge(ctx, n)
        }
        _ => false,
    })
}

pub(super) fn prototype_pollution(ctx: &UnitContext, out: &mut Vec<Finding>) {
    let tree = ctx.tree();
    let frozen = freezes_object_prototype(tree);
    for node in tree.descendants(tree.root()) {
        match tree.kind(node) {
            NodeKind::AssignmentExpression { left, .. } => {
                if let Some(msg) = prototype_write(tree, *left) {
                    out.push(ctx.finding(RuleId::PROTOTYPE_POLLUTION, node, msg).with_subcode("prototype-write"));
                    continue;
                }
                if frozen {
                    continue;
                }
                let mut keys = Vec::new();
                let mut cur = tree.skip_parens(*left);
                while let NodeKind::MemberExpression { object, property, computed: true, .. } = tree.kind(cur) {
                    keys.push(*property);
                    cur = tree.skip_parens(*object);
                }
                if keys.len() < 2 || is_null_prototype(ctx, cur) {
                    continue;
                }
                if let Some(taint) = keys.iter().rev().find_map(|k| ctx.taint().taint_of(*k)) {
                    let f = ctx
                        .finding(
                            RuleId::PROTOTYPE_POLLUTION,
                            node,
                            format!("nested write `{}` uses keys from `{}`", ctx.snippet(*left), taint.source),
                        )
                        .with_subcode("tainted-keys");
                    out.push(with_taint(ctx, f, Some(&taint), node, "a nested property write"));
                }
            }
            NodeKind::CallExpression { callee, arguments, .. } => {
                let path = tree.member_path(*callee);
                if matches!(
                    path.as_deref(),
                    Some(
                        "Object.defineProperty"
                            | "Object.defineProperties"
                            | "Reflect.defineProperty"
                            | "Object.assign"
                    )
                ) {
                    if let Some(b) = arguments.first().and_then(|a| builtin_prototype(&member_names(tree, *a))) {
                        out.push(
                            ctx.finding(RuleId::PROTOTYPE_POLLUTION, node, format!("built-in `{b}` modified"))
                                .with_subcode("prototype-write"),
                        );
                        continue;
                    }
                }
                if frozen {
                    continue;
                }
                let Some(i) = arguments.iter().position(|a| is_json_derived(ctx, *a, 1)) else { continue };
                let merges = match resolve_function(tree, ctx.scopes(), *callee) {
                    Some(f) => merges_param(ctx, f, i),
                    None => {
                        tree.last_name(*callee).is_some_and(|n| MERGE_NAME.is_match(n))
                            && path.as_deref() != Some("Object.assign")
                    }
                };
                if merges {
                    out.push(
                        ctx.finding(
                            RuleId::PROTOTYPE_POLLUTION,
                            node,
                            "parsed JSON merged into an object without filtering `__proto__` keys",
                        )
                        .with_subcode("json-merge"),
                    );
                }
            }
            NodeKind::ForInStatement { right, .. }
                if !frozen && is_json_derived(ctx, *right, 1) && is_unfiltered_merge(ctx, node) =>
            {
                out.push(
                    ctx.finding(
                        RuleId::PROTOTYPE_POLLUTION,
                        node,
                        "parsed JSON keys copied without filtering `__proto__`",
                    )
                    .with_subcode("json-merge"),
                );
            }
            _ => {}
        }
    }
}

// ---- JSSEC-022 ----

fn sensitive_argument(ctx: &UnitContext, expr: NodeId, method: &str) -> Option<String> {
    let tree = ctx.tree();
    let m = ctx.matchers();
    let sensitive = |n: &str| is_sensitive_name(n, &m.sensitive_names, &m.sensitive_allowlist);
    let expr = tree.skip_parens(expr);
    match tree.kind(expr) {
        NodeKind::Identifier { name } => sensitive(name).then(|| name.clone()),
        NodeKind::MemberExpression { .. } => {
            if browser_path(ctx, expr).as_deref() == Some("document.cookie") {
                return Some("document.cookie".into());
            }
            let last = tree.last_name(expr)?;
            if sensitive(last) || (last == "stack" && method != "error") {
                return Some(tree.member_path(expr).unwrap_or_else(|| last.to_string()));
            }
            None
        }
        NodeKind::BinaryExpression { left, right, .. } => {
            sensitive_argument(ctx, *left, method).or_else(|| sensitive_argument(ctx, *right, method))
        }
        NodeKind::TemplateLiteral { expressions, .. } => {
            expressions.iter().find_map(|e| sensitive_argument(ctx, *e, method))
        }
        NodeKind::ArrayExpression { elements } => {
            elements.iter().flatten().find_map(|e| sensitive_argument(ctx, *e, method))
        }
        NodeKind::ObjectExpression { properties } => properties.iter().find_map(|p| match tree.kind(*p) {
            NodeKind::Property { key, value, computed, .. } => {
                let key_name = tree.property_key_name(*key, *computed);
                match key_name {
                    Some(k) if sensitive(k) && !is_constant(tree, *value) => Some(k.to_string()),
                    _ => sensitive_argument(ctx, *value, method),
                }
            }
            _ => None,
        }),
        _ => None,
    }
}

pub(super) fn logging_sensitive(ctx: &UnitContext, out: &mut Vec<Finding>) {
    let tree = ctx.tree();
    for node in tree.descendants(tree.root()) {
        let NodeKind::CallExpression { callee, arguments, .. } = tree.kind(node) else { continue };
        let Some(path) = tree.member_path(*callee) else { continue };
        if !ctx.matchers().logger_calls.matches(&path) {
            continue;
        }
        let root = tree.root_identifier(*callee).and_then(|r| tree.identifier_name(r));
        if root == Some("console") && !ctx.root_is_global(*callee) {
            continue;
        }
        let method = tree.last_name(*callee).unwrap_or_default();
        if let Some(what) = arguments.iter().find_map(|a| sensitive_argument(ctx, *a, method)) {
            out.push(ctx.finding(
                RuleId::LOGGING_SENSITIVE,
                node,
                format!("sensitive value `{what}` written to a log"),
            ));
        }
    }
}

// ---- JSSEC-023 ----

const TWO_PATH_SINKS: &[&str] = &["rename", "renameSync", "copyFile", "copyFileSync", "mv"];

pub(super) fn insecure_file_handling(ctx: &UnitContext, out: &mut Vec<Finding>) {
    let tree = ctx.tree();
    for node in tree.descendants(tree.root()) {
        let NodeKind::CallExpression { callee, arguments, .. } = tree.kind(node) else { continue };
        let Some(name) = tree.last_name(*callee) else { continue };
        if !ctx.matchers().fs_sinks.matches(name) {
            continue;
        }
        let root = tree.root_identifier(*callee).and_then(|r| tree.identifier_name(r));
        if matches!(root, Some("window" | "document")) {
            continue;
        }
        let n = if TWO_PATH_SINKS.contains(&name) { 2 } else { 1 };
        for arg in arguments.iter().take(n) {
            let Some(taint) = ctx.taint().taint_of(*arg) else { continue };
            let f = match taint.kind {
                SourceKind::Request => ctx.finding(
                    RuleId::INSECURE_FILE_HANDLING,
                    node,
                    format!("file path for `{name}` built from request data `{}`", taint.source),
                ),
                SourceKind::Upload if !is_guarded(tree, node, *arg) => ctx
                    .finding(
                        RuleId::INSECURE_FILE_HANDLING,
                        node,
                        format!("client-supplied upload name `{}` used as a path for `{name}`", taint.source),
                    )
                    .with_subcode("upload-name"),
                _ => continue,
            };
            out.push(with_taint(ctx, f, Some(&taint), node, &format!("`{name}`")));
            break;
        }
    }
}

// ---- JSSEC-024 ----

fn is_error_binding(ctx: &UnitContext, ident: NodeId) -> bool {
    let Some(b) = ctx.scopes().binding_of(ident) else { return false };
    let binding = ctx.scopes().binding(b);
    binding.kind == BindingKind::CatchParam
        || (binding.kind == BindingKind::Param && ERROR_PARAM_NAMES.contains(&binding.name.as_str()))
}

fn error_value(ctx: &UnitContext, expr: NodeId) -> Option<String> {
    let tree = ctx.tree();
    let expr = tree.skip_parens(expr);
    match tree.kind(expr) {
        NodeKind::Identifier { name } => is_error_binding(ctx, expr).then(|| name.clone()),
        NodeKind::MemberExpression { object, .. } => {
            let object = tree.skip_parens(*object);
            let last = tree.last_name(expr)?;
            (matches!(last, "stack" | "message") && is_error_binding(ctx, object)).then(|| ctx.snippet(expr))
        }
        NodeKind::BinaryExpression { left, right, .. } => error_value(ctx, *left).or_else(|| error_value(ctx, *right)),
        NodeKind::TemplateLiteral { expressions, .. } => expressions.iter().find_map(|e| error_value(ctx, *e)),
        NodeKind::ArrayExpression { elements } => elements.iter().flatten().find_map(|e| error_value(ctx, *e)),
        NodeKind::ObjectExpression { properties } => properties.iter().find_map(|p| match tree.kind(*p) {
            NodeKind::Property { value, .. } => error_value(ctx, *value),
            _ => None,
        }),
        _ => None,
    }
}

pub(super) fn error_disclosure(ctx: &UnitContext, out: &mut Vec<Finding>) {
    let tree = ctx.tree();
    for node in tree.descendants(tree.root()) {
        let NodeKind::CallExpression { callee, arguments, .. } = tree.kind(node) else { continue };
        let Some(path) = tree.callee_path(*callee) else { continue };
        if !ctx.matchers().response_sinks.matches(&path) {
            continue;
        }
        let sink = path.rsplit('.').next().unwrap_or(&path).to_string();
        if let Some(what) = arguments.iter().find_map(|a| error_value(ctx, *a)) {
            out.push(ctx.finding(
                RuleId::ERROR_DISCLOSURE,
                node,
                format!("error details `{what}` sent to the client via `{sink}`"),
            ));
            continue;
        }
        let mentions_trace = arguments.iter().any(|a| {
            let parts = parts_of(tree, *a);
            parts.iter().any(|p| !p.is_literal())
                && parts.iter().any(|p| matches!(p, Part::Literal(_, t) if STACK_WORD.is_match(t)))
        });
        if mentions_trace {
            out.push(
                ctx.finding(
                    RuleId::ERROR_DISCLOSURE,
                    node,
                    format!("stack or trace details sent to the client via `{sink}`"),
                )
                .with_subcode("trace-text"),
            );
        }
    }
}
