use jssec_syntax::{FunctionKind, NodeId, NodeKind, SourceUnit, Span, SyntaxTree, TextRange};
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FunctionMetrics {
    #[serde(skip)]
    pub node: NodeId,
    pub span: Span,
    pub name: String,
    /// Lines holding at least one token of the body.
    pub logical_loc: u32,
    pub parameter_count: u32,
    /// Deepest callback nesting below this function, counted from it.
    pub callback_nesting_depth: u32,
}

/// A function expression or arrow passed as a call argument.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CallbackSite {
    pub node: NodeId,
    /// 1 for an outermost callback; each enclosing callback or earlier
    /// promise-chain callback adds one.
    pub level: u32,
    /// No other callback builds on this one.
    pub leaf: bool,
}

/// Number of distinct lines covered by tokens inside `range`.
pub fn logical_loc(unit: &SourceUnit, tokens: &[TextRange], range: TextRange) -> u32 {
    let first = tokens.partition_point(|t| t.start < range.start);
    let mut count = 0u32;
    let mut last_line: Option<usize> = None;
    for tok in tokens[first..].iter().take_while(|t| t.end <= range.end) {
        let start = unit.local_line(tok.start);
        let end = unit.local_line(tok.end.saturating_sub(1).max(tok.start));
        let from = match last_line {
            Some(l) if l >= start => l + 1,
            _ => start,
        };
        if end >= from {
            count += (end - from + 1) as u32;
            last_line = Some(end);
        }
    }
    count
}

/// Display name: the declared name, the binding or property it is assigned
/// to, or `<anonymous>`.
pub fn function_name(tree: &SyntaxTree, node: NodeId) -> String {
    if let Some(name) = tree.function(node).and_then(|f| f.id).and_then(|id| tree.identifier_name(id)) {
        return name.to_string();
    }
    assigned_name(tree, node).unwrap_or_else(|| "<anonymous>".to_string())
}

/// Name of the variable, member or property a value is stored in.
pub fn assigned_name(tree: &SyntaxTree, node: NodeId) -> Option<String> {
    let mut child = node;
    for parent in tree.ancestors(node) {
        match tree.kind(parent) {
            NodeKind::ParenthesizedExpression { .. } => {
                child = parent;
                continue;
            }
            NodeKind::VariableDeclarator { id, init: Some(init) } if *init == child => {
                return tree.identifier_name(*id).map(str::to_string);
            }
            NodeKind::AssignmentExpression { left, right, .. } if *right == child => return tree.member_path(*left),
            NodeKind::Property { key, value, computed, .. } if *value == child => {
                return tree.property_key_name(*key, *computed).map(str::to_string);
            }
            NodeKind::MethodDefinition { key, computed, .. } | NodeKind::PropertyDefinition { key, computed, .. } => {
                return tree.property_key_name(*key, *computed).map(str::to_string);
            }
            _ => return None,
        }
    }
    None
}

/// The call a callback is an argument of.
pub fn callback_call(tree: &SyntaxTree, func: NodeId) -> Option<NodeId> {
    let f = tree.function(func)?;
    if !matches!(f.kind, FunctionKind::Expression | FunctionKind::Arrow) {
        return None;
    }
    let mut child = func;
    let mut parent = tree.parent(func)?;
    while matches!(tree.kind(parent), NodeKind::ParenthesizedExpression { .. }) {
        child = parent;
        parent = tree.parent(parent)?;
    }
    match tree.kind(parent) {
        NodeKind::CallExpression { arguments, .. } | NodeKind::NewExpression { arguments, .. }
            if arguments.contains(&child) =>
        {
            Some(parent)
        }
        _ => None,
    }
}

fn function_arguments(tree: &SyntaxTree, call: NodeId) -> Vec<NodeId> {
    let args = match tree.kind(call) {
        NodeKind::CallExpression { arguments, .. } | NodeKind::NewExpression { arguments, .. } => arguments,
        _ => return Vec::new(),
    };
    args.iter().map(|a| tree.skip_parens(*a)).filter(|a| tree.is_function(*a)).collect()
}

/// The callback of the previous link when `call` is `x.then(f)` and `x`
/// is itself a call chain holding callbacks.
fn previous_link(tree: &SyntaxTree, call: NodeId) -> Option<NodeId> {
    let NodeKind::CallExpression { callee, .. } = tree.kind(call) else { return None };
    let NodeKind::MemberExpression { object, .. } = tree.kind(tree.skip_parens(*callee)) else { return None };
    let mut cur = tree.skip_parens(*object);
    loop {
        let NodeKind::CallExpression { callee, .. } = tree.kind(cur) else { return None };
        if let Some(last) = function_arguments(tree, cur).last() {
            return Some(*last);
        }
        let NodeKind::MemberExpression { object, .. } = tree.kind(tree.skip_parens(*callee)) else { return None };
        cur = tree.skip_parens(*object);
    }
}

/// Every callback in the tree with its nesting level.
pub fn callback_sites(tree: &SyntaxTree) -> Vec<CallbackSite> {
    let mut callbacks: Vec<NodeId> =
        tree.descendants(tree.root()).filter(|n| callback_call(tree, *n).is_some()).collect();
    callbacks.sort_by_key(|n| tree.range(*n).start);
    let index: std::collections::HashMap<NodeId, usize> = callbacks.iter().enumerate().map(|(i, n)| (*n, i)).collect();

    let mut parents: Vec<Vec<usize>> = vec![Vec::new(); callbacks.len()];
    for (i, cb) in callbacks.iter().enumerate() {
        if let Some(outer) = tree.ancestors(*cb).find(|a| index.contains_key(a)) {
            parents[i].push(index[&outer]);
        }
        let call = callback_call(tree, *cb).expect("callback");
        if let Some(prev) = previous_link(tree, call) {
            if let Some(&p) = index.get(&prev) {
                parents[i].push(p);
            }
        }
    }
    // Parents start before their children, so one forward pass settles levels.
    let mut level = vec![1u32; callbacks.len()];
    let mut leaf = vec![true; callbacks.len()];
    for i in 0..callbacks.len() {
        for &p in &parents[i] {
            level[i] = level[i].max(level[p] + 1);
            leaf[p] = false;
        }
    }
    callbacks.iter().enumerate().map(|(i, n)| CallbackSite { node: *n, level: level[i], leaf: leaf[i] }).collect()
}

fn own_callback_level(sites: &[CallbackSite], node: NodeId) -> u32 {
    sites.iter().find(|s| s.node == node).map_or(0, |s| s.level)
}

pub fn measure_functions(unit: &SourceUnit, tree: &SyntaxTree, sites: &[CallbackSite]) -> Vec<FunctionMetrics> {
    let mut out = Vec::new();
    for node in tree.descendants(tree.root()) {
        let Some(f) = tree.function(node) else { continue };
        let range = tree.range(f.body);
        let base = own_callback_level(sites, node);
        let depth = sites
            .iter()
            .filter(|s| s.node != node && range.contains_range(tree.range(s.node)))
            .map(|s| s.level.saturating_sub(base))
            .max()
            .unwrap_or(0);
        out.push(FunctionMetrics {
            node,
            span: unit.span(tree.range(node)),
            name: function_name(tree, node),
            logical_loc: logical_loc(unit, &tree.tokens, range),
            parameter_count: f.params.len() as u32,
            callback_nesting_depth: depth,
        });
    }
    out.sort_by_key(|m| (m.span.start_byte, m.span.end_byte));
    out
}
