use std::collections::{BTreeMap, BTreeSet};

use jssec_syntax::{BindingKind, NodeId, NodeKind, ScopeTable, SourceUnit, Span, SyntaxTree};
use petgraph::algo::{condensation, toposort};
use petgraph::graph::{DiGraph, NodeIndex};
use petgraph::visit::EdgeRef;
use petgraph::Direction;

/// Graph node identity: global names are shared across units, anything
/// else is qualified by unit and binding.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProtoKey(pub String);

/// One static inheritance link found in a unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProtoEdge {
    pub child: ProtoKey,
    pub child_name: String,
    pub parent: ProtoKey,
    pub parent_name: String,
    pub path: String,
    pub span: Span,
}

/// A parent expression that could not be resolved to a name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnknownParent {
    pub path: String,
    pub span: Span,
    pub text: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UnitPrototypes {
    pub edges: Vec<ProtoEdge>,
    pub unknown: Vec<UnknownParent>,
}

fn key_for(unit: &SourceUnit, scopes: &ScopeTable, ident: NodeId, name: &str) -> ProtoKey {
    match scopes.binding_of(ident) {
        Some(b) => {
            let binding = scopes.binding(b);
            let global = binding.kind == BindingKind::ImplicitGlobal
                || (!scopes.is_module() && binding.scope == scopes.root() && binding.kind != BindingKind::Import);
            if global {
                ProtoKey(name.to_string())
            } else {
                ProtoKey(format!("{}#{}", unit.id, b.index()))
            }
        }
        None => ProtoKey(name.to_string()),
    }
}

/// Resolve `X`, `X.prototype` or `(X)` to X's identifier node.
fn constructor_ident(tree: &SyntaxTree, expr: NodeId) -> Option<NodeId> {
    let expr = tree.skip_parens(expr);
    match tree.kind(expr) {
        NodeKind::Identifier { .. } => Some(expr),
        NodeKind::MemberExpression { object, property, computed: false, .. }
            if tree.identifier_name(*property) == Some("prototype") =>
        {
            let object = tree.skip_parens(*object);
            matches!(tree.kind(object), NodeKind::Identifier { .. }).then_some(object)
        }
        _ => None,
    }
}

/// Parent designated by the right-hand side of `X.prototype = <rhs>`.
fn prototype_rhs_parent(tree: &SyntaxTree, rhs: NodeId) -> Option<NodeId> {
    let rhs = tree.skip_parens(rhs);
    match tree.kind(rhs) {
        NodeKind::CallExpression { callee, arguments, .. }
            if tree.member_path(*callee).as_deref() == Some("Object.create") =>
        {
            arguments.first().copied()
        }
        NodeKind::NewExpression { callee, .. } => Some(*callee),
        _ => None,
    }
}

pub fn collect_prototype_edges(unit: &SourceUnit, tree: &SyntaxTree, scopes: &ScopeTable) -> UnitPrototypes {
    let mut out = UnitPrototypes::default();
    let link = |out: &mut UnitPrototypes, child: NodeId, parent: NodeId, site: NodeId| {
        let span = unit.span(tree.range(site));
        let Some(child_name) = tree.identifier_name(child) else { return };
        match constructor_ident(tree, parent) {
            Some(p) => {
                let parent_name = tree.identifier_name(p).unwrap_or_default().to_string();
                out.edges.push(ProtoEdge {
                    child: key_for(unit, scopes, child, child_name),
                    child_name: child_name.to_string(),
                    parent: key_for(unit, scopes, p, &parent_name),
                    parent_name,
                    path: unit.origin_path.clone(),
                    span,
                });
            }
            None => out.unknown.push(UnknownParent {
                path: unit.origin_path.clone(),
                span,
                text: tree.text(&unit.text, parent).to_string(),
            }),
        }
    };

    for node in tree.descendants(tree.root()) {
        match tree.kind(node) {
            NodeKind::Class { id, super_class: Some(parent), .. } => {
                let child = id.or_else(|| match tree.parent(node).map(|p| tree.kind(p)) {
                    Some(NodeKind::VariableDeclarator { id, .. }) => Some(*id),
                    _ => None,
                });
                if let Some(child) = child {
                    link(&mut out, child, *parent, node);
                }
            }
            NodeKind::AssignmentExpression { left, right, .. } => {
                let left_node = tree.skip_parens(*left);
                let is_proto = matches!(
                    tree.kind(left_node),
                    NodeKind::MemberExpression { property, computed: false, .. }
                        if tree.identifier_name(*property) == Some("prototype")
                );
                if !is_proto {
                    continue;
                }
                if let (Some(child), Some(parent)) =
                    (constructor_ident(tree, left_node), prototype_rhs_parent(tree, *right))
                {
                    link(&mut out, child, parent, node);
                }
            }
            NodeKind::VariableDeclarator { id, init: Some(init) } => {
                let init = tree.skip_parens(*init);
                if let NodeKind::CallExpression { callee, arguments, .. } = tree.kind(init) {
                    let callee = tree.member_path(*callee);
                    if callee.as_deref() == Some("Object.create")
                        && matches!(tree.kind(*id), NodeKind::Identifier { .. })
                    {
                        if let Some(parent) = arguments.first() {
                            if !matches!(tree.kind(tree.skip_parens(*parent)), NodeKind::NullLiteral) {
                                link(&mut out, *id, *parent, node);
                            }
                        }
                    }
                }
            }
            NodeKind::CallExpression { callee, arguments, .. } => {
                let callee = tree.member_path(*callee);
                let is_link = matches!(callee.as_deref(), Some("Object.setPrototypeOf" | "Reflect.setPrototypeOf"))
                    || callee.as_deref().is_some_and(|c| c == "inherits" || c.ends_with(".inherits"));
                if !is_link || arguments.len() < 2 {
                    continue;
                }
                if matches!(tree.kind(tree.skip_parens(arguments[1])), NodeKind::NullLiteral) {
                    continue;
                }
                if let Some(child) = constructor_ident(tree, arguments[0]) {
                    link(&mut out, child, arguments[1], node);
                }
            }
            _ => {}
        }
    }
    out
}

/// Cross-unit inheritance graph.
#[derive(Debug, Default)]
pub struct PrototypeGraph {
    graph: DiGraph<ProtoKey, ()>,
    index: BTreeMap<ProtoKey, NodeIndex>,
    names: BTreeMap<ProtoKey, String>,
    /// First edge site per child, used to locate findings.
    sites: BTreeMap<ProtoKey, (String, Span)>,
    lengths: BTreeMap<ProtoKey, u32>,
    cycles: Vec<Vec<ProtoKey>>,
}

impl PrototypeGraph {
    /// Build from per-unit edge lists. The result does not depend on the
    /// order of `units`.
    pub fn build<'a>(units: impl IntoIterator<Item = &'a UnitPrototypes>) -> Self {
        let mut edges: Vec<&ProtoEdge> = units.into_iter().flat_map(|u| u.edges.iter()).collect();
        edges.sort_by(|a, b| {
            (&a.path, a.span.start_byte, &a.child, &a.parent).cmp(&(&b.path, b.span.start_byte, &b.child, &b.parent))
        });

        let mut g = PrototypeGraph::default();
        let mut seen = BTreeSet::new();
        let mut keys: BTreeSet<&ProtoKey> = BTreeSet::new();
        for e in &edges {
            keys.insert(&e.child);
            keys.insert(&e.parent);
        }
        for key in keys {
            let idx = g.graph.add_node(key.clone());
            g.index.insert(key.clone(), idx);
        }
        for e in edges {
            g.names.entry(e.child.clone()).or_insert_with(|| e.child_name.clone());
            g.names.entry(e.parent.clone()).or_insert_with(|| e.parent_name.clone());
            g.sites.entry(e.child.clone()).or_insert_with(|| (e.path.clone(), e.span.clone()));
            if seen.insert((e.child.clone(), e.parent.clone())) {
                g.graph.add_edge(g.index[&e.child], g.index[&e.parent], ());
            }
        }
        g.compute_lengths();
        g
    }

    /// Longest acyclic path over the condensation; a strongly connected
    /// component of `k` nodes contributes `k - 1` edges.
    fn compute_lengths(&mut self) {
        let dag = condensation(self.graph.clone(), true);
        let mut longest = vec![0u32; dag.node_count()];
        let order = toposort(&dag, None).expect("condensation is acyclic");
        for n in order.into_iter().rev() {
            let inner = dag[n].len() as u32 - 1;
            let tail =
                dag.edges_directed(n, Direction::Outgoing).map(|e| 1 + longest[e.target().index()]).max().unwrap_or(0);
            longest[n.index()] = inner + tail;
        }
        for n in dag.node_indices() {
            let members = &dag[n];
            let has_self_loop =
                members.len() == 1 && self.graph.contains_edge(self.index[&members[0]], self.index[&members[0]]);
            if members.len() > 1 || has_self_loop {
                let mut cycle = members.clone();
                cycle.sort();
                self.cycles.push(cycle);
            }
            for key in members {
                self.lengths.insert(key.clone(), longest[n.index()]);
            }
        }
        self.cycles.sort();
    }

    pub fn chain_length(&self, key: &ProtoKey) -> u32 {
        self.lengths.get(key).copied().unwrap_or(0)
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    /// `(key, display name, length)` for every node, sorted by key.
    pub fn lengths(&self) -> impl Iterator<Item = (&ProtoKey, &str, u32)> + '_ {
        self.lengths.iter().map(|(k, l)| (k, self.names.get(k).map_or("", String::as_str), *l))
    }

    /// Where a node's first inheritance link was written.
    pub fn site(&self, key: &ProtoKey) -> Option<&(String, Span)> {
        self.sites.get(key)
    }

    pub fn name(&self, key: &ProtoKey) -> &str {
        self.names.get(key).map_or("", String::as_str)
    }

    pub fn cycles(&self) -> &[Vec<ProtoKey>] {
        &self.cycles
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use jssec_syntax::{build_scope_table, parse_program};

    fn graph(src: &str) -> (PrototypeGraph, UnitPrototypes) {
        let unit = SourceUnit::js_file("t.js", src);
        let tree = parse_program(src).unwrap();
        let scopes = build_scope_table(&tree);
        let protos = collect_prototype_edges(&unit, &tree, &scopes);
        (PrototypeGraph::build([&protos]), protos)
    }

    fn key(name: &str) -> ProtoKey {
        ProtoKey(name.to_string())
    }

    #[test]
    fn extends_edge() {
        let (g, _) = graph("class A {} class B extends A {}");
        assert_eq!(g.chain_length(&key("B")), 1);
        assert_eq!(g.chain_length(&key("A")), 0);
    }

    #[test]
    fn deep_chain() {
        let src: String = std::iter::once("class C0 {}\n".to_string())
            .chain((1..9).map(|i| format!("class C{i} extends C{} {{}}\n", i - 1)))
            .collect();
        let (g, _) = graph(&src);
        assert_eq!(g.chain_length(&key("C8")), 8);
        assert_eq!(g.chain_length(&key("C7")), 7);
    }

    #[test]
    fn other_link_forms() {
        let src = "function A(){} function B(){} function C(){} function D(){}\n\
                   B.prototype = Object.create(A.prototype);\n\
                   C.prototype = new B();\n\
                   Object.setPrototypeOf(D, C);\n\
                   var e = Object.create(D); var n = Object.create(null);";
        let (g, _) = graph(src);
        assert_eq!(g.chain_length(&key("e")), 4);
        assert_eq!(g.chain_length(&key("n")), 0);
        assert_eq!(g.edge_count(), 4);
    }

    #[test]
    fn computed_parent_is_unknown() {
        let (g, p) = graph("class X extends mixin(A, B) {}");
        assert_eq!(g.edge_count(), 0);
        assert_eq!(p.unknown.len(), 1);
        assert_eq!(p.unknown[0].text, "mixin(A, B)");
    }

    #[test]
    fn cycles_terminate() {
        let (g, _) = graph("function A(){} function B(){} Object.setPrototypeOf(A, B); Object.setPrototypeOf(B, A);");
        assert_eq!(g.cycles().len(), 1);
        assert_eq!(g.chain_length(&key("A")), 1);
    }

    #[test]
    fn local_names_are_qualified() {
        let (g, _) = graph("function f(){ class A {} class B extends A {} } class A {}");
        assert_eq!(g.chain_length(&key("A")), 0);
        assert_eq!(g.lengths().filter(|(_, name, l)| *name == "B" && *l == 1).count(), 1);
    }
}
