//! Lexical scope resolution.
//!
//! Two passes over a [`SyntaxTree`]: the first creates scopes and declares
//! every binding (with `var` and function hoisting), the second classifies
//! each identifier occurrence as a reference and resolves it. Unresolved
//! writes become implicit globals; unresolved reads of the same name then
//! resolve to them.

use std::collections::HashMap;

use crate::ast::{AssignOp, FunctionKind, NodeId, NodeKind, SyntaxTree, VarKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ScopeId(u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BindingId(u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReferenceId(u32);

impl ScopeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl BindingId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl ReferenceId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ScopeKind {
    Global,
    Module,
    Function,
    Block,
    Catch,
    Class,
}

impl ScopeKind {
    fn is_var_scope(self) -> bool {
        matches!(self, ScopeKind::Global | ScopeKind::Module | ScopeKind::Function)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BindingKind {
    Var,
    Let,
    Const,
    Function,
    /// Name of a named function expression, visible only inside it.
    FunctionName,
    Class,
    Param,
    CatchParam,
    Import,
    /// Assigned somewhere without ever being declared.
    ImplicitGlobal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RefKind {
    Read,
    Write,
    ReadWrite,
}

impl RefKind {
    pub fn is_write(self) -> bool {
        matches!(self, RefKind::Write | RefKind::ReadWrite)
    }

    pub fn is_read(self) -> bool {
        matches!(self, RefKind::Read | RefKind::ReadWrite)
    }
}

#[derive(Clone, Debug)]
pub struct Scope {
    pub kind: ScopeKind,
    /// Node that introduces the scope.
    pub node: NodeId,
    pub parent: Option<ScopeId>,
    names: HashMap<String, BindingId>,
}

impl Scope {
    pub fn lookup_local(&self, name: &str) -> Option<BindingId> {
        self.names.get(name).copied()
    }
}

#[derive(Clone, Debug)]
pub struct Binding {
    pub name: String,
    pub kind: BindingKind,
    pub scope: ScopeId,
    /// Declaring identifier nodes; empty for implicit globals.
    pub declarations: Vec<NodeId>,
    /// The declaration node owning the identifier (declarator, function,
    /// class, catch clause, import specifier or parameter list owner).
    pub declaring_node: Option<NodeId>,
    pub references: Vec<ReferenceId>,
}

#[derive(Clone, Debug)]
pub struct Reference {
    pub node: NodeId,
    pub name: String,
    pub kind: RefKind,
    pub scope: ScopeId,
    pub binding: Option<BindingId>,
    /// Inside a `with` body, where the name may denote an object property.
    pub unreliable: bool,
}

#[derive(Clone, Debug)]
pub struct ScopeTable {
    scopes: Vec<Scope>,
    bindings: Vec<Binding>,
    references: Vec<Reference>,
    node_scope: HashMap<NodeId, ScopeId>,
    decl_binding: HashMap<NodeId, BindingId>,
    ident_reference: HashMap<NodeId, ReferenceId>,
    is_module: bool,
}

impl ScopeTable {
    pub fn root(&self) -> ScopeId {
        ScopeId(0)
    }

    pub fn is_module(&self) -> bool {
        self.is_module
    }

    pub fn scopes(&self) -> &[Scope] {
        &self.scopes
    }

    pub fn scope(&self, id: ScopeId) -> &Scope {
        &self.scopes[id.index()]
    }

    pub fn bindings(&self) -> &[Binding] {
        &self.bindings
    }

    pub fn binding(&self, id: BindingId) -> &Binding {
        &self.bindings[id.index()]
    }

    pub fn references(&self) -> &[Reference] {
        &self.references
    }

    pub fn reference(&self, id: ReferenceId) -> &Reference {
        &self.references[id.index()]
    }

    /// Scope introduced by `node`, if it introduces one.
    pub fn scope_of_node(&self, node: NodeId) -> Option<ScopeId> {
        self.node_scope.get(&node).copied()
    }

    /// Binding declared by an identifier node.
    pub fn declared_by(&self, ident: NodeId) -> Option<BindingId> {
        self.decl_binding.get(&ident).copied()
    }

    /// Reference recorded for an identifier node.
    pub fn reference_at(&self, ident: NodeId) -> Option<&Reference> {
        self.ident_reference.get(&ident).map(|r| &self.references[r.index()])
    }

    /// Binding an identifier node refers to or declares.
    pub fn binding_of(&self, ident: NodeId) -> Option<BindingId> {
        self.declared_by(ident).or_else(|| self.reference_at(ident).and_then(|r| r.binding))
    }

    pub fn lookup(&self, mut scope: ScopeId, name: &str) -> Option<BindingId> {
        loop {
            let s = &self.scopes[scope.index()];
            if let Some(b) = s.lookup_local(name) {
                return Some(b);
            }
            scope = s.parent?;
        }
    }

    /// Innermost scope containing `node`.
    pub fn enclosing_scope(&self, tree: &SyntaxTree, node: NodeId) -> ScopeId {
        std::iter::once(node).chain(tree.ancestors(node)).find_map(|n| self.scope_of_node(n)).unwrap_or(self.root())
    }

    pub fn read_count(&self, binding: BindingId) -> usize {
        self.binding(binding).references.iter().filter(|r| self.reference(**r).kind.is_read()).count()
    }

    pub fn write_count(&self, binding: BindingId) -> usize {
        self.binding(binding).references.iter().filter(|r| self.reference(**r).kind.is_write()).count()
    }

    pub fn implicit_globals(&self) -> impl Iterator<Item = &Binding> + '_ {
        self.bindings.iter().filter(|b| b.kind == BindingKind::ImplicitGlobal)
    }

    /// Names that live in the global object: top-level declarations of a
    /// script plus implicit globals.
    pub fn globals(&self) -> impl Iterator<Item = &Binding> + '_ {
        let script = !self.is_module;
        self.bindings.iter().filter(move |b| {
            b.kind == BindingKind::ImplicitGlobal || (script && b.scope == ScopeId(0) && b.kind != BindingKind::Import)
        })
    }

    pub fn global_count(&self) -> usize {
        self.globals().count()
    }

    /// Reads that resolved to nothing (browser or runtime globals, typos).
    pub fn unresolved_reads(&self) -> impl Iterator<Item = &Reference> + '_ {
        self.references.iter().filter(|r| r.binding.is_none())
    }
}

/// Identifiers bound by a declaration pattern.
pub fn pattern_identifiers(tree: &SyntaxTree, pattern: NodeId, out: &mut Vec<NodeId>) {
    match tree.kind(pattern) {
        NodeKind::Identifier { .. } => out.push(pattern),
        NodeKind::ObjectPattern { properties } => {
            for p in properties {
                match tree.kind(*p) {
                    NodeKind::Property { value, .. } => pattern_identifiers(tree, *value, out),
                    _ => pattern_identifiers(tree, *p, out),
                }
            }
        }
        NodeKind::ArrayPattern { elements } => {
            for e in elements.iter().flatten() {
                pattern_identifiers(tree, *e, out);
            }
        }
        NodeKind::RestElement { argument } => pattern_identifiers(tree, *argument, out),
        NodeKind::AssignmentPattern { left, .. } => pattern_identifiers(tree, *left, out),
        NodeKind::ParenthesizedExpression { expression } => pattern_identifiers(tree, *expression, out),
        _ => {}
    }
}

struct Builder<'t> {
    tree: &'t SyntaxTree,
    table: ScopeTable,
}

impl<'t> Builder<'t> {
    fn nearest_scope(&self, node: NodeId) -> ScopeId {
        self.table.enclosing_scope(self.tree, node)
    }

    /// Nearest scope strictly above `node`.
    fn outer_scope(&self, node: NodeId) -> ScopeId {
        match self.tree.parent(node) {
            Some(p) => self.nearest_scope(p),
            None => self.table.root(),
        }
    }

    fn var_scope(&self, mut scope: ScopeId) -> ScopeId {
        loop {
            let s = &self.table.scopes[scope.index()];
            if s.kind.is_var_scope() {
                return scope;
            }
            match s.parent {
                Some(p) => scope = p,
                None => return scope,
            }
        }
    }

    fn declare(&mut self, scope: ScopeId, ident: NodeId, kind: BindingKind, declaring_node: NodeId) {
        let Some(name) = self.tree.identifier_name(ident) else { return };
        let id = match self.table.scopes[scope.index()].names.get(name) {
            Some(existing) => *existing,
            None => {
                let id = BindingId(self.table.bindings.len() as u32);
                self.table.bindings.push(Binding {
                    name: name.to_string(),
                    kind,
                    scope,
                    declarations: Vec::new(),
                    declaring_node: Some(declaring_node),
                    references: Vec::new(),
                });
                self.table.scopes[scope.index()].names.insert(name.to_string(), id);
                id
            }
        };
        let binding = &mut self.table.bindings[id.index()];
        // a function declaration wins over a plain `var` of the same name
        if kind == BindingKind::Function && binding.kind == BindingKind::Var {
            binding.kind = kind;
            binding.declaring_node = Some(declaring_node);
        }
        binding.declarations.push(ident);
        self.table.decl_binding.insert(ident, id);
    }

    fn declare_pattern(&mut self, scope: ScopeId, pattern: NodeId, kind: BindingKind, declaring_node: NodeId) {
        let mut idents = Vec::new();
        pattern_identifiers(self.tree, pattern, &mut idents);
        for ident in idents {
            self.declare(scope, ident, kind, declaring_node);
        }
    }

    fn creates_scope(&self, node: NodeId) -> Option<ScopeKind> {
        let tree = self.tree;
        match tree.kind(node) {
            NodeKind::Program { .. } => Some(if tree.is_module { ScopeKind::Module } else { ScopeKind::Global }),
            NodeKind::Function(_) | NodeKind::StaticBlock { .. } => Some(ScopeKind::Function),
            NodeKind::Class { .. } => Some(ScopeKind::Class),
            NodeKind::CatchClause { .. } => Some(ScopeKind::Catch),
            NodeKind::ForStatement { .. }
            | NodeKind::ForInStatement { .. }
            | NodeKind::ForOfStatement { .. }
            | NodeKind::SwitchStatement { .. } => Some(ScopeKind::Block),
            NodeKind::BlockStatement { .. } => {
                let is_function_body = tree.parent(node).and_then(|p| tree.function(p)).is_some_and(|f| f.body == node);
                (!is_function_body).then_some(ScopeKind::Block)
            }
            _ => None,
        }
    }

    fn create_scopes(&mut self) {
        let root = self.tree.root();
        for node in self.tree.descendants(root) {
            let Some(kind) = self.creates_scope(node) else { continue };
            let parent = if node == root { None } else { Some(self.outer_scope(node)) };
            let id = ScopeId(self.table.scopes.len() as u32);
            self.table.scopes.push(Scope { kind, node, parent, names: HashMap::new() });
            self.table.node_scope.insert(node, id);
        }
    }

    fn declare_all(&mut self) {
        let tree = self.tree;
        for node in tree.descendants(tree.root()) {
            match tree.kind(node) {
                NodeKind::VariableDeclaration { kind, declarations } => {
                    let here = self.nearest_scope(node);
                    let (scope, binding_kind) = match kind {
                        VarKind::Var => (self.var_scope(here), BindingKind::Var),
                        VarKind::Let => (here, BindingKind::Let),
                        VarKind::Const => (here, BindingKind::Const),
                    };
                    for d in declarations {
                        if let NodeKind::VariableDeclarator { id, .. } = tree.kind(*d) {
                            self.declare_pattern(scope, *id, binding_kind, *d);
                        }
                    }
                }
                NodeKind::Function(f) => {
                    let own = self.table.node_scope[&node];
                    if let Some(id) = f.id {
                        match f.kind {
                            FunctionKind::Declaration => {
                                let scope = self.var_scope(self.outer_scope(node));
                                self.declare(scope, id, BindingKind::Function, node);
                            }
                            _ => self.declare(own, id, BindingKind::FunctionName, node),
                        }
                    }
                    for p in &f.params {
                        self.declare_pattern(own, *p, BindingKind::Param, node);
                    }
                }
                NodeKind::Class { id: Some(id), is_declaration, .. } => {
                    let scope = if *is_declaration { self.outer_scope(node) } else { self.table.node_scope[&node] };
                    self.declare(scope, *id, BindingKind::Class, node);
                }
                NodeKind::CatchClause { param: Some(param), .. } => {
                    let scope = self.table.node_scope[&node];
                    self.declare_pattern(scope, *param, BindingKind::CatchParam, node);
                }
                NodeKind::ImportSpecifier { local, .. }
                | NodeKind::ImportDefaultSpecifier { local }
                | NodeKind::ImportNamespaceSpecifier { local } => {
                    let root = self.table.root();
                    self.declare(root, *local, BindingKind::Import, node);
                }
                _ => {}
            }
        }
    }

    /// Whether an identifier occurrence is a variable reference at all.
    fn is_reference(&self, ident: NodeId) -> bool {
        if self.table.decl_binding.contains_key(&ident) {
            return false;
        }
        let tree = self.tree;
        let Some(parent) = tree.parent(ident) else { return true };
        match tree.kind(parent) {
            NodeKind::MemberExpression { property, computed, .. } => *computed || *property != ident,
            NodeKind::Property { key, value, computed, .. } => *computed || *key != ident || *value == ident,
            NodeKind::MethodDefinition { key, computed, .. } | NodeKind::PropertyDefinition { key, computed, .. } => {
                *computed || *key != ident
            }
            NodeKind::LabeledStatement { .. }
            | NodeKind::BreakStatement { .. }
            | NodeKind::ContinueStatement { .. }
            | NodeKind::MetaProperty { .. }
            | NodeKind::ExportAllDeclaration { .. }
            | NodeKind::ImportSpecifier { .. } => false,
            NodeKind::ExportSpecifier { local, .. } => {
                let reexport = tree
                    .parent(parent)
                    .is_some_and(|d| matches!(tree.kind(d), NodeKind::ExportNamedDeclaration { source: Some(_), .. }));
                *local == ident && !reexport
            }
            _ => true,
        }
    }

    fn reference_kind(&self, ident: NodeId) -> RefKind {
        let tree = self.tree;
        let mut cur = ident;
        while let Some(p) = tree.parent(cur) {
            match tree.kind(p) {
                NodeKind::AssignmentExpression { left, operator, .. } if *left == cur => {
                    return if *operator == AssignOp::Assign { RefKind::Write } else { RefKind::ReadWrite };
                }
                NodeKind::UpdateExpression { .. } => return RefKind::ReadWrite,
                NodeKind::ForInStatement { left, .. } | NodeKind::ForOfStatement { left, .. } if *left == cur => {
                    return RefKind::Write;
                }
                NodeKind::ParenthesizedExpression { .. }
                | NodeKind::ObjectPattern { .. }
                | NodeKind::ArrayPattern { .. }
                | NodeKind::RestElement { .. } => cur = p,
                NodeKind::Property { value, .. } if *value == cur => {
                    let in_pattern =
                        tree.parent(p).is_some_and(|pp| matches!(tree.kind(pp), NodeKind::ObjectPattern { .. }));
                    if !in_pattern {
                        return RefKind::Read;
                    }
                    cur = p;
                }
                NodeKind::AssignmentPattern { left, .. } if *left == cur => cur = p,
                _ => return RefKind::Read,
            }
        }
        RefKind::Read
    }

    fn in_with_body(&self, node: NodeId) -> bool {
        let tree = self.tree;
        let mut cur = node;
        while let Some(p) = tree.parent(cur) {
            if let NodeKind::WithStatement { body, .. } = tree.kind(p) {
                if *body == cur {
                    return true;
                }
            }
            cur = p;
        }
        false
    }

    fn resolve_all(&mut self) {
        let tree = self.tree;
        let mut unresolved = Vec::new();
        for node in tree.descendants(tree.root()) {
            let NodeKind::Identifier { name } = tree.kind(node) else { continue };
            if !self.is_reference(node) {
                continue;
            }
            let scope = self.nearest_scope(node);
            let binding = self.table.lookup(scope, name);
            let id = ReferenceId(self.table.references.len() as u32);
            self.table.references.push(Reference {
                node,
                name: name.clone(),
                kind: self.reference_kind(node),
                scope,
                binding,
                unreliable: self.in_with_body(node),
            });
            self.table.ident_reference.insert(node, id);
            match binding {
                Some(b) => self.table.bindings[b.index()].references.push(id),
                None => unresolved.push(id),
            }
        }

        // unresolved writes create implicit globals, in source order
        let root = self.table.root();
        for id in &unresolved {
            let r = &self.table.references[id.index()];
            if !r.kind.is_write() || r.unreliable || self.table.scopes[root.index()].names.contains_key(&r.name) {
                continue;
            }
            let name = r.name.clone();
            let bid = BindingId(self.table.bindings.len() as u32);
            self.table.bindings.push(Binding {
                name: name.clone(),
                kind: BindingKind::ImplicitGlobal,
                scope: root,
                declarations: Vec::new(),
                declaring_node: None,
                references: Vec::new(),
            });
            self.table.scopes[root.index()].names.insert(name, bid);
        }
        for id in unresolved {
            let name = &self.table.references[id.index()].name;
            if let Some(b) = self.table.scopes[root.index()].names.get(name).copied() {
                self.table.references[id.index()].binding = Some(b);
                self.table.bindings[b.index()].references.push(id);
            }
        }
        let references = &self.table.references;
        for b in &mut self.table.bindings {
            b.references.sort_by_key(|r| tree.range(references[r.index()].node).start);
        }
    }
}

pub fn build_scope_table(tree: &SyntaxTree) -> ScopeTable {
    let mut builder = Builder {
        tree,
        table: ScopeTable {
            scopes: Vec::new(),
            bindings: Vec::new(),
            references: Vec::new(),
            node_scope: HashMap::new(),
            decl_binding: HashMap::new(),
            ident_reference: HashMap::new(),
            is_module: tree.is_module,
        },
    };
    builder.create_scopes();
    builder.declare_all();
    builder.resolve_all();
    builder.table
}
