use jssec_syntax::scope::pattern_identifiers;
use jssec_syntax::{
    build_scope_table, parse, parse_program, BindingKind, NodeKind, ParseOptions, RefKind, ScopeTable, SyntaxTree,
};

fn table(src: &str) -> (SyntaxTree, ScopeTable) {
    let tree = parse_program(src).unwrap();
    let scopes = build_scope_table(&tree);
    (tree, scopes)
}

fn binding<'a>(scopes: &'a ScopeTable, name: &str) -> Vec<&'a jssec_syntax::scope::Binding> {
    scopes.bindings().iter().filter(|b| b.name == name).collect()
}

#[test]
fn global_with_declaration_and_write() {
    let (_, scopes) = table("var g=1; function f(){ g=2; }");
    let g = binding(&scopes, "g");
    assert_eq!(g.len(), 1);
    assert_eq!(g[0].kind, BindingKind::Var);
    assert_eq!(g[0].declarations.len(), 1);
    assert_eq!(g[0].references.len(), 1);
    assert_eq!(scopes.reference(g[0].references[0]).kind, RefKind::Write);
    assert_eq!(scopes.global_count(), 2);
}

#[test]
fn assignment_without_declaration_is_implicit_global() {
    let (_, scopes) = table("function f(){ leaked = 5; }");
    let leaked = binding(&scopes, "leaked");
    assert_eq!(leaked.len(), 1);
    assert_eq!(leaked[0].kind, BindingKind::ImplicitGlobal);
    assert_eq!(scopes.implicit_globals().count(), 1);
}

#[test]
fn reads_before_the_leaking_write_resolve_to_it() {
    let (_, scopes) = table("function r(){ return leaked; } function w(){ leaked = 1; }");
    let leaked = binding(&scopes, "leaked");
    assert_eq!(leaked[0].references.len(), 2);
    assert_eq!(scopes.read_count(binding_id(&scopes, "leaked")), 1);
}

fn binding_id(scopes: &ScopeTable, name: &str) -> jssec_syntax::BindingId {
    scopes.references().iter().find_map(|r| r.binding.filter(|b| scopes.binding(*b).name == name)).unwrap()
}

#[test]
fn twelve_top_level_vars_count_as_twelve_globals() {
    let src: String = (0..12).map(|i| format!("var v{i} = {i};\n")).collect();
    let (_, scopes) = table(&src);
    assert_eq!(scopes.global_count(), 12);
}

#[test]
fn module_declarations_are_not_global() {
    let (_, scopes) = table("import x from 'x'; const a = 1; export function f() { leak = a; }");
    assert!(scopes.is_module());
    assert_eq!(scopes.global_count(), 1);
    let (_, scopes) = {
        let tree = parse("const a = 1;", ParseOptions { module: true, ..Default::default() }).unwrap();
        let s = build_scope_table(&tree);
        (tree, s)
    };
    assert_eq!(scopes.global_count(), 0);
}

#[test]
fn block_scoping_and_shadowing() {
    let (tree, scopes) = table("let a = 1; { let a = 2; a; } a; function f(a) { return a; }");
    let a = binding(&scopes, "a");
    assert_eq!(a.len(), 3);
    let kinds: Vec<_> = a.iter().map(|b| b.kind).collect();
    assert!(kinds.contains(&BindingKind::Param));
    for b in a {
        assert_eq!(b.references.len(), 1, "{:?}", b.kind);
    }
    assert_eq!(tree.kind(tree.root()).name(), "Program");
}

#[test]
fn var_hoists_out_of_blocks_and_function_declarations_hoist() {
    let (_, scopes) = table("use(); { var v = 1; } function use() { return v; }");
    let v = binding(&scopes, "v");
    assert_eq!(v.len(), 1);
    assert_eq!(v[0].scope, scopes.root());
    assert_eq!(v[0].references.len(), 1);
    let use_ = binding(&scopes, "use");
    assert_eq!(use_[0].kind, BindingKind::Function);
    assert_eq!(use_[0].references.len(), 1);
}

#[test]
fn property_names_and_labels_are_not_references() {
    let (_, scopes) = table("var o = { k: 1 }; o.k; outer: for (;;) { break outer; }");
    assert!(binding(&scopes, "k").is_empty());
    assert!(scopes.references().iter().all(|r| r.name != "k" && r.name != "outer"));
}

#[test]
fn destructuring_assignment_targets_are_writes() {
    let (_, scopes) = table("var a, b; [a, {x: b}] = pair(); a += 1; b++;");
    let a = binding(&scopes, "a")[0];
    let kinds: Vec<_> = a.references.iter().map(|r| scopes.reference(*r).kind).collect();
    assert_eq!(kinds, [RefKind::Write, RefKind::ReadWrite]);
    let b = binding(&scopes, "b")[0];
    let kinds: Vec<_> = b.references.iter().map(|r| scopes.reference(*r).kind).collect();
    assert_eq!(kinds, [RefKind::Write, RefKind::ReadWrite]);
}

#[test]
fn with_marks_references_unreliable() {
    let (_, scopes) = table("with (obj) { prop = 1; other; }");
    assert!(scopes.references().iter().filter(|r| r.name != "obj").all(|r| r.unreliable));
    assert_eq!(scopes.implicit_globals().count(), 0);
}

#[test]
fn catch_params_and_named_function_expressions() {
    let (_, scopes) = table("try {} catch ({message}) { message; } var f = function self() { self(); };");
    assert_eq!(binding(&scopes, "message")[0].kind, BindingKind::CatchParam);
    let own = binding(&scopes, "self")[0];
    assert_eq!(own.kind, BindingKind::FunctionName);
    assert_eq!(own.references.len(), 1);
}

#[test]
fn shorthand_properties_read_their_binding() {
    let (_, scopes) = table("var token = 1; send({ token });");
    assert_eq!(binding(&scopes, "token")[0].references.len(), 1);
}

#[test]
fn declarations_map_to_exactly_one_binding() {
    let (tree, scopes) = table("var a, [b, ...c] = x, {d, e: {f = 1}} = y; function g(h, {i}) {} class J {}");
    let mut declared = Vec::new();
    for id in tree.ids() {
        if let NodeKind::VariableDeclarator { id: pattern, .. } = tree.kind(id) {
            pattern_identifiers(&tree, *pattern, &mut declared);
        }
    }
    assert_eq!(declared.len(), 5);
    for ident in declared {
        let b = scopes.declared_by(ident).expect("declaration has a binding");
        assert!(scopes.binding(b).declarations.contains(&ident));
    }
}
