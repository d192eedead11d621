use jssec_syntax::ast::{FunctionKind, NodeKind};
use jssec_syntax::{parse, parse_program, NodeId, ParseOptions, SyntaxTree};

fn ok(src: &str) -> SyntaxTree {
    match parse_program(src) {
        Ok(tree) => tree,
        Err(e) => panic!("failed to parse {src:?}: {e}"),
    }
}

fn kinds(tree: &SyntaxTree) -> Vec<&'static str> {
    tree.descendants(tree.root()).map(|id| tree.kind(id).name()).collect()
}

fn find(tree: &SyntaxTree, name: &str) -> Vec<NodeId> {
    tree.descendants(tree.root()).filter(|id| tree.kind(*id).name() == name).collect()
}

#[test]
fn accepts_common_script_constructs() {
    let sources = [
        "var a = 1, b = 'x', c;",
        "let [x, , y = 2, ...rest] = arr; const {p, q: {r}, ...o} = obj;",
        "function f(a, b = 1, {c}, [d], ...e) { return a + b; }",
        "async function g() { await x; for await (const v of it) {} }",
        "function* gen() { yield; yield 1; yield* other(); }",
        "const h = async (a, {b}) => { return a; }; const k = async x => x * 2;",
        "x => y => x + y;",
        "(a, b) => a; () => ({}); (...args) => args;",
        "class A extends B { constructor() { super(); } static m() {} get x() { return 1; } set x(v) {} async *gen() {} ['computed']() {} }",
        "const o = { a, b: 1, [c]: 2, d() {}, get e() { return 1; }, set e(v) {}, async f() {}, *g() {}, ...rest, 'str': 1, 3: 4 };",
        "a?.b?.[c]?.(d); a ?? b; new.target; import.meta;",
        "label: for (var i = 0; i < 10; i++) { if (i) continue label; else break label; }",
        "for (const k in obj) {} for (x of xs) {} for (;;) { break; } for (var i = 0, n = 1; i < n; i++);",
        "do x++; while (x < 10) y();",
        "switch (x) { case 1: a(); break; case 2: default: b(); }",
        "try { a(); } catch (e) { b(); } finally { c(); } try {} catch {}",
        "with (obj) { prop = 1; }",
        "throw new Error('x');",
        "debugger;",
        "if (a) b(); else if (c) d(); else { e(); }",
        "`plain`; `a${b}c${d}e`; tag`x${y}`; `${`${nested}`}`;",
        "/re[/]gex/gi.test(s); a = b / c / d; x = /=/;",
        "a = b\n++c",
        "var x = 0x1F + 0o17 + 0b101 + 1e3 + .5 + 5. + 10n + 017;",
        "delete a.b; void 0; typeof x === 'undefined'; !a; ~b; -c; +d;",
        "a = b ? c : d ? e : f;",
        "a **= 2; b = 2 ** 3 ** 2; c >>>= 1;",
        "x = function named() {}; y = class {};",
        "new Foo; new Foo(); new new Foo()(); new a.b.C(1).d();",
        "'use strict'; var let_ = 1;",
        "var async = 1; async(1, 2); var of = 2; let\nx = 1;",
        "if (a) function f() {}",
        "obj.class = obj.function + obj.new;",
        "({a = 1} = {});",
        "[a, b] = [b, a];",
        "#!/usr/bin/env node\nconsole.log(1);",
        "a\n(b)",
        "return_ = 1; var yield_ = yield + 1;",
        "var \\u0061bc = 1; abc;",
        "x = {if: 1, class: 2}.if;",
        "import('mod').then(m => m);",
    ];
    for src in sources {
        ok(src);
    }
}

#[test]
fn accepts_modules() {
    let tree = ok("import a, {b as c, d} from 'x'; import * as ns from 'y'; import 'z';\n\
                   export const e = 1; export default function () {} export {c as f, d}; export * from 'w'; export * as q from 'v';");
    assert!(tree.is_module);
    assert!(!ok("var a = 1;").is_module);
    let tree = ok("export default class {}");
    assert!(tree.is_module);
}

#[test]
fn rejects_syntax_errors() {
    let sources = [
        "a ?? b || c;",
        "a && b ?? c;",
        "var = 1;",
        "function (a) {}",
        "a b",
        "if (a { }",
        "var x = 'unterminated",
        "x = `unterminated",
        "return 1;",
        "1 = 2;",
        "for (var i = 0; i < 1) {}",
        "({a: 1} = 1) => 1;",
        "class { }",
        "try {}",
        "switch (x) { default: default: }",
        "throw\nnew Error();",
        "a => {} }",
        "let [a] ;; var if = 1;",
        "/* never closed",
        "obj.",
        "x = 1 +;",
    ];
    for src in sources {
        assert!(parse_program(src).is_err(), "expected a syntax error for {src:?}");
    }
}

#[test]
fn later_syntax_parses_with_notes() {
    let cases = [
        ("a ||= b;", "logical assignment"),
        ("x = 1_000;", "numeric separators"),
        ("class A { field = 1; #p = 2; m() { return this.#p; } }", "class fields"),
        ("class A { static { init(); } }", "static blocks"),
    ];
    for (src, note) in cases {
        let tree = ok(src);
        assert!(
            tree.notes.iter().any(|n| n.message.contains(note)),
            "{src:?} should carry a note mentioning {note:?}, got {:?}",
            tree.notes
        );
    }
    assert!(ok("var a = 1;").notes.is_empty());
}

#[test]
fn top_level_await_only_in_modules() {
    let tree = parse("await x;", ParseOptions { module: true, ..Default::default() }).unwrap();
    assert_eq!(find(&tree, "AwaitExpression").len(), 1);
    let tree = ok("await(x);");
    assert!(find(&tree, "AwaitExpression").is_empty());
}

#[test]
fn handler_bodies_may_return() {
    assert!(parse_program("return false;").is_err());
    let options = ParseOptions { allow_return: true, ..Default::default() };
    assert!(parse("doThing(); return false;", options).is_ok());
}

#[test]
fn asi_restricted_productions() {
    let tree = ok("function f() { return\n1; }");
    let ret = find(&tree, "ReturnStatement")[0];
    assert!(matches!(tree.kind(ret), NodeKind::ReturnStatement { argument: None }));

    let tree = ok("a\n++b");
    assert_eq!(find(&tree, "ExpressionStatement").len(), 2);
    let update = find(&tree, "UpdateExpression")[0];
    assert!(matches!(tree.kind(update), NodeKind::UpdateExpression { prefix: true, .. }));
}

#[test]
fn precedence_and_associativity() {
    let tree = ok("a + b * c;");
    let NodeKind::BinaryExpression { right, .. } = tree.kind(find(&tree, "BinaryExpression")[0]) else { panic!() };
    assert_eq!(tree.kind(*right).name(), "BinaryExpression");

    let tree = ok("2 ** 3 ** 2;");
    let outer = find(&tree, "BinaryExpression")[0];
    let NodeKind::BinaryExpression { left, right, .. } = tree.kind(outer) else { panic!() };
    assert_eq!(tree.kind(*left).name(), "NumericLiteral");
    assert_eq!(tree.kind(*right).name(), "BinaryExpression");

    let tree = ok("a - b - c;");
    let outer = find(&tree, "BinaryExpression")[0];
    let NodeKind::BinaryExpression { left, .. } = tree.kind(outer) else { panic!() };
    assert_eq!(tree.kind(*left).name(), "BinaryExpression");
}

#[test]
fn cover_grammar_produces_patterns() {
    let tree = ok("({a, b: [c, ...d], e = 1} = obj);");
    assert_eq!(find(&tree, "ObjectPattern").len(), 1);
    assert_eq!(find(&tree, "ArrayPattern").len(), 1);
    assert_eq!(find(&tree, "RestElement").len(), 1);
    assert_eq!(find(&tree, "AssignmentPattern").len(), 1);
    assert!(find(&tree, "ObjectExpression").is_empty());

    let tree = ok("const f = ({x}, [y] = [], z = 3) => x;");
    let func = find(&tree, "ArrowFunctionExpression")[0];
    let f = tree.function(func).unwrap();
    let names: Vec<_> = f.params.iter().map(|p| tree.kind(*p).name()).collect();
    assert_eq!(names, ["ObjectPattern", "AssignmentPattern", "AssignmentPattern"]);
    assert!(f.expression_body);
}

#[test]
fn parentheses_are_kept() {
    let tree = ok("(a);");
    assert_eq!(find(&tree, "ParenthesizedExpression").len(), 1);
    let paren = find(&tree, "ParenthesizedExpression")[0];
    assert_eq!(tree.skip_parens(paren), find(&tree, "Identifier")[0]);
}

#[test]
fn regex_and_division_are_distinguished() {
    let tree = ok("var r = /ab+c/gi; var q = a / b / c;");
    let regex = find(&tree, "RegExpLiteral")[0];
    let NodeKind::RegExpLiteral { pattern, flags } = tree.kind(regex) else { panic!() };
    assert_eq!((pattern.as_str(), flags.as_str()), ("ab+c", "gi"));
    assert_eq!(find(&tree, "BinaryExpression").len(), 2);

    let tree = ok("if (x) /foo/.test(y);");
    assert_eq!(find(&tree, "RegExpLiteral").len(), 1);
}

#[test]
fn template_children_alternate_in_source_order() {
    let src = "`a${b}c${d}e`;";
    let tree = ok(src);
    let template = find(&tree, "TemplateLiteral")[0];
    let texts: Vec<_> = tree.children(template).into_iter().map(|c| tree.text(src, c)).collect();
    assert_eq!(texts, ["a", "b", "c", "d", "e"]);
    let cooked: Vec<_> = find(&tree, "TemplateElement")
        .into_iter()
        .map(|id| match tree.kind(id) {
            NodeKind::TemplateElement { cooked, .. } => cooked.clone().unwrap(),
            _ => unreachable!(),
        })
        .collect();
    assert_eq!(cooked, ["a", "c", "e"]);
}

#[test]
fn string_and_number_values() {
    let tree = ok(r#"x = ["a\nb", 'c\x41B\u{43}', 0x10, 1e2, 010, 1_0];"#);
    let strings: Vec<_> =
        find(&tree, "StringLiteral").into_iter().map(|id| tree.string_value(id).unwrap().to_string()).collect();
    assert_eq!(strings, ["a\nb", "cABC"]);
    let numbers: Vec<f64> = find(&tree, "NumericLiteral")
        .into_iter()
        .map(|id| match tree.kind(id) {
            NodeKind::NumericLiteral { value } => *value,
            _ => unreachable!(),
        })
        .collect();
    assert_eq!(numbers, [16.0, 100.0, 8.0, 10.0]);
}

#[test]
fn function_kinds() {
    let tree = ok("function a() {} var b = function () {}; var c = () => 1; var d = { m() {} }; class E { n() {} }");
    let mut funcs: Vec<_> = tree.descendants(tree.root()).filter_map(|id| tree.function(id).map(|f| f.kind)).collect();
    funcs.sort_by_key(|k| format!("{k:?}"));
    assert_eq!(
        funcs,
        [
            FunctionKind::Arrow,
            FunctionKind::Declaration,
            FunctionKind::Expression,
            FunctionKind::Method,
            FunctionKind::Method
        ]
    );
}

#[test]
fn member_paths() {
    let tree = ok("window.location.href = x; res.status(500).send(err); a['b'].c;");
    let members = find(&tree, "MemberExpression");
    assert_eq!(tree.member_path(members[0]).as_deref(), Some("window.location.href"));
    let call = find(&tree, "CallExpression")[0];
    let NodeKind::CallExpression { callee, .. } = tree.kind(call) else { panic!() };
    assert_eq!(tree.callee_path(*callee).as_deref(), Some("res.status().send"));
    assert_eq!(tree.member_path(*members.last().unwrap()).as_deref(), Some("a.b"));
}

#[test]
fn comments_and_tokens_are_collected() {
    let src = "// lead\nvar a = 1; /* block */\n";
    let tree = ok(src);
    assert_eq!(tree.comments.len(), 2);
    let texts: Vec<_> = tree.tokens.iter().map(|r| r.slice(src)).collect();
    assert_eq!(texts, ["var", "a", "=", "1", ";"]);
}

#[test]
fn deep_nesting_is_an_error_not_a_crash() {
    let src = format!("x = {}1{};", "(".repeat(5000), ")".repeat(5000));
    assert!(parse_program(&src).is_err());
    let src = format!("x = {}1;", "!".repeat(5000));
    assert!(parse_program(&src).is_err());
}

#[test]
fn every_node_but_the_root_has_a_parent() {
    let tree = ok("class A { static { a(); } } var {x = 1} = y; f(async (a) => a);");
    for id in tree.ids() {
        if id != tree.root() {
            let parent = tree.parent(id).unwrap();
            assert!(tree.children(parent).contains(&id));
        }
    }
    assert_eq!(kinds(&tree)[0], "Program");
}

#[test]
fn moderate_nesting_is_accepted() {
    let src = format!("x = {}1{};", "(".repeat(150), ")".repeat(150));
    ok(&src);
    let mut src = String::new();
    for _ in 0..60 {
        src.push_str("f(function () {\n");
    }
    for _ in 0..60 {
        src.push_str("});\n");
    }
    ok(&src);
}
