use jssec_syntax::{
    build_scope_table, extract_scripts_from_html, parse, parse_expression, NodeKind, ParseOptions, SyntaxTree,
};
use proptest::prelude::*;

fn ident() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["a", "b", "c", "foo", "bar", "x1", "data"]).prop_map(str::to_string)
}

fn expr() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        ident(),
        (0u32..1000).prop_map(|n| n.to_string()),
        "[a-z ]{0,6}".prop_map(|s| format!("'{s}'")),
        Just("this".to_string()),
        Just("null".to_string()),
        Just("/ab+c/g".to_string()),
        Just("`plain`".to_string()),
    ];
    leaf.prop_recursive(4, 48, 3, |inner| {
        prop_oneof![
            (inner.clone(), prop::sample::select(vec!["+", "*", "&&", "||", "===", "<", "in"]), inner.clone())
                .prop_map(|(l, op, r)| format!("{l} {op} {r}")),
            (inner.clone(), inner.clone(), inner.clone()).prop_map(|(c, t, e)| format!("({c} ? {t} : {e})")),
            (ident(), prop::collection::vec(inner.clone(), 0..3))
                .prop_map(|(f, args)| format!("{f}({})", args.join(", "))),
            (inner.clone(), ident()).prop_map(|(o, p)| format!("({o}).{p}")),
            (ident(), inner.clone()).prop_map(|(o, k)| format!("{o}[{k}]")),
            prop::collection::vec(inner.clone(), 0..3).prop_map(|xs| format!("[{}]", xs.join(", "))),
            (ident(), inner.clone()).prop_map(|(k, v)| format!("{{ {k}: {v} }}")),
            (ident(), inner.clone()).prop_map(|(p, b)| format!("function ({p}) {{ return {b}; }}")),
            (ident(), inner.clone()).prop_map(|(p, b)| format!("(({p}) => ({b}))")),
            (ident(), inner.clone()).prop_map(|(c, a)| format!("new {c}({a})")),
            inner.clone().prop_map(|e| format!("!({e})")),
            inner.clone().prop_map(|e| format!("typeof {e}")),
            inner.clone().prop_map(|e| format!("`t${{{e}}}u`")),
            inner.clone().prop_map(|e| format!("({e})")),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| format!("(({l}) ?? ({r}))")),
            (ident(), inner.clone()).prop_map(|(t, v)| format!("({t} = {v})")),
        ]
    })
}

fn stmt() -> impl Strategy<Value = String> {
    let simple = prop_oneof![
        (ident(), expr()).prop_map(|(n, e)| format!("var {n} = {e};")),
        (ident(), expr()).prop_map(|(n, e)| format!("{n} = {e};")),
        (ident(), expr()).prop_map(|(f, e)| format!("{f}({e});")),
        expr().prop_map(|e| format!("return {e};")),
        (ident(), expr()).prop_map(|(n, e)| format!("let {{ {n} }} = {e};")),
    ];
    simple.prop_recursive(3, 24, 3, |inner| {
        let block = prop::collection::vec(inner.clone(), 0..3).prop_map(|xs| xs.join("\n"));
        prop_oneof![
            (expr(), block.clone(), block.clone()).prop_map(|(c, t, e)| format!("if ({c}) {{ {t} }} else {{ {e} }}")),
            (expr(), block.clone()).prop_map(|(c, b)| format!("for (var i = 0; i < {c}; i++) {{ {b} }}")),
            (expr(), block.clone()).prop_map(|(c, b)| format!("while ({c}) {{ {b} }}")),
            (ident(), ident(), block.clone()).prop_map(|(f, p, b)| format!("function {f}({p}, rest) {{ {b} }}")),
            (block.clone(), block.clone()).prop_map(|(t, c)| format!("try {{ {t} }} catch (err) {{ {c} }}")),
            (expr(), block.clone()).prop_map(|(d, b)| format!("switch ({d}) {{ case 1: {b} break; default: }}")),
            (ident(), block.clone()).prop_map(|(n, b)| format!("for (const {n} of list) {{ {b} }}")),
        ]
    })
}

fn program() -> impl Strategy<Value = String> {
    prop::collection::vec(stmt(), 1..5).prop_map(|xs| xs.join("\n"))
}

const OPTIONS: ParseOptions = ParseOptions { module: false, allow_return: true };

fn reparse_kind(text: &str, statement: bool) -> Option<&'static str> {
    if statement {
        let tree = parse(text, OPTIONS).ok()?;
        match tree.kind(tree.root()) {
            NodeKind::Program { body } if body.len() == 1 => Some(tree.kind(body[0]).name()),
            _ => None,
        }
    } else {
        let tree = parse_expression(text).ok()?;
        Some(tree.kind(tree.root()).name())
    }
}

fn check_spans(tree: &SyntaxTree, src: &str) {
    for id in tree.ids() {
        let range = tree.range(id);
        assert!(range.start <= range.end && range.end as usize <= src.len());
        let mut prev_end = range.start;
        for child in tree.children(id) {
            let c = tree.range(child);
            assert!(range.start <= c.start && c.end <= range.end, "child outside parent");
            assert!(c.start >= prev_end, "children overlap or are out of order");
            prev_end = c.end;
            assert_eq!(tree.parent(child), Some(id));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn generated_programs_parse(src in program()) {
        let tree = parse(&src, OPTIONS);
        prop_assert!(tree.is_ok(), "{src}\n{:?}", tree.err());
    }

    #[test]
    fn child_spans_nest_inside_parents(src in program()) {
        let tree = parse(&src, OPTIONS).unwrap();
        check_spans(&tree, &src);
    }

    #[test]
    fn node_text_reparses_to_the_same_kind(src in program()) {
        let tree = parse(&src, OPTIONS).unwrap();
        for id in tree.ids() {
            let kind = tree.kind(id);
            let statement = kind.is_statement();
            if !statement && !kind.is_expression() {
                continue;
            }
            if matches!(kind, NodeKind::Identifier { .. }) && !is_reference_position(&tree, id) {
                continue;
            }
            let text = tree.text(&src, id);
            prop_assert_eq!(reparse_kind(text, statement), Some(kind.name()), "{:?}", text);
        }
    }

    #[test]
    fn every_declaration_and_reference_has_at_most_one_binding(src in program()) {
        let tree = parse(&src, OPTIONS).unwrap();
        let scopes = build_scope_table(&tree);
        let mut seen = std::collections::HashMap::new();
        for (i, binding) in scopes.bindings().iter().enumerate() {
            for decl in &binding.declarations {
                prop_assert!(seen.insert(*decl, i).is_none(), "declaration claimed twice");
            }
        }
        let mut referenced = std::collections::HashSet::new();
        for (i, reference) in scopes.references().iter().enumerate() {
            prop_assert!(referenced.insert(reference.node));
            if let Some(b) = reference.binding {
                let binding = scopes.binding(b);
                prop_assert_eq!(&binding.name, &reference.name);
                prop_assert_eq!(binding.references.iter().filter(|r| r.index() == i).count(), 1);
            }
        }
    }

    #[test]
    fn handler_text_lies_inside_the_attribute_value(
        pad in "[a-z ]{0,12}",
        handler in "[a-z(); ]{0,16}",
        attr in prop::sample::select(vec!["onclick", "onload", "onMouseOver"]),
    ) {
        let html = format!("<div>{pad}</div>\n<button {attr}=\"{handler}\" id=x>go</button>");
        let ex = extract_scripts_from_html("p.html", &html);
        prop_assert_eq!(ex.units.len(), 1);
        let unit = &ex.units[0];
        let start = unit.origin.byte as usize;
        let value_start = html.find(&format!("{attr}=\"")).unwrap() + attr.len() + 2;
        let value_end = value_start + handler.len();
        prop_assert!(value_start <= start && start + unit.text.len() <= value_end);
        prop_assert_eq!(&html[start..start + unit.text.len()], unit.text.as_str());
    }
}

/// Identifiers used as names (property keys, labels, declarations) are not
/// expressions on their own.
fn is_reference_position(tree: &SyntaxTree, id: jssec_syntax::NodeId) -> bool {
    let Some(parent) = tree.parent(id) else { return true };
    match tree.kind(parent) {
        NodeKind::MemberExpression { property, computed: false, .. } => *property != id,
        NodeKind::Property { key, value, computed: false, .. } => *key != id || *value == id,
        _ => true,
    }
}
