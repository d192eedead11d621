//! Threshold rules over the measurements in [`crate::metrics`].

use std::collections::BTreeMap;

use jssec_syntax::{BindingKind, UnitKind};

use super::{RunContext, UnitContext};
use crate::finding::Finding;
use crate::mapping::RuleId;
use crate::metrics::ObjectKind;

pub(super) fn large_object(ctx: &UnitContext, out: &mut Vec<Finding>) {
    let t = ctx.cfg().threshold("large_object");
    for obj in &ctx.data.metrics.objects {
        if obj.member_count > t {
            let what = match obj.kind {
                ObjectKind::ObjectLiteral => "object literal",
                ObjectKind::ConstructorFunction => "constructor",
                ObjectKind::Class => "class",
            };
            out.push(Finding::new(
                RuleId::LARGE_OBJECT,
                &ctx.unit().origin_path,
                obj.span.clone(),
                format!("{what} `{}` has {} members (threshold {t})", obj.name, obj.member_count),
            ));
        }
    }
}

pub(super) fn long_function(ctx: &UnitContext, out: &mut Vec<Finding>) {
    let t = ctx.cfg().threshold("function_loc");
    for f in &ctx.data.metrics.functions {
        if f.logical_loc > t {
            out.push(Finding::new(
                RuleId::LONG_FUNCTION,
                &ctx.unit().origin_path,
                f.span.clone(),
                format!("function `{}` spans {} logical lines (threshold {t})", f.name, f.logical_loc),
            ));
        }
    }
    let file_t = ctx.cfg().threshold("file_loc");
    let loc = ctx.data.metrics.logical_loc;
    if loc > file_t {
        out.push(
            Finding::new(
                RuleId::LONG_FUNCTION,
                &ctx.unit().origin_path,
                ctx.anchor(),
                format!("file has {loc} logical lines (threshold {file_t})"),
            )
            .with_subcode("file"),
        );
    }
}

pub(super) fn long_parameter_list(ctx: &UnitContext, out: &mut Vec<Finding>) {
    let t = ctx.cfg().threshold("params");
    for f in &ctx.data.metrics.functions {
        if f.parameter_count > t {
            out.push(Finding::new(
                RuleId::LONG_PARAMETER_LIST,
                &ctx.unit().origin_path,
                f.span.clone(),
                format!("function `{}` takes {} parameters (threshold {t})", f.name, f.parameter_count),
            ));
        }
    }
}

pub(super) fn nested_callback(ctx: &UnitContext, out: &mut Vec<Finding>) {
    let t = ctx.cfg().threshold("callbacks");
    for site in &ctx.data.metrics.callbacks {
        if site.leaf && site.level > t {
            out.push(ctx.finding(
                RuleId::NESTED_CALLBACK,
                site.node,
                format!("callback nested {} levels deep (threshold {t})", site.level),
            ));
        }
    }
}

pub(super) fn excessive_globals(ctx: &UnitContext, out: &mut Vec<Finding>) {
    let t = ctx.cfg().threshold("globals");
    let scopes = ctx.scopes();
    // Top-level declarations in an inline handler are local to the handler.
    let count = if ctx.unit().kind == UnitKind::HtmlInlineHandler {
        scopes.implicit_globals().count() as u32
    } else {
        ctx.data.metrics.global_count
    };
    if count > t {
        out.push(Finding::new(
            RuleId::EXCESSIVE_GLOBALS,
            &ctx.unit().origin_path,
            ctx.anchor(),
            format!("{count} global variables declared (threshold {t})"),
        ));
    }
    for binding in scopes.implicit_globals() {
        let first_write =
            binding.references.iter().map(|r| scopes.reference(*r)).find(|r| r.kind.is_write() && !r.unreliable);
        if let Some(r) = first_write {
            out.push(
                ctx.finding(
                    RuleId::EXCESSIVE_GLOBALS,
                    r.node,
                    format!("`{}` is assigned without a declaration and becomes an implicit global", binding.name),
                )
                .with_subcode("implicit-global"),
            );
        }
    }
}

/// The same global name declared by more than one unit: later scripts
/// overwrite earlier ones.
pub(super) fn global_collisions(run: &RunContext, out: &mut Vec<Finding>) {
    let mut by_name: BTreeMap<&str, Vec<&super::GlobalDeclaration>> = BTreeMap::new();
    for d in run.global_declarations {
        by_name.entry(&d.name).or_default().push(d);
    }
    for (name, decls) in by_name {
        let Some(first) = decls.iter().min_by_key(|d| d.unit) else { continue };
        let first_path = &run.units[first.unit].parsed.unit.origin_path;
        for d in &decls {
            if d.unit == first.unit {
                continue;
            }
            let path = &run.units[d.unit].parsed.unit.origin_path;
            out.push(
                Finding::new(
                    RuleId::EXCESSIVE_GLOBALS,
                    path,
                    d.span.clone(),
                    format!("global `{name}` is also declared in {first_path}:{}", first.span.start_line),
                )
                .with_subcode("collision")
                .with_note("heuristic: same-named globals from separate scripts overwrite each other"),
            );
        }
    }
}

pub(super) fn long_prototype_chain(run: &RunContext, out: &mut Vec<Finding>) {
    let t = run.cfg.threshold("prototype_chain");
    for (key, name, length) in run.graph.lengths() {
        if length <= t {
            continue;
        }
        if let Some((path, span)) = run.graph.site(key) {
            out.push(Finding::new(
                RuleId::LONG_PROTOTYPE_CHAIN,
                path,
                span.clone(),
                format!("`{name}` sits {length} levels down its prototype chain (threshold {t})"),
            ));
        }
    }
}

/// Explicit global declarations of a unit, for collision checks.
pub(crate) fn global_declarations(unit_index: usize, data: &super::AnalyzedUnit) -> Vec<super::GlobalDeclaration> {
    let parsed = &data.parsed;
    if parsed.scopes.is_module() || parsed.unit.kind == UnitKind::HtmlInlineHandler {
        return Vec::new();
    }
    let root = parsed.scopes.root();
    parsed
        .scopes
        .bindings()
        .iter()
        .filter(|b| b.scope == root && !matches!(b.kind, BindingKind::Import | BindingKind::ImplicitGlobal))
        .filter_map(|b| {
            let decl = b.declarations.first()?;
            Some(super::GlobalDeclaration {
                name: b.name.clone(),
                unit: unit_index,
                span: parsed.unit.span(parsed.tree.range(*decl)),
            })
        })
        .collect()
}
