//! Orchestration of a full analysis run.
//!
//! Units are parsed, measured and checked independently, so both phases
//! fan out over a rayon pool when the `parallel` feature is on. Everything
//! that spans units (the prototype graph, global names, `javascript:` URLs)
//! is merged sequentially in between, and the final result is sorted so it
//! never depends on scheduling.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::LazyLock;
use std::time::{Duration, Instant};

use jssec_syntax::{NodeKind, SourceUnit, Span};
use regex::Regex;
use serde::Serialize;

use crate::config::{AnalyzerConfig, Matchers};
use crate::finding::{Diagnostic, DiagnosticKind, Finding, Severity};
use crate::frontend::{is_likely_minified, load_source, parse_unit, ExternalScriptSite, JavascriptUrlSite};
use crate::mapping::RuleId;
use crate::metrics::{measure_unit, PrototypeGraph};
use crate::rules::{builtin_rules, global_declarations, AnalyzedUnit, Rule, RunContext, UnitContext};
use crate::suppress::collect_suppressions;

/// Stack size for analysis threads; parsing and tree walks recurse.
const STACK_SIZE: usize = 64 * 1024 * 1024;

static IDENT: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"[A-Za-z_$][\w$]*").unwrap());

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SkipKind {
    ParseError,
    /// Parsed, but with notes about unsupported syntax under strict parsing.
    StrictParse,
    Minified,
}

/// A unit or file no rule looked at.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SkippedUnit {
    pub path: String,
    pub unit_id: String,
    pub kind: SkipKind,
    pub reason: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub span: Option<Span>,
}

/// Source units ready for analysis.
#[derive(Clone, Debug, Default)]
pub struct AnalysisInput {
    pub units: Vec<SourceUnit>,
    pub javascript_urls: Vec<JavascriptUrlSite>,
    pub external_scripts: Vec<ExternalScriptSite>,
    pub skipped: Vec<SkippedUnit>,
    pub files: usize,
}

impl AnalysisInput {
    pub fn new() -> Self {
        Self::default()
    }

    /// Split a file into units, or record it as skipped when it looks
    /// generated and `include_minified` is off.
    pub fn add_file(&mut self, path: &str, text: &str, cfg: &AnalyzerConfig) {
        self.files += 1;
        if !cfg.include_minified && is_likely_minified(text) {
            self.skipped.push(SkippedUnit {
                path: path.to_string(),
                unit_id: path.to_string(),
                kind: SkipKind::Minified,
                reason: "likely minified or generated (use --include-minified to analyze)".into(),
                span: None,
            });
            return;
        }
        let loaded = load_source(path, text);
        self.units.extend(loaded.units);
        self.javascript_urls.extend(loaded.javascript_urls);
        self.external_scripts.extend(loaded.external_scripts);
    }

    pub fn from_files<'a>(files: impl IntoIterator<Item = (&'a str, &'a str)>, cfg: &AnalyzerConfig) -> Self {
        let mut input = Self::new();
        for (path, text) in files {
            input.add_file(path, text, cfg);
        }
        input
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Stats {
    pub files: usize,
    pub units: usize,
    pub analyzed_units: usize,
    pub findings: usize,
    pub suppressed: usize,
    /// Emitted findings per rule id; every rule appears, zero or not.
    pub per_rule: BTreeMap<String, usize>,
    /// Not serialized, so reports stay byte-stable.
    #[serde(skip)]
    pub wall_time: Duration,
}

/// Equality ignores wall time.
impl PartialEq for Stats {
    fn eq(&self, other: &Self) -> bool {
        (self.files, self.units, self.analyzed_units, self.findings, self.suppressed, &self.per_rule)
            == (other.files, other.units, other.analyzed_units, other.findings, other.suppressed, &other.per_rule)
    }
}

impl Eq for Stats {}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AnalysisResult {
    pub findings: Vec<Finding>,
    pub suppressed: Vec<Finding>,
    pub skipped: Vec<SkippedUnit>,
    pub diagnostics: Vec<Diagnostic>,
    pub external_scripts: Vec<ExternalScriptSite>,
    pub config_digest: String,
    pub stats: Stats,
}

impl AnalysisResult {
    /// Units that could not be parsed, or parsed only with notes.
    pub fn parse_failures(&self) -> usize {
        self.skipped.iter().filter(|s| s.kind != SkipKind::Minified).count()
    }

    pub fn has_rule_crash(&self) -> bool {
        self.diagnostics.iter().any(|d| d.kind == DiagnosticKind::RuleCrash)
    }

    /// Emitted findings at or above `level`.
    pub fn count_at_least(&self, level: Severity) -> usize {
        self.findings.iter().filter(|f| f.severity >= level).count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ExecutionMode {
    /// Rayon data parallelism; sequential when built without `parallel`.
    #[default]
    Parallel,
    Sequential,
}

/// Configured analysis run.
pub struct Engine<'c> {
    cfg: &'c AnalyzerConfig,
    matchers: Matchers,
    rules: Vec<Box<dyn Rule>>,
    apply_suppressions: bool,
    mode: ExecutionMode,
}

impl<'c> Engine<'c> {
    pub fn new(cfg: &'c AnalyzerConfig) -> Self {
        Engine {
            cfg,
            matchers: cfg.matchers(),
            rules: builtin_rules(),
            apply_suppressions: true,
            mode: ExecutionMode::default(),
        }
    }

    pub fn with_mode(mut self, mode: ExecutionMode) -> Self {
        self.mode = mode;
        self
    }

    /// With suppressions off, every finding is emitted.
    pub fn with_suppressions(mut self, on: bool) -> Self {
        self.apply_suppressions = on;
        self
    }

    /// Replace the rule set; used to exercise crash isolation.
    pub fn with_rules(mut self, rules: Vec<Box<dyn Rule>>) -> Self {
        self.rules = rules;
        self
    }

    pub fn run(&self, input: &AnalysisInput) -> AnalysisResult {
        let started = Instant::now();
        let mut result = match self.mode {
            ExecutionMode::Parallel => self.run_parallel(input),
            ExecutionMode::Sequential => self.run_sequential(input),
        };
        result.stats.wall_time = started.elapsed();
        result
    }

    #[cfg(feature = "parallel")]
    fn run_parallel(&self, input: &AnalysisInput) -> AnalysisResult {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new().stack_size(STACK_SIZE).build();
        let Ok(pool) = pool else { return self.run_sequential(input) };
        pool.install(|| {
            self.execute(
                input,
                |units| units.par_iter().map(|u| prepare(u.clone())).collect(),
                |run, rules| run.units.par_iter().map(|u| self.check_unit(run, u, rules)).collect(),
            )
        })
    }

    #[cfg(not(feature = "parallel"))]
    fn run_parallel(&self, input: &AnalysisInput) -> AnalysisResult {
        self.run_sequential(input)
    }

    fn run_sequential(&self, input: &AnalysisInput) -> AnalysisResult {
        std::thread::scope(|s| {
            std::thread::Builder::new()
                .stack_size(STACK_SIZE)
                .spawn_scoped(s, || {
                    self.execute(
                        input,
                        |units| units.iter().map(|u| prepare(u.clone())).collect(),
                        |run, rules| run.units.iter().map(|u| self.check_unit(run, u, rules)).collect(),
                    )
                })
                .expect("spawn analysis thread")
                .join()
                .unwrap_or_else(|e| std::panic::resume_unwind(e))
        })
    }

    fn execute(
        &self,
        input: &AnalysisInput,
        prepare_all: impl FnOnce(&[SourceUnit]) -> Vec<Prepared>,
        check_all: impl FnOnce(&RunContext, &[&dyn Rule]) -> Vec<(Vec<Finding>, Vec<Diagnostic>)>,
    ) -> AnalysisResult {
        let mut diagnostics = Vec::new();
        let mut skipped = input.skipped.clone();
        let mut units = Vec::new();
        for p in prepare_all(&input.units) {
            diagnostics.extend(p.diagnostics);
            match p.unit {
                Ok(u) => {
                    if self.cfg.strict_parse && !u.parsed.notes.is_empty() {
                        skipped.push(SkippedUnit {
                            path: u.parsed.unit.origin_path.clone(),
                            unit_id: u.parsed.unit.id.clone(),
                            kind: SkipKind::StrictParse,
                            reason: "uses syntax beyond the supported grammar (--strict-parse)".into(),
                            span: u.parsed.notes.first().map(|n| n.span.clone()),
                        });
                    } else {
                        units.push(u);
                    }
                }
                Err(s) => skipped.push(s),
            }
        }

        let graph = PrototypeGraph::build(units.iter().map(|u| &u.metrics.prototypes));
        for cycle in graph.cycles() {
            let Some((path, span)) = cycle.iter().find_map(|k| graph.site(k)) else { continue };
            let names: Vec<&str> = cycle.iter().map(|k| graph.name(k)).collect();
            diagnostics.push(Diagnostic {
                kind: DiagnosticKind::PrototypeCycle,
                severity: Severity::Info,
                path: path.clone(),
                span: Some(span.clone()),
                message: format!("prototype cycle between {}", names.join(", ")),
            });
        }
        for u in &units {
            for unknown in &u.metrics.prototypes.unknown {
                diagnostics.push(Diagnostic {
                    kind: DiagnosticKind::UnknownParent,
                    severity: Severity::Info,
                    path: unknown.path.clone(),
                    span: Some(unknown.span.clone()),
                    message: format!("prototype parent `{}` could not be resolved", unknown.text),
                });
            }
        }

        let referenced_names = referenced_names(&units, &input.javascript_urls);
        let global_declarations: Vec<_> =
            units.iter().enumerate().flat_map(|(i, u)| global_declarations(i, u)).collect();
        let run = RunContext {
            cfg: self.cfg,
            matchers: &self.matchers,
            units: &units,
            graph: &graph,
            javascript_urls: &input.javascript_urls,
            referenced_names: &referenced_names,
            global_declarations: &global_declarations,
        };

        let active: Vec<&dyn Rule> =
            self.rules.iter().map(|r| r.as_ref()).filter(|r| self.cfg.is_active(r.id())).collect();
        let mut findings = Vec::new();
        for (f, d) in check_all(&run, &active) {
            findings.extend(f);
            diagnostics.extend(d);
        }
        for rule in &active {
            let mut out = Vec::new();
            match catch_unwind(AssertUnwindSafe(|| rule.check_run(&run, &mut out))) {
                Ok(()) => findings.extend(out),
                Err(e) => diagnostics.push(Diagnostic {
                    kind: DiagnosticKind::RuleCrash,
                    severity: Severity::Error,
                    path: String::new(),
                    span: None,
                    message: format!("{} crashed on the run-level check: {}", rule.id(), panic_text(&*e)),
                }),
            }
        }

        self.finish(&units, findings, diagnostics, skipped, input)
    }

    fn check_unit(
        &self,
        run: &RunContext,
        data: &AnalyzedUnit,
        rules: &[&dyn Rule],
    ) -> (Vec<Finding>, Vec<Diagnostic>) {
        let ctx = UnitContext::new(run, data);
        let mut findings = Vec::new();
        let mut diagnostics = Vec::new();
        for rule in rules {
            let mut out = Vec::new();
            match catch_unwind(AssertUnwindSafe(|| rule.check_unit(&ctx, &mut out))) {
                Ok(()) => findings.extend(out),
                Err(e) => diagnostics.push(Diagnostic {
                    kind: DiagnosticKind::RuleCrash,
                    severity: Severity::Error,
                    path: data.parsed.unit.origin_path.clone(),
                    span: Some(data.parsed.unit.full_span()),
                    message: format!("{} crashed on unit {}: {}", rule.id(), data.parsed.unit.id, panic_text(&*e)),
                }),
            }
        }
        (findings, diagnostics)
    }

    fn finish(
        &self,
        units: &[AnalyzedUnit],
        mut findings: Vec<Finding>,
        mut diagnostics: Vec<Diagnostic>,
        mut skipped: Vec<SkippedUnit>,
        input: &AnalysisInput,
    ) -> AnalysisResult {
        findings.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        findings.dedup_by(|b, a| a.rule_id == b.rule_id && a.path == b.path && a.span == b.span);

        let texts: BTreeMap<&str, &SourceUnit> =
            units.iter().map(|u| (u.parsed.unit.id.as_str(), &u.parsed.unit)).collect();
        for f in &mut findings {
            let snippet = texts.get(f.span.unit_id.as_str()).and_then(|u| {
                let start = f.span.start_byte.checked_sub(u.origin.byte)? as usize;
                let end = f.span.end_byte.checked_sub(u.origin.byte)? as usize;
                u.text.get(start..end)
            });
            let snippet = snippet.unwrap_or(&f.message).to_string();
            f.compute_fingerprint(&snippet);
        }
        // Identical snippets in one file get an occurrence suffix.
        let mut seen: HashMap<String, usize> = HashMap::new();
        for f in &mut findings {
            let n = seen.entry(f.fingerprint.clone()).or_default();
            if *n > 0 {
                f.fingerprint = format!("{}-{n}", f.fingerprint);
            }
            *n += 1;
        }

        let (findings, suppressed) = if self.apply_suppressions {
            let all: Vec<_> = units.iter().flat_map(|u| u.suppressions.iter()).collect();
            findings.into_iter().partition(|f| !all.iter().any(|s| s.covers(f)))
        } else {
            (findings, Vec::new())
        };

        diagnostics.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        diagnostics.dedup();
        skipped.sort_by(|a, b| (&a.path, &a.unit_id).cmp(&(&b.path, &b.unit_id)));
        let mut external_scripts = input.external_scripts.clone();
        external_scripts.sort_by(|a, b| (&a.path, a.line, &a.src).cmp(&(&b.path, b.line, &b.src)));

        let mut per_rule: BTreeMap<String, usize> = RuleId::all().map(|r| (r.to_string(), 0)).collect();
        for f in &findings {
            *per_rule.entry(f.rule_id.to_string()).or_default() += 1;
        }
        let stats = Stats {
            files: input.files,
            units: input.units.len(),
            analyzed_units: units.len(),
            findings: findings.len(),
            suppressed: suppressed.len(),
            per_rule,
            wall_time: Duration::ZERO,
        };
        AnalysisResult {
            findings,
            suppressed,
            skipped,
            diagnostics,
            external_scripts,
            config_digest: self.cfg.digest(),
            stats,
        }
    }
}

/// Analyze with the default execution mode.
pub fn run_analysis(input: &AnalysisInput, cfg: &AnalyzerConfig) -> AnalysisResult {
    Engine::new(cfg).run(input)
}

/// Analyze on a single thread.
pub fn run_analysis_sequential(input: &AnalysisInput, cfg: &AnalyzerConfig) -> AnalysisResult {
    Engine::new(cfg).with_mode(ExecutionMode::Sequential).run(input)
}

struct Prepared {
    unit: Result<AnalyzedUnit, SkippedUnit>,
    diagnostics: Vec<Diagnostic>,
}

fn prepare(unit: SourceUnit) -> Prepared {
    match parse_unit(unit) {
        Ok(parsed) => {
            let metrics = measure_unit(&parsed.unit, &parsed.tree, &parsed.scopes);
            let (suppressions, mut diagnostics) = collect_suppressions(&parsed.unit, &parsed.tree);
            diagnostics.extend(parsed.notes.iter().map(|n| Diagnostic {
                kind: DiagnosticKind::ParseNote,
                severity: Severity::Info,
                path: parsed.unit.origin_path.clone(),
                span: Some(n.span.clone()),
                message: n.message.clone(),
            }));
            Prepared { unit: Ok(AnalyzedUnit { parsed, metrics, suppressions }), diagnostics }
        }
        Err(failed) => {
            let (unit, diag) = *failed;
            let diagnostic = Diagnostic {
                kind: DiagnosticKind::ParseError,
                severity: Severity::Warning,
                path: unit.origin_path.clone(),
                span: Some(diag.span.clone()),
                message: format!("unit skipped: {}", diag.message),
            };
            let skipped = SkippedUnit {
                path: unit.origin_path.clone(),
                unit_id: unit.id.clone(),
                kind: SkipKind::ParseError,
                reason: format!("parse error: {}", diag.message),
                span: Some(diag.span),
            };
            Prepared { unit: Err(skipped), diagnostics: vec![diagnostic] }
        }
    }
}

/// Names read as globals anywhere in the run.
fn referenced_names(units: &[AnalyzedUnit], javascript_urls: &[JavascriptUrlSite]) -> HashSet<String> {
    let mut names = HashSet::new();
    for u in units {
        let (tree, scopes) = (&u.parsed.tree, &u.parsed.scopes);
        for r in scopes.references() {
            let global = match r.binding {
                None => true,
                Some(b) => scopes.binding(b).kind == jssec_syntax::BindingKind::ImplicitGlobal,
            };
            if global && r.kind.is_read() {
                names.insert(r.name.clone());
            }
        }
        for node in tree.ids() {
            if let NodeKind::MemberExpression { object, property, computed, .. } = tree.kind(node) {
                let object = tree.skip_parens(*object);
                let is_global_object = matches!(tree.identifier_name(object), Some("window" | "globalThis" | "self"))
                    && scopes.binding_of(object).is_none();
                if is_global_object {
                    if let Some(name) = tree.property_key_name(*property, *computed) {
                        names.insert(name.to_string());
                    }
                }
            }
        }
    }
    for site in javascript_urls {
        names.extend(IDENT.find_iter(&site.code).map(|m| m.as_str().to_string()));
    }
    names
}

fn panic_text(e: &(dyn std::any::Any + Send)) -> String {
    e.downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| e.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "panic".into())
}
