use std::collections::BTreeMap;
use std::fmt::Write;

use super::RenderOptions;
use crate::engine::AnalysisResult;
use crate::finding::{Finding, Severity};
use crate::mapping::RuleId;

const RESET: &str = "\x1b[0m";
const DIM: &str = "\x1b[2m";
const BOLD: &str = "\x1b[1m";

fn severity_color(s: Severity) -> &'static str {
    match s {
        Severity::Error => "\x1b[31m",
        Severity::Warning => "\x1b[33m",
        Severity::Info => "\x1b[36m",
    }
}

/// `path:line:col RULE severity message [CWE-..] (OWASP: ..)`.
pub fn finding_line(f: &Finding, color: bool) -> String {
    let sev =
        if color { format!("{}{}{RESET}", severity_color(f.severity), f.severity) } else { f.severity.to_string() };
    format!(
        "{}:{}:{} {} {} {} [{}] (OWASP: {})",
        f.path,
        f.span.start_line,
        f.span.start_col,
        f.rule_id,
        sev,
        f.message,
        f.cwe_ids.join(","),
        f.owasp_category
    )
}

fn write_details(out: &mut String, f: &Finding, color: bool) {
    let (dim, reset) = if color { (DIM, RESET) } else { ("", "") };
    for step in &f.chain {
        let role = format!("{:?}", step.role).to_lowercase();
        let _ = writeln!(
            out,
            "    {dim}{role} {}:{}: {}{reset}",
            step.span.start_line, step.span.start_col, step.description
        );
    }
    for note in &f.notes {
        let _ = writeln!(out, "    {dim}note: {note}{reset}");
    }
    let _ = writeln!(out, "    {dim}hint: {}{reset}", f.hint);
}

pub fn render_text(result: &AnalysisResult, options: RenderOptions) -> String {
    let mut out = String::new();
    let mut by_file: BTreeMap<&str, Vec<(&Finding, bool)>> = BTreeMap::new();
    for f in &result.findings {
        by_file.entry(&f.path).or_default().push((f, false));
    }
    if options.show_suppressed {
        for f in &result.suppressed {
            by_file.entry(&f.path).or_default().push((f, true));
        }
    }
    for (path, mut findings) in by_file {
        findings.sort_by(|a, b| a.0.sort_key().cmp(&b.0.sort_key()));
        if options.color {
            let _ = writeln!(out, "{BOLD}{path}{RESET}");
        } else {
            let _ = writeln!(out, "{path}");
        }
        for (f, suppressed) in findings {
            let mut line = finding_line(f, options.color);
            if suppressed {
                line.push_str(" (suppressed)");
            }
            let _ = writeln!(out, "  {line}");
            write_details(&mut out, f, options.color);
        }
        out.push('\n');
    }

    for d in &result.diagnostics {
        if d.severity == Severity::Info {
            continue;
        }
        let at = d.span.as_ref().map(|s| format!(":{}:{}", s.start_line, s.start_col)).unwrap_or_default();
        let _ = writeln!(out, "{}{at} {} {}", d.path, d.severity, d.message);
    }
    for s in &result.skipped {
        let _ = writeln!(out, "skipped {} ({})", s.unit_id, s.reason);
    }

    let n = result.findings.len();
    let _ = write!(out, "{n} finding{}", if n == 1 { "" } else { "s" });
    if !result.suppressed.is_empty() {
        let _ = write!(out, ", {} suppressed", result.suppressed.len());
    }
    if !result.skipped.is_empty() {
        let _ = write!(out, ", {} skipped", result.skipped.len());
    }
    let _ = writeln!(out, " in {} file{}", result.stats.files, if result.stats.files == 1 { "" } else { "s" });
    for (rule, count) in &result.stats.per_rule {
        if *count > 0 {
            let name = rule.parse::<RuleId>().map(|r| r.info().name.as_str()).unwrap_or_default();
            let _ = writeln!(out, "  {rule} {name}: {count}");
        }
    }
    out
}
