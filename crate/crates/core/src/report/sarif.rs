use serde_json::{json, Value};

use super::{RenderOptions, TOOL_NAME, TOOL_VERSION};
use crate::engine::AnalysisResult;
use crate::finding::{DiagnosticKind, Finding, Severity};
use crate::mapping::catalogue;
use jssec_syntax::Span;

const SARIF_SCHEMA: &str = "https://json.schemastore.org/sarif-2.1.0.json";

/// Relative paths as URI references: forward slashes, a few characters
/// escaped.
fn uri(path: &str) -> String {
    let mut out = String::with_capacity(path.len());
    for c in path.replace('\\', "/").chars() {
        match c {
            ' ' => out.push_str("%20"),
            '%' => out.push_str("%25"),
            '#' => out.push_str("%23"),
            '?' => out.push_str("%3F"),
            '<' => out.push_str("%3C"),
            '>' => out.push_str("%3E"),
            c => out.push(c),
        }
    }
    out
}

fn region(span: &Span) -> Value {
    json!({
        "startLine": span.start_line.max(1),
        "startColumn": span.start_col.max(1),
        "endLine": span.end_line.max(span.start_line).max(1),
        "endColumn": span.end_col.max(1),
    })
}

fn physical(path: &str, span: &Span) -> Value {
    json!({ "artifactLocation": { "uri": uri(path) }, "region": region(span) })
}

fn rules() -> Vec<Value> {
    catalogue()
        .iter()
        .map(|r| {
            let mut tags: Vec<String> = vec!["security".into()];
            tags.extend(r.cwe.iter().map(|c| format!("external/cwe/{}", c.id.to_lowercase())));
            json!({
                "id": r.id.to_string(),
                "name": r.slug,
                "shortDescription": { "text": r.name },
                "fullDescription": { "text": r.description },
                "help": { "text": r.hint },
                "defaultConfiguration": { "level": r.severity.sarif_level() },
                "properties": {
                    "tags": tags,
                    "cwe": r.cwe_ids(),
                    "owasp": r.owasp,
                    "tier": r.tier,
                },
            })
        })
        .collect()
}

fn result(f: &Finding, suppressed: bool) -> Value {
    let mut r = json!({
        "ruleId": f.rule_id.to_string(),
        "ruleIndex": f.rule_id.number() as usize - 1,
        "level": f.severity.sarif_level(),
        "message": { "text": f.message },
        "locations": [ { "physicalLocation": physical(&f.path, &f.span) } ],
        "partialFingerprints": { "jssecFingerprint/v1": f.fingerprint },
        "properties": {
            "cwe": f.cwe_ids,
            "owasp": f.owasp_category,
            "hint": f.hint,
        },
    });
    if let Some(sub) = &f.subcode {
        r["properties"]["subcode"] = json!(sub);
    }
    if !f.notes.is_empty() {
        r["properties"]["notes"] = json!(f.notes);
    }
    if !f.chain.is_empty() {
        let locations: Vec<Value> = f
            .chain
            .iter()
            .map(|step| {
                json!({
                    "location": {
                        "physicalLocation": physical(&f.path, &step.span),
                        "message": { "text": step.description },
                    },
                    "kinds": [ format!("{:?}", step.role).to_lowercase() ],
                })
            })
            .collect();
        r["codeFlows"] = json!([ { "threadFlows": [ { "locations": locations } ] } ]);
    }
    if suppressed {
        r["suppressions"] = json!([ { "kind": "inSource" } ]);
    }
    r
}

/// A SARIF 2.1.0 log with one run.
pub fn render_sarif(result_set: &AnalysisResult, options: RenderOptions) -> String {
    let mut results: Vec<Value> = result_set.findings.iter().map(|f| result(f, false)).collect();
    if options.show_suppressed {
        results.extend(result_set.suppressed.iter().map(|f| result(f, true)));
    }
    let notifications: Vec<Value> = result_set
        .diagnostics
        .iter()
        .filter(|d| d.severity > Severity::Info || d.kind == DiagnosticKind::ParseError)
        .map(|d| {
            let mut n = json!({
                "level": d.severity.sarif_level(),
                "message": { "text": d.message },
                "descriptor": { "id": serde_json::to_value(d.kind).expect("kind serializes") },
            });
            if let Some(span) = &d.span {
                n["locations"] = json!([ { "physicalLocation": physical(&d.path, span) } ]);
            }
            n
        })
        .collect();
    let log = json!({
        "$schema": SARIF_SCHEMA,
        "version": "2.1.0",
        "runs": [ {
            "tool": { "driver": {
                "name": TOOL_NAME,
                "version": TOOL_VERSION,
                "rules": rules(),
            } },
            "invocations": [ {
                "executionSuccessful": !result_set.has_rule_crash(),
                "toolExecutionNotifications": notifications,
            } ],
            "results": results,
            "properties": { "configDigest": result_set.config_digest },
        } ],
    });
    let mut text = serde_json::to_string_pretty(&log).expect("sarif serializes");
    text.push('\n');
    text
}
