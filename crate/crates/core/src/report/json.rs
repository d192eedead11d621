use serde_json::{json, Value};

use super::{RenderOptions, TOOL_NAME, TOOL_VERSION};
use crate::engine::AnalysisResult;

pub const JSON_SCHEMA_VERSION: &str = "1.0";

/// One JSON document with sorted keys, byte-stable for identical input.
pub fn render_json(result: &AnalysisResult, options: RenderOptions) -> String {
    let mut doc = json!({
        "schema_version": JSON_SCHEMA_VERSION,
        "tool": { "name": TOOL_NAME, "version": TOOL_VERSION },
        "config_digest": result.config_digest,
        "findings": result.findings,
        "skipped": result.skipped,
        "diagnostics": result.diagnostics,
        "external_scripts": result.external_scripts,
        "stats": result.stats,
    });
    if options.show_suppressed {
        doc["suppressed"] = serde_json::to_value(&result.suppressed).expect("findings serialize");
    }
    let mut text = serde_json::to_string_pretty(&sorted(doc)).expect("report serializes");
    text.push('\n');
    text
}

fn sorted(v: Value) -> Value {
    match v {
        Value::Object(map) => {
            // Sort explicitly: another crate may switch serde_json to insertion order.
            let mut entries: Vec<_> = map.into_iter().map(|(k, v)| (k, sorted(v))).collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            Value::Object(entries.into_iter().collect())
        }
        Value::Array(items) => Value::Array(items.into_iter().map(sorted).collect()),
        other => other,
    }
}
