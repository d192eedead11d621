#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use jssec::Output;
use serde_json::Value;

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn cli_in(cwd: &Path, args: &[&str], stdin: &str) -> Output {
    let argv: Vec<String> = std::iter::once("jssec").chain(args.iter().copied()).map(String::from).collect();
    jssec::run_in(&argv, stdin, cwd)
}

pub fn cli(args: &[&str]) -> Output {
    cli_in(&fixtures(), args, "")
}

pub fn json(out: &Output) -> Value {
    serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("bad JSON ({e}): {}\n{}", out.stdout, out.stderr))
}

/// `(line, rule)` pairs from a JSON report.
pub fn reported(doc: &Value) -> BTreeSet<(u64, String)> {
    doc["findings"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| (f["span"]["start_line"].as_u64().unwrap(), f["rule_id"].as_str().unwrap().to_string()))
        .collect()
}

/// `(line, rule)` pairs from `@expect JSSEC-NNN` markers.
pub fn expected(text: &str) -> BTreeSet<(u64, String)> {
    let mut out = BTreeSet::new();
    for (i, line) in text.lines().enumerate() {
        let mut rest = line;
        while let Some(at) = rest.find("@expect ") {
            rest = &rest[at + 8..];
            let id: String = rest.chars().take_while(|c| c.is_ascii_alphanumeric() || *c == '-').collect();
            out.insert((i as u64 + 1, id));
        }
    }
    out
}

/// Rule fixture files as `(rule dir, relative path)`, sorted.
pub fn rule_fixtures() -> Vec<(String, String)> {
    let mut out = Vec::new();
    for entry in walkdir::WalkDir::new(fixtures()).sort_by_file_name() {
        let entry = entry.unwrap();
        if !entry.file_type().is_file() {
            continue;
        }
        let rel = entry.path().strip_prefix(fixtures()).unwrap().to_string_lossy().replace('\\', "/");
        if let Some((dir, _)) = rel.split_once('/') {
            if dir.starts_with("JSSEC-") {
                out.push((dir.to_string(), rel));
            }
        }
    }
    out
}

pub fn sarif_schema() -> jsonschema::JSONSchema {
    let text = include_str!("../../../core/data/sarif-schema-2.1.0.json");
    let schema: Value = serde_json::from_str(text).unwrap();
    jsonschema::JSONSchema::options().with_draft(jsonschema::Draft::Draft7).compile(&schema).unwrap()
}

pub fn schema_errors(schema: &jsonschema::JSONSchema, doc: &Value) -> Vec<String> {
    match schema.validate(doc) {
        Ok(()) => Vec::new(),
        Err(errors) => errors.map(|e| format!("{e} at {}", e.instance_path)).collect(),
    }
}
