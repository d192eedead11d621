//! End-to-end behavior of the `jssec` command.

mod common;

use std::fs;
use std::path::Path;

use common::*;
use jssec::{EXIT_CLEAN, EXIT_CONFIG, EXIT_FINDINGS, EXIT_USAGE};

fn write(dir: &Path, rel: &str, text: &str) {
    let path = dir.join(rel);
    fs::create_dir_all(path.parent().unwrap()).unwrap();
    fs::write(path, text).unwrap();
}

fn paths(doc: &serde_json::Value) -> Vec<String> {
    doc["findings"].as_array().unwrap().iter().map(|f| f["path"].as_str().unwrap().to_string()).collect()
}

#[test]
fn clean_dir_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a.js", "const total = add(1, 2);\nshow(total);\n");
    let out = cli_in(dir.path(), &["."], "");
    assert_eq!(out.code, EXIT_CLEAN, "{}", out.stdout);
    assert!(out.stdout.contains("0 findings in 1 file"));
}

#[test]
fn one_eval_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a.js", "eval(code);\n");
    let out = cli_in(dir.path(), &["-f", "json", "a.js"], "");
    assert_eq!(out.code, EXIT_FINDINGS);
    assert_eq!(json(&out)["findings"].as_array().unwrap().len(), 1);
}

#[test]
fn usage_errors_exit_two() {
    let out = cli(&["--no-such-flag"]);
    assert_eq!(out.code, EXIT_USAGE);
    assert!(out.stderr.contains("Usage"));
    assert!(out.stdout.is_empty());
    assert_eq!(cli(&[]).code, EXIT_USAGE);
    assert_eq!(cli(&["missing/dir"]).code, EXIT_USAGE);
    assert_eq!(cli(&["-f", "xml", "."]).code, EXIT_USAGE);
    assert_eq!(cli(&["--explain", "JSSEC-099"]).code, EXIT_USAGE);
}

#[test]
fn config_errors_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a.js", "eval(code);\n");
    write(dir.path(), "bad.json", "{ not json");
    write(dir.path(), "unknown.json", r#"{"rules": {"JSSEC-999": false}}"#);
    write(dir.path(), "zero.json", r#"{"thresholds": {"params": 0}}"#);
    for cfg in ["bad.json", "unknown.json", "zero.json", "absent.json"] {
        let out = cli_in(dir.path(), &["-c", cfg, "a.js"], "");
        assert_eq!(out.code, EXIT_CONFIG, "{cfg}: {}", out.stderr);
        assert!(out.stderr.starts_with("error:"));
    }
}

#[test]
fn config_file_applies() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a.js", "eval(code);\nfunction f(a, b, c) { return a + b + c; }\nf();\n");
    write(dir.path(), "cfg.json", r#"{"rules": {"JSSEC-009": false}, "thresholds": {"params": 2}, "colour": true}"#);
    let out = cli_in(dir.path(), &["-f", "json", "-c", "cfg.json", "a.js"], "");
    let rules: Vec<String> = reported(&json(&out)).into_iter().map(|(_, r)| r).collect();
    assert_eq!(rules, ["JSSEC-003"]);
    assert!(out.stderr.contains("warning: config:"), "unknown key is reported: {}", out.stderr);
}

#[test]
fn fail_level_and_suppressions_drive_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "warn.js", "switch (x) { case 1: break; }\n");
    write(dir.path(), "quiet.js", "eval(x); // jssec-disable-line JSSEC-009 reason: sandboxed\n");
    assert_eq!(cli_in(dir.path(), &["warn.js"], "").code, EXIT_FINDINGS);
    assert_eq!(cli_in(dir.path(), &["--fail-level", "error", "warn.js"], "").code, EXIT_CLEAN);
    let quiet = cli_in(dir.path(), &["quiet.js"], "");
    assert_eq!(quiet.code, EXIT_CLEAN);
    let shown = cli_in(dir.path(), &["--show-suppressed", "quiet.js"], "");
    assert_eq!(shown.code, EXIT_CLEAN);
    assert!(shown.stdout.contains("(suppressed)"));
}

#[test]
fn list_rules_prints_table() {
    let out = cli(&["--list-rules"]);
    assert_eq!(out.code, EXIT_CLEAN);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines.len(), 25);
    assert_eq!(lines[0], "ID\tSMELL\tCWE\tOWASP");
    assert_eq!(
        lines[10],
        "JSSEC-010\tMissing Default in Case Statement\tCWE-478\tInsecure Direct Object References, Injection"
    );
}

#[test]
fn explain_prototype_pollution() {
    let out = cli(&["--explain", "JSSEC-019"]);
    assert_eq!(out.code, EXIT_CLEAN);
    assert!(out.stdout.contains("Prototype Pollution"));
    assert!(out.stdout.contains("CWE-1321"));
    assert!(out.stdout.contains("Cross-Site Scripting"));
    assert!(out.stdout.contains("Object.freeze(Object.prototype)"));
}

#[test]
fn stdin_is_one_unit() {
    let dir = tempfile::tempdir().unwrap();
    let out = cli_in(dir.path(), &["-f", "json", "-"], "debugger;\n");
    assert_eq!(paths(&json(&out)), ["<stdin>"]);
}

#[test]
fn discovery_order_and_excludes() {
    let dir = tempfile::tempdir().unwrap();
    for rel in
        ["b.html", "a.js", "src/c.mjs", "node_modules/pkg/index.js", "dist/bundle.js", "lib/x.min.js", "notes.txt"]
    {
        let text = if rel.ends_with(".html") { "<script>debugger;</script>\n" } else { "debugger;\n" };
        write(dir.path(), rel, text);
    }
    let doc = json(&cli_in(dir.path(), &["-f", "json", "."], ""));
    assert_eq!(paths(&doc), ["a.js", "b.html", "src/c.mjs"]);
    assert_eq!(doc["stats"]["files"], 3);
    let globbed = json(&cli_in(dir.path(), &["-f", "json", "src/**/*.mjs"], ""));
    assert_eq!(paths(&globbed), ["src/c.mjs"]);
    let explicit = json(&cli_in(dir.path(), &["-f", "json", "node_modules/pkg/index.js"], ""));
    assert_eq!(paths(&explicit), ["node_modules/pkg/index.js"]);
    assert_eq!(cli_in(dir.path(), &["notes.txt"], "").code, EXIT_USAGE);
}

#[test]
fn large_bundle_is_skipped() {
    let dir = tempfile::tempdir().unwrap();
    let bundle = "var a = 1;\n".repeat(6 * 1024 * 1024 / 11 + 1);
    write(dir.path(), "bundle.js", &bundle);
    let out = cli_in(dir.path(), &["bundle.js"], "");
    assert_eq!(out.code, EXIT_CLEAN);
    assert!(out.stdout.contains("skipped"), "{}", out.stdout);
    assert!(out.stdout.contains("--include-minified"));
    let doc = json(&cli_in(dir.path(), &["-f", "json", "bundle.js"], ""));
    assert_eq!(doc["skipped"][0]["kind"], "minified");
}

#[test]
fn strict_parse_fails_on_syntax_errors() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "broken.js", "function (\n");
    let lenient = cli_in(dir.path(), &["broken.js"], "");
    assert_eq!(lenient.code, EXIT_CLEAN);
    assert!(lenient.stdout.contains("skipped"));
    assert_eq!(cli_in(dir.path(), &["--strict-parse", "broken.js"], "").code, EXIT_FINDINGS);
}

#[test]
fn stdout_is_byte_identical() {
    for format in ["text", "json", "sarif"] {
        let a = cli(&["-f", format, "--color", "never", "."]);
        let b = cli(&["-f", format, "--color", "never", "."]);
        let seq = cli(&["-f", format, "--color", "never", "--sequential", "."]);
        assert_eq!(a.stdout, b.stdout, "{format}");
        assert_eq!(a.stdout, seq.stdout, "{format}");
    }
}

#[test]
fn baseline_hides_known_findings() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a.js", "eval(a);\n");
    let old = cli_in(dir.path(), &["-f", "json", "a.js"], "");
    write(dir.path(), "baseline.json", &old.stdout);
    write(dir.path(), "a.js", "eval(a);\neval(b);\n");
    let out = cli_in(dir.path(), &["-f", "json", "--baseline", "baseline.json", "a.js"], "");
    assert_eq!(reported(&json(&out)).into_iter().collect::<Vec<_>>(), [(2, "JSSEC-009".to_string())]);
    write(dir.path(), "junk.json", "[]");
    assert_eq!(cli_in(dir.path(), &["--baseline", "junk.json", "a.js"], "").code, EXIT_USAGE);
}

#[test]
fn colors_only_when_asked() {
    let always = cli(&["--color", "always", "JSSEC-009"]);
    let never = cli(&["--color", "never", "JSSEC-009"]);
    assert!(always.stdout.contains("\x1b["));
    assert!(!never.stdout.contains("\x1b["));
}

#[test]
fn sarif_for_fixture_corpus_is_valid() {
    let out = cli(&["-f", "sarif", "."]);
    let doc: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(schema_errors(&sarif_schema(), &doc), Vec::<String>::new());
    let json_doc = json(&cli(&["-f", "json", "."]));
    assert_eq!(doc["runs"][0]["results"].as_array().unwrap().len(), json_doc["findings"].as_array().unwrap().len());
}
