//! Analyzer configuration: rule enablement, thresholds, pattern lists and
//! path scoping, merged from defaults and an optional JSON file.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use globset::{Glob, GlobSet, GlobSetBuilder};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::mapping::{RuleId, Tier};
use crate::patterns::{NameMatcher, PathMatcher, PathMode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ThresholdSource {
    /// A published industry limit.
    Cited,
    /// A conventional default, or any user override.
    Default,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Threshold {
    pub name: String,
    pub value: u32,
    pub source: ThresholdSource,
    /// Built-in value before any override.
    pub default_value: u32,
}

/// Threshold names and built-in values. Findings fire when a measurement
/// is strictly greater than the threshold.
pub const THRESHOLDS: &[(&str, u32, ThresholdSource)] = &[
    ("large_object", 20, ThresholdSource::Default),
    ("function_loc", 50, ThresholdSource::Default),
    ("file_loc", 1000, ThresholdSource::Cited),
    ("params", 5, ThresholdSource::Default),
    ("callbacks", 3, ThresholdSource::Default),
    ("globals", 10, ThresholdSource::Default),
    ("prototype_chain", 7, ThresholdSource::Cited),
    ("dom_calls", 5, ThresholdSource::Default),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    All,
    Client,
    Server,
}

impl FromStr for Profile {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "all" => Ok(Profile::All),
            "client" => Ok(Profile::Client),
            "server" => Ok(Profile::Server),
            other => Err(format!("unknown profile `{other}` (expected all, client or server)")),
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Profile::All => "all",
            Profile::Client => "client",
            Profile::Server => "server",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PatternList {
    pub name: String,
    pub entries: Vec<String>,
}

/// Built-in pattern lists.
pub const PATTERN_LISTS: &[(&str, &[&str])] = &[
    (
        "sensitive_names",
        &[
            "user",
            "username",
            "uname",
            "password",
            "passwd",
            "pwd",
            "key",
            "secret",
            "token",
            "apikey",
            "credential",
            "credentials",
            "passphrase",
            "privatekey",
            "accesskey",
            "clientsecret",
            "authtoken",
        ],
    ),
    (
        "sensitive_allowlist",
        &[
            "passwordField",
            "passwordInput",
            "passwordLabel",
            "keyCode",
            "keyName",
            "keyPath",
            "primaryKey",
            "foreignKey",
            "publicKey",
            "sortKey",
            "cacheKey",
            "storageKey",
            "tokenType",
        ],
    ),
    ("secret_placeholders", &["", "changeme", "TODO", "xxx", "password", "<password>", "your-password"]),
    (
        "weak_algorithms",
        &[
            "AES-ECB",
            "DES",
            "RC2",
            "RC4",
            "MD2",
            "MD4",
            "MD5",
            "MD6",
            "HAVAL-128",
            "HMAC-MD5",
            "DSA",
            "RIPEMD",
            "RIPEMD-128",
            "RIPEMD-160",
            "SHA-1",
        ],
    ),
    (
        "crypto_sinks",
        &[
            "createHash",
            "createHmac",
            "createCipher",
            "createCipheriv",
            "createDecipher",
            "createDecipheriv",
            "createSign",
            "createVerify",
            "subtle.digest",
            "subtle.encrypt",
            "subtle.decrypt",
            "subtle.importKey",
            "subtle.generateKey",
            "subtle.sign",
            "subtle.verify",
            "pbkdf2",
            "pbkdf2Sync",
        ],
    ),
    ("crypto_namespaces", &["CryptoJS", "forge.md", "sjcl.hash"]),
    (
        "debug_calls",
        &["console.log", "console.debug", "console.error", "console.info", "console.trace", "console.dir", "alert"],
    ),
    ("logger_calls", &["console.*"]),
    (
        "taint_sources",
        &[
            "location",
            "document.location",
            "document.URL",
            "document.documentURI",
            "document.baseURI",
            "document.referrer",
            "document.cookie",
            "window.name",
            "req.query",
            "req.params",
            "req.body",
            "req.headers",
            "req.cookies",
            "req.files",
            "req.file",
            "request.query",
            "request.params",
            "request.body",
            "request.headers",
        ],
    ),
    (
        "sanitizers",
        &[
            "/^(sanitize|escape|encode|validate|clean|purify)/",
            "filterXSS",
            "xss",
            "basename",
            "parseInt",
            "parseFloat",
            "Number",
        ],
    ),
    (
        "fs_sinks",
        &[
            "readFile",
            "readFileSync",
            "writeFile",
            "writeFileSync",
            "appendFile",
            "appendFileSync",
            "createReadStream",
            "createWriteStream",
            "unlink",
            "unlinkSync",
            "rename",
            "renameSync",
            "mkdir",
            "mkdirSync",
            "rm",
            "rmSync",
            "rmdir",
            "rmdirSync",
            "open",
            "openSync",
            "copyFile",
            "copyFileSync",
            "sendFile",
            "download",
            "mv",
        ],
    ),
    ("upload_fields", &["originalname", "originalName", "file.name", "files.name", "upload.name", "file.type"]),
    (
        "response_sinks",
        &[
            "res.send",
            "res.json",
            "res.end",
            "res.write",
            "res.jsonp",
            "response.send",
            "response.json",
            "response.end",
            "response.write",
            "reply.send",
        ],
    ),
    (
        "redirect_targets",
        &[
            "location",
            "location.href",
            "document.location",
            "document.location.href",
            "top.location",
            "top.location.href",
        ],
    ),
    ("redirect_calls", &["location.assign", "location.replace", "res.redirect", "response.redirect", "reply.redirect"]),
    ("safe_hosts", &["localhost", "127.0.0.1", "[::1]", "www.w3.org"]),
];

pub const DEFAULT_PATH_EXCLUDES: &[&str] = &["**/node_modules/**", "**/dist/**", "**/*.min.js"];
pub const DEFAULT_DEV_PATHS: &[&str] =
    &["**/tests/**", "**/test/**", "**/__tests__/**", "**/*.test.js", "**/*.spec.js"];

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("config is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

fn invalid(msg: impl Into<String>) -> ConfigError {
    ConfigError::Invalid(msg.into())
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalyzerConfig {
    pub enabled_rules: BTreeSet<RuleId>,
    pub thresholds: BTreeMap<String, Threshold>,
    pub pattern_lists: BTreeMap<String, PatternList>,
    pub profile: Profile,
    pub path_excludes: Vec<String>,
    /// Paths where active-debugging findings are not reported.
    pub dev_paths: Vec<String>,
    pub strict_parse: bool,
    pub strict_http: bool,
    pub include_minified: bool,
    /// Unknown keys and similar non-fatal problems found while loading.
    #[serde(skip)]
    pub warnings: Vec<String>,
}

impl Default for AnalyzerConfig {
    fn default() -> Self {
        AnalyzerConfig {
            enabled_rules: RuleId::all().collect(),
            thresholds: THRESHOLDS
                .iter()
                .map(|&(name, value, source)| {
                    (name.to_string(), Threshold { name: name.to_string(), value, source, default_value: value })
                })
                .collect(),
            pattern_lists: PATTERN_LISTS
                .iter()
                .map(|&(name, entries)| {
                    let list = PatternList {
                        name: name.to_string(),
                        entries: entries.iter().map(|e| e.to_string()).collect(),
                    };
                    (name.to_string(), list)
                })
                .collect(),
            profile: Profile::All,
            path_excludes: DEFAULT_PATH_EXCLUDES.iter().map(|s| s.to_string()).collect(),
            dev_paths: DEFAULT_DEV_PATHS.iter().map(|s| s.to_string()).collect(),
            strict_parse: false,
            strict_http: false,
            include_minified: false,
            warnings: Vec::new(),
        }
    }
}

const TOP_LEVEL_KEYS: &[&str] = &[
    "rules",
    "thresholds",
    "patterns",
    "profile",
    "path_excludes",
    "dev_paths",
    "strict_parse",
    "strict_http",
    "include_minified",
];

/// Load a config file, or the defaults when `path` is `None`.
pub fn load_config(path: Option<&Path>) -> Result<AnalyzerConfig, ConfigError> {
    match path {
        None => Ok(AnalyzerConfig::default()),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
            AnalyzerConfig::from_json_str(&text)
        }
    }
}

impl AnalyzerConfig {
    pub fn from_json_str(text: &str) -> Result<Self, ConfigError> {
        let value: Value = serde_json::from_str(text)?;
        let mut cfg = AnalyzerConfig::default();
        cfg.merge(&value)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Deep-merge a parsed config document into `self`.
    pub fn merge(&mut self, doc: &Value) -> Result<(), ConfigError> {
        let obj = doc.as_object().ok_or_else(|| invalid("top level must be an object"))?;
        for key in obj.keys() {
            if !TOP_LEVEL_KEYS.contains(&key.as_str()) {
                self.warnings.push(format!("unknown config key `{key}`"));
            }
        }
        if let Some(rules) = obj.get("rules") {
            let rules = rules.as_object().ok_or_else(|| invalid("`rules` must be an object"))?;
            for (id, enabled) in rules {
                let rule: RuleId = id.parse().map_err(|e| invalid(format!("{e} in `rules`")))?;
                let enabled =
                    enabled.as_bool().ok_or_else(|| invalid(format!("`rules.{id}` must be true or false")))?;
                if enabled {
                    self.enabled_rules.insert(rule);
                } else {
                    self.enabled_rules.remove(&rule);
                }
            }
        }
        if let Some(thresholds) = obj.get("thresholds") {
            let thresholds = thresholds.as_object().ok_or_else(|| invalid("`thresholds` must be an object"))?;
            for (name, value) in thresholds {
                let value = value
                    .as_u64()
                    .filter(|v| *v > 0 && *v <= u32::MAX as u64)
                    .ok_or_else(|| invalid(format!("`thresholds.{name}` must be a positive integer")))?;
                if !self.thresholds.contains_key(name) {
                    self.warnings.push(format!("unknown threshold `{name}`"));
                    continue;
                }
                self.set_threshold(name, value as u32);
            }
        }
        if let Some(patterns) = obj.get("patterns") {
            let patterns = patterns.as_object().ok_or_else(|| invalid("`patterns` must be an object"))?;
            for (name, spec) in patterns {
                let Some(list) = self.pattern_lists.get_mut(name) else {
                    self.warnings.push(format!("unknown pattern list `{name}`"));
                    continue;
                };
                list.entries = merge_list(&list.entries, spec, &format!("patterns.{name}"))?;
            }
        }
        if let Some(profile) = obj.get("profile") {
            let profile = profile.as_str().ok_or_else(|| invalid("`profile` must be a string"))?;
            self.profile = profile.parse().map_err(invalid)?;
        }
        if let Some(spec) = obj.get("path_excludes") {
            self.path_excludes = merge_list(&self.path_excludes, spec, "path_excludes")?;
        }
        if let Some(spec) = obj.get("dev_paths") {
            self.dev_paths = merge_list(&self.dev_paths, spec, "dev_paths")?;
        }
        for (key, slot) in [
            ("strict_parse", &mut self.strict_parse),
            ("strict_http", &mut self.strict_http),
            ("include_minified", &mut self.include_minified),
        ] {
            if let Some(v) = obj.get(key) {
                *slot = v.as_bool().ok_or_else(|| invalid(format!("`{key}` must be true or false")))?;
            }
        }
        Ok(())
    }

    /// Check every pattern compiles and every list that needs entries has some.
    pub fn validate(&self) -> Result<(), ConfigError> {
        for list in self.pattern_lists.values() {
            if list.entries.is_empty() && list.name != "secret_placeholders" && list.name != "sensitive_allowlist" {
                return Err(invalid(format!("pattern list `{}` is empty", list.name)));
            }
            NameMatcher::new(&list.entries)
                .map_err(|e| invalid(format!("bad regular expression in `{}`: {e}", list.name)))?;
        }
        build_globset(&self.path_excludes).map_err(|e| invalid(format!("bad glob in `path_excludes`: {e}")))?;
        build_globset(&self.dev_paths).map_err(|e| invalid(format!("bad glob in `dev_paths`: {e}")))?;
        Ok(())
    }

    /// Override a threshold. Overridden values are tagged [`ThresholdSource::Default`].
    pub fn set_threshold(&mut self, name: &str, value: u32) {
        if let Some(t) = self.thresholds.get_mut(name) {
            t.value = value;
            t.source = ThresholdSource::Default;
        }
    }

    pub fn threshold(&self, name: &str) -> u32 {
        self.thresholds.get(name).map_or(u32::MAX, |t| t.value)
    }

    pub fn list(&self, name: &str) -> &[String] {
        self.pattern_lists.get(name).map_or(&[], |l| l.entries.as_slice())
    }

    /// Whether a rule runs under the current enablement and profile.
    pub fn is_active(&self, rule: RuleId) -> bool {
        if !self.enabled_rules.contains(&rule) {
            return false;
        }
        match self.profile {
            Profile::All => true,
            Profile::Client => rule.info().tier != Tier::Server,
            Profile::Server => !matches!(rule, RuleId::JS_HTML_COUPLING | RuleId::CROSS_ORIGIN),
        }
    }

    /// Stable digest of the effective configuration.
    pub fn digest(&self) -> String {
        let value = serde_json::to_value(self).expect("config serializes");
        let mut hasher = Sha256::new();
        hasher.update(value.to_string());
        hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn matchers(&self) -> Matchers {
        Matchers::build(self)
    }
}

fn merge_list(current: &[String], spec: &Value, what: &str) -> Result<Vec<String>, ConfigError> {
    let (mode, entries) = match spec {
        Value::Array(items) => ("extend", items),
        Value::Object(obj) => {
            let mode = obj.get("mode").and_then(Value::as_str).unwrap_or("extend");
            let entries = obj
                .get("entries")
                .and_then(Value::as_array)
                .ok_or_else(|| invalid(format!("`{what}.entries` must be an array")))?;
            (mode, entries)
        }
        _ => return Err(invalid(format!("`{what}` must be an array or an object with `mode` and `entries`"))),
    };
    let entries: Vec<String> = entries
        .iter()
        .map(|e| e.as_str().map(str::to_string).ok_or_else(|| invalid(format!("`{what}` entries must be strings"))))
        .collect::<Result<_, _>>()?;
    match mode {
        "extend" => {
            let mut out = current.to_vec();
            for e in entries {
                if !out.contains(&e) {
                    out.push(e);
                }
            }
            Ok(out)
        }
        "replace" => Ok(entries),
        other => Err(invalid(format!("`{what}.mode` must be \"extend\" or \"replace\", not \"{other}\""))),
    }
}

pub(crate) fn build_globset(patterns: &[String]) -> Result<GlobSet, globset::Error> {
    let mut builder = GlobSetBuilder::new();
    for p in patterns {
        builder.add(Glob::new(p)?);
    }
    builder.build()
}

/// Compiled form of the pattern lists, built once per run.
#[derive(Clone, Debug)]
pub struct Matchers {
    pub sensitive_names: NameMatcher,
    pub sensitive_allowlist: NameMatcher,
    pub secret_placeholders: Vec<String>,
    pub weak_algorithms: Vec<String>,
    pub crypto_sinks: PathMatcher,
    pub crypto_namespaces: PathMatcher,
    pub debug_calls: PathMatcher,
    pub logger_calls: PathMatcher,
    pub taint_sources: PathMatcher,
    pub sanitizers: NameMatcher,
    pub fs_sinks: NameMatcher,
    pub upload_fields: PathMatcher,
    pub response_sinks: PathMatcher,
    pub redirect_targets: PathMatcher,
    pub redirect_calls: PathMatcher,
    pub safe_hosts: Vec<String>,
    pub dev_paths: GlobSet,
    pub path_excludes: GlobSet,
}

impl Matchers {
    /// Panics only if the config was not validated.
    pub fn build(cfg: &AnalyzerConfig) -> Matchers {
        let names = |n: &str| NameMatcher::new(cfg.list(n)).expect("validated pattern list");
        let paths = |mode, n: &str| PathMatcher::new(mode, cfg.list(n));
        Matchers {
            sensitive_names: names("sensitive_names"),
            sensitive_allowlist: names("sensitive_allowlist"),
            secret_placeholders: cfg.list("secret_placeholders").iter().map(|s| s.to_lowercase()).collect(),
            weak_algorithms: cfg.list("weak_algorithms").to_vec(),
            crypto_sinks: paths(PathMode::Suffix, "crypto_sinks"),
            crypto_namespaces: paths(PathMode::Prefix, "crypto_namespaces"),
            debug_calls: paths(PathMode::Exact, "debug_calls"),
            logger_calls: paths(PathMode::Exact, "logger_calls"),
            taint_sources: paths(PathMode::Prefix, "taint_sources"),
            sanitizers: names("sanitizers"),
            fs_sinks: names("fs_sinks"),
            upload_fields: paths(PathMode::Suffix, "upload_fields"),
            response_sinks: paths(PathMode::Ends, "response_sinks"),
            redirect_targets: paths(PathMode::Exact, "redirect_targets"),
            redirect_calls: paths(PathMode::Suffix, "redirect_calls"),
            safe_hosts: cfg.list("safe_hosts").iter().map(|s| s.to_lowercase()).collect(),
            dev_paths: build_globset(&cfg.dev_paths).expect("validated globs"),
            path_excludes: build_globset(&cfg.path_excludes).expect("validated globs"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_enable_everything() {
        let cfg = load_config(None).unwrap();
        assert_eq!(cfg.enabled_rules.len(), 24);
        assert_eq!(cfg.threshold("file_loc"), 1000);
        assert_eq!(cfg.thresholds["prototype_chain"].source, ThresholdSource::Cited);
        assert_eq!(cfg.thresholds["function_loc"].source, ThresholdSource::Default);
    }

    #[test]
    fn threshold_override_is_default_sourced() {
        let cfg = AnalyzerConfig::from_json_str(r#"{"thresholds":{"function_loc":100,"file_loc":2000}}"#).unwrap();
        assert_eq!(cfg.threshold("function_loc"), 100);
        assert_eq!(cfg.thresholds["file_loc"].source, ThresholdSource::Default);
        assert_eq!(cfg.thresholds["file_loc"].default_value, 1000);
    }

    #[test]
    fn unknown_rule_is_an_error() {
        let err = AnalyzerConfig::from_json_str(r#"{"rules":{"JSSEC-999":true}}"#).unwrap_err();
        assert!(err.to_string().contains("JSSEC-999"));
    }

    #[test]
    fn unknown_keys_are_warnings() {
        let cfg = AnalyzerConfig::from_json_str(r#"{"colour":"red","thresholds":{"depth":3}}"#).unwrap();
        assert_eq!(cfg.warnings.len(), 2);
    }

    #[test]
    fn malformed_values_are_errors() {
        for doc in [
            "[1]",
            "{not json",
            r#"{"thresholds":{"params":0}}"#,
            r#"{"rules":{"JSSEC-001":"yes"}}"#,
            r#"{"patterns":{"sanitizers":{"mode":"replace","entries":["/(/"]}}}"#,
            r#"{"patterns":{"fs_sinks":{"mode":"replace","entries":[]}}}"#,
            r#"{"patterns":{"fs_sinks":{"mode":"merge","entries":["x"]}}}"#,
            r#"{"profile":"desktop"}"#,
        ] {
            assert!(AnalyzerConfig::from_json_str(doc).is_err(), "{doc}");
        }
    }

    #[test]
    fn lists_extend_or_replace() {
        let cfg = AnalyzerConfig::from_json_str(
            r#"{"patterns":{"logger_calls":["logger.*"],"debug_calls":{"mode":"replace","entries":["alert"]}}}"#,
        )
        .unwrap();
        assert_eq!(cfg.list("logger_calls"), ["console.*", "logger.*"]);
        assert_eq!(cfg.list("debug_calls"), ["alert"]);
    }

    #[test]
    fn profiles_gate_rules() {
        let mut cfg = AnalyzerConfig { profile: Profile::Client, ..Default::default() };
        assert!(!cfg.is_active(RuleId::ERROR_DISCLOSURE));
        assert!(cfg.is_active(RuleId::JS_HTML_COUPLING));
        cfg.profile = Profile::Server;
        assert!(cfg.is_active(RuleId::ERROR_DISCLOSURE));
        assert!(!cfg.is_active(RuleId::JS_HTML_COUPLING));
        assert!(cfg.is_active(RuleId::PROTOTYPE_POLLUTION));
    }

    #[test]
    fn digest_tracks_content() {
        let a = AnalyzerConfig::default();
        let mut b = AnalyzerConfig::default();
        assert_eq!(a.digest(), b.digest());
        b.set_threshold("params", 9);
        assert_ne!(a.digest(), b.digest());
    }
}
