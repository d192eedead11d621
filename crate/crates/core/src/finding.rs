use std::fmt;
use std::str::FromStr;

use jssec_syntax::Span;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::mapping::RuleId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Info,
    Warning,
    Error,
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Info => "info",
            Severity::Warning => "warning",
            Severity::Error => "error",
        }
    }

    /// SARIF `level` value.
    pub fn sarif_level(self) -> &'static str {
        match self {
            Severity::Info => "note",
            Severity::Warning => "warning",
            Severity::Error => "error",
        }
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Severity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "info" | "note" => Ok(Severity::Info),
            "warning" | "warn" => Ok(Severity::Warning),
            "error" => Ok(Severity::Error),
            other => Err(format!("unknown severity `{other}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StepRole {
    Source,
    Propagation,
    Sink,
}

/// One hop of a taint chain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainStep {
    pub role: StepRole,
    pub span: Span,
    pub description: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub rule_id: RuleId,
    pub rule_name: String,
    /// Distinguishes variants reported under one rule, e.g. `implicit-global`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subcode: Option<String>,
    pub path: String,
    pub span: Span,
    pub message: String,
    pub severity: Severity,
    pub cwe_ids: Vec<String>,
    pub owasp_category: String,
    pub hint: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub chain: Vec<ChainStep>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    /// Location-independent identity used for baselines.
    pub fingerprint: String,
}

impl Finding {
    /// A finding carrying the rule's mapping and default severity.
    pub fn new(rule: RuleId, path: &str, span: Span, message: impl Into<String>) -> Self {
        let info = rule.info();
        Finding {
            rule_id: rule,
            rule_name: info.slug.clone(),
            subcode: None,
            path: path.to_string(),
            span,
            message: message.into(),
            severity: info.severity,
            cwe_ids: info.cwe_ids(),
            owasp_category: info.owasp.clone(),
            hint: info.hint.clone(),
            chain: Vec::new(),
            notes: Vec::new(),
            fingerprint: String::new(),
        }
    }

    pub fn with_subcode(mut self, code: &str) -> Self {
        self.subcode = Some(code.to_string());
        self
    }

    pub fn with_severity(mut self, severity: Severity) -> Self {
        self.severity = severity;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn with_chain(mut self, chain: Vec<ChainStep>) -> Self {
        self.chain = chain;
        self
    }

    /// Ordering used everywhere findings are listed.
    pub fn sort_key(&self) -> (&str, u32, u32, RuleId, &str, &Option<String>) {
        (&self.path, self.span.start_byte, self.span.end_byte, self.rule_id, &self.message, &self.subcode)
    }

    pub(crate) fn compute_fingerprint(&mut self, snippet: &str) {
        let normalized: String = snippet.split_whitespace().collect::<Vec<_>>().join(" ");
        let mut hasher = Sha256::new();
        hasher.update(self.rule_id.to_string());
        hasher.update([0]);
        hasher.update(self.subcode.as_deref().unwrap_or(""));
        hasher.update([0]);
        hasher.update(&self.path);
        hasher.update([0]);
        hasher.update(normalized);
        let digest = hasher.finalize();
        self.fingerprint = digest[..8].iter().map(|b| format!("{b:02x}")).collect();
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiagnosticKind {
    ParseError,
    ParseNote,
    RuleCrash,
    Suppression,
    Config,
    PrototypeCycle,
    UnknownParent,
}

/// Something the user should know about that is not a smell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub severity: Severity,
    pub path: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub span: Option<Span>,
    pub message: String,
}

impl Diagnostic {
    pub fn sort_key(&self) -> (&str, u32, DiagnosticKind, &str) {
        (&self.path, self.span.as_ref().map_or(0, |s| s.start_byte), self.kind, &self.message)
    }
}
