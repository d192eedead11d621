//! The rule catalogue: one entry per smell with its CWE and OWASP mapping,
//! default severity and refactoring hint. Loaded once from `data/rules.json`.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::finding::Severity;

/// `JSSEC-001` .. `JSSEC-024`, numbered after the smell catalogue.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RuleId(u8);

impl RuleId {
    pub const COUNT: usize = 24;

    pub const LARGE_OBJECT: RuleId = RuleId(1);
    pub const LONG_FUNCTION: RuleId = RuleId(2);
    pub const LONG_PARAMETER_LIST: RuleId = RuleId(3);
    pub const EMPTY_CATCH: RuleId = RuleId(4);
    pub const DEAD_CODE: RuleId = RuleId(5);
    pub const NESTED_CALLBACK: RuleId = RuleId(6);
    pub const EXCESSIVE_GLOBALS: RuleId = RuleId(7);
    pub const HARDCODED_SECRETS: RuleId = RuleId(8);
    pub const DYNAMIC_CODE: RuleId = RuleId(9);
    pub const MISSING_DEFAULT: RuleId = RuleId(10);
    pub const JS_HTML_COUPLING: RuleId = RuleId(11);
    pub const CROSS_ORIGIN: RuleId = RuleId(12);
    pub const ACTIVE_DEBUGGING: RuleId = RuleId(13);
    pub const INSECURE_DOM: RuleId = RuleId(14);
    pub const UNVALIDATED_REDIRECT: RuleId = RuleId(15);
    pub const JSON_INJECTION: RuleId = RuleId(16);
    pub const UNPROTECTED_COOKIES: RuleId = RuleId(17);
    pub const LONG_PROTOTYPE_CHAIN: RuleId = RuleId(18);
    pub const PROTOTYPE_POLLUTION: RuleId = RuleId(19);
    pub const WEAK_CRYPTO: RuleId = RuleId(20);
    pub const INSECURE_HTTP: RuleId = RuleId(21);
    pub const LOGGING_SENSITIVE: RuleId = RuleId(22);
    pub const INSECURE_FILE_HANDLING: RuleId = RuleId(23);
    pub const ERROR_DISCLOSURE: RuleId = RuleId(24);

    pub fn new(number: u8) -> Option<RuleId> {
        (1..=Self::COUNT as u8).contains(&number).then_some(RuleId(number))
    }

    pub fn number(self) -> u8 {
        self.0
    }

    pub fn all() -> impl Iterator<Item = RuleId> {
        (1..=Self::COUNT as u8).map(RuleId)
    }

    pub fn info(self) -> &'static RuleInfo {
        &catalogue()[self.0 as usize - 1]
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "JSSEC-{:03}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown rule id `{0}`")]
pub struct UnknownRule(pub String);

impl FromStr for RuleId {
    type Err = UnknownRule;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim();
        if let Some(id) = parse_numeric_id(trimmed) {
            return Ok(id);
        }
        catalogue().iter().find(|r| r.slug == trimmed).map(|r| r.id).ok_or_else(|| UnknownRule(trimmed.to_string()))
    }
}

impl Serialize for RuleId {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RuleId {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    Shared,
    Client,
    Server,
}

#[derive(Clone, Debug, Serialize)]
pub struct Cwe {
    pub id: String,
    pub name: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RuleInfo {
    pub id: RuleId,
    pub slug: String,
    /// Smell name as it appears in the mapping table.
    pub name: String,
    pub tier: Tier,
    pub severity: Severity,
    pub cwe: Vec<Cwe>,
    pub owasp: String,
    pub description: String,
    pub hint: String,
}

impl RuleInfo {
    pub fn cwe_ids(&self) -> Vec<String> {
        self.cwe.iter().map(|c| c.id.clone()).collect()
    }
}

#[derive(Deserialize)]
struct RawRule {
    id: String,
    slug: String,
    name: String,
    group: Tier,
    severity: Severity,
    cwe: Vec<(String, String)>,
    owasp: String,
    description: String,
    hint: String,
}

const RULES_JSON: &str = include_str!("../data/rules.json");

/// All rule entries, ordered by id.
pub fn catalogue() -> &'static [RuleInfo] {
    static TABLE: OnceLock<Vec<RuleInfo>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let raw: Vec<RawRule> = serde_json::from_str(RULES_JSON).expect("rules.json is well-formed");
        let rules: Vec<RuleInfo> = raw
            .into_iter()
            .map(|r| RuleInfo {
                id: parse_numeric_id(&r.id).expect("rule id in JSSEC-NNN form"),
                slug: r.slug,
                name: r.name,
                tier: r.group,
                severity: r.severity,
                cwe: r.cwe.into_iter().map(|(id, name)| Cwe { id, name }).collect(),
                owasp: r.owasp,
                description: r.description,
                hint: r.hint,
            })
            .collect();
        assert_eq!(rules.len(), RuleId::COUNT);
        assert!(rules.iter().enumerate().all(|(i, r)| r.id.0 as usize == i + 1));
        rules
    })
}

fn parse_numeric_id(s: &str) -> Option<RuleId> {
    let digits = s.strip_prefix("JSSEC-")?;
    if digits.len() != 3 || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok().and_then(RuleId::new)
}

/// Tab-separated listing: id, smell, CWE ids, OWASP category.
pub fn rules_table() -> String {
    let mut out = String::from("ID\tSMELL\tCWE\tOWASP\n");
    for rule in catalogue() {
        out.push_str(&format!("{}\t{}\t{}\t{}\n", rule.id, rule.name, rule.cwe_ids().join(", "), rule.owasp));
    }
    out
}

/// Long-form description used by `--explain`.
pub fn explain(id: RuleId) -> String {
    let rule = id.info();
    let mut out = format!("{} {} ({})\n\n", rule.id, rule.name, rule.slug);
    out.push_str(&rule.description);
    out.push_str("\n\nWeaknesses:\n");
    for cwe in &rule.cwe {
        out.push_str(&format!("  {} {}\n", cwe.id, cwe.name));
    }
    out.push_str(&format!("OWASP Top 10: {}\n", rule.owasp));
    out.push_str(&format!("Default severity: {}\n\n", rule.severity));
    out.push_str("How to fix:\n  ");
    out.push_str(&rule.hint);
    out.push('\n');
    out
}
