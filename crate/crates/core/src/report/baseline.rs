use std::collections::HashSet;

use serde::Deserialize;

use crate::engine::AnalysisResult;

#[derive(Debug, thiserror::Error)]
pub enum BaselineError {
    #[error("baseline is not a jssec JSON report: {0}")]
    Parse(#[from] serde_json::Error),
}

#[derive(Deserialize)]
struct Report {
    findings: Vec<Entry>,
}

#[derive(Deserialize)]
struct Entry {
    fingerprint: String,
}

/// Drop findings whose fingerprint appears in a previous JSON report.
/// Returns how many were dropped.
pub fn apply_baseline(result: &mut AnalysisResult, baseline_json: &str) -> Result<usize, BaselineError> {
    let report: Report = serde_json::from_str(baseline_json)?;
    let known: HashSet<String> = report.findings.into_iter().map(|e| e.fingerprint).collect();
    let before = result.findings.len();
    result.findings.retain(|f| !known.contains(&f.fingerprint));
    for count in result.stats.per_rule.values_mut() {
        *count = 0;
    }
    for f in &result.findings {
        *result.stats.per_rule.entry(f.rule_id.to_string()).or_default() += 1;
    }
    result.stats.findings = result.findings.len();
    Ok(before - result.findings.len())
}
