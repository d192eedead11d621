#![allow(dead_code)]

use jssec_core::config::AnalyzerConfig;
use jssec_core::engine::{run_analysis, AnalysisInput, AnalysisResult};
use jssec_core::finding::Finding;
use jssec_core::mapping::RuleId;

pub fn analyze_files(files: &[(&str, &str)], cfg: &AnalyzerConfig) -> AnalysisResult {
    let input = AnalysisInput::from_files(files.iter().copied(), cfg);
    run_analysis(&input, cfg)
}

pub fn analyze(path: &str, src: &str) -> AnalysisResult {
    analyze_files(&[(path, src)], &AnalyzerConfig::default())
}

pub fn findings(src: &str, rule: RuleId) -> Vec<Finding> {
    analyze("app.js", src).findings.into_iter().filter(|f| f.rule_id == rule).collect()
}

pub fn count(src: &str, rule: RuleId) -> usize {
    findings(src, rule).len()
}

pub fn with_config(json: &str) -> AnalyzerConfig {
    AnalyzerConfig::from_json_str(json).expect("test config is valid")
}
