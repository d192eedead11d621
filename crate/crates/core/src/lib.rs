//! Rule engine for JavaScript security smells: configuration, metrics,
//! the 24 rules, parallel orchestration and report rendering.

pub mod config;
pub mod engine;
pub mod finding;
pub mod frontend;
pub mod mapping;
pub mod metrics;
pub mod patterns;
pub mod report;
pub mod rules;
pub mod suppress;
pub mod taint;
