//! Rendering results as text, JSON and SARIF, plus baseline subtraction.

mod baseline;
mod json;
mod sarif;
mod text;

pub use baseline::{apply_baseline, BaselineError};
pub use json::{render_json, JSON_SCHEMA_VERSION};
pub use sarif::render_sarif;
pub use text::render_text;

use std::fmt;
use std::str::FromStr;

pub const TOOL_NAME: &str = "jssec";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Text,
    Json,
    Sarif,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "sarif" => Ok(Format::Sarif),
            other => Err(format!("unknown format `{other}` (expected text, json or sarif)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Text => "text",
            Format::Json => "json",
            Format::Sarif => "sarif",
        })
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct RenderOptions {
    pub color: bool,
    /// Include suppressed findings, marked as such.
    pub show_suppressed: bool,
}

pub fn render(result: &crate::engine::AnalysisResult, format: Format, options: RenderOptions) -> String {
    match format {
        Format::Text => render_text(result, options),
        Format::Json => render_json(result, options),
        Format::Sarif => render_sarif(result, options),
    }
}
