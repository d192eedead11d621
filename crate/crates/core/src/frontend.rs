//! Loading files into source units and parsing them.

use jssec_syntax::{
    build_scope_table, extract_scripts_from_html, parse, ParseOptions, ScopeTable, SourceUnit, Span, SyntaxTree,
    TextRange, UnitKind,
};
use serde::Serialize;

/// Files above this size are treated as generated.
pub const MINIFIED_MAX_BYTES: usize = 5 * 1024 * 1024;
/// Files whose average line is longer than this are treated as minified.
pub const MINIFIED_MAX_AVG_LINE: usize = 5000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParseDiagnostic {
    pub span: Span,
    pub message: String,
    /// `false` means the unit has no tree and no rule runs on it.
    pub recoverable: bool,
}

/// A unit with its tree and scopes.
#[derive(Debug)]
pub struct ParsedUnit {
    pub unit: SourceUnit,
    pub tree: SyntaxTree,
    pub scopes: ScopeTable,
    /// Recoverable notes, such as syntax newer than ES2020.
    pub notes: Vec<ParseDiagnostic>,
}

/// Parse one unit. Inline handlers may `return` at the top level.
pub fn parse_source(unit: &SourceUnit) -> Result<SyntaxTree, ParseDiagnostic> {
    let options = ParseOptions { module: unit.module, allow_return: unit.kind == UnitKind::HtmlInlineHandler };
    parse(&unit.text, options).map_err(|err| {
        let start = (err.range.start as usize).min(unit.text.len()) as u32;
        let end = (err.range.end as usize).clamp(start as usize, unit.text.len()) as u32;
        ParseDiagnostic { span: unit.span(TextRange::new(start, end)), message: err.message, recoverable: false }
    })
}

/// Parse and resolve scopes.
pub fn parse_unit(unit: SourceUnit) -> Result<ParsedUnit, Box<(SourceUnit, ParseDiagnostic)>> {
    match parse_source(&unit) {
        Ok(tree) => {
            let scopes = build_scope_table(&tree);
            let notes = tree
                .notes
                .iter()
                .map(|n| ParseDiagnostic { span: unit.span(n.range), message: n.message.clone(), recoverable: true })
                .collect();
            Ok(ParsedUnit { unit, tree, scopes, notes })
        }
        Err(diag) => Err(Box::new((unit, diag))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SourceKind {
    Script,
    Module,
    Html,
}

/// Classify a path by extension. `None` for files the analyzer ignores.
pub fn source_kind(path: &str) -> Option<SourceKind> {
    let ext = path.rsplit_once('.').map(|(_, e)| e.to_ascii_lowercase())?;
    match ext.as_str() {
        "js" | "cjs" => Some(SourceKind::Script),
        "mjs" => Some(SourceKind::Module),
        "html" | "htm" => Some(SourceKind::Html),
        _ => None,
    }
}

pub fn is_likely_minified(text: &str) -> bool {
    if text.len() > MINIFIED_MAX_BYTES {
        return true;
    }
    let lines = text.lines().count().max(1);
    text.len() / lines > MINIFIED_MAX_AVG_LINE
}

/// `javascript:` URL in an HTML attribute, located in its file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JavascriptUrlSite {
    pub path: String,
    pub element: String,
    pub attribute: String,
    pub span: Span,
    /// Attribute value after the scheme.
    #[serde(skip)]
    pub code: String,
}

/// `<script src>` reference; recorded, never fetched.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExternalScriptSite {
    pub path: String,
    pub src: String,
    pub line: u32,
}

/// Everything a single file contributes to a run.
#[derive(Clone, Debug, Default)]
pub struct LoadedFile {
    pub units: Vec<SourceUnit>,
    pub javascript_urls: Vec<JavascriptUrlSite>,
    pub external_scripts: Vec<ExternalScriptSite>,
}

/// Split a file into units. JavaScript files give one unit; HTML files
/// give one per inline script and event handler.
pub fn load_source(path: &str, text: &str) -> LoadedFile {
    match source_kind(path) {
        Some(SourceKind::Html) => {
            let ex = extract_scripts_from_html(path, text);
            let javascript_urls = ex
                .javascript_urls
                .iter()
                .map(|u| {
                    let value = SourceUnit::new("", path, UnitKind::HtmlScriptBlock, u.value.clone(), None, u.origin);
                    JavascriptUrlSite {
                        path: path.to_string(),
                        element: u.element.clone(),
                        attribute: u.attribute.clone(),
                        span: Span { unit_id: path.to_string(), ..value.full_span() },
                        code: u.value.trim_start().get("javascript:".len()..).unwrap_or_default().to_string(),
                    }
                })
                .collect();
            let external_scripts = ex
                .external_scripts
                .iter()
                .map(|s| ExternalScriptSite { path: path.to_string(), src: s.src.clone(), line: s.origin.line })
                .collect();
            LoadedFile { units: ex.units, javascript_urls, external_scripts }
        }
        kind => {
            let mut unit = SourceUnit::js_file(path, text);
            unit.module = kind == Some(SourceKind::Module);
            LoadedFile { units: vec![unit], ..Default::default() }
        }
    }
}
