//! In-source suppression comments.
//!
//! `// jssec-disable-line JSSEC-009 reason: sandboxed input` silences the
//! listed rules on the comment's line. `/* jssec-disable JSSEC-013 reason: ... */`
//! silences them until `/* jssec-enable */` or the end of the unit.

use jssec_syntax::{SourceUnit, Span, SyntaxTree};
use serde::Serialize;

use crate::finding::{Diagnostic, DiagnosticKind, Finding, Severity};
use crate::mapping::RuleId;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuppressionScope {
    /// One line of the origin file.
    Line(u32),
    /// Byte range of the origin file, end exclusive.
    Block { start_byte: u32, end_byte: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Suppression {
    pub path: String,
    /// Span of the suppressing comment.
    pub span: Span,
    /// Empty means every rule.
    pub rules: Vec<RuleId>,
    pub reason: Option<String>,
    pub scope: SuppressionScope,
}

impl Suppression {
    pub fn covers(&self, finding: &Finding) -> bool {
        if finding.path != self.path || !(self.rules.is_empty() || self.rules.contains(&finding.rule_id)) {
            return false;
        }
        match self.scope {
            SuppressionScope::Line(line) => finding.span.start_line == line,
            SuppressionScope::Block { start_byte, end_byte } => {
                finding.span.unit_id == self.span.unit_id
                    && finding.span.start_byte >= start_byte
                    && finding.span.start_byte < end_byte
            }
        }
    }
}

enum Directive {
    DisableLine,
    Disable,
    Enable,
}

fn directive(body: &str) -> Option<(Directive, &str)> {
    let body = body.trim().trim_start_matches('*').trim_start();
    if let Some(rest) = body.strip_prefix("jssec-disable-line") {
        return Some((Directive::DisableLine, rest));
    }
    if let Some(rest) = body.strip_prefix("jssec-disable") {
        return Some((Directive::Disable, rest));
    }
    body.strip_prefix("jssec-enable").map(|rest| (Directive::Enable, rest))
}

fn split_reason(rest: &str) -> (&str, Option<String>) {
    match rest.find("reason:") {
        Some(i) => {
            let reason = rest[i + "reason:".len()..].trim().trim_end_matches("*/").trim();
            (&rest[..i], (!reason.is_empty()).then(|| reason.to_string()))
        }
        None => (rest, None),
    }
}

/// Every suppression in a unit, plus diagnostics for malformed ones.
pub fn collect_suppressions(unit: &SourceUnit, tree: &SyntaxTree) -> (Vec<Suppression>, Vec<Diagnostic>) {
    let mut out: Vec<Suppression> = Vec::new();
    let mut diags = Vec::new();
    let mut open: Vec<usize> = Vec::new();
    let unit_end = unit.full_span().end_byte;
    let diag = |span: &Span, message: String| Diagnostic {
        kind: DiagnosticKind::Suppression,
        severity: Severity::Info,
        path: unit.origin_path.clone(),
        span: Some(span.clone()),
        message,
    };

    for comment in &tree.comments {
        let Some((kind, rest)) = directive(comment.body(&unit.text)) else { continue };
        let span = unit.span(comment.range);
        if let Directive::Enable = kind {
            for i in open.drain(..) {
                if let SuppressionScope::Block { end_byte, .. } = &mut out[i].scope {
                    *end_byte = span.start_byte;
                }
            }
            continue;
        }
        let (ids, reason) = split_reason(rest);
        let mut rules = Vec::new();
        let tokens: Vec<&str> =
            ids.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty() && *t != "*/").collect();
        for token in &tokens {
            match token.parse::<RuleId>() {
                Ok(id) => rules.push(id),
                Err(e) => diags.push(diag(&span, format!("suppression names {e}"))),
            }
        }
        if !tokens.is_empty() && rules.is_empty() {
            continue;
        }
        if reason.is_none() {
            diags.push(diag(&span, "suppression has no `reason:`".to_string()));
        }
        let scope = match kind {
            Directive::DisableLine => SuppressionScope::Line(span.start_line),
            _ => {
                open.push(out.len());
                SuppressionScope::Block { start_byte: span.end_byte, end_byte: unit_end }
            }
        };
        out.push(Suppression { path: unit.origin_path.clone(), span, rules, reason, scope });
    }
    (out, diags)
}

#[cfg(test)]
mod tests {
    use super::*;
    use jssec_syntax::parse_program;

    fn collect(src: &str) -> (Vec<Suppression>, Vec<Diagnostic>) {
        let unit = SourceUnit::js_file("a.js", src);
        let tree = parse_program(src).unwrap();
        collect_suppressions(&unit, &tree)
    }

    #[test]
    fn line_form() {
        let (s, d) = collect("eval(x) // jssec-disable-line JSSEC-009 reason: sandboxed");
        assert!(d.is_empty());
        assert_eq!(s[0].rules, [RuleId::DYNAMIC_CODE]);
        assert_eq!(s[0].reason.as_deref(), Some("sandboxed"));
        assert_eq!(s[0].scope, SuppressionScope::Line(1));
    }

    #[test]
    fn block_form() {
        let src = "/* jssec-disable JSSEC-013, JSSEC-004 reason: demo */\nconsole.log(1);\n/* jssec-enable */\nconsole.log(2);";
        let (s, d) = collect(src);
        assert!(d.is_empty());
        assert_eq!(s[0].rules.len(), 2);
        let SuppressionScope::Block { start_byte, end_byte } = s[0].scope else { panic!() };
        assert!(start_byte < end_byte);
        assert_eq!(&src[end_byte as usize..end_byte as usize + 18], "/* jssec-enable */");
    }

    #[test]
    fn missing_reason_is_reported() {
        let (s, d) = collect("eval(x) // jssec-disable-line JSSEC-009");
        assert_eq!(s.len(), 1);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].severity, Severity::Info);
    }

    #[test]
    fn unknown_ids_are_reported() {
        let (s, d) = collect("// jssec-disable-line JSSEC-999 reason: x");
        assert!(s.is_empty());
        assert_eq!(d.len(), 1);
    }
}
