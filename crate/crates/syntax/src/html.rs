//! Tag-level HTML scanner that pulls JavaScript out of `<script>` bodies and
//! `on*` event-handler attributes. It is deliberately forgiving: malformed
//! markup never fails, it just yields fewer units.

use crate::source::{HtmlContext, Origin, SourceUnit, UnitKind};
use crate::text::{LineIndex, TextRange};

/// A `<script src=...>` element. Its target is not fetched.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExternalScript {
    pub src: String,
    pub origin: Origin,
}

/// A `javascript:` URL in an attribute such as `href`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JavascriptUrl {
    pub element: String,
    pub attribute: String,
    /// Full attribute value, scheme included.
    pub value: String,
    pub origin: Origin,
    /// Byte range of the value inside the HTML file.
    pub range: TextRange,
}

#[derive(Clone, Debug, Default)]
pub struct HtmlExtraction {
    pub units: Vec<SourceUnit>,
    pub external_scripts: Vec<ExternalScript>,
    pub javascript_urls: Vec<JavascriptUrl>,
}

struct Attribute {
    name: String,
    value: Option<(TextRange, String)>,
}

const JS_MIME_TYPES: &[&str] = &[
    "text/javascript",
    "application/javascript",
    "application/x-javascript",
    "text/x-javascript",
    "text/ecmascript",
    "application/ecmascript",
    "text/jscript",
    "text/livescript",
    "module",
];

fn is_js_type(ty: &str) -> bool {
    let ty = ty.split(';').next().unwrap_or("").trim().to_ascii_lowercase();
    ty.is_empty() || JS_MIME_TYPES.contains(&ty.as_str()) || ty.starts_with("text/javascript1.")
}

/// Whether an attribute name denotes an event handler (`onclick`, `onload`, ...).
pub fn is_event_handler_attribute(name: &str) -> bool {
    name.len() > 2 && name[..2].eq_ignore_ascii_case("on") && name[2..].bytes().all(|b| b.is_ascii_alphabetic())
}

struct Scanner<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn starts_with_ci(&self, at: usize, needle: &str) -> bool {
        self.text.get(at..at + needle.len()).is_some_and(|s| s.eq_ignore_ascii_case(needle))
    }

    fn skip_past(&mut self, needle: &str) {
        match self.text[self.pos..].find(needle) {
            Some(i) => self.pos += i + needle.len(),
            None => self.pos = self.text.len(),
        }
    }

    fn skip_whitespace(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    /// Parses attributes up to and including the closing `>`.
    fn attributes(&mut self) -> Vec<Attribute> {
        let mut attrs = Vec::new();
        loop {
            self.skip_whitespace();
            let Some(&b) = self.bytes.get(self.pos) else { break };
            if b == b'>' {
                self.pos += 1;
                break;
            }
            if b == b'/' {
                self.pos += 1;
                continue;
            }
            let name_start = self.pos;
            while let Some(&c) = self.bytes.get(self.pos) {
                if c.is_ascii_whitespace() || c == b'=' || c == b'>' || (c == b'/' && self.pos > name_start) {
                    break;
                }
                self.pos += 1;
            }
            let name = self.text[name_start..self.pos].to_ascii_lowercase();
            self.skip_whitespace();
            let mut value = None;
            if self.bytes.get(self.pos) == Some(&b'=') {
                self.pos += 1;
                self.skip_whitespace();
                value = Some(self.attribute_value());
            }
            attrs.push(Attribute { name, value });
        }
        attrs
    }

    fn attribute_value(&mut self) -> (TextRange, String) {
        match self.bytes.get(self.pos) {
            Some(&q @ (b'"' | b'\'')) => {
                let start = self.pos + 1;
                let end = self.text[start..].find(q as char).map_or(self.text.len(), |i| start + i);
                self.pos = (end + 1).min(self.text.len());
                (TextRange::new(start as u32, end as u32), self.text[start..end].to_string())
            }
            _ => {
                let start = self.pos;
                while let Some(&c) = self.bytes.get(self.pos) {
                    if c.is_ascii_whitespace() || c == b'>' {
                        break;
                    }
                    self.pos += 1;
                }
                (TextRange::new(start as u32, self.pos as u32), self.text[start..self.pos].to_string())
            }
        }
    }
}

fn origin_at(lines: &LineIndex, text: &str, byte: usize) -> Origin {
    let (line, col) = lines.line_col(text, byte as u32);
    Origin { byte: byte as u32, line, col }
}

/// Extract every inline script and event handler from an HTML document.
pub fn extract_scripts_from_html(path: &str, html: &str) -> HtmlExtraction {
    let lines = LineIndex::new(html);
    let mut out = HtmlExtraction::default();
    let mut sc = Scanner { text: html, bytes: html.as_bytes(), pos: 0 };
    if html.starts_with('\u{feff}') {
        sc.pos = 3;
    }
    while sc.pos < sc.bytes.len() {
        let Some(rel) = html[sc.pos..].find('<') else { break };
        sc.pos += rel;
        if sc.text[sc.pos..].starts_with("<!--") {
            sc.skip_past("-->");
            continue;
        }
        let next = sc.bytes.get(sc.pos + 1).copied().unwrap_or(0);
        if next == b'!' || next == b'?' || next == b'/' {
            sc.skip_past(">");
            continue;
        }
        if !next.is_ascii_alphabetic() {
            sc.pos += 1;
            continue;
        }
        let name_start = sc.pos + 1;
        sc.pos = name_start;
        while let Some(&c) = sc.bytes.get(sc.pos) {
            if c.is_ascii_whitespace() || c == b'>' || c == b'/' {
                break;
            }
            sc.pos += 1;
        }
        let element = html[name_start..sc.pos].to_ascii_lowercase();
        let attrs = sc.attributes();

        for attr in &attrs {
            let Some((range, value)) = &attr.value else { continue };
            if is_event_handler_attribute(&attr.name) {
                let origin = origin_at(&lines, html, range.start as usize);
                let unit = SourceUnit::new(
                    format!("{path}#handler@{}", range.start),
                    path,
                    UnitKind::HtmlInlineHandler,
                    value.clone(),
                    Some(HtmlContext { element: element.clone(), attribute: attr.name.clone() }),
                    origin,
                );
                out.units.push(unit);
            } else if value.trim_start().to_ascii_lowercase().starts_with("javascript:") {
                out.javascript_urls.push(JavascriptUrl {
                    element: element.clone(),
                    attribute: attr.name.clone(),
                    value: value.clone(),
                    origin: origin_at(&lines, html, range.start as usize),
                    range: *range,
                });
            }
        }

        if matches!(element.as_str(), "script" | "style" | "textarea" | "title") {
            let body_start = sc.pos;
            let close = format!("</{element}");
            let mut body_end = html.len();
            let mut search = body_start;
            while let Some(i) = html[search..].find("</") {
                let at = search + i;
                if sc.starts_with_ci(at, &close) {
                    body_end = at;
                    break;
                }
                search = at + 2;
            }
            sc.pos = body_end;
            if element != "script" {
                continue;
            }
            let attr = |name: &str| attrs.iter().find(|a| a.name == name);
            if let Some(src) = attr("src") {
                let value = src.value.as_ref().map(|(_, v)| v.clone()).unwrap_or_default();
                out.external_scripts
                    .push(ExternalScript { src: value, origin: origin_at(&lines, html, name_start - 1) });
                continue;
            }
            let ty = attr("type").and_then(|a| a.value.as_ref()).map(|(_, v)| v.as_str()).unwrap_or("");
            if !is_js_type(ty) {
                continue;
            }
            let mut unit = SourceUnit::new(
                format!("{path}#script@{body_start}"),
                path,
                UnitKind::HtmlScriptBlock,
                &html[body_start..body_end],
                None,
                origin_at(&lines, html, body_start),
            );
            unit.module = ty.trim().eq_ignore_ascii_case("module");
            out.units.push(unit);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inline_handler_becomes_unit() {
        let ex = extract_scripts_from_html("p.html", r#"<button onclick="foo();" id="myBtn"/>"#);
        assert_eq!(ex.units.len(), 1);
        let unit = &ex.units[0];
        assert_eq!(unit.kind, UnitKind::HtmlInlineHandler);
        assert_eq!(unit.text, "foo();");
        let ctx = unit.html_context.as_ref().unwrap();
        assert_eq!((ctx.element.as_str(), ctx.attribute.as_str()), ("button", "onclick"));
        assert_eq!(unit.origin.byte, 17);
    }

    #[test]
    fn script_block_becomes_unit() {
        let ex = extract_scripts_from_html("p.html", "<script>var a=1;</script>");
        assert_eq!(ex.units.len(), 1);
        assert_eq!(ex.units[0].kind, UnitKind::HtmlScriptBlock);
        assert_eq!(ex.units[0].text, "var a=1;");
    }

    #[test]
    fn external_script_is_recorded_only() {
        let ex = extract_scripts_from_html("p.html", r#"<script src="app.js"></script>"#);
        assert!(ex.units.is_empty());
        assert_eq!(ex.external_scripts.len(), 1);
        assert_eq!(ex.external_scripts[0].src, "app.js");
    }

    #[test]
    fn non_js_script_types_are_ignored() {
        let html = r#"<script type="text/template"><b>x</b></script><script type="module">import a from 'a';</script>"#;
        let ex = extract_scripts_from_html("p.html", html);
        assert_eq!(ex.units.len(), 1);
        assert!(ex.units[0].module);
    }

    #[test]
    fn script_text_may_contain_markup() {
        let html = "<SCRIPT>document.write('<p>' + '</p>');</SCRIPT><p onClick=go()>";
        let ex = extract_scripts_from_html("p.html", html);
        assert_eq!(ex.units.len(), 2);
        assert_eq!(ex.units[0].text, "document.write('<p>' + '</p>');");
        assert_eq!(ex.units[1].text, "go()");
        assert_eq!(ex.units[1].html_context.as_ref().unwrap().attribute, "onclick");
    }

    #[test]
    fn comments_and_javascript_urls() {
        let html = "<!-- <script>hidden()</script> -->\n<a href=\"javascript:void(0)\">x</a>";
        let ex = extract_scripts_from_html("p.html", html);
        assert!(ex.units.is_empty());
        assert_eq!(ex.javascript_urls.len(), 1);
        assert_eq!(ex.javascript_urls[0].origin.line, 2);
    }

    #[test]
    fn malformed_markup_is_tolerated() {
        for html in ["<", "<div", "<div onclick=\"x", "<script>never closed", "< p>", "<a b='c"] {
            let _ = extract_scripts_from_html("p.html", html);
        }
        let ex = extract_scripts_from_html("p.html", "<script>never closed");
        assert_eq!(ex.units[0].text, "never closed");
    }
}
