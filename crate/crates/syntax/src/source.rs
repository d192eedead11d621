use serde::Serialize;

use crate::text::{LineIndex, TextRange};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum UnitKind {
    JsFile,
    HtmlScriptBlock,
    HtmlInlineHandler,
}

/// Element and attribute an inline handler was taken from, e.g. `("button", "onclick")`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct HtmlContext {
    pub element: String,
    pub attribute: String,
}

/// Position of a unit's first byte inside the file it came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Origin {
    pub byte: u32,
    /// One-based.
    pub line: u32,
    /// One-based, in characters.
    pub col: u32,
}

impl Origin {
    pub const FILE_START: Origin = Origin { byte: 0, line: 1, col: 1 };
}

/// One analyzable piece of JavaScript: a whole file, a `<script>` body or an
/// inline `on*` attribute value.
#[derive(Clone, Debug)]
pub struct SourceUnit {
    pub id: String,
    /// Path as shown in reports.
    pub origin_path: String,
    pub kind: UnitKind,
    pub text: String,
    pub html_context: Option<HtmlContext>,
    pub origin: Origin,
    /// Parse as a module regardless of content (`.mjs`, `<script type="module">`).
    pub module: bool,
    lines: LineIndex,
}

impl SourceUnit {
    pub fn new(
        id: impl Into<String>,
        origin_path: impl Into<String>,
        kind: UnitKind,
        text: impl Into<String>,
        html_context: Option<HtmlContext>,
        origin: Origin,
    ) -> Self {
        let text = text.into();
        debug_assert!(kind != UnitKind::HtmlInlineHandler || html_context.is_some());
        let lines = LineIndex::new(&text);
        Self { id: id.into(), origin_path: origin_path.into(), kind, text, html_context, origin, module: false, lines }
    }

    /// A standalone JavaScript file. A leading byte-order mark is dropped and
    /// accounted for in the origin offset.
    pub fn js_file(path: impl Into<String>, text: &str) -> Self {
        let path = path.into();
        let (text, origin) = match text.strip_prefix('\u{feff}') {
            Some(rest) => (rest, Origin { byte: 3, line: 1, col: 1 }),
            None => (text, Origin::FILE_START),
        };
        Self::new(path.clone(), path, UnitKind::JsFile, text, None, origin)
    }

    pub fn line_offsets(&self) -> &[u32] {
        self.lines.line_starts()
    }

    pub fn line_index(&self) -> &LineIndex {
        &self.lines
    }

    pub fn line_count(&self) -> usize {
        self.lines.line_count()
    }

    /// Zero-based local line of a byte offset.
    pub fn local_line(&self, offset: u32) -> usize {
        self.lines.line_of(offset)
    }

    pub fn slice(&self, range: TextRange) -> &str {
        range.slice(&self.text)
    }

    /// Line and column in the origin file for a unit-local byte offset.
    pub fn position(&self, offset: u32) -> (u32, u32) {
        let (line, col) = self.lines.line_col(&self.text, offset);
        if line == 1 {
            (self.origin.line, col + self.origin.col - 1)
        } else {
            (line + self.origin.line - 1, col)
        }
    }

    /// Resolve a unit-local range into a report span in origin-file coordinates.
    pub fn span(&self, range: TextRange) -> Span {
        let (start_line, start_col) = self.position(range.start);
        let (end_line, end_col) = self.position(range.end);
        Span {
            unit_id: self.id.clone(),
            start_byte: range.start + self.origin.byte,
            end_byte: range.end + self.origin.byte,
            start_line,
            start_col,
            end_line,
            end_col,
        }
    }

    /// Span covering the whole unit.
    pub fn full_span(&self) -> Span {
        self.span(TextRange::new(0, self.text.len() as u32))
    }
}

/// A location in an origin file. Lines and columns are one-based; columns
/// count Unicode scalar values and `end_col` is exclusive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Span {
    pub unit_id: String,
    pub start_byte: u32,
    pub end_byte: u32,
    pub start_line: u32,
    pub start_col: u32,
    pub end_line: u32,
    pub end_col: u32,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bom_is_stripped_and_offset_kept() {
        let unit = SourceUnit::js_file("a.js", "\u{feff}var x;");
        assert_eq!(unit.text, "var x;");
        let span = unit.span(TextRange::new(4, 5));
        assert_eq!(span.start_byte, 7);
        assert_eq!((span.start_line, span.start_col), (1, 5));
    }

    #[test]
    fn embedded_unit_maps_to_file_coordinates() {
        let unit = SourceUnit::new(
            "p.html#script@10",
            "p.html",
            UnitKind::HtmlScriptBlock,
            "a();\nb();",
            None,
            Origin { byte: 10, line: 3, col: 9 },
        );
        let first = unit.span(TextRange::new(0, 3));
        assert_eq!((first.start_line, first.start_col), (3, 9));
        let second = unit.span(TextRange::new(5, 8));
        assert_eq!((second.start_line, second.start_col), (4, 1));
        assert_eq!(second.start_byte, 15);
    }

    #[test]
    fn line_offsets_start_at_zero_and_increase() {
        let unit = SourceUnit::js_file("a.js", "a\n\nb\r\nc");
        let offsets = unit.line_offsets();
        assert_eq!(offsets[0], 0);
        assert!(offsets.windows(2).all(|w| w[0] < w[1]));
    }
}
