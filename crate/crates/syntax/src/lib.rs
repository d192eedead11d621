//! JavaScript front end: lexing, parsing into an arena tree, extraction of
//! scripts embedded in HTML, and lexical scope resolution.

pub mod ast;
pub mod error;
pub mod html;
pub mod lexer;
pub mod parser;
pub mod scope;
pub mod source;
pub mod text;
pub mod token;

pub use ast::{Function, FunctionKind, Node, NodeId, NodeKind, ParseNote, SyntaxTree};
pub use error::SyntaxError;
pub use html::{extract_scripts_from_html, ExternalScript, HtmlExtraction, JavascriptUrl};
pub use parser::{parse, parse_expression, parse_program, ParseOptions};
pub use scope::{build_scope_table, BindingId, BindingKind, RefKind, ScopeKind, ScopeTable};
pub use source::{HtmlContext, Origin, SourceUnit, Span, UnitKind};
pub use text::{LineIndex, TextRange};
