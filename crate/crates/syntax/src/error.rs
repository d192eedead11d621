use thiserror::Error;

use crate::text::TextRange;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{message} at byte {}", range.start)]
pub struct SyntaxError {
    pub range: TextRange,
    pub message: String,
}

impl SyntaxError {
    pub fn new(range: TextRange, message: impl Into<String>) -> Self {
        Self { range, message: message.into() }
    }
}
