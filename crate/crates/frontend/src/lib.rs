//! Front end for the `.tdve` modeling language: a DVE-like guarded-command
//! syntax extended with `time [lb, ub] [observe]` clauses on transitions.
//!
//! Grammar reference: `docs/language.md`. Diagnostics print as
//! `path:line:col: message`.

mod lexer;
mod parser;
mod pretty;

pub use parser::{parse, parse_expr};
pub use pretty::{pretty, pretty_lowered};

use tdve_core::Span;
use thiserror::Error;

/// Positioned syntax error.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("{path}:{line}:{col}: {message}")]
pub struct ParseError {
    pub path: String,
    pub line: u32,
    pub col: u32,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(path: &str, span: Span, message: impl Into<String>) -> ParseError {
        ParseError {
            path: path.to_string(),
            line: span.line,
            col: span.col,
            message: message.into(),
        }
    }
}
