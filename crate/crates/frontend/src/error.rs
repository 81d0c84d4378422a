use thiserror::Error;

use crate::sexpr::Pos;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: u32,
    pub col: u32,
    pub message: String,
}

impl ParseError {
    pub fn at(pos: Pos, message: impl Into<String>) -> ParseError {
        ParseError {
            line: pos.line,
            col: pos.col,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: unsupported: {feature}")]
pub struct UnsupportedError {
    pub line: u32,
    pub col: u32,
    pub feature: String,
}

impl UnsupportedError {
    pub fn at(pos: Pos, feature: impl Into<String>) -> UnsupportedError {
        UnsupportedError {
            line: pos.line,
            col: pos.col,
            feature: feature.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: step {step} refers to {premise}, which is not an earlier clause")]
pub struct ReferenceError {
    pub line: u32,
    pub col: u32,
    pub step: u32,
    pub premise: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrontendError {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Unsupported(#[from] UnsupportedError),
    #[error("reference error at {0}")]
    Reference(#[from] ReferenceError),
}

impl FrontendError {
    pub fn position(&self) -> (u32, u32) {
        match self {
            FrontendError::Parse(e) => (e.line, e.col),
            FrontendError::Unsupported(e) => (e.line, e.col),
            FrontendError::Reference(e) => (e.line, e.col),
        }
    }
}
