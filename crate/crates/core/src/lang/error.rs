use thiserror::Error;

use super::ast::Type;

/// Everything that can go wrong turning source text into a checked [`Program`](super::Program).
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum FrontendError {
    #[error("{line}:{col}: syntax error: {message}")]
    Syntax { line: u32, col: u32, message: String },
    #[error("{line}:{col}: type error in {context}: expected {expected}, found {found}")]
    Type { line: u32, col: u32, context: String, expected: Type, found: Type },
    #[error("{line}:{col}: undeclared variable `{name}`")]
    UndeclaredVariable { name: String, line: u32, col: u32 },
    #[error("{line}:{col}: variable `{name}` may be read before it is assigned")]
    UseBeforeAssignment { name: String, line: u32, col: u32 },
    #[error("{line}:{col}: `{name}` is already declared")]
    Redeclared { name: String, line: u32, col: u32 },
    #[error("{line}:{col}: `{name}` is a reserved name")]
    ReservedName { name: String, line: u32, col: u32 },
    #[error("{line}:{col}: unsupported construct: {construct}")]
    Unsupported { construct: String, line: u32, col: u32 },
    #[error("output `{name}` is not assigned on every path")]
    OutputNotAssigned { name: String },
}

impl FrontendError {
    pub fn line(&self) -> Option<u32> {
        match self {
            FrontendError::Syntax { line, .. }
            | FrontendError::Type { line, .. }
            | FrontendError::UndeclaredVariable { line, .. }
            | FrontendError::UseBeforeAssignment { line, .. }
            | FrontendError::Redeclared { line, .. }
            | FrontendError::ReservedName { line, .. }
            | FrontendError::Unsupported { line, .. } => Some(*line),
            FrontendError::OutputNotAssigned { .. } => None,
        }
    }
}
