use thiserror::Error;

use crate::term::{Arity, TermPath};

/// Errors raised while building or navigating terms.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("type error at {path}: {reason}")]
    Type { path: TermPath, reason: String },
    #[error("path {0} does not address a subterm")]
    Path(TermPath),
    #[error("invalid projection list: {0}")]
    Spec(String),
}

impl TermError {
    pub(crate) fn typing(path: TermPath, reason: impl Into<String>) -> Self {
        TermError::Type {
            path,
            reason: reason.into(),
        }
    }

    /// Re-anchors a root-level type error at `path`.
    pub(crate) fn at(self, path: TermPath) -> Self {
        match self {
            TermError::Type { path: p, reason } if p.is_root() => TermError::Type { path, reason },
            other => other,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at line {line}, column {col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

/// Failure of [`crate::syntax::parse`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Term(#[from] TermError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BudgetKind {
    Steps,
    Magnitude,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("evaluation budget exceeded ({kind:?})")]
    BudgetExceeded { kind: BudgetKind },
    #[error("input has {got} entries but the term expects {expected}")]
    ArityMismatch { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("arity mismatch: {left} vs {right}")]
pub struct ArityMismatch {
    pub left: Arity,
    pub right: Arity,
}

/// A fragment hom-set outgrew its configured capacity.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("hom-set {arity} exceeds the capacity of {limit} terms")]
pub struct CapacityError {
    pub arity: Arity,
    pub limit: usize,
}
