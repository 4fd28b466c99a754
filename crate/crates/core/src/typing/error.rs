use std::fmt;

use thiserror::Error;

use super::Rule;
use crate::syntax::{Name, TypeVar};
use crate::types::{Hypersequent, HypersequentError, Proposition};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeErrorKind {
    #[error("restricted name `{0}` is not used by the body")]
    UnboundName(Name),
    #[error("channel `{0}` is used by two independent components")]
    NameClash(Name),
    #[error("cannot cut `{x} : {a}` against `{y} : {b}`: the types are not dual")]
    NotDual { x: Name, a: Proposition, y: Name, b: Proposition },
    #[error("`{0}` and `{1}` must be typed in distinct sequents")]
    NotInDistinctSequents(Name, Name),
    #[error("`{0}` and `{1}` must be typed in the same sequent")]
    NotInSameSequent(Name, Name),
    #[error("the branches use their context differently: `{left}` versus `{right}`")]
    BranchMismatch { left: Hypersequent, right: Hypersequent },
    #[error("a server body may only use clients besides its object, but `{name} : {ty}` is not a client type")]
    NonClientContext { name: Name, ty: Proposition },
    #[error("rule {rule} admits a single sequent, but the premise is `{premise}`")]
    AmbientContext { rule: Rule, premise: Hypersequent },
    #[error("channel `{0}` is not used by the continuation")]
    SubjectMissing(Name),
    #[error("`{name}` should have type {expected}, found `{found}`")]
    UnexpectedType { name: Name, expected: String, found: Proposition },
    #[error("type variable `{var}` occurs free in the context `{context}`")]
    EigenvariableEscape { var: TypeVar, context: Hypersequent },
    #[error("expected `{expected}`, found `{actual}`")]
    TypeMismatch { expected: Hypersequent, actual: Hypersequent },
}

/// A typing failure together with the subterm where it arose, given as a
/// sequence of child indices from the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeError {
    pub kind: TypeErrorKind,
    pub path: Vec<usize>,
}

impl TypeError {
    pub(crate) fn at(path: &[usize], kind: TypeErrorKind) -> Self {
        TypeError { kind, path: path.to_vec() }
    }
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            write!(f, "{}", self.kind)
        } else {
            let path: Vec<String> = self.path.iter().map(usize::to_string).collect();
            write!(f, "at subterm {}: {}", path.join("."), self.kind)
        }
    }
}

impl std::error::Error for TypeError {}

impl From<HypersequentError> for TypeErrorKind {
    fn from(e: HypersequentError) -> Self {
        match e {
            HypersequentError::NameClash(n) => TypeErrorKind::NameClash(n),
        }
    }
}
