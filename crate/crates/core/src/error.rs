use thiserror::Error;

use crate::space::Space;
use crate::value::{PrimSet, Value};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("space mismatch: expected {expected}, found {found}")]
    SpaceMismatch { expected: Space, found: Space },

    #[error("value {value} is not an element of {set}")]
    ValueNotInSet { value: Value, set: PrimSet },

    #[error("{0} has no generator of this kind")]
    WrongGenerator(Space),

    #[error("no unit in non-compact space {0}")]
    NoUnit(Space),

    #[error("term contains a wildcard but no wildcard action was given")]
    MissingWildAction,

    #[error("infinite support: the normal form carries a wildcard baseline")]
    InfiniteSupport,

    #[error("isomorphism {iso} does not apply to {space}")]
    IsoDomain { iso: String, space: Space },

    #[error("{0}")]
    Query(String),
}

impl Error {
    pub(crate) fn mismatch(expected: &Space, found: &Space) -> Self {
        Error::SpaceMismatch { expected: expected.clone(), found: found.clone() }
    }

    pub(crate) fn query(msg: impl Into<String>) -> Self {
        Error::Query(msg.into())
    }
}
