use thiserror::Error;

/// Errors raised while building or querying complexes.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    #[error("facets {0} and {1} are not adjacent")]
    NotAdjacent(String, String),
    #[error("map is degenerate: {0}")]
    Degenerate(String),
    #[error("not a facet: {0}")]
    NotAFacet(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
