use thiserror::Error;

use crate::coeffs::BaseRing;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("p = {0} is not a prime greater than 3")]
    InvalidPrime(u64),
    #[error("mixed base rings: {0} and {1}")]
    MixedRings(BaseRing, BaseRing),
    #[error("{0} is not an element of {1}")]
    NotInRing(String, BaseRing),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("degree {degree} exceeds truncation bound {bound}")]
    DegreeOutOfRange { degree: u32, bound: u32 },
    #[error("element is not homogeneous: {0}")]
    Inhomogeneous(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("invalid sequence: {0}")]
    InvalidSequence(String),
    #[error("invalid model parameters: {0}")]
    InvalidModel(String),
    /// The computation is well posed but cannot be carried out as requested.
    #[error("refused: {reason}")]
    Refusal { reason: String, required_bound: Option<u32> },
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error("document error: {0}")]
    Document(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn refusal(reason: impl Into<String>) -> Self {
        Error::Refusal { reason: reason.into(), required_bound: None }
    }
}
