use thiserror::Error;

/// Errors raised by scalar and polynomial arithmetic and by the text syntax.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("ring mismatch: operands live in different rings")]
    RingMismatch,
    #[error("{0} is not a prime below 2e9")]
    BadModulus(u64),
    #[error("denominator of {0} vanishes modulo {1}")]
    DenominatorVanishes(String, u64),
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("exact division failed: remainder is nonzero")]
    InexactDivision,
}

impl AlgebraError {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        AlgebraError::Parse { pos, msg: msg.into() }
    }
}

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("basis size exceeded the limit of {0} elements")]
    BasisLimit(usize),
    #[error("generating set is not marked as a Gröbner basis")]
    NotGroebner,
    #[error("input is not homogeneous: {0}")]
    Inhomogeneous(String),
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("dimension mismatch: {0}")]
    Shape(String),
    #[error("resolution did not terminate within length {0}")]
    ResolutionTooLong(usize),
    #[error("linear form of degree other than one in V: {0}")]
    NotLinear(String),
    #[error("generator {index} is not an element of the ambient module: {reason}")]
    NotSubmodule { index: usize, reason: String },
    #[error("characteristic {0} divides the group order")]
    CharacteristicDividesOrder(u64),
    #[error("group action does not preserve the relations; witness relation {0}")]
    ActionNotStable(usize),
    #[error("resource guard exceeded: {0}")]
    Guard(String),
    #[error("presentation did not stabilize below degree {0}")]
    NoStabilization(u32),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("evaluation scheme does not fit the sections: {0}")]
    SchemeMismatch(String),
    #[error("internal assertion failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
