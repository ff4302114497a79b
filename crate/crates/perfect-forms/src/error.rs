use alloc::string::String;
use core::fmt;

/// Errors surfaced by the exact-arithmetic pipeline.
///
/// Most operations cannot fail on valid inputs; the variants here are either
/// input validation (`InvalidDiscriminant`, `DimensionMismatch`, ...) or
/// diagnostics for conditions that contradict the underlying theory and
/// therefore indicate a bug or a corrupted checkpoint (`Internal`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// The discriminant is not negative and fundamental.
    InvalidDiscriminant(i64),
    /// Matrix or vector dimensions do not match.
    DimensionMismatch,
    /// An operation required a positive definite form.
    NotPositiveDefinite,
    /// A nonzero vector was required.
    ZeroVector,
    /// A nonempty input was required.
    EmptyInput,
    /// An iteration cap was exceeded; carries the name of the loop.
    IterationCap(&'static str),
    /// An internal invariant failed; carries a description.
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidDiscriminant(d) => {
                write!(f, "{d} is not a negative fundamental discriminant")
            }
            Error::DimensionMismatch => write!(f, "dimension mismatch"),
            Error::NotPositiveDefinite => write!(f, "form is not positive definite"),
            Error::ZeroVector => write!(f, "zero vector not allowed"),
            Error::EmptyInput => write!(f, "empty input not allowed"),
            Error::IterationCap(name) => write!(f, "iteration cap exceeded in {name}"),
            Error::Internal(msg) => write!(f, "internal invariant violated: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
