use alloc::string::String;
use core::fmt;

/// Errors surfaced by the algebra and norm machinery.
///
/// Every precondition in the public API maps to one of these variants;
/// numerical failures that signal corrupted inputs (rather than caller
/// mistakes) use [`Error::Integrity`].
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An exponent outside the supported range for the operation.
    BadExponent { p: f64, context: &'static str },
    /// A strictly positive quantity was zero or negative.
    NotPositive { what: &'static str },
    /// Vector/matrix shape does not match the attached spaces.
    ShapeMismatch { context: &'static str },
    /// Two values that must live over the same space/action/group do not.
    Mismatch { context: &'static str },
    /// Group table fails associativity, identity, or inverse axioms.
    GroupAxiom { detail: String },
    /// A group action that must be free has a nontrivial fixed point.
    NotFree { detail: String },
    /// Matrix is not an idempotent within tolerance.
    NotIdempotent { defect: f64 },
    /// Window/truncation parameter is too small for the data.
    WindowTooSmall { needed: usize, got: usize },
    /// Oracle dimension cap or similar hard limit exceeded.
    TooLarge { what: &'static str, limit: usize, got: usize },
    /// Internal cross-checks disagree; the input is not what it claims to be.
    Integrity { detail: String },
    /// Supplied data fails a structural validity check.
    Invalid { detail: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::BadExponent { p, context } => {
                write!(f, "exponent p = {p} not allowed for {context}")
            }
            Error::NotPositive { what } => write!(f, "{what} must be strictly positive"),
            Error::ShapeMismatch { context } => write!(f, "shape mismatch in {context}"),
            Error::Mismatch { context } => write!(f, "operands disagree in {context}"),
            Error::GroupAxiom { detail } => write!(f, "group axioms violated: {detail}"),
            Error::NotFree { detail } => write!(f, "action is not free: {detail}"),
            Error::NotIdempotent { defect } => {
                write!(f, "matrix is not idempotent (defect {defect:e})")
            }
            Error::WindowTooSmall { needed, got } => {
                write!(f, "window too small: need at least {needed}, got {got}")
            }
            Error::TooLarge { what, limit, got } => {
                write!(f, "{what} exceeds limit {limit} (got {got})")
            }
            Error::Integrity { detail } => write!(f, "integrity error: {detail}"),
            Error::Invalid { detail } => write!(f, "invalid input: {detail}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
