//! Error type shared by the whole pipeline.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// `mul_t` on a series whose constant coefficient is nonzero.
    NonzeroConstantTerm,
    /// Polynomial text does not conform to the grammar.
    SyntaxError { pos: usize, message: String },
    /// A coefficient literal is not an integer.
    NonIntegerCoefficient { pos: usize },
    /// Variable index outside `1..=nvars`.
    IndexOutOfRange { index: usize, nvars: usize },
    /// Point or polynomial dimension does not match.
    DimensionMismatch { expected: usize, got: usize },
    /// `build_R` called with `d` below the total degree.
    DegreeTooSmall { d: usize, deg: usize },
    /// Bitsize of the zero polynomial is undefined.
    ZeroPolynomial,
    /// Quotient dimension d^k exceeds the configured cap.
    SizeOverflow { dim: String, cap: u64 },
    /// A structural identity of the quotient algebra failed.
    ConsistencyFailure(String),
    /// A trace violated the degree/size bounds it provably satisfies.
    TraceBoundViolation(String),
    /// Newton recursion produced a non-integer coefficient.
    NonIntegralCoefficient { h: usize, l: usize },
    /// Every candidate top coefficient of the characteristic polynomial is zero.
    AllTopCoefficientsZero,
    /// A proven invariant failed at runtime (upstream bug, not user error).
    InvariantViolation(String),
    /// A vertex or grid value <= 0 was encountered; the input is not positive on the simplex.
    PositivityViolated(String),
    /// Determinant oracle called above its cost guard.
    DimensionTooLarge { dim: usize, cap: usize },
    /// Numeric root finding did not converge.
    RootFindingFailure(String),
    /// Example family requires even d >= 4 and even tau.
    ParityViolation { d: usize, tau: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonzeroConstantTerm => {
                write!(f, "multiplication by t needs a zero constant term")
            }
            Error::SyntaxError { pos, message } => {
                write!(f, "syntax error at position {pos}: {message}")
            }
            Error::NonIntegerCoefficient { pos } => {
                write!(f, "non-integer coefficient at position {pos}")
            }
            Error::IndexOutOfRange { index, nvars } => {
                write!(f, "variable index {index} out of range for {nvars} variables")
            }
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::DegreeTooSmall { d, deg } => {
                write!(f, "d = {d} is smaller than the total degree {deg}")
            }
            Error::ZeroPolynomial => write!(f, "bitsize of the zero polynomial is undefined"),
            Error::SizeOverflow { dim, cap } => {
                write!(f, "quotient dimension {dim} exceeds the cap {cap}")
            }
            Error::ConsistencyFailure(what) => write!(f, "consistency failure: {what}"),
            Error::TraceBoundViolation(what) => write!(f, "trace bound violation: {what}"),
            Error::NonIntegralCoefficient { h, l } => {
                write!(f, "non-integral characteristic coefficient at h = {h}, l = {l}")
            }
            Error::AllTopCoefficientsZero => {
                write!(f, "all top-degree characteristic coefficients are zero")
            }
            Error::InvariantViolation(what) => write!(f, "invariant violation: {what}"),
            Error::PositivityViolated(what) => write!(f, "positivity violated: {what}"),
            Error::DimensionTooLarge { dim, cap } => {
                write!(f, "matrix dimension {dim} exceeds the oracle guard {cap}")
            }
            Error::RootFindingFailure(what) => write!(f, "root finding failed: {what}"),
            Error::ParityViolation { d, tau } => {
                write!(f, "example family needs even d >= 4 and even tau, got d = {d}, tau = {tau}")
            }
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
