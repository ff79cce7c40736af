//! Error type shared by all tropical operations.

use std::fmt;

/// Errors raised by algebraic and geometric operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TropError {
    /// Two operands live in polynomial semirings with different variable counts.
    DimensionMismatch { expected: usize, found: usize },
    /// A negative Laurent exponent was applied to a `NegInf` coordinate.
    UndefinedPower { var: usize, exponent: i64 },
    /// The zero polynomial (empty support) was passed where a nonzero one is required.
    ZeroPolynomial,
    /// The multiplicative inverse of `NegInf` does not exist.
    NegInfInverse,
    /// Elementary symmetric index out of `1..=m-1`.
    KOutOfRange { k: usize, m: usize },
    /// The operation needs more essential monomials than the input has.
    TooFewTerms { needed: usize, found: usize },
    /// Permutation enumeration refused beyond the configured cap.
    PermanentTooLarge { m: usize, cap: usize },
    /// Geometric realization is only available for two variables.
    NotPlanar { n: usize },
    /// The dual subdivision has vertices besides the polygon corners.
    NotEmptySubdivision,
    /// A binomial (exactly two monomials) was expected.
    NotBinomial { found: usize },
    /// The curve has two top-dimensional faces on a common line.
    NotGeneric,
    /// The variety is not starred (its dual subdivision is not empty).
    NotStarred,
    /// The curve has no 0-dimensional bottom face (no single vertex).
    NoPointVertex,
    /// A primitively irreducible input was required.
    PrimitivelyReducible,
    /// An m-tuple failed the index-tuple membership invariants.
    InvalidIndexTuple(String),
}

impl fmt::Display for TropError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TropError::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected} variables, found {found}")
            }
            TropError::UndefinedPower { var, exponent } => write!(
                f,
                "undefined power: exponent {exponent} of variable {var} at a -inf coordinate"
            ),
            TropError::ZeroPolynomial => write!(f, "operation undefined for the zero polynomial"),
            TropError::NegInfInverse => write!(f, "-inf has no multiplicative inverse"),
            TropError::KOutOfRange { k, m } => {
                write!(f, "elementary symmetric index {k} out of range 1..={}", m - 1)
            }
            TropError::TooFewTerms { needed, found } => {
                write!(f, "needs at least {needed} essential monomials, found {found}")
            }
            TropError::PermanentTooLarge { m, cap } => {
                write!(f, "permanent of a {m}x{m} matrix exceeds the cap m <= {cap}")
            }
            TropError::NotPlanar { n } => {
                write!(f, "geometric realization needs 2 variables, polynomial has {n}")
            }
            TropError::NotEmptySubdivision => {
                write!(f, "the dual subdivision has non-corner vertices")
            }
            TropError::NotBinomial { found } => {
                write!(f, "expected a binomial, found {found} monomial(s)")
            }
            TropError::NotGeneric => {
                write!(f, "curve has two top-dimensional faces on one line")
            }
            TropError::NotStarred => write!(f, "variety is not starred"),
            TropError::NoPointVertex => write!(f, "curve has no single point vertex"),
            TropError::PrimitivelyReducible => {
                write!(f, "input has a binomial factor; reduce it first")
            }
            TropError::InvalidIndexTuple(msg) => write!(f, "invalid index tuple: {msg}"),
        }
    }
}

impl std::error::Error for TropError {}

/// Convenience alias used across the crate.
pub type Result<T> = std::result::Result<T, TropError>;
