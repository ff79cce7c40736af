//! Scalars of the max-plus semiring: exact rationals extended by `-inf`.

use std::cmp::Ordering;
use std::fmt;

use num::BigRational;

use crate::error::{Result, TropError};

/// Exact rational coefficient type used everywhere in the crate.
pub type Rat = BigRational;

/// Build a rational from an integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

/// Build a rational from numerator and denominator.
pub fn ratio(num: i64, den: i64) -> Rat {
    Rat::new(num.into(), den.into())
}

/// Render a rational as `p` or `p/q` (always reduced, sign on the numerator).
pub fn rat_string(r: &Rat) -> String {
    if r.denom() == &num::BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// An element of the semiring `(R ∪ {-inf}, max, +)`.
///
/// `NegInf` is the additive identity and absorbs under multiplication.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TropScalar {
    NegInf,
    Finite(Rat),
}

impl TropScalar {
    pub fn finite(n: i64) -> Self {
        TropScalar::Finite(rat(n))
    }

    pub fn is_neg_inf(&self) -> bool {
        matches!(self, TropScalar::NegInf)
    }

    /// Tropical sum: maximum.
    pub fn add(&self, other: &TropScalar) -> TropScalar {
        match (self, other) {
            (TropScalar::NegInf, b) => b.clone(),
            (a, TropScalar::NegInf) => a.clone(),
            (TropScalar::Finite(a), TropScalar::Finite(b)) => {
                TropScalar::Finite(a.max(b).clone())
            }
        }
    }

    /// Tropical product: classical addition, `-inf` absorbing.
    pub fn mul(&self, other: &TropScalar) -> TropScalar {
        match (self, other) {
            (TropScalar::NegInf, _) | (_, TropScalar::NegInf) => TropScalar::NegInf,
            (TropScalar::Finite(a), TropScalar::Finite(b)) => TropScalar::Finite(a + b),
        }
    }

    /// Tropical multiplicative inverse: classical negation of a finite value.
    pub fn inverse(&self) -> Result<TropScalar> {
        match self {
            TropScalar::NegInf => Err(TropError::NegInfInverse),
            TropScalar::Finite(a) => Ok(TropScalar::Finite(-a)),
        }
    }

    pub fn as_finite(&self) -> Option<&Rat> {
        match self {
            TropScalar::NegInf => None,
            TropScalar::Finite(a) => Some(a),
        }
    }
}

impl PartialOrd for TropScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TropScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (TropScalar::NegInf, TropScalar::NegInf) => Ordering::Equal,
            (TropScalar::NegInf, _) => Ordering::Less,
            (_, TropScalar::NegInf) => Ordering::Greater,
            (TropScalar::Finite(a), TropScalar::Finite(b)) => a.cmp(b),
        }
    }
}

impl From<Rat> for TropScalar {
    fn from(r: Rat) -> Self {
        TropScalar::Finite(r)
    }
}

impl fmt::Display for TropScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TropScalar::NegInf => write!(f, "-inf"),
            TropScalar::Finite(a) => write!(f, "{}", rat_string(a)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neg_inf_is_additive_identity_and_absorbing() {
        let a = TropScalar::finite(3);
        assert_eq!(TropScalar::NegInf.add(&a), a);
        assert_eq!(a.add(&TropScalar::NegInf), a);
        assert_eq!(a.mul(&TropScalar::NegInf), TropScalar::NegInf);
    }

    #[test]
    fn add_is_max_and_mul_is_plus() {
        let a = TropScalar::finite(2);
        let b = TropScalar::finite(-5);
        assert_eq!(a.add(&b), a);
        assert_eq!(a.mul(&b), TropScalar::finite(-3));
    }

    #[test]
    fn inverse_of_finite_is_negation() {
        let a = TropScalar::Finite(ratio(3, 2));
        assert_eq!(a.inverse().unwrap(), TropScalar::Finite(ratio(-3, 2)));
        assert_eq!(TropScalar::NegInf.inverse(), Err(TropError::NegInfInverse));
    }
}
