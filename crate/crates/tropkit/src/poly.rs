//! Tropical Laurent polynomials: finite maps from integer exponent vectors to
//! finite rational coefficients, with the semiring operations induced by
//! `(max, +)` on coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num::Zero;

use crate::error::{Result, TropError};
use crate::scalar::{rat_string, Rat, TropScalar};

/// A tropical Laurent polynomial in `n` commuting variables.
///
/// Terms with a `-inf` coefficient are dropped on construction; duplicate
/// exponent vectors merge by coefficient maximum. The empty term map is the
/// zero polynomial (the constant `-inf` function).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TropPoly {
    n: usize,
    terms: BTreeMap<Vec<i64>, Rat>,
}

impl TropPoly {
    /// The zero polynomial in `n` variables.
    pub fn zero(n: usize) -> Self {
        TropPoly { n, terms: BTreeMap::new() }
    }

    /// The constant polynomial `c` (tropical unit when `c = 0`).
    pub fn constant(n: usize, c: Rat) -> Self {
        Self::monomial(n, vec![0; n], c)
    }

    /// Multiplicative identity: the constant 0 monomial.
    pub fn one(n: usize) -> Self {
        Self::constant(n, Rat::zero())
    }

    /// A single monomial `c ⊙ Λ^exps`.
    pub fn monomial(n: usize, exps: Vec<i64>, c: Rat) -> Self {
        assert_eq!(exps.len(), n, "exponent vector length must equal n");
        let mut terms = BTreeMap::new();
        terms.insert(exps, c);
        TropPoly { n, terms }
    }

    /// Build from `(exponents, coefficient)` pairs; duplicates merge by max
    /// and `-inf` coefficients are dropped.
    pub fn from_terms<I>(n: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i64>, TropScalar)>,
    {
        let mut terms: BTreeMap<Vec<i64>, Rat> = BTreeMap::new();
        for (exps, c) in pairs {
            if exps.len() != n {
                return Err(TropError::DimensionMismatch { expected: n, found: exps.len() });
            }
            let c = match c {
                TropScalar::NegInf => continue,
                TropScalar::Finite(c) => c,
            };
            terms
                .entry(exps)
                .and_modify(|old| {
                    if c > *old {
                        *old = c.clone();
                    }
                })
                .or_insert(c);
        }
        Ok(TropPoly { n, terms })
    }

    /// Like [`from_terms`](Self::from_terms) but for finite coefficients.
    pub fn from_finite_terms<I>(n: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i64>, Rat)>,
    {
        Self::from_terms(n, pairs.into_iter().map(|(e, c)| (e, TropScalar::Finite(c))))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// True when the polynomial is a single monomial.
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Terms in lexicographically ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Rat)> {
        self.terms.iter()
    }

    /// Owned `(exponents, coefficient)` list, ascending exponent order.
    pub fn term_vec(&self) -> Vec<(Vec<i64>, Rat)> {
        self.terms.iter().map(|(e, c)| (e.clone(), c.clone())).collect()
    }

    /// Support: the exponent vectors carrying a finite coefficient.
    pub fn support(&self) -> Vec<Vec<i64>> {
        self.terms.keys().cloned().collect()
    }

    /// Coefficient at an exponent vector (`-inf` when absent).
    pub fn coeff(&self, exps: &[i64]) -> TropScalar {
        match self.terms.get(exps) {
            Some(c) => TropScalar::Finite(c.clone()),
            None => TropScalar::NegInf,
        }
    }

    fn check_dims(&self, other: &TropPoly) -> Result<()> {
        if self.n != other.n {
            return Err(TropError::DimensionMismatch { expected: self.n, found: other.n });
        }
        Ok(())
    }

    /// Tropical sum: termwise coefficient max over the union of supports.
    pub fn add(&self, other: &TropPoly) -> Result<TropPoly> {
        self.check_dims(other)?;
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            terms
                .entry(e.clone())
                .and_modify(|old| {
                    if c > old {
                        *old = c.clone();
                    }
                })
                .or_insert_with(|| c.clone());
        }
        Ok(TropPoly { n: self.n, terms })
    }

    /// Tropical product: max-plus convolution; the zero polynomial annihilates.
    pub fn mul(&self, other: &TropPoly) -> Result<TropPoly> {
        self.check_dims(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(TropPoly::zero(self.n));
        }
        let mut terms: BTreeMap<Vec<i64>, Rat> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<i64> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let c = c1 + c2;
                terms
                    .entry(e)
                    .and_modify(|old| {
                        if c > *old {
                            *old = c.clone();
                        }
                    })
                    .or_insert(c);
            }
        }
        Ok(TropPoly { n: self.n, terms })
    }

    /// `f^m` by repeated multiplication, `m >= 1`.
    pub fn power(&self, m: u32) -> Result<TropPoly> {
        assert!(m >= 1, "power requires m >= 1");
        let mut acc = self.clone();
        for _ in 1..m {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Evaluate at a point of `(Q ∪ {-inf})^n`.
    ///
    /// A `-inf` coordinate is only admissible where every term carries a
    /// non-negative exponent for it; a positive power of `-inf` contributes
    /// `-inf` to its term, a zero power contributes the tropical unit.
    pub fn evaluate(&self, point: &[TropScalar]) -> Result<TropScalar> {
        if point.len() != self.n {
            return Err(TropError::DimensionMismatch { expected: self.n, found: point.len() });
        }
        for (k, coord) in point.iter().enumerate() {
            if coord.is_neg_inf() {
                for e in self.terms.keys() {
                    if e[k] < 0 {
                        return Err(TropError::UndefinedPower { var: k, exponent: e[k] });
                    }
                }
            }
        }
        let mut best = TropScalar::NegInf;
        for (e, c) in &self.terms {
            let v = term_value(e, c, point);
            if v > best {
                best = v;
            }
        }
        Ok(best)
    }

    /// Evaluate at an all-finite rational point (no precondition to check).
    pub fn evaluate_rational(&self, point: &[Rat]) -> TropScalar {
        assert_eq!(point.len(), self.n);
        let mut best: Option<Rat> = None;
        for (e, c) in &self.terms {
            let v = finite_term_value(e, c, point);
            match &best {
                Some(b) if *b >= v => {}
                _ => best = Some(v),
            }
        }
        match best {
            Some(b) => TropScalar::Finite(b),
            None => TropScalar::NegInf,
        }
    }

    /// Exponent-vector total degrees, e.g. for homogeneity checks.
    pub fn term_degrees(&self) -> Vec<i64> {
        self.terms.keys().map(|e| e.iter().sum()).collect()
    }

    /// Variable names used by `Display`: `x, y, z` for up to three variables,
    /// `x1..xn` beyond.
    pub fn default_var_names(n: usize) -> Vec<String> {
        if n <= 3 {
            ["x", "y", "z"].iter().take(n).map(|s| s.to_string()).collect()
        } else {
            (1..=n).map(|i| format!("x{i}")).collect()
        }
    }

    /// Render with explicit variable names (must have length `n`).
    pub fn display_with(&self, names: &[String]) -> String {
        assert_eq!(names.len(), self.n);
        if self.terms.is_empty() {
            return "-inf".to_string();
        }
        let mut parts = Vec::with_capacity(self.terms.len());
        // Lexicographically descending so leading terms print first.
        for (e, c) in self.terms.iter().rev() {
            let mut factors: Vec<String> = Vec::new();
            if !c.is_zero() || e.iter().all(|&k| k == 0) {
                factors.push(rat_string(c));
            }
            for (k, &p) in e.iter().enumerate() {
                match p {
                    0 => {}
                    1 => factors.push(names[k].clone()),
                    _ => factors.push(format!("{}^{}", names[k], p)),
                }
            }
            parts.push(factors.join("*"));
        }
        parts.join(" + ")
    }
}

/// Value of one term at a (possibly `-inf`) point. Assumes admissibility.
pub fn term_value(exps: &[i64], coeff: &Rat, point: &[TropScalar]) -> TropScalar {
    let mut acc = coeff.clone();
    for (k, a) in point.iter().enumerate() {
        if exps[k] == 0 {
            continue;
        }
        match a {
            TropScalar::NegInf => return TropScalar::NegInf,
            TropScalar::Finite(v) => acc += v * Rat::from_integer(exps[k].into()),
        }
    }
    TropScalar::Finite(acc)
}

/// Value of one term at an all-finite point: `coeff + <exps, point>`.
pub fn finite_term_value(exps: &[i64], coeff: &Rat, point: &[Rat]) -> Rat {
    let mut acc = coeff.clone();
    for (k, v) in point.iter().enumerate() {
        if exps[k] != 0 {
            acc += v * Rat::from_integer(exps[k].into());
        }
    }
    acc
}

impl fmt::Display for TropPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&TropPoly::default_var_names(self.n)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn p(src: &str) -> TropPoly {
        crate::expr::parse_poly(src, None).unwrap().poly
    }

    #[test]
    fn construction_merges_duplicates_and_drops_neg_inf() {
        let f = TropPoly::from_terms(
            1,
            vec![
                (vec![1], TropScalar::finite(0)),
                (vec![1], TropScalar::finite(2)),
                (vec![0], TropScalar::NegInf),
            ],
        )
        .unwrap();
        assert_eq!(f.num_terms(), 1);
        assert_eq!(f.coeff(&[1]), TropScalar::finite(2));
    }

    #[test]
    fn add_unions_supports_with_coefficient_max() {
        let f = p("x + 0");
        let g = p("x + 1");
        assert_eq!(f.add(&g).unwrap(), p("x + 1"));
        let h = p("x^2 + y^2").add(&p("1*x*y")).unwrap();
        assert_eq!(h, p("x^2 + 1*x*y + y^2"));
    }

    #[test]
    fn add_zero_is_identity_and_mul_zero_annihilates() {
        let f = p("x^2*y + x + 0");
        let z = TropPoly::zero(2);
        assert_eq!(f.add(&z).unwrap(), f);
        assert!(f.mul(&z).unwrap().is_zero());
    }

    #[test]
    fn mul_is_max_plus_convolution() {
        // (x + 0)^2 = x^2 + x + 0, the x coefficient being max(0+0, 0+0).
        let f = p("x + 0");
        assert_eq!(f.power(2).unwrap(), p("x^2 + x + 0"));
        // Cancelling-factor example: (x + 0)(x + y + 0).
        let f2 = crate::expr::parse_poly("x + 0", Some(2)).unwrap().poly;
        let g = f2.mul(&p("x + y + 0")).unwrap();
        assert_eq!(g, p("x^2 + x*y + x + y + 0"));
    }

    #[test]
    fn evaluate_handles_neg_inf_coordinates() {
        let f = p("x^2*y");
        let v = f
            .evaluate(&[TropScalar::NegInf, TropScalar::finite(5)])
            .unwrap();
        assert_eq!(v, TropScalar::NegInf);
        // Negative exponent at a -inf coordinate is undefined.
        let g = p("x^-1 + y");
        assert!(matches!(
            g.evaluate(&[TropScalar::NegInf, TropScalar::finite(0)]),
            Err(TropError::UndefinedPower { var: 0, .. })
        ));
        // Zero polynomial evaluates to -inf.
        assert_eq!(
            TropPoly::zero(1).evaluate(&[TropScalar::finite(7)]).unwrap(),
            TropScalar::NegInf
        );
    }

    #[test]
    fn evaluate_ties_at_vertex() {
        // f = x^2 y + x + 0 at (0,0): all three monomials tie at 0.
        let f = p("x^2*y + x + 0");
        assert_eq!(f.evaluate_rational(&[rat(0), rat(0)]), TropScalar::finite(0));
        // Conic with unit coefficient at (-1, 0) evaluates to 0.
        let g = p("x^2 + y^2 + 1*x*y + 0");
        assert_eq!(g.evaluate_rational(&[rat(-1), rat(0)]), TropScalar::finite(0));
    }

    #[test]
    fn display_round_trips_through_parser() {
        let f = p("x^2*y + -1/2*x + 0");
        let printed = f.to_string();
        assert_eq!(crate::expr::parse_poly(&printed, None).unwrap().poly, f);
    }
}
