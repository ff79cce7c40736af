//! Combinatorial identities of the max-plus polynomial semiring.
//!
//! For an essential polynomial `f = f_1 + ... + f_m` this module builds the
//! elementary symmetric factors `f^(k)`, the transpose `f^T = f^(m-1)`, the
//! closure `prod_{i<j} (f_i + f_j)`, and the permanent of the tropical
//! Vandermonde matrix `V_f = (f_i^{j-1})`, and verifies that all three ways
//! of writing the permanent agree up to e-equivalence. Admissible index
//! tuples, the reversal involution, and the consecutive-binomial identity for
//! empty-subdivision planar polynomials live here too.

use itertools::Itertools;
use num::Zero;

use crate::error::{Result, TropError};
use crate::essential::{e_equiv, essential_part, find_separating_point};
use crate::geometry::newton_polytope;
use crate::poly::TropPoly;
use crate::scalar::Rat;

/// Cap on the Vandermonde size: `8! = 40320` permutations.
pub const PERMANENT_CAP: usize = 8;

/// Essential monomials of `f` as single-term polynomials, in term order.
fn essential_monomials(f: &TropPoly) -> Result<Vec<(Vec<i64>, Rat)>> {
    Ok(essential_part(f)?.term_vec())
}

fn monomial_product(n: usize, parts: &[&(Vec<i64>, Rat)]) -> (Vec<i64>, Rat) {
    let mut exps = vec![0i64; n];
    let mut coeff = Rat::zero();
    for (e, c) in parts {
        for (k, x) in e.iter().enumerate() {
            exps[k] += x;
        }
        coeff += c;
    }
    (exps, coeff)
}

/// `f^(k)`: the sum over k-subsets of essential monomials of their products.
pub fn elementary_symmetric(f: &TropPoly, k: usize) -> Result<TropPoly> {
    let terms = essential_monomials(f)?;
    let m = terms.len();
    if k < 1 || (m >= 2 && k > m - 1) || (m < 2 && k > m) {
        return Err(TropError::KOutOfRange { k, m });
    }
    let n = f.n();
    let mut out = Vec::new();
    for subset in terms.iter().combinations(k) {
        out.push(monomial_product(n, &subset));
    }
    TropPoly::from_finite_terms(n, out)
}

/// The transpose polynomial `f^T = f^(m-1)`.
pub fn transpose(f: &TropPoly) -> Result<TropPoly> {
    let m = essential_monomials(f)?.len();
    if m < 2 {
        return Err(TropError::TooFewTerms { needed: 2, found: m });
    }
    elementary_symmetric(f, m - 1)
}

/// The closure `prod_{i<j} (f_i + f_j)` over pairs of essential monomials.
pub fn closure(f: &TropPoly) -> Result<TropPoly> {
    let terms = essential_monomials(f)?;
    let m = terms.len();
    if m < 2 {
        return Err(TropError::TooFewTerms { needed: 2, found: m });
    }
    let n = f.n();
    let mut acc = TropPoly::one(n);
    for i in 0..m {
        for j in (i + 1)..m {
            let pair = TropPoly::from_finite_terms(
                n,
                vec![terms[i].clone(), terms[j].clone()],
            )?;
            acc = acc.mul(&pair)?;
        }
    }
    Ok(acc)
}

/// Permanent of the tropical Vandermonde matrix, by full enumeration of the
/// `m!` permutation monomials.
pub fn vandermonde_permanent(f: &TropPoly) -> Result<TropPoly> {
    let terms = essential_monomials(f)?;
    let m = terms.len();
    if m < 2 {
        return Err(TropError::TooFewTerms { needed: 2, found: m });
    }
    if m > PERMANENT_CAP {
        return Err(TropError::PermanentTooLarge { m, cap: PERMANENT_CAP });
    }
    let n = f.n();
    let mut monomials = Vec::new();
    for perm in (0..m).permutations(m) {
        // Row i contributes f_i to the power perm[i].
        let mut exps = vec![0i64; n];
        let mut coeff = Rat::zero();
        for (i, &p) in perm.iter().enumerate() {
            let (e, c) = &terms[i];
            let p = p as i64;
            for (k, x) in e.iter().enumerate() {
                exps[k] += x * p;
            }
            coeff += c * Rat::from_integer(p.into());
        }
        monomials.push((exps, coeff));
    }
    TropPoly::from_finite_terms(n, monomials)
}

/// Outcome of checking that the permanent, the product of elementary
/// symmetric factors, and the product of pair binomials agree.
#[derive(Debug, Clone)]
pub struct IdentityReport {
    pub per: TropPoly,
    pub sym_product: TropPoly,
    pub binom_product: TropPoly,
    pub all_equal: bool,
    pub witness: Option<Vec<Rat>>,
}

/// Check `per V_f = prod_k f^(k) = prod_{i<j} (f_i + f_j)` up to
/// e-equivalence; on failure produce a point where two sides differ.
pub fn verify_main_identity(f: &TropPoly) -> Result<IdentityReport> {
    let per = vandermonde_permanent(f)?;
    let m = essential_monomials(f)?.len();
    let mut sym_product = TropPoly::one(f.n());
    for k in 1..m {
        sym_product = sym_product.mul(&elementary_symmetric(f, k)?)?;
    }
    let binom_product = closure(f)?;
    let mut witness = None;
    let mut all_equal = true;
    for (a, b) in [(&per, &sym_product), (&per, &binom_product), (&sym_product, &binom_product)] {
        if !e_equiv(a, b)? {
            all_equal = false;
            if witness.is_none() {
                witness = find_separating_point(a, b)?;
            }
        }
    }
    Ok(IdentityReport { per, sym_product, binom_product, all_equal, witness })
}

/// An m-tuple with entries in `[0, m-1]` summing to `m(m-1)/2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexTuple {
    entries: Vec<u32>,
}

impl IndexTuple {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        let m = entries.len();
        if m == 0 {
            return Err(TropError::InvalidIndexTuple("tuple is empty".into()));
        }
        if let Some(&bad) = entries.iter().find(|&&e| e as usize >= m) {
            return Err(TropError::InvalidIndexTuple(format!(
                "entry {bad} out of range 0..{m}"
            )));
        }
        let sum: u64 = entries.iter().map(|&e| e as u64).sum();
        let want = (m as u64) * (m as u64 - 1) / 2;
        if sum != want {
            return Err(TropError::InvalidIndexTuple(format!(
                "entry sum {sum}, expected {want}"
            )));
        }
        Ok(IndexTuple { entries })
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn m(&self) -> usize {
        self.entries.len()
    }

    /// How many entries equal `j`.
    pub fn j_index(&self, j: u32) -> usize {
        self.entries.iter().filter(|&&e| e == j).count()
    }

    /// The vector `(iota_{m-1}, ..., iota_0)`.
    pub fn iota(&self) -> Vec<usize> {
        (0..self.m() as u32).rev().map(|j| self.j_index(j)).collect()
    }

    /// The monomial exponent vector of this tuple in `m` variables.
    pub fn exponents(&self) -> Vec<i64> {
        self.entries.iter().map(|&e| e as i64).collect()
    }
}

/// Admissibility: for every k, the k largest entries sum to at most
/// `(m-1) + ... + (m-k) = km - k(k+1)/2`.
pub fn is_admissible(t: &IndexTuple) -> bool {
    let m = t.m() as u64;
    let mut sorted: Vec<u64> = t.entries().iter().map(|&e| e as u64).collect();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let mut prefix = 0u64;
    for (k0, &e) in sorted.iter().enumerate() {
        let k = (k0 + 1) as u64;
        prefix += e;
        if prefix > k * m - k * (k + 1) / 2 {
            return false;
        }
    }
    true
}

/// All members of the tuple family for a given `m` (entry sum `m(m-1)/2`).
pub fn enumerate_index_tuples(m: usize) -> Vec<IndexTuple> {
    let target: u32 = (m as u32) * (m as u32 - 1) / 2;
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(m);
    fn rec(m: usize, target: u32, cur: &mut Vec<u32>, out: &mut Vec<IndexTuple>) {
        if cur.len() == m {
            if target == 0 {
                out.push(IndexTuple { entries: cur.clone() });
            }
            return;
        }
        let remaining = (m - cur.len() - 1) as u32;
        for e in 0..m as u32 {
            if e > target {
                break;
            }
            // Remaining slots can contribute at most (m-1) each.
            if target - e <= remaining * (m as u32 - 1) {
                cur.push(e);
                rec(m, target - e, cur, out);
                cur.pop();
            }
        }
    }
    rec(m, target, &mut cur, &mut out);
    out
}

/// The reversal `f^*`: negate every coefficient and every exponent. An exact
/// involution that swaps the max-plus and min-plus readings of `f`.
pub fn reversal(f: &TropPoly) -> Result<TropPoly> {
    if f.is_zero() {
        return Err(TropError::ZeroPolynomial);
    }
    TropPoly::from_finite_terms(
        f.n(),
        f.terms().map(|(e, c)| (e.iter().map(|&x| -x).collect(), -c.clone())),
    )
}

/// Result of the consecutive-binomial identity check
/// `f ⊙ f^T = (f_1+f_2)(f_2+f_3)...(f_m+f_1)` with the monomials ordered
/// along the Newton polygon boundary.
#[derive(Debug, Clone)]
pub struct CyclicFactorizationReport {
    pub lhs: TropPoly,
    pub rhs: TropPoly,
    /// Boundary order used, counterclockwise from the lexicographically
    /// smallest vertex.
    pub order: Vec<Vec<i64>>,
    pub holds: bool,
    pub witness: Option<Vec<Rat>>,
}

/// Verify the consecutive-binomial identity for a planar polynomial whose
/// dual subdivision is empty.
pub fn verify_consecutive_binomials(f: &TropPoly) -> Result<CyclicFactorizationReport> {
    if f.n() != 2 {
        return Err(TropError::NotPlanar { n: f.n() });
    }
    let ess = essential_part(f)?;
    let m = ess.num_terms();
    if m < 2 {
        return Err(TropError::TooFewTerms { needed: 2, found: m });
    }
    if !crate::geometry::is_starred(f)? {
        return Err(TropError::NotEmptySubdivision);
    }
    // With an empty subdivision every essential monomial is a polygon vertex;
    // take them in counterclockwise boundary order.
    let newton = newton_polytope(&ess)?;
    let order = newton.vertices.clone();
    debug_assert_eq!(order.len(), m);
    let terms: Vec<(Vec<i64>, Rat)> = order
        .iter()
        .map(|v| {
            let c = ess.coeff(v).as_finite().expect("vertex monomial").clone();
            (v.clone(), c)
        })
        .collect();
    let lhs = ess.mul(&transpose(&ess)?)?;
    let mut rhs = TropPoly::one(2);
    for i in 0..m {
        let j = (i + 1) % m;
        let pair =
            TropPoly::from_finite_terms(2, vec![terms[i].clone(), terms[j].clone()])?;
        rhs = rhs.mul(&pair)?;
    }
    let holds = e_equiv(&lhs, &rhs)?;
    let witness = if holds { None } else { find_separating_point(&lhs, &rhs)? };
    Ok(CyclicFactorizationReport { lhs, rhs, order, holds, witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_poly;

    fn p(src: &str) -> TropPoly {
        parse_poly(src, None).unwrap().poly
    }

    fn pn(src: &str, n: usize) -> TropPoly {
        parse_poly(src, Some(n)).unwrap().poly
    }

    #[test]
    fn elementary_symmetric_of_node_curve() {
        let f = p("x^2*y + x + 0");
        assert_eq!(elementary_symmetric(&f, 2).unwrap(), p("x^3*y + x^2*y + x"));
        assert_eq!(elementary_symmetric(&f, 1).unwrap(), f);
        let g = p("x + y + 0");
        assert_eq!(elementary_symmetric(&g, 2).unwrap(), p("x*y + x + y"));
        assert!(matches!(
            elementary_symmetric(&f, 3),
            Err(TropError::KOutOfRange { k: 3, m: 3 })
        ));
    }

    #[test]
    fn transpose_examples() {
        assert_eq!(transpose(&p("x^2*y + x + 0")).unwrap(), p("x^3*y + x^2*y + x"));
        let binom = p("x + 2*y");
        assert_eq!(transpose(&binom).unwrap(), binom);
        assert_eq!(transpose(&p("x + y + 0")).unwrap(), p("x*y + x + y"));
        assert!(matches!(transpose(&p("x^2")), Err(TropError::TooFewTerms { .. })));
    }

    #[test]
    fn closure_of_line_is_pair_product() {
        let f = pn("x + y + z", 3);
        let want = pn("(x + y)(x + z)(y + z)", 3);
        assert_eq!(closure(&f).unwrap(), want);
        let binom = p("x + 1");
        assert_eq!(closure(&binom).unwrap(), binom);
    }

    #[test]
    fn closure_growth_example() {
        // f = (x+y)(x+z) expanded; its closure matches the displayed product.
        let f = pn("(x + y)(x + z)", 3);
        let rhs = pn("x^3*y*z*(x+y)^2*(x+z)^2*(y+z)*(x^2+y*z)", 3);
        assert!(e_equiv(&closure(&f).unwrap(), &rhs).unwrap());
    }

    #[test]
    fn permanent_equals_closure_and_sym_product() {
        let f = p("x + y + 1");
        let report = verify_main_identity(&f).unwrap();
        assert!(report.all_equal);
        // The two printed factorizations of the worked example.
        let middle = p("(x + y + 1)(1*x + 1*y + x*y)");
        let binom = p("(x + y)(x + 1)(y + 1)");
        assert!(e_equiv(&report.per, &middle).unwrap());
        assert!(e_equiv(&report.per, &binom).unwrap());
    }

    #[test]
    fn permanent_of_binomial_is_itself() {
        let f = p("x^2*y + 3");
        let per = vandermonde_permanent(&f).unwrap();
        assert!(e_equiv(&per, &f).unwrap());
    }

    #[test]
    fn index_tuples_and_admissibility() {
        let perm = IndexTuple::new(vec![0, 1, 2, 3]).unwrap();
        assert!(is_admissible(&perm));
        assert_eq!(perm.iota(), vec![1, 1, 1, 1]);
        let bad = IndexTuple::new(vec![3, 3, 0, 0]).unwrap();
        assert!(!is_admissible(&bad));
        let ok = IndexTuple::new(vec![3, 1, 1, 1]).unwrap();
        assert!(is_admissible(&ok));
        assert!(IndexTuple::new(vec![3, 3, 3, 0]).is_err());
        // m = 4 family: entries in [0,3] summing to 6.
        let family = enumerate_index_tuples(4);
        assert!(family.contains(&perm));
        assert!(family.contains(&bad));
        assert_eq!(family.iter().filter(|t| t.iota() == vec![1, 1, 1, 1]).count(), 24);
    }

    #[test]
    fn reversal_is_an_involution_with_the_transpose_relation() {
        let f = p("x^2*y + x + 0");
        let rev = reversal(&f).unwrap();
        assert_eq!(reversal(&rev).unwrap(), f);
        assert_eq!(rev, p("x^-2*y^-1 + x^-1 + 0"));
        // f^T = (prod f_i) * f^* exactly for this example.
        let prod_monomial = p("x^3*y");
        assert_eq!(prod_monomial.mul(&rev).unwrap(), transpose(&f).unwrap());
    }

    #[test]
    fn consecutive_binomials_on_empty_subdivision() {
        let report = verify_consecutive_binomials(&p("x^2*y + x + 0")).unwrap();
        assert!(report.holds);
        // A binomial: both sides are f^2.
        let report = verify_consecutive_binomials(&p("x + 2*y")).unwrap();
        assert!(report.holds);
        // Interior vertex (1,1) at lift 1: precondition fails.
        assert!(matches!(
            verify_consecutive_binomials(&p("x^2*y^2 + 1*x*y + x + y")),
            Err(TropError::NotEmptySubdivision)
        ));
    }
}
