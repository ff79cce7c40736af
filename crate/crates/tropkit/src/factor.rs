//! Binomial divisibility, extraction, primitive reduction, and the reduced
//! closure.
//!
//! Division is decided by residuation over the upper-hull lift: the greatest
//! candidate quotient has coefficients `ĝ(u) = min_e (ν_f(u+e) − p_e)` over
//! the two monomials of the divisor, with support inside the Minkowski
//! difference of the Newton polytopes. Working with hull values `ν_f` rather
//! than raw coefficients makes the test exact up to e-equivalence, which is
//! the divisibility the factor search needs. If any quotient works, the
//! greatest one does, so a single residuation decides.

use std::collections::BTreeSet;

use num::{One, Zero};

use crate::error::{Result, TropError};
use crate::essential::{e_equiv, essential_part};
use crate::geometry::newton_polytope;
use crate::identities::closure;
use crate::lp::{LinearProgram, LpOutcome};
use crate::poly::TropPoly;
use crate::scalar::Rat;

/// Binomial factors of a polynomial with the binomial-free remainder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorizationResult {
    /// Normalized binomials `Λ^d ⊕ β` with extraction multiplicities.
    pub binomial_factors: Vec<(TropPoly, u64)>,
    /// What is left once no binomial divides; satisfies
    /// `Π q_i^{m_i} ⊙ reduced ≐ f`.
    pub reduced: TropPoly,
}

/// Upper-hull lift value of `f` at integer points: the largest height of the
/// convex hull of the lifted support over a point, `None` outside the hull.
///
/// For planar and univariate polynomials the roof comes straight from the
/// lifted upper hull; higher dimensions fall back to an exact solve with
/// memoization.
struct HullLift {
    terms: Vec<(Vec<i64>, Rat)>,
    n: usize,
    planar: Option<crate::geometry::upper_hull::PlanarLift>,
    cache: std::cell::RefCell<std::collections::BTreeMap<Vec<i64>, Option<Rat>>>,
}

impl HullLift {
    fn new(ess: &TropPoly) -> Self {
        let n = ess.n();
        let terms = ess.term_vec();
        let planar = (n <= 2).then(|| {
            let lifted: Vec<([i64; 2], Rat)> = terms
                .iter()
                .map(|(e, c)| (if n == 2 { [e[0], e[1]] } else { [e[0], 0] }, c.clone()))
                .collect();
            crate::geometry::upper_hull::planar_upper_hull(&lifted)
        });
        HullLift { terms, n, planar, cache: std::cell::RefCell::new(Default::default()) }
    }

    fn value(&self, x: &[i64]) -> Option<Rat> {
        if let Some(roof) = &self.planar {
            let p = if self.n == 2 { [x[0], x[1]] } else { [x[0], 0] };
            return match roof {
                crate::geometry::upper_hull::PlanarLift::Point(q) => {
                    (p == *q).then(|| self.terms[0].1.clone())
                }
                other => other.roof_value(&p),
            };
        }
        if let Some(hit) = self.cache.borrow().get(x) {
            return hit.clone();
        }
        let out = self.value_by_lp(x);
        self.cache.borrow_mut().insert(x.to_vec(), out.clone());
        out
    }

    fn value_by_lp(&self, x: &[i64]) -> Option<Rat> {
        let t = self.terms.len();
        let mut lp = LinearProgram::new(t);
        lp.set_objective(self.terms.iter().map(|(_, c)| c.clone()).collect());
        for k in 0..self.n {
            let row: Vec<Rat> =
                self.terms.iter().map(|(v, _)| Rat::from_integer(v[k].into())).collect();
            lp.add_eq(row, Rat::from_integer(x[k].into()));
        }
        lp.add_eq(vec![Rat::one(); t], Rat::one());
        match lp.solve() {
            LpOutcome::Optimal { value, .. } => Some(value),
            LpOutcome::Infeasible => None,
            LpOutcome::Unbounded => unreachable!("bounded by the simplex of weights"),
        }
    }

    fn bounding_box(&self) -> (Vec<i64>, Vec<i64>) {
        let mut lo = self.terms[0].0.clone();
        let mut hi = lo.clone();
        for (e, _) in &self.terms {
            for k in 0..self.n {
                lo[k] = lo[k].min(e[k]);
                hi[k] = hi[k].max(e[k]);
            }
        }
        (lo, hi)
    }

    /// All lattice points of the hull together with their lift values.
    fn lattice_points(&self) -> Vec<(Vec<i64>, Rat)> {
        let (lo, hi) = self.bounding_box();
        let mut out = Vec::new();
        let mut cur = lo.clone();
        loop {
            if let Some(v) = self.value(&cur) {
                out.push((cur.clone(), v));
            }
            let mut k = 0;
            loop {
                if k == self.n {
                    return out;
                }
                cur[k] += 1;
                if cur[k] <= hi[k] {
                    break;
                }
                cur[k] = lo[k];
                k += 1;
            }
        }
    }
}

/// Divide `f` by a binomial `p` up to e-equivalence: returns `g` with
/// `p ⊙ g ≐ f` when it exists.
pub fn divide_by_binomial(f: &TropPoly, p: &TropPoly) -> Result<Option<TropPoly>> {
    if p.num_terms() != 2 {
        return Err(TropError::NotBinomial { found: p.num_terms() });
    }
    if f.is_zero() {
        return Err(TropError::ZeroPolynomial);
    }
    if f.n() != p.n() {
        return Err(TropError::DimensionMismatch { expected: f.n(), found: p.n() });
    }
    let ess_f = essential_part(f)?;
    let lift = HullLift::new(&ess_f);
    divide_with_lift(&ess_f, &lift, p)
}

/// Residuation against a prebuilt hull lift; `ess_f` must be the essential
/// part the lift was built from.
fn divide_with_lift(ess_f: &TropPoly, lift: &HullLift, p: &TropPoly) -> Result<Option<TropPoly>> {
    let f = ess_f;
    let p_terms = p.term_vec();
    let n = f.n();
    // Candidate support: u with u + e inside the hull for both monomials of p.
    let (lo, hi) = lift.bounding_box();
    let mut quotient_terms: Vec<(Vec<i64>, Rat)> = Vec::new();
    let mut cur: Vec<i64> = (0..n)
        .map(|k| lo[k] - p_terms.iter().map(|(e, _)| e[k]).max().unwrap())
        .collect();
    let start = cur.clone();
    let end: Vec<i64> = (0..n)
        .map(|k| hi[k] - p_terms.iter().map(|(e, _)| e[k]).min().unwrap())
        .collect();
    'outer: loop {
        let mut best: Option<Rat> = None;
        let mut inside = true;
        for (e, c) in &p_terms {
            let shifted: Vec<i64> = cur.iter().zip(e).map(|(a, b)| a + b).collect();
            match lift.value(&shifted) {
                None => {
                    inside = false;
                    break;
                }
                Some(v) => {
                    let cand = v - c;
                    best = Some(match best {
                        None => cand,
                        Some(b) => {
                            if cand < b {
                                cand
                            } else {
                                b
                            }
                        }
                    });
                }
            }
        }
        if inside {
            if let Some(c) = best {
                quotient_terms.push((cur.clone(), c));
            }
        }
        let mut k = 0;
        loop {
            if k == n {
                break 'outer;
            }
            cur[k] += 1;
            if cur[k] <= end[k] {
                break;
            }
            cur[k] = start[k];
            k += 1;
        }
    }
    if quotient_terms.is_empty() {
        return Ok(None);
    }
    let candidate = essential_part(&TropPoly::from_finite_terms(n, quotient_terms)?)?;
    if e_equiv(&p.mul(&candidate)?, f)? {
        Ok(Some(candidate))
    } else {
        Ok(None)
    }
}

/// Primitive edge directions of the Newton polytope of `f`, lex-positive.
fn edge_directions(f: &TropPoly) -> Result<Vec<Vec<i64>>> {
    let data = newton_polytope(f)?;
    let verts = &data.vertices;
    let mut dirs: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut push = |d: Vec<i64>| {
        let g = d.iter().fold(0i64, |acc, &x| num::integer::gcd(acc, x.abs()));
        if g == 0 {
            return;
        }
        let mut d: Vec<i64> = d.iter().map(|x| x / g).collect();
        if d.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
            d = d.iter().map(|x| -x).collect();
        }
        dirs.insert(d);
    };
    match f.n() {
        1 | 2 => {
            // Boundary order (or the two segment endpoints) is already there.
            for i in 0..verts.len() {
                let a = &verts[i];
                let b = &verts[(i + 1) % verts.len()];
                if a != b {
                    push(a.iter().zip(b).map(|(x, y)| y - x).collect());
                }
            }
        }
        _ => {
            // A pair of hull vertices spans an edge iff some functional is
            // maximized exactly on it; a margin program decides that.
            let n = f.n();
            for i in 0..verts.len() {
                for j in (i + 1)..verts.len() {
                    if is_polytope_edge(&verts[i], &verts[j], verts, n) {
                        push(verts[i].iter().zip(&verts[j]).map(|(x, y)| y - x).collect());
                    }
                }
            }
        }
    }
    Ok(dirs.into_iter().collect())
}

fn is_polytope_edge(v: &[i64], w: &[i64], verts: &[Vec<i64>], n: usize) -> bool {
    // maximize eps s.t. <c, v> = <c, w>, <c, v - x> >= eps for all other x,
    // eps <= 1; free c.
    let mut objective = vec![Rat::zero(); n + 1];
    objective[n] = Rat::one();
    let mut eq = Vec::new();
    let mut row = vec![Rat::zero(); n + 1];
    for k in 0..n {
        row[k] = Rat::from_integer((v[k] - w[k]).into());
    }
    eq.push((row, Rat::zero()));
    let mut le = Vec::new();
    for x in verts {
        if x == v || x == w {
            continue;
        }
        let mut row = vec![Rat::zero(); n + 1];
        for k in 0..n {
            row[k] = Rat::from_integer((x[k] - v[k]).into());
        }
        row[n] = Rat::one();
        le.push((row, Rat::zero()));
    }
    let mut cap = vec![Rat::zero(); n + 1];
    cap[n] = Rat::one();
    le.push((cap, Rat::one()));
    match crate::lp::solve_free(&objective, &eq, &le) {
        LpOutcome::Optimal { value, .. } => value > Rat::zero(),
        _ => false,
    }
}

/// Find and extract every binomial factor of `f`, in a deterministic order.
///
/// Candidate divisors are `Λ^d ⊕ β` over the primitive edge directions `d`
/// of the Newton polytope and the finite set of hull-value differences
/// `±(ν_f(u) − ν_f(u+d))` along `d`; each candidate is verified by exact
/// residuation, so false candidates are harmless.
pub fn binomial_factors(f: &TropPoly) -> Result<FactorizationResult> {
    if f.is_zero() {
        return Err(TropError::ZeroPolynomial);
    }
    let mut current = essential_part(f)?;
    let mut factors: Vec<(TropPoly, u64)> = Vec::new();
    'search: loop {
        if current.num_terms() < 2 {
            break;
        }
        let dirs = edge_directions(&current)?;
        let lift = HullLift::new(&current);
        let lattice = lift.lattice_points();
        for d in &dirs {
            let mut betas: BTreeSet<Rat> = BTreeSet::new();
            for (u, nu_u) in &lattice {
                let shifted: Vec<i64> = u.iter().zip(d).map(|(a, b)| a + b).collect();
                if let Some(nu_s) = lift.value(&shifted) {
                    let delta = nu_u - &nu_s;
                    betas.insert(delta.clone());
                    betas.insert(-delta);
                }
            }
            for beta in betas {
                let p = TropPoly::from_finite_terms(
                    current.n(),
                    vec![(d.clone(), Rat::zero()), (vec![0; current.n()], beta)],
                )?;
                let mut count = 0u64;
                loop {
                    // The shared lift is only valid for the polynomial it was
                    // built from; after a successful division start fresh.
                    let quotient = if count == 0 {
                        divide_with_lift(&current, &lift, &p)?
                    } else {
                        divide_by_binomial(&current, &p)?
                    };
                    match quotient {
                        Some(q) => {
                            current = q;
                            count += 1;
                        }
                        None => break,
                    }
                }
                if count > 0 {
                    factors.push((p, count));
                    continue 'search;
                }
            }
        }
        break;
    }
    factors.sort_by(|a, b| a.0.term_vec().cmp(&b.0.term_vec()));
    let mut merged: Vec<(TropPoly, u64)> = Vec::new();
    for (p, m) in factors {
        match merged.last_mut() {
            Some((q, k)) if *q == p => *k += m,
            _ => merged.push((p, m)),
        }
    }
    Ok(FactorizationResult { binomial_factors: merged, reduced: current })
}

/// The binomial-free part of `f`; idempotent and independent of the
/// extraction order.
pub fn primitive_reduction(f: &TropPoly) -> Result<TropPoly> {
    Ok(binomial_factors(f)?.reduced)
}

/// The reduced closure: with `f ≐ g ⊙ h`, `g` the product of binomial
/// factors and `h` binomial-free, this is `g ⊙ closure(h)` (or `f` itself
/// when `h` is a monomial): the minimal product of binomials e-divisible by
/// `f`.
pub fn reduced_closure(f: &TropPoly) -> Result<TropPoly> {
    let ess = essential_part(f)?;
    if ess.num_terms() < 2 {
        return Err(TropError::TooFewTerms { needed: 2, found: ess.num_terms() });
    }
    let factored = binomial_factors(&ess)?;
    if factored.reduced.num_terms() < 2 {
        return Ok(ess);
    }
    let mut acc = factored.reduced.clone();
    acc = closure(&acc)?;
    for (p, m) in &factored.binomial_factors {
        acc = acc.mul(&p.power(*m as u32)?)?;
    }
    essential_part(&acc)
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
    fn divide_cancels_a_known_factor() {
        let f = p("x^2 + x*y + x + y + 0");
        let g = divide_by_binomial(&f, &pn("x + 0", 2)).unwrap().unwrap();
        assert_eq!(g, p("x + y + 0"));
    }

    #[test]
    fn divide_rejects_non_factors() {
        let f = pn("x + 0", 2);
        assert_eq!(divide_by_binomial(&f, &pn("y + 0", 2)).unwrap(), None);
        assert!(matches!(
            divide_by_binomial(&f, &p("x + y + 0")),
            Err(TropError::NotBinomial { found: 3 })
        ));
    }

    #[test]
    fn divide_round_trip() {
        let g = p("x^2*y + 1*x + -2");
        let q = p("x*y + 1/2");
        let f = g.mul(&q).unwrap();
        let back = divide_by_binomial(&f, &q).unwrap().expect("divides");
        assert!(e_equiv(&q.mul(&back).unwrap(), &f).unwrap());
    }

    #[test]
    fn factor_extraction_on_the_cancelling_example() {
        let f = p("x^2 + x*y + x + y + 0");
        let result = binomial_factors(&f).unwrap();
        assert_eq!(result.binomial_factors, vec![(pn("x + 0", 2), 1)]);
        assert_eq!(result.reduced, p("x + y + 0"));
        assert_eq!(primitive_reduction(&f).unwrap(), p("x + y + 0"));
    }

    #[test]
    fn line_is_primitively_irreducible() {
        let f = p("x + y + 0");
        let result = binomial_factors(&f).unwrap();
        assert!(result.binomial_factors.is_empty());
        assert_eq!(result.reduced, f);
    }

    #[test]
    fn product_of_binomials_reduces_to_a_monomial() {
        let f = pn("(x + y)(x + z)", 3);
        let result = binomial_factors(&f).unwrap();
        assert_eq!(result.binomial_factors.len(), 2);
        assert!(result.reduced.is_monomial());
        let mut back = result.reduced.clone();
        for (q, m) in &result.binomial_factors {
            back = back.mul(&q.power(*m as u32).unwrap()).unwrap();
        }
        assert!(e_equiv(&back, &f).unwrap());
    }

    #[test]
    fn repeated_factors_count_multiplicity() {
        let f = pn("x + 0", 2).power(3).unwrap().mul(&p("x + y + 0")).unwrap();
        let result = binomial_factors(&f).unwrap();
        assert_eq!(result.binomial_factors, vec![(pn("x + 0", 2), 3)]);
        assert_eq!(result.reduced, p("x + y + 0"));
    }

    #[test]
    fn reduced_closure_examples() {
        // Already a product of binomials: unchanged.
        let f = pn("(x + y)(x + z)", 3);
        assert!(e_equiv(&reduced_closure(&f).unwrap(), &f).unwrap());
        // A line: the closure of a three-term polynomial.
        let line = p("x + y + 0");
        let want = p("(x + y)(x + 0)(y + 0)");
        assert_eq!(reduced_closure(&line).unwrap(), essential_part(&want).unwrap());
        // A binomial is its own reduced closure.
        let b = p("x^2*y + 3");
        assert!(e_equiv(&reduced_closure(&b).unwrap(), &b).unwrap());
    }

    #[test]
    fn reduction_is_idempotent() {
        let f = p("x^2 + x*y + x + y + 0");
        let once = primitive_reduction(&f).unwrap();
        assert_eq!(primitive_reduction(&once).unwrap(), once);
    }
}
