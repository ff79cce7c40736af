//! Essential parts, domination, and e-equivalence.
//!
//! A monomial of `f` is essential when it strictly exceeds all other
//! monomials somewhere on `R^n`; equivalently its lifted point
//! `(exponents, coefficient)` is a vertex of the upper convex hull of the
//! lifted support. Both views are decided exactly here: domination of a
//! monomial is a rational linear feasibility question (is the lifted point
//! on or below the hull roof?), and the dual margin program is kept around
//! as an independent oracle and witness generator.

use std::collections::HashMap;

use num::{One, Signed, Zero};

use crate::error::{Result, TropError};
use crate::lp::{solve_free, LinearProgram, LpOutcome};
use crate::poly::TropPoly;
use crate::scalar::Rat;

/// Is the monomial `beta ⊙ Λ^u` dominated by `max` of the given terms?
///
/// Decided by exact feasibility of a convex-combination system: the lifted
/// point `(u, beta)` lies on or below the upper hull of the lifted `terms`.
pub fn monomial_dominated(u: &[i64], beta: &Rat, terms: &[(Vec<i64>, Rat)]) -> bool {
    if terms.is_empty() {
        return false;
    }
    let n = u.len();
    let t = terms.len();
    // Variables: lambda_j >= 0 (one per term) and a surplus s >= 0.
    // sum lambda_j v_j = u, sum lambda_j = 1, sum lambda_j gamma_j - s = beta.
    let mut lp = LinearProgram::new(t + 1);
    for k in 0..n {
        let mut row = vec![Rat::zero(); t + 1];
        for (j, (v, _)) in terms.iter().enumerate() {
            row[j] = Rat::from_integer(v[k].into());
        }
        lp.add_eq(row, Rat::from_integer(u[k].into()));
    }
    let mut row_one = vec![Rat::zero(); t + 1];
    for cell in row_one.iter_mut().take(t) {
        *cell = Rat::one();
    }
    lp.add_eq(row_one, Rat::one());
    let mut row_lift = vec![Rat::zero(); t + 1];
    for (j, (_, gamma)) in terms.iter().enumerate() {
        row_lift[j] = gamma.clone();
    }
    row_lift[t] = -Rat::one();
    lp.add_eq(row_lift, beta.clone());
    !matches!(lp.solve(), LpOutcome::Infeasible)
}

/// Margin program for the same question: maximize `eps` subject to
/// `beta + <u, a> >= gamma_j + <v_j, a> + eps` for every rival term and
/// `eps <= 1`. The monomial is essential among the rivals iff the optimum is
/// strictly positive; the optimizer `a` is then a witness point where it
/// strictly exceeds all of them.
pub fn essential_margin(u: &[i64], beta: &Rat, rivals: &[(Vec<i64>, Rat)]) -> (Rat, Vec<Rat>) {
    let n = u.len();
    // Free variables: a_1..a_n, eps.
    let mut objective = vec![Rat::zero(); n + 1];
    objective[n] = Rat::one();
    let mut le: Vec<(Vec<Rat>, Rat)> = Vec::with_capacity(rivals.len() + 1);
    for (v, gamma) in rivals {
        let mut row = vec![Rat::zero(); n + 1];
        for k in 0..n {
            row[k] = Rat::from_integer((v[k] - u[k]).into());
        }
        row[n] = Rat::one();
        le.push((row, beta - gamma));
    }
    let mut cap = vec![Rat::zero(); n + 1];
    cap[n] = Rat::one();
    le.push((cap, Rat::one()));
    match solve_free(&objective, &[], &le) {
        LpOutcome::Optimal { value, mut solution } => {
            solution.truncate(n);
            (value, solution)
        }
        _ => unreachable!("margin program is feasible and bounded"),
    }
}

/// Deterministic integer sample points used as exact strict-winner
/// certificates before any linear program runs.
fn sample_points(n: usize) -> Vec<Vec<i64>> {
    let mut state: u64 = 0x9E37_79B9_7F4A_7C15;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    let mut pts = Vec::new();
    pts.push(vec![0; n]);
    for _ in 0..24 {
        pts.push((0..n).map(|_| (next() % 19) as i64 - 9).collect());
    }
    // Magnified directions make hull-corner monomials win outright.
    for k in 0..n {
        for sign in [1i64, -1] {
            let mut p: Vec<i64> = (0..n).map(|_| (next() % 7) as i64 - 3).collect();
            p[k] += sign * 101;
            pts.push(p);
        }
    }
    for _ in 0..8 {
        pts.push((0..n).map(|_| ((next() % 5) as i64 - 2) * 73 + (next() % 9) as i64 - 4).collect());
    }
    pts
}

fn dot(u: &[i64], a: &[i64]) -> i128 {
    u.iter().zip(a).map(|(&x, &y)| x as i128 * y as i128).sum()
}

/// Indices of the essential terms of the given term list.
fn essential_indices(terms: &[(Vec<i64>, Rat)]) -> Vec<usize> {
    let t = terms.len();
    if t == 1 {
        return vec![0];
    }
    let n = terms[0].0.len();
    if n <= 2 {
        // Planar (and univariate) polynomials: essential terms are exactly
        // the vertices of the lifted upper hull, computed directly.
        let lifted: Vec<([i64; 2], Rat)> = terms
            .iter()
            .map(|(e, c)| {
                let p = if n == 2 { [e[0], e[1]] } else { [e[0], 0] };
                (p, c.clone())
            })
            .collect();
        let keep: std::collections::BTreeSet<[i64; 2]> =
            crate::geometry::upper_hull::planar_upper_hull(&lifted)
                .essential_points()
                .into_iter()
                .collect();
        return (0..t)
            .filter(|&i| {
                let e = &terms[i].0;
                let p = if n == 2 { [e[0], e[1]] } else { [e[0], 0] };
                keep.contains(&p)
            })
            .collect();
    }
    #[derive(Clone, Copy, PartialEq)]
    enum Status {
        Unknown,
        Essential,
        Inessential,
    }
    let mut status = vec![Status::Unknown; t];

    // Midpoint certificates: a term whose lifted point sits on or below the
    // chord of two others is dominated by them.
    let index_of: HashMap<&[i64], usize> =
        terms.iter().enumerate().map(|(i, (e, _))| (e.as_slice(), i)).collect();
    for i in 0..t {
        for j in (i + 1)..t {
            let (ei, ci) = &terms[i];
            let (ej, cj) = &terms[j];
            if ei.iter().zip(ej.iter()).all(|(a, b)| (a + b) % 2 == 0) {
                let mid: Vec<i64> = ei.iter().zip(ej.iter()).map(|(a, b)| (a + b) / 2).collect();
                if let Some(&k) = index_of.get(mid.as_slice()) {
                    if k != i && k != j {
                        let two = Rat::from_integer(2.into());
                        if &terms[k].1 * two <= ci + cj {
                            status[k] = Status::Inessential;
                        }
                    }
                }
            }
        }
    }

    // A support point extreme in some direction is essential no matter the
    // coefficients.
    let n = terms[0].0.len();
    let mut dirs: Vec<Vec<i64>> = Vec::new();
    for k in 0..n {
        let mut d = vec![0i64; n];
        d[k] = 1;
        dirs.push(d.clone());
        d[k] = -1;
        dirs.push(d);
    }
    for d in &dirs {
        let mut best: Option<(i128, usize, bool)> = None;
        for (i, (e, _)) in terms.iter().enumerate() {
            let v = dot(e, d);
            best = match best {
                None => Some((v, i, true)),
                Some((bv, bi, strict)) => {
                    if v > bv {
                        Some((v, i, true))
                    } else if v == bv {
                        Some((bv, bi, false))
                    } else {
                        Some((bv, bi, strict))
                    }
                }
            };
        }
        if let Some((_, i, true)) = best {
            status[i] = Status::Essential;
        }
    }

    // Strict winners at exact sample points are essential by definition.
    for a in sample_points(n) {
        let mut best: Option<(Rat, usize, bool)> = None;
        for (i, (e, c)) in terms.iter().enumerate() {
            if status[i] == Status::Inessential {
                continue;
            }
            let v = c + Rat::from_integer(dot(e, &a).into());
            best = match best.take() {
                None => Some((v, i, true)),
                Some((bv, bi, strict)) => {
                    if v > bv {
                        Some((v, i, true))
                    } else if v == bv {
                        Some((bv, bi, false))
                    } else {
                        Some((bv, bi, strict))
                    }
                }
            };
        }
        if let Some((_, i, true)) = best {
            status[i] = Status::Essential;
        }
    }

    // Exact decision for whatever is left. Testing against the already
    // certified essential set first keeps the programs small; only a term the
    // small set fails to dominate needs the full rival list.
    for i in 0..t {
        if status[i] != Status::Unknown {
            continue;
        }
        let (u, beta) = &terms[i];
        let certified: Vec<(Vec<i64>, Rat)> = (0..t)
            .filter(|&j| j != i && status[j] == Status::Essential)
            .map(|j| terms[j].clone())
            .collect();
        if !certified.is_empty() && monomial_dominated(u, beta, &certified) {
            status[i] = Status::Inessential;
            continue;
        }
        let rivals: Vec<(Vec<i64>, Rat)> =
            (0..t).filter(|&j| j != i).map(|j| terms[j].clone()).collect();
        status[i] = if monomial_dominated(u, beta, &rivals) {
            Status::Inessential
        } else {
            Status::Essential
        };
    }

    (0..t).filter(|&i| status[i] == Status::Essential).collect()
}

/// The essential part of a nonzero polynomial: the sum of the monomials whose
/// lifted points are vertices of the upper hull. Idempotent and equal to `f`
/// as a function.
pub fn essential_part(f: &TropPoly) -> Result<TropPoly> {
    if f.is_zero() {
        return Err(TropError::ZeroPolynomial);
    }
    let terms = f.term_vec();
    let keep = essential_indices(&terms);
    TropPoly::from_finite_terms(f.n(), keep.into_iter().map(|i| terms[i].clone()))
}

/// Does `f` dominate `g`, i.e. `g(a) <= f(a)` for all real points `a`?
pub fn dominates(f: &TropPoly, g: &TropPoly) -> Result<bool> {
    if f.n() != g.n() {
        return Err(TropError::DimensionMismatch { expected: f.n(), found: g.n() });
    }
    if g.is_zero() {
        return Ok(true);
    }
    if f.is_zero() {
        return Ok(false);
    }
    let n = f.n();
    let g_terms = g.term_vec();
    if n <= 2 {
        // Compare each monomial of g against the roof of f directly.
        let lifted: Vec<([i64; 2], Rat)> = f
            .term_vec()
            .into_iter()
            .map(|(e, c)| (if n == 2 { [e[0], e[1]] } else { [e[0], 0] }, c))
            .collect();
        let hull = crate::geometry::upper_hull::planar_upper_hull(&lifted);
        for (u, beta) in &g_terms {
            let p = if n == 2 { [u[0], u[1]] } else { [u[0], 0] };
            let roof = match &hull {
                crate::geometry::upper_hull::PlanarLift::Point(q) => {
                    (p == *q).then(|| lifted[0].1.clone())
                }
                other => other.roof_value(&p),
            };
            match roof {
                Some(v) if *beta <= v => {}
                _ => return Ok(false),
            }
        }
        return Ok(true);
    }
    let roof = essential_part(f)?.term_vec();
    // Cheap exact disproof by sampling before any feasibility solve.
    for a in sample_points(n) {
        let f_val = roof
            .iter()
            .map(|(e, c)| c + Rat::from_integer(dot(e, &a).into()))
            .max()
            .expect("nonzero");
        for (e, c) in &g_terms {
            if c + Rat::from_integer(dot(e, &a).into()) > f_val {
                return Ok(false);
            }
        }
    }
    for (u, beta) in &g_terms {
        if !monomial_dominated(u, beta, &roof) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Essential equivalence: equality as functions on all of `R^n`.
pub fn e_equiv(f: &TropPoly, g: &TropPoly) -> Result<bool> {
    if f.n() != g.n() {
        return Err(TropError::DimensionMismatch { expected: f.n(), found: g.n() });
    }
    match (f.is_zero(), g.is_zero()) {
        (true, true) => return Ok(true),
        (true, false) | (false, true) => return Ok(false),
        _ => {}
    }
    Ok(essential_part(f)? == essential_part(g)?)
}

/// A rational point where `f` and `g` differ as functions, if one exists.
///
/// Sampling runs first; any survivor is resolved exactly through margin
/// programs, one per essential monomial of either side.
pub fn find_separating_point(f: &TropPoly, g: &TropPoly) -> Result<Option<Vec<Rat>>> {
    if f.n() != g.n() {
        return Err(TropError::DimensionMismatch { expected: f.n(), found: g.n() });
    }
    let n = f.n();
    match (f.is_zero(), g.is_zero()) {
        (true, true) => return Ok(None),
        _ if f.is_zero() != g.is_zero() => return Ok(Some(vec![Rat::zero(); n])),
        _ => {}
    }
    for a in sample_points(n) {
        let pt: Vec<Rat> = a.iter().map(|&x| Rat::from_integer(x.into())).collect();
        if f.evaluate_rational(&pt) != g.evaluate_rational(&pt) {
            return Ok(Some(pt));
        }
    }
    let ef = essential_part(f)?.term_vec();
    let eg = essential_part(g)?.term_vec();
    for (own, other) in [(&ef, &eg), (&eg, &ef)] {
        for (i, (u, beta)) in own.iter().enumerate() {
            let mut rivals: Vec<(Vec<i64>, Rat)> = Vec::with_capacity(own.len() + other.len());
            rivals.extend(own.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, t)| t.clone()));
            rivals.extend(other.iter().cloned());
            let (eps, a) = essential_margin(u, beta, &rivals);
            if eps.is_positive() {
                return Ok(Some(a));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn p(src: &str) -> TropPoly {
        crate::expr::parse_poly(src, None).unwrap().poly
    }

    #[test]
    fn middle_term_of_collinear_triple_is_inessential() {
        let f = p("x^2 + x*y + y^2");
        assert_eq!(essential_part(&f).unwrap(), p("x^2 + y^2"));
    }

    #[test]
    fn raised_middle_term_is_essential() {
        // The lift of (1,1) sits strictly above the segment, so all three stay.
        let f = p("x^2 + 1*x*y + y^2");
        assert_eq!(essential_part(&f).unwrap(), f);
    }

    #[test]
    fn single_monomial_is_essential() {
        let f = p("3*x^2*y");
        assert_eq!(essential_part(&f).unwrap(), f);
    }

    #[test]
    fn essential_part_is_idempotent_and_function_preserving() {
        let f = p("x^2 + x*y + y^2 + -5*x + 0");
        let e = essential_part(&f).unwrap();
        assert_eq!(essential_part(&e).unwrap(), e);
        assert!(e_equiv(&f, &e).unwrap());
    }

    #[test]
    fn dominates_own_monomials_and_separates_otherwise() {
        let f = p("x^2 + y^2");
        assert!(dominates(&f, &p("x*y")).unwrap());
        let x_sq = crate::expr::parse_poly("x^2", Some(2)).unwrap().poly;
        assert!(dominates(&f, &x_sq).unwrap());
        assert!(!dominates(&p("x + 0"), &p("x + 1")).unwrap());
    }

    #[test]
    fn e_equiv_examples() {
        assert!(e_equiv(&p("x^2 + x*y + y^2"), &p("x^2 + y^2")).unwrap());
        assert!(!e_equiv(&p("x + 0"), &p("x + 1")).unwrap());
        let w = find_separating_point(&p("x + 0"), &p("x + 1")).unwrap().unwrap();
        let f = p("x + 0");
        let g = p("x + 1");
        assert_ne!(f.evaluate_rational(&w), g.evaluate_rational(&w));
    }

    #[test]
    fn margin_oracle_agrees_with_feasibility_route() {
        let f = p("x^2 + 1*x*y + y^2 + x + -3");
        let terms = f.term_vec();
        for i in 0..terms.len() {
            let rivals: Vec<_> =
                (0..terms.len()).filter(|&j| j != i).map(|j| terms[j].clone()).collect();
            let (u, beta) = &terms[i];
            let (eps, a) = essential_margin(u, beta, &rivals);
            let dominated = monomial_dominated(u, beta, &rivals);
            assert_eq!(eps.is_positive(), !dominated);
            if eps.is_positive() {
                // The witness really does make the term the strict maximum.
                let own = crate::poly::finite_term_value(u, beta, &a);
                for (v, gamma) in &rivals {
                    assert!(own > crate::poly::finite_term_value(v, gamma, &a));
                }
            }
        }
    }

    #[test]
    fn separating_point_for_equal_functions_is_none() {
        let f = p("x^2 + x*y + y^2");
        let g = p("x^2 + y^2");
        assert_eq!(find_separating_point(&f, &g).unwrap(), None);
        assert_eq!(
            find_separating_point(&f, &TropPoly::zero(2)).unwrap(),
            Some(vec![rat(0), rat(0)])
        );
    }
}
