//! Supplements, completions, and the supplemental / symmetry dualities.
//!
//! The supplement of a planar hypersurface `Z(f)` with `m` essential
//! monomials is `Z(g)` for `g = f^(2) ⊙ ... ⊙ f^(m-1)`; the weighted union
//! `Z(f) ∪w Z(g)` equals `Z(f̄)`, the union of the pair-binomial primitives,
//! which is the completion. Primitive reduction of `g` yields the minimal
//! supplement; reducing the supplement of the reduced supplement recovers
//! the reduced curve (supplemental duality). For starred curves with a point
//! vertex the transpose polynomial realizes the point symmetry, and on the
//! Newton side the transpose support is the point reflection of the support
//! through half the exponent sum.


use crate::error::{Result, TropError};
use crate::essential::essential_part;
use crate::factor::{binomial_factors, primitive_reduction};
use crate::geometry::{
    curve::CoverItem, has_empty_subdivision, is_semidisjoint, is_starred, on_tropical_curve,
    primitive_multiplicity, tropical_curve, weighted_equal, weighted_union, PlanarCurve,
    PrimitiveCover, Pt2,
};
use crate::identities::{elementary_symmetric, transpose};
use crate::poly::TropPoly;
use crate::scalar::Rat;

/// Supplement data for a planar hypersurface.
#[derive(Debug, Clone)]
pub struct SupplementReport {
    /// The supplement polynomial (reduced or not, depending on the entry
    /// point); the tropical unit when the input is a binomial.
    pub supplement: TropPoly,
    /// `Z(f) ∪w Z(supplement)`: the completion.
    pub completion_curve: PlanarCurve,
    /// Primitives covering the completion, with multiplicities.
    pub cover: PrimitiveCover,
    /// Whether the union `Z(f) ∪w Z(supplement)` is semidisjoint.
    pub pure: bool,
    /// Cardinality of the minimal completion's cover (the reduced one).
    pub minimal_cardinality: u64,
}

impl SupplementReport {
    /// A supplement is minimal when its cover already has the minimal
    /// cardinality.
    pub fn is_minimal(&self) -> bool {
        self.cover.cardinality() == self.minimal_cardinality
    }
}

/// `f^(2) ⊙ ... ⊙ f^(m-1)` over the essential monomials; the tropical unit
/// for a binomial (empty product).
pub fn supplement_poly(f: &TropPoly) -> Result<TropPoly> {
    let ess = essential_part(f)?;
    let m = ess.num_terms();
    if m < 2 {
        return Err(TropError::TooFewTerms { needed: 2, found: m });
    }
    let mut acc = TropPoly::one(f.n());
    for k in 2..m {
        acc = essential_part(&acc.mul(&elementary_symmetric(&ess, k)?)?)?;
    }
    Ok(acc)
}

/// The pair-binomial cover `{(f_i ⊕ f_j)}` normalized into primitives.
fn pair_cover(ess: &TropPoly) -> Result<PrimitiveCover> {
    let terms = ess.term_vec();
    let mut items = Vec::new();
    for i in 0..terms.len() {
        for j in (i + 1)..terms.len() {
            let pair = TropPoly::from_finite_terms(
                ess.n(),
                vec![terms[i].clone(), terms[j].clone()],
            )?;
            let (q, m) = primitive_multiplicity(&pair)?;
            items.push(CoverItem { binomial: q, multiplicity: m });
        }
    }
    Ok(PrimitiveCover::new(items))
}

struct SupplementAnalysis {
    curve_f: PlanarCurve,
    full_poly: TropPoly,
    full_curve: PlanarCurve,
    reduced_poly: TropPoly,
    reduced_curve: PlanarCurve,
    full_cover: PrimitiveCover,
    reduced_cover: PrimitiveCover,
}

fn curve_or_empty(g: &TropPoly) -> Result<PlanarCurve> {
    if essential_part(g)?.num_terms() < 2 {
        Ok(PlanarCurve::empty())
    } else {
        tropical_curve(g)
    }
}

fn analyze(f: &TropPoly) -> Result<SupplementAnalysis> {
    if f.n() != 2 {
        return Err(TropError::NotPlanar { n: f.n() });
    }
    let ess = essential_part(f)?;
    let m = ess.num_terms();
    if m < 2 {
        return Err(TropError::TooFewTerms { needed: 2, found: m });
    }
    let curve_f = tropical_curve(&ess)?;
    let full_poly = supplement_poly(&ess)?;
    let full_curve = curve_or_empty(&full_poly)?;
    let full_cover = pair_cover(&ess)?;

    // The completion must be the variety of the closure: the defining
    // identity of the supplement. A violation would be an internal bug.
    let completion = weighted_union(&curve_f, &full_curve);
    let closure_curve = tropical_curve(&crate::identities::closure(&ess)?)?;
    assert!(
        weighted_equal(&completion, &closure_curve),
        "completion does not match the closure variety"
    );

    let factored = binomial_factors(&full_poly)?;
    let reduced_poly = factored.reduced.clone();
    let reduced_curve = curve_or_empty(&reduced_poly)?;
    let mut items: Vec<CoverItem> = full_cover.items.clone();
    for (p, extracted) in &factored.binomial_factors {
        let key = p.term_vec();
        match items.iter_mut().find(|item| item.binomial.term_vec() == key) {
            Some(item) => {
                debug_assert!(item.multiplicity >= *extracted, "over-extraction");
                item.multiplicity = item.multiplicity.saturating_sub(*extracted);
            }
            None => debug_assert!(false, "extracted primitive missing from the pair cover"),
        }
    }
    items.retain(|item| item.multiplicity > 0);
    let reduced_cover = PrimitiveCover::new(items);
    Ok(SupplementAnalysis {
        curve_f,
        full_poly,
        full_curve,
        reduced_poly,
        reduced_curve,
        full_cover,
        reduced_cover,
    })
}

/// The supplement of a planar hypersurface, with its completion, cover, and
/// purity/minimality data.
pub fn supplement(f: &TropPoly) -> Result<SupplementReport> {
    let a = analyze(f)?;
    Ok(SupplementReport {
        pure: is_semidisjoint(&[&a.curve_f, &a.full_curve]),
        completion_curve: weighted_union(&a.curve_f, &a.full_curve),
        minimal_cardinality: a.reduced_cover.cardinality(),
        cover: a.full_cover,
        supplement: a.full_poly,
    })
}

/// The reduced (minimal) supplement: the primitive reduction of the
/// supplement polynomial, with the correspondingly reduced cover.
pub fn reduced_supplement(f: &TropPoly) -> Result<SupplementReport> {
    let a = analyze(f)?;
    Ok(SupplementReport {
        pure: is_semidisjoint(&[&a.curve_f, &a.reduced_curve]),
        completion_curve: weighted_union(&a.curve_f, &a.reduced_curve),
        minimal_cardinality: a.reduced_cover.cardinality(),
        cover: a.reduced_cover,
        supplement: a.reduced_poly,
    })
}

/// The reduced supplement polynomial of `f`, the tropical unit when nothing
/// is left (binomials and monomial multiples of primitives).
fn reduced_supplement_poly(f: &TropPoly) -> Result<TropPoly> {
    primitive_reduction(&supplement_poly(f)?)
}

/// The reduced supplement curve of the hypersurface `Z(g)`, computed on the
/// curve level: the completion is the union of the pair-cover lines, the
/// supplement is the completion minus `Z(g)`, and reduction extracts full
/// lines. This avoids expanding the supplement polynomial of a large input;
/// the polynomial and curve routes agree (cancelling a binomial factor is
/// extracting a primitive), which the test suite checks on small cases.
pub fn reduced_supplement_curve(g: &TropPoly) -> Result<PlanarCurve> {
    let ess = essential_part(g)?;
    if ess.num_terms() < 2 {
        return Ok(PlanarCurve::empty());
    }
    let curve = tropical_curve(&ess)?;
    let mut completion = PlanarCurve::empty();
    for item in pair_cover(&ess)?.items {
        let mut line = tropical_curve(&item.binomial)?;
        for r in &mut line.rays {
            r.weight *= item.multiplicity;
        }
        completion = weighted_union(&completion, &line);
    }
    let supplement_curve = crate::geometry::weighted_subtract(&completion, &curve)
        .expect("the completion covers the curve");
    let (reduced, _) = crate::geometry::curve_primitive_reduction(&supplement_curve);
    Ok(reduced)
}

/// Supplemental duality: the reduced supplement of the reduced supplement is
/// weighted-equal to the primitive reduction of the curve itself.
pub fn verify_supplement_duality(f: &TropPoly) -> Result<bool> {
    if f.n() != 2 {
        return Err(TropError::NotPlanar { n: f.n() });
    }
    let reduced = primitive_reduction(&essential_part(f)?)?;
    if reduced.num_terms() < 2 {
        // A primitive (or monomial) reduces to the empty curve on both sides.
        return Ok(true);
    }
    // Inner step through the polynomial construction; outer step on the
    // curve level, where the second supplement's polynomial would be huge.
    let g1 = reduced_supplement_poly(&reduced)?;
    let lhs = if g1.num_terms() < 2 {
        PlanarCurve::empty()
    } else {
        reduced_supplement_curve(&g1)?
    };
    Ok(weighted_equal(&lhs, &tropical_curve(&reduced)?))
}

/// Monomials of `ess` whose value at the point attains the maximum.
fn local_polynomial(ess: &TropPoly, at: &Pt2) -> TropPoly {
    let point = [at.x.clone(), at.y.clone()];
    let mut best: Option<Rat> = None;
    let mut values = Vec::new();
    for (e, c) in ess.terms() {
        let v = crate::poly::finite_term_value(e, c, &point);
        if best.as_ref().is_none_or(|b| &v > b) {
            best = Some(v.clone());
        }
        values.push((e.clone(), c.clone(), v));
    }
    let best = best.expect("nonzero");
    TropPoly::from_finite_terms(
        ess.n(),
        values.into_iter().filter(|(_, _, v)| *v == best).map(|(e, c, _)| (e, c)),
    )
    .expect("terms")
}

/// Local-global supplements: the primitive reduction of the weighted union
/// of the local supplements at the curve vertices. For generic `f` this is
/// weighted-equal to the global reduced supplement (verified here).
pub fn local_supplements(f: &TropPoly) -> Result<PlanarCurve> {
    if f.n() != 2 {
        return Err(TropError::NotPlanar { n: f.n() });
    }
    let ess = essential_part(f)?;
    if ess.num_terms() < 2 {
        return Err(TropError::TooFewTerms { needed: 2, found: ess.num_terms() });
    }
    let curve = tropical_curve(&ess)?;
    if !is_generic(&curve) {
        return Err(TropError::NotGeneric);
    }
    let mut product = TropPoly::one(2);
    for v in &curve.vertices {
        let local = local_polynomial(&ess, v);
        product = essential_part(&product.mul(&supplement_poly(&local)?)?)?;
    }
    let reduced = primitive_reduction(&product)?;
    let local_curve = curve_or_empty(&reduced)?;
    let global = curve_or_empty(&reduced_supplement_poly(&ess)?)?;
    assert!(
        weighted_equal(&local_curve, &global),
        "local supplements disagree with the global reduced supplement"
    );
    Ok(local_curve)
}

/// No two top faces on a single line.
fn is_generic(curve: &PlanarCurve) -> bool {
    let keys = curve_line_keys(curve);
    let mut sorted = keys.clone();
    sorted.sort();
    sorted.dedup();
    sorted.len() == keys.len()
}

fn curve_line_keys(curve: &PlanarCurve) -> Vec<([i64; 2], Rat)> {
    let mut keys = Vec::new();
    for e in &curve.edges {
        let a = &curve.vertices[e.from];
        let b = &curve.vertices[e.to];
        keys.push(line_key_through(a, &(&b.x - &a.x), &(&b.y - &a.y)));
    }
    for r in &curve.rays {
        let o = &curve.vertices[r.from];
        keys.push(line_key_through(
            o,
            &Rat::from_integer(r.dir[0].into()),
            &Rat::from_integer(r.dir[1].into()),
        ));
    }
    keys
}

fn line_key_through(p: &Pt2, dx: &Rat, dy: &Rat) -> ([i64; 2], Rat) {
    let denom_lcm = num::integer::lcm(dx.denom().clone(), dy.denom().clone());
    let nx = (dx * Rat::from_integer(denom_lcm.clone())).to_integer();
    let ny = (dy * Rat::from_integer(denom_lcm)).to_integer();
    let g = num::integer::gcd(nx.clone(), ny.clone());
    let (px, py): (i64, i64) = (
        (nx / &g).try_into().expect("direction fits i64"),
        (ny / &g).try_into().expect("direction fits i64"),
    );
    let mut n = [-py, px];
    if n[0] < 0 || (n[0] == 0 && n[1] < 0) {
        n = [-n[0], -n[1]];
    }
    let off = Rat::from_integer(n[0].into()) * &p.x + Rat::from_integer(n[1].into()) * &p.y;
    (n, off)
}

/// Point-symmetry of a starred curve through its vertex: the curve of the
/// transpose polynomial is the exact point reflection of the curve, with
/// equal weights on mirrored faces; sampled curve points reflect onto the
/// transpose curve as well.
pub fn symmetry_transpose_check(f: &TropPoly, samples: usize) -> Result<bool> {
    if f.n() != 2 {
        return Err(TropError::NotPlanar { n: f.n() });
    }
    let ess = essential_part(f)?;
    if !is_starred(&ess)? {
        return Err(TropError::NotStarred);
    }
    if !binomial_factors(&ess)?.binomial_factors.is_empty() {
        return Err(TropError::PrimitivelyReducible);
    }
    let curve = tropical_curve(&ess)?;
    if curve.vertices.len() != 1 || !curve.edges.is_empty() {
        return Err(TropError::NoPointVertex);
    }
    let center = curve.vertices[0].clone();
    let transposed = transpose(&ess)?;
    let t_curve = tropical_curve(&transposed)?;
    if !weighted_equal(&curve.reflect(&center), &t_curve) {
        return Ok(false);
    }
    // Exact sample points on Z(f): the vertex plus ray points at small
    // integer parameters.
    let mut points: Vec<Pt2> = vec![center.clone()];
    'fill: for t in 1..=3i64 {
        for r in &curve.rays {
            let o = &curve.vertices[r.from];
            points.push(Pt2::new(
                &o.x + Rat::from_integer((r.dir[0] * t).into()),
                &o.y + Rat::from_integer((r.dir[1] * t).into()),
            ));
            if points.len() >= samples.max(1) {
                break 'fill;
            }
        }
    }
    for p in points {
        let mirrored = p.reflect(&center);
        debug_assert!(on_tropical_curve(&ess, &[p.x.clone(), p.y.clone()])?);
        if !on_tropical_curve(&transposed, &[mirrored.x, mirrored.y])? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Point symmetry on the Newton side: the support of the transpose is the
/// reflection of the support through `E/2`, `E` the sum of all essential
/// exponent vectors. Works in any number of variables; integral translates
/// of the transpose support count as the same symmetry.
pub fn polytope_symmetry(f: &TropPoly) -> Result<(Vec<Rat>, bool)> {
    let ess = essential_part(f)?;
    if !has_empty_subdivision(&ess)? {
        return Err(TropError::NotEmptySubdivision);
    }
    let n = ess.n();
    let mut e_sum = vec![0i64; n];
    for (e, _) in ess.terms() {
        for k in 0..n {
            e_sum[k] += e[k];
        }
    }
    let center: Vec<Rat> = e_sum
        .iter()
        .map(|&x| Rat::from_integer(x.into()) / Rat::from_integer(2.into()))
        .collect();
    let reflected: Vec<Vec<i64>> = {
        let mut v: Vec<Vec<i64>> = ess
            .support()
            .iter()
            .map(|u| e_sum.iter().zip(u).map(|(s, x)| s - x).collect())
            .collect();
        v.sort();
        v
    };
    let transposed = essential_part(&transpose(&ess)?)?;
    let holds = transposed.support() == reflected;
    Ok((center, holds))
}

/// Are two planar supports equal up to an integral translation?
pub fn supports_equal_up_to_translation(a: &[Vec<i64>], b: &[Vec<i64>]) -> bool {
    if a.len() != b.len() || a.is_empty() {
        return false;
    }
    let mut sa = a.to_vec();
    let mut sb = b.to_vec();
    sa.sort();
    sb.sort();
    let shift: Vec<i64> = sb[0].iter().zip(&sa[0]).map(|(x, y)| x - y).collect();
    sa.iter()
        .zip(&sb)
        .all(|(u, v)| u.iter().zip(v.iter()).zip(&shift).all(|((x, y), s)| x + s == *y))
}

/// Componentwise reduced supplements of a variety presented as a list of
/// hypersurface polynomials; the variety-level supplement is the list (its
/// intersection is taken at inspection time).
pub fn supplement_variety(components: &[TropPoly]) -> Result<Vec<TropPoly>> {
    components
        .iter()
        .map(|h| {
            if h.n() != 2 {
                return Err(TropError::NotPlanar { n: h.n() });
            }
            reduced_supplement_poly(&essential_part(h)?)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_poly;
    use crate::scalar::rat;

    fn p(src: &str) -> TropPoly {
        parse_poly(src, None).unwrap().poly
    }

    #[test]
    fn node_curve_supplement_is_minimal_and_pure() {
        let f = p("x^2*y + x + 0");
        let report = supplement(&f).unwrap();
        assert_eq!(report.supplement, p("x^3*y + x^2*y + x"));
        assert!(report.pure);
        assert!(report.is_minimal());
        assert_eq!(report.cover.cardinality(), 3);
        let names: Vec<TropPoly> =
            report.cover.items.iter().map(|i| i.binomial.clone()).collect();
        assert_eq!(names, vec![p("x + 0*y^0"), p("x*y + 0"), p("x^2*y + 0")]);
        // Reduction changes nothing here.
        let reduced = reduced_supplement(&f).unwrap();
        assert_eq!(reduced.supplement, report.supplement);
    }

    #[test]
    fn binomial_supplement_is_empty() {
        let f = p("x^3*y^5 + y^2");
        let report = supplement(&f).unwrap();
        assert!(report.supplement.is_monomial());
        assert_eq!(report.cover.items.len(), 1);
        assert_eq!(report.cover.items[0].multiplicity, 3);
        assert_eq!(report.minimal_cardinality, 3);
        assert!(report.pure);
        assert!(weighted_equal(&report.completion_curve, &tropical_curve(&f).unwrap()));
    }

    #[test]
    fn conic_supplement_is_pure_but_not_minimal() {
        let f = p("x^2 + y^2 + 1*x*y + 0");
        let report = supplement(&f).unwrap();
        assert_eq!(report.cover.items.len(), 6);
        assert_eq!(report.cover.cardinality(), 9);
        assert!(report.pure);
        assert!(!report.is_minimal());
        assert_eq!(report.minimal_cardinality, 7);
        // Reduction extracts the diagonal line (twice).
        let reduced = reduced_supplement(&f).unwrap();
        assert_eq!(reduced.cover.items.len(), 5);
        assert!(reduced
            .cover
            .items
            .iter()
            .all(|i| i.binomial != p("x*y^-1 + 0")));
        assert!(reduced.pure);
    }

    #[test]
    fn genus_one_supplement_is_minimal_and_pure() {
        let f = p("x^2*y^2 + 1*x*y + x + y");
        let report = supplement(&f).unwrap();
        assert_eq!(report.cover.items.len(), 6);
        assert_eq!(report.cover.cardinality(), 6);
        assert!(report.pure);
        assert!(report.is_minimal());
    }

    #[test]
    fn supplemental_duality_on_examples() {
        assert!(verify_supplement_duality(&p("x^2*y + x + 0")).unwrap());
        assert!(verify_supplement_duality(&p("x^2*y^2 + 1*x*y + x + y")).unwrap());
        assert!(verify_supplement_duality(&p("x + y + 0")).unwrap());
        assert!(verify_supplement_duality(&p("x^2 + y^2 + 1*x*y + 0")).unwrap());
    }

    #[test]
    fn local_global_supplements_agree() {
        for src in ["x^2*y + x + 0", "x^2 + y^2 + 1*x*y + 0", "x^2*y^2 + 1*x*y + x + y"] {
            let f = p(src);
            let local = local_supplements(&f).unwrap();
            let global = curve_or_empty(&reduced_supplement_poly(&f).unwrap()).unwrap();
            assert!(weighted_equal(&local, &global));
        }
    }

    #[test]
    fn curve_and_polynomial_supplement_routes_agree() {
        for src in ["x^2*y + x + 0", "x + y + 0", "x^2 + y^2 + 1*x*y + 0"] {
            let f = p(src);
            let poly_route =
                curve_or_empty(&reduced_supplement_poly(&f).unwrap()).unwrap();
            let curve_route = reduced_supplement_curve(&f).unwrap();
            assert!(weighted_equal(&poly_route, &curve_route), "routes differ on {src}");
        }
    }

    #[test]
    fn non_generic_inputs_are_rejected() {
        // (x+0)(y+0): the curve is two full lines, each split in two by the
        // crossing, so two faces share a line.
        let f = p("(x + 0)(y + 0)");
        assert!(matches!(local_supplements(&f), Err(TropError::NotGeneric)));
    }

    #[test]
    fn transpose_symmetry_of_starred_curves() {
        assert!(symmetry_transpose_check(&p("x^2*y + x + 0"), 10).unwrap());
        assert!(symmetry_transpose_check(&p("x + y + 0"), 10).unwrap());
        assert!(matches!(
            symmetry_transpose_check(&p("x^2 + y^2 + 1*x*y + 0"), 10),
            Err(TropError::NotStarred)
        ));
    }

    #[test]
    fn polytope_symmetry_of_the_pentagon() {
        let f = p("x + y + x^3*y + x*y^3 + x^2*y^3");
        let (center, holds) = polytope_symmetry(&f).unwrap();
        assert!(holds);
        assert_eq!(center, vec![rat(7) / rat(2), rat(4)]);
        let t = essential_part(&transpose(&f).unwrap()).unwrap();
        let want: Vec<Vec<i64>> =
            vec![vec![4, 7], vec![5, 5], vec![6, 5], vec![6, 8], vec![7, 7]];
        assert_eq!(t.support(), want);
        // The translated-by-(2,0) support states the same symmetry.
        let printed: Vec<Vec<i64>> =
            vec![vec![8, 8], vec![9, 7], vec![6, 7], vec![8, 5], vec![7, 5]];
        assert!(supports_equal_up_to_translation(&t.support(), &printed));
    }

    #[test]
    fn binomial_polytope_symmetry_is_its_midpoint() {
        let f = p("x^2*y + 3");
        let (center, holds) = polytope_symmetry(&f).unwrap();
        assert!(holds);
        assert_eq!(center, vec![rat(1), rat(1) / rat(2)]);
    }

    #[test]
    fn variety_supplements_are_componentwise() {
        let out =
            supplement_variety(&[p("x + y + 0"), p("x + y + 1"), p("x^2*y + 0")]).unwrap();
        assert_eq!(out.len(), 3);
        assert!(out[0].num_terms() >= 2);
        // The binomial component has the empty supplement.
        assert!(out[2].is_monomial());
    }
}
