//! Newton polytopes and regular (dual) subdivisions.
//!
//! The Newton polytope is the convex hull of the support; the coefficient
//! lift induces the regular subdivision whose cells are the projections of
//! the upper-hull facets of the lifted support. Subdivision vertices
//! correspond bijectively to essential monomials, so the subdivision is
//! "empty" exactly when every essential monomial sits on a polygon corner.

use std::collections::{BTreeMap, BTreeSet};

use num::One;

use crate::error::{Result, TropError};
use crate::essential::essential_part;
use crate::lp::{LinearProgram, LpOutcome};
use crate::poly::TropPoly;
use crate::scalar::Rat;

pub mod curve;
pub(crate) mod upper_hull;

pub use curve::{
    check_balancing, curve_primitive_reduction, is_semidisjoint, on_tropical_curve,
    primitive_multiplicity, tropical_curve, weighted_equal, weighted_set_equal,
    weighted_subtract, weighted_union, CurveEdge, CurveRay, PlanarCurve, PrimitiveCover, Pt2,
};

/// Newton polytope data, optionally with the dual subdivision (planar only).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonData {
    /// Support of the essential part, lexicographically sorted.
    pub points: Vec<Vec<i64>>,
    /// Convex hull vertices of the support; counterclockwise boundary order
    /// starting from the lexicographically smallest vertex when `n = 2`.
    pub vertices: Vec<Vec<i64>>,
    /// Cells of the regular subdivision (`n = 2` only, else empty); each cell
    /// lists its member points in counterclockwise order, and the cell list
    /// is sorted by lexicographically smallest member.
    pub cells: Vec<Vec<Vec<i64>>>,
    /// The coefficient lift on the support points.
    pub lift_values: BTreeMap<Vec<i64>, Rat>,
}

pub(crate) fn cross2(o: &[i64], a: &[i64], b: &[i64]) -> i128 {
    let (ox, oy) = (o[0] as i128, o[1] as i128);
    (a[0] as i128 - ox) * (b[1] as i128 - oy) - (a[1] as i128 - oy) * (b[0] as i128 - ox)
}

/// Strict convex hull of planar integer points, counterclockwise starting at
/// the lexicographically smallest vertex. Collinear boundary points are not
/// vertices and are dropped.
pub(crate) fn hull2d(points: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut pts: Vec<Vec<i64>> = points.to_vec();
    pts.sort();
    pts.dedup();
    let n = pts.len();
    if n <= 2 {
        return pts;
    }
    let mut lower: Vec<Vec<i64>> = Vec::new();
    for p in &pts {
        while lower.len() >= 2
            && cross2(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Vec<i64>> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && cross2(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    // All points collinear: the chain degenerates to the two extremes.
    if lower.len() < 3 {
        let mut ends = vec![pts.first().unwrap().clone(), pts.last().unwrap().clone()];
        ends.sort();
        ends.dedup();
        return ends;
    }
    lower
}

/// Is `u` inside the convex hull of `pts` (any dimension)? Exact feasibility.
fn in_convex_hull(u: &[i64], pts: &[Vec<i64>]) -> bool {
    if pts.is_empty() {
        return false;
    }
    let n = u.len();
    let t = pts.len();
    let mut lp = LinearProgram::new(t);
    for k in 0..n {
        let row: Vec<Rat> = pts.iter().map(|v| Rat::from_integer(v[k].into())).collect();
        lp.add_eq(row, Rat::from_integer(u[k].into()));
    }
    lp.add_eq(vec![Rat::one(); t], Rat::one());
    !matches!(lp.solve(), LpOutcome::Infeasible)
}

/// Convex hull vertex set of the support of `f` (any number of variables).
/// For `n = 2` the vertices come back in counterclockwise boundary order.
pub fn newton_polytope(f: &TropPoly) -> Result<NewtonData> {
    if f.is_zero() {
        return Err(TropError::ZeroPolynomial);
    }
    let ess = essential_part(f)?;
    let points = ess.support();
    let lift_values: BTreeMap<Vec<i64>, Rat> = ess.term_vec().into_iter().collect();
    let vertices = match f.n() {
        1 => {
            let mut v = vec![points.first().unwrap().clone(), points.last().unwrap().clone()];
            v.dedup();
            v
        }
        2 => hull2d(&points),
        _ => {
            let mut verts = Vec::new();
            for (i, u) in points.iter().enumerate() {
                let others: Vec<Vec<i64>> = points
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, v)| v.clone())
                    .collect();
                if !in_convex_hull(u, &others) {
                    verts.push(u.clone());
                }
            }
            verts
        }
    };
    Ok(NewtonData { points, vertices, cells: Vec::new(), lift_values })
}

/// The regular subdivision of the Newton polygon induced by the coefficient
/// lift: cells project the upper-hull facets of the lifted support.
pub fn dual_subdivision(f: &TropPoly) -> Result<NewtonData> {
    if f.n() != 2 {
        return Err(TropError::NotPlanar { n: f.n() });
    }
    let mut data = newton_polytope(f)?;
    let m = data.points.len();
    if m < 2 {
        return Err(TropError::TooFewTerms { needed: 2, found: m });
    }
    let lifted: Vec<([i64; 2], Rat)> = data
        .points
        .iter()
        .map(|p| ([p[0], p[1]], data.lift_values[p].clone()))
        .collect();
    let mut cells: Vec<Vec<Vec<i64>>> = match upper_hull::planar_upper_hull(&lifted) {
        upper_hull::PlanarLift::Point(_) => unreachable!("m >= 2"),
        upper_hull::PlanarLift::Collinear(chain) => {
            // Degenerate polygon: consecutive chain vertices are the cells.
            chain
                .chain
                .windows(2)
                .map(|w| {
                    let mut cell = vec![
                        chain.point_at(w[0].0).to_vec(),
                        chain.point_at(w[1].0).to_vec(),
                    ];
                    cell.sort();
                    cell
                })
                .collect()
        }
        upper_hull::PlanarLift::Full { facets, .. } => facets
            .into_iter()
            .map(|f| f.corners.into_iter().map(|c| c.to_vec()).collect())
            .collect(),
    };
    cells.sort_by(|a: &Vec<Vec<i64>>, b: &Vec<Vec<i64>>| {
        let (ka, kb) = (a.iter().min().unwrap(), b.iter().min().unwrap());
        ka.cmp(kb).then_with(|| a.cmp(b))
    });
    data.cells = cells;
    Ok(data)
}

pub(crate) fn gcd2(a: i64, b: i64) -> i64 {
    num::integer::gcd(a.abs(), b.abs()).max(1)
}

/// Is every essential monomial a polygon corner, i.e. is the subdivision
/// empty? (Planar input required, at least two essential terms.)
pub fn is_starred(f: &TropPoly) -> Result<bool> {
    let data = dual_subdivision(f)?;
    Ok(all_points_are_hull_vertices(&data))
}

/// The same emptiness test without building cells; works in any dimension.
pub fn has_empty_subdivision(f: &TropPoly) -> Result<bool> {
    let data = newton_polytope(f)?;
    Ok(all_points_are_hull_vertices(&data))
}

fn all_points_are_hull_vertices(data: &NewtonData) -> bool {
    let verts: BTreeSet<&Vec<i64>> = data.vertices.iter().collect();
    data.points.iter().all(|p| verts.contains(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_poly;

    fn p(src: &str) -> TropPoly {
        parse_poly(src, None).unwrap().poly
    }

    fn v2(pairs: &[[i64; 2]]) -> Vec<Vec<i64>> {
        pairs.iter().map(|p| p.to_vec()).collect()
    }

    #[test]
    fn hull_of_triangle_support() {
        let data = newton_polytope(&p("x^2*y + x + 0")).unwrap();
        assert_eq!(data.vertices, v2(&[[0, 0], [1, 0], [2, 1]]));
        let mono = newton_polytope(&p("5*x^3*y^2")).unwrap();
        assert_eq!(mono.vertices, v2(&[[3, 2]]));
    }

    #[test]
    fn hull_of_pentagon_support() {
        // Support {(1,0),(0,1),(3,1),(1,3),(2,3)}: all five are corners.
        let f = p("x + y + x^3*y + x*y^3 + x^2*y^3");
        let data = newton_polytope(&f).unwrap();
        assert_eq!(data.vertices.len(), 5);
        assert_eq!(data.vertices[0], vec![0, 1]);
        // Counterclockwise means every consecutive triple turns left.
        let v = &data.vertices;
        for i in 0..v.len() {
            let a = &v[i];
            let b = &v[(i + 1) % v.len()];
            let c = &v[(i + 2) % v.len()];
            assert!(cross2(a, b, c) > 0);
        }
    }

    #[test]
    fn hull_vertices_in_three_variables() {
        // (x+y)(x+z): a parallelogram in 3-space, all four corners.
        let f = parse_poly("(x + y)(x + z)", Some(3)).unwrap().poly;
        let data = newton_polytope(&f).unwrap();
        assert_eq!(data.vertices.len(), 4);
    }

    #[test]
    fn subdivision_of_binomial_is_one_segment() {
        let data = dual_subdivision(&p("x^2*y + 2")).unwrap();
        assert_eq!(data.cells, vec![v2(&[[0, 0], [2, 1]])]);
    }

    #[test]
    fn conic_subdivision_has_two_cells_with_midpoint_vertex() {
        let data = dual_subdivision(&p("x^2 + y^2 + 1*x*y + 0")).unwrap();
        assert_eq!(data.cells.len(), 2);
        assert!(data.points.contains(&vec![1, 1]));
        // (1,1) is a subdivision vertex but not a polygon corner.
        assert!(!data.vertices.contains(&vec![1, 1]));
        assert!(!is_starred(&p("x^2 + y^2 + 1*x*y + 0")).unwrap());
    }

    #[test]
    fn node_curve_is_starred() {
        let data = dual_subdivision(&p("x^2*y + x + 0")).unwrap();
        assert_eq!(data.cells.len(), 1);
        assert!(is_starred(&p("x^2*y + x + 0")).unwrap());
        // A single binomial in two variables is starred as well.
        assert!(is_starred(&p("x + 0*y^0")).unwrap() || {
            let f = parse_poly("x + 0", Some(2)).unwrap().poly;
            is_starred(&f).unwrap()
        });
    }

    #[test]
    fn genus_one_subdivision_has_three_cells() {
        let data = dual_subdivision(&p("x^2*y^2 + 1*x*y + x + y")).unwrap();
        assert_eq!(data.cells.len(), 3);
        assert!(!is_starred(&p("x^2*y^2 + 1*x*y + x + y")).unwrap());
    }

    #[test]
    fn collinear_support_splits_by_lift() {
        // Lifts 0, 1, 0 over a segment: two cells.
        let f = parse_poly("x^2 + 1*x + 0", Some(2)).unwrap().poly;
        let data = dual_subdivision(&f).unwrap();
        assert_eq!(data.cells.len(), 2);
        // Flat lifts: the middle point is inessential, one cell remains.
        let g = parse_poly("x^2 + x + 0", Some(2)).unwrap().poly;
        let data = dual_subdivision(&g).unwrap();
        assert_eq!(data.cells.len(), 1);
    }
}
