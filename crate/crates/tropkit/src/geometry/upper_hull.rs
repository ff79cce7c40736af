//! Exact upper convex hulls of lifted planar lattice points.
//!
//! The lifted support of a planar polynomial is a set of points
//! `(x, y, coeff)` with distinct integer `(x, y)`. The upper hull's facets
//! project to the cells of the regular subdivision, its vertices are the
//! essential monomials, and the roof function it defines is the hull lift
//! used by residuation. Facets are found by gift wrapping with exact
//! rational orientation predicates, which handles the heavily degenerate
//! configurations (many collinear, coplanar lifts) produced by iterated
//! products.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num::Zero;

use crate::scalar::Rat;

use super::{cross2, gcd2, hull2d};

/// One facet of the lifted upper hull.
#[derive(Debug, Clone)]
pub(crate) struct UpperFacet {
    /// `z = c1*x + c2*y + d`.
    pub plane: (Rat, Rat, Rat),
    /// Polygon vertices of the projected facet, counterclockwise. These are
    /// exactly the essential points lying on the facet.
    pub corners: Vec<[i64; 2]>,
}

/// Upper hull of a lifted planar point set.
#[derive(Debug, Clone)]
pub(crate) enum PlanarLift {
    /// A single lattice point.
    Point([i64; 2]),
    /// Collinear projections: the 1-dimensional upper chain.
    Collinear(ChainRoof),
    /// Two-dimensional Newton polygon with its subdivision facets.
    Full { facets: Vec<UpperFacet>, hull: Vec<Vec<i64>> },
}

/// Upper chain over a lattice segment: `base + t*dir` with the strictly
/// concave chain of `(t, z)` pairs.
#[derive(Debug, Clone)]
pub(crate) struct ChainRoof {
    pub base: [i64; 2],
    pub dir: [i64; 2],
    /// Chain vertices by increasing parameter; strictly decreasing slopes.
    pub chain: Vec<(i64, Rat)>,
}

impl ChainRoof {
    pub fn point_at(&self, t: i64) -> [i64; 2] {
        [self.base[0] + t * self.dir[0], self.base[1] + t * self.dir[1]]
    }

    /// Parameter of a lattice point on the chain's line, if it is on it.
    pub fn param_of(&self, x: &[i64]) -> Option<i64> {
        let rel = [x[0] - self.base[0], x[1] - self.base[1]];
        if rel[0] * self.dir[1] != rel[1] * self.dir[0] {
            return None;
        }
        let k = usize::from(self.dir[0] == 0);
        let d = [self.dir[0], self.dir[1]][k];
        let r = rel[k];
        (r % d == 0).then(|| r / d)
    }

    /// Roof value at a lattice point (`None` outside the segment hull).
    pub fn value(&self, x: &[i64]) -> Option<Rat> {
        let t = self.param_of(x)?;
        let first = self.chain.first()?.0;
        let last = self.chain.last()?.0;
        if t < first || t > last {
            return None;
        }
        let i = match self.chain.binary_search_by_key(&t, |(u, _)| *u) {
            Ok(i) => return Some(self.chain[i].1.clone()),
            Err(i) => i,
        };
        let (t0, z0) = &self.chain[i - 1];
        let (t1, z1) = &self.chain[i];
        let lambda = Rat::from_integer((t - t0).into()) / Rat::from_integer((t1 - t0).into());
        Some(z0 + (z1 - z0) * lambda)
    }
}

/// Concave upper chain of `(t, z)` points (distinct `t`), keeping only
/// strict vertices.
fn upper_chain(mut pts: Vec<(i64, Rat)>) -> Vec<(i64, Rat)> {
    pts.sort_by(|a, b| a.0.cmp(&b.0));
    let mut chain: Vec<(i64, Rat)> = Vec::new();
    for p in pts {
        while chain.len() >= 2 {
            let a = &chain[chain.len() - 2];
            let b = &chain[chain.len() - 1];
            // Keep b only when slope(a,b) > slope(b,p), i.e. b strictly above
            // the chord from a to p.
            let lhs = (&b.1 - &a.1) * Rat::from_integer((p.0 - b.0).into());
            let rhs = (&p.1 - &b.1) * Rat::from_integer((b.0 - a.0).into());
            if lhs > rhs {
                break;
            }
            chain.pop();
        }
        chain.push(p);
    }
    chain
}

/// Orientation of the lifted point `s` against the plane through lifted
/// `p, q, r` (whose projections must be counterclockwise): positive when
/// strictly above.
fn lifted_orientation(
    p: (&[i64; 2], &Rat),
    q: (&[i64; 2], &Rat),
    r: (&[i64; 2], &Rat),
    s: (&[i64; 2], &Rat),
) -> std::cmp::Ordering {
    let ax = Rat::from_integer((q.0[0] - p.0[0]).into());
    let ay = Rat::from_integer((q.0[1] - p.0[1]).into());
    let az = q.1 - p.1;
    let bx = Rat::from_integer((r.0[0] - p.0[0]).into());
    let by = Rat::from_integer((r.0[1] - p.0[1]).into());
    let bz = r.1 - p.1;
    let cx = Rat::from_integer((s.0[0] - p.0[0]).into());
    let cy = Rat::from_integer((s.0[1] - p.0[1]).into());
    let cz = s.1 - p.1;
    let det = &ax * (&by * &cz - &bz * &cy) - &ay * (&bx * &cz - &bz * &cx)
        + az * (bx * cy - by * cx);
    det.cmp(&Rat::zero())
}

fn plane_of(p: (&[i64; 2], &Rat), q: (&[i64; 2], &Rat), r: (&[i64; 2], &Rat)) -> (Rat, Rat, Rat) {
    let det = Rat::from_integer(
        cross2(&p.0.to_vec(), &q.0.to_vec(), &r.0.to_vec()).into(),
    );
    let ax = Rat::from_integer((q.0[0] - p.0[0]).into());
    let ay = Rat::from_integer((q.0[1] - p.0[1]).into());
    let az = q.1 - p.1;
    let bx = Rat::from_integer((r.0[0] - p.0[0]).into());
    let by = Rat::from_integer((r.0[1] - p.0[1]).into());
    let bz = r.1 - p.1;
    let c1 = (&az * &by - &bz * &ay) / &det;
    let c2 = (&ax * &bz - &bx * &az) / &det;
    let d = p.1 - (&c1 * Rat::from_integer(p.0[0].into()) + &c2 * Rat::from_integer(p.0[1].into()));
    (c1, c2, d)
}

/// Build the upper hull of lifted points with pairwise distinct projections.
pub(crate) fn planar_upper_hull(terms: &[([i64; 2], Rat)]) -> PlanarLift {
    assert!(!terms.is_empty());
    if terms.len() == 1 {
        return PlanarLift::Point(terms[0].0);
    }
    let proj: Vec<Vec<i64>> = terms.iter().map(|(p, _)| p.to_vec()).collect();
    let hull = hull2d(&proj);
    if hull.len() <= 2 {
        // Collinear: one-dimensional chain along the primitive direction.
        let lo = &hull[0];
        let hi = hull.last().unwrap();
        let d = [hi[0] - lo[0], hi[1] - lo[1]];
        let g = gcd2(d[0], d[1]);
        let dir = [d[0] / g, d[1] / g];
        let base = [lo[0], lo[1]];
        let k = usize::from(dir[0] == 0);
        let pts: Vec<(i64, Rat)> = terms
            .iter()
            .map(|(p, z)| (([p[0] - base[0], p[1] - base[1]][k]) / dir[k], z.clone()))
            .collect();
        return PlanarLift::Collinear(ChainRoof { base, dir, chain: upper_chain(pts) });
    }

    let index: BTreeMap<[i64; 2], usize> =
        terms.iter().enumerate().map(|(i, (p, _))| (*p, i)).collect();
    let lifted = |p: &[i64; 2]| -> (&[i64; 2], &Rat) {
        let i = index[p];
        (&terms[i].0, &terms[i].1)
    };

    // Seed: the first chain edge of the roof over one hull boundary edge.
    let h0 = [hull[0][0], hull[0][1]];
    let h1 = [hull[1][0], hull[1][1]];
    let seed = {
        let d = [h1[0] - h0[0], h1[1] - h0[1]];
        let g = gcd2(d[0], d[1]);
        let dir = [d[0] / g, d[1] / g];
        let k = usize::from(dir[0] == 0);
        let on_edge: Vec<(i64, Rat)> = terms
            .iter()
            .filter(|(p, _)| {
                cross2(&h0.to_vec(), &h1.to_vec(), &p.to_vec()) == 0 && {
                    let t = ([p[0] - h0[0], p[1] - h0[1]][k]) / dir[k];
                    (0..=g).contains(&t)
                }
            })
            .map(|(p, z)| (([p[0] - h0[0], p[1] - h0[1]][k]) / dir[k], z.clone()))
            .collect();
        let chain = upper_chain(on_edge);
        let a = [h0[0] + chain[0].0 * dir[0], h0[1] + chain[0].0 * dir[1]];
        let b = [h0[0] + chain[1].0 * dir[0], h0[1] + chain[1].0 * dir[1]];
        (a, b)
    };

    let mut queue: VecDeque<([i64; 2], [i64; 2])> = VecDeque::new();
    queue.push_back(seed);
    let mut visited: BTreeSet<([i64; 2], [i64; 2])> = BTreeSet::new();
    let mut facet_keys: BTreeSet<Vec<[i64; 2]>> = BTreeSet::new();
    let mut facets: Vec<UpperFacet> = Vec::new();

    while let Some((p, q)) = queue.pop_front() {
        if !visited.insert((p, q)) {
            continue;
        }
        // Wrap around the directed edge (p, q): the facet lies to its left.
        let mut best: Option<[i64; 2]> = None;
        for (s, _) in terms {
            if cross2(&p.to_vec(), &q.to_vec(), &s.to_vec()) <= 0 {
                continue;
            }
            best = Some(match best {
                None => *s,
                Some(r) => {
                    if lifted_orientation(lifted(&p), lifted(&q), lifted(&r), lifted(s))
                        == std::cmp::Ordering::Greater
                    {
                        *s
                    } else {
                        r
                    }
                }
            });
        }
        let Some(r) = best else {
            // Outward-facing boundary edge.
            continue;
        };
        let plane = plane_of(lifted(&p), lifted(&q), lifted(&r));
        let members: Vec<Vec<i64>> = terms
            .iter()
            .filter(|(s, z)| {
                let roof = &plane.0 * Rat::from_integer(s[0].into())
                    + &plane.1 * Rat::from_integer(s[1].into())
                    + &plane.2;
                debug_assert!(*z <= roof, "point above a wrapped facet");
                *z == roof
            })
            .map(|(s, _)| s.to_vec())
            .collect();
        let corners = hull2d(&members);
        let key: Vec<[i64; 2]> = corners.iter().map(|c| [c[0], c[1]]).collect();
        let is_new = facet_keys.insert({
            let mut k = key.clone();
            k.sort();
            k
        });
        if is_new {
            let k = corners.len();
            for i in 0..k {
                let u = [corners[i][0], corners[i][1]];
                let v = [corners[(i + 1) % k][0], corners[(i + 1) % k][1]];
                visited.insert((u, v));
                queue.push_back((v, u));
            }
            facets.push(UpperFacet { plane, corners: key });
        }
    }
    debug_assert!(!facets.is_empty());
    PlanarLift::Full { facets, hull }
}

impl PlanarLift {
    /// The essential lattice points: upper hull vertices.
    pub fn essential_points(&self) -> Vec<[i64; 2]> {
        match self {
            PlanarLift::Point(p) => vec![*p],
            PlanarLift::Collinear(chain) => {
                chain.chain.iter().map(|(t, _)| chain.point_at(*t)).collect()
            }
            PlanarLift::Full { facets, .. } => {
                let set: BTreeSet<[i64; 2]> =
                    facets.iter().flat_map(|f| f.corners.iter().copied()).collect();
                set.into_iter().collect()
            }
        }
    }

    /// Roof value at a lattice point, `None` outside the Newton polytope.
    pub fn roof_value(&self, x: &[i64]) -> Option<Rat> {
        match self {
            PlanarLift::Point(_) => None,
            PlanarLift::Collinear(chain) => chain.value(x),
            PlanarLift::Full { facets, hull } => {
                let k = hull.len();
                let xv = x.to_vec();
                for i in 0..k {
                    if cross2(&hull[i], &hull[(i + 1) % k], &xv) < 0 {
                        return None;
                    }
                }
                facets
                    .iter()
                    .map(|f| {
                        &f.plane.0 * Rat::from_integer(x[0].into())
                            + &f.plane.1 * Rat::from_integer(x[1].into())
                            + &f.plane.2
                    })
                    .min()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn lift(pts: &[([i64; 2], i64)]) -> Vec<([i64; 2], Rat)> {
        pts.iter().map(|(p, z)| (*p, rat(*z))).collect()
    }

    #[test]
    fn coplanar_lift_is_one_facet() {
        let terms = lift(&[([0, 0], 0), ([2, 0], 0), ([0, 2], 0), ([1, 1], 0), ([1, 0], 0)]);
        let hull = planar_upper_hull(&terms);
        let PlanarLift::Full { facets, .. } = &hull else {
            panic!("expected full hull");
        };
        assert_eq!(facets.len(), 1);
        assert_eq!(hull.essential_points(), vec![[0, 0], [0, 2], [2, 0]]);
        assert_eq!(hull.roof_value(&[1, 1]), Some(rat(0)));
        assert_eq!(hull.roof_value(&[2, 1]), None);
    }

    #[test]
    fn raised_interior_point_fans_the_square() {
        let terms = lift(&[([0, 0], 0), ([2, 0], 0), ([0, 2], 0), ([2, 2], 0), ([1, 1], 1)]);
        let hull = planar_upper_hull(&terms);
        let PlanarLift::Full { facets, .. } = &hull else {
            panic!("expected full hull");
        };
        assert_eq!(facets.len(), 4);
        assert_eq!(hull.essential_points().len(), 5);
        assert_eq!(hull.roof_value(&[1, 1]), Some(rat(1)));
        // On the boundary midpoint the roof stays at the corner level.
        assert_eq!(hull.roof_value(&[1, 0]), Some(rat(0)));
    }

    #[test]
    fn conic_subdivision_from_the_lift() {
        let terms = lift(&[([2, 0], 0), ([0, 2], 0), ([1, 1], 1), ([0, 0], 0)]);
        let hull = planar_upper_hull(&terms);
        let PlanarLift::Full { facets, .. } = &hull else {
            panic!("expected full hull");
        };
        assert_eq!(facets.len(), 2);
        assert_eq!(hull.essential_points().len(), 4);
    }

    #[test]
    fn collinear_chain_keeps_strict_vertices() {
        let terms = lift(&[([0, 0], 0), ([1, 0], 1), ([2, 0], 0)]);
        let PlanarLift::Collinear(chain) = planar_upper_hull(&terms) else {
            panic!("expected chain");
        };
        assert_eq!(chain.chain.len(), 3);
        let flat = lift(&[([0, 0], 0), ([1, 0], 0), ([2, 0], 0)]);
        let PlanarLift::Collinear(chain) = planar_upper_hull(&flat) else {
            panic!("expected chain");
        };
        assert_eq!(chain.chain.len(), 2);
        assert_eq!(chain.value(&[1, 0]), Some(rat(0)));
        assert_eq!(chain.value(&[3, 0]), None);
        assert_eq!(chain.value(&[1, 1]), None);
    }
}
