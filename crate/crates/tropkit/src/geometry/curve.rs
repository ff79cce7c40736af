//! Weighted planar tropical curves.
//!
//! A curve is the non-differentiability locus of the piecewise linear
//! function of a planar polynomial, stored as a rational polyhedral complex:
//! vertices dual to subdivision cells, bounded edges dual to interior
//! subdivision edges, rays dual to polygon boundary edges, every top face
//! weighted by the lattice length of its dual edge. Comparisons and unions
//! go through a canonical refinement of the two complexes on a common point
//! set, so they are exact and representation independent.

use std::collections::BTreeMap;

use num::{Signed, Zero};

use crate::error::{Result, TropError};
use crate::essential::essential_part;
use crate::poly::TropPoly;
use crate::scalar::Rat;

use super::{cross2, dual_subdivision, gcd2};

/// A rational point in the plane.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pt2 {
    pub x: Rat,
    pub y: Rat,
}

impl Pt2 {
    pub fn new(x: Rat, y: Rat) -> Self {
        Pt2 { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Pt2 { x: Rat::from_integer(x.into()), y: Rat::from_integer(y.into()) }
    }

    /// Point reflection through `o`: `2o - self`.
    pub fn reflect(&self, o: &Pt2) -> Pt2 {
        let two = Rat::from_integer(2.into());
        Pt2 { x: &two * &o.x - &self.x, y: two * &o.y - &self.y }
    }
}

/// A bounded edge between two curve vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveEdge {
    pub from: usize,
    pub to: usize,
    pub weight: u64,
    /// The dual subdivision edge, when the curve came from a polynomial.
    pub dual: Option<([i64; 2], [i64; 2])>,
}

/// An unbounded ray from a curve vertex in a primitive integer direction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveRay {
    pub from: usize,
    pub dir: [i64; 2],
    pub weight: u64,
    pub dual: Option<([i64; 2], [i64; 2])>,
}

/// A weighted rational polyhedral complex of pure dimension one.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PlanarCurve {
    pub vertices: Vec<Pt2>,
    pub edges: Vec<CurveEdge>,
    pub rays: Vec<CurveRay>,
}

impl PlanarCurve {
    pub fn empty() -> Self {
        PlanarCurve::default()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty() && self.rays.is_empty()
    }

    /// Point reflection of the whole complex through `o`. Dual data does not
    /// survive the reflection and is dropped.
    pub fn reflect(&self, o: &Pt2) -> PlanarCurve {
        let mut builder = CurveBuilder::new();
        for e in &self.edges {
            builder.add_edge(
                self.vertices[e.from].reflect(o),
                self.vertices[e.to].reflect(o),
                e.weight,
                None,
            );
        }
        for r in &self.rays {
            builder.add_ray(self.vertices[r.from].reflect(o), [-r.dir[0], -r.dir[1]], r.weight, None);
        }
        builder.build()
    }

    fn atoms(&self) -> Vec<(Atom, u64)> {
        let mut out = Vec::new();
        for e in &self.edges {
            out.push((
                Atom::seg(self.vertices[e.from].clone(), self.vertices[e.to].clone()),
                e.weight,
            ));
        }
        for r in &self.rays {
            out.push((Atom::ray(self.vertices[r.from].clone(), r.dir), r.weight));
        }
        out
    }
}

/// Canonicalizing builder: collects weighted edges and rays given by points,
/// dedups vertices and sorts everything.
pub(crate) struct CurveBuilder {
    verts: BTreeMap<Pt2, usize>,
    edges: Vec<(Pt2, Pt2, u64, Option<([i64; 2], [i64; 2])>)>,
    rays: Vec<(Pt2, [i64; 2], u64, Option<([i64; 2], [i64; 2])>)>,
}

impl CurveBuilder {
    pub fn new() -> Self {
        CurveBuilder { verts: BTreeMap::new(), edges: Vec::new(), rays: Vec::new() }
    }

    pub fn add_vertex(&mut self, p: Pt2) {
        let next = self.verts.len();
        self.verts.entry(p).or_insert(next);
    }

    pub fn add_edge(&mut self, a: Pt2, b: Pt2, w: u64, dual: Option<([i64; 2], [i64; 2])>) {
        assert!(a != b, "degenerate edge");
        self.add_vertex(a.clone());
        self.add_vertex(b.clone());
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        self.edges.push((a, b, w, dual));
    }

    pub fn add_ray(&mut self, o: Pt2, dir: [i64; 2], w: u64, dual: Option<([i64; 2], [i64; 2])>) {
        self.add_vertex(o.clone());
        self.rays.push((o, dir, w, dual));
    }

    pub fn build(self) -> PlanarCurve {
        let mut vertices: Vec<Pt2> = self.verts.keys().cloned().collect();
        vertices.sort();
        let index: BTreeMap<&Pt2, usize> =
            vertices.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut edges: Vec<CurveEdge> = self
            .edges
            .iter()
            .map(|(a, b, w, dual)| CurveEdge { from: index[a], to: index[b], weight: *w, dual: *dual })
            .collect();
        edges.sort_by_key(|e| (e.from, e.to, e.weight));
        let mut rays: Vec<CurveRay> = self
            .rays
            .iter()
            .map(|(o, d, w, dual)| CurveRay { from: index[o], dir: *d, weight: *w, dual: *dual })
            .collect();
        rays.sort_by_key(|r| (r.from, r.dir, r.weight));
        PlanarCurve { vertices, edges, rays }
    }
}

fn primitive(d: [i64; 2]) -> [i64; 2] {
    let g = gcd2(d[0], d[1]);
    [d[0] / g, d[1] / g]
}

fn lex_positive(d: [i64; 2]) -> [i64; 2] {
    if d[0] < 0 || (d[0] == 0 && d[1] < 0) {
        [-d[0], -d[1]]
    } else {
        d
    }
}

/// Primitive integer direction of a rational vector.
fn primitive_of_rational(dx: &Rat, dy: &Rat) -> [i64; 2] {
    let denom_lcm = num::integer::lcm(dx.denom().clone(), dy.denom().clone());
    let nx = (dx * Rat::from_integer(denom_lcm.clone())).to_integer();
    let ny = (dy * Rat::from_integer(denom_lcm)).to_integer();
    let g = num::integer::gcd(nx.clone(), ny.clone());
    if g.is_zero() {
        return [0, 0];
    }
    let px: i64 = (nx / &g).try_into().expect("direction fits i64");
    let py: i64 = (ny / &g).try_into().expect("direction fits i64");
    [px, py]
}

/// Build the weighted curve of a planar polynomial with at least two
/// essential monomials.
pub fn tropical_curve(f: &TropPoly) -> Result<PlanarCurve> {
    let data = dual_subdivision(f)?;
    let lift = &data.lift_values;
    let mut builder = CurveBuilder::new();

    if data.vertices.len() <= 2 {
        // Segment polytope: each cell is dual to a full line, stored as two
        // opposite rays from the point of the line closest to the origin.
        for cell in &data.cells {
            let (p, q) = (&cell[0], &cell[1]);
            let normal = [q[0] - p[0], q[1] - p[1]];
            let w = gcd2(normal[0], normal[1]) as u64;
            let c = &lift[p] - &lift[q];
            // Line <q - p, a> = c; anchor = c * m / <m, m>.
            let m0 = Rat::from_integer(normal[0].into());
            let m1 = Rat::from_integer(normal[1].into());
            let mm = &m0 * &m0 + &m1 * &m1;
            let scale = &c / &mm;
            let anchor = Pt2::new(&scale * &m0, scale * m1);
            let dir = lex_positive(primitive([-normal[1], normal[0]]));
            let dual = Some((to_pair(p), to_pair(q)));
            builder.add_ray(anchor.clone(), dir, w, dual);
            builder.add_ray(anchor, [-dir[0], -dir[1]], w, dual);
        }
        return Ok(builder.build());
    }

    // One vertex per cell: the point where all cell monomials tie.
    let mut cell_vertex: Vec<Pt2> = Vec::with_capacity(data.cells.len());
    for cell in &data.cells {
        cell_vertex.push(cell_tie_point(cell, lift));
    }

    // Edges of cells, keyed by the sorted endpoint pair.
    let mut edge_cells: BTreeMap<(Vec<i64>, Vec<i64>), Vec<usize>> = BTreeMap::new();
    for (ci, cell) in data.cells.iter().enumerate() {
        let k = cell.len();
        for i in 0..k {
            let (p, q) = (&cell[i], &cell[(i + 1) % k]);
            let key = if p <= q { (p.clone(), q.clone()) } else { (q.clone(), p.clone()) };
            edge_cells.entry(key).or_default().push(ci);
        }
    }

    let centroid = polygon_centroid(&data.vertices);
    for ((p, q), cells) in &edge_cells {
        let w = gcd2(q[0] - p[0], q[1] - p[1]) as u64;
        let dual = Some((to_pair(p), to_pair(q)));
        match cells.as_slice() {
            [a, b] => {
                builder.add_edge(cell_vertex[*a].clone(), cell_vertex[*b].clone(), w, dual);
            }
            [a] => {
                let n = primitive([-(q[1] - p[1]), q[0] - p[0]]);
                // Orient outward: away from the polygon centroid.
                let val = Rat::from_integer(n[0].into()) * (Rat::from_integer(p[0].into()) - &centroid.x)
                    + Rat::from_integer(n[1].into()) * (Rat::from_integer(p[1].into()) - &centroid.y);
                let n = if val.is_positive() { n } else { [-n[0], -n[1]] };
                builder.add_ray(cell_vertex[*a].clone(), n, w, dual);
            }
            other => unreachable!("subdivision edge in {} cells", other.len()),
        }
    }
    Ok(builder.build())
}

fn to_pair(p: &[i64]) -> [i64; 2] {
    [p[0], p[1]]
}

fn polygon_centroid(verts: &[Vec<i64>]) -> Pt2 {
    let k = Rat::from_integer((verts.len() as i64).into());
    let sx: i64 = verts.iter().map(|v| v[0]).sum();
    let sy: i64 = verts.iter().map(|v| v[1]).sum();
    Pt2::new(Rat::from_integer(sx.into()) / &k, Rat::from_integer(sy.into()) / k)
}

/// The point where all monomials of a two-dimensional cell tie: with the
/// facet plane `z = <c, x> + d`, the tie point is `-c`.
fn cell_tie_point(cell: &[Vec<i64>], lift: &BTreeMap<Vec<i64>, Rat>) -> Pt2 {
    let p = &cell[0];
    let (q, r) = {
        let mut found = None;
        for i in 1..cell.len() {
            for j in (i + 1)..cell.len() {
                if cross2(p, &cell[i], &cell[j]) != 0 {
                    found = Some((&cell[i], &cell[j]));
                    break;
                }
            }
            if found.is_some() {
                break;
            }
        }
        found.expect("two-dimensional cell")
    };
    let det = Rat::from_integer(cross2(p, q, r).into());
    let ax = Rat::from_integer((q[0] - p[0]).into());
    let ay = Rat::from_integer((q[1] - p[1]).into());
    let az = &lift[q] - &lift[p];
    let bx = Rat::from_integer((r[0] - p[0]).into());
    let by = Rat::from_integer((r[1] - p[1]).into());
    let bz = &lift[r] - &lift[p];
    let c1 = (&az * &by - &bz * &ay) / &det;
    let c2 = (ax * bz - bx * az) / det;
    Pt2::new(-c1, -c2)
}

/// Balancing: at every vertex the weighted primitive outgoing directions of
/// the incident faces sum to zero.
pub fn check_balancing(c: &PlanarCurve) -> bool {
    let mut sums: Vec<(Rat, Rat)> = vec![(Rat::zero(), Rat::zero()); c.vertices.len()];
    let mut touched = vec![false; c.vertices.len()];
    for e in &c.edges {
        let dx = &c.vertices[e.to].x - &c.vertices[e.from].x;
        let dy = &c.vertices[e.to].y - &c.vertices[e.from].y;
        let d = primitive_of_rational(&dx, &dy);
        let w = Rat::from_integer((e.weight as i64).into());
        sums[e.from].0 += &w * Rat::from_integer(d[0].into());
        sums[e.from].1 += &w * Rat::from_integer(d[1].into());
        sums[e.to].0 -= &w * Rat::from_integer(d[0].into());
        sums[e.to].1 -= &w * Rat::from_integer(d[1].into());
        touched[e.from] = true;
        touched[e.to] = true;
    }
    for r in &c.rays {
        let w = Rat::from_integer((r.weight as i64).into());
        sums[r.from].0 += &w * Rat::from_integer(r.dir[0].into());
        sums[r.from].1 += &w * Rat::from_integer(r.dir[1].into());
        touched[r.from] = true;
    }
    sums.iter()
        .zip(&touched)
        .all(|((sx, sy), t)| !t || (sx.is_zero() && sy.is_zero()))
}

/// One-dimensional piece of a curve in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Atom {
    Seg(Pt2, Pt2),
    Ray(Pt2, [i64; 2]),
}

impl Atom {
    fn seg(a: Pt2, b: Pt2) -> Atom {
        if a <= b {
            Atom::Seg(a, b)
        } else {
            Atom::Seg(b, a)
        }
    }

    fn ray(o: Pt2, d: [i64; 2]) -> Atom {
        Atom::Ray(o, primitive(d))
    }

    fn base(&self) -> &Pt2 {
        match self {
            Atom::Seg(a, _) => a,
            Atom::Ray(o, _) => o,
        }
    }

    /// A (not necessarily primitive) rational direction vector.
    fn dir(&self) -> (Rat, Rat) {
        match self {
            Atom::Seg(a, b) => (&b.x - &a.x, &b.y - &a.y),
            Atom::Ray(_, d) => (Rat::from_integer(d[0].into()), Rat::from_integer(d[1].into())),
        }
    }

    /// Canonical key of the supporting line: (primitive lex-positive normal,
    /// offset).
    fn line_key(&self) -> ([i64; 2], Rat) {
        let (dx, dy) = self.dir();
        let d = primitive_of_rational(&dx, &dy);
        let n = lex_positive([-d[1], d[0]]);
        let b = self.base();
        let off = Rat::from_integer(n[0].into()) * &b.x + Rat::from_integer(n[1].into()) * &b.y;
        (n, off)
    }

    /// Does the point lie on the atom (endpoints included)?
    fn contains(&self, p: &Pt2) -> bool {
        match self.param_of(p) {
            None => false,
            Some(t) => match self {
                Atom::Seg(..) => !t.is_negative() && t <= Rat::from_integer(1.into()),
                Atom::Ray(..) => !t.is_negative(),
            },
        }
    }

    /// Parameter of a point on the supporting line, if it is on the line:
    /// `p = base + t * dir`.
    fn param_of(&self, p: &Pt2) -> Option<Rat> {
        let b = self.base();
        let (dx, dy) = self.dir();
        let px = &p.x - &b.x;
        let py = &p.y - &b.y;
        if &px * &dy != &py * &dx {
            return None;
        }
        if !dx.is_zero() {
            Some(px / dx)
        } else if !dy.is_zero() {
            Some(py / dy)
        } else {
            None
        }
    }

    fn point_at(&self, t: &Rat) -> Pt2 {
        let b = self.base();
        let (dx, dy) = self.dir();
        Pt2::new(&b.x + &dx * t, &b.y + &dy * t)
    }

    /// Transversal intersection point of the supporting lines, when it lies
    /// on both atoms.
    fn crossing(&self, other: &Atom) -> Option<Pt2> {
        let (d1x, d1y) = self.dir();
        let (d2x, d2y) = other.dir();
        let det = &d1x * &d2y - &d1y * &d2x;
        if det.is_zero() {
            return None;
        }
        let (b1, b2) = (self.base(), other.base());
        let rx = &b2.x - &b1.x;
        let ry = &b2.y - &b1.y;
        let t = (&rx * &d2y - &ry * &d2x) / &det;
        let p = self.point_at(&t);
        (self.contains(&p) && other.contains(&p)).then_some(p)
    }

    /// Split at the given interior points (callers pass a superset; points
    /// off the atom or at its endpoints are ignored).
    fn split(&self, pool: &[Pt2]) -> Vec<Atom> {
        let mut cuts: Vec<Rat> = Vec::new();
        for p in pool {
            if let Some(t) = self.param_of(p) {
                let interior = match self {
                    Atom::Seg(..) => t.is_positive() && t < Rat::from_integer(1.into()),
                    Atom::Ray(..) => t.is_positive(),
                };
                if interior {
                    cuts.push(t);
                }
            }
        }
        cuts.sort();
        cuts.dedup();
        if cuts.is_empty() {
            return vec![self.clone()];
        }
        let mut out = Vec::with_capacity(cuts.len() + 1);
        let mut prev = self.base().clone();
        for t in &cuts {
            let p = self.point_at(t);
            out.push(Atom::seg(prev, p.clone()));
            prev = p;
        }
        match self {
            Atom::Seg(_, b) => out.push(Atom::seg(prev, b.clone())),
            Atom::Ray(_, d) => out.push(Atom::Ray(prev, *d)),
        }
        out
    }
}

type AtomSet = BTreeMap<Atom, u64>;

fn refined_atoms(curves: &[&PlanarCurve]) -> Vec<AtomSet> {
    let all: Vec<(Atom, u64)> = curves.iter().flat_map(|c| c.atoms()).collect();
    let mut pool: Vec<Pt2> = Vec::new();
    for (a, _) in &all {
        match a {
            Atom::Seg(p, q) => {
                pool.push(p.clone());
                pool.push(q.clone());
            }
            Atom::Ray(o, _) => pool.push(o.clone()),
        }
    }
    for i in 0..all.len() {
        for j in (i + 1)..all.len() {
            if let Some(p) = all[i].0.crossing(&all[j].0) {
                pool.push(p);
            }
        }
    }
    pool.sort();
    pool.dedup();
    curves
        .iter()
        .map(|c| {
            let mut set = AtomSet::new();
            for (atom, w) in c.atoms() {
                for piece in atom.split(&pool) {
                    *set.entry(piece).or_insert(0) += w;
                }
            }
            set
        })
        .collect()
}

/// Weighted equality: identical as sets with equal weights on corresponding
/// top faces, decided on the canonical common refinement.
pub fn weighted_equal(c1: &PlanarCurve, c2: &PlanarCurve) -> bool {
    let refined = refined_atoms(&[c1, c2]);
    refined[0] == refined[1]
}

/// Set-theoretic equality, ignoring weights.
pub fn weighted_set_equal(c1: &PlanarCurve, c2: &PlanarCurve) -> bool {
    let refined = refined_atoms(&[c1, c2]);
    refined[0].keys().eq(refined[1].keys())
}

/// Overlay of two complexes; weights add on overlapping refined faces.
pub fn weighted_union(c1: &PlanarCurve, c2: &PlanarCurve) -> PlanarCurve {
    let refined = refined_atoms(&[c1, c2]);
    let mut merged = refined[0].clone();
    for (atom, w) in &refined[1] {
        *merged.entry(atom.clone()).or_insert(0) += w;
    }
    let mut builder = CurveBuilder::new();
    for (atom, w) in merged {
        match atom {
            Atom::Seg(a, b) => builder.add_edge(a, b, w, None),
            Atom::Ray(o, d) => builder.add_ray(o, d, w, None),
        }
    }
    builder.build()
}

/// Subtract `c2` from `c1` on the common refinement; `None` when `c2`
/// carries weight somewhere `c1` does not cover it.
pub fn weighted_subtract(c1: &PlanarCurve, c2: &PlanarCurve) -> Option<PlanarCurve> {
    let refined = refined_atoms(&[c1, c2]);
    let mut left = refined[0].clone();
    for (atom, w) in &refined[1] {
        let have = left.get_mut(atom)?;
        if *have < *w {
            return None;
        }
        *have -= w;
    }
    let mut builder = CurveBuilder::new();
    for (atom, w) in left {
        if w == 0 {
            continue;
        }
        match atom {
            Atom::Seg(a, b) => builder.add_edge(a, b, w, None),
            Atom::Ray(o, d) => builder.add_ray(o, d, w, None),
        }
    }
    Some(builder.build())
}

/// Extract every full line contained in the complex, each with its maximal
/// multiplicity (the minimum total weight along the line); returns the
/// remaining curve and the extraction count per line, keyed by the line's
/// primitive normal and offset.
pub fn curve_primitive_reduction(c: &PlanarCurve) -> (PlanarCurve, Vec<(([i64; 2], Rat), u64)>) {
    let mut groups: BTreeMap<([i64; 2], Rat), Vec<(Atom, u64)>> = BTreeMap::new();
    for (atom, w) in c.atoms() {
        groups.entry(atom.line_key()).or_default().push((atom, w));
    }
    let mut builder = CurveBuilder::new();
    let mut extracted = Vec::new();
    for (key, atoms) in groups {
        let reference = atoms[0].0.clone();
        let (rdx, rdy) = reference.dir();
        // Intervals of each atom along the shared line.
        let mut intervals: Vec<(Option<Rat>, Option<Rat>, u64)> = Vec::new();
        let mut breaks: Vec<Rat> = Vec::new();
        for (atom, w) in &atoms {
            let (lo, hi) = match atom {
                Atom::Seg(p, q) => {
                    let t1 = reference.param_of(p).expect("collinear");
                    let t2 = reference.param_of(q).expect("collinear");
                    if t1 <= t2 {
                        (Some(t1), Some(t2))
                    } else {
                        (Some(t2), Some(t1))
                    }
                }
                Atom::Ray(o, d) => {
                    let t0 = reference.param_of(o).expect("collinear");
                    let forward = (&rdx * Rat::from_integer(d[0].into())
                        + &rdy * Rat::from_integer(d[1].into()))
                    .is_positive();
                    if forward {
                        (Some(t0), None)
                    } else {
                        (None, Some(t0))
                    }
                }
            };
            if let Some(t) = &lo {
                breaks.push(t.clone());
            }
            if let Some(t) = &hi {
                breaks.push(t.clone());
            }
            intervals.push((lo, hi, *w));
        }
        breaks.sort();
        breaks.dedup();
        // Elementary pieces: two unbounded ends plus the bounded gaps.
        let mut pieces: Vec<(Option<Rat>, Option<Rat>)> = Vec::new();
        if breaks.is_empty() {
            pieces.push((None, None));
        } else {
            pieces.push((None, Some(breaks[0].clone())));
            for w in breaks.windows(2) {
                pieces.push((Some(w[0].clone()), Some(w[1].clone())));
            }
            pieces.push((Some(breaks[breaks.len() - 1].clone()), None));
        }
        let weight_of = |piece: &(Option<Rat>, Option<Rat>)| -> u64 {
            intervals
                .iter()
                .filter(|(lo, hi, _)| {
                    let lo_ok = match (lo, &piece.0) {
                        (None, _) => true,
                        (Some(_), None) => false,
                        (Some(a), Some(b)) => a <= b,
                    };
                    let hi_ok = match (hi, &piece.1) {
                        (None, _) => true,
                        (Some(_), None) => false,
                        (Some(a), Some(b)) => a >= b,
                    };
                    lo_ok && hi_ok
                })
                .map(|(_, _, w)| *w)
                .sum()
        };
        let m = pieces.iter().map(|p| weight_of(p)).min().unwrap_or(0);
        if m == 0 {
            for (atom, w) in atoms {
                match atom {
                    Atom::Seg(a, b) => builder.add_edge(a, b, w, None),
                    Atom::Ray(o, d) => builder.add_ray(o, d, w, None),
                }
            }
            continue;
        }
        extracted.push((key, m));
        // Re-emit the leftover weight piece by piece.
        let dir = primitive_of_rational(&rdx, &rdy);
        for piece in &pieces {
            let leftover = weight_of(piece) - m;
            if leftover == 0 {
                continue;
            }
            match piece {
                (Some(a), Some(b)) => builder.add_edge(
                    reference.point_at(a),
                    reference.point_at(b),
                    leftover,
                    None,
                ),
                (Some(a), None) => builder.add_ray(reference.point_at(a), dir, leftover, None),
                (None, Some(b)) => {
                    builder.add_ray(reference.point_at(b), [-dir[0], -dir[1]], leftover, None)
                }
                (None, None) => unreachable!("a line stored as atoms has endpoints"),
            }
        }
    }
    (builder.build(), extracted)
}

/// Semidisjointness for a family of curves: no two of them may share a
/// one-dimensional overlap of top faces (intersections in points are fine).
pub fn is_semidisjoint(curves: &[&PlanarCurve]) -> bool {
    for i in 0..curves.len() {
        for j in (i + 1)..curves.len() {
            let a1 = curves[i].atoms();
            let a2 = curves[j].atoms();
            for (a, _) in &a1 {
                for (b, _) in &a2 {
                    if a.line_key() == b.line_key() && overlap_positive(a, b) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Do two collinear atoms overlap in a segment of positive length?
///
/// Both atoms are parametrized along `a`'s direction from `a`'s base; each
/// covers an interval with optionally infinite endpoints, and the overlap is
/// positive exactly when the interval intersection has interior.
fn overlap_positive(a: &Atom, b: &Atom) -> bool {
    // (lo, hi) with None = unbounded on that side.
    let interval_of = |atom: &Atom| -> (Option<Rat>, Option<Rat>) {
        match atom {
            Atom::Seg(p, q) => {
                let t1 = a.param_of(p).expect("collinear");
                let t2 = a.param_of(q).expect("collinear");
                if t1 <= t2 {
                    (Some(t1), Some(t2))
                } else {
                    (Some(t2), Some(t1))
                }
            }
            Atom::Ray(o, d) => {
                let t0 = a.param_of(o).expect("collinear");
                let (adx, ady) = a.dir();
                let forward = (&adx * Rat::from_integer(d[0].into())
                    + ady * Rat::from_integer(d[1].into()))
                .is_positive();
                if forward {
                    (Some(t0), None)
                } else {
                    (None, Some(t0))
                }
            }
        }
    };
    let (lo_a, hi_a) = interval_of(a);
    let (lo_b, hi_b) = interval_of(b);
    let lo = match (lo_a, lo_b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(if x > y { x } else { y }),
    };
    let hi = match (hi_a, hi_b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(if x < y { x } else { y }),
    };
    match (lo, hi) {
        (Some(l), Some(h)) => l < h,
        _ => true,
    }
}

/// Is the point on the curve of `f`, i.e. is the maximum attained by at
/// least two monomials there?
pub fn on_tropical_curve(f: &TropPoly, a: &[Rat]) -> Result<bool> {
    let ess = essential_part(f)?;
    let mut best: Option<Rat> = None;
    let mut count = 0usize;
    for (e, c) in ess.terms() {
        let v = crate::poly::finite_term_value(e, c, a);
        match &best {
            Some(b) if &v > b => {
                best = Some(v);
                count = 1;
            }
            Some(b) if &v == b => count += 1,
            Some(_) => {}
            None => {
                best = Some(v);
                count = 1;
            }
        }
    }
    Ok(count >= 2)
}

/// A multiset of normalized binomials with multiplicities whose varieties
/// jointly cover a curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimitiveCover {
    pub items: Vec<CoverItem>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverItem {
    pub binomial: TropPoly,
    pub multiplicity: u64,
}

impl PrimitiveCover {
    pub fn new(mut items: Vec<CoverItem>) -> Self {
        // Merge repeated primitives, then order deterministically.
        let mut merged: BTreeMap<Vec<(Vec<i64>, Rat)>, u64> = BTreeMap::new();
        for item in items.drain(..) {
            *merged.entry(item.binomial.term_vec()).or_insert(0) += item.multiplicity;
        }
        let items = merged
            .into_iter()
            .map(|(terms, multiplicity)| CoverItem {
                binomial: TropPoly::from_finite_terms(terms[0].0.len(), terms).expect("terms"),
                multiplicity,
            })
            .collect();
        PrimitiveCover { items }
    }

    /// Cardinality counted with multiplicities.
    pub fn cardinality(&self) -> u64 {
        self.items.iter().map(|i| i.multiplicity).sum()
    }
}

/// Write a binomial as `monomial ⊙ q^m` with `q` a normalized binomial whose
/// exponent gap is primitive and `m` maximal; returns `(q, m)`.
///
/// The normal form is `Λ^d ⊕ β` with `d` the lex-positive primitive gap and
/// `β = (α_t − α_s)/m`, so `Z(q) = Z(p)` exactly; rational coefficients make
/// the split exact even when the coefficient gap is not divisible by `m`.
pub fn primitive_multiplicity(p: &TropPoly) -> Result<(TropPoly, u64)> {
    if p.num_terms() != 2 {
        return Err(TropError::NotBinomial { found: p.num_terms() });
    }
    let terms = p.term_vec();
    let (t_exp, t_coeff) = &terms[0];
    let (s_exp, s_coeff) = &terms[1];
    let gap: Vec<i64> = s_exp.iter().zip(t_exp).map(|(a, b)| a - b).collect();
    let g: i64 = gap.iter().fold(0i64, |acc, &x| num::integer::gcd(acc, x.abs()));
    let mut dir: Vec<i64> = gap.iter().map(|x| x / g).collect();
    let (mut s_c, mut t_c) = (s_coeff.clone(), t_coeff.clone());
    // Lex-positive gap; flipping the sign swaps the roles of s and t.
    if dir.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
        dir = dir.iter().map(|x| -x).collect();
        std::mem::swap(&mut s_c, &mut t_c);
    }
    let m = g as u64;
    let beta = (t_c - s_c) / Rat::from_integer(g.into());
    let q = TropPoly::from_finite_terms(
        p.n(),
        vec![(dir, Rat::zero()), (vec![0; p.n()], beta)],
    )?;
    Ok((q, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_poly;
    use crate::scalar::rat;

    fn p(src: &str) -> TropPoly {
        parse_poly(src, None).unwrap().poly
    }

    fn pn(src: &str, n: usize) -> TropPoly {
        parse_poly(src, Some(n)).unwrap().poly
    }

    fn ray_dirs(c: &PlanarCurve) -> Vec<[i64; 2]> {
        let mut d: Vec<[i64; 2]> = c.rays.iter().map(|r| r.dir).collect();
        d.sort();
        d
    }

    #[test]
    fn line_curve_has_three_unit_rays() {
        let c = tropical_curve(&p("x + y + 0")).unwrap();
        assert_eq!(c.vertices, vec![Pt2::from_ints(0, 0)]);
        assert_eq!(ray_dirs(&c), vec![[-1, 0], [0, -1], [1, 1]]);
        assert!(c.rays.iter().all(|r| r.weight == 1));
        assert!(check_balancing(&c));
    }

    #[test]
    fn node_curve_rays() {
        let c = tropical_curve(&p("x^2*y + x + 0")).unwrap();
        assert_eq!(c.vertices, vec![Pt2::from_ints(0, 0)]);
        assert_eq!(ray_dirs(&c), vec![[-1, 2], [0, -1], [1, -1]]);
        assert!(check_balancing(&c));
    }

    #[test]
    fn conic_curve_geometry() {
        let c = tropical_curve(&p("x^2 + y^2 + 1*x*y + 0")).unwrap();
        assert_eq!(c.vertices, vec![Pt2::from_ints(-1, 0), Pt2::from_ints(0, -1)]);
        assert_eq!(c.edges.len(), 1);
        // Weight-2 rays dual to the length-2 polygon edges.
        let mut weighted: Vec<([i64; 2], u64)> = c.rays.iter().map(|r| (r.dir, r.weight)).collect();
        weighted.sort();
        assert_eq!(weighted, vec![([-1, 0], 2), ([0, -1], 2), ([1, 1], 1), ([1, 1], 1)]);
        assert!(check_balancing(&c));
    }

    #[test]
    fn multiple_line_weights() {
        // x^3 y^5 + y^2 = y^2 (xy + 0)^3: one line of weight 3.
        let f = p("x^3*y^5 + y^2");
        let c = tropical_curve(&f).unwrap();
        assert_eq!(c.rays.len(), 2);
        assert!(c.rays.iter().all(|r| r.weight == 3));
        assert!(check_balancing(&c));
        let (q, m) = primitive_multiplicity(&f).unwrap();
        assert_eq!(q, p("x*y + 0"));
        assert_eq!(m, 3);
    }

    #[test]
    fn primitive_multiplicity_splits_coefficients() {
        let (q, m) = primitive_multiplicity(&p("x^2*y^2 + 2")).unwrap();
        assert_eq!(m, 2);
        assert_eq!(q, p("x*y + 1"));
        // q^m times the monomial matches the original up to essential part.
        let back = crate::essential::essential_part(&q.power(2).unwrap()).unwrap();
        assert_eq!(back, p("x^2*y^2 + 2"));
        let (q, m) = primitive_multiplicity(&p("x + 0")).unwrap();
        assert_eq!((q, m), (p("x + 0"), 1));
    }

    #[test]
    fn balancing_detects_tampered_weights() {
        let mut c = tropical_curve(&p("x + y + 0")).unwrap();
        assert!(check_balancing(&c));
        c.rays[0].weight = 2;
        assert!(!check_balancing(&c));
    }

    #[test]
    fn weighted_equality_and_union() {
        let f = p("x + y + 0");
        let g = p("x^2*y + x + 0");
        let zf = tropical_curve(&f).unwrap();
        let zg = tropical_curve(&g).unwrap();
        assert!(weighted_equal(&zf, &zf));
        assert!(!weighted_equal(&zf, &zg));
        // Z(fg) = Z(f) ∪w Z(g).
        let zfg = tropical_curve(&f.mul(&g).unwrap()).unwrap();
        let union = weighted_union(&zf, &zg);
        assert!(weighted_equal(&zfg, &union));
        assert!(check_balancing(&union));
        // Union with the empty curve changes nothing.
        assert!(weighted_equal(&weighted_union(&zf, &PlanarCurve::empty()), &zf));
    }

    #[test]
    fn squaring_doubles_weights_but_not_the_set() {
        let f = p("x + y + 0");
        let zf = tropical_curve(&f).unwrap();
        let zf2 = tropical_curve(&f.power(2).unwrap()).unwrap();
        assert!(weighted_set_equal(&zf, &zf2));
        assert!(!weighted_equal(&zf, &zf2));
        assert!(weighted_equal(&weighted_union(&zf, &zf), &zf2));
    }

    #[test]
    fn self_overlap_of_a_line_doubles() {
        let f = pn("x + 0", 2);
        let zf = tropical_curve(&f).unwrap();
        let doubled = weighted_union(&zf, &zf);
        let zf2 = tropical_curve(&f.power(2).unwrap()).unwrap();
        assert!(weighted_equal(&doubled, &zf2));
    }

    #[test]
    fn semidisjointness() {
        // Disjoint parallel primitive translates.
        let v0 = tropical_curve(&pn("x + 0", 2)).unwrap();
        let v1 = tropical_curve(&pn("x + 1", 2)).unwrap();
        assert!(is_semidisjoint(&[&v0, &v1]));
        assert!(!is_semidisjoint(&[&v0, &v0]));
        // Crossing transversally at a point is fine.
        let h = tropical_curve(&pn("y + 0", 2)).unwrap();
        assert!(is_semidisjoint(&[&v0, &h]));
        // Two translated three-ray lines share a diagonal ray: not semidisjoint.
        let l1 = tropical_curve(&p("x + y + 0")).unwrap();
        let l2 = tropical_curve(&p("x + y + 1")).unwrap();
        assert!(!is_semidisjoint(&[&l1, &l2]));
    }

    #[test]
    fn curve_membership() {
        let f = p("x + y + 0");
        assert!(on_tropical_curve(&f, &[rat(0), rat(0)]).unwrap());
        assert!(on_tropical_curve(&f, &[rat(3), rat(3)]).unwrap());
        assert!(!on_tropical_curve(&f, &[rat(1), rat(0)]).unwrap());
    }

    #[test]
    fn reflection_is_an_exact_involution() {
        let c = tropical_curve(&p("x^2*y + x + 0")).unwrap();
        let o = Pt2::from_ints(1, 2);
        let back = c.reflect(&o).reflect(&o);
        assert!(weighted_equal(&c, &back));
    }

    #[test]
    fn duality_counts_match_subdivision() {
        let f = p("x^2*y^2 + 1*x*y + x + y");
        let data = dual_subdivision(&f).unwrap();
        let c = tropical_curve(&f).unwrap();
        assert_eq!(c.vertices.len(), data.cells.len());
        // Rays correspond to polygon boundary 1-faces.
        let boundary: usize = data
            .cells
            .iter()
            .map(|cell| cell.len())
            .sum::<usize>()
            - 2 * c.edges.len();
        assert_eq!(c.rays.len(), boundary);
        // Orthogonality of every face to its dual edge.
        for e in &c.edges {
            let (p, q) = e.dual.unwrap();
            let dx = &c.vertices[e.to].x - &c.vertices[e.from].x;
            let dy = &c.vertices[e.to].y - &c.vertices[e.from].y;
            let dot = dx * Rat::from_integer((q[0] - p[0]).into())
                + dy * Rat::from_integer((q[1] - p[1]).into());
            assert!(dot.is_zero());
        }
        for r in &c.rays {
            let (p, q) = r.dual.unwrap();
            let dot = (q[0] - p[0]) * r.dir[0] + (q[1] - p[1]) * r.dir[1];
            assert_eq!(dot, 0);
        }
    }
}
