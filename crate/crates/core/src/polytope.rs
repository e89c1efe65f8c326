//! Rational polytopes: membership, rank, and enumeration of the lattice
//! points of denominator `n`. Non-convex unions (projected polytopes,
//! boundaries) are represented as a list of convex pieces.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::exact::{Hyperplane, Point, Rat, Simplex};
use crate::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Rel {
    Le,
    Eq,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Constraint {
    pub hyperplane: Hyperplane,
    pub rel: Rel,
}

impl Constraint {
    pub fn le(h: Hyperplane) -> Self {
        Constraint { hyperplane: h, rel: Rel::Le }
    }

    pub fn eq(h: Hyperplane) -> Self {
        Constraint { hyperplane: h, rel: Rel::Eq }
    }

    pub fn satisfied(&self, p: &Point) -> bool {
        match self.hyperplane.residual(p) {
            Err(_) => false,
            Ok(r) => match self.rel {
                Rel::Le => !r.is_positive(),
                Rel::Eq => r.is_zero(),
            },
        }
    }
}

/// Opt-in specialized lattice enumerators for the catalog families.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FastEnum {
    /// `0 ≤ x_1 ≤ … ≤ x_m ≤ 1`.
    OrderSimplex,
    /// The polytope equals its bounding box.
    Cuboid,
}

/// A region carved out of a convex body: the part of a closed simplex whose
/// barycentric weights are strictly positive on the `strict` vertex indices.
/// With every vertex strict this is the open simplex; listing fewer vertices
/// also removes the boundary faces that have no solid neighborhood left after
/// the cut (taking the closure of the set difference removes them too).
#[derive(Clone, Debug)]
pub struct ExcludedRegion {
    pub simplex: Simplex,
    pub strict: std::collections::BTreeSet<usize>,
}

impl ExcludedRegion {
    pub fn open_simplex(simplex: Simplex) -> Self {
        let strict = (0..simplex.vertices().len()).collect();
        ExcludedRegion { simplex, strict }
    }

    pub fn contains(&self, p: &Point) -> bool {
        match self.simplex.barycentric(p) {
            None => false,
            Some(lambda) => self.strict.iter().all(|&i| lambda[i].is_positive()),
        }
    }
}

/// A bounded rational polytope with both a vertex list and an H-representation.
/// When `pieces` is nonempty the polytope is the (possibly non-convex) union
/// of the pieces and the top-level constraints are unused. Regions in
/// `excluded` are removed from the body.
#[derive(Clone, Debug)]
pub struct Polytope {
    pub dim: usize,
    pub vertices: Vec<Point>,
    pub constraints: Vec<Constraint>,
    pub pieces: Vec<Polytope>,
    pub excluded: Vec<ExcludedRegion>,
    pub fast: Option<FastEnum>,
    /// Signed triangulation for exact volume work: `(+1, S)` adds, `(-1, S)` removes.
    pub triangulation: Vec<(i32, Simplex)>,
}

/// A point of `(1/n)·Z^m`, stored as integer numerators over a shared denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct LatticePoint {
    pub numerators: Vec<i64>,
    pub denominator: u64,
}

impl LatticePoint {
    pub fn new(numerators: Vec<i64>, denominator: u64) -> Self {
        LatticePoint { numerators, denominator }
    }

    pub fn to_point(&self) -> Point {
        let d = BigInt::from(self.denominator);
        Point::new(self.numerators.iter().map(|&k| Rat::new(BigInt::from(k), d.clone())).collect())
    }

    /// `n · rank`, an exact integer.
    pub fn scaled_rank(&self) -> i64 {
        self.numerators.iter().sum()
    }

    /// Exact conversion from a rational point; `None` when some coordinate is
    /// not a multiple of `1/n`.
    pub fn from_point(p: &Point, n: u64) -> Option<Self> {
        let nn = BigInt::from(n);
        let mut numerators = Vec::with_capacity(p.dim());
        for c in &p.0 {
            let scaled = c * Rat::from_integer(nn.clone());
            if !scaled.denom().is_one() {
                return None;
            }
            numerators.push(scaled.numer().to_i64()?);
        }
        Some(LatticePoint { numerators, denominator: n })
    }

    /// Coordinatewise partial order.
    pub fn leq(&self, other: &LatticePoint) -> bool {
        self.denominator == other.denominator
            && self.numerators.iter().zip(&other.numerators).all(|(a, b)| a <= b)
    }
}

impl Polytope {
    /// A convex polytope from explicit V- and H-representations. Every vertex
    /// must satisfy every constraint.
    pub fn convex(dim: usize, vertices: Vec<Point>, constraints: Vec<Constraint>) -> Result<Self> {
        let p = Polytope { dim, vertices, constraints, pieces: Vec::new(), excluded: Vec::new(), fast: None, triangulation: Vec::new() };
        p.check_vertices()?;
        Ok(p)
    }

    /// A union of convex pieces; the vertex list is the union of the pieces'.
    pub fn union(dim: usize, pieces: Vec<Polytope>) -> Self {
        let mut vertices: Vec<Point> = Vec::new();
        for piece in &pieces {
            for v in &piece.vertices {
                if !vertices.contains(v) {
                    vertices.push(v.clone());
                }
            }
        }
        Polytope { dim, vertices, constraints: Vec::new(), pieces, excluded: Vec::new(), fast: None, triangulation: Vec::new() }
    }

    /// The convex hull of a simplex, with the H-representation derived from
    /// its barycentric functionals (affine-span equalities plus one facet
    /// inequality per vertex).
    pub fn from_simplex(s: &Simplex) -> Result<Self> {
        let m = s.ambient_dim();
        let k = s.dim();
        let v0 = &s.vertices()[0];
        // Barycentric functionals: lambda_i(p) = row_i·p + c_i.
        let mut rows: Vec<(Vec<Rat>, Rat)> = Vec::new();
        let mut sum_row = vec![Rat::zero(); m];
        let mut sum_const = Rat::zero();
        for i in 1..=k {
            let lam = simplex_lambda_functional(s, i);
            for (a, b) in sum_row.iter_mut().zip(&lam.0) {
                *a += b;
            }
            sum_const += &lam.1;
            rows.push(lam);
        }
        let lam0 = ((0..m).map(|j| -&sum_row[j]).collect::<Vec<_>>(), Rat::one() - &sum_const);
        let mut constraints = Vec::new();
        // lambda ≥ 0  ⇔  (−row)·p ≤ const
        for (row, c) in std::iter::once(&lam0).chain(rows.iter()) {
            let coeffs: Vec<Rat> = row.iter().map(|a| -a).collect();
            if coeffs.iter().all(Rat::is_zero) {
                continue;
            }
            constraints.push(Constraint::le(Hyperplane::new(coeffs, c.clone())?));
        }
        // Affine-span equalities: rows of (A·B − I) applied to (p − v0).
        if k < m {
            let eqs = span_equalities(s, v0)?;
            constraints.extend(eqs);
        }
        let mut p = Polytope::convex(m, s.vertices().to_vec(), constraints)?;
        p.triangulation = vec![(1, s.clone())];
        Ok(p)
    }

    fn check_vertices(&self) -> Result<()> {
        for v in &self.vertices {
            if v.dim() != self.dim {
                return Err(Error::DimensionMismatch { expected: self.dim, got: v.dim() });
            }
            for c in &self.constraints {
                if !c.satisfied(v) {
                    return Err(Error::PreconditionFailed(format!(
                        "vertex {v:?} violates a polytope constraint"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Exact membership.
    pub fn contains(&self, p: &Point) -> bool {
        if p.dim() != self.dim {
            return false;
        }
        let base = if self.pieces.is_empty() {
            self.constraints.iter().all(|c| c.satisfied(p))
        } else {
            self.pieces.iter().any(|piece| piece.contains(p))
        };
        if !base {
            return false;
        }
        !self.excluded.iter().any(|region| region.contains(p))
    }

    /// Sum of the maximum and minimum ranks, attained at vertices.
    pub fn rank(&self) -> Result<Rat> {
        let mut ranks = self.vertices.iter().map(Point::rank);
        let first = ranks.next().ok_or(Error::EmptyPolytope)?;
        let (mut lo, mut hi) = (first.clone(), first);
        for r in ranks {
            if r < lo {
                lo = r.clone();
            }
            if r > hi {
                hi = r;
            }
        }
        Ok(lo + hi)
    }

    /// Per-coordinate bounding box `[lo_j, hi_j]` over the vertex list.
    pub fn bounding_box(&self) -> Result<Vec<(Rat, Rat)>> {
        if self.vertices.is_empty() {
            return Err(Error::EmptyPolytope);
        }
        let mut out: Vec<(Rat, Rat)> = self.vertices[0].0.iter().map(|c| (c.clone(), c.clone())).collect();
        for v in &self.vertices {
            for (j, c) in v.0.iter().enumerate() {
                if c < &out[j].0 {
                    out[j].0 = c.clone();
                }
                if c > &out[j].1 {
                    out[j].1 = c.clone();
                }
            }
        }
        Ok(out)
    }

    /// The points of `(1/n)·Z^m` inside the polytope, sorted lexicographically.
    pub fn lattice_points(&self, n: u64) -> Result<Vec<LatticePoint>> {
        assert!(n >= 1);
        match self.fast {
            Some(FastEnum::OrderSimplex) => Ok(order_simplex_points(self.dim, n)),
            Some(FastEnum::Cuboid) => self.box_scan(n, false),
            None => self.box_scan(n, true),
        }
    }

    fn box_scan(&self, n: u64, filter: bool) -> Result<Vec<LatticePoint>> {
        let bbox = self.bounding_box()?;
        let mut ranges = Vec::with_capacity(self.dim);
        for (lo, hi) in &bbox {
            ranges.push((ceil_scaled(lo, n), floor_scaled(hi, n)));
        }
        if ranges.iter().any(|(lo, hi)| lo > hi) {
            return Ok(Vec::new());
        }
        let (lo0, hi0) = ranges[0];
        let mut points: Vec<LatticePoint> = (lo0..=hi0)
            .into_par_iter()
            .flat_map_iter(|first| {
                let mut acc = Vec::new();
                let mut prefix = vec![first];
                scan_rest(&ranges, 1, &mut prefix, n, self, filter, &mut acc);
                acc
            })
            .collect();
        points.sort();
        points.dedup();
        Ok(points)
    }

    /// True when the polytope's intrinsic dimension equals the ambient one,
    /// judged from the vertex difference matrix.
    pub fn is_full_dimensional(&self) -> bool {
        if self.vertices.len() <= self.dim {
            return false;
        }
        let v0 = &self.vertices[0];
        let rows: Vec<Vec<Rat>> = self.vertices[1..].iter().map(|v| v.sub(v0)).collect();
        crate::exact::matrix_rank(&rows) == self.dim
    }
}

fn scan_rest(
    ranges: &[(i64, i64)],
    axis: usize,
    prefix: &mut Vec<i64>,
    n: u64,
    p: &Polytope,
    filter: bool,
    acc: &mut Vec<LatticePoint>,
) {
    if axis == ranges.len() {
        let lp = LatticePoint::new(prefix.clone(), n);
        if !filter || p.contains(&lp.to_point()) {
            acc.push(lp);
        }
        return;
    }
    let (lo, hi) = ranges[axis];
    for k in lo..=hi {
        prefix.push(k);
        scan_rest(ranges, axis + 1, prefix, n, p, filter, acc);
        prefix.pop();
    }
}

fn order_simplex_points(m: usize, n: u64) -> Vec<LatticePoint> {
    let mut acc = Vec::new();
    let mut cur = Vec::with_capacity(m);
    fn rec(m: usize, n: i64, lo: i64, cur: &mut Vec<i64>, acc: &mut Vec<LatticePoint>, denom: u64) {
        if cur.len() == m {
            acc.push(LatticePoint::new(cur.clone(), denom));
            return;
        }
        for k in lo..=n {
            cur.push(k);
            rec(m, n, k, cur, acc, denom);
            cur.pop();
        }
    }
    rec(m, n as i64, 0, &mut cur, &mut acc, n);
    acc.sort();
    acc
}

fn ceil_scaled(r: &Rat, n: u64) -> i64 {
    let scaled = r * Rat::from_integer(BigInt::from(n));
    scaled.ceil().to_integer().to_i64().expect("bounding box fits i64")
}

fn floor_scaled(r: &Rat, n: u64) -> i64 {
    let scaled = r * Rat::from_integer(BigInt::from(n));
    scaled.floor().to_integer().to_i64().expect("bounding box fits i64")
}

fn simplex_lambda_functional(s: &Simplex, i: usize) -> (Vec<Rat>, Rat) {
    // lambda_i(p) = B_{i-1}·(p − v0) for i ≥ 1.
    let row = &solver_row(s, i - 1);
    let v0 = &s.vertices()[0];
    let c: Rat = row.iter().zip(&v0.0).fold(Rat::zero(), |acc, (a, b)| acc - a * b);
    (row.to_vec(), c)
}

fn solver_row(s: &Simplex, i: usize) -> Vec<Rat> {
    // Reconstruct row i of the solver via span_coords on basis probes would be
    // wasteful; expose through a lambda evaluation at unit points instead.
    // lambda_{i+1} is affine; sample it at the origin and at each unit vector.
    let m = s.ambient_dim();
    let probe = |p: &Point| -> Rat {
        // Affine extension of mu_i: B_i·(p − v0).
        let d = p.sub(&s.vertices()[0]);
        s.solver_dot(i, &d)
    };
    let origin = Point::origin(m);
    let at0 = probe(&origin);
    (0..m)
        .map(|j| {
            let mut e = origin.clone();
            e.0[j] = Rat::one();
            probe(&e) - &at0
        })
        .collect()
}

fn span_equalities(s: &Simplex, v0: &Point) -> Result<Vec<Constraint>> {
    // Rows of (A·B − I): zero exactly on the affine span.
    let m = s.ambient_dim();
    let mut eqs = Vec::new();
    for row in 0..m {
        // functional(p) = Σ_col (A·B − I)[row][col] · (p − v0)[col]
        let mut coeffs = vec![Rat::zero(); m];
        for col in 0..m {
            let mut a_b = Rat::zero();
            for i in 0..s.dim() {
                a_b += s.basis_entry(i, row) * s.solver_entry(i, col);
            }
            if row == col {
                a_b -= Rat::one();
            }
            coeffs[col] = a_b;
        }
        if coeffs.iter().all(Rat::is_zero) {
            continue;
        }
        let rhs: Rat = coeffs.iter().zip(&v0.0).fold(Rat::zero(), |acc, (a, b)| acc + a * b);
        eqs.push(Constraint::eq(Hyperplane::new(coeffs, rhs)?));
    }
    Ok(eqs)
}

impl Simplex {
    pub(crate) fn solver_dot(&self, row: usize, d: &[Rat]) -> Rat {
        self.solver_row_iter(row).zip(d).fold(Rat::zero(), |acc, (a, b)| acc + a * b)
    }
}

/// The product polytope `P × Q` with concatenated coordinates.
pub fn product_polytope(a: &Polytope, b: &Polytope) -> Result<Polytope> {
    if !a.excluded.is_empty() || !b.excluded.is_empty() {
        return Err(Error::PreconditionFailed("products of polytopes with excluded regions are unsupported".into()));
    }
    let dim = a.dim + b.dim;
    let pieces_a: Vec<&Polytope> = if a.pieces.is_empty() { vec![a] } else { a.pieces.iter().collect() };
    let pieces_b: Vec<&Polytope> = if b.pieces.is_empty() { vec![b] } else { b.pieces.iter().collect() };
    let mut out_pieces = Vec::new();
    for pa in &pieces_a {
        for pb in &pieces_b {
            let mut constraints = Vec::new();
            for c in &pa.constraints {
                let mut coeffs = c.hyperplane.coeffs.clone();
                coeffs.extend(vec![Rat::zero(); b.dim]);
                constraints.push(Constraint { hyperplane: Hyperplane::new(coeffs, c.hyperplane.rhs.clone())?, rel: c.rel });
            }
            for c in &pb.constraints {
                let mut coeffs = vec![Rat::zero(); a.dim];
                coeffs.extend(c.hyperplane.coeffs.iter().cloned());
                constraints.push(Constraint { hyperplane: Hyperplane::new(coeffs, c.hyperplane.rhs.clone())?, rel: c.rel });
            }
            let mut vertices = Vec::new();
            for va in &pa.vertices {
                for vb in &pb.vertices {
                    vertices.push(va.concat(vb));
                }
            }
            out_pieces.push(Polytope::convex(dim, vertices, constraints)?);
        }
    }
    let mut out = if out_pieces.len() == 1 {
        out_pieces.pop().expect("one piece")
    } else {
        Polytope::union(dim, out_pieces)
    };
    if a.fast == Some(FastEnum::Cuboid) && b.fast == Some(FastEnum::Cuboid) {
        out.fast = Some(FastEnum::Cuboid);
    }
    // Staircase triangulation of products of triangulations.
    if !a.triangulation.is_empty() && !b.triangulation.is_empty() {
        let mut tri = Vec::new();
        for (sa, ta) in &a.triangulation {
            for (sb, tb) in &b.triangulation {
                for piece in staircase_product(ta, tb)? {
                    tri.push((sa * sb, piece));
                }
            }
        }
        out.triangulation = tri;
    }
    Ok(out)
}

/// Triangulates the product of two simplices by lattice-path (staircase) pieces.
pub fn staircase_product(a: &Simplex, b: &Simplex) -> Result<Vec<Simplex>> {
    let p = a.dim();
    let q = b.dim();
    let mut out = Vec::new();
    // Enumerate monotone lattice paths from (0,0) to (p,q).
    let mut path = vec![(0usize, 0usize)];
    fn rec(
        a: &Simplex,
        b: &Simplex,
        p: usize,
        q: usize,
        path: &mut Vec<(usize, usize)>,
        out: &mut Vec<Simplex>,
    ) -> Result<()> {
        let &(i, j) = path.last().expect("nonempty path");
        if i == p && j == q {
            let verts: Vec<Point> =
                path.iter().map(|&(i, j)| a.vertices()[i].concat(&b.vertices()[j])).collect();
            out.push(Simplex::new(verts)?);
            return Ok(());
        }
        if i < p {
            path.push((i + 1, j));
            rec(a, b, p, q, path, out)?;
            path.pop();
        }
        if j < q {
            path.push((i, j + 1));
            rec(a, b, p, q, path, out)?;
            path.pop();
        }
        Ok(())
    }
    rec(a, b, p, q, &mut path, &mut out)?;
    Ok(out)
}

/// The order simplex `L(m) = {0 ≤ x_1 ≤ … ≤ x_m ≤ 1}`, with its fast
/// enumerator tag and a one-simplex triangulation.
pub fn order_simplex(m: usize) -> Polytope {
    let mut constraints = Vec::new();
    let mut first = vec![Rat::zero(); m];
    first[0] = crate::exact::rat(-1);
    constraints.push(Constraint::le(Hyperplane::new(first, Rat::zero()).expect("nonzero")));
    for i in 0..m - 1 {
        let mut coeffs = vec![Rat::zero(); m];
        coeffs[i] = crate::exact::rat(1);
        coeffs[i + 1] = crate::exact::rat(-1);
        constraints.push(Constraint::le(Hyperplane::new(coeffs, Rat::zero()).expect("nonzero")));
    }
    let mut last = vec![Rat::zero(); m];
    last[m - 1] = crate::exact::rat(1);
    constraints.push(Constraint::le(Hyperplane::new(last, Rat::one()).expect("nonzero")));
    let vertices: Vec<Point> = (0..=m)
        .map(|k| {
            Point::new(
                (0..m)
                    .map(|j| if j >= m - k { crate::exact::rat(1) } else { Rat::zero() })
                    .collect(),
            )
        })
        .collect();
    let mut p = Polytope::convex(m, vertices.clone(), constraints).expect("valid order simplex");
    p.fast = Some(FastEnum::OrderSimplex);
    p.triangulation = vec![(1, Simplex::new(vertices).expect("independent"))];
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};

    #[test]
    fn order_simplex_membership() {
        let l3 = order_simplex(3);
        assert!(l3.contains(&Point::from_pairs(&[(0, 1), (1, 2), (1, 1)])));
        assert!(!l3.contains(&Point::from_pairs(&[(1, 2), (0, 1), (1, 1)])));
    }

    #[test]
    fn l2_lattice_points_n2() {
        let l2 = order_simplex(2);
        let pts = l2.lattice_points(2).unwrap();
        let expect: Vec<Vec<i64>> =
            vec![vec![0, 0], vec![0, 1], vec![0, 2], vec![1, 1], vec![1, 2], vec![2, 2]];
        assert_eq!(pts.iter().map(|p| p.numerators.clone()).collect::<Vec<_>>(), expect);
    }

    #[test]
    fn l3_n1_is_vertex_chain() {
        let l3 = order_simplex(3);
        assert_eq!(l3.lattice_points(1).unwrap().len(), 4);
    }

    #[test]
    fn counts_match_binomial() {
        // Independent check: brute-force box scan against the fast enumerator
        // and against C(m+n, m).
        for m in 1..=4usize {
            for n in 1..=5u64 {
                let mut poly = order_simplex(m);
                let fast = poly.lattice_points(n).unwrap();
                poly.fast = None;
                let slow = poly.lattice_points(n).unwrap();
                assert_eq!(fast, slow);
                assert_eq!(fast.len() as u64, crate::oracle::binomial((m as u64) + n, m as u64));
            }
        }
    }

    #[test]
    fn polytope_rank_examples() {
        assert_eq!(order_simplex(4).rank().unwrap(), rat(4));
        let seg = Polytope::from_simplex(
            &Simplex::new(vec![Point::new(vec![rat(0)]), Point::new(vec![rat(1)])]).unwrap(),
        )
        .unwrap();
        assert_eq!(seg.rank().unwrap(), rat(1));
    }

    #[test]
    fn lattice_inclusion_under_refinement() {
        let l3 = order_simplex(3);
        let coarse = l3.lattice_points(2).unwrap();
        let fine = l3.lattice_points(6).unwrap();
        for p in &coarse {
            let scaled = LatticePoint::new(p.numerators.iter().map(|k| k * 3).collect(), 6);
            assert!(fine.contains(&scaled));
        }
    }

    #[test]
    fn from_simplex_h_rep() {
        // A triangle embedded in R^3 gains a span equality.
        let tri = Simplex::from_pairs(&[
            &[(0, 1), (0, 1), (0, 1)],
            &[(0, 1), (1, 1), (1, 1)],
            &[(0, 1), (0, 1), (1, 1)],
        ])
        .unwrap();
        let poly = Polytope::from_simplex(&tri).unwrap();
        assert!(poly.contains(&Point::from_pairs(&[(0, 1), (1, 4), (1, 2)])));
        assert!(!poly.contains(&Point::from_pairs(&[(1, 8), (1, 4), (1, 2)])));
        assert!(!poly.contains(&Point::from_pairs(&[(0, 1), (1, 2), (1, 4)])));
    }

    #[test]
    fn product_counts() {
        let seg = Polytope::from_simplex(
            &Simplex::new(vec![Point::new(vec![rat(0)]), Point::new(vec![rat(1)])]).unwrap(),
        )
        .unwrap();
        let square = product_polytope(&seg, &seg).unwrap();
        assert_eq!(square.lattice_points(2).unwrap().len(), 9);
        assert_eq!(square.rank().unwrap(), rat(2));
        assert_eq!(square.triangulation.len(), 2);
        let vol: Rat = square
            .triangulation
            .iter()
            .map(|(s, t)| ratio(*s as i64, 1) * crate::volume::simplex_volume(t).unwrap())
            .fold(Rat::zero(), |a, b| a + b);
        assert_eq!(vol, rat(1));
    }
}
