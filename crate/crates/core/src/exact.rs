//! Exact rational linear algebra: points, hyperplanes, simplices and
//! barycentric membership. No floating point anywhere.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with positive
/// denominator (maintained by `num_rational`).
pub type Rat = num_rational::BigRational;

/// `n/d` as a `Rat`.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Integer `n` as a `Rat`.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Formats a rational as `p/q`, or `p` when the denominator is one.
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p` or `p/q`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let make = |n: &str, d: &str| -> Result<Rat> {
        let n: BigInt = n.parse().map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
        let d: BigInt = d.parse().map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{s}`")));
        }
        Ok(Rat::new(n, d))
    };
    match s.split_once('/') {
        Some((n, d)) => make(n, d),
        None => make(s, "1"),
    }
}

/// A point with exact rational coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(pub Vec<Rat>);

impl Point {
    pub fn new(coords: Vec<Rat>) -> Self {
        Point(coords)
    }

    /// Convenience constructor from integer pairs `(numer, denom)`.
    pub fn from_pairs(pairs: &[(i64, i64)]) -> Self {
        Point(pairs.iter().map(|&(n, d)| ratio(n, d)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn origin(dim: usize) -> Self {
        Point(vec![Rat::zero(); dim])
    }

    /// The rank of a point is the sum of its coordinates.
    pub fn rank(&self) -> Rat {
        self.0.iter().fold(Rat::zero(), |acc, c| acc + c)
    }

    /// `self + c·e_axis`.
    pub fn axis_step(&self, axis: usize, c: &Rat) -> Point {
        let mut coords = self.0.clone();
        coords[axis] += c;
        Point(coords)
    }

    pub fn sub(&self, other: &Point) -> Vec<Rat> {
        self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()
    }

    /// Concatenates coordinates, for product constructions.
    pub fn concat(&self, other: &Point) -> Point {
        let mut coords = self.0.clone();
        coords.extend(other.0.iter().cloned());
        Point(coords)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().map(fmt_rat).collect::<Vec<_>>().join(","))
    }
}

/// An affine functional `Σ a_j x_j = b`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Hyperplane {
    pub coeffs: Vec<Rat>,
    pub rhs: Rat,
}

impl Hyperplane {
    pub fn new(coeffs: Vec<Rat>, rhs: Rat) -> Result<Self> {
        if coeffs.iter().all(Rat::is_zero) {
            return Err(Error::ZeroHyperplane);
        }
        Ok(Hyperplane { coeffs, rhs })
    }

    /// From integer pairs: coefficients `(n, d)` and rhs `(n, d)`.
    pub fn from_pairs(coeffs: &[(i64, i64)], rhs: (i64, i64)) -> Self {
        Hyperplane {
            coeffs: coeffs.iter().map(|&(n, d)| ratio(n, d)).collect(),
            rhs: ratio(rhs.0, rhs.1),
        }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    /// Signed residual `Σ a_j p_j − b`; zero iff `p` lies on the hyperplane.
    pub fn residual(&self, p: &Point) -> Result<Rat> {
        if p.dim() != self.coeffs.len() {
            return Err(Error::DimensionMismatch { expected: self.coeffs.len(), got: p.dim() });
        }
        let dot = self.coeffs.iter().zip(&p.0).fold(Rat::zero(), |acc, (a, x)| acc + a * x);
        Ok(dot - &self.rhs)
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.residual(p).map(|r| r.is_zero()).unwrap_or(false)
    }

    /// Scales to integer coefficients of content one, sign-normalized so the
    /// first nonzero coefficient is positive. Returns (coeffs, rhs).
    pub fn scaled_integer(&self) -> (Vec<BigInt>, Rat) {
        let mut lcm = BigInt::one();
        for c in &self.coeffs {
            lcm = lcm.lcm(c.denom());
        }
        let mut ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * Rat::from_integer(lcm.clone())).to_integer()).collect();
        let mut content = BigInt::zero();
        for i in &ints {
            content = content.gcd(i);
        }
        if content.is_zero() {
            content = BigInt::one();
        }
        let mut rhs = &self.rhs * Rat::new(lcm, content.clone());
        for i in &mut ints {
            *i = &*i / &content;
        }
        if let Some(first) = ints.iter().find(|i| !i.is_zero()) {
            if first.is_negative() {
                for i in &mut ints {
                    *i = -&*i;
                }
                rhs = -rhs;
            }
        }
        (ints, rhs)
    }

    /// Canonical form for equality tests: content-one integer coefficients,
    /// first nonzero coefficient positive.
    pub fn normalized(&self) -> Hyperplane {
        let (ints, rhs) = self.scaled_integer();
        Hyperplane { coeffs: ints.into_iter().map(Rat::from_integer).collect(), rhs }
    }
}

/// Solves the square linear system `m x = rhs` exactly. `None` if singular.
pub fn solve_square(m: &[Vec<Rat>], rhs: &[Rat]) -> Option<Vec<Rat>> {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m.iter().cloned().collect();
    let mut b: Vec<Rat> = rhs.to_vec();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].recip();
        for j in col..n {
            a[col][j] = &a[col][j] * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in col..n {
                    a[r][j] = &a[r][j] - &f * &a[col][j];
                }
                b[r] = &b[r] - &f * &b[col];
            }
        }
    }
    Some(b)
}

/// Inverts a square rational matrix. `None` if singular.
pub fn invert(m: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = m.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![Rat::zero(); n];
        e[j] = Rat::one();
        cols.push(solve_square(m, &e)?);
    }
    // cols[j] is the j-th column of the inverse; transpose into rows.
    Some((0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect())
}

/// Rank of a rational matrix (list of rows).
pub fn matrix_rank(rows: &[Vec<Rat>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let mut a: Vec<Vec<Rat>> = rows.to_vec();
    let ncols = a[0].len();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == a.len() {
            break;
        }
        let Some(pivot) = (rank..a.len()).find(|&r| !a[r][col].is_zero()) else { continue };
        a.swap(rank, pivot);
        let inv = a[rank][col].recip();
        for j in col..ncols {
            a[rank][j] = &a[rank][j] * &inv;
        }
        for r in 0..a.len() {
            if r != rank && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in col..ncols {
                    a[r][j] = &a[r][j] - &f * &a[rank][j];
                }
            }
        }
        rank += 1;
    }
    rank
}

/// A simplex given by `k+1` affinely independent vertices in `R^m`.
///
/// Construction verifies affine independence and precomputes an exact solver
/// for barycentric coordinates, so membership queries are a matrix-vector
/// product rather than a fresh elimination.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Simplex {
    vertices: Vec<Point>,
    // Columns v_i − v_0 for i = 1..k, each of length m.
    basis: Vec<Vec<Rat>>,
    // B = (AᵀA)⁻¹Aᵀ, k×m: μ = B (p − v_0).
    solver: Vec<Vec<Rat>>,
}

impl Simplex {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::DegenerateSimplex);
        }
        let m = vertices[0].dim();
        if vertices.iter().any(|v| v.dim() != m) {
            return Err(Error::DimensionMismatch { expected: m, got: 0 });
        }
        let k = vertices.len() - 1;
        let basis: Vec<Vec<Rat>> = (1..=k).map(|i| vertices[i].sub(&vertices[0])).collect();
        // Gram matrix AᵀA (k×k); positive definite over Q iff A has full column rank.
        let mut gram = vec![vec![Rat::zero(); k]; k];
        for i in 0..k {
            for j in 0..k {
                gram[i][j] = basis[i].iter().zip(&basis[j]).fold(Rat::zero(), |acc, (a, b)| acc + a * b);
            }
        }
        let gram_inv = invert(&gram).ok_or(Error::DegenerateSimplex)?;
        // solver = gram_inv · Aᵀ  (k×m)
        let mut solver = vec![vec![Rat::zero(); m]; k];
        for i in 0..k {
            for col in 0..m {
                let mut acc = Rat::zero();
                for l in 0..k {
                    acc += &gram_inv[i][l] * &basis[l][col];
                }
                solver[i][col] = acc;
            }
        }
        Ok(Simplex { vertices, basis, solver })
    }

    pub fn from_pairs(verts: &[&[(i64, i64)]]) -> Result<Self> {
        Simplex::new(verts.iter().map(|v| Point::from_pairs(v)).collect())
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Intrinsic dimension `k`.
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn ambient_dim(&self) -> usize {
        self.vertices[0].dim()
    }

    /// Barycentric coordinates of `p` when it lies in the affine span,
    /// with any sign. `None` off-span. Always sums to one.
    pub fn span_coords(&self, p: &Point) -> Option<Vec<Rat>> {
        if p.dim() != self.ambient_dim() {
            return None;
        }
        let k = self.dim();
        let d = p.sub(&self.vertices[0]);
        let mut mu = Vec::with_capacity(k);
        for row in &self.solver {
            mu.push(row.iter().zip(&d).fold(Rat::zero(), |acc, (a, b)| acc + a * b));
        }
        // Consistency: A μ must reproduce p − v_0 exactly.
        for col in 0..self.ambient_dim() {
            let mut acc = Rat::zero();
            for (i, b) in self.basis.iter().enumerate() {
                acc += &mu[i] * &b[col];
            }
            if acc != d[col] {
                return None;
            }
        }
        let mut lambda = Vec::with_capacity(k + 1);
        let sum: Rat = mu.iter().fold(Rat::zero(), |acc, x| acc + x);
        lambda.push(Rat::one() - sum);
        lambda.extend(mu);
        Some(lambda)
    }

    /// Barycentric coordinates for points of the closed simplex; `None` when
    /// `p` is off the affine span or any coordinate is negative.
    pub fn barycentric(&self, p: &Point) -> Option<Vec<Rat>> {
        let lambda = self.span_coords(p)?;
        if lambda.iter().any(|l| l.is_negative()) {
            return None;
        }
        Some(lambda)
    }

    /// Reconstructs `Σ λ_v v`.
    pub fn combine(&self, lambda: &[Rat]) -> Point {
        let m = self.ambient_dim();
        let mut coords = vec![Rat::zero(); m];
        for (l, v) in lambda.iter().zip(&self.vertices) {
            for j in 0..m {
                coords[j] += l * &v.0[j];
            }
        }
        Point(coords)
    }

    pub fn barycenter(&self) -> Point {
        let n = rat(self.vertices.len() as i64);
        let lambda: Vec<Rat> = std::iter::repeat(n.recip()).take(self.vertices.len()).collect();
        self.combine(&lambda)
    }

    pub(crate) fn basis_entry(&self, i: usize, col: usize) -> &Rat {
        &self.basis[i][col]
    }

    pub(crate) fn solver_entry(&self, i: usize, col: usize) -> &Rat {
        &self.solver[i][col]
    }

    pub(crate) fn solver_row_iter(&self, i: usize) -> impl Iterator<Item = &Rat> {
        self.solver[i].iter()
    }
}

/// Indices with strictly positive barycentric coordinate.
pub fn support(lambda: &[Rat]) -> BTreeSet<usize> {
    lambda.iter().enumerate().filter(|(_, l)| l.is_positive()).map(|(i, _)| i).collect()
}

/// A simplex with some open sub-simplices removed, identified by the vertex
/// support of their relative interiors. The full support is never removed, so
/// the relative interior of the simplex is retained.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PartialSimplex {
    pub simplex: Simplex,
    pub removed: BTreeSet<BTreeSet<usize>>,
}

impl PartialSimplex {
    pub fn new(simplex: Simplex, removed: BTreeSet<BTreeSet<usize>>) -> Result<Self> {
        let full: BTreeSet<usize> = (0..simplex.vertices().len()).collect();
        for s in &removed {
            if s.is_empty() {
                return Err(Error::InvalidPartialSimplex("empty support removed".into()));
            }
            if *s == full {
                return Err(Error::InvalidPartialSimplex("relative interior removed".into()));
            }
            if s.iter().any(|&i| i >= simplex.vertices().len()) {
                return Err(Error::InvalidPartialSimplex("support index out of range".into()));
            }
        }
        Ok(PartialSimplex { simplex, removed })
    }

    /// The closed simplex, nothing removed.
    pub fn closed(simplex: Simplex) -> Self {
        PartialSimplex { simplex, removed: BTreeSet::new() }
    }

    pub fn vertices(&self) -> &[Point] {
        self.simplex.vertices()
    }

    /// Membership: barycentric coordinates exist, are nonnegative, and the
    /// support class has not been removed.
    pub fn contains(&self, p: &Point) -> bool {
        match self.simplex.barycentric(p) {
            None => false,
            Some(lambda) => !self.removed.contains(&support(&lambda)),
        }
    }

    /// All support classes present in this partial simplex.
    pub fn supports(&self) -> Vec<BTreeSet<usize>> {
        let n = self.vertices().len();
        let mut out = Vec::new();
        for mask in 1u32..(1 << n) {
            let s: BTreeSet<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            if !self.removed.contains(&s) {
                out.push(s);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(coords: &[(i64, i64)]) -> Point {
        Point::from_pairs(coords)
    }

    #[test]
    fn rank_examples() {
        assert_eq!(pt(&[(0, 1), (0, 1), (0, 1)]).rank(), rat(0));
        assert_eq!(pt(&[(1, 2), (1, 2)]).rank(), rat(1));
        // B' of the deformed family at t = 1 is the barycenter of face 123.
        assert_eq!(pt(&[(0, 1), (1, 3), (2, 3), (1, 1)]).rank(), rat(2));
    }

    #[test]
    fn hyperplane_residuals() {
        let h = Hyperplane::from_pairs(&[(1, 1), (1, 1)], (1, 1)); // x+y=1
        assert_eq!(h.residual(&pt(&[(1, 2), (1, 2)])).unwrap(), rat(0));
        assert_eq!(h.residual(&pt(&[(0, 1), (0, 1)])).unwrap(), rat(-1));
        let g = Hyperplane::from_pairs(&[(1, 1), (-2, 1), (1, 1)], (0, 1)); // x-2y+z=0
        assert_eq!(g.residual(&pt(&[(0, 1), (0, 1), (0, 1)])).unwrap(), rat(0));
        assert!(g.residual(&pt(&[(0, 1), (0, 1)])).is_err());
    }

    #[test]
    fn hyperplane_is_affine_in_axis_steps() {
        let h = Hyperplane::from_pairs(&[(2, 3), (-1, 1), (5, 7)], (1, 4));
        let p = pt(&[(1, 3), (2, 5), (0, 1)]);
        let c = ratio(7, 11);
        for axis in 0..3 {
            let q = p.axis_step(axis, &c);
            let lhs = h.residual(&q).unwrap() - h.residual(&p).unwrap();
            assert_eq!(lhs, &c * &h.coeffs[axis]);
        }
    }

    #[test]
    fn barycentric_triangle() {
        let s = Simplex::from_pairs(&[&[(0, 1), (0, 1)], &[(1, 1), (0, 1)], &[(0, 1), (1, 1)]]).unwrap();
        let l = s.barycentric(&pt(&[(1, 3), (1, 3)])).unwrap();
        assert_eq!(l, vec![ratio(1, 3), ratio(1, 3), ratio(1, 3)]);
        let l = s.barycentric(&pt(&[(0, 1), (0, 1)])).unwrap();
        assert_eq!(l, vec![rat(1), rat(0), rat(0)]);
        assert_eq!(support(&l), [0usize].into_iter().collect());
        // Outside the closed simplex: a negative coordinate, so None.
        assert!(s.barycentric(&pt(&[(1, 1), (1, 1)])).is_none());
        // But still in the affine span.
        assert!(s.span_coords(&pt(&[(1, 1), (1, 1)])).is_some());
    }

    #[test]
    fn degenerate_simplex_rejected() {
        let r = Simplex::from_pairs(&[&[(0, 1), (0, 1)], &[(1, 1), (1, 1)], &[(2, 1), (2, 1)]]);
        assert!(matches!(r, Err(Error::DegenerateSimplex)));
    }

    #[test]
    fn span_coords_off_span() {
        // A segment in R^2; points off its line yield None.
        let s = Simplex::from_pairs(&[&[(0, 1), (0, 1)], &[(1, 1), (1, 1)]]).unwrap();
        assert!(s.span_coords(&pt(&[(1, 2), (1, 3)])).is_none());
        assert_eq!(s.span_coords(&pt(&[(2, 1), (2, 1)])).unwrap(), vec![rat(-1), rat(2)]);
    }

    #[test]
    fn partial_simplex_membership() {
        let seg = Simplex::from_pairs(&[&[(0, 1), (0, 1)], &[(1, 1), (1, 1)]]).unwrap();
        let whole = PartialSimplex::closed(seg.clone());
        assert!(whole.contains(&pt(&[(1, 2), (1, 2)])));
        let mut removed = BTreeSet::new();
        removed.insert([0usize].into_iter().collect());
        let trimmed = PartialSimplex::new(seg, removed).unwrap();
        assert!(!trimmed.contains(&pt(&[(0, 1), (0, 1)])));
        assert!(trimmed.contains(&pt(&[(1, 4), (1, 4)])));
    }

    #[test]
    fn partial_simplex_invariants() {
        let seg = Simplex::from_pairs(&[&[(0, 1)], &[(1, 1)]]).unwrap();
        let full: BTreeSet<BTreeSet<usize>> = [[0usize, 1].into_iter().collect()].into_iter().collect();
        assert!(PartialSimplex::new(seg.clone(), full).is_err());
        let empty: BTreeSet<BTreeSet<usize>> = [BTreeSet::new()].into_iter().collect();
        assert!(PartialSimplex::new(seg, empty).is_err());
    }

    #[test]
    fn scaled_integer_normalization() {
        let h = Hyperplane::from_pairs(&[(-1, 2), (1, 3)], (1, 6));
        let (ints, rhs) = h.scaled_integer();
        assert_eq!(ints, vec![BigInt::from(3), BigInt::from(-2)]);
        assert_eq!(rhs, rat(-1));
    }

    #[test]
    fn rationals_round_trip_as_strings() {
        for s in ["3/4", "-7/2", "5", "0"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(fmt_rat(&r), s);
        }
        assert!(parse_rat("1/0").is_err());
    }
}
