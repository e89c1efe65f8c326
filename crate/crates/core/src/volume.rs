//! Exact volumes, rank-slice statistics, and the volume identities tying a
//! decomposition's starting sets to the polytope. Everything is determinant
//! arithmetic on exact rationals; no quadrature.

use num_traits::{One, Signed, Zero};

use crate::exact::{Point, Rat, Simplex};
use crate::polytope::Polytope;
use crate::snake::{GeoDecomposition, Snake};
use crate::{Error, Result};

/// Determinant by exact Gaussian elimination.
pub fn det(mut m: Vec<Vec<Rat>>) -> Rat {
    let n = m.len();
    let mut acc = Rat::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rat::zero();
        };
        if pivot != col {
            m.swap(col, pivot);
            acc = -acc;
        }
        let p = m[col][col].clone();
        acc *= &p;
        let inv = p.recip();
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] * &inv;
            for j in col..n {
                m[r][j] = &m[r][j] - &f * &m[col][j];
            }
        }
    }
    acc
}

fn factorial(k: usize) -> Rat {
    let mut acc = Rat::one();
    for i in 2..=k {
        acc *= Rat::from_integer((i as i64).into());
    }
    acc
}

/// Full-dimensional volume `|det(v_i − v_0)| / m!`.
pub fn simplex_volume(s: &Simplex) -> Result<Rat> {
    let m = s.ambient_dim();
    if s.dim() != m {
        return Err(Error::DimensionMismatch { expected: m + 1, got: s.vertices().len() });
    }
    let rows: Vec<Vec<Rat>> = s.vertices()[1..].iter().map(|v| v.sub(&s.vertices()[0])).collect();
    Ok(det(rows).abs() / factorial(m))
}

/// Signed sum over the polytope's triangulation.
pub fn polytope_volume(p: &Polytope) -> Result<Rat> {
    if p.triangulation.is_empty() {
        return Err(Error::PreconditionFailed("polytope has no triangulation".into()));
    }
    let mut acc = Rat::zero();
    for (sign, tri) in &p.triangulation {
        acc += Rat::from_integer((*sign as i64).into()) * simplex_volume(tri)?;
    }
    Ok(acc)
}

/// Splits a simplex (as a vertex list) along the rank hyperplane `rank = λ`,
/// returning leaf simplices that lie entirely at rank ≤ λ. Each split bisects
/// an edge between a strictly-below and a strictly-above vertex, so ties are
/// exact and no leaf straddles the plane.
pub fn clip_below(verts: &[Point], lambda: &Rat) -> Vec<Vec<Point>> {
    let mut out = Vec::new();
    split(verts.to_vec(), lambda, &mut out);
    out
}

fn split(verts: Vec<Point>, lambda: &Rat, out: &mut Vec<Vec<Point>>) {
    let ranks: Vec<Rat> = verts.iter().map(Point::rank).collect();
    if ranks.iter().all(|r| r <= lambda) {
        out.push(verts);
        return;
    }
    if !ranks.iter().any(|r| r < lambda) {
        return;
    }
    let u = ranks.iter().enumerate().min_by(|a, b| a.1.cmp(b.1)).map(|(i, _)| i).expect("nonempty");
    let w = ranks.iter().enumerate().max_by(|a, b| a.1.cmp(b.1)).map(|(i, _)| i).expect("nonempty");
    let t = (lambda - &ranks[u]) / (&ranks[w] - &ranks[u]);
    let x = Point::new(
        verts[u]
            .0
            .iter()
            .zip(&verts[w].0)
            .map(|(a, b)| a + &t * (b - a))
            .collect(),
    );
    let mut s1 = verts.clone();
    s1[u] = x.clone();
    split(s1, lambda, out);
    let mut s2 = verts;
    s2[w] = x;
    split(s2, lambda, out);
}

/// The rank-λ facets of the below-part: from each leaf entirely below, the
/// vertices at rank exactly λ when they form a facet.
pub fn slice_facets(verts: &[Point], lambda: &Rat) -> Vec<Vec<Point>> {
    let m = verts[0].dim();
    clip_below(verts, lambda)
        .into_iter()
        .filter_map(|leaf| {
            let on: Vec<Point> = leaf.into_iter().filter(|v| &v.rank() == lambda).collect();
            (on.len() == m).then_some(on)
        })
        .collect()
}

/// `(k)`-volume of the projection of a `k`-simplex (given as `k+1` vertices in
/// `R^{k+1}`) onto the coordinate hyperplane `x_axis = 0`.
pub fn projected_volume(verts: &[Point], axis: usize) -> Result<Rat> {
    let m = verts[0].dim();
    if verts.len() != m {
        return Err(Error::DimensionMismatch { expected: m, got: verts.len() });
    }
    let project = |p: &Point| -> Vec<Rat> {
        p.0.iter().enumerate().filter(|(j, _)| *j != axis).map(|(_, c)| c.clone()).collect()
    };
    let base = project(&verts[0]);
    let rows: Vec<Vec<Rat>> = verts[1..]
        .iter()
        .map(|v| project(v).iter().zip(&base).map(|(a, b)| a - b).collect())
        .collect();
    let d = det(rows);
    if d.is_zero() {
        return Err(Error::NonInjectiveProjection);
    }
    Ok(d.abs() / factorial(m - 1))
}

/// Normalized volume of a codimension-one partial simplex in direction
/// `e_axis` (removed supports are measure zero and ignored).
pub fn normalized_volume(t: &crate::exact::PartialSimplex, axis: usize) -> Result<Rat> {
    let verts = t.vertices();
    let m = verts[0].dim();
    if verts.len() != m {
        return Err(Error::DimensionMismatch { expected: m, got: verts.len() });
    }
    projected_volume(verts, axis)
}

/// Normalized volume of the rank-λ slice of the polytope, projected along
/// `e_axis`, via the signed triangulation.
pub fn slice_normalized_volume(p: &Polytope, lambda: &Rat, axis: usize) -> Result<Rat> {
    if p.triangulation.is_empty() {
        return Err(Error::PreconditionFailed("polytope has no triangulation".into()));
    }
    let mut acc = Rat::zero();
    for (sign, tri) in &p.triangulation {
        for facet in slice_facets(tri.vertices(), lambda) {
            acc += Rat::from_integer((*sign as i64).into()) * projected_volume(&facet, axis)?;
        }
    }
    Ok(acc)
}

/// Volume of the part of the polytope at rank ≤ λ.
pub fn volume_below(p: &Polytope, lambda: &Rat) -> Result<Rat> {
    if p.triangulation.is_empty() {
        return Err(Error::PreconditionFailed("polytope has no triangulation".into()));
    }
    let mut acc = Rat::zero();
    for (sign, tri) in &p.triangulation {
        let m = tri.ambient_dim();
        for leaf in clip_below(tri.vertices(), lambda) {
            let rows: Vec<Vec<Rat>> = leaf[1..].iter().map(|v| v.sub(&leaf[0])).collect();
            acc += Rat::from_integer((*sign as i64).into()) * det(rows).abs() / factorial(m);
        }
    }
    Ok(acc)
}

fn snake_start(snake: &Snake) -> (&crate::exact::PartialSimplex, usize) {
    (&snake.swipes[0].start, snake.swipes[0].dir)
}

/// Σ_T N(T) over snake starting sets equals the normalized volume of the
/// middle-rank slice.
pub fn theorem63_check(g: &GeoDecomposition) -> Result<bool> {
    let mid = g.polytope.rank()? / crate::exact::rat(2);
    let mut lhs = Rat::zero();
    for snake in &g.snakes {
        let (start, dir) = snake_start(snake);
        lhs += normalized_volume(start, dir)?;
    }
    let rhs = slice_normalized_volume(&g.polytope, &mid, 0)?;
    Ok(lhs == rhs)
}

/// Σ over snakes of N(T) times the average chain length over starting-set
/// vertices equals the volume of the polytope. Chain length is the rank span
/// from a starting vertex to its corresponding ending vertex.
pub fn theorem64_check(g: &GeoDecomposition) -> Result<bool> {
    Ok(theorem64_total(g)? == polytope_volume(&g.polytope)?)
}

pub fn theorem64_total(g: &GeoDecomposition) -> Result<Rat> {
    let mut total = Rat::zero();
    for snake in &g.snakes {
        let (start, dir) = snake_start(snake);
        let n = normalized_volume(start, dir)?;
        let verts = start.vertices();
        let mut len_sum = Rat::zero();
        for (j, v) in verts.iter().enumerate() {
            len_sum += snake.end_vertex(j).rank() - v.rank();
        }
        total += n * len_sum / crate::exact::rat(verts.len() as i64);
    }
    Ok(total)
}

/// The refined slice identities: Σ_T N(T_λ) equals the rank-λ slice volume,
/// and Σ_T N(T_λ)·(λ − rank of the N-barycenter of T_λ) equals the volume of
/// the polytope below rank λ. Checked exactly; λ must not exceed the middle
/// rank.
pub fn theorem65_66_check(g: &GeoDecomposition, lambda: &Rat) -> Result<bool> {
    let mid = g.polytope.rank()? / crate::exact::rat(2);
    if lambda > &mid {
        return Err(Error::PreconditionFailed("λ above the middle rank".into()));
    }
    let mut n_total = Rat::zero();
    let mut below_total = Rat::zero();
    for snake in &g.snakes {
        let (start, dir) = snake_start(snake);
        for leaf in clip_below(start.vertices(), lambda) {
            let n = projected_volume(&leaf, dir)?;
            let avg_rank = leaf.iter().map(Point::rank).fold(Rat::zero(), |a, b| a + b)
                / crate::exact::rat(leaf.len() as i64);
            below_total += &n * (lambda - avg_rank);
            n_total += n;
        }
    }
    let slice_ok = n_total == slice_normalized_volume(&g.polytope, lambda, 0)?;
    let below_ok = below_total == volume_below(&g.polytope, lambda)?;
    Ok(slice_ok && below_ok)
}

/// Exact per-swipe volume identity: every swipe contributes the normalized
/// volume of its starting set times the average segment length, and the sum
/// over all snakes is the volume of the polytope. Holds for any valid exact
/// decomposition, without hyperplane conditions.
pub fn swipe_volume_identity(g: &GeoDecomposition) -> Result<bool> {
    let mut total = Rat::zero();
    for snake in &g.snakes {
        for sw in &snake.swipes {
            if sw.is_fully_degenerate() {
                continue;
            }
            let lens: Vec<Rat> = sw
                .start
                .vertices()
                .iter()
                .zip(sw.end.vertices())
                .map(|(a, b)| &b.0[sw.dir] - &a.0[sw.dir])
                .collect();
            if lens.iter().all(Rat::is_zero) {
                continue;
            }
            let n = normalized_volume(&sw.start, sw.dir)?;
            let avg = lens.iter().fold(Rat::zero(), |a, b| a + b) / crate::exact::rat(lens.len() as i64);
            total += n * avg;
        }
    }
    Ok(total == polytope_volume(&g.polytope)?)
}

/// Checks `f(λ) + f(rank(P) − λ) = vol(P)` at all vertex ranks and midpoints
/// of consecutive vertex ranks (`f` is piecewise polynomial with break points
/// at vertex ranks).
pub fn volume_rank_symmetry(p: &Polytope) -> Result<bool> {
    if !p.is_full_dimensional() {
        return Err(Error::PreconditionFailed("polytope is not full-dimensional".into()));
    }
    let vol = polytope_volume(p)?;
    let rank = p.rank()?;
    let mut ranks: Vec<Rat> = p.vertices.iter().map(Point::rank).collect();
    ranks.sort();
    ranks.dedup();
    let mut samples = ranks.clone();
    for w in ranks.windows(2) {
        samples.push((&w[0] + &w[1]) / crate::exact::rat(2));
    }
    for lambda in samples {
        let lhs = volume_below(p, &lambda)? + volume_below(p, &(&rank - &lambda))?;
        if lhs != vol {
            return Ok(false);
        }
    }
    Ok(true)
}
