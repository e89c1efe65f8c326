//! Projection/coning-off and product constructions.
//!
//! Coning lifts a decomposition of the projected polytope (the union of faces
//! avoiding a middle-rank star center) back to the full polytope. Products
//! pair snakes of the two factors, group chains by their crossing pattern,
//! triangulate each pattern's starting region, and emit one snake per piece.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::exact::{rat, Hyperplane, PartialSimplex, Point, Rat, Simplex};
use crate::polytope::{product_polytope, Polytope, Rel};
use crate::poset::{ChainDecomposition, ChainKind, DiscreteChain};
use crate::snake::{derive_removed_supports, GeoDecomposition, Mode, Snake, Swipe};
use crate::{Error, Result};

/// An exact affine map `x ↦ M·x + b`.
#[derive(Clone, Debug)]
pub struct AffineMap {
    pub matrix: Vec<Vec<Rat>>,
    pub offset: Vec<Rat>,
}

impl AffineMap {
    pub fn identity(n: usize) -> Self {
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
            .collect();
        AffineMap { matrix, offset: vec![Rat::zero(); n] }
    }

    pub fn apply(&self, p: &Point) -> Point {
        Point::new(
            self.matrix
                .iter()
                .zip(&self.offset)
                .map(|(row, b)| row.iter().zip(&p.0).fold(b.clone(), |acc, (m, x)| acc + m * x))
                .collect(),
        )
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &AffineMap) -> AffineMap {
        let n = self.matrix.len();
        let k = inner.matrix[0].len();
        let mut matrix = vec![vec![Rat::zero(); k]; n];
        for i in 0..n {
            for j in 0..k {
                let mut acc = Rat::zero();
                for l in 0..inner.matrix.len() {
                    acc += &self.matrix[i][l] * &inner.matrix[l][j];
                }
                matrix[i][j] = acc;
            }
        }
        let offset = self
            .matrix
            .iter()
            .zip(&self.offset)
            .map(|(row, b)| row.iter().zip(&inner.offset).fold(b.clone(), |acc, (m, x)| acc + m * x))
            .collect();
        AffineMap { matrix, offset }
    }

    /// Projects along `+e_dir` onto the swipe's ending certificate:
    /// `x ↦ x + ((b_e − H_e(x))/a_e)·e_dir`. Identity for fully degenerate
    /// swipes.
    pub fn swipe_forward(sw: &Swipe) -> AffineMap {
        let m = sw.start_cert.dim();
        if sw.is_fully_degenerate() {
            return AffineMap::identity(m);
        }
        Self::projection(m, sw.dir, &sw.end_cert)
    }

    /// Projects along `−e_dir` onto the swipe's starting certificate.
    pub fn swipe_backward(sw: &Swipe) -> AffineMap {
        let m = sw.start_cert.dim();
        if sw.is_fully_degenerate() {
            return AffineMap::identity(m);
        }
        Self::projection(m, sw.dir, &sw.start_cert)
    }

    fn projection(m: usize, dir: usize, cert: &Hyperplane) -> AffineMap {
        let a = &cert.coeffs[dir];
        let mut map = AffineMap::identity(m);
        for j in 0..m {
            let delta = if j == dir { Rat::one() } else { Rat::zero() };
            map.matrix[dir][j] = delta - &cert.coeffs[j] / a;
        }
        map.offset[dir] = &cert.rhs / a;
        map
    }

    /// Coefficients and constant of `rank ∘ self` as an affine functional.
    pub fn rank_functional(&self) -> (Vec<Rat>, Rat) {
        let cols = self.matrix[0].len();
        let coeffs = (0..cols)
            .map(|j| self.matrix.iter().fold(Rat::zero(), |acc, row| acc + &row[j]))
            .collect();
        let c = self.offset.iter().fold(Rat::zero(), |acc, b| acc + b);
        (coeffs, c)
    }
}

// ---------------------------------------------------------------------------
// Coning
// ---------------------------------------------------------------------------

/// Instructions for coning a decomposition of a projected polytope back up.
#[derive(Clone, Debug)]
pub struct ConeSpec {
    pub apex: Point,
    pub base: GeoDecomposition,
    /// Which snake keeps the bare apex support class.
    pub apex_owner: usize,
}

/// Lifts every turning set `T` of the base to `conv(T ∪ {apex})`, carrying
/// removed supports along (`s` removed implies `s` and `s ∪ {apex}` removed)
/// and assigning the bare apex class to `apex_owner` alone. The output
/// polytope is the union of the cones over the base pieces, which equals the
/// original polytope whenever it is star-shaped around the apex.
pub fn cone_off(spec: &ConeSpec) -> Result<GeoDecomposition> {
    let q = &spec.base;
    let rank = q.polytope.rank()?;
    if spec.apex.rank() * rat(2) != rank {
        return Err(Error::PreconditionFailed("apex does not have middle rank".into()));
    }
    if q.polytope.contains(&spec.apex) {
        return Err(Error::PreconditionFailed("apex lies on a face of the projected polytope".into()));
    }
    if spec.apex_owner >= q.snakes.len() {
        return Err(Error::BadParameter(format!("no snake {} to own the apex", spec.apex_owner)));
    }
    let dim = q.polytope.dim;
    let base_pieces: Vec<&Polytope> =
        if q.polytope.pieces.is_empty() { vec![&q.polytope] } else { q.polytope.pieces.iter().collect() };
    let mut pieces = Vec::new();
    let mut triangulation = Vec::new();
    for piece in base_pieces {
        if piece.triangulation.is_empty() {
            return Err(Error::PreconditionFailed(
                "cone base piece carries no simplex triangulation".into(),
            ));
        }
        for (sign, tri) in &piece.triangulation {
            if *sign != 1 {
                return Err(Error::PreconditionFailed("cone base piece has a signed triangulation".into()));
            }
            let mut verts = tri.vertices().to_vec();
            verts.push(spec.apex.clone());
            let coned = Simplex::new(verts)?;
            pieces.push(Polytope::from_simplex(&coned)?);
            triangulation.push((1, coned));
        }
    }
    let mut polytope = Polytope::union(dim, pieces);
    polytope.triangulation = triangulation;
    // Star-shape sampling: midpoints of segments from the apex to small
    // lattice samples stay inside.
    for n in [1u64, 2] {
        for lp in polytope.lattice_points(n)? {
            let p = lp.to_point();
            let mid = Point::new(
                p.0.iter().zip(&spec.apex.0).map(|(a, b)| (a + b) / rat(2)).collect(),
            );
            if !polytope.contains(&mid) {
                return Err(Error::PreconditionFailed(format!(
                    "star-shape sampling failed at {p:?}"
                )));
            }
        }
    }
    let mut snakes = Vec::new();
    for (si, snake) in q.snakes.iter().enumerate() {
        let keep_apex = si == spec.apex_owner;
        let mut swipes = Vec::new();
        for sw in &snake.swipes {
            swipes.push(Swipe::new(
                sw.dir,
                cone_partial(&sw.start, &spec.apex, keep_apex)?,
                cone_partial(&sw.end, &spec.apex, keep_apex)?,
                sw.start_cert.clone(),
                sw.end_cert.clone(),
            )?);
        }
        snakes.push(Snake::new(snake.kind, swipes)?);
    }
    let g = GeoDecomposition { polytope, mode: q.mode, snakes };
    let structural = g.structural_errors();
    if !structural.is_empty() {
        return Err(Error::InvalidSnake(structural.join("; ")));
    }
    Ok(g)
}

/// The cone of a partial simplex: supports lift as `s` and `s ∪ {apex}`, and
/// removed supports lift to both of their images. The bare apex class is
/// retained only when `keep_apex` is set.
fn cone_partial(ps: &PartialSimplex, apex: &Point, keep_apex: bool) -> Result<PartialSimplex> {
    let n = ps.vertices().len();
    let mut verts = ps.vertices().to_vec();
    verts.push(apex.clone());
    let mut removed: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    for s in ps.removed.iter() {
        removed.insert(s.clone());
        let mut with_apex = s.clone();
        with_apex.insert(n);
        removed.insert(with_apex);
    }
    if !keep_apex {
        removed.insert([n].into_iter().collect());
    }
    PartialSimplex::new(Simplex::new(verts)?, removed)
}

// ---------------------------------------------------------------------------
// Discrete products
// ---------------------------------------------------------------------------

/// Kleitman's bracketing: the product of two chain decompositions (with the
/// same denominator) decomposes chain pair by chain pair, each rank grid cut
/// by right-then-up chains bending at the bottom-right bisector.
pub fn product_discrete(a: &ChainDecomposition, b: &ChainDecomposition) -> Result<ChainDecomposition> {
    if a.denominator != b.denominator {
        return Err(Error::BadParameter(format!(
            "denominators differ: {} vs {}",
            a.denominator, b.denominator
        )));
    }
    let mut chains = Vec::new();
    for ca in &a.chains {
        for cb in &b.chains {
            let p = ca.points.len() - 1;
            let q = cb.points.len() - 1;
            for i in 0..=p.min(q) {
                let mut pts = Vec::with_capacity(p - i + q - i + 1);
                for u in 0..=(p - i) {
                    pts.push(concat_lattice(&ca.points[u], &cb.points[i]));
                }
                for v in i + 1..=q {
                    pts.push(concat_lattice(&ca.points[p - i], &cb.points[v]));
                }
                chains.push(DiscreteChain::new(pts, ChainKind::Closed));
            }
        }
    }
    Ok(ChainDecomposition { denominator: a.denominator, chains })
}

fn concat_lattice(a: &crate::polytope::LatticePoint, b: &crate::polytope::LatticePoint) -> crate::polytope::LatticePoint {
    let mut nums = a.numerators.clone();
    nums.extend(&b.numerators);
    crate::polytope::LatticePoint::new(nums, a.denominator)
}

// ---------------------------------------------------------------------------
// Geometric products
// ---------------------------------------------------------------------------

type CellCon = (Vec<Rat>, Rat, Rel);

/// The product of two geometric decompositions. Requires every snake pair to
/// share a kind (otherwise the open-chain × closed-chain obstruction applies
/// and the product may admit no symmetric chain decomposition at all).
pub fn product_geometric(a: &GeoDecomposition, b: &GeoDecomposition) -> Result<GeoDecomposition> {
    for sa in &a.snakes {
        for sb in &b.snakes {
            if sa.kind != sb.kind {
                return Err(Error::MixedKinds);
            }
        }
    }
    let m1 = a.polytope.dim;
    let m2 = b.polytope.dim;
    let polytope = product_polytope(&a.polytope, &b.polytope)?;
    let mode = if a.mode == Mode::Exact && b.mode == Mode::Exact { Mode::Exact } else { Mode::Asymptotic };
    let mut snakes = Vec::new();
    for sa in &a.snakes {
        for sb in &b.snakes {
            product_snakes_for_pair(sa, sb, m1, m2, &mut snakes)?;
        }
    }
    if snakes.is_empty() {
        return Err(Error::InvalidSnake("product produced no snakes".into()));
    }
    let mut g = GeoDecomposition { polytope, mode, snakes };
    derive_removed_supports(&mut g, &[1, 2, 3], mode == Mode::Exact)?;
    Ok(g)
}

fn product_snakes_for_pair(
    sa: &Snake,
    sb: &Snake,
    m1: usize,
    m2: usize,
    out: &mut Vec<Snake>,
) -> Result<()> {
    let ka = sa.swipes.len();
    let kb = sb.swipes.len();
    // Cumulative forward maps for A: fa[j] carries a starting point to the
    // j-th turning set.
    let mut fa = vec![AffineMap::identity(m1)];
    for sw in &sa.swipes {
        fa.push(AffineMap::swipe_forward(sw).compose(fa.last().expect("cumulative")));
    }
    // Forward-to-end maps from swipe r: ea[r] = fwd_{ka−1} ∘ … ∘ fwd_r.
    let mut ea = vec![AffineMap::identity(m1); ka + 1];
    for r in (0..ka).rev() {
        ea[r] = ea[r + 1].compose(&AffineMap::swipe_forward(&sa.swipes[r]));
    }
    // Backward-to-start maps for B from swipe s.
    let mut back_b = vec![AffineMap::identity(m2)];
    for sw in &sb.swipes {
        let step = AffineMap::swipe_backward(sw);
        back_b.push(back_b.last().expect("cumulative").compose(&step));
    }
    // back_b[s+1] maps a point of swipe s to the chain start on TB_0.
    let fb_step: Vec<AffineMap> = sb.swipes.iter().map(AffineMap::swipe_forward).collect();

    // climb_j(u) = rank(F_j(u)) − rank(u), as an affine functional in u.
    let climb: Vec<(Vec<Rat>, Rat)> = fa
        .iter()
        .map(|f| {
            let (coeffs, c) = f.rank_functional();
            (coeffs.into_iter().map(|x| x - Rat::one()).collect(), c)
        })
        .collect();

    for s in 0..kb {
        if sb.swipes[s].start_cert.coeffs[sb.swipes[s].dir].is_zero() {
            continue; // fully degenerate swipe: measure-zero start region
        }
        // h(w) = rank(w) − rank(back(w)) on swipe s.
        let (back_coeffs, back_c) = back_b[s + 1].rank_functional();
        let h_fun: (Vec<Rat>, Rat) =
            (back_coeffs.into_iter().map(|x| Rat::one() - x).collect(), -back_c);
        for r in 0..ka {
            let cell = cell_constraints(sa, sb, s, r, &climb, &h_fun, m1, m2)?;
            let Some(cell) = cell else { continue };
            let verts = enumerate_vertices(&cell, m1 + m2);
            if verts.len() < m1 + m2 {
                continue;
            }
            if affine_dim_points(&verts) < m1 + m2 - 1 {
                continue;
            }
            for sigma in triangulate(&verts, &cell) {
                let snake =
                    build_product_snake(sa, sb, r, s, &sigma, &fa, &ea, &back_b, &fb_step, m1, m2)?;
                out.push(snake);
            }
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cell_constraints(
    sa: &Snake,
    sb: &Snake,
    s: usize,
    r: usize,
    climb: &[(Vec<Rat>, Rat)],
    h_fun: &(Vec<Rat>, Rat),
    m1: usize,
    m2: usize,
) -> Result<Option<Vec<CellCon>>> {
    let mut cons: Vec<CellCon> = Vec::new();
    // u ∈ TA_0 (span equalities + facet inequalities), padded right.
    let ta0 = Polytope::from_simplex(&sa.swipes[0].start.simplex)?;
    for c in &ta0.constraints {
        let mut coeffs = c.hyperplane.coeffs.clone();
        coeffs.extend(vec![Rat::zero(); m2]);
        cons.push((coeffs, c.hyperplane.rhs.clone(), c.rel));
    }
    // w inside the closure of B-swipe s: between the two certificates.
    let swb = &sb.swipes[s];
    let a_s = &swb.start_cert.coeffs[swb.dir];
    let a_e = &swb.end_cert.coeffs[swb.dir];
    if a_e.is_zero() {
        return Ok(None);
    }
    let side = |cert: &Hyperplane, keep_nonneg: bool| -> CellCon {
        // residual(cert)(w)/a ≥ 0 (start side) or ≤ 0 (end side).
        let mut coeffs = vec![Rat::zero(); m1];
        let flip = if keep_nonneg { -Rat::one() } else { Rat::one() };
        coeffs.extend(cert.coeffs.iter().map(|c| c * &flip));
        (coeffs, &cert.rhs * &flip, Rel::Le)
    };
    // start side: residual ≥ 0 when a_s > 0 else ≤ 0.
    cons.push(side(&swb.start_cert, a_s.is_positive()));
    cons.push(side(&swb.end_cert, !a_e.is_positive()));
    // Footpoint of w lies in TB_s: compose TB_s's H-representation with the
    // backward projection of swipe s.
    let back = AffineMap::swipe_backward(swb);
    let tbs = Polytope::from_simplex(&swb.start.simplex)?;
    for c in &tbs.constraints {
        let mut coeffs = vec![Rat::zero(); m1];
        let mut rhs = c.hyperplane.rhs.clone();
        let mut w_coeffs = vec![Rat::zero(); m2];
        for (i, hc) in c.hyperplane.coeffs.iter().enumerate() {
            for j in 0..m2 {
                w_coeffs[j] += hc * &back.matrix[i][j];
            }
            rhs -= hc * &back.offset[i];
        }
        coeffs.extend(w_coeffs);
        if coeffs.iter().all(Rat::is_zero) {
            if (c.rel == Rel::Eq && !rhs.is_zero()) || (c.rel == Rel::Le && rhs.is_negative()) {
                return Ok(None);
            }
            continue;
        }
        cons.push((coeffs, rhs, c.rel));
    }
    // Pattern band: climb_r(u) ≤ lenA(u) − h(w) ≤ climb_{r+1}(u).
    let ka = sa.swipes.len();
    let len_a = &climb[ka];
    let lower = {
        // climb_r − lenA + h ≤ 0
        let mut coeffs: Vec<Rat> = (0..m1).map(|j| &climb[r].0[j] - &len_a.0[j]).collect();
        coeffs.extend(h_fun.0.iter().cloned());
        let rhs = &len_a.1 - &climb[r].1 + &h_fun.1 * -Rat::one();
        // climb_r(u) + c_r − (lenA(u) + c_len) + h(w) + c_h ≤ 0
        //  ⇔ (climb_r − lenA)(u) + h(w) ≤ c_len − c_r − c_h
        (coeffs, rhs, Rel::Le)
    };
    cons.push(lower);
    let upper = {
        // lenA − climb_{r+1} − h ≤ 0
        let mut coeffs: Vec<Rat> = (0..m1).map(|j| &len_a.0[j] - &climb[r + 1].0[j]).collect();
        coeffs.extend(h_fun.0.iter().map(|c| -c.clone()));
        let rhs = &climb[r + 1].1 - &len_a.1 + h_fun.1.clone();
        (coeffs, rhs, Rel::Le)
    };
    cons.push(upper);
    Ok(Some(cons))
}

fn eval_con(con: &CellCon, p: &Point) -> Rat {
    con.0.iter().zip(&p.0).fold(-con.1.clone(), |acc, (c, x)| acc + c * x)
}

fn con_holds(con: &CellCon, p: &Point) -> bool {
    let v = eval_con(con, p);
    match con.2 {
        Rel::Le => !v.is_positive(),
        Rel::Eq => v.is_zero(),
    }
}

/// Brute-force vertex enumeration of a small H-polytope: solve every maximal
/// consistent square subsystem and keep solutions satisfying all constraints.
fn enumerate_vertices(cons: &[CellCon], dim: usize) -> Vec<Point> {
    let eqs: Vec<&CellCon> = cons.iter().filter(|c| c.2 == Rel::Eq).collect();
    let ineqs: Vec<&CellCon> = cons.iter().filter(|c| c.2 == Rel::Le).collect();
    let eq_rows: Vec<Vec<Rat>> = eqs.iter().map(|c| c.0.clone()).collect();
    let eq_rank = crate::exact::matrix_rank(&eq_rows);
    let free = dim - eq_rank;
    let mut verts: Vec<Point> = Vec::new();
    let mut subset = vec![0usize; free];
    enumerate_subsets(ineqs.len(), free, &mut subset, 0, 0, &mut |chosen: &[usize]| {
        let mut rows: Vec<(Vec<Rat>, Rat)> =
            eqs.iter().map(|c| (c.0.clone(), c.1.clone())).collect();
        for &i in chosen {
            rows.push((ineqs[i].0.clone(), ineqs[i].1.clone()));
        }
        if let Some(p) = solve_affine_unique(&rows, dim) {
            if cons.iter().all(|c| con_holds(c, &p)) && !verts.contains(&p) {
                verts.push(p);
            }
        }
    });
    verts.sort();
    verts
}

fn enumerate_subsets(
    n: usize,
    k: usize,
    buf: &mut Vec<usize>,
    idx: usize,
    from: usize,
    emit: &mut dyn FnMut(&[usize]),
) {
    if idx == k {
        emit(&buf[..k]);
        return;
    }
    for i in from..n {
        buf[idx] = i;
        enumerate_subsets(n, k, buf, idx + 1, i + 1, emit);
    }
}

/// Unique solution of a (possibly overdetermined) affine system.
fn solve_affine_unique(rows: &[(Vec<Rat>, Rat)], dim: usize) -> Option<Point> {
    let mut a: Vec<Vec<Rat>> = rows.iter().map(|(r, b)| {
        let mut v = r.clone();
        v.push(b.clone());
        v
    }).collect();
    let mut pivots = Vec::new();
    let mut row = 0usize;
    for col in 0..dim {
        let Some(p) = (row..a.len()).find(|&r| !a[r][col].is_zero()) else { continue };
        a.swap(row, p);
        let inv = a[row][col].recip();
        for j in col..=dim {
            a[row][j] = &a[row][j] * &inv;
        }
        for r in 0..a.len() {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in col..=dim {
                    a[r][j] = &a[r][j] - &f * &a[row][j];
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == a.len() {
            break;
        }
    }
    if pivots.len() != dim {
        return None;
    }
    // Consistency of the remaining rows.
    for r in row..a.len() {
        if !a[r][dim].is_zero() || a[r][..dim].iter().any(|x| !x.is_zero()) {
            if a[r][..dim].iter().all(Rat::is_zero) && !a[r][dim].is_zero() {
                return None;
            }
        }
    }
    let mut x = vec![Rat::zero(); dim];
    for (r, &col) in pivots.iter().enumerate() {
        x[col] = a[r][dim].clone();
    }
    Some(Point::new(x))
}

fn affine_dim_points(verts: &[Point]) -> usize {
    if verts.len() <= 1 {
        return 0;
    }
    let rows: Vec<Vec<Rat>> = verts[1..].iter().map(|v| v.sub(&verts[0])).collect();
    crate::exact::matrix_rank(&rows)
}

/// Deterministic pulling triangulation: cone the lexicographically least
/// vertex over the triangulated facets that do not contain it.
fn triangulate(verts: &[Point], cons: &[CellCon]) -> Vec<Vec<Point>> {
    let d = affine_dim_points(verts);
    if verts.len() == d + 1 {
        return vec![verts.to_vec()];
    }
    let w = verts.iter().min().expect("nonempty").clone();
    // Dedupe facet-defining inequalities by their normalized hyperplane.
    let mut seen: Vec<Hyperplane> = Vec::new();
    let mut out = Vec::new();
    for con in cons.iter().filter(|c| c.2 == Rel::Le) {
        let Ok(h) = Hyperplane::new(con.0.clone(), con.1.clone()) else { continue };
        let h = h.normalized();
        if seen.contains(&h) {
            continue;
        }
        seen.push(h);
        let tight: Vec<Point> =
            verts.iter().filter(|v| eval_con(con, v).is_zero()).cloned().collect();
        if tight.contains(&w) || tight.is_empty() {
            continue;
        }
        if affine_dim_points(&tight) != d - 1 {
            continue;
        }
        for piece in triangulate(&tight, cons) {
            let mut simplex = vec![w.clone()];
            simplex.extend(piece);
            out.push(simplex);
        }
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn build_product_snake(
    sa: &Snake,
    sb: &Snake,
    r: usize,
    s: usize,
    sigma: &[Point],
    fa: &[AffineMap],
    ea: &[AffineMap],
    back_b: &[AffineMap],
    fb_step: &[AffineMap],
    m1: usize,
    m2: usize,
) -> Result<Snake> {
    let kb = sb.swipes.len();
    let split = |p: &Point| -> (Point, Point) {
        (Point::new(p.0[..m1].to_vec()), Point::new(p.0[m1..].to_vec()))
    };
    // Vertex trajectories: A-phase sets, the bisector set, then the B-phase.
    let mut sets: Vec<Vec<Point>> = Vec::new();
    sets.push(sigma.to_vec());
    for j in 1..=r {
        let verts = sigma
            .iter()
            .map(|v| {
                let (u, w) = split(v);
                fa[j].apply(&u).concat(&w)
            })
            .collect();
        sets.push(verts);
    }
    // Bisector positions: advance within A-swipe r by lenA − h − climb_r.
    let bis_points: Vec<Point> = sigma
        .iter()
        .map(|v| {
            let (u, w) = split(v);
            let at_r = fa[r].apply(&u);
            let len_a = fa[fa.len() - 1].apply(&u).rank() - u.rank();
            let h = &w.rank() - back_b[s + 1].apply(&w).rank();
            let climb_r = at_r.rank() - u.rank();
            let delta = len_a - h - climb_r;
            at_r.axis_step(sa.swipes[r].dir, &delta).concat(&w)
        })
        .collect();
    sets.push(bis_points.clone());
    // B-phase: advance w through swipes s..kb−1.
    let mut w_cursor: Vec<Point> = sigma.iter().map(|v| split(v).1).collect();
    for j in s..kb {
        w_cursor = w_cursor.iter().map(|w| fb_step[j].apply(w)).collect();
        let verts = bis_points
            .iter()
            .zip(&w_cursor)
            .map(|(bp, w)| {
                let (u, _) = split(bp);
                u.concat(w)
            })
            .collect();
        sets.push(verts);
    }
    // Certificates per turning set.
    let pad_a = |h: &Hyperplane| -> Hyperplane {
        let mut coeffs = h.coeffs.clone();
        coeffs.extend(vec![Rat::zero(); m2]);
        Hyperplane { coeffs, rhs: h.rhs.clone() }
    };
    let pad_b = |h: &Hyperplane| -> Hyperplane {
        let mut coeffs = vec![Rat::zero(); m1];
        coeffs.extend(h.coeffs.iter().cloned());
        Hyperplane { coeffs, rhs: h.rhs.clone() }
    };
    let a_certs = sa.turning_certs();
    let b_certs = sb.turning_certs();
    let mut certs: Vec<Hyperplane> = (0..=r).map(|j| pad_a(a_certs[j])).collect();
    // The bisector hyperplane: rank(u) + rank(w) = rank(xe(u)) + rank(ys(w)).
    let (e_coeffs, e_const) = ea[r].rank_functional();
    let (s_coeffs, s_const) = back_b[s + 1].rank_functional();
    let mut phi: Vec<Rat> = (0..m1).map(|j| Rat::one() - &e_coeffs[j]).collect();
    phi.extend((0..m2).map(|j| Rat::one() - &s_coeffs[j]));
    certs.push(Hyperplane::new(phi, e_const + s_const)?);
    for j in s + 1..=kb {
        certs.push(pad_b(b_certs[j]));
    }
    // Directions: A-swipe dirs 0..=r, then B-swipe dirs s..kb−1 shifted.
    let mut dirs: Vec<usize> = (0..=r).map(|j| sa.swipes[j].dir).collect();
    dirs.extend((s..kb).map(|j| m1 + sb.swipes[j].dir));
    debug_assert_eq!(sets.len(), dirs.len() + 1);
    debug_assert_eq!(certs.len(), sets.len());
    let mut swipes = Vec::new();
    for i in 0..dirs.len() {
        let start = PartialSimplex::closed(Simplex::new(sets[i].clone())?);
        let end = PartialSimplex::closed(Simplex::new(sets[i + 1].clone())?);
        swipes.push(Swipe::new(dirs[i], start, end, certs[i].clone(), certs[i + 1].clone())?);
    }
    Snake::new(sa.kind, swipes)
}
