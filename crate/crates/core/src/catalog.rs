//! Built-in decompositions with exact coordinates and certificate tables:
//! the order simplices L(2)…L(5), their projected (boundary-shell)
//! decompositions, the deformed family P_t, and small auxiliary shapes.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::conditions::{contexts_of, TurningContext};
use crate::construct::{cone_off, ConeSpec};
use crate::exact::{rat, ratio, Hyperplane, PartialSimplex, Point, Rat, Simplex};
use crate::polytope::{order_simplex, Constraint, Polytope};
use crate::snake::{translation_axis, GeoDecomposition, Mode, Snake, SnakeKind, Swipe};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub id: String,
    pub provenance: String,
    pub decomposition: GeoDecomposition,
    pub certificates: Vec<TurningContext>,
    pub cover_m_override: Option<u64>,
}

impl CatalogEntry {
    pub fn polytope(&self) -> &Polytope {
        &self.decomposition.polytope
    }
}

pub fn list() -> Vec<(&'static str, &'static str)> {
    vec![
        ("L2", "order simplex in the plane, fanned around the long-edge midpoint"),
        ("L3", "order simplex in 3-space, coned from the barycenter"),
        ("L4a", "order simplex in 4-space, coned from the face-123 barycenter and the main diagonal midpoint"),
        ("L4b", "order simplex in 4-space, alternative coning from the 13-midpoint and the 024 barycenter"),
        ("L5", "order simplex in 5-space, coned from three rank-5/2 edge points (hyperplane conditions fail)"),
        ("Pt", "deformed weighted order simplex with a simplex bite removed; asymptotic decomposition (requires --t ≥ 1)"),
        ("projL2", "boundary shell of L2: two edges"),
        ("projL3", "boundary shell of L3: four facet triangles"),
        ("projL4a", "two-dimensional shell of L4: six triangles"),
        ("projL4b", "two-dimensional shell of L4, alternative projection points"),
        ("projL5", "two-dimensional shell of L5: eight triangles"),
        ("squareBoundary", "boundary of the unit square: one closed and one open chain"),
        ("segment", "unit segment"),
    ]
}

pub fn get(id: &str, t: Option<&Rat>) -> Result<CatalogEntry> {
    let entry = match id {
        "L2" => l2()?,
        "L3" => l3()?,
        "L4a" => l4(Variant::A)?,
        "L4b" => l4(Variant::B)?,
        "L5" => l5()?,
        "Pt" => {
            let t = t.ok_or_else(|| Error::BadParameter("Pt requires a rational t ≥ 1".into()))?;
            p_t(t)?
        }
        "projL2" => proj_l2()?,
        "projL3" => proj_l3()?,
        "projL4a" => proj_l4(Variant::A)?,
        "projL4b" => proj_l4(Variant::B)?,
        "projL5" => proj_l5()?,
        "squareBoundary" => square_boundary()?,
        "segment" => segment()?,
        _ => return Err(Error::UnknownEntry(id.to_string())),
    };
    Ok(entry)
}

/// The three rank-5/2 projection points of the L(5) construction, on the
/// segments 24, 13, and 05 (in coning order).
pub fn l5_projection_points() -> Vec<Point> {
    vec![
        Point::from_pairs(&[(0, 1), (1, 4), (1, 4), (1, 1), (1, 1)]),
        Point::from_pairs(&[(0, 1), (0, 1), (3, 4), (3, 4), (1, 1)]),
        Point::from_pairs(&[(1, 2), (1, 2), (1, 2), (1, 2), (1, 2)]),
    ]
}

// ---------------------------------------------------------------------------
// Shared builders
// ---------------------------------------------------------------------------

/// Vertex `k` of L(m): the monotone 0/1 vector with `k` trailing ones.
fn l_vertex(m: usize, k: usize) -> Point {
    Point::new((0..m).map(|j| if j >= m - k { Rat::one() } else { Rat::zero() }).collect())
}

fn mid(a: &Point, b: &Point) -> Point {
    Point::new(a.0.iter().zip(&b.0).map(|(x, y)| (x + y) / rat(2)).collect())
}

fn bary(points: &[&Point]) -> Point {
    let n = rat(points.len() as i64);
    let m = points[0].dim();
    Point::new(
        (0..m)
            .map(|j| points.iter().fold(Rat::zero(), |acc, p| acc + &p.0[j]) / &n)
            .collect(),
    )
}

/// Builds a snake from turning-set simplices, per-set removed supports, and
/// per-set certificates. Swipe directions are computed as the unique axis
/// carrying the translation between consecutive sets.
fn build_snake(
    kind: SnakeKind,
    sets: Vec<Simplex>,
    removed: Vec<BTreeSet<BTreeSet<usize>>>,
    certs: Vec<Hyperplane>,
) -> Result<Snake> {
    assert_eq!(sets.len(), removed.len());
    assert_eq!(sets.len(), certs.len());
    let partials: Vec<PartialSimplex> = sets
        .into_iter()
        .zip(removed)
        .map(|(s, r)| PartialSimplex::new(s, r))
        .collect::<Result<_>>()?;
    let mut swipes = Vec::new();
    for i in 0..partials.len() - 1 {
        let dir = translation_axis(&partials[i].simplex, &partials[i + 1].simplex)?;
        swipes.push(Swipe::new(
            dir,
            partials[i].clone(),
            partials[i + 1].clone(),
            certs[i].clone(),
            certs[i + 1].clone(),
        )?);
    }
    Snake::new(kind, swipes)
}

fn seg(a: &Point, b: &Point) -> Result<Simplex> {
    Simplex::new(vec![a.clone(), b.clone()])
}

/// Removed supports of a fake snake's two-vertex turning set: both open
/// vertex classes go; only the open segment remains. Derived mechanically by
/// the sample-and-resolve procedure and frozen here.
fn fake_singletons() -> BTreeSet<BTreeSet<usize>> {
    [[0usize].into_iter().collect(), [1usize].into_iter().collect()].into_iter().collect()
}

fn shell_polytope(dim: usize, triangles: &[Simplex]) -> Result<Polytope> {
    let pieces: Vec<Polytope> =
        triangles.iter().map(Polytope::from_simplex).collect::<Result<_>>()?;
    Ok(Polytope::union(dim, pieces))
}

fn finish(
    id: &str,
    provenance: &str,
    decomposition: GeoDecomposition,
    cover_m_override: Option<u64>,
) -> CatalogEntry {
    CatalogEntry {
        id: id.to_string(),
        provenance: provenance.to_string(),
        certificates: contexts_of(&decomposition),
        decomposition,
        cover_m_override,
    }
}

// ---------------------------------------------------------------------------
// L(2)
// ---------------------------------------------------------------------------

fn l2_hyperplanes() -> (Hyperplane, Hyperplane) {
    (
        Hyperplane::from_pairs(&[(1, 1), (-1, 1)], (0, 1)), // x − y = 0
        Hyperplane::from_pairs(&[(1, 1), (1, 1)], (1, 1)),  // x + y = 1
    )
}

fn proj_l2() -> Result<CatalogEntry> {
    let v: Vec<Point> = (0..=2).map(|k| l_vertex(2, k)).collect();
    let (h_diag, h_anti) = l2_hyperplanes();
    let pieces = vec![
        Polytope::from_simplex(&seg(&v[0], &v[1])?)?,
        Polytope::from_simplex(&seg(&v[1], &v[2])?)?,
    ];
    let polytope = Polytope::union(2, pieces);
    let snake = build_snake(
        SnakeKind::Real,
        vec![
            Simplex::new(vec![v[0].clone()])?,
            Simplex::new(vec![v[1].clone()])?,
            Simplex::new(vec![v[2].clone()])?,
        ],
        vec![BTreeSet::new(); 3],
        vec![h_diag.clone(), h_anti, h_diag],
    )?;
    let g = GeoDecomposition { polytope, mode: Mode::Exact, snakes: vec![snake] };
    Ok(finish("projL2", "boundary shell of L2", g, None))
}

fn l2() -> Result<CatalogEntry> {
    let v: Vec<Point> = (0..=2).map(|k| l_vertex(2, k)).collect();
    let apex = mid(&v[0], &v[2]);
    let (h_diag, h_anti) = l2_hyperplanes();
    let snake = build_snake(
        SnakeKind::Real,
        vec![
            seg(&v[0], &apex)?,
            seg(&v[1], &apex)?,
            seg(&v[2], &apex)?,
        ],
        vec![BTreeSet::new(); 3],
        vec![h_diag.clone(), h_anti, h_diag],
    )?;
    let g = GeoDecomposition { polytope: order_simplex(2), mode: Mode::Exact, snakes: vec![snake] };
    Ok(finish("L2", "order simplex fan in the plane", g, None))
}

// ---------------------------------------------------------------------------
// L(3)
// ---------------------------------------------------------------------------

fn l3_hyperplanes() -> (Hyperplane, Hyperplane, Hyperplane) {
    (
        Hyperplane::from_pairs(&[(1, 1), (1, 1), (-1, 1)], (0, 1)), // x+y−z=0
        Hyperplane::from_pairs(&[(1, 1), (-2, 1), (1, 1)], (0, 1)), // x−2y+z=0
        Hyperplane::from_pairs(&[(-1, 1), (1, 1), (1, 1)], (1, 1)), // −x+y+z=1
    )
}

struct L3Data {
    v: Vec<Point>,
    m02: Point,
    m03: Point,
    m13: Point,
}

fn l3_points() -> L3Data {
    let v: Vec<Point> = (0..=3).map(|k| l_vertex(3, k)).collect();
    let m02 = mid(&v[0], &v[2]);
    let m03 = mid(&v[0], &v[3]);
    let m13 = mid(&v[1], &v[3]);
    L3Data { v, m02, m03, m13 }
}

fn l3_snake_data(d: &L3Data) -> Result<(Vec<Simplex>, Vec<Hyperplane>, Vec<Simplex>, Vec<Hyperplane>)> {
    let (h_a, h_b, h_c) = l3_hyperplanes();
    let real_sets = vec![
        seg(&d.v[0], &d.m02)?,
        seg(&d.v[0], &d.m03)?,
        seg(&d.v[1], &d.m13)?,
        seg(&d.v[2], &d.m13)?,
        seg(&d.v[3], &d.m13)?,
    ];
    let real_certs = vec![h_a.clone(), h_b.clone(), h_c.clone(), h_a.clone(), h_c.clone()];
    let fake_sets = vec![
        seg(&d.v[0], &d.m02)?,
        seg(&d.v[1], &d.m02)?,
        seg(&d.v[2], &d.m02)?,
        seg(&d.v[3], &d.m03)?,
        seg(&d.v[3], &d.m13)?,
    ];
    let fake_certs = vec![h_a.clone(), h_c.clone(), h_a, h_b, h_c];
    Ok((real_sets, real_certs, fake_sets, fake_certs))
}

fn proj_l3() -> Result<CatalogEntry> {
    let d = l3_points();
    let facets = vec![
        Simplex::new(vec![d.v[0].clone(), d.v[1].clone(), d.v[2].clone()])?,
        Simplex::new(vec![d.v[0].clone(), d.v[1].clone(), d.v[3].clone()])?,
        Simplex::new(vec![d.v[0].clone(), d.v[2].clone(), d.v[3].clone()])?,
        Simplex::new(vec![d.v[1].clone(), d.v[2].clone(), d.v[3].clone()])?,
    ];
    let polytope = shell_polytope(3, &facets)?;
    let (real_sets, real_certs, fake_sets, fake_certs) = l3_snake_data(&d)?;
    let real = build_snake(SnakeKind::Real, real_sets, vec![BTreeSet::new(); 5], real_certs)?;
    let fake = build_snake(SnakeKind::Fake, fake_sets, vec![fake_singletons(); 5], fake_certs)?;
    let g = GeoDecomposition { polytope, mode: Mode::Exact, snakes: vec![real, fake] };
    Ok(finish("projL3", "boundary shell of L3", g, None))
}

fn l3() -> Result<CatalogEntry> {
    // Frozen coned data: every turning set gains the barycenter apex; the
    // fake snake keeps only the open base segment and its open cone.
    let d = l3_points();
    let apex = bary(&[&d.v[0], &d.v[1], &d.v[2], &d.v[3]]);
    let (real_sets, real_certs, fake_sets, fake_certs) = l3_snake_data(&d)?;
    let cone_set = |s: &Simplex| -> Result<Simplex> {
        let mut verts = s.vertices().to_vec();
        verts.push(apex.clone());
        Simplex::new(verts)
    };
    let coned_real: Vec<Simplex> = real_sets.iter().map(&cone_set).collect::<Result<_>>()?;
    let coned_fake: Vec<Simplex> = fake_sets.iter().map(&cone_set).collect::<Result<_>>()?;
    let fake_removed: BTreeSet<BTreeSet<usize>> = [
        vec![0usize],
        vec![1],
        vec![2],
        vec![0, 2],
        vec![1, 2],
    ]
    .into_iter()
    .map(|v| v.into_iter().collect())
    .collect();
    let real = build_snake(SnakeKind::Real, coned_real, vec![BTreeSet::new(); 5], real_certs)?;
    let fake = build_snake(SnakeKind::Fake, coned_fake, vec![fake_removed; 5], fake_certs)?;
    let g = GeoDecomposition { polytope: order_simplex(3), mode: Mode::Exact, snakes: vec![real, fake] };
    Ok(finish("L3", "order simplex coned from its barycenter", g, None))
}

// ---------------------------------------------------------------------------
// L(4), both variants
// ---------------------------------------------------------------------------

#[derive(Clone, Copy)]
enum Variant {
    A,
    B,
}

struct ShellData {
    dim: usize,
    triangles: Vec<[usize; 3]>,
    real_sets: Vec<Simplex>,
    real_certs: Vec<Hyperplane>,
    fake_sets: Vec<Simplex>,
    fake_certs: Vec<Hyperplane>,
    /// Coning apexes, innermost first.
    apexes: Vec<Point>,
}

fn l4_shell(variant: Variant) -> Result<ShellData> {
    let v: Vec<Point> = (0..=4).map(|k| l_vertex(4, k)).collect();
    let h_main = Hyperplane::from_pairs(&[(-1, 1), (1, 1), (1, 1), (-1, 1)], (0, 1));
    match variant {
        Variant::A => {
            let h2 = Hyperplane::from_pairs(&[(2, 1), (-2, 1), (1, 1), (1, 1)], (1, 1));
            let h3 = Hyperplane::from_pairs(&[(0, 1), (1, 1), (-2, 1), (1, 1)], (0, 1));
            let h4 = Hyperplane::from_pairs(&[(1, 1), (0, 1), (0, 1), (1, 1)], (1, 1));
            let h5 = Hyperplane::from_pairs(&[(1, 1), (-2, 1), (1, 1), (0, 1)], (0, 1));
            let h6 = Hyperplane::from_pairs(&[(1, 1), (1, 1), (-2, 1), (2, 1)], (1, 1));
            let m02 = mid(&v[0], &v[2]);
            let m03 = mid(&v[0], &v[3]);
            let m13 = mid(&v[1], &v[3]);
            let m14 = mid(&v[1], &v[4]);
            let m24 = mid(&v[2], &v[4]);
            Ok(ShellData {
                dim: 4,
                triangles: vec![[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4]],
                real_sets: vec![
                    seg(&v[0], &m02)?,
                    seg(&v[0], &m03)?,
                    seg(&v[1], &m13)?,
                    seg(&v[1], &m14)?,
                    seg(&v[2], &m24)?,
                    seg(&v[3], &m24)?,
                    seg(&v[4], &m24)?,
                ],
                real_certs: vec![
                    h_main.clone(),
                    h3.clone(),
                    h4.clone(),
                    h5.clone(),
                    h_main.clone(),
                    h6,
                    h_main.clone(),
                ],
                fake_sets: vec![
                    seg(&v[0], &m02)?,
                    seg(&v[1], &m02)?,
                    seg(&v[2], &m02)?,
                    seg(&v[3], &m03)?,
                    seg(&v[3], &m13)?,
                    seg(&v[4], &m14)?,
                    seg(&v[4], &m24)?,
                ],
                fake_certs: vec![h_main.clone(), h2, h_main.clone(), h3, h4, h5, h_main],
                apexes: vec![bary(&[&v[1], &v[2], &v[3]]), mid(&v[0], &v[4])],
            })
        }
        Variant::B => {
            let h2 = Hyperplane::from_pairs(&[(0, 1), (-1, 1), (1, 1), (1, 1)], (1, 1));
            let h3 = Hyperplane::from_pairs(&[(1, 1), (1, 1), (-1, 1), (0, 1)], (0, 1));
            let m02 = mid(&v[0], &v[2]);
            let m03 = mid(&v[0], &v[3]);
            let m04 = mid(&v[0], &v[4]);
            let m14 = mid(&v[1], &v[4]);
            let m24 = mid(&v[2], &v[4]);
            Ok(ShellData {
                dim: 4,
                triangles: vec![[0, 1, 2], [0, 2, 3], [0, 1, 4], [0, 3, 4], [1, 2, 4], [2, 3, 4]],
                real_sets: vec![
                    seg(&v[0], &m02)?,
                    seg(&v[0], &m03)?,
                    seg(&v[0], &m04)?,
                    seg(&v[1], &m14)?,
                    seg(&v[2], &m24)?,
                    seg(&v[3], &m24)?,
                    seg(&v[4], &m24)?,
                ],
                real_certs: vec![
                    h_main.clone(),
                    h3.clone(),
                    h_main.clone(),
                    h2.clone(),
                    h_main.clone(),
                    h3.clone(),
                    h_main.clone(),
                ],
                fake_sets: vec![
                    seg(&v[0], &m02)?,
                    seg(&v[1], &m02)?,
                    seg(&v[2], &m02)?,
                    seg(&v[3], &m03)?,
                    seg(&v[4], &m04)?,
                    seg(&v[4], &m14)?,
                    seg(&v[4], &m24)?,
                ],
                fake_certs: vec![h_main.clone(), h2.clone(), h_main.clone(), h3, h_main.clone(), h2, h_main],
                apexes: vec![mid(&v[1], &v[3]), bary(&[&v[0], &v[2], &v[4]])],
            })
        }
    }
}

fn shell_entry(id: &str, provenance: &str, data: &ShellData, m: usize) -> Result<CatalogEntry> {
    let v: Vec<Point> = (0..=m).map(|k| l_vertex(m, k)).collect();
    let triangles: Vec<Simplex> = data
        .triangles
        .iter()
        .map(|t| Simplex::new(t.iter().map(|&i| v[i].clone()).collect()))
        .collect::<Result<_>>()?;
    let polytope = shell_polytope(data.dim, &triangles)?;
    let real = build_snake(
        SnakeKind::Real,
        data.real_sets.clone(),
        vec![BTreeSet::new(); data.real_sets.len()],
        data.real_certs.clone(),
    )?;
    let fake = build_snake(
        SnakeKind::Fake,
        data.fake_sets.clone(),
        vec![fake_singletons(); data.fake_sets.len()],
        data.fake_certs.clone(),
    )?;
    let g = GeoDecomposition { polytope, mode: Mode::Exact, snakes: vec![real, fake] };
    Ok(finish(id, provenance, g, None))
}

/// Cones the shell decomposition through all apexes (innermost first) and
/// swaps in the canonical polytope.
fn cone_through(mut g: GeoDecomposition, apexes: &[Point], canonical: Polytope) -> Result<GeoDecomposition> {
    for apex in apexes {
        g = cone_off(&ConeSpec { apex: apex.clone(), base: g, apex_owner: 0 })?;
    }
    g.polytope = canonical;
    Ok(g)
}

fn l4(variant: Variant) -> Result<CatalogEntry> {
    let data = l4_shell(variant)?;
    let (id, pid, prov) = match variant {
        Variant::A => ("L4a", "projL4a", "order simplex coned twice (primary variant)"),
        Variant::B => ("L4b", "projL4b", "order simplex coned twice (alternative variant)"),
    };
    let shell = shell_entry(pid, prov, &data, 4)?;
    let g = cone_through(shell.decomposition, &data.apexes, order_simplex(4))?;
    Ok(finish(id, prov, g, None))
}

fn proj_l4(variant: Variant) -> Result<CatalogEntry> {
    let data = l4_shell(variant)?;
    match variant {
        Variant::A => shell_entry("projL4a", "two-dimensional shell of L4", &data, 4),
        Variant::B => shell_entry("projL4b", "two-dimensional shell of L4 (alternative)", &data, 4),
    }
}

// ---------------------------------------------------------------------------
// L(5)
// ---------------------------------------------------------------------------

fn l5_shell() -> Result<ShellData> {
    let v: Vec<Point> = (0..=5).map(|k| l_vertex(5, k)).collect();
    // Hyperplanes of the certificate table, in coordinates (a, b, c, d, e).
    let h1 = Hyperplane::from_pairs(&[(0, 1), (1, 1), (-1, 1), (-3, 1), (3, 1)], (0, 1));
    let h2 = Hyperplane::from_pairs(&[(4, 1), (-3, 1), (-1, 1), (1, 1), (1, 1)], (1, 1));
    let h3 = Hyperplane::from_pairs(&[(3, 1), (-3, 1), (-1, 1), (1, 1), (0, 1)], (0, 1));
    let h4 = Hyperplane::from_pairs(&[(1, 1), (0, 1), (0, 1), (0, 1), (1, 1)], (1, 1));
    let h5 = Hyperplane::from_pairs(&[(1, 1), (1, 1), (-1, 1), (-3, 1), (4, 1)], (1, 1));
    let m = |i: usize, j: usize| mid(&v[i], &v[j]);
    Ok(ShellData {
        dim: 5,
        triangles: vec![
            [0, 1, 2],
            [0, 2, 3],
            [0, 3, 4],
            [0, 1, 4],
            [1, 2, 5],
            [2, 3, 5],
            [3, 4, 5],
            [1, 4, 5],
        ],
        real_sets: vec![
            seg(&v[0], &m(0, 2))?,
            seg(&v[0], &m(0, 3))?,
            seg(&v[0], &m(0, 4))?,
            seg(&v[1], &m(1, 4))?,
            seg(&v[1], &m(1, 5))?,
            seg(&v[2], &m(2, 5))?,
            seg(&v[3], &m(3, 5))?,
            seg(&v[4], &m(3, 5))?,
            seg(&v[5], &m(3, 5))?,
        ],
        real_certs: vec![
            h1.clone(),
            h3.clone(),
            h1.clone(),
            h4.clone(),
            h3.clone(),
            h1.clone(),
            h3.clone(),
            h5,
            h3.clone(),
        ],
        fake_sets: vec![
            seg(&v[0], &m(0, 2))?,
            seg(&v[1], &m(0, 2))?,
            seg(&v[2], &m(0, 2))?,
            seg(&v[3], &m(0, 3))?,
            seg(&v[4], &m(0, 4))?,
            seg(&v[4], &m(1, 4))?,
            seg(&v[5], &m(1, 5))?,
            seg(&v[5], &m(2, 5))?,
            seg(&v[5], &m(3, 5))?,
        ],
        fake_certs: vec![
            h1.clone(),
            h2,
            h1.clone(),
            h3.clone(),
            h1.clone(),
            h4,
            h3.clone(),
            h1,
            h3,
        ],
        apexes: l5_projection_points(),
    })
}

fn proj_l5() -> Result<CatalogEntry> {
    let data = l5_shell()?;
    shell_entry("projL5", "two-dimensional shell of L5", &data, 5)
}

fn l5() -> Result<CatalogEntry> {
    let data = l5_shell()?;
    let shell = shell_entry("projL5", "shell", &data, 5)?;
    let g = cone_through(shell.decomposition, &data.apexes, order_simplex(5))?;
    Ok(finish(
        "L5",
        "order simplex coned three times; covering constant 27",
        g,
        Some(27),
    ))
}

// ---------------------------------------------------------------------------
// The deformed family P_t
// ---------------------------------------------------------------------------

struct PtPoints {
    v: Vec<Point>,
    p: Point,
    r03: Point,
    r13: Point,
    r14: Point,
    q: Point,
    b: Point,
    b_prime: Point,
}

fn p_t_points(t: &Rat) -> PtPoints {
    let zero = Rat::zero();
    let one = Rat::one();
    let t1 = t + &one; // t+1
    let v = vec![
        Point::new(vec![zero.clone(), zero.clone(), zero.clone(), zero.clone()]),
        Point::new(vec![zero.clone(), zero.clone(), zero.clone(), one.clone()]),
        Point::new(vec![zero.clone(), zero.clone(), t.clone(), one.clone()]),
        Point::new(vec![zero.clone(), t.recip(), t.clone(), one.clone()]),
        Point::new(vec![one.clone(), t.recip(), t.clone(), one.clone()]),
    ];
    let p = Point::new(vec![zero.clone(), zero.clone(), t / &t1, t1.recip()]);
    let r03 = Point::new(vec![zero.clone(), (t * &t1).recip(), t / &t1, t1.recip()]);
    let r13 = Point::new(vec![zero.clone(), (t * &t1).recip(), t / &t1, one.clone()]);
    let r14 = Point::new(vec![t1.recip(), (t * &t1).recip(), t / &t1, one.clone()]);
    let q = Point::new(vec![t1.recip(), (t * &t1).recip(), t.clone(), one.clone()]);
    let b = Point::new(vec![ratio(1, 2), (t * rat(2)).recip(), t / rat(2), ratio(1, 2)]);
    let tt1 = t * t + t + &one; // t²+t+1
    let b_prime = Point::new(vec![
        zero,
        &t1 / (rat(2) * &tt1),
        t * &t1 * &t1 / (rat(2) * &tt1),
        &t1 / (rat(2) * t),
    ]);
    PtPoints { v, p, r03, r13, r14, q, b, b_prime }
}

fn p_t_hyperplanes(t: &Rat) -> Vec<Hyperplane> {
    let one = Rat::one();
    let t1 = t + &one;
    let t2 = t * t;
    let t3 = &t2 * t;
    let t4 = &t3 * t;
    let h1 = Hyperplane {
        coeffs: vec![t.recip(), -one.clone(), -one.clone(), t.clone()],
        rhs: Rat::zero(),
    };
    let h2 = Hyperplane {
        coeffs: vec![
            (&t3 + rat(2) * &t2 + &one) / (&t2 * &t1),
            -(&t4 + &t3 + &t2 + &one) / (t * &t1),
            one.clone(),
            one.clone(),
        ],
        rhs: one.clone(),
    };
    let h3 = Hyperplane {
        coeffs: vec![Rat::zero(), one.clone(), -(&t1 / &t2), one.clone()],
        rhs: Rat::zero(),
    };
    let h4 = Hyperplane {
        coeffs: vec![
            one.clone(),
            (&one - &t3) / &t1,
            -(&one - &t3) / (&t2 * &t1),
            one.clone(),
        ],
        rhs: one.clone(),
    };
    let h5 = Hyperplane {
        coeffs: vec![one.clone(), -(t * &t1), one.clone(), Rat::zero()],
        rhs: Rat::zero(),
    };
    // The z-coefficient below is re-derived from the turning set {3, q, B, B'};
    // it reduces to x+y−2z+2w=1 at t = 1.
    let h6 = Hyperplane {
        coeffs: vec![
            one.clone(),
            one.clone(),
            -(&t4 + &t2 + t + &one) / (&t2 * &t1),
            (&t3 + rat(2) * t + &one) / &t1,
        ],
        rhs: one,
    };
    vec![h1, h2, h3, h4, h5, h6]
}

fn p_t(t: &Rat) -> Result<CatalogEntry> {
    if t < &Rat::one() {
        return Err(Error::BadParameter("Pt requires t ≥ 1".into()));
    }
    let pts = p_t_points(t);
    let h = p_t_hyperplanes(t);
    let (h1, h2, h3, h4, h5, h6) = (&h[0], &h[1], &h[2], &h[3], &h[4], &h[5]);
    let real_sets = vec![
        seg(&pts.v[0], &pts.p)?,
        seg(&pts.v[0], &pts.r03)?,
        seg(&pts.v[1], &pts.r13)?,
        seg(&pts.v[1], &pts.r14)?,
        seg(&pts.v[2], &pts.q)?,
        seg(&pts.v[3], &pts.q)?,
        seg(&pts.v[4], &pts.q)?,
    ];
    let real_certs = vec![h1.clone(), h3.clone(), h4.clone(), h5.clone(), h1.clone(), h6.clone(), h1.clone()];
    let fake_sets = vec![
        seg(&pts.v[0], &pts.p)?,
        seg(&pts.v[1], &pts.p)?,
        seg(&pts.v[2], &pts.p)?,
        seg(&pts.v[3], &pts.r03)?,
        seg(&pts.v[3], &pts.r13)?,
        seg(&pts.v[4], &pts.r14)?,
        seg(&pts.v[4], &pts.q)?,
    ];
    let fake_certs = vec![h1.clone(), h2.clone(), h1.clone(), h3.clone(), h4.clone(), h5.clone(), h1.clone()];
    let triangles: Vec<Simplex> = [[0usize, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4]]
        .iter()
        .map(|tr| Simplex::new(tr.iter().map(|&i| pts.v[i].clone()).collect()))
        .collect::<Result<_>>()?;
    let shell_poly = shell_polytope(4, &triangles)?;
    let real = build_snake(SnakeKind::Real, real_sets, vec![BTreeSet::new(); 7], real_certs)?;
    let fake = build_snake(SnakeKind::Fake, fake_sets, vec![fake_singletons(); 7], fake_certs)?;
    let shell = GeoDecomposition { polytope: shell_poly, mode: Mode::Asymptotic, snakes: vec![real, fake] };
    let apexes = [pts.b_prime.clone(), pts.b.clone()];
    let canonical = p_t_polytope(t, &pts)?;
    let g = cone_through(shell, &apexes, canonical)?;
    Ok(finish("Pt", "deformed weighted order simplex with the bite removed", g, None))
}

/// The canonical polytope: the stretched order simplex with the open simplex
/// over (B', 1, 2, 3, 4) removed.
fn p_t_polytope(t: &Rat, pts: &PtPoints) -> Result<Polytope> {
    let one = Rat::one();
    let zero = Rat::zero();
    let constraints = vec![
        Constraint::le(Hyperplane::new(vec![-one.clone(), zero.clone(), zero.clone(), zero.clone()], zero.clone())?),
        Constraint::le(Hyperplane::new(vec![one.clone(), -t.clone(), zero.clone(), zero.clone()], zero.clone())?),
        Constraint::le(Hyperplane::new(vec![zero.clone(), t * t, -one.clone(), zero.clone()], zero.clone())?),
        Constraint::le(Hyperplane::new(vec![zero.clone(), zero.clone(), one.clone(), -t.clone()], zero.clone())?),
        Constraint::le(Hyperplane::new(vec![zero.clone(), zero.clone(), zero.clone(), one.clone()], one.clone())?),
    ];
    let body = Simplex::new(pts.v.clone())?;
    if t == &Rat::one() {
        // B' is the barycenter of face 123: the bite is flat and P_1 = L(4).
        let mut poly = Polytope::convex(4, pts.v.clone(), constraints)?;
        poly.triangulation = vec![(1, body)];
        return Ok(poly);
    }
    let mut vertices: Vec<Point> = pts.v.clone();
    vertices.push(pts.b_prime.clone());
    let mut poly = Polytope::convex(4, vertices, constraints)?;
    let bite = Simplex::new(vec![
        pts.b_prime.clone(),
        pts.v[1].clone(),
        pts.v[2].clone(),
        pts.v[3].clone(),
        pts.v[4].clone(),
    ])?;
    // Taking the closure of L(4)_t minus the closed bite keeps only the three
    // crater walls (the facets through vertex 4 and B' that solid points
    // approach); the faces spanned by {1,2,3} alone hang inside the cut and
    // are gone. Hence a bite point stays excluded exactly when its weights on
    // vertices 1, 2, 3 are all strictly positive.
    poly.excluded = vec![crate::polytope::ExcludedRegion {
        simplex: bite.clone(),
        strict: [1usize, 2, 3].into_iter().collect(),
    }];
    poly.triangulation = vec![(1, body), (-1, bite)];
    Ok(poly)
}

/// The stretched order simplex without the bite (volume rank symmetry fails
/// for it when t ≠ 1).
pub fn l4_stretched(t: &Rat) -> Result<Polytope> {
    let pts = p_t_points(t);
    let mut poly = p_t_polytope(t, &pts)?;
    poly.excluded.clear();
    poly.vertices = pts.v.clone();
    poly.triangulation = vec![(1, Simplex::new(pts.v)?)];
    Ok(poly)
}

// ---------------------------------------------------------------------------
// Small auxiliary entries
// ---------------------------------------------------------------------------

fn square_boundary() -> Result<CatalogEntry> {
    let c00 = Point::from_pairs(&[(0, 1), (0, 1)]);
    let c10 = Point::from_pairs(&[(1, 1), (0, 1)]);
    let c01 = Point::from_pairs(&[(0, 1), (1, 1)]);
    let c11 = Point::from_pairs(&[(1, 1), (1, 1)]);
    let pieces = vec![
        Polytope::from_simplex(&seg(&c00, &c10)?)?,
        Polytope::from_simplex(&seg(&c10, &c11)?)?,
        Polytope::from_simplex(&seg(&c00, &c01)?)?,
        Polytope::from_simplex(&seg(&c01, &c11)?)?,
    ];
    let polytope = Polytope::union(2, pieces);
    let (h_diag, h_anti) = l2_hyperplanes();
    let real = build_snake(
        SnakeKind::Real,
        vec![Simplex::new(vec![c00.clone()])?, Simplex::new(vec![c01.clone()])?, Simplex::new(vec![c11.clone()])?],
        vec![BTreeSet::new(); 3],
        vec![h_diag.clone(), h_anti.clone(), h_diag.clone()],
    )?;
    let fake = build_snake(
        SnakeKind::Fake,
        vec![Simplex::new(vec![c00])?, Simplex::new(vec![c10])?, Simplex::new(vec![c11])?],
        vec![BTreeSet::new(); 3],
        vec![h_diag.clone(), h_anti, h_diag],
    )?;
    let g = GeoDecomposition { polytope, mode: Mode::Exact, snakes: vec![real, fake] };
    Ok(finish("squareBoundary", "unit square boundary: one closed and one open chain", g, None))
}

fn segment() -> Result<CatalogEntry> {
    let a = Point::new(vec![Rat::zero()]);
    let b = Point::new(vec![Rat::one()]);
    let polytope = Polytope::from_simplex(&seg(&a, &b)?)?;
    let snake = build_snake(
        SnakeKind::Real,
        vec![Simplex::new(vec![a])?, Simplex::new(vec![b])?],
        vec![BTreeSet::new(); 2],
        vec![
            Hyperplane::from_pairs(&[(1, 1)], (0, 1)),
            Hyperplane::from_pairs(&[(1, 1)], (1, 1)),
        ],
    )?;
    let g = GeoDecomposition { polytope, mode: Mode::Exact, snakes: vec![snake] };
    Ok(finish("segment", "unit segment", g, None))
}
