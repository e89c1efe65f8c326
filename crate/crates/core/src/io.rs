//! JSON and CSV serialization. Rationals travel as strings `p/q` (or `p`
//! when the denominator is one), never as floats, so files are bit-exact.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::exact::{fmt_rat, parse_rat, Hyperplane, PartialSimplex, Point, Rat, Simplex};
use crate::polytope::{Constraint, FastEnum, LatticePoint, Polytope, Rel};
use crate::poset::{ChainDecomposition, ChainKind, DiscreteChain};
use crate::snake::{GeoDecomposition, Mode, Snake, SnakeKind, Swipe};
use crate::{Error, Result};

fn rats_to_strings(v: &[Rat]) -> Vec<String> {
    v.iter().map(fmt_rat).collect()
}

fn strings_to_rats(v: &[String]) -> Result<Vec<Rat>> {
    v.iter().map(|s| parse_rat(s)).collect()
}

#[derive(Serialize, Deserialize, Clone)]
pub struct HyperplaneJson {
    pub coeffs: Vec<String>,
    pub rhs: String,
}

impl HyperplaneJson {
    fn from(h: &Hyperplane) -> Self {
        HyperplaneJson { coeffs: rats_to_strings(&h.coeffs), rhs: fmt_rat(&h.rhs) }
    }

    fn build(&self) -> Result<Hyperplane> {
        Hyperplane::new(strings_to_rats(&self.coeffs)?, parse_rat(&self.rhs)?)
    }
}

#[derive(Serialize, Deserialize, Clone)]
pub struct ConstraintJson {
    pub coeffs: Vec<String>,
    pub rhs: String,
    pub rel: String,
}

#[derive(Serialize, Deserialize, Clone)]
pub struct TriangleJson {
    pub sign: i32,
    pub vertices: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize, Clone)]
pub struct ExcludedJson {
    pub vertices: Vec<Vec<String>>,
    /// Vertex indices whose barycentric weight must be strictly positive for
    /// a point to be excluded; all of them when omitted (the open simplex).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strict: Option<Vec<usize>>,
}

#[derive(Serialize, Deserialize, Clone)]
pub struct PolytopeJson {
    pub dim: usize,
    pub vertices: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub constraints: Vec<ConstraintJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pieces: Vec<PolytopeJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub excluded: Vec<ExcludedJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fast: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub triangulation: Vec<TriangleJson>,
}

fn point_to_json(p: &Point) -> Vec<String> {
    rats_to_strings(&p.0)
}

fn point_from_json(v: &[String]) -> Result<Point> {
    Ok(Point::new(strings_to_rats(v)?))
}

pub fn polytope_to_json(p: &Polytope) -> PolytopeJson {
    PolytopeJson {
        dim: p.dim,
        vertices: p.vertices.iter().map(point_to_json).collect(),
        constraints: p
            .constraints
            .iter()
            .map(|c| ConstraintJson {
                coeffs: rats_to_strings(&c.hyperplane.coeffs),
                rhs: fmt_rat(&c.hyperplane.rhs),
                rel: match c.rel {
                    Rel::Le => "le".into(),
                    Rel::Eq => "eq".into(),
                },
            })
            .collect(),
        pieces: p.pieces.iter().map(polytope_to_json).collect(),
        excluded: p
            .excluded
            .iter()
            .map(|region| ExcludedJson {
                vertices: region.simplex.vertices().iter().map(point_to_json).collect(),
                strict: if region.strict.len() == region.simplex.vertices().len() {
                    None
                } else {
                    Some(region.strict.iter().copied().collect())
                },
            })
            .collect(),
        fast: p.fast.map(|f| match f {
            FastEnum::OrderSimplex => "order-simplex".to_string(),
            FastEnum::Cuboid => "cuboid".to_string(),
        }),
        triangulation: p
            .triangulation
            .iter()
            .map(|(sign, s)| TriangleJson {
                sign: *sign,
                vertices: s.vertices().iter().map(point_to_json).collect(),
            })
            .collect(),
    }
}

pub fn polytope_from_json(j: &PolytopeJson) -> Result<Polytope> {
    let vertices: Vec<Point> = j.vertices.iter().map(|v| point_from_json(v)).collect::<Result<_>>()?;
    let constraints: Vec<Constraint> = j
        .constraints
        .iter()
        .map(|c| {
            let h = Hyperplane::new(strings_to_rats(&c.coeffs)?, parse_rat(&c.rhs)?)?;
            Ok(Constraint {
                hyperplane: h,
                rel: match c.rel.as_str() {
                    "le" => Rel::Le,
                    "eq" => Rel::Eq,
                    other => return Err(Error::Parse(format!("unknown relation `{other}`"))),
                },
            })
        })
        .collect::<Result<_>>()?;
    let pieces: Vec<Polytope> = j.pieces.iter().map(polytope_from_json).collect::<Result<_>>()?;
    let mut p = if pieces.is_empty() {
        Polytope::convex(j.dim, vertices, constraints)?
    } else {
        let mut u = Polytope::union(j.dim, pieces);
        u.vertices = vertices;
        u.constraints = constraints;
        u
    };
    p.excluded = j
        .excluded
        .iter()
        .map(|region| {
            let pts: Vec<Point> =
                region.vertices.iter().map(|v| point_from_json(v)).collect::<Result<_>>()?;
            let simplex = Simplex::new(pts)?;
            Ok(match &region.strict {
                None => crate::polytope::ExcludedRegion::open_simplex(simplex),
                Some(strict) => crate::polytope::ExcludedRegion {
                    simplex,
                    strict: strict.iter().copied().collect(),
                },
            })
        })
        .collect::<Result<_>>()?;
    p.fast = match j.fast.as_deref() {
        None => None,
        Some("order-simplex") => Some(FastEnum::OrderSimplex),
        Some("cuboid") => Some(FastEnum::Cuboid),
        Some(other) => return Err(Error::Parse(format!("unknown fast enumerator `{other}`"))),
    };
    p.triangulation = j
        .triangulation
        .iter()
        .map(|t| {
            let pts: Vec<Point> = t.vertices.iter().map(|v| point_from_json(v)).collect::<Result<_>>()?;
            Ok((t.sign, Simplex::new(pts)?))
        })
        .collect::<Result<_>>()?;
    Ok(p)
}

#[derive(Serialize, Deserialize, Clone)]
pub struct PartialSimplexJson {
    pub vertices: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub removed: Vec<Vec<usize>>,
}

fn partial_to_json(ps: &PartialSimplex) -> PartialSimplexJson {
    PartialSimplexJson {
        vertices: ps.vertices().iter().map(point_to_json).collect(),
        removed: ps.removed.iter().map(|s| s.iter().copied().collect()).collect(),
    }
}

fn partial_from_json(j: &PartialSimplexJson) -> Result<PartialSimplex> {
    let pts: Vec<Point> = j.vertices.iter().map(|v| point_from_json(v)).collect::<Result<_>>()?;
    let removed: BTreeSet<BTreeSet<usize>> =
        j.removed.iter().map(|s| s.iter().copied().collect()).collect();
    PartialSimplex::new(Simplex::new(pts)?, removed)
}

#[derive(Serialize, Deserialize, Clone)]
pub struct SwipeJson {
    pub dir: usize,
    pub start: PartialSimplexJson,
    pub end: PartialSimplexJson,
    #[serde(rename = "startCert")]
    pub start_cert: HyperplaneJson,
    #[serde(rename = "endCert")]
    pub end_cert: HyperplaneJson,
}

#[derive(Serialize, Deserialize, Clone)]
pub struct SnakeJson {
    pub kind: String,
    pub swipes: Vec<SwipeJson>,
}

#[derive(Serialize, Deserialize, Clone)]
pub struct GeoJson {
    pub polytope: PolytopeJson,
    pub mode: String,
    pub snakes: Vec<SnakeJson>,
}

pub fn geo_to_json(g: &GeoDecomposition) -> GeoJson {
    GeoJson {
        polytope: polytope_to_json(&g.polytope),
        mode: match g.mode {
            Mode::Exact => "exact".into(),
            Mode::Asymptotic => "asymptotic".into(),
        },
        snakes: g
            .snakes
            .iter()
            .map(|s| SnakeJson {
                kind: match s.kind {
                    SnakeKind::Real => "real".into(),
                    SnakeKind::Fake => "fake".into(),
                },
                swipes: s
                    .swipes
                    .iter()
                    .map(|sw| SwipeJson {
                        dir: sw.dir,
                        start: partial_to_json(&sw.start),
                        end: partial_to_json(&sw.end),
                        start_cert: HyperplaneJson::from(&sw.start_cert),
                        end_cert: HyperplaneJson::from(&sw.end_cert),
                    })
                    .collect(),
            })
            .collect(),
    }
}

pub fn geo_from_json(j: &GeoJson) -> Result<GeoDecomposition> {
    let polytope = polytope_from_json(&j.polytope)?;
    let mode = match j.mode.as_str() {
        "exact" => Mode::Exact,
        "asymptotic" => Mode::Asymptotic,
        other => return Err(Error::Parse(format!("unknown mode `{other}`"))),
    };
    let snakes: Vec<Snake> = j
        .snakes
        .iter()
        .map(|s| {
            let kind = match s.kind.as_str() {
                "real" => SnakeKind::Real,
                "fake" => SnakeKind::Fake,
                other => return Err(Error::Parse(format!("unknown snake kind `{other}`"))),
            };
            let swipes: Vec<Swipe> = s
                .swipes
                .iter()
                .map(|sw| {
                    Swipe::new(
                        sw.dir,
                        partial_from_json(&sw.start)?,
                        partial_from_json(&sw.end)?,
                        sw.start_cert.build()?,
                        sw.end_cert.build()?,
                    )
                })
                .collect::<Result<_>>()?;
            Snake::new(kind, swipes)
        })
        .collect::<Result<_>>()?;
    Ok(GeoDecomposition { polytope, mode, snakes })
}

#[derive(Serialize, Deserialize, Clone)]
pub struct ChainJson {
    pub kind: String,
    pub points: Vec<Vec<i64>>,
}

#[derive(Serialize, Deserialize, Clone)]
pub struct ChainDecompositionJson {
    pub n: u64,
    pub chains: Vec<ChainJson>,
}

pub fn chains_to_json(d: &ChainDecomposition) -> ChainDecompositionJson {
    ChainDecompositionJson {
        n: d.denominator,
        chains: d
            .chains
            .iter()
            .map(|c| ChainJson {
                kind: match c.kind {
                    ChainKind::Closed => "closed".into(),
                    ChainKind::Open => "open".into(),
                },
                points: c.points.iter().map(|p| p.numerators.clone()).collect(),
            })
            .collect(),
    }
}

pub fn chains_from_json(j: &ChainDecompositionJson) -> Result<ChainDecomposition> {
    let chains = j
        .chains
        .iter()
        .map(|c| {
            let kind = match c.kind.as_str() {
                "closed" => ChainKind::Closed,
                "open" => ChainKind::Open,
                other => return Err(Error::Parse(format!("unknown chain kind `{other}`"))),
            };
            Ok(DiscreteChain::new(
                c.points.iter().map(|nums| LatticePoint::new(nums.clone(), j.n)).collect(),
                kind,
            ))
        })
        .collect::<Result<_>>()?;
    Ok(ChainDecomposition { denominator: j.n, chains })
}

/// CSV rows: `chain_id, kind, scaled_rank, num_1..num_m, denominator`.
pub fn chains_to_csv(d: &ChainDecomposition) -> String {
    let m = d.chains.first().and_then(|c| c.points.first()).map(|p| p.numerators.len()).unwrap_or(0);
    let mut out = String::from("chain_id,kind,scaled_rank");
    for j in 1..=m {
        out.push_str(&format!(",num_{j}"));
    }
    out.push_str(",denominator\n");
    for (ci, chain) in d.chains.iter().enumerate() {
        let kind = match chain.kind {
            ChainKind::Closed => "closed",
            ChainKind::Open => "open",
        };
        for p in &chain.points {
            out.push_str(&format!("{ci},{kind},{}", p.scaled_rank()));
            for k in &p.numerators {
                out.push_str(&format!(",{k}"));
            }
            out.push_str(&format!(",{}\n", p.denominator));
        }
    }
    out
}
