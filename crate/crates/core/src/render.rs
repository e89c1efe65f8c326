//! Deterministic SVG rendering of two-dimensional decompositions and chain
//! diagrams: thick turning sets, arrowed swipe flow, lattice dots. Higher
//! dimensions render through a pair of exact projection functionals.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::exact::{Point, Rat};
use crate::polytope::Polytope;
use crate::poset::ChainDecomposition;
use crate::snake::GeoDecomposition;
use crate::{Error, Result};

/// Two exact linear functionals mapping the ambient space to the drawing
/// plane.
#[derive(Clone, Debug)]
pub struct ViewSpec {
    pub rows: [Vec<Rat>; 2],
}

impl ViewSpec {
    pub fn identity2() -> Self {
        ViewSpec {
            rows: [vec![Rat::from_integer(1.into()), Rat::zero()], vec![Rat::zero(), Rat::from_integer(1.into())]],
        }
    }

    fn project(&self, p: &Point) -> (Rat, Rat) {
        let dot = |row: &Vec<Rat>| row.iter().zip(&p.0).fold(Rat::zero(), |acc, (a, x)| acc + a * x);
        (dot(&self.rows[0]), dot(&self.rows[1]))
    }
}

fn resolve_view(dim: usize, view: Option<&ViewSpec>) -> Result<ViewSpec> {
    match view {
        Some(v) => {
            if v.rows[0].len() != dim || v.rows[1].len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: v.rows[0].len() });
            }
            Ok(v.clone())
        }
        None if dim == 2 => Ok(ViewSpec::identity2()),
        None => Err(Error::PreconditionFailed(
            "ambient dimension is not 2; supply a view (two projection functionals)".into(),
        )),
    }
}

/// Exact two-decimal rendering of a rational, no floats involved.
fn dec(r: &Rat) -> String {
    let scaled = r * Rat::from_integer(BigInt::from(100));
    let rounded = scaled.round().to_integer();
    let neg = rounded.is_negative();
    let abs = rounded.magnitude().clone();
    let whole = &abs / 100u32;
    let frac = &abs % 100u32;
    format!("{}{}.{:02}", if neg { "-" } else { "" }, whole, frac)
}

struct Canvas {
    min_x: Rat,
    min_y: Rat,
    scale: Rat,
    height: Rat,
    body: String,
}

impl Canvas {
    fn new(points: &[(Rat, Rat)]) -> Canvas {
        let mut min_x = points[0].0.clone();
        let mut max_x = points[0].0.clone();
        let mut min_y = points[0].1.clone();
        let mut max_y = points[0].1.clone();
        for (x, y) in points {
            if x < &min_x {
                min_x = x.clone();
            }
            if x > &max_x {
                max_x = x.clone();
            }
            if y < &min_y {
                min_y = y.clone();
            }
            if y > &max_y {
                max_y = y.clone();
            }
        }
        let span_x = &max_x - &min_x;
        let span_y = &max_y - &min_y;
        let span = if span_x > span_y { span_x } else { span_y };
        let span = if span.is_zero() { Rat::from_integer(1.into()) } else { span };
        let scale = Rat::from_integer(BigInt::from(400)) / span;
        let height = (&max_y - &min_y) * &scale;
        Canvas { min_x, min_y, scale, height, body: String::new() }
    }

    fn place(&self, p: &(Rat, Rat)) -> (String, String) {
        let x = (&p.0 - &self.min_x) * &self.scale;
        let y = &self.height - (&p.1 - &self.min_y) * &self.scale;
        (dec(&x), dec(&y))
    }

    fn line(&mut self, a: &(Rat, Rat), b: &(Rat, Rat), class: &str) {
        let (x1, y1) = self.place(a);
        let (x2, y2) = self.place(b);
        self.body.push_str(&format!(
            "<line x1=\"{x1}\" y1=\"{y1}\" x2=\"{x2}\" y2=\"{y2}\" class=\"{class}\"/>\n"
        ));
    }

    fn dot(&mut self, a: &(Rat, Rat)) {
        let (cx, cy) = self.place(a);
        self.body.push_str(&format!("<circle cx=\"{cx}\" cy=\"{cy}\" r=\"2.5\" class=\"pt\"/>\n"));
    }

    fn finish(self) -> String {
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-20 -20 440 440\">\n<defs>\n<marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" markerWidth=\"6\" markerHeight=\"6\" orient=\"auto-start-reverse\">\n<path d=\"M 0 0 L 10 5 L 0 10 z\"/>\n</marker>\n</defs>\n<style>\n.turning {{ stroke: #000; stroke-width: 4; }}\n.flow {{ stroke: #555; stroke-width: 1; marker-end: url(#arrow); }}\n.chain {{ stroke: #000; stroke-width: 2; fill: none; }}\n.pt {{ fill: #000; }}\n.edge {{ stroke: #bbb; stroke-width: 0.7; }}\n</style>\n{}</svg>\n",
            self.body
        )
    }
}

/// Renders a geometric decomposition: turning sets as thick segments, the
/// swipe flow as vertex-to-vertex arrows, and the polytope's vertex skeleton
/// in the background.
pub fn render_geo(g: &GeoDecomposition, view: Option<&ViewSpec>) -> Result<String> {
    let view = resolve_view(g.polytope.dim, view)?;
    let mut projected: Vec<(Rat, Rat)> = Vec::new();
    for v in &g.polytope.vertices {
        projected.push(view.project(v));
    }
    for snake in &g.snakes {
        for sw in &snake.swipes {
            for v in sw.start.vertices().iter().chain(sw.end.vertices()) {
                projected.push(view.project(v));
            }
        }
    }
    if projected.is_empty() {
        return Err(Error::EmptyPolytope);
    }
    let mut canvas = Canvas::new(&projected);
    // Background: pairwise vertex skeleton of the polytope.
    for (i, a) in g.polytope.vertices.iter().enumerate() {
        for b in g.polytope.vertices.iter().skip(i + 1) {
            canvas.line(&view.project(a), &view.project(b), "edge");
        }
    }
    for snake in &g.snakes {
        for sw in &snake.swipes {
            for (a, b) in sw.start.vertices().iter().zip(sw.end.vertices()) {
                if a != b {
                    canvas.line(&view.project(a), &view.project(b), "flow");
                }
            }
            let bs = sw.start.simplex.barycenter();
            let be = sw.end.simplex.barycenter();
            if bs != be {
                canvas.line(&view.project(&bs), &view.project(&be), "flow");
            }
        }
        for set in snake.turning_sets() {
            let verts = set.vertices();
            for (i, a) in verts.iter().enumerate() {
                for b in verts.iter().skip(i + 1) {
                    canvas.line(&view.project(a), &view.project(b), "turning");
                }
            }
            if verts.len() == 1 {
                canvas.dot(&view.project(&verts[0]));
            }
        }
    }
    Ok(canvas.finish())
}

/// Renders a chain decomposition as dots joined by chain polylines.
pub fn render_chains(
    d: &ChainDecomposition,
    polytope: Option<&Polytope>,
    view: Option<&ViewSpec>,
) -> Result<String> {
    let dim = d
        .chains
        .first()
        .and_then(|c| c.points.first())
        .map(|p| p.numerators.len())
        .ok_or(Error::EmptyChain)?;
    let view = resolve_view(dim, view)?;
    let mut projected = Vec::new();
    for chain in &d.chains {
        for p in &chain.points {
            projected.push(view.project(&p.to_point()));
        }
    }
    if let Some(p) = polytope {
        for v in &p.vertices {
            projected.push(view.project(v));
        }
    }
    let mut canvas = Canvas::new(&projected);
    if let Some(p) = polytope {
        for (i, a) in p.vertices.iter().enumerate() {
            for b in p.vertices.iter().skip(i + 1) {
                canvas.line(&view.project(a), &view.project(b), "edge");
            }
        }
    }
    for chain in &d.chains {
        for w in chain.points.windows(2) {
            canvas.line(&view.project(&w[0].to_point()), &view.project(&w[1].to_point()), "chain");
        }
        for p in &chain.points {
            canvas.dot(&view.project(&p.to_point()));
        }
    }
    Ok(canvas.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn render_is_deterministic() {
        let g = catalog::get("L2", None).unwrap().decomposition;
        let a = render_geo(&g, None).unwrap();
        let b = render_geo(&g, None).unwrap();
        assert_eq!(a, b);
        // Three thick turning segments for the L(2) fan.
        assert_eq!(a.matches("class=\"turning\"").count(), 3);
    }

    #[test]
    fn render_chain_grid() {
        let entry = catalog::get("L2", None).unwrap();
        let d = crate::discretize::decompose(&entry.decomposition, 4).unwrap();
        let svg = render_chains(&d, Some(entry.polytope()), None).unwrap();
        assert!(svg.contains("circle"));
    }

    #[test]
    fn higher_dim_requires_view() {
        let g = catalog::get("L3", None).unwrap().decomposition;
        assert!(render_geo(&g, None).is_err());
        // The drawing plane of the tetrahedron figures: two exact functionals.
        let view = ViewSpec {
            rows: [
                vec![crate::exact::rat(1), crate::exact::rat(0), crate::exact::rat(2)],
                vec![crate::exact::rat(0), crate::exact::rat(1), crate::exact::ratio(1, 2)],
            ],
        };
        let svg = render_geo(&g, Some(&view)).unwrap();
        assert!(svg.contains("turning"));
    }
}
