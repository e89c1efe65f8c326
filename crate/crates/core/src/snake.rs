//! Swipes, snakes, and geometric symmetric chain decompositions: membership,
//! halted points, validation, and the mechanical derivation of removed
//! supports that makes ownership of shared turning-set walls unambiguous.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::exact::{support, Hyperplane, PartialSimplex, Point, Rat, Simplex};
use crate::polytope::Polytope;
use crate::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SnakeKind {
    /// Closed chains: endpoints included.
    Real,
    /// Open chains: halted points are excluded from every swipe.
    Fake,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mode {
    Exact,
    Asymptotic,
}

/// A swipe carries its starting turning set onto its ending turning set by
/// translation along `e_dir` by nonnegative, footpoint-dependent amounts.
#[derive(Clone, PartialEq, Debug)]
pub struct Swipe {
    pub dir: usize,
    pub start: PartialSimplex,
    pub end: PartialSimplex,
    pub start_cert: Hyperplane,
    pub end_cert: Hyperplane,
}

/// Where a point sits inside a swipe.
#[derive(Clone, Debug)]
pub struct SwipePosition {
    pub footpoint: Point,
    /// Travel from the footpoint, a nonnegative multiple of `e_dir`.
    pub offset: Rat,
    /// Length of the full segment through the footpoint (`offset ≤ len`).
    pub len: Rat,
}

impl Swipe {
    pub fn new(
        dir: usize,
        start: PartialSimplex,
        end: PartialSimplex,
        start_cert: Hyperplane,
        end_cert: Hyperplane,
    ) -> Result<Self> {
        let sw = Swipe { dir, start, end, start_cert, end_cert };
        sw.check()?;
        Ok(sw)
    }

    fn check(&self) -> Result<()> {
        let sverts = self.start.vertices();
        let everts = self.end.vertices();
        if sverts.len() != everts.len() {
            return Err(Error::InvalidSwipe("turning sets have different vertex counts".into()));
        }
        let mut all_zero = true;
        for (j, (s, e)) in sverts.iter().zip(everts).enumerate() {
            for (axis, (a, b)) in s.0.iter().zip(&e.0).enumerate() {
                if axis == self.dir {
                    if (b - a).is_negative() {
                        return Err(Error::InvalidSwipe(format!(
                            "vertex {j} translates backwards along the swipe direction"
                        )));
                    }
                    if a != b {
                        all_zero = false;
                    }
                } else if a != b {
                    return Err(Error::InvalidSwipe(format!(
                        "vertex {j} moves off the swipe axis"
                    )));
                }
            }
        }
        if self.start.removed != self.end.removed {
            return Err(Error::InvalidSwipe("removed supports do not correspond".into()));
        }
        for (v, vert) in sverts.iter().enumerate() {
            if !self.start_cert.contains(vert) {
                return Err(Error::CertificateMismatch { vertex: v });
            }
        }
        for (v, vert) in everts.iter().enumerate() {
            if !self.end_cert.contains(vert) {
                return Err(Error::CertificateMismatch { vertex: v });
            }
        }
        if !all_zero
            && (self.start_cert.coeffs[self.dir].is_zero()
                || self.end_cert.coeffs[self.dir].is_zero())
        {
            return Err(Error::InvalidSwipe(
                "certificate has zero coefficient on the swipe direction".into(),
            ));
        }
        Ok(())
    }

    /// All vertices coincide: the swipe is its own turning set.
    pub fn is_fully_degenerate(&self) -> bool {
        self.start.vertices() == self.end.vertices()
    }

    /// Membership with position. The footpoint is found by projecting along
    /// `−e_dir` onto the starting certificate.
    pub fn locate(&self, p: &Point) -> Option<SwipePosition> {
        if p.dim() != self.start_cert.dim() {
            return None;
        }
        let a_s = &self.start_cert.coeffs[self.dir];
        if a_s.is_zero() {
            // Fully degenerate: the swipe equals its turning set.
            return self
                .start
                .contains(p)
                .then(|| SwipePosition { footpoint: p.clone(), offset: Rat::zero(), len: Rat::zero() });
        }
        let offset = self.start_cert.residual(p).ok()? / a_s;
        if offset.is_negative() {
            return None;
        }
        let a_e = &self.end_cert.coeffs[self.dir];
        if a_e.is_zero() {
            return None;
        }
        let len = &offset - self.end_cert.residual(p).ok()? / a_e;
        if len < offset {
            return None;
        }
        let minus = -offset.clone();
        let footpoint = p.axis_step(self.dir, &minus);
        if !self.start.contains(&footpoint) {
            return None;
        }
        Some(SwipePosition { footpoint, offset, len })
    }
}

/// A compatible sequence of swipes. Real snakes sweep closed chains; fake
/// snakes sweep open chains and exclude their halted points.
#[derive(Clone, Debug)]
pub struct Snake {
    pub kind: SnakeKind,
    pub swipes: Vec<Swipe>,
}

impl Snake {
    pub fn new(kind: SnakeKind, swipes: Vec<Swipe>) -> Result<Self> {
        if swipes.is_empty() {
            return Err(Error::InvalidSnake("snake with no swipes".into()));
        }
        for w in swipes.windows(2) {
            if w[0].end != w[1].start {
                return Err(Error::InvalidSnake("consecutive swipes do not share a turning set".into()));
            }
            if w[0].end_cert.normalized() != w[1].start_cert.normalized() {
                return Err(Error::InvalidSnake("shared turning set carries two certificates".into()));
            }
        }
        Ok(Snake { kind, swipes })
    }

    /// Turning sets `S_0^s, S_1^s, …, S_k^s, S_k^e` in walk order.
    pub fn turning_sets(&self) -> Vec<&PartialSimplex> {
        let mut out: Vec<&PartialSimplex> = self.swipes.iter().map(|s| &s.start).collect();
        out.push(&self.swipes[self.swipes.len() - 1].end);
        out
    }

    /// One certificate per turning set, in the same order as `turning_sets`.
    pub fn turning_certs(&self) -> Vec<&Hyperplane> {
        let mut out: Vec<&Hyperplane> = self.swipes.iter().map(|s| &s.start_cert).collect();
        out.push(&self.swipes[self.swipes.len() - 1].end_cert);
        out
    }

    /// Def 2.3's halted condition: the point stalls on every turning set up
    /// to (or from) swipe `i`.
    pub fn is_halted(&self, i: usize, p: &Point) -> bool {
        let before = (0..i).all(|k| self.swipes[k].start.contains(p) && self.swipes[k].end.contains(p));
        if before && self.swipes[i].start.contains(p) {
            return true;
        }
        let after = (i + 1..self.swipes.len())
            .all(|k| self.swipes[k].start.contains(p) && self.swipes[k].end.contains(p));
        after && self.swipes[i].end.contains(p)
    }

    /// Membership of `p` in swipe `i`, honoring the snake kind (fake snakes
    /// exclude halted points).
    pub fn contains_at(&self, i: usize, p: &Point) -> bool {
        if self.swipes[i].locate(p).is_none() {
            return false;
        }
        match self.kind {
            SnakeKind::Real => true,
            SnakeKind::Fake => !self.is_halted(i, p),
        }
    }

    /// All swipes containing `p`.
    pub fn memberships(&self, p: &Point) -> Vec<usize> {
        (0..self.swipes.len()).filter(|&i| self.contains_at(i, p)).collect()
    }

    /// Earliest swipe containing `p`.
    pub fn locate(&self, p: &Point) -> Option<usize> {
        (0..self.swipes.len()).find(|&i| self.contains_at(i, p))
    }

    /// The canonical bijection from the closure of the first starting set to
    /// the closure of the last ending set maps vertex `j` to vertex `j`.
    pub fn end_vertex(&self, j: usize) -> &Point {
        &self.swipes[self.swipes.len() - 1].end.vertices()[j]
    }
}

/// A polytope together with snakes claimed to partition it (Exact) or to
/// cover all but a codimension ≥ 1 subset (Asymptotic).
#[derive(Clone, Debug)]
pub struct GeoDecomposition {
    pub polytope: Polytope,
    pub mode: Mode,
    pub snakes: Vec<Snake>,
}

impl GeoDecomposition {
    /// Earliest (snake, swipe) owning `p`; errors when two distinct snakes
    /// claim the point, which witnesses an invalid decomposition.
    pub fn snake_locate(&self, p: &Point) -> Result<Option<(usize, usize)>> {
        let mut found: Option<(usize, usize)> = None;
        for (si, snake) in self.snakes.iter().enumerate() {
            if let Some(wi) = snake.locate(p) {
                if let Some((other, _)) = found {
                    return Err(Error::AmbiguousMembership(other, si));
                }
                found = Some((si, wi));
            }
        }
        Ok(found)
    }

    /// Structural invariant failures, empty when sound.
    pub fn structural_errors(&self) -> Vec<String> {
        let mut errs = Vec::new();
        let rank = match self.polytope.rank() {
            Ok(r) => r,
            Err(e) => return vec![format!("polytope rank: {e}")],
        };
        for (si, snake) in self.snakes.iter().enumerate() {
            for (wi, sw) in snake.swipes.iter().enumerate() {
                if let Err(e) = sw.check() {
                    errs.push(format!("snake {si} swipe {wi}: {e}"));
                }
            }
            for (wi, w) in snake.swipes.windows(2).enumerate() {
                if w[0].end != w[1].start {
                    errs.push(format!("snake {si}: swipes {wi},{} incompatible", wi + 1));
                }
            }
            let first = &snake.swipes[0].start;
            for (j, v) in first.vertices().iter().enumerate() {
                let sum = v.rank() + snake.end_vertex(j).rank();
                if sum != rank {
                    errs.push(format!(
                        "snake {si}: vertex {j} rank sum {} ≠ rank(P) {}",
                        crate::exact::fmt_rat(&sum),
                        crate::exact::fmt_rat(&rank)
                    ));
                }
            }
        }
        errs
    }

    /// Full validation: structural invariants, lattice-sampled partition /
    /// disjointness, seeded random disjointness probes, and (for exact
    /// full-dimensional decompositions with a triangulation) the exact
    /// per-swipe volume identity.
    pub fn validate(&self, sample_denoms: &[u64], seed: u64) -> Result<ValidationReport> {
        let structural = self.structural_errors();
        let mut partition = Vec::new();
        let mut missing_fractions = Vec::new();
        for &n in sample_denoms {
            let points = self.polytope.lattice_points(n)?;
            let total = points.len();
            let mut missing = 0usize;
            for lp in &points {
                let p = lp.to_point();
                let mut owners = Vec::new();
                for (si, snake) in self.snakes.iter().enumerate() {
                    let mems = snake.memberships(&p);
                    if mems.is_empty() {
                        continue;
                    }
                    // Within a snake, memberships must be a consecutive run
                    // sharing the point on each intermediate turning set.
                    let contiguous = mems.windows(2).all(|w| w[1] == w[0] + 1);
                    let on_shared = mems
                        .windows(2)
                        .all(|w| self.snakes[si].swipes[w[0]].end.contains(&p));
                    if !contiguous || !on_shared {
                        partition.push(format!(
                            "n={n}: point {:?} has non-interval membership {mems:?} in snake {si}",
                            lp.numerators
                        ));
                    }
                    owners.push(si);
                }
                match (owners.len(), self.mode) {
                    (0, Mode::Exact) => {
                        partition.push(format!("n={n}: point {:?} uncovered", lp.numerators));
                    }
                    (0, Mode::Asymptotic) => missing += 1,
                    (1, _) => {}
                    _ => partition.push(format!(
                        "n={n}: point {:?} owned by snakes {owners:?}",
                        lp.numerators
                    )),
                }
            }
            missing_fractions.push((n, missing, total));
        }
        // Seeded random probes: no rational point may be claimed by two snakes.
        let mut rng = XorShift::new(seed);
        if let Ok(bbox) = self.polytope.bounding_box() {
            for _ in 0..64 {
                let denom = 2 + (rng.next() % 97);
                let coords: Vec<Rat> = bbox
                    .iter()
                    .map(|(lo, hi)| {
                        let span = hi - lo;
                        let t = crate::exact::ratio((rng.next() % (denom + 1)) as i64, denom as i64);
                        lo + span * t
                    })
                    .collect();
                let p = Point::new(coords);
                let owners: Vec<usize> = self
                    .snakes
                    .iter()
                    .enumerate()
                    .filter(|(_, s)| s.locate(&p).is_some())
                    .map(|(i, _)| i)
                    .collect();
                if owners.len() > 1 {
                    partition.push(format!("random probe {p:?} owned by snakes {owners:?}"));
                }
            }
        }
        let volume_ok = if self.mode == Mode::Exact
            && self.polytope.is_full_dimensional()
            && !self.polytope.triangulation.is_empty()
        {
            Some(crate::volume::swipe_volume_identity(self)?)
        } else {
            None
        };
        Ok(ValidationReport { structural, partition, volume_ok, missing_fractions, mode: self.mode })
    }
}

#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub structural: Vec<String>,
    pub partition: Vec<String>,
    pub volume_ok: Option<bool>,
    /// `(n, uncovered, total)` per sampled denominator (asymptotic mode).
    pub missing_fractions: Vec<(u64, usize, usize)>,
    pub mode: Mode,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        let missing_ok = match self.mode {
            Mode::Exact => self.missing_fractions.iter().all(|&(_, miss, _)| miss == 0),
            Mode::Asymptotic => {
                // The uncovered fraction must not grow as the lattice refines.
                let fracs: Vec<Rat> = self
                    .missing_fractions
                    .iter()
                    .map(|&(_, miss, total)| crate::exact::ratio(miss as i64, total.max(1) as i64))
                    .collect();
                fracs.windows(2).all(|w| w[1] <= w[0])
            }
        };
        self.structural.is_empty()
            && self.partition.is_empty()
            && self.volume_ok.unwrap_or(true)
            && missing_ok
    }
}

/// The unique axis carrying the translation between corresponding vertices
/// of two turning sets. Errors when no axis moves or several do.
pub fn translation_axis(start: &Simplex, end: &Simplex) -> Result<usize> {
    if start.vertices().len() != end.vertices().len() {
        return Err(Error::InvalidSwipe("turning sets have different vertex counts".into()));
    }
    let mut axes = BTreeSet::new();
    for (s, e) in start.vertices().iter().zip(end.vertices()) {
        for (axis, (a, b)) in s.0.iter().zip(&e.0).enumerate() {
            if a != b {
                axes.insert(axis);
            }
        }
    }
    match axes.len() {
        1 => Ok(*axes.iter().next().expect("one axis")),
        0 => Err(Error::InvalidSwipe("no axis carries the translation".into())),
        _ => Err(Error::InvalidSwipe(format!("translation is not along a single axis: {axes:?}"))),
    }
}

/// Mechanically derives `removedSupports`: samples the lattice points of the
/// polytope at the given denominators, finds points owned by two snakes,
/// removes the losing footpoint's support class (earlier snake wins), and
/// propagates removals along swipe bijections until every sample point has a
/// unique owner. Returns whether anything changed.
pub fn derive_removed_supports(
    g: &mut GeoDecomposition,
    sample_denoms: &[u64],
    require_cover: bool,
) -> Result<bool> {
    let mut changed_any = false;
    loop {
        let mut changed = false;
        let mut removals: Vec<(usize, usize, BTreeSet<usize>)> = Vec::new();
        for &n in sample_denoms {
            for lp in g.polytope.lattice_points(n)? {
                let p = lp.to_point();
                let owners: Vec<usize> = g
                    .snakes
                    .iter()
                    .enumerate()
                    .filter(|(_, s)| s.locate(&p).is_some())
                    .map(|(i, _)| i)
                    .collect();
                if owners.is_empty() {
                    if require_cover {
                        return Err(Error::NotCovered(format!("{p:?}")));
                    }
                    continue;
                }
                for &loser in &owners[1..] {
                    let snake = &g.snakes[loser];
                    let wi = snake.locate(&p).expect("owner has a swipe");
                    let pos = snake.swipes[wi].locate(&p).expect("membership located");
                    let lambda = snake.swipes[wi]
                        .start
                        .simplex
                        .barycentric(&pos.footpoint)
                        .expect("footpoint lies in start set");
                    let sup = support(&lambda);
                    if sup.len() == snake.swipes[wi].start.vertices().len() {
                        return Err(Error::InvalidSnake(format!(
                            "snakes overlap on a relative interior at {p:?}"
                        )));
                    }
                    removals.push((loser, wi, sup));
                }
            }
        }
        for (si, wi, sup) in removals {
            if apply_removal(&mut g.snakes[si], wi, &sup)? {
                changed = true;
            }
        }
        // Propagate along swipe bijections until stable: a support removed
        // from one end of a swipe is removed from the other.
        loop {
            let mut moved = false;
            for snake in &mut g.snakes {
                for sw in &mut snake.swipes {
                    let union: BTreeSet<BTreeSet<usize>> =
                        sw.start.removed.union(&sw.end.removed).cloned().collect();
                    if union != sw.start.removed || union != sw.end.removed {
                        check_interior(&union, sw.start.vertices().len())?;
                        sw.start.removed = union.clone();
                        sw.end.removed = union;
                        moved = true;
                    }
                }
                // Shared turning sets between consecutive swipes.
                for i in 1..snake.swipes.len() {
                    let union: BTreeSet<BTreeSet<usize>> = snake.swipes[i - 1]
                        .end
                        .removed
                        .union(&snake.swipes[i].start.removed)
                        .cloned()
                        .collect();
                    if union != snake.swipes[i - 1].end.removed || union != snake.swipes[i].start.removed {
                        check_interior(&union, snake.swipes[i].start.vertices().len())?;
                        snake.swipes[i - 1].end.removed = union.clone();
                        snake.swipes[i].start.removed = union;
                        moved = true;
                    }
                }
            }
            if !moved {
                break;
            }
        }
        changed_any |= changed;
        if !changed {
            return Ok(changed_any);
        }
    }
}

fn apply_removal(snake: &mut Snake, wi: usize, sup: &BTreeSet<usize>) -> Result<bool> {
    if snake.swipes[wi].start.removed.contains(sup) {
        return Ok(false);
    }
    check_interior(&{
        let mut r = snake.swipes[wi].start.removed.clone();
        r.insert(sup.clone());
        r
    }, snake.swipes[wi].start.vertices().len())?;
    snake.swipes[wi].start.removed.insert(sup.clone());
    if wi > 0 {
        snake.swipes[wi - 1].end.removed.insert(sup.clone());
    }
    Ok(true)
}

fn check_interior(removed: &BTreeSet<BTreeSet<usize>>, nverts: usize) -> Result<()> {
    let full: BTreeSet<usize> = (0..nverts).collect();
    if removed.contains(&full) {
        return Err(Error::InvalidPartialSimplex("derivation removed the relative interior".into()));
    }
    Ok(())
}

pub(crate) struct XorShift(u64);

impl XorShift {
    pub fn new(seed: u64) -> Self {
        XorShift(seed.wrapping_mul(2685821657736338717).max(1))
    }

    pub fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};

    /// The L(2) decomposition: one real snake, two swipes fanning the triangle
    /// around the midpoint of the long edge.
    pub fn l2_geo() -> GeoDecomposition {
        crate::catalog::get("L2", None).expect("catalog L2").decomposition
    }

    #[test]
    fn swipe_locate_l2() {
        let g = l2_geo();
        let sw = &g.snakes[0].swipes[0];
        // Interior point of the first swipe.
        let p = Point::from_pairs(&[(0, 1), (3, 4)]);
        let pos = sw.locate(&p).expect("inside");
        assert_eq!(pos.footpoint, Point::from_pairs(&[(0, 1), (0, 1)]));
        assert_eq!(pos.offset, ratio(3, 4));
        assert_eq!(pos.len, rat(1));
        // The apex sits on a degenerate segment.
        let apex = Point::from_pairs(&[(1, 2), (1, 2)]);
        let pos = sw.locate(&apex).expect("apex");
        assert_eq!(pos.offset, rat(0));
        assert_eq!(pos.len, rat(0));
        // Off-snake point: its footpoint misses the starting set.
        assert!(sw.locate(&Point::from_pairs(&[(3, 4), (1, 4)])).is_none());
    }

    #[test]
    fn snake_locate_ties_resolve_to_earlier_swipe() {
        let g = l2_geo();
        let p = Point::from_pairs(&[(0, 1), (1, 2)]);
        assert_eq!(g.snake_locate(&p).unwrap(), Some((0, 0)));
        // A point on the shared turning set belongs to the earlier swipe.
        let shared = Point::from_pairs(&[(0, 1), (1, 1)]);
        assert_eq!(g.snake_locate(&shared).unwrap(), Some((0, 0)));
    }

    #[test]
    fn validate_l2() {
        let g = l2_geo();
        let report = g.validate(&[1, 2, 3, 4], 7).unwrap();
        assert!(report.ok(), "{report:?}");
    }

    #[test]
    fn perturbed_symmetry_fails() {
        let mut g = l2_geo();
        // Nudge one vertex of the last ending set off its symmetric position:
        // rebuild the swipe with a stretched end segment.
        let sw = &mut g.snakes[0].swipes[1];
        let mut verts = sw.end.vertices().to_vec();
        verts[0] = Point::from_pairs(&[(1, 1), (1, 1)]);
        verts[1] = Point::from_pairs(&[(3, 4), (3, 4)]);
        sw.end = PartialSimplex::closed(Simplex::new(verts).unwrap());
        let report = g.validate(&[2], 7).unwrap();
        assert!(!report.ok());
        assert!(!report.structural.is_empty());
    }

    #[test]
    fn translation_axis_detection() {
        let a = Simplex::from_pairs(&[&[(0, 1), (0, 1)], &[(1, 2), (1, 2)]]).unwrap();
        let b = Simplex::from_pairs(&[&[(0, 1), (1, 1)], &[(1, 2), (1, 2)]]).unwrap();
        assert_eq!(translation_axis(&a, &b).unwrap(), 1);
        let c = Simplex::from_pairs(&[&[(1, 1), (0, 1)], &[(1, 2), (1, 2)]]).unwrap();
        assert!(translation_axis(&b, &c).is_err());
        assert!(translation_axis(&a, &a).is_err());
    }
}
