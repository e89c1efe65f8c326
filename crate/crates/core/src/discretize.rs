//! The three discretization engines: exact decomposition of `P(n)`, covering
//! chains in `P(kM) ⊇ P(k)`, and the asymptotic walker with trimming.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::conditions::{check_weak, contexts_of, cover_m, decomposition_n};
use crate::exact::{ratio, Point, Rat};
use crate::polytope::LatticePoint;
use crate::poset::{ChainDecomposition, ChainKind, DiscreteChain};
use crate::snake::{GeoDecomposition, Mode, Snake, SnakeKind};
use crate::{Error, Result};

fn chain_kind(kind: SnakeKind) -> ChainKind {
    match kind {
        SnakeKind::Real => ChainKind::Closed,
        SnakeKind::Fake => ChainKind::Open,
    }
}

/// Walks backwards from `p` (inside swipe `wi`) to the chain's starting point
/// on the first turning set, projecting along each swipe direction onto the
/// starting certificate. Every projection offset must be a multiple of `1/n`,
/// which is exactly what the strong hyperplane condition guarantees.
fn walk_back(snake: &Snake, wi: usize, p: &Point, n: u64) -> Result<Point> {
    let mut cur = p.clone();
    for j in (0..=wi).rev() {
        let sw = &snake.swipes[j];
        let a = &sw.start_cert.coeffs[sw.dir];
        if a.is_zero() {
            continue;
        }
        let offset = sw.start_cert.residual(&cur)? / a;
        let scaled = &offset * Rat::from_integer(BigInt::from(n));
        if !scaled.denom().is_one() {
            return Err(Error::NonIntegralStep(crate::exact::fmt_rat(&offset), n));
        }
        let back = -offset;
        cur = cur.axis_step(sw.dir, &back);
    }
    Ok(cur)
}

/// Projects forward from `p` (inside swipe `wi`) through every remaining
/// swipe, returning the breakpoints on the turning sets `T_{wi+1} … T_k`.
fn walk_forward(snake: &Snake, wi: usize, p: &Point) -> Result<Vec<Point>> {
    let mut cur = p.clone();
    let mut out = Vec::new();
    for sw in &snake.swipes[wi..] {
        let a = &sw.end_cert.coeffs[sw.dir];
        if !a.is_zero() {
            let gap = -(sw.end_cert.residual(&cur)? / a);
            cur = cur.axis_step(sw.dir, &gap);
        }
        out.push(cur.clone());
    }
    Ok(out)
}

/// Exact discretization of an exact decomposition satisfying the strong
/// hyperplane condition: every lattice point of `P(n)` is walked back to its
/// chain's starting point, and the chains are the groups.
pub fn decompose(g: &GeoDecomposition, n: u64) -> Result<ChainDecomposition> {
    if g.mode != Mode::Exact {
        return Err(Error::PreconditionFailed("decompose requires an exact decomposition".into()));
    }
    let base = decomposition_n(g)?;
    if n % base != 0 {
        return Err(Error::PreconditionFailed(format!(
            "denominator {n} is not a multiple of the decomposition constant {base}"
        )));
    }
    let points = g.polytope.lattice_points(n)?;
    let keyed: Vec<((usize, LatticePoint), LatticePoint)> = points
        .into_par_iter()
        .map(|lp| {
            let p = lp.to_point();
            let (si, wi) = g
                .snake_locate(&p)?
                .ok_or_else(|| Error::NotCovered(format!("{:?}", lp.numerators)))?;
            let start = walk_back(&g.snakes[si], wi, &p, n)?;
            let key = LatticePoint::from_point(&start, n)
                .ok_or_else(|| Error::NonIntegralStep(format!("{start:?}"), n))?;
            Ok(((si, key), lp))
        })
        .collect::<Result<_>>()?;
    let mut groups: BTreeMap<(usize, LatticePoint), Vec<LatticePoint>> = BTreeMap::new();
    for (key, lp) in keyed {
        groups.entry(key).or_default().push(lp);
    }
    let chains = groups
        .into_iter()
        .map(|((si, _), mut pts)| {
            pts.sort_by_key(|p| p.scaled_rank());
            DiscreteChain::new(pts, chain_kind(g.snakes[si].kind))
        })
        .collect();
    Ok(ChainDecomposition { denominator: n, chains })
}

/// Covering chains: walks the full continuous chain through every point of
/// `P(k)` and discretizes it at denominator `k·M`. All breakpoints must land
/// on the `1/(kM)` lattice; the output chains are pairwise disjoint symmetric
/// chains whose union contains `P(k)`.
pub fn cover(g: &GeoDecomposition, k: u64, override_m: Option<u64>) -> Result<ChainDecomposition> {
    if g.mode != Mode::Exact {
        return Err(Error::PreconditionFailed("cover requires an exact decomposition".into()));
    }
    let m = cover_m(g, override_m)?;
    let km = k.checked_mul(m).ok_or_else(|| Error::BadParameter("kM overflows".into()))?;
    let points = g.polytope.lattice_points(k)?;
    let mut chains = Vec::new();
    let mut seen_starts: std::collections::BTreeSet<(usize, LatticePoint)> = Default::default();
    for lp in points {
        let p = lp.to_point();
        let (si, wi) = g
            .snake_locate(&p)?
            .ok_or_else(|| Error::NotCovered(format!("{:?}", lp.numerators)))?;
        let snake = &g.snakes[si];
        // Breakpoints: chain start, every turning point, chain end.
        let mut breaks = Vec::with_capacity(snake.swipes.len() + 1);
        {
            let mut cur = p.clone();
            let mut back = Vec::new();
            for j in (0..=wi).rev() {
                let sw = &snake.swipes[j];
                let a = &sw.start_cert.coeffs[sw.dir];
                if !a.is_zero() {
                    let gap = -(sw.start_cert.residual(&cur)? / a);
                    cur = cur.axis_step(sw.dir, &gap);
                }
                back.push(cur.clone());
            }
            back.reverse();
            breaks.extend(back);
        }
        breaks.extend(walk_forward(snake, wi, &p)?);
        let lattice_breaks: Vec<LatticePoint> = breaks
            .iter()
            .map(|b| {
                LatticePoint::from_point(b, km).ok_or_else(|| {
                    let mut denom = BigInt::from(1);
                    for c in &b.0 {
                        denom = denom.lcm(c.denom());
                    }
                    Error::BreakpointDenominator { denom: denom.to_u64().unwrap_or(u64::MAX), bound: km }
                })
            })
            .collect::<Result<_>>()?;
        let key = (si, lattice_breaks[0].clone());
        if !seen_starts.insert(key) {
            continue;
        }
        // Expand each hop into unit lattice steps.
        let mut pts: Vec<LatticePoint> = vec![lattice_breaks[0].clone()];
        for (i, pair) in lattice_breaks.windows(2).enumerate() {
            let dir = snake.swipes[i].dir;
            let delta = pair[1].numerators[dir] - pair[0].numerators[dir];
            for step in 1..=delta {
                let mut nums = pair[0].numerators.clone();
                nums[dir] += step;
                pts.push(LatticePoint::new(nums, km));
            }
        }
        if snake.kind == SnakeKind::Fake {
            pts.remove(0);
            pts.pop();
        }
        if pts.is_empty() {
            continue;
        }
        chains.push(DiscreteChain::new(pts, chain_kind(snake.kind)));
    }
    Ok(ChainDecomposition { denominator: km, chains })
}

/// Outcome of the asymptotic walker.
#[derive(Debug)]
pub struct AsymptoticReport {
    pub kept: ChainDecomposition,
    pub discarded_points: usize,
    pub trimmed_points: usize,
    pub total_points: usize,
}

impl AsymptoticReport {
    /// (discarded + trimmed) / total, exactly.
    pub fn loss_fraction(&self) -> Rat {
        ratio((self.discarded_points + self.trimmed_points) as i64, self.total_points.max(1) as i64)
    }
}

/// Builds maximal discrete chains per the weak-condition walker: extend in
/// the current swipe direction until strictly surpassing the ending turning
/// set; continue when the next point lies in the next swipe, else stop just
/// before exiting. Chains that miss the first or last swipe are discarded;
/// the rest are trimmed minimally from the deeper end to restore rank
/// symmetry, up to a cap of four points per swipe.
pub fn asymptotic(g: &GeoDecomposition, k: u64, trim_cap: Option<usize>) -> Result<AsymptoticReport> {
    for ctx in contexts_of(g) {
        if !check_weak(&ctx)? {
            return Err(Error::PreconditionFailed(format!(
                "weak hyperplane condition fails at {}",
                ctx.label
            )));
        }
    }
    if !g.polytope.is_full_dimensional() {
        return Err(Error::PreconditionFailed("asymptotic walker needs a full-dimensional polytope".into()));
    }
    let points = g.polytope.lattice_points(k)?;
    let total = points.len();
    let index: BTreeMap<LatticePoint, usize> =
        points.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let step = ratio(1, k as i64);

    let located: Vec<Option<(usize, usize)>> = points
        .par_iter()
        .map(|lp| g.snake_locate(&lp.to_point()))
        .collect::<Result<_>>()?;
    // The walking state of a point is the LAST swipe containing it: a point
    // on a shared turning set has already turned, exactly as the continuous
    // chain turns there. A chain extends in its swipe direction while the
    // next step stays weakly inside; once the next step's residual flips
    // strictly past the ending certificate, the chain turns early (stopping
    // strictly before crossing, per the backward-walk equivalence) and the
    // next point moves in the following swipe's direction instead.
    let succ: Vec<Option<usize>> = points
        .par_iter()
        .zip(&located)
        .map(|(lp, loc)| {
            let Some((si, _)) = *loc else { return Ok(None) };
            let snake = &g.snakes[si];
            let p = lp.to_point();
            let state = *snake.memberships(&p).last().expect("located point has a membership");
            let sw = &snake.swipes[state];
            let q = p.axis_step(sw.dir, &step);
            let a_e = &sw.end_cert.coeffs[sw.dir];
            let surpassed = if a_e.is_zero() {
                true
            } else {
                (sw.end_cert.residual(&q)? / a_e).is_positive()
            };
            let next = if !surpassed {
                if snake.kind == SnakeKind::Fake && snake.is_halted(state, &q) {
                    None
                } else {
                    index.get(&lattice_step(lp, sw.dir)).copied()
                }
            } else if state + 1 < snake.swipes.len() {
                // Turn early when the next swipe accepts the turned point
                // (the backward construction); fall back to crossing first
                // (the forward construction) when only the crossed point
                // lands inside. Collisions between the two flavours are
                // resolved below.
                let r = p.axis_step(snake.swipes[state + 1].dir, &step);
                if snake.contains_at(state + 1, &r) {
                    index.get(&lattice_step(lp, snake.swipes[state + 1].dir)).copied()
                } else if snake.contains_at(state + 1, &q) {
                    index.get(&lattice_step(lp, sw.dir)).copied()
                } else {
                    None
                }
            } else {
                None
            };
            Ok(next)
        })
        .collect::<Result<_>>()?;

    // Resolve collisions: when two chains step into the same point, keep the
    // predecessor arriving along the target's own swipe direction (the
    // backward walk's canonical choice), breaking remaining ties towards the
    // lattice-least predecessor; the losing chain ends where it stood.
    let mut succ = succ;
    let mut incoming: Vec<Vec<usize>> = vec![Vec::new(); total];
    for (i, s) in succ.iter().enumerate() {
        if let Some(t) = s {
            incoming[*t].push(i);
        }
    }
    for (t, preds) in incoming.iter().enumerate() {
        if preds.len() < 2 {
            continue;
        }
        let tp = points[t].to_point();
        let canonical = located[t].map(|(si, _)| {
            let snake = &g.snakes[si];
            let state = *snake.memberships(&tp).last().expect("covered");
            snake.swipes[state].dir
        });
        let arrival_dir = |p: usize| -> usize {
            points[t]
                .numerators
                .iter()
                .zip(&points[p].numerators)
                .position(|(a, b)| a != b)
                .expect("distinct points")
        };
        let winner = preds
            .iter()
            .copied()
            .min_by_key(|&p| (Some(arrival_dir(p)) != canonical, points[p].numerators.clone()))
            .expect("nonempty");
        for &p in preds {
            if p != winner {
                succ[p] = None;
            }
        }
    }
    let mut has_pred = vec![false; total];
    for &s in succ.iter().flatten() {
        has_pred[s] = true;
    }
    let target: Option<i64> = {
        let t = g.polytope.rank()? * Rat::from_integer(BigInt::from(k));
        t.denom().is_one().then(|| t.to_integer().to_i64()).flatten()
    };

    let mut visited = vec![false; total];
    let mut kept = Vec::new();
    let mut discarded_points = 0usize;
    let mut trimmed_points = 0usize;
    for i in 0..total {
        let Some((si, _)) = located[i] else {
            discarded_points += 1; // not inside any snake
            continue;
        };
        if has_pred[i] {
            continue; // interior of some maximal chain
        }
        let snake = &g.snakes[si];
        let mut idxs = vec![i];
        let mut cur = i;
        while let Some(next) = succ[cur] {
            idxs.push(next);
            cur = next;
        }
        for &j in &idxs {
            if visited[j] {
                return Err(Error::InvalidSnake("walker chains merge".into()));
            }
            visited[j] = true;
        }
        let len = idxs.len();
        // Every point inside a snake lies on a complete continuous chain, so
        // a walker chain severed mid-snake shows up as a rank excess far
        // beyond the cap; small excesses are endpoint fuzz and get trimmed
        // from the deeper end.
        let keep = (|| -> Option<(usize, usize)> {
            let target = target?;
            let sr_first = points[idxs[0]].scaled_rank();
            let sr_last = points[idxs[len - 1]].scaled_rank();
            let excess = sr_first + sr_last - target;
            let need = excess.unsigned_abs() as usize;
            let cap = trim_cap.unwrap_or(4 * snake.swipes.len());
            if need > cap || need >= len {
                return None;
            }
            // Trim the deeper end: the top when the sum overshoots, the
            // bottom when it undershoots.
            Some(if excess >= 0 { (0, len - need) } else { (need, len) })
        })();
        match keep {
            None => discarded_points += len,
            Some((lo, hi)) => {
                trimmed_points += len - (hi - lo);
                let pts: Vec<LatticePoint> = idxs[lo..hi].iter().map(|&j| points[j].clone()).collect();
                kept.push(DiscreteChain::new(pts, chain_kind(snake.kind)));
            }
        }
    }
    // Every covered point must have landed in exactly one maximal chain.
    for i in 0..total {
        if located[i].is_some() && !visited[i] {
            return Err(Error::InvalidSnake("walker missed a covered point".into()));
        }
    }
    Ok(AsymptoticReport {
        kept: ChainDecomposition { denominator: k, chains: kept },
        discarded_points,
        trimmed_points,
        total_points: total,
    })
}

fn lattice_step(lp: &LatticePoint, dir: usize) -> LatticePoint {
    let mut nums = lp.numerators.clone();
    nums[dir] += 1;
    LatticePoint::new(nums, lp.denominator)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::exact::rat;
    use crate::oracle::independent_verify;
    use crate::poset::verify_scd;

    #[test]
    fn decompose_l2_n2_matches_hand_walk() {
        let entry = catalog::get("L2", None).unwrap();
        let d = decompose(&entry.decomposition, 2).unwrap();
        let sets: Vec<Vec<Vec<i64>>> = d
            .chains
            .iter()
            .map(|c| c.points.iter().map(|p| p.numerators.clone()).collect())
            .collect();
        assert!(sets.contains(&vec![vec![0, 0], vec![0, 1], vec![0, 2], vec![1, 2], vec![2, 2]]));
        assert!(sets.contains(&vec![vec![1, 1]]));
        assert_eq!(d.chains.len(), 2);
        assert!(verify_scd(&d, entry.polytope()).unwrap().ok());
    }

    #[test]
    fn decompose_l3_n1_single_chain() {
        let entry = catalog::get("L3", None).unwrap();
        let d = decompose(&entry.decomposition, 1).unwrap();
        assert_eq!(d.chains.len(), 1);
        assert_eq!(d.chains[0].points.len(), 4);
        assert!(verify_scd(&d, entry.polytope()).unwrap().ok());
    }

    #[test]
    fn decompose_l4a_n1_single_chain() {
        let entry = catalog::get("L4a", None).unwrap();
        let d = decompose(&entry.decomposition, 1).unwrap();
        assert_eq!(d.chains.len(), 1);
        assert_eq!(d.chains[0].points.len(), 5);
    }

    #[test]
    fn decompose_l3_small_grid() {
        let entry = catalog::get("L3", None).unwrap();
        for n in 1..=4 {
            let d = decompose(&entry.decomposition, n).unwrap();
            let report = verify_scd(&d, entry.polytope()).unwrap();
            assert!(report.ok(), "n={n}: {report:?}");
            assert!(independent_verify(&d, entry.polytope()).unwrap(), "n={n}");
        }
    }

    #[test]
    fn cover_equals_decompose_when_m_is_one() {
        let entry = catalog::get("L2", None).unwrap();
        let d1 = decompose(&entry.decomposition, 3).unwrap();
        let c1 = cover(&entry.decomposition, 3, entry.cover_m_override).unwrap();
        assert_eq!(c1.denominator, 3);
        let a: Vec<_> = d1.chains.iter().map(|c| c.point_set()).collect();
        let b: Vec<_> = c1.chains.iter().map(|c| c.point_set()).collect();
        for set in &b {
            assert!(a.contains(set));
        }
        assert_eq!(a.len(), b.len());
    }

    #[test]
    fn asymptotic_segment_is_lossless() {
        let entry = catalog::get("segment", None).unwrap();
        let mut g = entry.decomposition;
        g.mode = Mode::Asymptotic;
        for k in [1u64, 2, 5] {
            let rep = asymptotic(&g, k, None).unwrap();
            assert_eq!(rep.discarded_points, 0, "k={k}");
            assert_eq!(rep.trimmed_points, 0);
            assert_eq!(rep.kept.chains.len(), 1);
        }
        let _ = rat(0);
    }
}
