//! The discrete poset `P(n)`: chains, rank profiles, and the symmetric
//! chain decomposition verifier.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;

use crate::exact::Rat;
use crate::polytope::{LatticePoint, Polytope};
use crate::{Error, Result};

/// Closed chains contain both endpoints; open chains omit two virtual
/// endpoints that live on the turning sets. The tag records provenance —
/// at the discrete level the symmetry identity is the same either way,
/// because the missing virtual endpoints shift the end ranks by −1/n and
/// +1/n, which cancel.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ChainKind {
    Closed,
    Open,
}

/// An ordered saturated chain of lattice points.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiscreteChain {
    pub points: Vec<LatticePoint>,
    pub kind: ChainKind,
}

impl DiscreteChain {
    pub fn new(points: Vec<LatticePoint>, kind: ChainKind) -> Self {
        DiscreteChain { points, kind }
    }

    pub fn first(&self) -> Result<&LatticePoint> {
        self.points.first().ok_or(Error::EmptyChain)
    }

    pub fn last(&self) -> Result<&LatticePoint> {
        self.points.last().ok_or(Error::EmptyChain)
    }

    /// Chain equality is point-set equality; order is recoverable from ranks.
    pub fn point_set(&self) -> BTreeSet<LatticePoint> {
        self.points.iter().cloned().collect()
    }
}

/// A claimed symmetric chain decomposition of `P(n)`.
#[derive(Clone, Debug)]
pub struct ChainDecomposition {
    pub denominator: u64,
    pub chains: Vec<DiscreteChain>,
}

impl ChainDecomposition {
    pub fn total_points(&self) -> usize {
        self.chains.iter().map(|c| c.points.len()).sum()
    }
}

/// Histogram of `n·rank` over the lattice points.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RankProfile {
    pub counts: BTreeMap<i64, u64>,
}

impl RankProfile {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// The width of the poset: the largest rank-slice size.
    pub fn max_count(&self) -> u64 {
        self.counts.values().copied().max().unwrap_or(0)
    }

    pub fn is_palindromic(&self) -> bool {
        let v: Vec<u64> = self.dense();
        v.iter().eq(v.iter().rev())
    }

    /// Counts on the contiguous scaled-rank range, zeros filled in.
    pub fn dense(&self) -> Vec<u64> {
        let (Some((&lo, _)), Some((&hi, _))) =
            (self.counts.first_key_value(), self.counts.last_key_value())
        else {
            return Vec::new();
        };
        (lo..=hi).map(|r| self.counts.get(&r).copied().unwrap_or(0)).collect()
    }
}

pub fn rank_profile(p: &Polytope, n: u64) -> Result<RankProfile> {
    let mut counts = BTreeMap::new();
    for lp in p.lattice_points(n)? {
        *counts.entry(lp.scaled_rank()).or_insert(0) += 1;
    }
    Ok(RankProfile { counts })
}

/// `n · rank(P)` as an exact rational (integral for the catalog polytopes,
/// but not necessarily for stretched families).
fn scaled_polytope_rank(p: &Polytope, n: u64) -> Result<Rat> {
    Ok(p.rank()? * Rat::from_integer(BigInt::from(n)))
}

fn saturated_step(a: &LatticePoint, b: &LatticePoint) -> bool {
    if a.denominator != b.denominator || a.numerators.len() != b.numerators.len() {
        return false;
    }
    let mut bumped = 0usize;
    for (x, y) in a.numerators.iter().zip(&b.numerators) {
        match y - x {
            0 => {}
            1 => bumped += 1,
            _ => return false,
        }
    }
    bumped == 1
}

/// A chain is symmetric when the first and last ranks sum to the rank of the
/// polytope and every step is a saturated cover.
pub fn is_symmetric_chain(c: &DiscreteChain, p: &Polytope) -> Result<bool> {
    let first = c.first()?;
    let last = c.last()?;
    let n = first.denominator;
    for w in c.points.windows(2) {
        if !saturated_step(&w[0], &w[1]) {
            return Ok(false);
        }
    }
    let sum = Rat::from_integer(BigInt::from(first.scaled_rank() + last.scaled_rank()));
    Ok(sum == scaled_polytope_rank(p, n)?)
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub covers: bool,
    pub disjoint: bool,
    pub all_saturated: bool,
    pub all_symmetric: bool,
    /// First offending chain index / point, when some check fails.
    pub offender: Option<String>,
}

impl VerificationReport {
    pub fn ok(&self) -> bool {
        self.covers && self.disjoint && self.all_saturated && self.all_symmetric
    }
}

/// Checks that the chains partition `P(n)` into saturated symmetric chains.
pub fn verify_scd(d: &ChainDecomposition, p: &Polytope) -> Result<VerificationReport> {
    let lattice: BTreeSet<LatticePoint> = p.lattice_points(d.denominator)?.into_iter().collect();
    let target = scaled_polytope_rank(p, d.denominator)?;

    let mut covers = true;
    let mut disjoint = true;
    let mut all_saturated = true;
    let mut all_symmetric = true;
    let mut offender: Option<String> = None;
    let note = |flag: &mut bool, msg: String, offender: &mut Option<String>| {
        *flag = false;
        if offender.is_none() {
            *offender = Some(msg);
        }
    };

    let mut seen: BTreeSet<LatticePoint> = BTreeSet::new();
    for (ci, chain) in d.chains.iter().enumerate() {
        if chain.points.is_empty() {
            note(&mut all_saturated, format!("chain {ci} is empty"), &mut offender);
            continue;
        }
        for pt in &chain.points {
            if pt.denominator != d.denominator || !lattice.contains(pt) {
                note(&mut covers, format!("chain {ci} has foreign point {:?}", pt.numerators), &mut offender);
            }
            if !seen.insert(pt.clone()) {
                note(&mut disjoint, format!("point {:?} in two chains", pt.numerators), &mut offender);
            }
        }
        for w in chain.points.windows(2) {
            if !saturated_step(&w[0], &w[1]) {
                note(
                    &mut all_saturated,
                    format!("chain {ci} skips a cover between {:?} and {:?}", w[0].numerators, w[1].numerators),
                    &mut offender,
                );
                break;
            }
        }
        let sum = chain.points[0].scaled_rank() + chain.points[chain.points.len() - 1].scaled_rank();
        if Rat::from_integer(BigInt::from(sum)) != target {
            note(&mut all_symmetric, format!("chain {ci} has end rank sum {sum}"), &mut offender);
        }
    }
    if let Some(missing) = lattice.difference(&seen).next() {
        note(&mut covers, format!("point {:?} not covered", missing.numerators), &mut offender);
    }
    Ok(VerificationReport { covers, disjoint, all_saturated, all_symmetric, offender })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::polytope::order_simplex;

    fn lp(nums: &[i64], n: u64) -> LatticePoint {
        LatticePoint::new(nums.to_vec(), n)
    }

    #[test]
    fn symmetric_chain_examples() {
        let l2 = order_simplex(2);
        let chain = DiscreteChain::new(
            vec![lp(&[0, 0], 2), lp(&[0, 1], 2), lp(&[0, 2], 2), lp(&[1, 2], 2), lp(&[2, 2], 2)],
            ChainKind::Closed,
        );
        assert!(is_symmetric_chain(&chain, &l2).unwrap());
        let singleton = DiscreteChain::new(vec![lp(&[1, 1], 2)], ChainKind::Closed);
        assert!(is_symmetric_chain(&singleton, &l2).unwrap());
        let skipping = DiscreteChain::new(vec![lp(&[0, 0], 2), lp(&[0, 2], 2)], ChainKind::Closed);
        assert!(!is_symmetric_chain(&skipping, &l2).unwrap());
        let empty = DiscreteChain::new(vec![], ChainKind::Closed);
        assert!(is_symmetric_chain(&empty, &l2).is_err());
    }

    #[test]
    fn verify_scd_l22() {
        let l2 = order_simplex(2);
        let big = DiscreteChain::new(
            vec![lp(&[0, 0], 2), lp(&[0, 1], 2), lp(&[0, 2], 2), lp(&[1, 2], 2), lp(&[2, 2], 2)],
            ChainKind::Closed,
        );
        let mid = DiscreteChain::new(vec![lp(&[1, 1], 2)], ChainKind::Closed);
        let good = ChainDecomposition { denominator: 2, chains: vec![big.clone(), mid] };
        let report = verify_scd(&good, &l2).unwrap();
        assert!(report.ok(), "{report:?}");

        let incomplete = ChainDecomposition { denominator: 2, chains: vec![big] };
        let report = verify_scd(&incomplete, &l2).unwrap();
        assert!(!report.covers);
        assert_eq!(report.offender.as_deref(), Some("point [1, 1] not covered"));
    }

    #[test]
    fn verify_scd_l31_single_chain() {
        let l3 = order_simplex(3);
        let chain = DiscreteChain::new(
            vec![lp(&[0, 0, 0], 1), lp(&[0, 0, 1], 1), lp(&[0, 1, 1], 1), lp(&[1, 1, 1], 1)],
            ChainKind::Closed,
        );
        let d = ChainDecomposition { denominator: 1, chains: vec![chain] };
        assert!(verify_scd(&d, &l3).unwrap().ok());
    }

    #[test]
    fn rank_profiles() {
        let l2 = order_simplex(2);
        assert_eq!(rank_profile(&l2, 2).unwrap().dense(), vec![1, 1, 2, 1, 1]);
        let l3 = order_simplex(3);
        assert_eq!(rank_profile(&l3, 2).unwrap().dense(), vec![1, 1, 2, 2, 2, 1, 1]);
        let l4 = order_simplex(4);
        assert_eq!(rank_profile(&l4, 1).unwrap().dense(), vec![1, 1, 1, 1, 1]);
        assert!(rank_profile(&l4, 3).unwrap().is_palindromic());
        assert_eq!(rank_profile(&l2, 2).unwrap().total(), 6);
        let _ = rat(0);
    }
}
