//! Independent brute-force checks: binomial/q-binomial oracles, exhaustive
//! SCD search on tiny posets, and a second verification code path.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;

use crate::exact::Rat;
use crate::polytope::{LatticePoint, Polytope};
use crate::poset::{ChainDecomposition, ChainKind, DiscreteChain};
use crate::{Error, Result};

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// Coefficients of the Gaussian binomial `[m+n choose m]_q`, via the box
/// recurrence `G(m,n) = G(m,n−1) + q^n·G(m−1,n)`.
pub fn q_binomial(m: usize, n: usize) -> Vec<u64> {
    if m == 0 || n == 0 {
        return vec![1];
    }
    let shorter = q_binomial(m, n - 1); // degree m(n−1)
    let narrower = q_binomial(m - 1, n); // degree (m−1)n
    let mut out = vec![0u64; m * n + 1];
    for (k, c) in shorter.iter().enumerate() {
        out[k] += c;
    }
    for (k, c) in narrower.iter().enumerate() {
        out[k + n] += c;
    }
    out
}

/// Independent nested-loop count of monotone tuples `0 ≤ k_1 ≤ … ≤ k_m ≤ n`.
pub fn count_monotone(m: usize, n: u64) -> u64 {
    fn rec(levels: usize, lo: u64, n: u64) -> u64 {
        if levels == 0 {
            return 1;
        }
        (lo..=n).map(|k| rec(levels - 1, k, n)).sum()
    }
    rec(m, 0, n)
}

/// Backtracking search for a symmetric chain decomposition of `P(n)`.
///
/// Chains are grown from the least uncovered point (which must start its
/// chain), so the longest chains are placed first. Returns `Ok(None)` when
/// the search space is exhausted without a decomposition.
pub fn search_scd(p: &Polytope, n: u64, node_budget: u64, cap: usize) -> Result<Option<ChainDecomposition>> {
    let points = p.lattice_points(n)?;
    if points.len() > cap {
        return Err(Error::PreconditionFailed(format!(
            "poset has {} points, above the search cap {cap}",
            points.len()
        )));
    }
    let target = p.rank()? * Rat::from_integer(BigInt::from(n));
    if !target.denom().eq(&BigInt::from(1)) {
        return Ok(None); // end ranks are integers; no symmetric pairing exists
    }
    let target: i64 = {
        use num_traits::ToPrimitive;
        target.to_integer().to_i64().ok_or_else(|| Error::BadParameter("rank too large".into()))?
    };
    let mut uncovered: BTreeSet<LatticePoint> = points.into_iter().collect();
    let mut chains: Vec<Vec<LatticePoint>> = Vec::new();
    let mut nodes = 0u64;
    let found = extend(&mut uncovered, &mut chains, target, node_budget, &mut nodes)?;
    if !found {
        return Ok(None);
    }
    Ok(Some(ChainDecomposition {
        denominator: n,
        chains: chains.into_iter().map(|pts| DiscreteChain::new(pts, ChainKind::Closed)).collect(),
    }))
}

fn extend(
    uncovered: &mut BTreeSet<LatticePoint>,
    chains: &mut Vec<Vec<LatticePoint>>,
    target: i64,
    budget: u64,
    nodes: &mut u64,
) -> Result<bool> {
    let Some(start) = uncovered.iter().next().cloned() else {
        return Ok(true);
    };
    // The least uncovered point must begin its chain: everything below it is
    // already covered, and chains are disjoint.
    let goal = target - start.scaled_rank();
    if goal < start.scaled_rank() {
        return Ok(false);
    }
    uncovered.remove(&start);
    let mut path = vec![start];
    let ok = grow(uncovered, chains, &mut path, target, budget, nodes)?;
    if !ok {
        uncovered.insert(path.pop().expect("start point"));
    }
    Ok(ok)
}

fn grow(
    uncovered: &mut BTreeSet<LatticePoint>,
    chains: &mut Vec<Vec<LatticePoint>>,
    path: &mut Vec<LatticePoint>,
    target: i64,
    budget: u64,
    nodes: &mut u64,
) -> Result<bool> {
    *nodes += 1;
    if *nodes > budget {
        return Err(Error::BudgetExceeded);
    }
    let tip = path.last().expect("nonempty path").clone();
    let first_rank = path[0].scaled_rank();
    if first_rank + tip.scaled_rank() == target {
        chains.push(path.clone());
        if extend(uncovered, chains, target, budget, nodes)? {
            return Ok(true);
        }
        chains.pop();
    }
    if tip.scaled_rank() < target - first_rank {
        for axis in 0..tip.numerators.len() {
            let mut next = tip.clone();
            next.numerators[axis] += 1;
            if uncovered.remove(&next) {
                path.push(next);
                if grow(uncovered, chains, path, target, budget, nodes)? {
                    return Ok(true);
                }
                let back = path.pop().expect("pushed point");
                uncovered.insert(back);
            }
        }
    }
    Ok(false)
}

/// Re-implements the decomposition verifier along a separate code path:
/// set-based cover/duplicate checks and pairwise rank comparisons instead of
/// single-step scans.
pub fn independent_verify(d: &ChainDecomposition, p: &Polytope) -> Result<bool> {
    let mut all: Vec<&LatticePoint> = Vec::new();
    let mut seen: HashSet<&LatticePoint> = HashSet::new();
    for chain in &d.chains {
        if chain.points.is_empty() {
            return Ok(false);
        }
        for pt in &chain.points {
            if pt.denominator != d.denominator {
                return Ok(false);
            }
            if !seen.insert(pt) {
                return Ok(false);
            }
            all.push(pt);
        }
        // Pairwise: ranks advance exactly with position and the order is
        // coordinatewise monotone.
        for i in 0..chain.points.len() {
            for j in i + 1..chain.points.len() {
                let (a, b) = (&chain.points[i], &chain.points[j]);
                if !a.leq(b) {
                    return Ok(false);
                }
                if b.scaled_rank() - a.scaled_rank() != (j - i) as i64 {
                    return Ok(false);
                }
            }
        }
        let sum = chain.points[0].scaled_rank()
            + chain.points[chain.points.len() - 1].scaled_rank();
        if Rat::from_integer(BigInt::from(sum))
            != p.rank()? * Rat::from_integer(BigInt::from(d.denominator))
        {
            return Ok(false);
        }
    }
    let mut ours: Vec<Vec<i64>> = all.iter().map(|p| p.numerators.clone()).collect();
    ours.sort();
    let lattice: Vec<Vec<i64>> =
        p.lattice_points(d.denominator)?.into_iter().map(|p| p.numerators).collect();
    Ok(ours == lattice)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::order_simplex;
    use crate::poset::rank_profile;

    #[test]
    fn q_binomial_small() {
        assert_eq!(q_binomial(2, 2), vec![1, 1, 2, 1, 1]);
        assert_eq!(q_binomial(0, 7), vec![1]);
        assert_eq!(q_binomial(3, 2), vec![1, 1, 2, 2, 2, 1, 1]);
    }

    #[test]
    fn q_binomial_matches_rank_profiles() {
        for m in 1..=4usize {
            for n in 1..=4u64 {
                let profile = rank_profile(&order_simplex(m), n).unwrap();
                assert_eq!(profile.dense(), q_binomial(m, n as usize), "m={m} n={n}");
            }
        }
    }

    #[test]
    fn monotone_counts() {
        for m in 1..=5usize {
            for n in 1..=6u64 {
                assert_eq!(count_monotone(m, n), binomial(m as u64 + n, m as u64));
            }
        }
    }

    #[test]
    fn search_finds_l22() {
        let l2 = order_simplex(2);
        let scd = search_scd(&l2, 2, 100_000, 60).unwrap().expect("decomposable");
        assert_eq!(scd.chains.len(), 2);
        assert!(crate::poset::verify_scd(&scd, &l2).unwrap().ok());
        assert!(independent_verify(&scd, &l2).unwrap());
    }

    #[test]
    fn search_singleton() {
        // A single middle-rank point: the singleton decomposition.
        let one = Polytope::from_simplex(
            &crate::exact::Simplex::new(vec![crate::exact::Point::from_pairs(&[(1, 2), (1, 2)])])
                .unwrap(),
        )
        .unwrap();
        let scd = search_scd(&one, 2, 1_000, 60).unwrap().expect("singleton");
        assert_eq!(scd.chains.len(), 1);
        assert_eq!(scd.chains[0].points.len(), 1);
    }

    #[test]
    fn independent_verify_rejects_corruption() {
        let l3 = order_simplex(3);
        let scd = search_scd(&l3, 1, 100_000, 60).unwrap().expect("chain of vertices");
        assert!(independent_verify(&scd, &l3).unwrap());
        let mut bad = scd.clone();
        bad.chains[0].points.reverse();
        assert!(!independent_verify(&bad, &l3).unwrap());
    }
}
