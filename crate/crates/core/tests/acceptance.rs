//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

use std::collections::BTreeSet;

use scdforge::catalog;
use scdforge::conditions::{check_strong, check_weak};
use scdforge::construct::{cone_off, product_discrete, product_geometric, ConeSpec};
use scdforge::discretize::{asymptotic, cover, decompose};
use scdforge::exact::{rat, ratio, Hyperplane, Point, Rat, Simplex};
use scdforge::oracle::{binomial, independent_verify, q_binomial};
use scdforge::polytope::{product_polytope, LatticePoint, Polytope};
use scdforge::poset::{rank_profile, verify_scd};
use scdforge::snake::{GeoDecomposition, Mode, Snake, SnakeKind, Swipe};
use scdforge::volume;
use scdforge::Error;

fn criterion(number: u32, name: &str, ok: bool, detail: &str) {
    println!(
        "acceptance {number} [{}] {name}{}",
        if ok { "PASS" } else { "FAIL" },
        if detail.is_empty() { String::new() } else { format!(" — {detail}") }
    );
    assert!(ok, "criterion {number} ({name}) failed: {detail}");
}

#[test]
fn criterion_1_exact_discretization_grid() {
    let grid: Vec<(&str, u64)> = [("L2", 12u64), ("L3", 10), ("L4a", 6), ("L4b", 6)].into();
    let mut detail = String::new();
    let mut ok = true;
    for (id, max_n) in grid {
        let entry = catalog::get(id, None).unwrap();
        for n in 1..=max_n {
            let d = decompose(&entry.decomposition, n).unwrap();
            let report = verify_scd(&d, entry.polytope()).unwrap();
            let indep = independent_verify(&d, entry.polytope()).unwrap();
            let width = rank_profile(entry.polytope(), n).unwrap().max_count();
            let counts = d.chains.len() as u64 == width;
            if !(report.ok() && indep && counts) {
                ok = false;
                detail = format!(
                    "{id} n={n}: verify={:?} independent={indep} chains={} width={width}",
                    report.offender,
                    d.chains.len()
                );
            }
        }
    }
    criterion(1, "exact discretization grid", ok, &detail);
}

#[test]
fn criterion_2_counting_and_rank_profiles() {
    let mut ok = true;
    let mut detail = String::new();
    for m in 1..=5usize {
        let l = scdforge::polytope::order_simplex(m);
        for n in 1..=8u64 {
            let pts = l.lattice_points(n).unwrap();
            let expected = binomial(m as u64 + n, m as u64);
            if pts.len() as u64 != expected {
                ok = false;
                detail = format!("|L({m},{n})| = {} ≠ {expected}", pts.len());
            }
            let profile = rank_profile(&l, n).unwrap();
            if profile.dense() != q_binomial(m, n as usize) {
                ok = false;
                detail = format!("rank profile of L({m},{n}) off the q-binomial");
            }
        }
    }
    criterion(2, "lattice counts and q-binomial rank profiles", ok, &detail);
}

#[test]
fn criterion_3_l5_covering() {
    let entry = catalog::get("L5", None).unwrap();
    let mut ok = true;
    let mut detail = String::new();
    for k in [1u64, 2] {
        // `cover` verifies internally that every breakpoint lands on the
        // 1/(27k) lattice, erroring otherwise.
        let d = cover(&entry.decomposition, k, entry.cover_m_override).unwrap();
        if d.denominator != 27 * k {
            ok = false;
            detail = format!("k={k}: denominator {}", d.denominator);
        }
        let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
        for chain in &d.chains {
            if !scdforge::poset::is_symmetric_chain(chain, entry.polytope()).unwrap() {
                ok = false;
                detail = format!("k={k}: asymmetric chain");
            }
            for p in &chain.points {
                if !seen.insert(p.numerators.clone()) {
                    ok = false;
                    detail = format!("k={k}: chains intersect at {:?}", p.numerators);
                }
            }
        }
        let base = entry.polytope().lattice_points(k).unwrap();
        if base.len() as u64 != binomial(5 + k, 5) {
            ok = false;
            detail = format!("k={k}: |L(5,{k})| = {}", base.len());
        }
        for p in &base {
            let scaled: Vec<i64> = p.numerators.iter().map(|x| x * 27).collect();
            if !seen.contains(&scaled) {
                ok = false;
                detail = format!("k={k}: point {:?} not covered", p.numerators);
            }
        }
    }
    criterion(3, "L(5) covering chains in L(5,27k)", ok, &detail);
}

#[test]
fn criterion_4_condition_tables() {
    let mut ok = true;
    let mut detail = String::new();
    for id in ["L2", "L3", "L4a", "L4b"] {
        let entry = catalog::get(id, None).unwrap();
        for ctx in &entry.certificates {
            let strong = check_strong(ctx).unwrap();
            if !(strong.satisfied && strong.complexity == Some(1)) {
                ok = false;
                detail = format!("{id} {}: strong condition not complexity-1", ctx.label);
            }
        }
    }
    let l5 = catalog::get("L5", None).unwrap();
    let mut strong_failures = 0usize;
    let mut weak_failures = 0usize;
    for ctx in &l5.certificates {
        let strong = check_strong(ctx).unwrap();
        let weak = check_weak(ctx).unwrap();
        let (ints, _) = ctx.certificate.scaled_integer();
        let has_three = ints.iter().any(|c| c.magnitude() == &3u32.into());
        if has_three {
            // The documented failing rows carry a ±3 on an adjacent direction
            // whenever the set meets a swipe along d; both conditions break
            // on at least one such context.
            if !strong.satisfied {
                strong_failures += 1;
            }
            if !weak {
                weak_failures += 1;
            }
        } else if !strong.satisfied || !weak {
            ok = false;
            detail = format!("L5 {}: unexpected failure on a ±1 row", ctx.label);
        }
    }
    if strong_failures == 0 || weak_failures == 0 {
        ok = false;
        detail = format!("L5 failures: strong {strong_failures}, weak {weak_failures}");
    }
    for (n, d) in [(1i64, 1i64), (3, 2), (2, 1), (3, 1)] {
        let t = ratio(n, d);
        let entry = catalog::get("Pt", Some(&t)).unwrap();
        for ctx in &entry.certificates {
            if !check_weak(ctx).unwrap() {
                ok = false;
                detail = format!("Pt t={n}/{d} {}: weak condition fails", ctx.label);
            }
        }
    }
    criterion(4, "hyperplane condition tables", ok, &detail);
}

#[test]
fn criterion_5_coning_round_trip() {
    let mut ok = true;
    let mut detail = String::new();
    let cases = [("projL2", "L2", vec![(1i64, 2i64), (1, 2)]), ("projL3", "L3", vec![(1, 4), (1, 2), (3, 4)])];
    for (proj_id, id, apex) in cases {
        let proj = catalog::get(proj_id, None).unwrap();
        let spec = ConeSpec {
            apex: Point::from_pairs(&apex),
            base: proj.decomposition,
            apex_owner: 0,
        };
        let coned = cone_off(&spec).unwrap();
        let target = catalog::get(id, None).unwrap();
        // Structural equality of the snakes.
        let same = coned.snakes.len() == target.decomposition.snakes.len()
            && coned.snakes.iter().zip(&target.decomposition.snakes).all(|(a, b)| {
                a.kind == b.kind
                    && a.swipes.len() == b.swipes.len()
                    && a.swipes.iter().zip(&b.swipes).all(|(x, y)| {
                        x.dir == y.dir
                            && x.start == y.start
                            && x.end == y.end
                            && x.start_cert.normalized() == y.start_cert.normalized()
                            && x.end_cert.normalized() == y.end_cert.normalized()
                    })
            });
        if !same {
            ok = false;
            detail = format!("cone({proj_id}) differs structurally from {id}");
        }
        for n in 1..=4u64 {
            let a = decompose(&coned, n).unwrap();
            let b = decompose(&target.decomposition, n).unwrap();
            let sa: BTreeSet<BTreeSet<LatticePoint>> = a.chains.iter().map(|c| c.point_set()).collect();
            let sb: BTreeSet<BTreeSet<LatticePoint>> = b.chains.iter().map(|c| c.point_set()).collect();
            if sa != sb {
                ok = false;
                detail = format!("cone({proj_id}) discretizes differently at n={n}");
            }
        }
    }
    criterion(5, "coning round-trips reproduce the catalog", ok, &detail);
}

#[test]
fn criterion_6_volume_identities() {
    let mut ok = true;
    let mut detail = String::new();
    let expect_totals = [("L2", ratio(1, 2)), ("L3", ratio(1, 6)), ("L4a", ratio(1, 24)), ("L4b", ratio(1, 24))];
    for (id, total) in expect_totals {
        let entry = catalog::get(id, None).unwrap();
        let g = &entry.decomposition;
        if !volume::theorem63_check(g).unwrap() {
            ok = false;
            detail = format!("{id}: starting-set slice identity fails");
        }
        if !volume::theorem64_check(g).unwrap() {
            ok = false;
            detail = format!("{id}: volume identity fails");
        }
        let computed = volume::theorem64_total(g).unwrap();
        if computed != total {
            ok = false;
            detail = format!("{id}: total {} ≠ {}", scdforge::exact::fmt_rat(&computed), scdforge::exact::fmt_rat(&total));
        }
        // Refined identities at vertex ranks and midpoints up to the middle.
        let mid = g.polytope.rank().unwrap() / rat(2);
        let mut ranks: Vec<Rat> = g.polytope.vertices.iter().map(Point::rank).collect();
        ranks.sort();
        ranks.dedup();
        let mut samples = ranks.clone();
        for w in ranks.windows(2) {
            samples.push((&w[0] + &w[1]) / rat(2));
        }
        for lambda in samples.into_iter().filter(|l| l <= &mid) {
            if !volume::theorem65_66_check(g, &lambda).unwrap() {
                ok = false;
                detail = format!("{id}: slice identity fails at λ={}", scdforge::exact::fmt_rat(&lambda));
            }
        }
    }
    if !volume::volume_rank_symmetry(&scdforge::polytope::order_simplex(4)).unwrap() {
        ok = false;
        detail = "L(4) should be volume rank symmetric".into();
    }
    let p2 = catalog::get("Pt", Some(&rat(2))).unwrap();
    if !volume::volume_rank_symmetry(p2.polytope()).unwrap() {
        ok = false;
        detail = "P_2 should be volume rank symmetric".into();
    }
    let stretched = catalog::l4_stretched(&rat(2)).unwrap();
    if volume::volume_rank_symmetry(&stretched).unwrap() {
        ok = false;
        detail = "the stretched L(4) without the bite must fail rank symmetry".into();
    }
    criterion(6, "exact volume identities", ok, &detail);
}

#[test]
fn criterion_7_asymptotic_decay() {
    let mut ok = true;
    let mut detail = String::new();
    for t in [rat(1), rat(2)] {
        let entry = catalog::get("Pt", Some(&t)).unwrap();
        let mut losses: Vec<Rat> = Vec::new();
        for k in [4u64, 8, 16, 32] {
            let rep = asymptotic(&entry.decomposition, k, None).unwrap();
            for chain in &rep.kept.chains {
                if !scdforge::poset::is_symmetric_chain(chain, entry.polytope()).unwrap() {
                    ok = false;
                    detail = format!("t={t} k={k}: kept chain not symmetric");
                }
            }
            losses.push(rep.loss_fraction());
        }
        let c = &losses[0] * rat(4);
        for (i, k) in [4u64, 8, 16, 32].iter().enumerate() {
            if &losses[i] * rat(*k as i64) > c {
                ok = false;
                detail = format!("t={t}: loss at k={k} above C/k (C calibrated at k=4)");
            }
        }
        for w in losses.windows(2) {
            use num_traits::Zero;
            if w[0].is_zero() && w[1].is_zero() {
                continue; // a lossless decomposition decays trivially
            }
            let ratio_lo = &w[0] * ratio(3, 10);
            let ratio_hi = &w[0] * ratio(8, 10);
            if w[1] < ratio_lo || w[1] > ratio_hi {
                ok = false;
                detail = format!(
                    "t={t}: successive loss ratio outside [0.3, 0.8]: {} then {}",
                    scdforge::exact::fmt_rat(&w[0]),
                    scdforge::exact::fmt_rat(&w[1])
                );
            }
        }
        println!(
            "  asymptotic t={t}: losses {:?}",
            losses.iter().map(scdforge::exact::fmt_rat).collect::<Vec<_>>()
        );
    }
    criterion(7, "asymptotic loss decays like 1/k", ok, &detail);
}

fn scaled_segment(len: i64) -> GeoDecomposition {
    let a = Point::new(vec![rat(0)]);
    let b = Point::new(vec![rat(len)]);
    let polytope = Polytope::from_simplex(&Simplex::new(vec![a.clone(), b.clone()]).unwrap()).unwrap();
    let snake = Snake::new(
        SnakeKind::Real,
        vec![Swipe::new(
            0,
            scdforge::exact::PartialSimplex::closed(Simplex::new(vec![a]).unwrap()),
            scdforge::exact::PartialSimplex::closed(Simplex::new(vec![b]).unwrap()),
            Hyperplane::from_pairs(&[(1, 1)], (0, 1)),
            Hyperplane::from_pairs(&[(1, 1)], (len, 1)),
        )
        .unwrap()],
    )
    .unwrap();
    GeoDecomposition { polytope, mode: Mode::Exact, snakes: vec![snake] }
}

#[test]
fn criterion_8_products() {
    let mut ok = true;
    let mut detail = String::new();
    // Discrete products of the L(2) decomposition with itself.
    let l2 = catalog::get("L2", None).unwrap();
    let square = product_polytope(l2.polytope(), l2.polytope()).unwrap();
    for n in 1..=4u64 {
        let d = decompose(&l2.decomposition, n).unwrap();
        let prod = product_discrete(&d, &d).unwrap();
        let report = verify_scd(&prod, &square).unwrap();
        if !report.ok() {
            ok = false;
            detail = format!("discrete product at n={n}: {:?}", report.offender);
        }
    }
    // Geometric products iterated to the cuboid [0,2]×[0,3]×[0,5].
    let rect = product_geometric(&scaled_segment(2), &scaled_segment(3)).unwrap();
    let cuboid = product_geometric(&rect, &scaled_segment(5)).unwrap();
    for g in [&rect, &cuboid] {
        let report = g.validate(&[1, 2], 0).unwrap();
        if !report.ok() {
            ok = false;
            detail = format!("cuboid validation: {:?} {:?}", report.structural, report.partition);
        }
        for ctx in scdforge::conditions::contexts_of(g) {
            let strong = check_strong(&ctx).unwrap();
            if !strong.satisfied {
                ok = false;
                detail = format!("cuboid context {} fails the strong condition", ctx.label);
            }
        }
    }
    for n in [1u64, 2] {
        let d = decompose(&cuboid, n).unwrap();
        let report = verify_scd(&d, &cuboid.polytope).unwrap();
        let indep = independent_verify(&d, &cuboid.polytope).unwrap();
        if !(report.ok() && indep) {
            ok = false;
            detail = format!("cuboid discretization n={n}: {:?}", report.offender);
        }
    }
    // The open × closed obstruction.
    let sq = catalog::get("squareBoundary", None).unwrap();
    let seg = catalog::get("segment", None).unwrap();
    match product_geometric(&sq.decomposition, &seg.decomposition) {
        Err(Error::MixedKinds) => {}
        other => {
            ok = false;
            detail = format!("squareBoundary × segment: expected MixedKinds, got {other:?}");
        }
    }
    criterion(8, "products (discrete, geometric, mixed-kind error)", ok, &detail);
}

#[test]
fn criterion_9_restriction_compatibility() {
    let entry = catalog::get("L3", None).unwrap();
    let fine = decompose(&entry.decomposition, 6).unwrap();
    let mut ok = true;
    let mut detail = String::new();
    for d in [2u64, 3] {
        let coarse = decompose(&entry.decomposition, d).unwrap();
        let factor = (6 / d) as i64;
        let restricted: BTreeSet<BTreeSet<Vec<i64>>> = fine
            .chains
            .iter()
            .filter_map(|c| {
                let pts: BTreeSet<Vec<i64>> = c
                    .points
                    .iter()
                    .filter(|p| p.numerators.iter().all(|k| k % factor == 0))
                    .map(|p| p.numerators.iter().map(|k| k / factor).collect())
                    .collect();
                (!pts.is_empty()).then_some(pts)
            })
            .collect();
        let target: BTreeSet<BTreeSet<Vec<i64>>> = coarse
            .chains
            .iter()
            .map(|c| c.points.iter().map(|p| p.numerators.clone()).collect())
            .collect();
        if restricted != target {
            ok = false;
            detail = format!("restriction to denominator {d} differs");
        }
    }
    criterion(9, "restriction compatibility of the L(3) grid", ok, &detail);
}
