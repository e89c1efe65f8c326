//! Property tests: exact-arithmetic invariants, serialization round-trips,
//! and the agreement of the two independent verifiers under corruption.

use num_traits::Signed;
use proptest::prelude::*;

use scdforge::catalog;
use scdforge::discretize::decompose;
use scdforge::exact::{fmt_rat, parse_rat, rat, ratio, Hyperplane, Point, Rat, Simplex};
use scdforge::oracle::independent_verify;
use scdforge::poset::verify_scd;

fn small_rat() -> impl Strategy<Value = Rat> {
    (-12i64..=12, 1i64..=6).prop_map(|(n, d)| ratio(n, d))
}

fn point(dim: usize) -> impl Strategy<Value = Point> {
    prop::collection::vec(small_rat(), dim).prop_map(Point::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_strings_round_trip(n in -1000i64..1000, d in 1i64..400) {
        let r = ratio(n, d);
        prop_assert_eq!(parse_rat(&fmt_rat(&r)).unwrap(), r);
    }

    #[test]
    fn hyperplane_residual_is_affine(
        coeffs in prop::collection::vec(small_rat(), 3),
        rhs in small_rat(),
        p in point(3),
        c in small_rat(),
        axis in 0usize..3,
    ) {
        prop_assume!(coeffs.iter().any(|x| !num_traits::Zero::is_zero(x)));
        let h = Hyperplane::new(coeffs, rhs).unwrap();
        let q = p.axis_step(axis, &c);
        let lhs = h.residual(&q).unwrap() - h.residual(&p).unwrap();
        prop_assert_eq!(lhs, &c * &h.coeffs[axis]);
    }

    #[test]
    fn barycentric_round_trip(
        verts in prop::collection::vec(point(3), 4),
        weights in prop::collection::vec(0u8..8, 4),
    ) {
        // Random tetrahedra (degenerate draws are skipped), random convex
        // combinations: span_coords must reproduce the weights and combine
        // must reproduce the point, exactly.
        let Ok(simplex) = Simplex::new(verts) else { return Ok(()) };
        let total: i64 = weights.iter().map(|&w| w as i64).sum();
        prop_assume!(total > 0);
        let lambda: Vec<Rat> = weights.iter().map(|&w| ratio(w as i64, total)).collect();
        let p = simplex.combine(&lambda);
        let back = simplex.span_coords(&p).expect("in the span");
        prop_assert_eq!(&back, &lambda);
        prop_assert_eq!(simplex.combine(&back), p);
    }

    #[test]
    fn strong_verdict_is_scale_invariant(n in 1i64..20, d in 1i64..20, flip in proptest::bool::ANY) {
        let entry = catalog::get("L3", None).unwrap();
        let f = ratio(if flip { -n } else { n }, d);
        for ctx in &entry.certificates {
            let mut scaled = ctx.clone();
            scaled.certificate.coeffs.iter_mut().for_each(|c| *c = &*c * &f);
            scaled.certificate.rhs = &scaled.certificate.rhs * &f;
            let a = scdforge::conditions::check_strong(ctx).unwrap();
            let b = scdforge::conditions::check_strong(&scaled).unwrap();
            prop_assert_eq!(a.satisfied, b.satisfied);
            prop_assert_eq!(a.complexity, b.complexity);
        }
    }

    #[test]
    fn lattice_restriction_embeds(n in 1u64..5, k in 1u64..4) {
        let l3 = scdforge::polytope::order_simplex(3);
        let coarse = l3.lattice_points(n).unwrap();
        let fine = l3.lattice_points(n * k).unwrap();
        for p in coarse {
            let scaled = scdforge::polytope::LatticePoint::new(
                p.numerators.iter().map(|x| x * k as i64).collect(),
                n * k,
            );
            prop_assert!(fine.binary_search(&scaled).is_ok());
        }
    }
}

/// The two verifiers agree on valid decompositions and on randomized
/// corruptions of them.
#[test]
fn verifiers_agree_on_corruptions() {
    let entry = catalog::get("L3", None).unwrap();
    let good = decompose(&entry.decomposition, 3).unwrap();
    assert!(verify_scd(&good, entry.polytope()).unwrap().ok());
    assert!(independent_verify(&good, entry.polytope()).unwrap());

    let mut seed = 0x9e3779b97f4a7c15u64;
    let mut next = move || {
        seed ^= seed << 13;
        seed ^= seed >> 7;
        seed ^= seed << 17;
        seed
    };
    for trial in 0..100 {
        let mut bad = good.clone();
        let ci = (next() % bad.chains.len() as u64) as usize;
        match next() % 4 {
            0 => {
                // Drop a point.
                let c = &mut bad.chains[ci];
                let pi = (next() % c.points.len() as u64) as usize;
                c.points.remove(pi);
                if c.points.is_empty() {
                    continue;
                }
            }
            1 => {
                // Duplicate a point into another chain.
                let p = bad.chains[ci].points[0].clone();
                let cj = (next() % bad.chains.len() as u64) as usize;
                bad.chains[cj].points.push(p);
            }
            2 => {
                // Swap two points, breaking the order.
                let c = &mut bad.chains[ci];
                if c.points.len() < 2 {
                    continue;
                }
                let a = (next() % c.points.len() as u64) as usize;
                let b = (next() % c.points.len() as u64) as usize;
                if a == b {
                    continue;
                }
                c.points.swap(a, b);
            }
            _ => {
                // Nudge a coordinate off the poset.
                let c = &mut bad.chains[ci];
                let pi = (next() % c.points.len() as u64) as usize;
                c.points[pi].numerators[0] += 7;
            }
        }
        let a = verify_scd(&bad, entry.polytope()).unwrap().ok();
        let b = independent_verify(&bad, entry.polytope()).unwrap();
        assert_eq!(a, b, "trial {trial}: verifiers disagree");
        assert!(!a, "trial {trial}: corruption not detected");
    }
}

/// Refining a swipe with an extra turning hyperplane multiplies complexities:
/// the original decomposition constant divides the refinement's.
#[test]
fn refinement_divisibility() {
    use scdforge::exact::PartialSimplex;
    use scdforge::snake::{GeoDecomposition, Mode, Snake, Swipe};

    let seg = |a: (i64, i64), b: (i64, i64), c: (i64, i64), d: (i64, i64)| {
        Simplex::new(vec![Point::from_pairs(&[a, b]), Point::from_pairs(&[c, d])]).unwrap()
    };
    let t0 = seg((0, 1), (0, 1), (1, 2), (1, 2));
    let mid = seg((0, 1), (1, 2), (1, 2), (1, 2));
    let t1 = seg((0, 1), (1, 1), (1, 2), (1, 2));
    let t2 = seg((1, 1), (1, 1), (1, 2), (1, 2));
    let h_diag = Hyperplane::from_pairs(&[(1, 1), (-1, 1)], (0, 1));
    let h_mid = Hyperplane::from_pairs(&[(0, 1), (1, 1)], (1, 2));
    let h_anti = Hyperplane::from_pairs(&[(1, 1), (1, 1)], (1, 1));
    let snake = Snake::new(
        scdforge::snake::SnakeKind::Real,
        vec![
            Swipe::new(1, PartialSimplex::closed(t0.clone()), PartialSimplex::closed(mid.clone()), h_diag.clone(), h_mid.clone()).unwrap(),
            Swipe::new(1, PartialSimplex::closed(mid), PartialSimplex::closed(t1.clone()), h_mid, h_anti.clone()).unwrap(),
            Swipe::new(0, PartialSimplex::closed(t1), PartialSimplex::closed(t2), h_anti, h_diag).unwrap(),
        ],
    )
    .unwrap();
    let refined = GeoDecomposition {
        polytope: scdforge::polytope::order_simplex(2),
        mode: Mode::Exact,
        snakes: vec![snake],
    };
    let original = catalog::get("L2", None).unwrap().decomposition;
    let n_orig = scdforge::conditions::decomposition_n(&original).unwrap();
    let n_refined = scdforge::conditions::decomposition_n(&refined).unwrap();
    assert_eq!(n_orig, 1);
    assert_eq!(n_refined, 2);
    assert_eq!(n_refined % n_orig, 0);
    // The refinement still discretizes correctly at multiples of its constant.
    let d = decompose(&refined, 4).unwrap();
    assert!(verify_scd(&d, &refined.polytope).unwrap().ok());
}

/// The chain count below a rank level, scaled by n^{d−1}, approaches the
/// normalized sub-level volume of the starting sets: the relative error
/// halves as n doubles (it is a second-order lattice term) and drops under
/// 10% by n = 48.
#[test]
fn chain_count_matches_normalized_volume_asymptotically() {
    let entry = catalog::get("L3", None).unwrap();
    let g = &entry.decomposition;
    let lambda = rat(1);
    let mut expected = Rat::from_integer(0.into());
    for snake in &g.snakes {
        let start = &snake.swipes[0].start;
        for leaf in scdforge::volume::clip_below(start.vertices(), &lambda) {
            expected += scdforge::volume::projected_volume(&leaf, snake.swipes[0].dir).unwrap();
        }
    }
    let mut errors = Vec::new();
    for n in [12u64, 24, 48] {
        let d = decompose(g, n).unwrap();
        let below = d
            .chains
            .iter()
            .filter(|c| ratio(c.points[0].scaled_rank(), n as i64) < lambda)
            .count();
        let measured = ratio(below as i64, (n * n) as i64);
        errors.push((&measured - &expected).abs() / &expected);
    }
    for w in errors.windows(2) {
        assert!(w[1] <= &w[0] * ratio(6, 10), "convergence stalled: {:?}", errors);
    }
    assert!(errors.last().unwrap() <= &ratio(1, 10), "error at n=48: {}", fmt_rat(errors.last().unwrap()));
}
