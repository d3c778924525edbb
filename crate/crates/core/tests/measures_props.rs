//! Invariants of nnc and mr on random inputs.

use proptest::prelude::*;
use scenval_core::measures::{memorizing_ratio_with, nnc_with};
use scenval_core::{memorizing_ratio, nnc, ExpectationMode, Label, PointSet, SearchMethod};

fn pair(dim: usize, max_m: usize) -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    (2..max_m).prop_flat_map(move |m| {
        let set = prop::collection::vec(prop::collection::vec(-5.0f64..5.0, dim), m);
        (set.clone(), set)
    })
}

fn sets(e: &[Vec<f64>], g: &[Vec<f64>]) -> (PointSet, PointSet) {
    (
        PointSet::new(e, Label::Empirical).unwrap(),
        PointSet::new(g, Label::Generated).unwrap(),
    )
}

/// Rotation by `angle` in the first two coordinates, then translation.
fn rigid(rows: &[Vec<f64>], angle: f64, offset: (f64, f64)) -> Vec<Vec<f64>> {
    let (s, c) = angle.sin_cos();
    rows.iter()
        .map(|r| {
            let mut out = r.clone();
            out[0] = c * r[0] - s * r[1] + offset.0;
            out[1] = s * r[0] + c * r[1] + offset.1;
            out
        })
        .collect()
}

/// Smallest relative gap between a cross distance and its threshold; flags can
/// legitimately flip under round-off when this is tiny.
fn mr_margin(e: &PointSet, g: &PointSet, rho: f64) -> f64 {
    let r = scenval_core::within_set_nn_distance(e);
    let c = scenval_core::min_cross_distance(e, g).unwrap();
    r.iter()
        .zip(&c)
        .map(|(r, c)| (c - rho * r).abs() / r.max(1e-300))
        .fold(f64::INFINITY, f64::min)
}

/// Smallest relative gap between the k-th and (k+1)-th pooled distance.
fn nnc_margin(e: &PointSet, g: &PointSet, k: usize) -> f64 {
    let n = e.len() + g.len();
    if k + 1 > n - 1 {
        return f64::INFINITY;
    }
    let t = scenval_core::knn_pooled(e, g, k + 1).unwrap();
    (0..n)
        .map(|q| {
            let nb = t.neighbors(q);
            (nb[k].distance - nb[k - 1].distance) / nb[k].distance.max(1e-300)
        })
        .fold(f64::INFINITY, f64::min)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn statistics_in_unit_interval((e, g) in pair(2, 40), k in 1usize..6, rho in 0.01f64..=1.0) {
        let (es, gs) = sets(&e, &g);
        let k = k.min(2 * e.len() - 1);
        for mode in [ExpectationMode::ExactExpectation, ExpectationMode::AsymptoticHalf] {
            let r = nnc(&es, &gs, k, mode).unwrap();
            prop_assert!((0.0..=1.0).contains(&r.nnc));
            prop_assert!((0.0..=1.0).contains(&r.t1) && (0.0..=1.0).contains(&r.t2));
            prop_assert_eq!(r.nnc, 0.5 * (r.t1 - r.expected_t).abs() + 0.5 * (r.t2 - r.expected_t).abs());
        }
        let mr = memorizing_ratio(&es, &gs, rho).unwrap();
        prop_assert!((0.0..=1.0).contains(&mr.mr));
        prop_assert_eq!(mr.mr, mr.memorized_count() as f64 / e.len() as f64);
    }

    #[test]
    fn permutation_invariance((e, g) in pair(3, 30), rot in 0usize..30, rho in 0.05f64..=1.0) {
        let (es, gs) = sets(&e, &g);
        let mut e2 = e.clone();
        let mut g2 = g.clone();
        let by = rot % e.len();
        e2.rotate_right(by);
        g2.reverse();
        let (es2, gs2) = sets(&e2, &g2);
        let k = 3.min(2 * e.len() - 1);
        let a = nnc(&es, &gs, k, ExpectationMode::ExactExpectation).unwrap();
        let b = nnc(&es2, &gs2, k, ExpectationMode::ExactExpectation).unwrap();
        if nnc_margin(&es, &gs, k) > 1e-9 {
            prop_assert_eq!(a.nnc, b.nnc);
        }
        prop_assert_eq!(memorizing_ratio(&es, &gs, rho).unwrap().mr, memorizing_ratio(&es2, &gs2, rho).unwrap().mr);
    }

    #[test]
    fn rigid_motion_invariance(
        (e, g) in pair(2, 30),
        angle in 0.0f64..std::f64::consts::TAU,
        dx in -50.0f64..50.0,
        dy in -50.0f64..50.0,
        rho in 0.05f64..=1.0,
    ) {
        let (es, gs) = sets(&e, &g);
        let (es2, gs2) = sets(&rigid(&e, angle, (dx, dy)), &rigid(&g, angle, (dx, dy)));
        let k = 2.min(2 * e.len() - 1);
        if nnc_margin(&es, &gs, k) > 1e-9 {
            prop_assert_eq!(
                nnc(&es, &gs, k, ExpectationMode::ExactExpectation).unwrap().nnc,
                nnc(&es2, &gs2, k, ExpectationMode::ExactExpectation).unwrap().nnc
            );
        }
        if mr_margin(&es, &gs, rho) > 1e-9 {
            prop_assert_eq!(memorizing_ratio(&es, &gs, rho).unwrap().mr, memorizing_ratio(&es2, &gs2, rho).unwrap().mr);
        }
    }

    #[test]
    fn mr_is_monotone_in_rho((e, g) in pair(2, 40), a in 0.001f64..=1.0, b in 0.001f64..=1.0) {
        let (es, gs) = sets(&e, &g);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let r_lo = memorizing_ratio(&es, &gs, lo).unwrap();
        let r_hi = memorizing_ratio(&es, &gs, hi).unwrap();
        prop_assert!(r_lo.mr <= r_hi.mr);
        for (f_lo, f_hi) in r_lo.memorized_flags.iter().zip(&r_hi.memorized_flags) {
            prop_assert!(!f_lo | f_hi);
        }
    }

    #[test]
    fn backends_give_identical_statistics((e, g) in pair(2, 40), rho in 0.05f64..=1.0) {
        let (es, gs) = sets(&e, &g);
        let k = 3.min(2 * e.len() - 1);
        prop_assert_eq!(
            nnc_with(&es, &gs, k, ExpectationMode::ExactExpectation, SearchMethod::BruteForce).unwrap(),
            nnc_with(&es, &gs, k, ExpectationMode::ExactExpectation, SearchMethod::KdTree).unwrap()
        );
        prop_assert_eq!(
            memorizing_ratio_with(&es, &gs, rho, SearchMethod::BruteForce).unwrap(),
            memorizing_ratio_with(&es, &gs, rho, SearchMethod::KdTree).unwrap()
        );
    }
}

#[test]
fn duplicate_empirical_points_are_never_memorized() {
    let e = PointSet::new(&[[0.0, 0.0], [0.0, 0.0], [3.0, 0.0], [0.0, 4.0]], Label::Empirical).unwrap();
    let g = e.clone().with_label(Label::Generated);
    let r = memorizing_ratio(&e, &g, 1.0).unwrap();
    assert_eq!(r.memorized_flags, vec![false, false, true, true]);
    assert_eq!(r.mr, 0.5);
}
