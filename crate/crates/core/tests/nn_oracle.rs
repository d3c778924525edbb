//! The neighbor engine against an all-pairs scan written here from scratch.

use proptest::prelude::*;
use scenval_core::nn::{knn_pooled_with, min_cross_distance_with, within_set_nn_distance_with};
use scenval_core::{Label, PointSet, SearchMethod};

/// Sorted `(index, distance, ties)` for each pooled query, by full sort.
fn oracle_table(e: &[Vec<f64>], g: &[Vec<f64>], k: usize) -> Vec<(Vec<(usize, f64)>, usize)> {
    let pooled: Vec<&Vec<f64>> = e.iter().chain(g.iter()).collect();
    (0..pooled.len())
        .map(|q| {
            let mut cands: Vec<(f64, usize)> = (0..pooled.len())
                .filter(|&j| j != q)
                .map(|j| {
                    let d2: f64 = pooled[q].iter().zip(pooled[j]).map(|(a, b)| (a - b) * (a - b)).sum();
                    (d2, j)
                })
                .collect();
            cands.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let cut = cands[k - 1].0;
            let ties = cands[k..].iter().filter(|c| c.0 == cut).count();
            (cands[..k].iter().map(|&(d2, j)| (j, d2.sqrt())).collect(), ties)
        })
        .collect()
}

fn rows(dim: usize, max_m: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    // small integer grid so exact ties and duplicates are common
    prop::collection::vec(prop::collection::vec((-4i32..5).prop_map(f64::from), dim), 2..max_m)
}

fn continuous(dim: usize, max_m: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-10.0f64..10.0, dim), 2..max_m)
}

fn check_against_oracle(e: &[Vec<f64>], g: &[Vec<f64>], k: usize) -> Result<(), TestCaseError> {
    let es = PointSet::new(e, Label::Empirical).unwrap();
    let gs = PointSet::new(g, Label::Generated).unwrap();
    let expected = oracle_table(e, g, k);
    for method in [SearchMethod::BruteForce, SearchMethod::KdTree] {
        let table = knn_pooled_with(&es, &gs, k, method).unwrap();
        for (q, (want, ties)) in expected.iter().enumerate() {
            let got: Vec<(usize, f64)> = table.neighbors(q).iter().map(|n| (n.index, n.distance)).collect();
            prop_assert_eq!(&got, want, "query {} via {:?}", q, method);
            prop_assert_eq!(table.ties_at_cutoff(q), *ties);
            for n in table.neighbors(q) {
                let want_label = if n.index < e.len() { Label::Empirical } else { Label::Generated };
                prop_assert_eq!(n.source, want_label);
            }
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pooled_knn_matches_oracle_with_ties(
        dim in 1usize..4,
        seed_e in rows(3, 26),
        seed_g in rows(3, 26),
        k_frac in 0.0f64..1.0,
    ) {
        let e: Vec<Vec<f64>> = seed_e.into_iter().map(|mut r| { r.truncate(dim); r }).collect();
        let g: Vec<Vec<f64>> = seed_g.into_iter().map(|mut r| { r.truncate(dim); r }).collect();
        let n = e.len() + g.len();
        let k = 1 + ((n - 2) as f64 * k_frac) as usize;
        check_against_oracle(&e, &g, k)?;
    }

    #[test]
    fn pooled_knn_matches_oracle_continuous(e in continuous(2, 51), g in continuous(2, 51), k in 1usize..8) {
        let k = k.min(e.len() + g.len() - 1);
        check_against_oracle(&e, &g, k)?;
    }

    #[test]
    fn single_set_distances_match_oracle(e in rows(2, 50), g in continuous(2, 50)) {
        let es = PointSet::new(&e, Label::Empirical).unwrap();
        let gs = PointSet::new(&g, Label::Generated).unwrap();
        let dist = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
        let within: Vec<f64> = (0..e.len())
            .map(|i| (0..e.len()).filter(|&j| j != i).map(|j| dist(&e[i], &e[j])).fold(f64::INFINITY, f64::min))
            .collect();
        let cross: Vec<f64> = e
            .iter()
            .map(|p| g.iter().map(|q| dist(p, q)).fold(f64::INFINITY, f64::min))
            .collect();
        for method in [SearchMethod::BruteForce, SearchMethod::KdTree] {
            prop_assert_eq!(&within_set_nn_distance_with(&es, method), &within);
            prop_assert_eq!(&min_cross_distance_with(&es, &gs, method).unwrap(), &cross);
        }
    }

    #[test]
    fn permutation_keeps_distance_multisets(e in continuous(3, 30), g in continuous(3, 30), shift in 0usize..30) {
        let es = PointSet::new(&e, Label::Empirical).unwrap();
        let gs = PointSet::new(&g, Label::Generated).unwrap();
        let mut e2 = e.clone();
        let by = shift % e2.len();
        e2.rotate_left(by);
        e2.reverse();
        let es2 = PointSet::new(&e2, Label::Empirical).unwrap();
        let k = 3.min(e.len() + g.len() - 1);
        let profile = |t: &scenval_core::NeighborTable| {
            let mut v: Vec<(Vec<u64>, usize)> = (0..t.len())
                .map(|q| (t.neighbors(q).iter().map(|n| n.distance.to_bits()).collect(), t.same_source_count(q)))
                .collect();
            v.sort();
            v
        };
        let a = scenval_core::knn_pooled(&es, &gs, k).unwrap();
        let b = scenval_core::knn_pooled(&es2, &gs, k).unwrap();
        prop_assert_eq!(profile(&a), profile(&b));
        let mut w1 = scenval_core::within_set_nn_distance(&es);
        let mut w2 = scenval_core::within_set_nn_distance(&es2);
        w1.sort_by(f64::total_cmp);
        w2.sort_by(f64::total_cmp);
        prop_assert_eq!(w1, w2);
    }

    #[test]
    fn translation_changes_distances_only_by_roundoff(
        e in continuous(2, 30),
        g in continuous(2, 30),
        offset in prop::collection::vec(-100.0f64..100.0, 2),
    ) {
        let shift = |rows: &[Vec<f64>]| -> Vec<Vec<f64>> {
            rows.iter().map(|r| r.iter().zip(&offset).map(|(x, o)| x + o).collect()).collect()
        };
        let es = PointSet::new(&e, Label::Empirical).unwrap();
        let gs = PointSet::new(&g, Label::Generated).unwrap();
        let es2 = PointSet::new(&shift(&e), Label::Empirical).unwrap();
        let gs2 = PointSet::new(&shift(&g), Label::Generated).unwrap();
        let close = |a: &[f64], b: &[f64]| {
            a.iter().zip(b).all(|(x, y)| (x - y).abs() <= 1e-12 * x.abs().max(1.0) * 1e2)
        };
        prop_assert!(close(&scenval_core::within_set_nn_distance(&es), &scenval_core::within_set_nn_distance(&es2)));
        prop_assert!(close(
            &scenval_core::min_cross_distance(&es, &gs).unwrap(),
            &scenval_core::min_cross_distance(&es2, &gs2).unwrap(),
        ));
    }
}

#[test]
fn distance_is_symmetric() {
    let a = PointSet::new(&[[0.3, -1.7, 2.0], [5.5, 1.25, -0.5]], Label::Empirical).unwrap();
    let b = PointSet::new(&[[5.5, 1.25, -0.5], [0.3, -1.7, 2.0]], Label::Generated).unwrap();
    let ab = scenval_core::min_cross_distance(&a, &b).unwrap();
    let ba = scenval_core::min_cross_distance(&b, &a).unwrap();
    assert_eq!(ab, vec![0.0, 0.0]);
    assert_eq!(ba, ab);
    let w = scenval_core::within_set_nn_distance(&a);
    assert_eq!(w[0], w[1]);
}

#[test]
fn larger_sets_agree_across_backends_and_threads() {
    use scenval_core::sampling::sample;
    use scenval_core::{Density, SeedPath};
    let e = sample(Density::Cauchy, 3, 700, SeedPath::new(4).experiment("a"), Label::Empirical).unwrap();
    let g = sample(Density::Cauchy, 3, 700, SeedPath::new(4).experiment("b"), Label::Generated).unwrap();
    let brute = knn_pooled_with(&e, &g, 5, SearchMethod::BruteForce).unwrap();
    let tree = knn_pooled_with(&e, &g, 5, SearchMethod::KdTree).unwrap();
    assert_eq!(brute, tree);
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    assert_eq!(single.install(|| knn_pooled_with(&e, &g, 5, SearchMethod::KdTree).unwrap()), tree);
}
