//! Collinearity simulator checks: the Gram-based maximum against a naive
//! double loop, seed determinism under different thread pools, and
//! histogram bookkeeping.

mod common;

use common::*;
use proptest::prelude::*;
use sparsekit::collinearity::{
    histogram, max_pairwise_abs_correlation, sample_rep_matrix, simulate_max_abs_correlation,
    summarize, SimConfig,
};
use sparsekit::linalg::pearson_correlation;
use sparsekit::rng::derive_rng;

#[test]
fn gram_max_equals_naive_double_loop() {
    let mut rng = derive_rng(71, 0);
    for _ in 0..10 {
        let x = gaussian_matrix(&mut rng, 10, 5);
        let fast = max_pairwise_abs_correlation(&x).unwrap();
        let mut slow = 0.0_f64;
        for a in 0..5 {
            for b in a + 1..5 {
                let r = pearson_naive(&x.column(a), &x.column(b)).abs();
                slow = slow.max(r);
            }
        }
        assert!((fast - slow).abs() < 1e-12, "{fast} vs {slow}");
    }
}

#[test]
fn simulation_rep_cross_checks_against_pearson_oracle() {
    let config = SimConfig::new(20, 15, 4, 2024);
    let dist = simulate_max_abs_correlation(&config).unwrap();
    for rep in 0..4 {
        let x = sample_rep_matrix(&config, rep);
        let mut oracle = 0.0_f64;
        for a in 0..15 {
            for b in a + 1..15 {
                let r = pearson_correlation(&x.column(a), &x.column(b))
                    .unwrap()
                    .abs();
                oracle = oracle.max(r);
            }
        }
        assert!(
            (dist.samples[rep] - oracle).abs() < 1e-12,
            "rep {rep}: {} vs {oracle}",
            dist.samples[rep]
        );
    }
}

#[test]
fn simulation_is_identical_across_thread_counts() {
    let config = SimConfig::new(15, 40, 12, 555);
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| simulate_max_abs_correlation(&config).unwrap());
    let duo = rayon::ThreadPoolBuilder::new()
        .num_threads(2)
        .build()
        .unwrap()
        .install(|| simulate_max_abs_correlation(&config).unwrap());
    assert_eq!(single.samples.len(), duo.samples.len());
    for (a, b) in single.samples.iter().zip(&duo.samples) {
        assert_eq!(a.to_bits(), b.to_bits());
    }
    assert_eq!(single.summary.median.to_bits(), duo.summary.median.to_bits());
    assert_eq!(single.histogram.counts, duo.histogram.counts);
}

#[test]
fn growing_p_shifts_the_distribution_right() {
    // Desk-scale restatement of the rightward shift: more columns, larger
    // max correlation, for the same sample count.
    let small = simulate_max_abs_correlation(&SimConfig::new(30, 20, 40, 9)).unwrap();
    let large = simulate_max_abs_correlation(&SimConfig::new(30, 200, 40, 9)).unwrap();
    assert!(large.summary.median > small.summary.median);
    let z = mann_whitney_greater_z(&large.samples, &small.samples);
    assert!(z > Z_CRIT_05, "rank test failed to separate: z = {z}");
}

#[test]
fn samples_live_in_unit_interval() {
    let dist = simulate_max_abs_correlation(&SimConfig::new(10, 30, 25, 31)).unwrap();
    assert!(dist
        .samples
        .iter()
        .all(|&v| (0.0..=1.0).contains(&v)));
    assert_eq!(dist.samples.len(), 25);
    assert_eq!(
        dist.histogram.counts.iter().sum::<u64>(),
        dist.samples.len() as u64
    );
}

#[test]
fn summary_of_known_sample() {
    let s = summarize(&[0.5, 0.1, 0.9, 0.3]);
    assert_eq!(s.min, 0.1);
    assert_eq!(s.max, 0.9);
    assert!((s.median - 0.4).abs() < 1e-15);
    assert!((s.mean - 0.45).abs() < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn histogram_counts_always_sum(samples in prop::collection::vec(0.0..1.0f64, 1..200), bins in 1usize..20) {
        let h = histogram(&samples, bins);
        prop_assert_eq!(h.counts.iter().sum::<u64>(), samples.len() as u64);
        prop_assert_eq!(h.counts.len(), bins);
        prop_assert_eq!(h.edges.len(), bins + 1);
        // Edges are nondecreasing.
        for w in h.edges.windows(2) {
            prop_assert!(w[0] <= w[1]);
        }
    }
}
