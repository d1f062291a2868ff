//! Probe the restricted isometry constant delta_S of a design, and watch
//! the exact computation become infeasible as p grows.
//!
//! ```text
//! cargo run --release --example rip_probe
//! ```

use sparsekit::linalg::column_standardize;
use sparsekit::rip::{
    binomial, restricted_isometry_exact, restricted_isometry_sampled, RipError,
};
use sparsekit::riskbench::{
    generate_synthetic, Amplitudes, DesignKind, SignPattern, SyntheticSpec,
};

fn design(n: usize, p: usize, seed: u64) -> sparsekit::Matrix {
    let spec = SyntheticSpec {
        n,
        p,
        sparsity: 0,
        amplitudes: Amplitudes::ConstantSigmaMultiple(0.0),
        sigma: 1.0,
        design: DesignKind::GaussianIid,
        sign_pattern: SignPattern::AllPositive,
    };
    let (prob, _) = generate_synthetic(&spec, seed).unwrap();
    column_standardize(prob.x()).unwrap()
}

fn main() {
    // Small design: exact enumeration is cheap.
    let x = design(30, 18, 5);
    for s in 1..=4 {
        let report = restricted_isometry_exact(&x, s, 1_000_000).unwrap();
        println!(
            "p = 18: delta_{s} = {:.4} over {} subsets (worst {:?})",
            report.delta, report.subsets_checked, report.worst_subset
        );
    }

    // Realistic design: the subset count explodes and exact mode refuses.
    let big = design(60, 1000, 6);
    println!("\np = 1000, S = 5: C(p, S) = {}", binomial(1000, 5));
    match restricted_isometry_exact(&big, 5, 1_000_000) {
        Err(RipError::BudgetExceeded { subsets, budget, .. }) => {
            println!("exact mode refused: {subsets} subsets exceed the budget of {budget}");
        }
        other => panic!("expected a budget refusal, got {other:?}"),
    }

    // The sampled fallback gives a seeded lower bound instead.
    let sampled = restricted_isometry_sampled(&big, 5, 400, 99).unwrap();
    println!(
        "sampled lower bound from {} trials: delta_5 >= {:.4} (subset {:?})",
        sampled.subsets_checked, sampled.delta, sampled.worst_subset
    );
    println!("already far from an isometry, and the true constant can only be larger.");
}
