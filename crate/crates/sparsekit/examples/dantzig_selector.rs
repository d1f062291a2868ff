//! Fit the Dantzig selector to a synthetic sparse problem.
//!
//! ```text
//! cargo run --release --example dantzig_selector
//! ```

use sparsekit::estimators::{dantzig_selector, DantzigOptions};
use sparsekit::riskbench::{
    generate_synthetic, Amplitudes, DesignKind, SignPattern, SyntheticSpec,
};

fn main() {
    let spec = SyntheticSpec {
        n: 48,
        p: 128,
        sparsity: 5,
        amplitudes: Amplitudes::ConstantSigmaMultiple(4.0),
        sigma: 1.0,
        design: DesignKind::GaussianIid,
        sign_pattern: SignPattern::RandomSigns,
    };
    let (prob, beta_true) = generate_synthetic(&spec, 7).unwrap();
    println!(
        "problem: n = {}, p = {}, {} nonzero coefficients, sigma = {}",
        spec.n, spec.p, spec.sparsity, spec.sigma
    );

    let est = dantzig_selector(&prob, &DantzigOptions::default()).unwrap();
    let stats = est.lp_stats.as_ref().unwrap();
    println!(
        "lambda = sqrt(2 log p) = {:.4}, constraint bound {:.4}",
        est.lambda_used,
        est.lambda_used * prob.sigma()
    );
    println!(
        "interior point: {} iterations, relative gap {:.1e}",
        stats.iterations, stats.duality_gap
    );

    let true_support: Vec<usize> = beta_true
        .iter()
        .enumerate()
        .filter(|(_, &b)| b != 0.0)
        .map(|(j, _)| j)
        .collect();
    println!("true support:     {true_support:?}");
    println!("selected support: {:?}", est.support);
    println!("\n  j     truth   estimate");
    for &j in &true_support {
        println!("{j:>4} {:>9.4} {:>9.4}", beta_true[j], est.beta[j]);
    }
    println!(
        "\nsquared estimation error |estimate - truth|^2 = {:.4}",
        est.sq_error(&beta_true)
    );
    println!("note the shrinkage: every estimate sits closer to zero than the truth.");
}
