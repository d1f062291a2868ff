//! Coordinate-descent Lasso baseline next to the Dantzig selector on the
//! same data: two different l1 estimators, often similar answers.
//!
//! ```text
//! cargo run --release --example lasso_baseline
//! ```

use sparsekit::estimators::{dantzig_selector, lasso_cd, DantzigOptions};
use sparsekit::riskbench::{
    generate_synthetic, Amplitudes, DesignKind, SignPattern, SyntheticSpec,
};

fn main() {
    let spec = SyntheticSpec {
        n: 40,
        p: 100,
        sparsity: 4,
        amplitudes: Amplitudes::ConstantSigmaMultiple(5.0),
        sigma: 1.0,
        design: DesignKind::GaussianIid,
        sign_pattern: SignPattern::RandomSigns,
    };
    let (prob, beta_true) = generate_synthetic(&spec, 13).unwrap();

    let ds = dantzig_selector(&prob, &DantzigOptions::default()).unwrap();
    // Penalty matched to the selector's constraint scale.
    let penalty = ds.lambda_used * prob.sigma();
    let lasso = lasso_cd(&prob, penalty, 10_000, 1e-10).unwrap();

    println!(
        "n = {}, p = {}, S = {}; lambda factor {:.3}",
        spec.n, spec.p, spec.sparsity, ds.lambda_used
    );
    println!(
        "dantzig:  support {:?}, squared error {:.3}",
        ds.support,
        ds.sq_error(&beta_true)
    );
    println!(
        "lasso:    support {:?}, squared error {:.3}",
        lasso.support,
        lasso.sq_error(&beta_true)
    );

    let true_support: Vec<usize> = beta_true
        .iter()
        .enumerate()
        .filter(|(_, &b)| b != 0.0)
        .map(|(j, _)| j)
        .collect();
    println!("truth:    support {true_support:?}");
    println!("\n   j     truth   dantzig     lasso");
    for &j in &true_support {
        println!(
            "{j:>4} {:>9.4} {:>9.4} {:>9.4}",
            beta_true[j], ds.beta[j], lasso.beta[j]
        );
    }
}
