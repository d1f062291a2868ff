//! The two-stage Gauss-Dantzig selector: select with the Dantzig selector,
//! then refit by least squares on the selected columns to undo the
//! shrinkage.
//!
//! ```text
//! cargo run --release --example gauss_dantzig
//! ```

use sparsekit::estimators::{dantzig_selector, gauss_dantzig_from_stage1, DantzigOptions};
use sparsekit::riskbench::{
    generate_synthetic, Amplitudes, DesignKind, SignPattern, SyntheticSpec,
};

fn main() {
    let spec = SyntheticSpec {
        n: 72,
        p: 256,
        sparsity: 8,
        amplitudes: Amplitudes::ConstantSigmaMultiple(5.0),
        sigma: 1.0,
        design: DesignKind::GaussianIid,
        sign_pattern: SignPattern::AllPositive,
    };
    let (prob, beta_true) = generate_synthetic(&spec, 3).unwrap();
    let opts = DantzigOptions::default();

    let stage1 = dantzig_selector(&prob, &opts).unwrap();
    let refit = gauss_dantzig_from_stage1(&prob, &stage1, opts.support_threshold).unwrap();

    println!("n = {}, p = {}, true support size {}", spec.n, spec.p, spec.sparsity);
    println!(
        "stage 1 (dantzig):       support {:>3}, squared error {:>8.3}",
        stage1.support.len(),
        stage1.sq_error(&beta_true)
    );
    println!(
        "stage 2 (gauss-dantzig): support {:>3}, squared error {:>8.3}",
        refit.support.len(),
        refit.sq_error(&beta_true)
    );

    println!("\ncoefficients on the true support (truth 5.0 everywhere):");
    println!("   j   dantzig     refit");
    for (j, &b) in beta_true.iter().enumerate() {
        if b != 0.0 {
            println!("{j:>4} {:>9.4} {:>9.4}", stage1.beta[j], refit.beta[j]);
        }
    }
    println!("\nthe refit removes most of the lambda*sigma shrinkage of stage 1.");
}
