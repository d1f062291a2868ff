//! Noiseless sparse recovery: exact reconstruction of a 3-sparse signal
//! from 40 linear measurements of an 80-dimensional vector.
//!
//! ```text
//! cargo run --release --example basis_pursuit
//! ```

use rand::Rng;
use sparsekit::estimators::basis_pursuit;
use sparsekit::linalg::{column_standardize, Matrix};
use sparsekit::lp::SolverOptions;
use sparsekit::rng::derive_rng;
use rand_distr::{Distribution, StandardNormal};

fn main() {
    let (n, p, sparsity) = (40, 80, 3);
    let mut rng = derive_rng(11, 0);
    let data: Vec<f64> = (0..n * p).map(|_| StandardNormal.sample(&mut rng)).collect();
    let x = column_standardize(&Matrix::new(n, p, data).unwrap()).unwrap();

    let mut beta = vec![0.0; p];
    let mut pool: Vec<usize> = (0..p).collect();
    for k in 0..sparsity {
        let j = rng.gen_range(k..p);
        pool.swap(k, j);
    }
    for &j in &pool[..sparsity] {
        beta[j] = if rng.gen::<bool>() { 1.0 } else { -1.0 };
    }
    let y = x.matvec(&beta).unwrap();

    println!("underdetermined system: {n} equations, {p} unknowns, {sparsity} nonzeros");
    let est = basis_pursuit(&x, &y, &SolverOptions::default()).unwrap();
    let max_err = est
        .beta
        .iter()
        .zip(&beta)
        .fold(0.0_f64, |m, (&a, &b)| m.max((a - b).abs()));
    println!("recovered support: {:?}", est.support);
    println!("max coefficient error: {max_err:.2e}");
    println!("|beta|_1 of the recovery: {:.6}", est.l1_norm());
    assert!(max_err < 1e-6, "recovery should be exact at this sparsity");
    println!("exact recovery: the l1-minimal solution is the planted signal.");
}
