// Scratch probe: trace one stalling basis-pursuit instance (temporary).
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use sparsekit::estimators::basis_pursuit;
use sparsekit::linalg::{column_standardize, Matrix};
use sparsekit::lp::SolverOptions;
use sparsekit::rng::derive_rng;

fn main() {
    let trial = 15u64;
    let mut rng = derive_rng(0xACCE_0004, trial);
    let x = column_standardize(&gaussian(&mut rng, 40, 80)).unwrap();
    let mut beta = vec![0.0; 80];
    let mut pool: Vec<usize> = (0..80).collect();
    for k in 0..3 {
        let j = rng.gen_range(k..80);
        pool.swap(k, j);
    }
    for &j in &pool[..3] {
        beta[j] = if rng.gen::<bool>() { 1.0 } else { -1.0 };
    }
    let y = x.matvec(&beta).unwrap();
    match basis_pursuit(&x, &y, &SolverOptions::default()) {
        Ok(est) => println!("ok, l1 {}", est.l1_norm()),
        Err(e) => println!("ERR {e}"),
    }
}

fn gaussian<R: Rng>(rng: &mut R, n: usize, p: usize) -> Matrix {
    let data: Vec<f64> = (0..n * p).map(|_| StandardNormal.sample(rng)).collect();
    Matrix::new(n, p, data).unwrap()
}
