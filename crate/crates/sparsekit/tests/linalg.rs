//! Oracle-backed checks for the dense linear-algebra kernel.

mod common;

use common::*;
use proptest::prelude::*;
use sparsekit::linalg::{
    cholesky_solve, column_standardize, dot, jacobi_eigen, norm2, norm_inf, pearson_correlation,
    pseudo_inverse_ls, qr_least_squares, sub, symmetric_eigen_extremes, Matrix,
};
use sparsekit::policy::NumericPolicy;
use sparsekit::rng::derive_rng;

#[test]
fn matmul_matches_naive_oracle() {
    let mut rng = derive_rng(101, 0);
    for _ in 0..20 {
        let a = gaussian_matrix(&mut rng, 5, 4);
        let b = gaussian_matrix(&mut rng, 4, 3);
        let fast = a.matmul(&b).unwrap();
        let slow = naive_matmul(&a, &b);
        for (x, y) in fast.as_slice().iter().zip(slow.as_slice()) {
            assert!((x - y).abs() < 1e-12);
        }
    }
}

#[test]
fn matmul_is_associative() {
    let mut rng = derive_rng(102, 0);
    for _ in 0..20 {
        let a = gaussian_matrix(&mut rng, 4, 3);
        let b = gaussian_matrix(&mut rng, 3, 5);
        let c = gaussian_matrix(&mut rng, 5, 2);
        let left = a.matmul(&b).unwrap().matmul(&c).unwrap();
        let right = a.matmul(&b.matmul(&c).unwrap()).unwrap();
        let scale = norm_inf(left.as_slice()).max(1.0);
        for (x, y) in left.as_slice().iter().zip(right.as_slice()) {
            assert!((x - y).abs() <= 1e-10 * scale);
        }
    }
}

#[test]
fn cholesky_solve_random_spd_multiply_back() {
    let mut rng = derive_rng(103, 0);
    for _ in 0..20 {
        let g = gaussian_matrix(&mut rng, 6, 6);
        // SPD by construction: G'G + I.
        let mut a = g.gram();
        for i in 0..6 {
            a.set(i, i, a.get(i, i) + 1.0);
        }
        let b: Vec<f64> = (0..6).map(|i| (i as f64) - 2.5).collect();
        let x = cholesky_solve(&a, &b).unwrap();
        let back = a.matvec(&x).unwrap();
        assert!(max_abs_diff(&back, &b) <= 1e-8 * (1.0 + norm_inf(&b)));
    }
}

#[test]
fn qr_matches_normal_equation_oracle() {
    let mut rng = derive_rng(104, 0);
    for _ in 0..20 {
        let x = gaussian_matrix(&mut rng, 10, 4);
        let y: Vec<f64> = (0..10).map(|i| (i as f64 * 0.7).sin()).collect();
        let qr = qr_least_squares(&x, &y).unwrap();
        // Independent route: solve X'X beta = X'y by Cholesky.
        let gram = x.gram();
        let xty = x.transpose_matvec(&y).unwrap();
        let oracle = cholesky_solve(&gram, &xty).unwrap();
        assert!(max_abs_diff(&qr, &oracle) < 1e-8);
    }
}

#[test]
fn qr_residual_orthogonal_to_columns() {
    let mut rng = derive_rng(105, 0);
    for _ in 0..20 {
        let x = gaussian_matrix(&mut rng, 12, 5);
        let y: Vec<f64> = (0..12).map(|i| (i as f64).cos() * 2.0).collect();
        let beta = qr_least_squares(&x, &y).unwrap();
        let residual = sub(&y, &x.matvec(&beta).unwrap());
        let correlated = x.transpose_matvec(&residual).unwrap();
        let xty = x.transpose_matvec(&y).unwrap();
        assert!(norm_inf(&correlated) <= 1e-8 * norm_inf(&xty) + 1e-10);
    }
}

#[test]
fn pseudo_inverse_satisfies_penrose_identities() {
    let mut rng = derive_rng(106, 0);
    let x = gaussian_matrix(&mut rng, 4, 8);
    // Assemble P = X^+ column by column from unit responses.
    let mut p_mat = Matrix::zeros(8, 4);
    for i in 0..4 {
        let mut e = vec![0.0; 4];
        e[i] = 1.0;
        let col = pseudo_inverse_ls(&x, &e).unwrap();
        for (j, &v) in col.iter().enumerate() {
            p_mat.set(j, i, v);
        }
    }
    let xp = x.matmul(&p_mat).unwrap(); // n x n
    let px = p_mat.matmul(&x).unwrap(); // p x p
    let xpx = xp.matmul(&x).unwrap();
    let pxp = px.matmul(&p_mat).unwrap();
    for (a, b) in xpx.as_slice().iter().zip(x.as_slice()) {
        assert!((a - b).abs() < 1e-8);
    }
    for (a, b) in pxp.as_slice().iter().zip(p_mat.as_slice()) {
        assert!((a - b).abs() < 1e-8);
    }
    for i in 0..4 {
        for j in 0..4 {
            assert!((xp.get(i, j) - xp.get(j, i)).abs() < 1e-8);
        }
    }
    for i in 0..8 {
        for j in 0..8 {
            assert!((px.get(i, j) - px.get(j, i)).abs() < 1e-8);
        }
    }
}

#[test]
fn pseudo_inverse_residual_orthogonal_to_column_space() {
    let mut rng = derive_rng(107, 0);
    for &(n, p) in &[(4usize, 8usize), (9, 3), (6, 6)] {
        let x = gaussian_matrix(&mut rng, n, p);
        let y: Vec<f64> = (0..n).map(|i| 1.0 + i as f64).collect();
        let beta = pseudo_inverse_ls(&x, &y).unwrap();
        let residual = sub(&y, &x.matvec(&beta).unwrap());
        let correlated = x.transpose_matvec(&residual).unwrap();
        assert!(norm_inf(&correlated) < 1e-8 * (1.0 + norm_inf(&y)));
    }
}

#[test]
fn jacobi_matches_determinant_bisection_oracle() {
    let mut rng = derive_rng(108, 0);
    for trial in 0..5 {
        let g = gaussian_matrix(&mut rng, 5, 5);
        let mut a = Matrix::zeros(5, 5);
        for i in 0..5 {
            for j in 0..5 {
                let v = 0.5 * (g.get(i, j) + g.get(j, i));
                a.set(i, j, v);
            }
        }
        let eig = jacobi_eigen(&a, &NumericPolicy::default()).unwrap();
        let oracle = eigenvalues_det_bisection(&a);
        assert_eq!(oracle.len(), 5, "oracle lost a root in trial {trial}");
        for (l, o) in eig.values.iter().zip(&oracle) {
            assert!((l - o).abs() < 1e-8, "trial {trial}: {l} vs {o}");
        }
    }
}

#[test]
fn eigen_extremes_bound_the_trace() {
    let mut rng = derive_rng(109, 0);
    for _ in 0..10 {
        let g = gaussian_matrix(&mut rng, 6, 6);
        let a = g.gram();
        let (lo, hi) = symmetric_eigen_extremes(&a).unwrap();
        assert!(lo <= hi);
        let trace: f64 = (0..6).map(|i| a.get(i, i)).sum();
        let n = 6.0;
        assert!(trace >= n * lo - 1e-9 && trace <= n * hi + 1e-9);
    }
}

#[test]
fn standardize_produces_unit_norms() {
    let mut rng = derive_rng(110, 0);
    let x = gaussian_matrix(&mut rng, 9, 7);
    let s = column_standardize(&x).unwrap();
    for j in 0..7 {
        assert!((norm2(&s.column(j)) - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn pearson_hand_value() {
    let r = pearson_correlation(&[1.0, 2.0, 3.0], &[1.0, 3.0, 2.0]).unwrap();
    assert!((r - 0.5).abs() < 1e-14);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // 2x2 symmetric eigenvalues against the closed form.
    #[test]
    fn two_by_two_closed_form(a in -5.0..5.0f64, b in -5.0..5.0f64, d in -5.0..5.0f64) {
        let m = Matrix::from_rows(&[vec![a, b], vec![b, d]]).unwrap();
        let (lo, hi) = symmetric_eigen_extremes(&m).unwrap();
        let mean = 0.5 * (a + d);
        let disc = (0.25 * (a - d) * (a - d) + b * b).sqrt();
        prop_assert!((lo - (mean - disc)).abs() < 1e-12);
        prop_assert!((hi - (mean + disc)).abs() < 1e-12);
    }

    // Pearson correlation under affine maps: invariant for a > 0, sign-flipped
    // for a < 0.
    #[test]
    fn pearson_affine_invariance(
        seed in 0u64..1000,
        scale in prop::sample::select(vec![-3.0f64, -0.5, 0.25, 2.0, 7.5]),
        shift in -10.0..10.0f64,
    ) {
        let mut rng = derive_rng(seed, 7);
        let x: Vec<f64> = (0..12).map(|_| rand_distr::Distribution::sample(&rand_distr::StandardNormal, &mut rng)).collect();
        let y: Vec<f64> = (0..12).map(|_| rand_distr::Distribution::sample(&rand_distr::StandardNormal, &mut rng)).collect();
        let base = pearson_correlation(&x, &y).unwrap();
        let mapped: Vec<f64> = x.iter().map(|&v| scale * v + shift).collect();
        let r = pearson_correlation(&mapped, &y).unwrap();
        if scale > 0.0 {
            prop_assert!((r - base).abs() < 1e-12);
        } else {
            prop_assert!((r + base).abs() < 1e-12);
        }
    }

    // dot is symmetric and linear in each slot.
    #[test]
    fn dot_linearity(seed in 0u64..1000, alpha in -4.0..4.0f64) {
        let mut rng = derive_rng(seed, 8);
        let x: Vec<f64> = (0..9).map(|_| rand_distr::Distribution::sample(&rand_distr::StandardNormal, &mut rng)).collect();
        let y: Vec<f64> = (0..9).map(|_| rand_distr::Distribution::sample(&rand_distr::StandardNormal, &mut rng)).collect();
        let scaled: Vec<f64> = x.iter().map(|&v| alpha * v).collect();
        prop_assert!((dot(&x, &y) - dot(&y, &x)).abs() < 1e-12);
        prop_assert!((dot(&scaled, &y) - alpha * dot(&x, &y)).abs() < 1e-10);
    }
}
