//! Symmetric eigenvalues via the cyclic Jacobi method.
//!
//! Jacobi is quadratic-in-sweeps slow compared to tridiagonalization, but at
//! the block sizes this crate feeds it (subset Gram matrices, whitened
//! cross-covariances, Gram matrices of modest designs) it is simple, hard to
//! break, and accurate to machine precision.

use super::{LinalgError, Matrix};
use crate::policy::NumericPolicy;

/// Full symmetric eigendecomposition: `values` ascending, `vectors` holding
/// the matching eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

const MAX_SWEEPS: usize = 100;

fn check_square_symmetric(a: &Matrix, policy: &NumericPolicy) -> Result<(), LinalgError> {
    if a.rows() != a.cols() {
        return Err(LinalgError::DimensionMismatch {
            op: "jacobi_eigen",
            left_rows: a.rows(),
            left_cols: a.cols(),
            right_rows: a.cols(),
            right_cols: a.rows(),
        });
    }
    let scale = a.as_slice().iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    for i in 0..a.rows() {
        for j in i + 1..a.cols() {
            let deviation = (a.get(i, j) - a.get(j, i)).abs();
            if deviation > policy.symmetry_tol * scale {
                return Err(LinalgError::Asymmetric {
                    row: i,
                    col: j,
                    deviation,
                });
            }
        }
    }
    Ok(())
}

fn jacobi_inner(
    a: &Matrix,
    want_vectors: bool,
    policy: &NumericPolicy,
) -> Result<(Vec<f64>, Option<Matrix>), LinalgError> {
    check_square_symmetric(a, policy)?;
    let n = a.rows();
    // Work on the symmetrized copy so tiny asymmetries cannot drift.
    let mut w = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            w[i * n + j] = 0.5 * (a.get(i, j) + a.get(j, i));
        }
    }
    let mut v = if want_vectors {
        Some(Matrix::identity(n))
    } else {
        None
    };

    let frob: f64 = w.iter().map(|x| x * x).sum::<f64>().sqrt();
    let stop = (1e-14 * frob.max(1e-300)).powi(2);

    for _sweep in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| w[i * n + j] * w[i * n + j])
            .sum();
        if off <= stop {
            let mut values: Vec<f64> = (0..n).map(|i| w[i * n + i]).collect();
            let vectors = if let Some(mut vm) = v {
                // Sort eigenpairs ascending, stable in the original order.
                let mut order: Vec<usize> = (0..n).collect();
                order.sort_by(|&x, &y| values[x].partial_cmp(&values[y]).unwrap());
                let sorted_values: Vec<f64> = order.iter().map(|&k| values[k]).collect();
                let mut sorted = Matrix::zeros(n, n);
                for (new_col, &old_col) in order.iter().enumerate() {
                    for r in 0..n {
                        sorted.set(r, new_col, vm.get(r, old_col));
                    }
                }
                vm = sorted;
                values = sorted_values;
                Some(vm)
            } else {
                values.sort_by(|x, y| x.partial_cmp(y).unwrap());
                None
            };
            return Ok((values, vectors));
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = w[p * n + q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let app = w[p * n + p];
                let aqq = w[q * n + q];
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                for k in 0..n {
                    let wkp = w[k * n + p];
                    let wkq = w[k * n + q];
                    w[k * n + p] = c * wkp - s * wkq;
                    w[k * n + q] = s * wkp + c * wkq;
                }
                for k in 0..n {
                    let wpk = w[p * n + k];
                    let wqk = w[q * n + k];
                    w[p * n + k] = c * wpk - s * wqk;
                    w[q * n + k] = s * wpk + c * wqk;
                }
                if let Some(vm) = v.as_mut() {
                    for k in 0..n {
                        let vkp = vm.get(k, p);
                        let vkq = vm.get(k, q);
                        vm.set(k, p, c * vkp - s * vkq);
                        vm.set(k, q, s * vkp + c * vkq);
                    }
                }
            }
        }
    }
    Err(LinalgError::ConvergenceFailure {
        what: "cyclic Jacobi eigensolver",
    })
}

/// Full eigendecomposition of a symmetric matrix.
pub fn jacobi_eigen(a: &Matrix, policy: &NumericPolicy) -> Result<SymmetricEigen, LinalgError> {
    let (values, vectors) = jacobi_inner(a, true, policy)?;
    Ok(SymmetricEigen {
        values,
        vectors: vectors.expect("vectors requested"),
    })
}

/// Eigenvalues only (ascending); skips all eigenvector bookkeeping.
pub fn jacobi_eigenvalues(a: &Matrix, policy: &NumericPolicy) -> Result<Vec<f64>, LinalgError> {
    Ok(jacobi_inner(a, false, policy)?.0)
}

/// `(lambda_min, lambda_max)` of a small symmetric matrix.
///
/// Dimension is capped by `policy.eigen_dim_cap`; this entry point exists
/// for subset Gram blocks, not whole-problem spectra.
pub fn symmetric_eigen_extremes(a: &Matrix) -> Result<(f64, f64), LinalgError> {
    symmetric_eigen_extremes_with(a, &NumericPolicy::default())
}

pub fn symmetric_eigen_extremes_with(
    a: &Matrix,
    policy: &NumericPolicy,
) -> Result<(f64, f64), LinalgError> {
    if a.rows() > policy.eigen_dim_cap {
        return Err(LinalgError::EigenDimensionCap {
            dim: a.rows(),
            cap: policy.eigen_dim_cap,
        });
    }
    let values = jacobi_eigenvalues(a, policy)?;
    Ok((values[0], values[values.len() - 1]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_eigenvalues() {
        let (lo, hi) = symmetric_eigen_extremes(&Matrix::identity(2)).unwrap();
        assert!((lo - 1.0).abs() < 1e-14 && (hi - 1.0).abs() < 1e-14);
    }

    #[test]
    fn all_ones_block() {
        let a = Matrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let (lo, hi) = symmetric_eigen_extremes(&a).unwrap();
        assert!(lo.abs() < 1e-12);
        assert!((hi - 2.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_asymmetric_input() {
        let a = Matrix::from_rows(&[vec![1.0, 0.3], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(
            symmetric_eigen_extremes(&a),
            Err(LinalgError::Asymmetric { .. })
        ));
    }

    #[test]
    fn enforces_dimension_cap() {
        let a = Matrix::identity(65);
        assert!(matches!(
            symmetric_eigen_extremes(&a),
            Err(LinalgError::EigenDimensionCap { dim: 65, cap: 64 })
        ));
    }

    #[test]
    fn eigenvectors_reconstruct() {
        let a = Matrix::from_rows(&[
            vec![4.0, 1.0, 0.5],
            vec![1.0, 3.0, -0.2],
            vec![0.5, -0.2, 2.0],
        ])
        .unwrap();
        let eig = jacobi_eigen(&a, &NumericPolicy::default()).unwrap();
        // A v = lambda v for each pair.
        for k in 0..3 {
            let v = eig.vectors.column(k);
            let av = a.matvec(&v).unwrap();
            for i in 0..3 {
                assert!((av[i] - eig.values[k] * v[i]).abs() < 1e-10);
            }
        }
    }
}
