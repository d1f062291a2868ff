//! Least-squares solvers: Householder QR and the minimum-norm pseudo-inverse
//! solution.

use super::{dot, eigen, LinalgError, Matrix};
use crate::policy::NumericPolicy;

/// Least-squares solution of `X beta ~ y` via Householder QR.
///
/// Requires `X.rows() >= X.cols()` and full column rank within the policy
/// rank tolerance; callers that want something defined for every matrix use
/// [`pseudo_inverse_ls`] instead.
pub fn qr_least_squares(x: &Matrix, y: &[f64]) -> Result<Vec<f64>, LinalgError> {
    qr_least_squares_with(x, y, &NumericPolicy::default())
}

pub fn qr_least_squares_with(
    x: &Matrix,
    y: &[f64],
    policy: &NumericPolicy,
) -> Result<Vec<f64>, LinalgError> {
    let n = x.rows();
    let p = x.cols();
    if n < p {
        return Err(LinalgError::DimensionMismatch {
            op: "qr_least_squares",
            left_rows: n,
            left_cols: p,
            right_rows: p,
            right_cols: p,
        });
    }
    if y.len() != n {
        return Err(LinalgError::LengthMismatch {
            op: "qr_least_squares",
            left: n,
            right: y.len(),
        });
    }

    // Householder QR, reflectors applied to the rhs on the fly.
    let mut a: Vec<f64> = x.as_slice().to_vec();
    let mut rhs = y.to_vec();
    for j in 0..p {
        // Column norm below the diagonal.
        let mut norm_sq = 0.0;
        for i in j..n {
            let v = a[i * p + j];
            norm_sq += v * v;
        }
        let norm = norm_sq.sqrt();
        if norm > 0.0 {
            let ajj = a[j * p + j];
            let alpha = if ajj >= 0.0 { -norm } else { norm };
            // Householder vector v = col - alpha*e_j, stored implicitly.
            let v0 = ajj - alpha;
            let beta = -1.0 / (alpha * v0);
            // Apply I - beta v v^T to the trailing columns and rhs.
            let mut v = vec![0.0; n - j];
            v[0] = v0;
            for i in j + 1..n {
                v[i - j] = a[i * p + j];
            }
            for col in j..p {
                let mut s = 0.0;
                for i in j..n {
                    s += v[i - j] * a[i * p + col];
                }
                s *= beta;
                for i in j..n {
                    a[i * p + col] -= s * v[i - j];
                }
            }
            let mut s = 0.0;
            for i in j..n {
                s += v[i - j] * rhs[i];
            }
            s *= beta;
            for i in j..n {
                rhs[i] -= s * v[i - j];
            }
            a[j * p + j] = alpha;
        }
    }

    // Rank check on the R diagonal.
    let max_diag = (0..p).fold(0.0_f64, |m, j| m.max(a[j * p + j].abs()));
    for j in 0..p {
        let value = a[j * p + j].abs();
        if value < policy.rank_tol * max_diag.max(1e-300) {
            return Err(LinalgError::RankDeficient { column: j, value });
        }
    }

    // Back substitution on R beta = Q^T y.
    let mut beta = vec![0.0; p];
    for j in (0..p).rev() {
        let mut s = rhs[j];
        for k in j + 1..p {
            s -= a[j * p + k] * beta[k];
        }
        beta[j] = s / a[j * p + j];
    }
    Ok(beta)
}

/// Minimum-l2-norm least-squares solution `X^+ y`, defined for any shape.
///
/// Computed through the eigendecomposition of the smaller Gram matrix
/// (`X^T X` or `X X^T`), with eigenvalues below `1e-12 * lambda_max`
/// treated as zero. This is the `(X^T X)^- X^T y` generalized least-squares
/// estimator, and doubles as the representability check for basis pursuit.
pub fn pseudo_inverse_ls(x: &Matrix, y: &[f64]) -> Result<Vec<f64>, LinalgError> {
    let n = x.rows();
    let p = x.cols();
    if y.len() != n {
        return Err(LinalgError::LengthMismatch {
            op: "pseudo_inverse_ls",
            left: n,
            right: y.len(),
        });
    }
    let policy = NumericPolicy::default();

    // Eigen-decompose the smaller of X^T X (p x p) and X X^T (n x n).
    let (gram, target): (Matrix, Vec<f64>) = if n >= p {
        (x.gram(), x.transpose_matvec(y)?)
    } else {
        (x.transpose().gram(), y.to_vec())
    };
    let eig = eigen::jacobi_eigen(&gram, &policy)?;
    let lambda_max = eig.values.last().copied().unwrap_or(0.0).max(0.0);
    let cut = lambda_max * 1e-12;

    // Apply G^+ = V diag(1/lambda) V^T with small eigenvalues dropped.
    let dim = gram.rows();
    let mut coeffs = vec![0.0; dim];
    for k in 0..dim {
        let lambda = eig.values[k];
        if lambda > cut && lambda > 0.0 {
            let vk = eig.vectors.column(k);
            let scale = dot(&vk, &target) / lambda;
            for i in 0..dim {
                coeffs[i] += scale * vk[i];
            }
        }
    }

    if n >= p {
        // beta = (X^T X)^+ X^T y
        Ok(coeffs)
    } else {
        // beta = X^T (X X^T)^+ y
        x.transpose_matvec(&coeffs)
    }
}
