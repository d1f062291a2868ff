//! Cholesky factorization of symmetric positive-definite matrices.

use super::{dot, LinalgError, Matrix};
use crate::policy::NumericPolicy;

/// Lower-triangular Cholesky factor `L` with `A = L L^T`.
#[derive(Debug, Clone)]
pub struct Cholesky {
    n: usize,
    // Row-major lower triangle, full n*n storage for simple indexing.
    l: Vec<f64>,
    regularized_pivots: usize,
}

impl Cholesky {
    /// Factor a symmetric positive-definite matrix.
    ///
    /// Symmetry is checked against the policy tolerance; a pivot at or below
    /// `pivot_tol * max_diagonal` aborts with [`LinalgError::SingularMatrix`].
    pub fn factor(a: &Matrix, policy: &NumericPolicy) -> Result<Self, LinalgError> {
        check_symmetric(a, policy)?;
        Self::factor_inner(a, FactorMode::Strict { tol: policy.pivot_tol })
    }

    /// Factor with pivot regularization instead of failure: any pivot below
    /// `pivot_floor` is replaced by `pivot_floor`. Used by the interior-point
    /// solver, whose scaled systems go nearly singular close to optimality.
    pub fn factor_regularized(a: &Matrix, pivot_floor: f64) -> Self {
        Self::factor_inner(a, FactorMode::Regularize { floor: pivot_floor })
            .expect("regularized factorization cannot fail")
    }

    fn factor_inner(a: &Matrix, mode: FactorMode) -> Result<Self, LinalgError> {
        let n = a.rows();
        let mut l = vec![0.0; n * n];
        let max_diag = (0..n).fold(0.0_f64, |m, i| m.max(a.get(i, i).abs()));
        let mut regularized = 0;
        for i in 0..n {
            for j in 0..=i {
                // Row-Crout: both prefixes are contiguous row slices.
                let s = dot(&l[i * n..i * n + j], &l[j * n..j * n + j]);
                let v = a.get(i, j) - s;
                if i == j {
                    let mut pivot = v;
                    match mode {
                        FactorMode::Strict { tol } => {
                            if pivot <= tol * max_diag.max(1e-300) {
                                return Err(LinalgError::SingularMatrix { index: i, pivot });
                            }
                        }
                        FactorMode::Regularize { floor } => {
                            if pivot < floor {
                                pivot = floor;
                                regularized += 1;
                            }
                        }
                    }
                    l[i * n + i] = pivot.sqrt();
                } else {
                    l[i * n + j] = v / l[j * n + j];
                }
            }
        }
        Ok(Self {
            n,
            l,
            regularized_pivots: regularized,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Number of pivots clamped by `factor_regularized`; 0 for strict factors.
    pub fn regularized_pivots(&self) -> usize {
        self.regularized_pivots
    }

    /// Solve `L t = b` (forward substitution).
    pub fn forward(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut t = vec![0.0; n];
        for i in 0..n {
            let s = dot(&self.l[i * n..i * n + i], &t[..i]);
            t[i] = (b[i] - s) / self.l[i * n + i];
        }
        t
    }

    /// Solve `L^T x = t` (back substitution).
    pub fn backward(&self, t: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x = t.to_vec();
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in i + 1..n {
                s -= self.l[k * n + i] * x[k];
            }
            x[i] = s / self.l[i * n + i];
        }
        x
    }

    /// Solve `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        self.backward(&self.forward(b))
    }
}

enum FactorMode {
    Strict { tol: f64 },
    Regularize { floor: f64 },
}

fn check_symmetric(a: &Matrix, policy: &NumericPolicy) -> Result<(), LinalgError> {
    if a.rows() != a.cols() {
        return Err(LinalgError::DimensionMismatch {
            op: "cholesky",
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

/// Solve `A x = b` for symmetric positive-definite `A`.
pub fn cholesky_solve(a: &Matrix, b: &[f64]) -> Result<Vec<f64>, LinalgError> {
    cholesky_solve_with(a, b, &NumericPolicy::default())
}

pub fn cholesky_solve_with(
    a: &Matrix,
    b: &[f64],
    policy: &NumericPolicy,
) -> Result<Vec<f64>, LinalgError> {
    if b.len() != a.rows() {
        return Err(LinalgError::LengthMismatch {
            op: "cholesky_solve",
            left: a.rows(),
            right: b.len(),
        });
    }
    Ok(Cholesky::factor(a, policy)?.solve(b))
}
