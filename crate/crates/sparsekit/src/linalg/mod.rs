//! Dense linear algebra kernel.
//!
//! Plain row-major `f64` storage throughout. The regimes this crate targets
//! (at most a few thousand columns, a few hundred rows) fit comfortably in
//! memory, so there is no sparse storage, no BLAS binding and no iterative
//! solver — just careful dense factorizations with explicit tolerances.

mod cholesky;
mod eigen;
mod leastsq;

pub use cholesky::{cholesky_solve, Cholesky};
pub use eigen::{jacobi_eigen, jacobi_eigenvalues, symmetric_eigen_extremes, SymmetricEigen};
pub use leastsq::{pseudo_inverse_ls, qr_least_squares};

use crate::policy::NumericPolicy;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors surfaced by the dense kernels.
#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("dimension mismatch in {op}: {left_rows}x{left_cols} against {right_rows}x{right_cols}")]
    DimensionMismatch {
        op: &'static str,
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },
    #[error("length mismatch in {op}: {left} against {right}")]
    LengthMismatch {
        op: &'static str,
        left: usize,
        right: usize,
    },
    #[error("matrix must have at least one row and one column")]
    Empty,
    #[error("entry count {got} does not match {rows}x{cols}")]
    BadEntryCount { rows: usize, cols: usize, got: usize },
    #[error("non-finite entry at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is not positive definite: pivot {pivot:e} at index {index}")]
    SingularMatrix { index: usize, pivot: f64 },
    #[error("rank-deficient matrix: |R[{column},{column}]| = {value:e} is below tolerance")]
    RankDeficient { column: usize, value: f64 },
    #[error("matrix is not symmetric: |A[{row},{col}] - A[{col},{row}]| = {deviation:e}")]
    Asymmetric {
        row: usize,
        col: usize,
        deviation: f64,
    },
    #[error("dimension {dim} exceeds the extreme-eigenvalue cap of {cap}")]
    EigenDimensionCap { dim: usize, cap: usize },
    #[error("column {column} has near-zero norm {norm:e}; cannot standardize")]
    ZeroColumn { column: usize, norm: f64 },
    #[error("degenerate sample: variance {variance:e} is below tolerance")]
    DegenerateSample { variance: f64 },
    #[error("need at least {needed} entries, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("{what} failed to converge")]
    ConvergenceFailure { what: &'static str },
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
}

/// Dense row-major matrix. Constructors reject non-finite entries, so a
/// `Matrix` always holds finite numbers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    /// Build from row-major data, validating shape and finiteness.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, LinalgError> {
        if rows == 0 || cols == 0 {
            return Err(LinalgError::Empty);
        }
        if data.len() != rows * cols {
            return Err(LinalgError::BadEntryCount {
                rows,
                cols,
                got: data.len(),
            });
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(LinalgError::NonFinite {
                row: pos / cols,
                col: pos % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Build from a slice of rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, LinalgError> {
        if rows.is_empty() {
            return Err(LinalgError::Empty);
        }
        let cols = rows[0].len();
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(LinalgError::LengthMismatch {
                    op: "from_rows",
                    left: cols,
                    right: rows[i].len(),
                });
            }
        }
        let data: Vec<f64> = rows.iter().flatten().copied().collect();
        Self::new(rows.len(), cols, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.data[row * self.cols + col] = value;
    }

    #[inline]
    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, row: usize) -> &mut [f64] {
        &mut self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn column(&self, col: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, col)).collect()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        out
    }

    /// `self * rhs`; errors when the inner dimensions disagree.
    pub fn matmul(&self, rhs: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::DimensionMismatch {
                op: "matmul",
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: rhs.rows,
                right_cols: rhs.cols,
            });
        }
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        // i-k-j order so the inner loop runs along contiguous rows.
        for i in 0..self.rows {
            let lhs_row = self.row(i);
            let out_row = out.row_mut(i);
            for (k, &a_ik) in lhs_row.iter().enumerate() {
                if a_ik == 0.0 {
                    continue;
                }
                let rhs_row = rhs.row(k);
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a_ik * b;
                }
            }
        }
        Ok(out)
    }

    /// `self * v`.
    pub fn matvec(&self, v: &[f64]) -> Result<Vec<f64>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::LengthMismatch {
                op: "matvec",
                left: self.cols,
                right: v.len(),
            });
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), v)).collect())
    }

    /// `self^T * v` without forming the transpose.
    pub fn transpose_matvec(&self, v: &[f64]) -> Result<Vec<f64>, LinalgError> {
        if v.len() != self.rows {
            return Err(LinalgError::LengthMismatch {
                op: "transpose_matvec",
                left: self.rows,
                right: v.len(),
            });
        }
        let mut out = vec![0.0; self.cols];
        for (i, &vi) in v.iter().enumerate() {
            if vi == 0.0 {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                *o += vi * a;
            }
        }
        Ok(out)
    }

    /// Copy of the columns listed in `idx`, in that order.
    pub fn select_columns(&self, idx: &[usize]) -> Result<Matrix, LinalgError> {
        if idx.is_empty() {
            return Err(LinalgError::Empty);
        }
        for &j in idx {
            if j >= self.cols {
                return Err(LinalgError::IndexOutOfRange {
                    index: j,
                    dim: self.cols,
                });
            }
        }
        let mut out = Matrix::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            let src = self.row(i);
            let dst = out.row_mut(i);
            for (d, &j) in dst.iter_mut().zip(idx) {
                *d = src[j];
            }
        }
        Ok(out)
    }

    /// Gram matrix `self^T * self`, filled symmetrically.
    pub fn gram(&self) -> Matrix {
        let p = self.cols;
        let t = self.transpose();
        let mut out = Matrix::zeros(p, p);
        for j in 0..p {
            let cj = t.row(j);
            for k in j..p {
                let v = dot(cj, t.row(k));
                out.set(j, k, v);
                out.set(k, j, v);
            }
        }
        out
    }
}

/// Dot product with four accumulators: fixed summation order (deterministic)
/// and enough instruction-level parallelism to vectorize.
#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let n = a.len();
    let chunks = n / 4;
    let (mut s0, mut s1, mut s2, mut s3) = (0.0, 0.0, 0.0, 0.0);
    for c in 0..chunks {
        let i = 4 * c;
        s0 += a[i] * b[i];
        s1 += a[i + 1] * b[i + 1];
        s2 += a[i + 2] * b[i + 2];
        s3 += a[i + 3] * b[i + 3];
    }
    let mut tail = 0.0;
    for i in 4 * chunks..n {
        tail += a[i] * b[i];
    }
    ((s0 + s1) + (s2 + s3)) + tail
}

/// Euclidean norm.
pub fn norm2(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

/// Max-absolute-value norm; 0 for an empty slice.
pub fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, &x| m.max(x.abs()))
}

/// `a - b` elementwise.
pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

/// Rescale every column of `x` to unit l2 norm.
///
/// The `sqrt(2 log p)` regularization factor is calibrated for unit-scale
/// columns, so estimators expect their designs to pass through here first.
pub fn column_standardize(x: &Matrix) -> Result<Matrix, LinalgError> {
    column_standardize_with(x, &NumericPolicy::default())
}

pub fn column_standardize_with(x: &Matrix, policy: &NumericPolicy) -> Result<Matrix, LinalgError> {
    let mut out = x.clone();
    for j in 0..x.cols() {
        let norm = norm2(&x.column(j));
        if norm <= policy.zero_column_tol {
            return Err(LinalgError::ZeroColumn { column: j, norm });
        }
        let inv = 1.0 / norm;
        for i in 0..x.rows() {
            out.set(i, j, x.get(i, j) * inv);
        }
    }
    Ok(out)
}

/// Sample Pearson correlation of two equal-length vectors.
///
/// Errors when either vector is (numerically) constant; the result is
/// clamped to `[-1, 1]` against rounding.
pub fn pearson_correlation(x: &[f64], y: &[f64]) -> Result<f64, LinalgError> {
    pearson_correlation_with(x, y, &NumericPolicy::default())
}

pub fn pearson_correlation_with(
    x: &[f64],
    y: &[f64],
    policy: &NumericPolicy,
) -> Result<f64, LinalgError> {
    if x.len() != y.len() {
        return Err(LinalgError::LengthMismatch {
            op: "pearson_correlation",
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(LinalgError::TooShort {
            needed: 2,
            got: x.len(),
        });
    }
    let n = x.len() as f64;
    let mean_x = x.iter().sum::<f64>() / n;
    let mean_y = y.iter().sum::<f64>() / n;
    let xc: Vec<f64> = x.iter().map(|&v| v - mean_x).collect();
    let yc: Vec<f64> = y.iter().map(|&v| v - mean_y).collect();
    let ss_x = dot(&xc, &xc);
    let ss_y = dot(&yc, &yc);
    let denom = n - 1.0;
    for ss in [ss_x, ss_y] {
        let variance = ss / denom;
        if variance <= policy.variance_tol {
            return Err(LinalgError::DegenerateSample { variance });
        }
    }
    let r = dot(&xc, &yc) / (ss_x.sqrt() * ss_y.sqrt());
    Ok(r.clamp(-1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructor_rejects_bad_input() {
        assert!(matches!(
            Matrix::new(0, 2, vec![]),
            Err(LinalgError::Empty)
        ));
        assert!(matches!(
            Matrix::new(2, 2, vec![1.0; 3]),
            Err(LinalgError::BadEntryCount { .. })
        ));
        let err = Matrix::new(2, 2, vec![1.0, f64::NAN, 0.0, 1.0]).unwrap_err();
        assert!(matches!(err, LinalgError::NonFinite { row: 0, col: 1 }));
    }

    #[test]
    fn identity_matmul_is_noop() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0], vec![7.0, 8.0, 9.0]])
            .unwrap();
        let prod = Matrix::identity(3).matmul(&a).unwrap();
        assert_eq!(prod, a);
    }

    #[test]
    fn matmul_hand_case() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let b = Matrix::from_rows(&[vec![1.0], vec![1.0]]).unwrap();
        let c = a.matmul(&b).unwrap();
        assert_eq!(c.as_slice(), &[3.0, 7.0]);
    }

    #[test]
    fn matmul_dimension_error() {
        let a = Matrix::zeros(2, 3);
        let b = Matrix::zeros(2, 3);
        assert!(matches!(
            a.matmul(&b),
            Err(LinalgError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn standardize_three_four_five() {
        let x = Matrix::from_rows(&[vec![3.0], vec![4.0]]).unwrap();
        let s = column_standardize(&x).unwrap();
        assert!((s.get(0, 0) - 0.6).abs() < 1e-15);
        assert!((s.get(1, 0) - 0.8).abs() < 1e-15);
    }

    #[test]
    fn standardize_unit_columns_unchanged() {
        let x = Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let s = column_standardize(&x).unwrap();
        assert_eq!(s, x);
    }

    #[test]
    fn standardize_rejects_zero_column() {
        let x = Matrix::from_rows(&[vec![1.0, 0.0], vec![1.0, 0.0]]).unwrap();
        let err = column_standardize(&x).unwrap_err();
        assert!(matches!(err, LinalgError::ZeroColumn { column: 1, .. }));
    }

    #[test]
    fn pearson_extremes_and_errors() {
        let x = vec![1.0, 2.0, 4.0];
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        assert!((pearson_correlation(&x, &x).unwrap() - 1.0).abs() < 1e-14);
        assert!((pearson_correlation(&x, &neg).unwrap() + 1.0).abs() < 1e-14);
        let constant = vec![2.0, 2.0, 2.0];
        assert!(matches!(
            pearson_correlation(&x, &constant),
            Err(LinalgError::DegenerateSample { .. })
        ));
        assert!(matches!(
            pearson_correlation(&x, &[1.0, 2.0]),
            Err(LinalgError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn select_columns_reorders() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0]]).unwrap();
        let picked = a.select_columns(&[2, 0]).unwrap();
        assert_eq!(picked.as_slice(), &[3.0, 1.0, 6.0, 4.0]);
        assert!(picked.rows() == 2 && picked.cols() == 2);
    }
}
