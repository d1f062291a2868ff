//! Central numeric tolerances.
//!
//! Every tolerance-sensitive kernel takes a [`NumericPolicy`] (or uses
//! [`NumericPolicy::default`]), so tests can tighten or loosen the whole
//! stack from one place instead of chasing magic numbers per call site.

/// Tolerances shared by the linear-algebra kernels and their callers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericPolicy {
    /// Cholesky pivot acceptance: a pivot at or below
    /// `pivot_tol * max_diagonal` means "not positive definite".
    pub pivot_tol: f64,
    /// Residual scale used by solve post-conditions and feasibility checks.
    pub residual_tol: f64,
    /// Allowed relative asymmetry before a matrix is rejected as input to a
    /// symmetric eigensolver or Cholesky factorization.
    pub symmetry_tol: f64,
    /// QR rank test: `|R[j,j]| < rank_tol * max_k |R[k,k]|` is rank deficient.
    pub rank_tol: f64,
    /// Sample variance below this is treated as a constant (degenerate) vector.
    pub variance_tol: f64,
    /// Columns with l2 norm at or below this cannot be standardized.
    pub zero_column_tol: f64,
    /// Hard cap on the dimension accepted by `symmetric_eigen_extremes`;
    /// it is meant for small subset Gram blocks, not full problems.
    pub eigen_dim_cap: usize,
}

impl Default for NumericPolicy {
    fn default() -> Self {
        Self {
            pivot_tol: 1e-12,
            residual_tol: 1e-8,
            symmetry_tol: 1e-10,
            rank_tol: 1e-10,
            variance_tol: 1e-14,
            zero_column_tol: 1e-12,
            eigen_dim_cap: 64,
        }
    }
}
