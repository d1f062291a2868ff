//! Dense linear programming.
//!
//! Problems are stated as
//!
//! ```text
//! minimize    c'x
//! subject to  A x  = b          (equalities)
//!             G x <= h          (inequalities)
//!             lower <= x <= upper
//! ```
//!
//! and solved by a primal–dual interior-point method (Mehrotra
//! predictor–corrector; see [`solver`]). Everything is dense: the problems
//! this crate generates have a few thousand variables at most.

mod solver;

use crate::linalg::{norm_inf, LinalgError, Matrix};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LpError {
    #[error("inconsistent problem dimensions: {0}")]
    Dimensions(String),
    #[error("non-finite coefficient in {0}")]
    NonFinite(&'static str),
    #[error("bound for variable {index}: lower {lower} exceeds upper {upper}")]
    BoundOrder { index: usize, lower: f64, upper: f64 },
    #[error("invalid solver options: {0}")]
    InvalidOptions(String),
    #[error("numerical breakdown at iteration {iteration}: non-finite iterate")]
    Breakdown { iteration: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A dense linear program. Construct through [`LinearProgram::minimize`].
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub(crate) c: Vec<f64>,
    pub(crate) eq: Option<(Matrix, Vec<f64>)>,
    pub(crate) ineq: Option<(Matrix, Vec<f64>)>,
    pub(crate) lower: Vec<f64>,
    pub(crate) upper: Vec<f64>,
}

impl LinearProgram {
    /// Start building `minimize c'x`.
    pub fn minimize(c: Vec<f64>) -> LpBuilder {
        LpBuilder {
            c,
            eq: None,
            ineq: None,
            lower: None,
            upper: None,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.c.len()
    }

    pub fn objective(&self) -> &[f64] {
        &self.c
    }

    pub fn equalities(&self) -> Option<(&Matrix, &[f64])> {
        self.eq.as_ref().map(|(a, b)| (a, b.as_slice()))
    }

    pub fn inequalities(&self) -> Option<(&Matrix, &[f64])> {
        self.ineq.as_ref().map(|(g, h)| (g, h.as_slice()))
    }

    pub fn bounds(&self) -> (&[f64], &[f64]) {
        (&self.lower, &self.upper)
    }
}

/// Builder for [`LinearProgram`]; `build` validates dimensions and finiteness.
#[derive(Debug, Clone)]
pub struct LpBuilder {
    c: Vec<f64>,
    eq: Option<(Matrix, Vec<f64>)>,
    ineq: Option<(Matrix, Vec<f64>)>,
    lower: Option<Vec<f64>>,
    upper: Option<Vec<f64>>,
}

impl LpBuilder {
    /// Add `A x = b`.
    pub fn equalities(mut self, a: Matrix, b: Vec<f64>) -> Self {
        self.eq = Some((a, b));
        self
    }

    /// Add `G x <= h`.
    pub fn inequalities(mut self, g: Matrix, h: Vec<f64>) -> Self {
        self.ineq = Some((g, h));
        self
    }

    /// Per-variable bounds; use `f64::NEG_INFINITY` / `f64::INFINITY` for
    /// unbounded entries. Variables default to free.
    pub fn bounds(mut self, lower: Vec<f64>, upper: Vec<f64>) -> Self {
        self.lower = Some(lower);
        self.upper = Some(upper);
        self
    }

    pub fn build(self) -> Result<LinearProgram, LpError> {
        let n = self.c.len();
        if n == 0 {
            return Err(LpError::Dimensions("objective is empty".into()));
        }
        if self.c.iter().any(|v| !v.is_finite()) {
            return Err(LpError::NonFinite("objective"));
        }
        if let Some((a, b)) = &self.eq {
            if a.cols() != n {
                return Err(LpError::Dimensions(format!(
                    "equality matrix has {} columns, expected {n}",
                    a.cols()
                )));
            }
            if a.rows() != b.len() {
                return Err(LpError::Dimensions(format!(
                    "equality rhs has {} entries for {} rows",
                    b.len(),
                    a.rows()
                )));
            }
            if b.iter().any(|v| !v.is_finite()) {
                return Err(LpError::NonFinite("equality rhs"));
            }
        }
        if let Some((g, h)) = &self.ineq {
            if g.cols() != n {
                return Err(LpError::Dimensions(format!(
                    "inequality matrix has {} columns, expected {n}",
                    g.cols()
                )));
            }
            if g.rows() != h.len() {
                return Err(LpError::Dimensions(format!(
                    "inequality rhs has {} entries for {} rows",
                    h.len(),
                    g.rows()
                )));
            }
            if h.iter().any(|v| !v.is_finite()) {
                return Err(LpError::NonFinite("inequality rhs"));
            }
        }
        let lower = self.lower.unwrap_or_else(|| vec![f64::NEG_INFINITY; n]);
        let upper = self.upper.unwrap_or_else(|| vec![f64::INFINITY; n]);
        if lower.len() != n || upper.len() != n {
            return Err(LpError::Dimensions(format!(
                "bounds have lengths {}/{}, expected {n}",
                lower.len(),
                upper.len()
            )));
        }
        for (i, (&l, &u)) in lower.iter().zip(&upper).enumerate() {
            if l.is_nan() || u.is_nan() || l == f64::INFINITY || u == f64::NEG_INFINITY {
                return Err(LpError::NonFinite("bounds"));
            }
            if l > u {
                return Err(LpError::BoundOrder {
                    index: i,
                    lower: l,
                    upper: u,
                });
            }
        }
        Ok(LinearProgram {
            c: self.c,
            eq: self.eq,
            ineq: self.ineq,
            lower,
            upper,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

/// Infeasibility / unboundedness certificate recorded in the diagnostics.
#[derive(Debug, Clone, Serialize)]
pub enum Certificate {
    /// Farkas certificate `(y, z)`: `A'y + G'z ~ 0`, `z >= 0`,
    /// `b'y + h'z < 0`.
    PrimalInfeasible { dual_eq: Vec<f64>, dual_ineq: Vec<f64> },
    /// Improving ray `d`: `A d ~ 0`, `G d <= 0`, `c'd < 0`.
    Unbounded { direction: Vec<f64> },
}

/// Convergence data for a solve; residuals are relative to problem scale.
#[derive(Debug, Clone, Serialize)]
pub struct LpDiagnostics {
    pub dual_residual: f64,
    pub primal_eq_residual: f64,
    pub primal_ineq_residual: f64,
    /// Average complementarity `s'z / m` at exit.
    pub complementarity_mu: f64,
    /// Multipliers for finite lower/upper bounds (zero where unbounded).
    pub dual_lower: Vec<f64>,
    pub dual_upper: Vec<f64>,
    /// Cholesky pivots clamped during the solve.
    pub regularized_pivots: usize,
    /// Entries of `x` above `1e-8 * max(1, |x|_inf)`; a cheap sparsity probe.
    pub approx_nonzeros: usize,
    pub certificate: Option<Certificate>,
}

/// Solver output. `status == Optimal` guarantees `duality_gap` and the
/// relative feasibility residuals are at or below the requested tolerances.
#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    pub x: Vec<f64>,
    pub objective_value: f64,
    /// Multipliers `y` with stationarity `c + A'y + G'z = 0`; the dual
    /// objective is `-b'y - h'z` (plus bound terms).
    pub dual_eq: Vec<f64>,
    /// Multipliers `z >= 0` for the caller's inequality rows.
    pub dual_ineq: Vec<f64>,
    pub iterations: usize,
    /// Relative duality gap `s'z / (1 + |c'x|)` at exit.
    pub duality_gap: f64,
    pub diagnostics: LpDiagnostics,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

/// Options for [`solve_lp`].
#[derive(Debug, Clone)]
pub struct SolverOptions {
    pub max_iterations: usize,
    pub gap_tolerance: f64,
    pub feasibility_tolerance: f64,
    /// Starting point for the primal variables. The default is a
    /// least-squares point; interior-point behavior is known to depend on
    /// this, so it is exposed for experimentation.
    pub initial_point: InitialPoint,
}

#[derive(Debug, Clone)]
pub enum InitialPoint {
    Default,
    Supplied(Vec<f64>),
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            max_iterations: 100,
            gap_tolerance: 1e-8,
            feasibility_tolerance: 1e-8,
            initial_point: InitialPoint::Default,
        }
    }
}

/// Solve a linear program.
///
/// Statuses other than `Optimal` are reported in the solution rather than as
/// errors; [`LpError::Breakdown`] is reserved for non-finite iterates.
pub fn solve_lp(lp: &LinearProgram, opts: &SolverOptions) -> Result<LpSolution, LpError> {
    solver::solve(lp, opts)
}

/// Constraint violation summary for a candidate point.
#[derive(Debug, Clone, Serialize)]
pub struct FeasibilityReport {
    pub max_eq_violation: f64,
    pub max_ineq_violation: f64,
    pub max_bound_violation: f64,
    pub tolerance: f64,
    pub feasible: bool,
}

/// Measure how far `x` is from satisfying every constraint class of `lp`.
pub fn feasibility_check(
    lp: &LinearProgram,
    x: &[f64],
    tol: f64,
) -> Result<FeasibilityReport, LpError> {
    if x.len() != lp.num_vars() {
        return Err(LpError::Dimensions(format!(
            "point has length {}, expected {}",
            x.len(),
            lp.num_vars()
        )));
    }
    let mut max_eq = 0.0_f64;
    if let Some((a, b)) = &lp.eq {
        let ax = a.matvec(x)?;
        for (r, (&lhs, &rhs)) in ax.iter().zip(b).enumerate() {
            let _ = r;
            max_eq = max_eq.max((lhs - rhs).abs());
        }
    }
    let mut max_ineq = 0.0_f64;
    if let Some((g, h)) = &lp.ineq {
        let gx = g.matvec(x)?;
        for (&lhs, &rhs) in gx.iter().zip(h) {
            max_ineq = max_ineq.max(lhs - rhs);
        }
        max_ineq = max_ineq.max(0.0);
    }
    let mut max_bound = 0.0_f64;
    for ((&xi, &l), &u) in x.iter().zip(&lp.lower).zip(&lp.upper) {
        if l.is_finite() {
            max_bound = max_bound.max(l - xi);
        }
        if u.is_finite() {
            max_bound = max_bound.max(xi - u);
        }
    }
    max_bound = max_bound.max(0.0);
    Ok(FeasibilityReport {
        max_eq_violation: max_eq,
        max_ineq_violation: max_ineq,
        max_bound_violation: max_bound,
        tolerance: tol,
        feasible: max_eq <= tol && max_ineq <= tol && max_bound <= tol,
    })
}

pub(crate) fn relative_gap(gap_abs: f64, objective: f64) -> f64 {
    gap_abs / (1.0 + objective.abs())
}

pub(crate) fn scale_of(v: &[f64]) -> f64 {
    1.0 + norm_inf(v)
}
