//! Sparse regression estimators.
//!
//! All of them act on a [`RegressionProblem`] `y = X beta + eps` with known
//! noise level `sigma`:
//!
//! * [`dantzig_selector`]: `min |beta|_1` s.t.
//!   `|X'(y - X beta)|_inf <= lambda * sigma`, solved as a linear program in
//!   the `(beta, u)` bounding-pair encoding (`2p` variables, `4p` rows).
//! * [`basis_pursuit`]: `min |beta|_1` s.t. `X beta = y` (noiseless).
//! * [`gauss_dantzig`]: Dantzig selector for support selection, ordinary
//!   least squares refit on the selected columns to undo the shrinkage.
//! * [`ols_on_support`]: the refit primitive.
//! * [`lasso_cd`]: coordinate-descent Lasso baseline.

use crate::linalg::{
    self, column_standardize, dot, norm_inf, pseudo_inverse_ls, qr_least_squares, sub,
    LinalgError, Matrix,
};
use crate::lp::{
    feasibility_check, solve_lp, LinearProgram, LpError, LpSolution, LpStatus, SolverOptions,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Fallback relative support threshold for estimators that do not take
/// [`DantzigOptions`].
pub const DEFAULT_SUPPORT_THRESHOLD: f64 = 1e-4;

#[derive(Debug, Error)]
pub enum EstimatorError {
    #[error("response has length {got}, expected {expected}")]
    ResponseLength { expected: usize, got: usize },
    #[error("sigma must be a finite number >= 0, got {0}")]
    InvalidSigma(f64),
    #[error("sigma is zero: the noiseless case is basis_pursuit, not the Dantzig selector")]
    SigmaRequired,
    #[error("invalid options: {0}")]
    InvalidOptions(String),
    #[error("need at least 2 predictors for the default lambda, got {0}")]
    TooFewPredictors(usize),
    #[error("y is not representable: least-squares residual sup-norm {residual:e}")]
    NotRepresentable { residual: f64 },
    #[error("support index {index} out of range for p = {p}")]
    SupportOutOfRange { index: usize, p: usize },
    #[error("support has {support} columns but only {rows} observations")]
    SupportExceedsRows { support: usize, rows: usize },
    #[error("linear program did not converge (status {status:?} after {iterations} iterations)")]
    NotConverged { status: LpStatus, iterations: usize },
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("coordinate descent hit the pass limit {max_pass}")]
    IterationLimit { max_pass: usize, last: Box<Estimate> },
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Regression data `y = X beta + eps` with known noise level.
///
/// `sigma == 0` marks the noiseless setting, which only [`basis_pursuit`]
/// accepts. The `standardized` flag records whether the columns of `X` have
/// unit l2 norm — the scale the canonical `sqrt(2 log p)` factor assumes.
#[derive(Debug, Clone)]
pub struct RegressionProblem {
    x: Matrix,
    y: Vec<f64>,
    sigma: f64,
    standardized: bool,
}

impl RegressionProblem {
    pub fn new(x: Matrix, y: Vec<f64>, sigma: f64) -> Result<Self, EstimatorError> {
        if y.len() != x.rows() {
            return Err(EstimatorError::ResponseLength {
                expected: x.rows(),
                got: y.len(),
            });
        }
        if !(sigma.is_finite() && sigma >= 0.0) {
            return Err(EstimatorError::InvalidSigma(sigma));
        }
        if let Some(pos) = y.iter().position(|v| !v.is_finite()) {
            return Err(EstimatorError::Linalg(LinalgError::NonFinite {
                row: pos,
                col: 0,
            }));
        }
        Ok(Self {
            x,
            y,
            sigma,
            standardized: false,
        })
    }

    /// Rescale columns of `X` to unit l2 norm and mark the problem as
    /// standardized.
    pub fn standardize(self) -> Result<Self, EstimatorError> {
        let x = column_standardize(&self.x)?;
        Ok(Self {
            x,
            standardized: true,
            ..self
        })
    }

    /// Mark the design as already standardized without touching the data.
    pub fn assume_standardized(mut self) -> Self {
        self.standardized = true;
        self
    }

    pub fn x(&self) -> &Matrix {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn is_standardized(&self) -> bool {
        self.standardized
    }

    pub fn num_observations(&self) -> usize {
        self.x.rows()
    }

    pub fn num_predictors(&self) -> usize {
        self.x.cols()
    }
}

/// Choice of the regularization factor `lambda` in the constraint
/// `|X'r|_inf <= lambda * sigma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum LambdaMode {
    /// `sqrt(2 ln p)` — the canonical choice.
    SqrtTwoLogP,
    /// `sqrt(2 ln n)` — the competing factor in the minimax question.
    SqrtTwoLogN,
    Custom(f64),
}

#[derive(Debug, Clone)]
pub struct DantzigOptions {
    pub lambda_mode: LambdaMode,
    /// Relative support threshold: `j` is selected when
    /// `|beta_j| > support_threshold * |beta|_inf`.
    pub support_threshold: f64,
    pub solver: SolverOptions,
}

impl Default for DantzigOptions {
    fn default() -> Self {
        Self {
            lambda_mode: LambdaMode::SqrtTwoLogP,
            support_threshold: DEFAULT_SUPPORT_THRESHOLD,
            solver: SolverOptions::default(),
        }
    }
}

impl DantzigOptions {
    fn validate(&self) -> Result<(), EstimatorError> {
        if let LambdaMode::Custom(v) = self.lambda_mode {
            if !(v.is_finite() && v > 0.0) {
                return Err(EstimatorError::InvalidOptions(format!(
                    "custom lambda must be positive, got {v}"
                )));
            }
        }
        if !(self.support_threshold > 0.0 && self.support_threshold < 1.0) {
            return Err(EstimatorError::InvalidOptions(format!(
                "support_threshold must lie in (0, 1), got {}",
                self.support_threshold
            )));
        }
        Ok(())
    }

    fn lambda_factor(&self, n: usize, p: usize) -> Result<f64, EstimatorError> {
        match self.lambda_mode {
            LambdaMode::SqrtTwoLogP => default_lambda(p),
            LambdaMode::SqrtTwoLogN => default_lambda(n),
            LambdaMode::Custom(v) => Ok(v),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    DantzigSelector,
    BasisPursuit,
    GaussDantzig,
    Lasso,
}

/// Compact solver telemetry attached to LP-backed estimates.
#[derive(Debug, Clone, Serialize)]
pub struct LpStats {
    pub status: LpStatus,
    pub iterations: usize,
    pub duality_gap: f64,
    pub dual_residual: f64,
    pub primal_ineq_residual: f64,
    /// Entries of the LP variable vector above the sparsity probe threshold;
    /// a direct look at how sparse the solver's answer actually is.
    pub approx_nonzeros: usize,
}

impl LpStats {
    fn from_solution(sol: &LpSolution) -> Self {
        Self {
            status: sol.status,
            iterations: sol.iterations,
            duality_gap: sol.duality_gap,
            dual_residual: sol.diagnostics.dual_residual,
            primal_ineq_residual: sol.diagnostics.primal_ineq_residual,
            approx_nonzeros: sol.diagnostics.approx_nonzeros,
        }
    }
}

/// A fitted coefficient vector plus everything needed to audit it.
#[derive(Debug, Clone, Serialize)]
pub struct Estimate {
    pub beta: Vec<f64>,
    /// Indices with `|beta_j| > support_threshold * |beta|_inf`, ascending.
    pub support: Vec<usize>,
    /// `y - X beta` exactly as computed.
    pub residual: Vec<f64>,
    pub method: Method,
    /// The lambda *factor* for Dantzig-type methods (the constraint bound is
    /// `lambda_used * sigma`), the absolute penalty for the Lasso, 0 for
    /// basis pursuit.
    pub lambda_used: f64,
    pub lp_stats: Option<LpStats>,
    pub warnings: Vec<String>,
}

impl Estimate {
    pub fn l1_norm(&self) -> f64 {
        self.beta.iter().map(|v| v.abs()).sum()
    }

    pub fn sq_error(&self, truth: &[f64]) -> f64 {
        self.beta
            .iter()
            .zip(truth)
            .map(|(&a, &b)| (a - b) * (a - b))
            .sum()
    }
}

/// The canonical regularization factor `sqrt(2 ln p)`.
///
/// Natural logarithm: the factor originates from the Gaussian tail bound
/// `P(max of p standard normals > sqrt(2 ln p)) -> 0`.
pub fn default_lambda(p: usize) -> Result<f64, EstimatorError> {
    if p < 2 {
        return Err(EstimatorError::TooFewPredictors(p));
    }
    Ok((2.0 * (p as f64).ln()).sqrt())
}

/// Indices with `|beta_j| > relative_threshold * |beta|_inf`.
///
/// Interior-point solutions are never exactly zero, so support extraction
/// is relative to the largest coefficient; `beta = 0` yields the empty set.
/// `relative_threshold` must lie in `(0, 1)`.
pub fn support_of(beta: &[f64], relative_threshold: f64) -> Vec<usize> {
    assert!(
        relative_threshold > 0.0 && relative_threshold < 1.0,
        "relative_threshold must lie in (0, 1)"
    );
    let max = norm_inf(beta);
    if max == 0.0 {
        return Vec::new();
    }
    let cut = relative_threshold * max;
    beta.iter()
        .enumerate()
        .filter(|(_, v)| v.abs() > cut)
        .map(|(j, _)| j)
        .collect()
}

fn zero_estimate(prob: &RegressionProblem, method: Method, lambda_used: f64) -> Estimate {
    Estimate {
        beta: vec![0.0; prob.num_predictors()],
        support: Vec::new(),
        residual: prob.y.clone(),
        method,
        lambda_used,
        lp_stats: None,
        warnings: Vec::new(),
    }
}

/// Build the `(beta, u)` linear program shared by the Dantzig selector and
/// basis pursuit: variables `(beta, u)`, objective `sum u`, rows
/// `beta - u <= 0` and `-beta - u <= 0`.
fn l1_rows(p: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut rows = Vec::with_capacity(2 * p);
    let mut rhs = Vec::with_capacity(2 * p);
    for j in 0..p {
        let mut r = vec![0.0; 2 * p];
        r[j] = 1.0;
        r[p + j] = -1.0;
        rows.push(r);
        rhs.push(0.0);
        let mut r = vec![0.0; 2 * p];
        r[j] = -1.0;
        r[p + j] = -1.0;
        rows.push(r);
        rhs.push(0.0);
    }
    (rows, rhs)
}

fn run_l1_lp(
    lp: &LinearProgram,
    solver: &SolverOptions,
    p: usize,
) -> Result<(Vec<f64>, LpStats), EstimatorError> {
    let sol = solve_lp(lp, solver)?;
    match sol.status {
        LpStatus::Optimal => {}
        LpStatus::IterationLimit => {
            return Err(EstimatorError::NotConverged {
                status: sol.status,
                iterations: sol.iterations,
            })
        }
        LpStatus::Infeasible | LpStatus::Unbounded => {
            return Err(EstimatorError::InternalInconsistency(format!(
                "l1 program reported {:?}, which a feasibility-checked instance cannot be",
                sol.status
            )))
        }
    }
    let report = feasibility_check(lp, &sol.x, 1e-6)?;
    if !report.feasible {
        return Err(EstimatorError::InternalInconsistency(format!(
            "optimal point violates constraints by {:e}",
            report
                .max_ineq_violation
                .max(report.max_eq_violation)
                .max(report.max_bound_violation)
        )));
    }
    let beta = sol.x[..p].to_vec();
    let stats = LpStats::from_solution(&sol);
    Ok((beta, stats))
}

/// The Dantzig selector:
/// `min |beta|_1` subject to `|X'(y - X beta)|_inf <= lambda * sigma`.
///
/// Zero is feasible exactly when `|X'y|_inf <= lambda * sigma`; that case
/// short-circuits to the exact zero estimate, which also guarantees the LP
/// handed to the solver is feasible.
pub fn dantzig_selector(
    prob: &RegressionProblem,
    opts: &DantzigOptions,
) -> Result<Estimate, EstimatorError> {
    opts.validate()?;
    if prob.sigma == 0.0 {
        return Err(EstimatorError::SigmaRequired);
    }
    let n = prob.num_observations();
    let p = prob.num_predictors();
    let lambda = opts.lambda_factor(n, p)?;
    let bound = lambda * prob.sigma;

    let xty = prob.x.transpose_matvec(&prob.y)?;
    if norm_inf(&xty) <= bound {
        return Ok(zero_estimate(prob, Method::DantzigSelector, lambda));
    }

    // Constraint rows: -u <= beta <= u and -bound <= X'(y - X beta) <= bound,
    // the latter written as -/+ (X'X beta)_j <= bound -/+ (X'y)_j.
    let gram = prob.x.gram();
    let (mut rows, mut rhs) = l1_rows(p);
    for j in 0..p {
        let mut r = vec![0.0; 2 * p];
        r[..p].copy_from_slice(gram.row(j));
        for v in r[..p].iter_mut() {
            *v = -*v;
        }
        rows.push(r);
        rhs.push(bound - xty[j]);
        let mut r = vec![0.0; 2 * p];
        r[..p].copy_from_slice(gram.row(j));
        rows.push(r);
        rhs.push(bound + xty[j]);
    }
    let mut c = vec![0.0; 2 * p];
    c[p..].fill(1.0);
    let lp = LinearProgram::minimize(c)
        .inequalities(Matrix::from_rows(&rows)?, rhs)
        .build()?;

    let (beta, stats) = run_l1_lp(&lp, &opts.solver, p)?;
    let residual = sub(&prob.y, &prob.x.matvec(&beta)?);
    Ok(Estimate {
        support: support_of(&beta, opts.support_threshold),
        residual,
        beta,
        method: Method::DantzigSelector,
        lambda_used: lambda,
        lp_stats: Some(stats),
        warnings: Vec::new(),
    })
}

/// Basis pursuit: `min |beta|_1` subject to `X beta = y`.
///
/// `y` must lie in the column space of `X` (checked through the
/// pseudo-inverse least-squares residual); otherwise the equality system has
/// no solution and the call fails with [`EstimatorError::NotRepresentable`].
pub fn basis_pursuit(
    x: &Matrix,
    y: &[f64],
    solver: &SolverOptions,
) -> Result<Estimate, EstimatorError> {
    if y.len() != x.rows() {
        return Err(EstimatorError::ResponseLength {
            expected: x.rows(),
            got: y.len(),
        });
    }
    let p = x.cols();
    let ls = pseudo_inverse_ls(x, y)?;
    let ls_residual = norm_inf(&sub(y, &x.matvec(&ls)?));
    if ls_residual > 1e-8 * (1.0 + norm_inf(y)) {
        return Err(EstimatorError::NotRepresentable {
            residual: ls_residual,
        });
    }

    let (rows, rhs) = l1_rows(p);
    let mut eq = Matrix::zeros(x.rows(), 2 * p);
    for i in 0..x.rows() {
        eq.row_mut(i)[..p].copy_from_slice(x.row(i));
    }
    let mut c = vec![0.0; 2 * p];
    c[p..].fill(1.0);
    let lp = LinearProgram::minimize(c)
        .equalities(eq, y.to_vec())
        .inequalities(Matrix::from_rows(&rows)?, rhs)
        .build()?;

    let (beta, stats) = run_l1_lp(&lp, solver, p)?;
    let residual = sub(y, &x.matvec(&beta)?);
    let eq_violation = norm_inf(&residual);
    if eq_violation > 1e-6 * (1.0 + norm_inf(y)) {
        return Err(EstimatorError::InternalInconsistency(format!(
            "basis pursuit equality residual {eq_violation:e} above tolerance"
        )));
    }
    Ok(Estimate {
        support: support_of(&beta, DEFAULT_SUPPORT_THRESHOLD),
        residual,
        beta,
        method: Method::BasisPursuit,
        lambda_used: 0.0,
        lp_stats: Some(stats),
        warnings: Vec::new(),
    })
}

/// Ordinary least squares restricted to `support`, zero elsewhere.
///
/// An empty support returns the zero vector; duplicate indices are merged.
pub fn ols_on_support(
    x: &Matrix,
    y: &[f64],
    support: &[usize],
) -> Result<Vec<f64>, EstimatorError> {
    if y.len() != x.rows() {
        return Err(EstimatorError::ResponseLength {
            expected: x.rows(),
            got: y.len(),
        });
    }
    let p = x.cols();
    let mut idx: Vec<usize> = support.to_vec();
    idx.sort_unstable();
    idx.dedup();
    if idx.is_empty() {
        return Ok(vec![0.0; p]);
    }
    if let Some(&bad) = idx.iter().find(|&&j| j >= p) {
        return Err(EstimatorError::SupportOutOfRange { index: bad, p });
    }
    if idx.len() > x.rows() {
        return Err(EstimatorError::SupportExceedsRows {
            support: idx.len(),
            rows: x.rows(),
        });
    }
    let xt = x.select_columns(&idx)?;
    let coef = qr_least_squares(&xt, y)?;
    let mut beta = vec![0.0; p];
    for (&j, &v) in idx.iter().zip(&coef) {
        beta[j] = v;
    }
    Ok(beta)
}

/// Two-stage Gauss–Dantzig selector: Dantzig selector for support selection,
/// least-squares refit on the selected columns.
pub fn gauss_dantzig(
    prob: &RegressionProblem,
    opts: &DantzigOptions,
) -> Result<Estimate, EstimatorError> {
    let stage1 = dantzig_selector(prob, opts)?;
    gauss_dantzig_from_stage1(prob, &stage1, opts.support_threshold)
}

/// Refit stage of [`gauss_dantzig`], reusing an existing Dantzig-selector
/// estimate. Supports larger than `n` are truncated to the `n` largest
/// coefficients in magnitude (ties to the smaller index) with a warning.
pub fn gauss_dantzig_from_stage1(
    prob: &RegressionProblem,
    stage1: &Estimate,
    support_threshold: f64,
) -> Result<Estimate, EstimatorError> {
    let n = prob.num_observations();
    let mut support = stage1.support.clone();
    let mut warnings = stage1.warnings.clone();
    if support.len() > n {
        let mut ranked: Vec<usize> = support.clone();
        // Sort by descending magnitude, ties broken toward smaller index.
        ranked.sort_by(|&a, &b| {
            stage1.beta[b]
                .abs()
                .partial_cmp(&stage1.beta[a].abs())
                .unwrap()
                .then(a.cmp(&b))
        });
        ranked.truncate(n);
        ranked.sort_unstable();
        warnings.push(format!(
            "stage-1 support of size {} exceeds n = {n}; truncated to the {n} largest coefficients",
            support.len()
        ));
        support = ranked;
    }
    if support.is_empty() {
        let mut est = zero_estimate(prob, Method::GaussDantzig, stage1.lambda_used);
        est.warnings = warnings;
        est.lp_stats = stage1.lp_stats.clone();
        return Ok(est);
    }
    let beta = ols_on_support(&prob.x, &prob.y, &support)?;
    let residual = sub(&prob.y, &prob.x.matvec(&beta)?);
    Ok(Estimate {
        support: support_of(&beta, support_threshold),
        residual,
        beta,
        method: Method::GaussDantzig,
        lambda_used: stage1.lambda_used,
        lp_stats: stage1.lp_stats.clone(),
        warnings,
    })
}

/// Lasso via cyclic coordinate descent:
/// `min 0.5 |y - X beta|_2^2 + lambda |beta|_1`.
///
/// Stops when no coefficient moves more than `tol` over a full pass; hitting
/// `max_pass` first returns [`EstimatorError::IterationLimit`] carrying the
/// last iterate.
pub fn lasso_cd(
    prob: &RegressionProblem,
    lambda: f64,
    max_pass: usize,
    tol: f64,
) -> Result<Estimate, EstimatorError> {
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(EstimatorError::InvalidOptions(format!(
            "lasso penalty must be >= 0, got {lambda}"
        )));
    }
    if max_pass == 0 || !(tol.is_finite() && tol > 0.0) {
        return Err(EstimatorError::InvalidOptions(
            "max_pass must be >= 1 and tol positive".into(),
        ));
    }
    let p = prob.num_predictors();
    let cols: Vec<Vec<f64>> = (0..p).map(|j| prob.x.column(j)).collect();
    let col_sq: Vec<f64> = cols.iter().map(|c| dot(c, c)).collect();

    let mut beta = vec![0.0; p];
    let mut residual = prob.y.clone();
    let mut converged = false;
    for _pass in 0..max_pass {
        let mut max_delta = 0.0_f64;
        for j in 0..p {
            if col_sq[j] <= 1e-300 {
                continue;
            }
            let old = beta[j];
            let rho = dot(&cols[j], &residual) + col_sq[j] * old;
            let new = soft_threshold(rho, lambda) / col_sq[j];
            if new != old {
                let delta = old - new;
                for (r, &xij) in residual.iter_mut().zip(&cols[j]) {
                    *r += delta * xij;
                }
                beta[j] = new;
                max_delta = max_delta.max(delta.abs());
            }
        }
        if max_delta < tol {
            converged = true;
            break;
        }
    }
    let residual = sub(&prob.y, &prob.x.matvec(&beta)?);
    let estimate = Estimate {
        support: support_of(&beta, DEFAULT_SUPPORT_THRESHOLD),
        residual,
        beta,
        method: Method::Lasso,
        lambda_used: lambda,
        lp_stats: None,
        warnings: Vec::new(),
    };
    if converged {
        Ok(estimate)
    } else {
        Err(EstimatorError::IterationLimit {
            max_pass,
            last: Box::new(estimate),
        })
    }
}

/// `sign(t) * max(|t| - lambda, 0)`.
pub fn soft_threshold(t: f64, lambda: f64) -> f64 {
    if t > lambda {
        t - lambda
    } else if t < -lambda {
        t + lambda
    } else {
        0.0
    }
}

/// Sup-norm of the correlated residual `X'(y - X beta)`; the quantity the
/// Dantzig constraint bounds.
pub fn dantzig_constraint_norm(prob: &RegressionProblem, beta: &[f64]) -> Result<f64, EstimatorError> {
    let fitted = prob.x.matvec(beta)?;
    let residual = sub(&prob.y, &fitted);
    Ok(norm_inf(&prob.x.transpose_matvec(&residual)?))
}

pub use linalg::column_standardize as standardize_design;
