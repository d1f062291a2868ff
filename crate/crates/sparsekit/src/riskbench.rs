//! Synthetic-experiment harness: estimator risk against the ideal risk.
//!
//! Two questions drive the design. First, `sqrt(2 log p)` may overshrink
//! when `p >> n` — so [`run_risk_sweep`] measures risk across a lambda grid
//! that always contains both `sqrt(2 log p)` and `sqrt(2 log n)`, flags the
//! two canonical rows, and marks the empirical argmin without calling
//! anything "optimal". Second, the shrinkage bias motivates the two-stage
//! refit — [`compare_bias`] pairs the Dantzig selector against
//! Gauss–Dantzig on common data and reports the on-support signed bias.
//!
//! All cells of a sweep see the same per-replication data (common random
//! numbers): replication `r` is generated from the derived seed
//! `(seed, r)` once and shared across every `(method, lambda)` cell.

use crate::estimators::{
    basis_pursuit, dantzig_selector, gauss_dantzig_from_stage1, lasso_cd, DantzigOptions,
    Estimate, EstimatorError, LambdaMode, RegressionProblem,
};
use crate::linalg::{column_standardize, LinalgError, Matrix};
use crate::rng::{derive_rng, derive_seed};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Noise levels at or below this are treated as "noiseless" for method
/// compatibility (basis pursuit); the synthetic spec itself requires
/// `sigma > 0`, with tiny values standing in for the exact-equation limit.
pub const NOISELESS_SIGMA: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid synthetic spec: {0}")]
    InvalidSpec(String),
    #[error("incompatible configuration: {0}")]
    Config(String),
    #[error("replication {rep} failed: {source}")]
    RepFailed {
        rep: usize,
        #[source]
        source: EstimatorError,
    },
    #[error(transparent)]
    Estimator(#[from] EstimatorError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DesignKind {
    /// Independent standard-Gaussian entries.
    GaussianIid,
    /// Columns share a common factor: pairwise correlation `rho` before
    /// standardization.
    EquiCorrelated { rho: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignPattern {
    AllPositive,
    RandomSigns,
}

/// Magnitudes of the nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Amplitudes {
    /// Every nonzero coefficient has magnitude `a * sigma`.
    ConstantSigmaMultiple(f64),
    /// Explicit magnitudes, one per nonzero coefficient.
    Values(Vec<f64>),
}

/// Description of a synthetic regression problem family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub n: usize,
    pub p: usize,
    pub sparsity: usize,
    pub amplitudes: Amplitudes,
    pub sigma: f64,
    pub design: DesignKind,
    pub sign_pattern: SignPattern,
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<(), BenchError> {
        if self.n == 0 || self.p == 0 {
            return Err(BenchError::InvalidSpec("n and p must be positive".into()));
        }
        if self.sparsity > self.n.min(self.p) {
            return Err(BenchError::InvalidSpec(format!(
                "sparsity {} exceeds min(n, p) = {}",
                self.sparsity,
                self.n.min(self.p)
            )));
        }
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(BenchError::InvalidSpec(format!(
                "sigma must be positive (use {NOISELESS_SIGMA:e} or smaller for the noiseless limit), got {}",
                self.sigma
            )));
        }
        match &self.amplitudes {
            Amplitudes::ConstantSigmaMultiple(a) => {
                if !a.is_finite() {
                    return Err(BenchError::InvalidSpec("amplitude must be finite".into()));
                }
            }
            Amplitudes::Values(v) => {
                if v.len() != self.sparsity {
                    return Err(BenchError::InvalidSpec(format!(
                        "amplitude list has {} entries for sparsity {}",
                        v.len(),
                        self.sparsity
                    )));
                }
                if v.iter().any(|a| !a.is_finite()) {
                    return Err(BenchError::InvalidSpec("amplitudes must be finite".into()));
                }
            }
        }
        if let DesignKind::EquiCorrelated { rho } = self.design {
            if !(0.0..1.0).contains(&rho) {
                return Err(BenchError::InvalidSpec(format!(
                    "equicorrelation rho must lie in [0, 1), got {rho}"
                )));
            }
        }
        Ok(())
    }
}

/// Draw `(problem, true beta)` for `spec`, deterministically in `seed`.
///
/// The design is drawn, column-standardized, and only then used to build
/// `y = X beta + eps`; the support is a uniform size-`sparsity` subset.
/// Draw order (design, support, signs, noise) is fixed, so a seed pins the
/// full dataset.
pub fn generate_synthetic(
    spec: &SyntheticSpec,
    seed: u64,
) -> Result<(RegressionProblem, Vec<f64>), BenchError> {
    spec.validate()?;
    let n = spec.n;
    let p = spec.p;
    let mut rng = derive_rng(seed, 0);

    let mut raw = Matrix::zeros(n, p);
    match spec.design {
        DesignKind::GaussianIid => {
            for j in 0..p {
                for i in 0..n {
                    raw.set(i, j, StandardNormal.sample(&mut rng));
                }
            }
        }
        DesignKind::EquiCorrelated { rho } => {
            let shared: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
            let (a, b) = (rho.sqrt(), (1.0 - rho).sqrt());
            for j in 0..p {
                for i in 0..n {
                    let own: f64 = StandardNormal.sample(&mut rng);
                    raw.set(i, j, a * shared[i] + b * own);
                }
            }
        }
    }
    let x = column_standardize(&raw)?;

    // Uniform support via partial Fisher-Yates.
    let mut pool: Vec<usize> = (0..p).collect();
    for k in 0..spec.sparsity {
        let j = rng.gen_range(k..p);
        pool.swap(k, j);
    }
    let mut support = pool[..spec.sparsity].to_vec();
    support.sort_unstable();

    let mut beta = vec![0.0; p];
    for (k, &j) in support.iter().enumerate() {
        let magnitude = match &spec.amplitudes {
            Amplitudes::ConstantSigmaMultiple(a) => a * spec.sigma,
            Amplitudes::Values(v) => v[k],
        };
        let sign = match spec.sign_pattern {
            SignPattern::AllPositive => 1.0,
            SignPattern::RandomSigns => {
                if rng.gen::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
        };
        beta[j] = sign * magnitude;
    }

    let mut y = x.matvec(&beta)?;
    for v in y.iter_mut() {
        let eps: f64 = StandardNormal.sample(&mut rng);
        *v += spec.sigma * eps;
    }
    let prob = RegressionProblem::new(x, y, spec.sigma)?.assume_standardized();
    Ok((prob, beta))
}

/// Ideal (oracle) risk `sum_j min(beta_j^2, sigma^2)`: the risk of
/// estimating only the coordinates an oracle reveals to be worth estimating.
pub fn ideal_risk(beta: &[f64], sigma: f64) -> f64 {
    assert!(sigma > 0.0, "ideal risk needs sigma > 0");
    let s2 = sigma * sigma;
    beta.iter().map(|&b| (b * b).min(s2)).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BenchMethod {
    DantzigSelector,
    GaussDantzig,
    Lasso,
    BasisPursuit,
}

impl BenchMethod {
    pub fn label(&self) -> &'static str {
        match self {
            BenchMethod::DantzigSelector => "dantzig",
            BenchMethod::GaussDantzig => "gauss-dantzig",
            BenchMethod::Lasso => "lasso",
            BenchMethod::BasisPursuit => "basis-pursuit",
        }
    }
}

/// One `(method, lambda)` cell of a [`RiskReport`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RiskRow {
    pub method: BenchMethod,
    /// Dimensionless factor; the Dantzig constraint bound is
    /// `lambda_factor * sigma` and the Lasso penalty `lambda_factor * sigma`.
    pub lambda_factor: f64,
    pub is_sqrt_two_log_p: bool,
    pub is_sqrt_two_log_n: bool,
    /// Mean of `|estimate - beta|_2^2` over the replications.
    pub empirical_risk: f64,
    /// Mean ideal risk over the same replications.
    pub ideal_risk: f64,
    /// `empirical_risk / ideal_risk` when the ideal risk is positive.
    pub risk_ratio: Option<f64>,
    /// Lowest empirical risk among this method's rows.
    pub is_empirical_argmin: bool,
}

/// Lambda-sweep output. Rows are ordered method-major, then by ascending
/// lambda.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RiskReport {
    pub spec: SyntheticSpec,
    pub lambda_grid: Vec<f64>,
    pub methods: Vec<BenchMethod>,
    pub reps: usize,
    pub seed: u64,
    pub rows: Vec<RiskRow>,
}

const LAMBDA_MATCH_TOL: f64 = 1e-12;

fn lambda_matches(a: f64, b: f64) -> bool {
    (a - b).abs() <= LAMBDA_MATCH_TOL * a.abs().max(b.abs()).max(1.0)
}

/// Sweep `methods x lambda_grid` over `reps` common-random-number
/// replications.
///
/// The grid is augmented with `sqrt(2 log p)` and `sqrt(2 log n)` when the
/// caller left them out, so every report carries the two canonical factors.
pub fn run_risk_sweep(
    spec: &SyntheticSpec,
    lambda_grid: &[f64],
    methods: &[BenchMethod],
    reps: usize,
    seed: u64,
) -> Result<RiskReport, BenchError> {
    spec.validate()?;
    if lambda_grid.is_empty() {
        return Err(BenchError::Config("lambda grid is empty".into()));
    }
    if lambda_grid.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
        return Err(BenchError::Config("lambda factors must be positive".into()));
    }
    if methods.is_empty() {
        return Err(BenchError::Config("no methods requested".into()));
    }
    if reps == 0 {
        return Err(BenchError::Config("reps must be >= 1".into()));
    }
    if methods.contains(&BenchMethod::BasisPursuit) && spec.sigma > NOISELESS_SIGMA {
        return Err(BenchError::Config(format!(
            "basis pursuit is the noiseless method; sigma = {} is above the noiseless threshold {NOISELESS_SIGMA:e}",
            spec.sigma
        )));
    }
    if (methods.contains(&BenchMethod::DantzigSelector)
        || methods.contains(&BenchMethod::GaussDantzig))
        && spec.sigma == 0.0
    {
        return Err(BenchError::Config(
            "Dantzig-type methods need sigma > 0".into(),
        ));
    }

    let lambda_p = (2.0 * (spec.p as f64).ln()).sqrt();
    let lambda_n = (2.0 * (spec.n as f64).ln()).sqrt();
    let mut grid: Vec<f64> = lambda_grid.to_vec();
    for canonical in [lambda_p, lambda_n] {
        if !grid.iter().any(|&l| lambda_matches(l, canonical)) {
            grid.push(canonical);
        }
    }
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let mut methods_dedup: Vec<BenchMethod> = Vec::new();
    for &m in methods {
        if !methods_dedup.contains(&m) {
            methods_dedup.push(m);
        }
    }

    let needs_stage1 = |m: &BenchMethod| {
        matches!(m, BenchMethod::DantzigSelector | BenchMethod::GaussDantzig)
    };
    let cells = methods_dedup.len() * grid.len();

    // Per replication: squared error for every cell plus the ideal risk.
    let per_rep: Result<Vec<(Vec<f64>, f64)>, BenchError> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let rep_seed = derive_seed(seed, rep as u64);
            let (prob, beta_true) = generate_synthetic(spec, rep_seed)?;
            let wrap = |source: EstimatorError| BenchError::RepFailed { rep, source };

            let bp_est: Option<Estimate> =
                if methods_dedup.contains(&BenchMethod::BasisPursuit) {
                    Some(
                        basis_pursuit(prob.x(), prob.y(), &DantzigOptions::default().solver)
                            .map_err(wrap)?,
                    )
                } else {
                    None
                };

            let mut errors = vec![0.0; cells];
            for (li, &lambda) in grid.iter().enumerate() {
                // Stage 1 shared between the Dantzig selector and the refit.
                let stage1: Option<Estimate> =
                    if methods_dedup.iter().any(needs_stage1) {
                        let opts = DantzigOptions {
                            lambda_mode: LambdaMode::Custom(lambda),
                            ..DantzigOptions::default()
                        };
                        Some(dantzig_selector(&prob, &opts).map_err(wrap)?)
                    } else {
                        None
                    };
                for (mi, method) in methods_dedup.iter().enumerate() {
                    let cell = mi * grid.len() + li;
                    let est_err = match method {
                        BenchMethod::DantzigSelector => {
                            stage1.as_ref().expect("stage 1 computed").sq_error(&beta_true)
                        }
                        BenchMethod::GaussDantzig => {
                            let opts = DantzigOptions::default();
                            gauss_dantzig_from_stage1(
                                &prob,
                                stage1.as_ref().expect("stage 1 computed"),
                                opts.support_threshold,
                            )
                            .map_err(wrap)?
                            .sq_error(&beta_true)
                        }
                        BenchMethod::Lasso => {
                            let penalty = lambda * prob.sigma();
                            lasso_cd(&prob, penalty, 5_000, 1e-9)
                                .map_err(wrap)?
                                .sq_error(&beta_true)
                        }
                        BenchMethod::BasisPursuit => {
                            bp_est.as_ref().expect("bp computed").sq_error(&beta_true)
                        }
                    };
                    errors[cell] = est_err;
                }
            }
            Ok((errors, ideal_risk(&beta_true, spec.sigma)))
        })
        .collect();
    let per_rep = per_rep?;

    // Deterministic reduction: plain sums in replication order.
    let mut cell_sums = vec![0.0; cells];
    let mut ideal_sum = 0.0;
    for (errors, ideal) in &per_rep {
        for (acc, &e) in cell_sums.iter_mut().zip(errors) {
            *acc += e;
        }
        ideal_sum += ideal;
    }
    let mean_ideal = ideal_sum / reps as f64;

    let mut rows = Vec::with_capacity(cells);
    for (mi, &method) in methods_dedup.iter().enumerate() {
        let method_risks: Vec<f64> = (0..grid.len())
            .map(|li| cell_sums[mi * grid.len() + li] / reps as f64)
            .collect();
        let argmin = method_risks
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .map(|(i, _)| i)
            .unwrap_or(0);
        for (li, &lambda) in grid.iter().enumerate() {
            let empirical = method_risks[li];
            rows.push(RiskRow {
                method,
                lambda_factor: lambda,
                is_sqrt_two_log_p: lambda_matches(lambda, lambda_p),
                is_sqrt_two_log_n: lambda_matches(lambda, lambda_n),
                empirical_risk: empirical,
                ideal_risk: mean_ideal,
                risk_ratio: (mean_ideal > 0.0).then(|| empirical / mean_ideal),
                is_empirical_argmin: li == argmin,
            });
        }
    }
    Ok(RiskReport {
        spec: spec.clone(),
        lambda_grid: grid,
        methods: methods_dedup,
        reps,
        seed,
        rows,
    })
}

/// Paired per-replication errors of one bias comparison.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BiasSample {
    pub rep: usize,
    pub ds_sq_error: f64,
    pub gd_sq_error: f64,
}

/// Dantzig selector vs. Gauss–Dantzig at `lambda = sqrt(2 log p)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BiasReport {
    pub spec: SyntheticSpec,
    pub lambda_factor: f64,
    pub reps: usize,
    pub seed: u64,
    pub ds_mean_sq_error: f64,
    pub gd_mean_sq_error: f64,
    /// `ds_mean_sq_error - gd_mean_sq_error`; positive when the refit wins.
    pub mean_error_gap: f64,
    /// Fraction of replications where Gauss–Dantzig beat the Dantzig
    /// selector outright.
    pub gd_win_rate: f64,
    /// Mean over replications of the mean of `estimate_j - beta_j` across
    /// the true support; the quantitative face of shrinkage bias.
    pub ds_on_support_bias: f64,
    pub gd_on_support_bias: f64,
    pub per_rep: Vec<BiasSample>,
}

fn on_support_bias(est: &Estimate, beta_true: &[f64], support: &[usize]) -> f64 {
    let s = support.len() as f64;
    support
        .iter()
        .map(|&j| est.beta[j] - beta_true[j])
        .sum::<f64>()
        / s
}

/// Paired comparison of the Dantzig selector and its least-squares refit on
/// `reps` common datasets at the canonical `sqrt(2 log p)` factor.
///
/// Strong signals (amplitude at least a few sigma) make the comparison
/// informative; that is recorded in the spec, not enforced.
pub fn compare_bias(spec: &SyntheticSpec, reps: usize, seed: u64) -> Result<BiasReport, BenchError> {
    spec.validate()?;
    if reps == 0 {
        return Err(BenchError::Config("reps must be >= 1".into()));
    }
    if spec.sparsity == 0 {
        return Err(BenchError::Config(
            "bias comparison needs at least one nonzero coefficient".into(),
        ));
    }
    let opts = DantzigOptions::default();
    let lambda_factor = (2.0 * (spec.p as f64).ln()).sqrt();

    let per_rep: Result<Vec<(f64, f64, f64, f64)>, BenchError> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let rep_seed = derive_seed(seed, rep as u64);
            let (prob, beta_true) = generate_synthetic(spec, rep_seed)?;
            let wrap = |source: EstimatorError| BenchError::RepFailed { rep, source };
            let support: Vec<usize> = beta_true
                .iter()
                .enumerate()
                .filter(|(_, &b)| b != 0.0)
                .map(|(j, _)| j)
                .collect();
            let ds = dantzig_selector(&prob, &opts).map_err(wrap)?;
            let gd = gauss_dantzig_from_stage1(&prob, &ds, opts.support_threshold)
                .map_err(wrap)?;
            Ok((
                ds.sq_error(&beta_true),
                gd.sq_error(&beta_true),
                on_support_bias(&ds, &beta_true, &support),
                on_support_bias(&gd, &beta_true, &support),
            ))
        })
        .collect();
    let per_rep = per_rep?;

    let m = reps as f64;
    let ds_mean = per_rep.iter().map(|r| r.0).sum::<f64>() / m;
    let gd_mean = per_rep.iter().map(|r| r.1).sum::<f64>() / m;
    let wins = per_rep.iter().filter(|r| r.1 < r.0).count();
    Ok(BiasReport {
        spec: spec.clone(),
        lambda_factor,
        reps,
        seed,
        ds_mean_sq_error: ds_mean,
        gd_mean_sq_error: gd_mean,
        mean_error_gap: ds_mean - gd_mean,
        gd_win_rate: wins as f64 / m,
        ds_on_support_bias: per_rep.iter().map(|r| r.2).sum::<f64>() / m,
        gd_on_support_bias: per_rep.iter().map(|r| r.3).sum::<f64>() / m,
        per_rep: per_rep
            .iter()
            .enumerate()
            .map(|(rep, r)| BiasSample {
                rep,
                ds_sq_error: r.0,
                gd_sq_error: r.1,
            })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_spec() -> SyntheticSpec {
        SyntheticSpec {
            n: 12,
            p: 8,
            sparsity: 2,
            amplitudes: Amplitudes::ConstantSigmaMultiple(4.0),
            sigma: 1.0,
            design: DesignKind::GaussianIid,
            sign_pattern: SignPattern::AllPositive,
        }
    }

    #[test]
    fn ideal_risk_hand_cases() {
        assert_eq!(ideal_risk(&[3.0, 0.0, 0.0], 1.0), 1.0);
        assert_eq!(ideal_risk(&[], 1.0), 0.0);
        assert_eq!(ideal_risk(&[0.0; 4], 1.0), 0.0);
        assert!((ideal_risk(&[0.5, 2.0], 1.0) - 1.25).abs() < 1e-15);
    }

    #[test]
    fn synthetic_is_deterministic() {
        let spec = small_spec();
        let (prob_a, beta_a) = generate_synthetic(&spec, 11).unwrap();
        let (prob_b, beta_b) = generate_synthetic(&spec, 11).unwrap();
        assert_eq!(beta_a, beta_b);
        assert_eq!(prob_a.y(), prob_b.y());
        assert_eq!(prob_a.x().as_slice(), prob_b.x().as_slice());
        let (_, beta_c) = generate_synthetic(&spec, 12).unwrap();
        assert_ne!(beta_a, beta_c);
    }

    #[test]
    fn synthetic_respects_sparsity_and_signs() {
        let spec = small_spec();
        let (_, beta) = generate_synthetic(&spec, 3).unwrap();
        let nonzero: Vec<f64> = beta.iter().copied().filter(|&b| b != 0.0).collect();
        assert_eq!(nonzero.len(), 2);
        assert!(nonzero.iter().all(|&b| (b - 4.0).abs() < 1e-12));
    }

    #[test]
    fn zero_sparsity_is_pure_noise() {
        let spec = SyntheticSpec {
            sparsity: 0,
            ..small_spec()
        };
        let (prob, beta) = generate_synthetic(&spec, 5).unwrap();
        assert!(beta.iter().all(|&b| b == 0.0));
        assert_eq!(prob.y().len(), 12);
    }

    #[test]
    fn tiny_sigma_behaves_like_noiseless() {
        let spec = SyntheticSpec {
            sigma: 1e-12,
            amplitudes: Amplitudes::Values(vec![1.0, -2.0]),
            sign_pattern: SignPattern::AllPositive,
            ..small_spec()
        };
        let (prob, beta) = generate_synthetic(&spec, 5).unwrap();
        let fitted = prob.x().matvec(&beta).unwrap();
        let resid: f64 = prob
            .y()
            .iter()
            .zip(&fitted)
            .map(|(&a, &b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        assert!(resid <= 1e-10 * (spec.n as f64).sqrt());
    }

    #[test]
    fn sweep_rejects_noisy_basis_pursuit() {
        let spec = small_spec();
        let err = run_risk_sweep(&spec, &[1.0], &[BenchMethod::BasisPursuit], 2, 1).unwrap_err();
        assert!(matches!(err, BenchError::Config(_)));
    }

    #[test]
    fn spec_validation_errors() {
        let mut spec = small_spec();
        spec.sparsity = 100;
        assert!(spec.validate().is_err());
        let mut spec = small_spec();
        spec.sigma = 0.0;
        assert!(spec.validate().is_err());
        let mut spec = small_spec();
        spec.amplitudes = Amplitudes::Values(vec![1.0]);
        assert!(spec.validate().is_err());
        let mut spec = small_spec();
        spec.design = DesignKind::EquiCorrelated { rho: 1.0 };
        assert!(spec.validate().is_err());
    }
}
