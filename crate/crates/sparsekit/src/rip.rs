//! Restricted-isometry and group-collinearity probes.
//!
//! The S-restricted isometry constant of a unit-column design `X` is
//!
//! ```text
//! delta_S = max over |T| = S of max(lambda_max(G_T) - 1, 1 - lambda_min(G_T))
//! ```
//!
//! with `G_T = X_T' X_T`. Exact computation enumerates all `C(p, S)`
//! subsets, which blows up combinatorially — that blow-up is the point, and
//! [`RipError::BudgetExceeded`] reports the exact count instead of silently
//! sampling. [`restricted_isometry_sampled`] is the explicit fallback: a
//! seeded lower bound from uniformly drawn subsets.
//!
//! Canonical correlations quantify the same phenomenon between groups:
//! [`first_canonical_correlation`] whitens the within-group covariances by
//! Cholesky and takes the largest singular value of the cross block.

use crate::linalg::{dot, jacobi_eigenvalues, norm2, Cholesky, LinalgError, Matrix};
use crate::policy::NumericPolicy;
use crate::rng::derive_rng;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RipError {
    #[error("sparsity level {s} must lie in 1..=min(n, p) = {max}")]
    InvalidSparsity { s: usize, max: usize },
    #[error("column {column} is not unit-norm (|col|_2 = {norm}); standardize the design first")]
    ColumnNotUnitNorm { column: usize, norm: f64 },
    #[error("{subsets} subsets of size {s} exceed the budget of {budget}; use sampled mode")]
    BudgetExceeded { subsets: u128, s: usize, budget: u64 },
    #[error("groups overlap at index {index}")]
    GroupsOverlap { index: usize },
    #[error("group sizes {total} exceed the number of observations {n}")]
    GroupsTooLarge { total: usize, n: usize },
    #[error("group sizes {total} exceed the number of predictors {p}")]
    GroupsExceedPredictors { total: usize, p: usize },
    #[error("group index {index} out of range for p = {p}")]
    GroupIndexOutOfRange { index: usize, p: usize },
    #[error("empty group")]
    EmptyGroup,
    #[error("within-group covariance is singular; the group is degenerate")]
    DegenerateGroup,
    #[error("need at least one trial")]
    NoTrials,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RipMode {
    Exact,
    Sampled,
}

/// Result of a restricted-isometry probe.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RipReport {
    pub s: usize,
    pub delta: f64,
    /// Subset attaining `delta`; recomputable from `X`.
    pub worst_subset: Vec<usize>,
    pub mode: RipMode,
    pub subsets_checked: u64,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupCorrMode {
    Single,
    SampledMax,
}

/// Result of a canonical-correlation probe between predictor groups.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupCorrReport {
    pub group_a: Vec<usize>,
    pub group_b: Vec<usize>,
    pub rho: f64,
    pub mode: GroupCorrMode,
    pub trials: u64,
    pub seed: Option<u64>,
}

/// `C(p, s)` with saturation at `u128::MAX`.
pub fn binomial(p: usize, s: usize) -> u128 {
    if s > p {
        return 0;
    }
    let s = s.min(p - s);
    let mut acc: u128 = 1;
    for k in 0..s {
        let num = (p - k) as u128;
        acc = match acc.checked_mul(num) {
            Some(v) => v / (k as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

fn check_unit_columns(x: &Matrix, policy: &NumericPolicy) -> Result<(), RipError> {
    for j in 0..x.cols() {
        let norm = norm2(&x.column(j));
        if (norm - 1.0).abs() > 1e-6 {
            return Err(RipError::ColumnNotUnitNorm { column: j, norm });
        }
    }
    let _ = policy;
    Ok(())
}

/// delta contribution of one subset: extreme eigenvalues of its Gram block.
fn subset_delta(cols: &[Vec<f64>], subset: &[usize], policy: &NumericPolicy) -> Result<f64, RipError> {
    let s = subset.len();
    let mut gram = Matrix::zeros(s, s);
    for (a, &ja) in subset.iter().enumerate() {
        for (b, &jb) in subset.iter().enumerate().skip(a) {
            let v = dot(&cols[ja], &cols[jb]);
            gram.set(a, b, v);
            gram.set(b, a, v);
        }
    }
    let values = jacobi_eigenvalues(&gram, policy)?;
    let lo = values[0];
    let hi = values[values.len() - 1];
    Ok((hi - 1.0).max(1.0 - lo))
}

/// Exact `delta_S` over every size-`S` subset.
///
/// Refuses to run when `C(p, S)` exceeds `budget` (default `1e6` through the
/// CLI); the error carries the exact subset count.
pub fn restricted_isometry_exact(x: &Matrix, s: usize, budget: u64) -> Result<RipReport, RipError> {
    let policy = NumericPolicy::default();
    let n = x.rows();
    let p = x.cols();
    let max_s = n.min(p);
    if s == 0 || s > max_s {
        return Err(RipError::InvalidSparsity { s, max: max_s });
    }
    check_unit_columns(x, &policy)?;
    let count = binomial(p, s);
    if count > budget as u128 {
        return Err(RipError::BudgetExceeded {
            subsets: count,
            s,
            budget,
        });
    }

    let cols: Vec<Vec<f64>> = (0..p).map(|j| x.column(j)).collect();
    let mut subset: Vec<usize> = (0..s).collect();
    let mut best_delta = f64::NEG_INFINITY;
    let mut best_subset = subset.clone();
    let mut checked = 0u64;
    loop {
        let delta = subset_delta(&cols, &subset, &policy)?;
        checked += 1;
        if delta > best_delta {
            best_delta = delta;
            best_subset = subset.clone();
        }
        if !next_combination(&mut subset, p) {
            break;
        }
    }
    debug_assert_eq!(checked as u128, count);
    Ok(RipReport {
        s,
        delta: best_delta,
        worst_subset: best_subset,
        mode: RipMode::Exact,
        subsets_checked: checked,
        seed: None,
    })
}

/// Advance `subset` to the next size-`s` combination of `0..p` in
/// lexicographic order; false when exhausted.
fn next_combination(subset: &mut [usize], p: usize) -> bool {
    let s = subset.len();
    let mut i = s;
    while i > 0 {
        i -= 1;
        if subset[i] < p - (s - i) {
            subset[i] += 1;
            for k in i + 1..s {
                subset[k] = subset[k - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Seeded lower bound on `delta_S` from `trials` uniformly sampled subsets.
///
/// Trial `k` draws from the stream `(seed, k)`, so prefixes are stable: more
/// trials can only raise the bound, and results do not depend on scheduling.
pub fn restricted_isometry_sampled(
    x: &Matrix,
    s: usize,
    trials: u64,
    seed: u64,
) -> Result<RipReport, RipError> {
    let policy = NumericPolicy::default();
    let n = x.rows();
    let p = x.cols();
    let max_s = n.min(p);
    if s == 0 || s > max_s {
        return Err(RipError::InvalidSparsity { s, max: max_s });
    }
    if trials == 0 {
        return Err(RipError::NoTrials);
    }
    check_unit_columns(x, &policy)?;

    let cols: Vec<Vec<f64>> = (0..p).map(|j| x.column(j)).collect();
    let mut best_delta = f64::NEG_INFINITY;
    let mut best_subset = Vec::new();
    for trial in 0..trials {
        let mut rng = derive_rng(seed, trial);
        let subset = sample_subset(&mut rng, p, s);
        let delta = subset_delta(&cols, &subset, &policy)?;
        if delta > best_delta {
            best_delta = delta;
            best_subset = subset;
        }
    }
    Ok(RipReport {
        s,
        delta: best_delta,
        worst_subset: best_subset,
        mode: RipMode::Sampled,
        subsets_checked: trials,
        seed: Some(seed),
    })
}

/// Uniform size-`s` subset of `0..p` without replacement, ascending.
fn sample_subset<R: Rng>(rng: &mut R, p: usize, s: usize) -> Vec<usize> {
    // Partial Fisher-Yates on a scratch index vector.
    let mut pool: Vec<usize> = (0..p).collect();
    for k in 0..s {
        let j = rng.gen_range(k..p);
        pool.swap(k, j);
    }
    let mut subset = pool[..s].to_vec();
    subset.sort_unstable();
    subset
}

fn centered_columns(x: &Matrix, idx: &[usize]) -> Result<Vec<Vec<f64>>, RipError> {
    let n = x.rows();
    let p = x.cols();
    let mut out = Vec::with_capacity(idx.len());
    for &j in idx {
        if j >= p {
            return Err(RipError::GroupIndexOutOfRange { index: j, p });
        }
        let mut col = x.column(j);
        let mean = col.iter().sum::<f64>() / n as f64;
        for v in col.iter_mut() {
            *v -= mean;
        }
        out.push(col);
    }
    Ok(out)
}

fn cross_gram(a: &[Vec<f64>], b: &[Vec<f64>]) -> Matrix {
    let mut m = Matrix::zeros(a.len(), b.len());
    for (i, ca) in a.iter().enumerate() {
        for (j, cb) in b.iter().enumerate() {
            m.set(i, j, dot(ca, cb));
        }
    }
    m
}

fn self_gram(a: &[Vec<f64>]) -> Matrix {
    let mut m = Matrix::zeros(a.len(), a.len());
    for i in 0..a.len() {
        for j in i..a.len() {
            let v = dot(&a[i], &a[j]);
            m.set(i, j, v);
            m.set(j, i, v);
        }
    }
    m
}

/// Largest canonical correlation between two disjoint predictor groups.
///
/// Columns are centered internally, within-group Gram blocks are whitened by
/// Cholesky (a singular block is [`RipError::DegenerateGroup`], not a
/// regularized pass), and the result is the largest singular value of the
/// whitened cross block, clamped to `[0, 1]`.
pub fn first_canonical_correlation(
    x: &Matrix,
    group_a: &[usize],
    group_b: &[usize],
) -> Result<f64, RipError> {
    if group_a.is_empty() || group_b.is_empty() {
        return Err(RipError::EmptyGroup);
    }
    for &ia in group_a {
        if group_b.contains(&ia) {
            return Err(RipError::GroupsOverlap { index: ia });
        }
    }
    let total = group_a.len() + group_b.len();
    if total > x.rows() {
        return Err(RipError::GroupsTooLarge {
            total,
            n: x.rows(),
        });
    }
    let policy = NumericPolicy::default();
    let a = centered_columns(x, group_a)?;
    let b = centered_columns(x, group_b)?;

    let whiten = |g: &Matrix| -> Result<Cholesky, RipError> {
        Cholesky::factor(g, &policy).map_err(|e| match e {
            LinalgError::SingularMatrix { .. } => RipError::DegenerateGroup,
            other => RipError::Linalg(other),
        })
    };
    let la = whiten(&self_gram(&a))?;
    let lb = whiten(&self_gram(&b))?;

    // M = La^{-1} Sab Lb^{-T}; rho = sigma_max(M) = sqrt(lambda_max(M M')).
    let sab = cross_gram(&a, &b);
    let mut t = Matrix::zeros(a.len(), b.len());
    for j in 0..b.len() {
        let col: Vec<f64> = (0..a.len()).map(|i| sab.get(i, j)).collect();
        let solved = la.forward(&col);
        for i in 0..a.len() {
            t.set(i, j, solved[i]);
        }
    }
    let mut m = Matrix::zeros(a.len(), b.len());
    for i in 0..a.len() {
        let solved = lb.forward(t.row(i));
        m.row_mut(i).copy_from_slice(&solved);
    }
    let mmt = m.matmul(&m.transpose())?;
    let values = jacobi_eigenvalues(&mmt, &policy)?;
    let rho_sq = values.last().copied().unwrap_or(0.0).max(0.0);
    Ok(rho_sq.sqrt().clamp(0.0, 1.0))
}

/// Maximum first canonical correlation over `trials` random disjoint group
/// pairs of sizes `(size_a, size_b)`. Deterministic per `(seed, trial)`.
pub fn max_canonical_correlation_sampled(
    x: &Matrix,
    size_a: usize,
    size_b: usize,
    trials: u64,
    seed: u64,
) -> Result<GroupCorrReport, RipError> {
    if size_a == 0 || size_b == 0 {
        return Err(RipError::EmptyGroup);
    }
    let total = size_a + size_b;
    if total > x.rows() {
        return Err(RipError::GroupsTooLarge {
            total,
            n: x.rows(),
        });
    }
    if total > x.cols() {
        return Err(RipError::GroupsExceedPredictors { total, p: x.cols() });
    }
    if trials == 0 {
        return Err(RipError::NoTrials);
    }
    let mut best_rho = f64::NEG_INFINITY;
    let mut best_a = Vec::new();
    let mut best_b = Vec::new();
    for trial in 0..trials {
        let mut rng = derive_rng(seed, trial);
        let joint = sample_subset(&mut rng, x.cols(), total);
        // A uniformly drawn subset split by a uniform shuffle is a uniform
        // disjoint pair.
        let mut shuffled = joint;
        for k in (1..shuffled.len()).rev() {
            let j = rng.gen_range(0..=k);
            shuffled.swap(k, j);
        }
        let mut ga = shuffled[..size_a].to_vec();
        let mut gb = shuffled[size_a..].to_vec();
        ga.sort_unstable();
        gb.sort_unstable();
        match first_canonical_correlation(x, &ga, &gb) {
            Ok(rho) => {
                if rho > best_rho {
                    best_rho = rho;
                    best_a = ga;
                    best_b = gb;
                }
            }
            // A degenerate draw has probability zero for continuous designs;
            // skip it rather than abort the scan.
            Err(RipError::DegenerateGroup) => continue,
            Err(other) => return Err(other),
        }
    }
    Ok(GroupCorrReport {
        group_a: best_a,
        group_b: best_b,
        rho: best_rho.max(0.0),
        mode: GroupCorrMode::SampledMax,
        trials,
        seed: Some(seed),
    })
}

/// Convenience wrapper producing a [`GroupCorrReport`] for one fixed pair.
pub fn group_correlation_single(
    x: &Matrix,
    group_a: &[usize],
    group_b: &[usize],
) -> Result<GroupCorrReport, RipError> {
    let rho = first_canonical_correlation(x, group_a, group_b)?;
    Ok(GroupCorrReport {
        group_a: group_a.to_vec(),
        group_b: group_b.to_vec(),
        rho,
        mode: GroupCorrMode::Single,
        trials: 1,
        seed: None,
    })
}

/// Recompute the delta of a reported subset straight from the design;
/// used by tests and by report consumers to validate a [`RipReport`].
pub fn delta_of_subset(x: &Matrix, subset: &[usize]) -> Result<f64, RipError> {
    let cols: Vec<Vec<f64>> = subset.iter().map(|&j| x.column(j)).collect();
    let idx: Vec<usize> = (0..cols.len()).collect();
    subset_delta(&cols, &idx, &NumericPolicy::default())
}
