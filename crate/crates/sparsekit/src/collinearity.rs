//! Monte Carlo distribution of the maximum absolute pairwise sample
//! correlation among `p` independent standard-Gaussian predictors observed
//! `n` times.
//!
//! With `n` fixed and `p` growing, that maximum creeps toward 1 — spurious
//! collinearity that exists before any signal enters the picture. The
//! simulation here makes the effect concrete: each replication draws an
//! `n x p` design, standardizes the columns (center, unit norm) and records
//! the largest off-diagonal entry of the Gram matrix in absolute value.
//!
//! Replication `k` draws from the stream `(seed, k)`, so the sample vector
//! is identical under any thread count.

use crate::linalg::{dot, LinalgError, Matrix};
use crate::rng::derive_rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Transform used to draw standard normals, recorded in run metadata.
pub const GAUSSIAN_SAMPLER: &str = "rand_distr::StandardNormal (ziggurat)";

#[derive(Debug, Error)]
pub enum CollinearityError {
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
    #[error("column {column} is numerically constant; correlation undefined")]
    DegenerateColumn { column: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Simulation parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimConfig {
    pub n: usize,
    pub p: usize,
    pub reps: usize,
    pub seed: u64,
    pub bins: usize,
}

impl SimConfig {
    /// Config with the default histogram resolution of 50 bins.
    pub fn new(n: usize, p: usize, reps: usize, seed: u64) -> Self {
        Self {
            n,
            p,
            reps,
            seed,
            bins: 50,
        }
    }

    pub fn validate(&self) -> Result<(), CollinearityError> {
        if self.n < 3 {
            return Err(CollinearityError::InvalidConfig(format!(
                "n must be >= 3, got {}",
                self.n
            )));
        }
        if self.p < 2 {
            return Err(CollinearityError::InvalidConfig(format!(
                "p must be >= 2, got {}",
                self.p
            )));
        }
        if self.reps == 0 {
            return Err(CollinearityError::InvalidConfig("reps must be >= 1".into()));
        }
        if self.bins == 0 {
            return Err(CollinearityError::InvalidConfig("bins must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SummaryStats {
    pub min: f64,
    pub median: f64,
    pub mean: f64,
    pub max: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Histogram {
    /// `bins + 1` edges; the last edge equals the sample maximum.
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
}

/// Simulation output: one max-|correlation| sample per replication, plus a
/// summary, a histogram and the config echo needed to reproduce the run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MaxCorrDistribution {
    pub samples: Vec<f64>,
    pub summary: SummaryStats,
    pub histogram: Histogram,
    pub config: SimConfig,
    /// Column pairs skipped because a column was numerically constant.
    /// Probability zero for Gaussian draws; kept as an honesty counter.
    pub degenerate_pairs_skipped: u64,
    pub gaussian_sampler: String,
}

/// Standard-normal design for replication `rep` of `config`, drawn
/// column-major from the stream `(config.seed, rep)`. This is exactly the
/// matrix the simulation uses, exposed so a replication can be audited.
pub fn sample_rep_matrix(config: &SimConfig, rep: usize) -> Matrix {
    let cols = draw_columns(config.n, config.p, config.seed, rep);
    let mut m = Matrix::zeros(config.n, config.p);
    for (j, col) in cols.chunks_exact(config.n).enumerate() {
        for (i, &v) in col.iter().enumerate() {
            m.set(i, j, v);
        }
    }
    m
}

/// Column-major buffer of n*p standard normals for stream `(seed, rep)`.
fn draw_columns(n: usize, p: usize, seed: u64, rep: usize) -> Vec<f64> {
    let mut rng = derive_rng(seed, rep as u64);
    let mut data = vec![0.0f64; n * p];
    for v in data.iter_mut() {
        *v = StandardNormal.sample(&mut rng);
    }
    data
}

/// Variance floor mirrored from the Pearson kernel: sum of squares at or
/// below `variance_tol * (n - 1)` counts as constant.
fn column_ss_floor(n: usize) -> f64 {
    1e-14 * (n as f64 - 1.0)
}

/// Center and unit-normalize each column in place; returns per-column flags
/// marking degenerate (constant) columns.
fn standardize_columns(data: &mut [f64], n: usize) -> Vec<bool> {
    let floor = column_ss_floor(n);
    data.chunks_exact_mut(n)
        .map(|col| {
            let mean = col.iter().sum::<f64>() / n as f64;
            for v in col.iter_mut() {
                *v -= mean;
            }
            let ss = dot(col, col);
            if ss <= floor {
                return true;
            }
            let inv = 1.0 / ss.sqrt();
            for v in col.iter_mut() {
                *v *= inv;
            }
            false
        })
        .collect()
}

fn max_abs_offdiag(data: &[f64], n: usize, degenerate: &[bool]) -> (f64, u64) {
    let p = degenerate.len();
    let mut best = 0.0f64;
    let mut skipped = 0u64;
    for j in 0..p {
        if degenerate[j] {
            skipped += (p - 1 - j) as u64;
            continue;
        }
        let cj = &data[j * n..(j + 1) * n];
        for k in j + 1..p {
            if degenerate[k] {
                skipped += 1;
                continue;
            }
            let ck = &data[k * n..(k + 1) * n];
            let r = dot(cj, ck).abs();
            if r > best {
                best = r;
            }
        }
    }
    (best.min(1.0), skipped)
}

/// One replication: draw, standardize, take the max |off-diagonal| of the
/// Gram matrix.
fn rep_sample(config: &SimConfig, rep: usize) -> (f64, u64) {
    let mut data = draw_columns(config.n, config.p, config.seed, rep);
    let degenerate = standardize_columns(&mut data, config.n);
    max_abs_offdiag(&data, config.n, &degenerate)
}

/// Run the simulation described by `config`.
///
/// Replications run in parallel; sample `k` always comes from stream
/// `(seed, k)`, so the output is identical for any thread count.
pub fn simulate_max_abs_correlation(
    config: &SimConfig,
) -> Result<MaxCorrDistribution, CollinearityError> {
    config.validate()?;
    let results: Vec<(f64, u64)> = (0..config.reps)
        .into_par_iter()
        .map(|rep| rep_sample(config, rep))
        .collect();
    let samples: Vec<f64> = results.iter().map(|&(v, _)| v).collect();
    let skipped: u64 = results.iter().map(|&(_, s)| s).sum();
    let summary = summarize(&samples);
    let histogram = histogram(&samples, config.bins);
    Ok(MaxCorrDistribution {
        samples,
        summary,
        histogram,
        config: *config,
        degenerate_pairs_skipped: skipped,
        gaussian_sampler: GAUSSIAN_SAMPLER.to_string(),
    })
}

/// Maximum absolute pairwise sample correlation of the columns of `x`,
/// computed through the standardized Gram matrix.
pub fn max_pairwise_abs_correlation(x: &Matrix) -> Result<f64, CollinearityError> {
    let n = x.rows();
    let p = x.cols();
    if n < 3 {
        return Err(CollinearityError::InvalidConfig(format!(
            "need at least 3 observations, got {n}"
        )));
    }
    if p < 2 {
        return Err(CollinearityError::InvalidConfig(format!(
            "need at least 2 columns, got {p}"
        )));
    }
    let mut data = vec![0.0f64; n * p];
    for j in 0..p {
        for i in 0..n {
            data[j * n + i] = x.get(i, j);
        }
    }
    let degenerate = standardize_columns(&mut data, n);
    if let Some(column) = degenerate.iter().position(|&d| d) {
        return Err(CollinearityError::DegenerateColumn { column });
    }
    Ok(max_abs_offdiag(&data, n, &degenerate).0)
}

/// Median / mean / extremes of a nonempty sample.
pub fn summarize(samples: &[f64]) -> SummaryStats {
    assert!(!samples.is_empty(), "summary of an empty sample");
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let m = sorted.len();
    let median = if m % 2 == 1 {
        sorted[m / 2]
    } else {
        0.5 * (sorted[m / 2 - 1] + sorted[m / 2])
    };
    SummaryStats {
        min: sorted[0],
        median,
        mean: samples.iter().sum::<f64>() / m as f64,
        max: sorted[m - 1],
    }
}

/// Equal-width histogram over `[min, max]`.
///
/// All-equal samples fall in a single bin spanning `[v - 0.5, v + 0.5]`.
/// A value on an interior edge belongs to the lower bin; the global maximum
/// lands in the last bin. Counts always sum to `samples.len()`.
pub fn histogram(samples: &[f64], bins: usize) -> Histogram {
    assert!(bins >= 1, "need at least one bin");
    assert!(!samples.is_empty(), "histogram of an empty sample");
    let min = samples.iter().fold(f64::INFINITY, |m, &v| m.min(v));
    let max = samples.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v));
    let (lo, hi) = if min == max {
        (min - 0.5, max + 0.5)
    } else {
        (min, max)
    };
    let width = (hi - lo) / bins as f64;
    let mut edges: Vec<f64> = (0..=bins).map(|i| lo + width * i as f64).collect();
    edges[bins] = hi;
    let mut counts = vec![0u64; bins];
    for &v in samples {
        let idx = if v <= lo {
            0
        } else {
            let raw = ((v - lo) / width).ceil() as usize;
            raw.saturating_sub(1).min(bins - 1)
        };
        counts[idx] += 1;
    }
    Histogram { edges, counts }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn histogram_two_point() {
        let h = histogram(&[0.0, 1.0], 2);
        assert_eq!(h.counts, vec![1, 1]);
        assert_eq!(h.edges.len(), 3);
    }

    #[test]
    fn histogram_all_equal() {
        let h = histogram(&[0.7; 5], 4);
        assert_eq!(h.counts.iter().sum::<u64>(), 5);
        assert_eq!(h.counts.iter().filter(|&&c| c > 0).count(), 1);
        assert!((h.edges[0] - 0.2).abs() < 1e-12);
        assert!((h.edges[4] - 1.2).abs() < 1e-12);
    }

    #[test]
    fn histogram_interior_edge_goes_low() {
        // Edges at 0, 0.5, 1.0: the value 0.5 belongs to the first bin.
        let h = histogram(&[0.0, 0.5, 1.0], 2);
        assert_eq!(h.counts, vec![2, 1]);
    }

    #[test]
    fn duplicated_column_has_correlation_one() {
        let x = Matrix::from_rows(&[
            vec![1.0, 1.0, 0.2],
            vec![2.0, 2.0, 0.9],
            vec![-1.0, -1.0, 0.4],
        ])
        .unwrap();
        let r = max_pairwise_abs_correlation(&x).unwrap();
        assert!((r - 1.0).abs() < 1e-12);
    }

    #[test]
    fn orthogonal_centered_columns_have_zero_correlation() {
        let x = Matrix::from_rows(&[
            vec![1.0, 0.0],
            vec![-1.0, 0.0],
            vec![0.0, 1.0],
            vec![0.0, -1.0],
        ])
        .unwrap();
        let r = max_pairwise_abs_correlation(&x).unwrap();
        assert!(r.abs() < 1e-14);
    }

    #[test]
    fn constant_column_is_degenerate() {
        let x = Matrix::from_rows(&[vec![1.0, 5.0], vec![2.0, 5.0], vec![3.0, 5.0]]).unwrap();
        assert!(matches!(
            max_pairwise_abs_correlation(&x),
            Err(CollinearityError::DegenerateColumn { column: 1 })
        ));
    }

    #[test]
    fn single_rep_in_range() {
        let config = SimConfig::new(5, 2, 1, 99);
        let dist = simulate_max_abs_correlation(&config).unwrap();
        assert_eq!(dist.samples.len(), 1);
        assert!(dist.samples[0] >= 0.0 && dist.samples[0] <= 1.0);
        assert_eq!(dist.degenerate_pairs_skipped, 0);
    }

    #[test]
    fn config_validation() {
        assert!(SimConfig::new(2, 5, 1, 0).validate().is_err());
        assert!(SimConfig::new(3, 1, 1, 0).validate().is_err());
        assert!(SimConfig::new(3, 2, 0, 0).validate().is_err());
    }

    #[test]
    fn rep_matrix_matches_simulation_draws() {
        let config = SimConfig::new(6, 4, 2, 123);
        let m = sample_rep_matrix(&config, 1);
        let raw = draw_columns(6, 4, 123, 1);
        for j in 0..4 {
            for i in 0..6 {
                assert_eq!(m.get(i, j), raw[j * 6 + i]);
            }
        }
    }
}
