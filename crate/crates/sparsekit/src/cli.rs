//! Command-line front end.
//!
//! One thin binary, five subcommands:
//!
//! * `solve`   — run an estimator on `X.csv` / `y.csv`, write an estimate
//!   report as JSON.
//! * `uup`     — restricted-isometry constants (exact or sampled) and
//!   canonical correlations.
//! * `corrsim` — max-|correlation| Monte Carlo; emits a sample CSV and a
//!   histogram CSV.
//! * `bench`   — `sweep` (risk across a lambda grid) and `bias`
//!   (Dantzig selector vs. Gauss–Dantzig).
//! * `gen`     — emit a synthetic problem as CSV files.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 solver failure.
//! Randomized commands require `--seed` and echo it in their metadata.

use crate::collinearity::{self, CollinearityError, SimConfig};
use crate::estimators::{
    basis_pursuit, dantzig_selector, gauss_dantzig, lasso_cd, DantzigOptions, Estimate,
    EstimatorError, LambdaMode, LpStats, RegressionProblem,
};
use crate::io::{
    self, read_matrix_csv, read_vector_csv, write_matrix_csv, write_report_json,
    write_vector_csv, IoError, ReportMeta,
};
use crate::linalg::{norm2, norm_inf, LinalgError};
use crate::lp::{LpError, SolverOptions};
use crate::rip::{
    group_correlation_single, max_canonical_correlation_sampled, restricted_isometry_exact,
    restricted_isometry_sampled, GroupCorrReport, RipError, RipReport,
};
use crate::riskbench::{
    compare_bias, generate_synthetic, run_risk_sweep, Amplitudes, BenchError, BenchMethod,
    DesignKind, SignPattern, SyntheticSpec,
};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// Parse arguments and run; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    let threads = cli.threads;
    let body = || match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    match threads {
        Some(t) if t > 0 => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(body),
            Err(e) => {
                eprintln!("error: cannot build thread pool: {e}");
                1
            }
        },
        Some(_) => {
            eprintln!("error: --threads must be at least 1");
            1
        }
        None => body(),
    }
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Data(String),
    Solver(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Solver(m) => f.write_str(m),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Solver(_) => 3,
        }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<EstimatorError> for CliError {
    fn from(e: EstimatorError) -> Self {
        match &e {
            EstimatorError::SigmaRequired
            | EstimatorError::InvalidSigma(_)
            | EstimatorError::InvalidOptions(_)
            | EstimatorError::TooFewPredictors(_) => CliError::Usage(e.to_string()),
            EstimatorError::ResponseLength { .. }
            | EstimatorError::NotRepresentable { .. }
            | EstimatorError::SupportOutOfRange { .. }
            | EstimatorError::SupportExceedsRows { .. }
            | EstimatorError::Linalg(_) => CliError::Data(e.to_string()),
            EstimatorError::NotConverged { .. }
            | EstimatorError::InternalInconsistency(_)
            | EstimatorError::IterationLimit { .. }
            | EstimatorError::Lp(_) => CliError::Solver(e.to_string()),
        }
    }
}

impl From<LpError> for CliError {
    fn from(e: LpError) -> Self {
        CliError::Solver(e.to_string())
    }
}

impl From<RipError> for CliError {
    fn from(e: RipError) -> Self {
        match &e {
            RipError::NoTrials => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<CollinearityError> for CliError {
    fn from(e: CollinearityError) -> Self {
        match &e {
            CollinearityError::InvalidConfig(_) => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<BenchError> for CliError {
    fn from(e: BenchError) -> Self {
        match &e {
            BenchError::InvalidSpec(_) | BenchError::Config(_) => CliError::Usage(e.to_string()),
            BenchError::Linalg(_) => CliError::Data(e.to_string()),
            _ => CliError::Solver(e.to_string()),
        }
    }
}

impl From<LinalgError> for CliError {
    fn from(e: LinalgError) -> Self {
        CliError::Data(e.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "sparsekit",
    version,
    about = "Sparse recovery toolkit: Dantzig selector, basis pursuit, isometry probes, collinearity simulation, risk benchmarks"
)]
struct Cli {
    /// Worker threads for parallel commands (default: all cores). Results
    /// are identical for any value.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit an estimator to a design/response pair and write the estimate as JSON.
    Solve(SolveArgs),
    /// Probe the restricted isometry constant or canonical correlations of a design.
    Uup(UupArgs),
    /// Simulate the distribution of the maximum absolute pairwise correlation.
    Corrsim(CorrsimArgs),
    /// Risk benchmarks on synthetic problems.
    Bench(BenchArgs),
    /// Generate a synthetic problem and write it as CSV files.
    Gen(GenArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Dantzig,
    BasisPursuit,
    GaussDantzig,
    Lasso,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LambdaModeArg {
    Sqrt2LogP,
    Sqrt2LogN,
    Custom,
}

#[derive(Args)]
struct SolveArgs {
    /// Estimator to run.
    #[arg(long, value_enum)]
    method: MethodArg,
    /// Design matrix CSV (n rows, p columns).
    #[arg(long)]
    x: PathBuf,
    /// Response vector CSV (single column).
    #[arg(long)]
    y: PathBuf,
    /// Known noise standard deviation (not used by basis-pursuit).
    #[arg(long)]
    sigma: Option<f64>,
    /// Regularization factor choice; the constraint bound is factor * sigma.
    #[arg(long, value_enum, default_value = "sqrt2-log-p")]
    lambda_mode: LambdaModeArg,
    /// Custom lambda factor (with --lambda-mode custom).
    #[arg(long)]
    lambda: Option<f64>,
    /// Relative support threshold in (0, 1).
    #[arg(long, default_value_t = 1e-4)]
    support_threshold: f64,
    /// Keep columns at their original scale instead of unit l2 norm.
    #[arg(long)]
    no_standardize: bool,
    /// Interior-point iteration cap.
    #[arg(long, default_value_t = 100)]
    max_iterations: usize,
    #[arg(long, default_value_t = 1e-8)]
    gap_tol: f64,
    #[arg(long, default_value_t = 1e-8)]
    feas_tol: f64,
    /// Coordinate-descent pass cap (lasso only).
    #[arg(long, default_value_t = 5000)]
    lasso_max_pass: usize,
    /// Coordinate-descent convergence tolerance (lasso only).
    #[arg(long, default_value_t = 1e-9)]
    lasso_tol: f64,
    /// Output JSON path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum UupModeArg {
    Exact,
    Sampled,
}

#[derive(Args)]
struct UupArgs {
    /// Design matrix CSV; columns must be standardized for delta_S probes.
    #[arg(long)]
    x: PathBuf,
    /// Sparsity level S for a restricted-isometry probe.
    #[arg(long)]
    s: Option<usize>,
    #[arg(long, value_enum, default_value = "exact")]
    mode: UupModeArg,
    /// Subset budget for exact mode; exceeding it is an error that reports
    /// the exact count C(p, S).
    #[arg(long, default_value_t = 1_000_000)]
    budget: u64,
    /// Sampled-mode trial count (also for --cca-a/--cca-b).
    #[arg(long)]
    trials: Option<u64>,
    /// Seed for sampled modes (required there, echoed in the report).
    #[arg(long)]
    seed: Option<u64>,
    /// Group sizes for a sampled max canonical-correlation probe.
    #[arg(long)]
    cca_a: Option<usize>,
    #[arg(long)]
    cca_b: Option<usize>,
    /// Explicit disjoint groups (comma-separated column indices) for a
    /// single canonical-correlation evaluation.
    #[arg(long, value_parser = parse_index_list)]
    group_a: Option<std::vec::Vec<usize>>,
    #[arg(long, value_parser = parse_index_list)]
    group_b: Option<std::vec::Vec<usize>>,
    /// Output JSON path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CorrsimArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: usize,
    #[arg(long)]
    reps: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 50)]
    bins: usize,
    /// Sample CSV path (rep, max_abs_corr).
    #[arg(long)]
    out: PathBuf,
    /// Histogram CSV path; defaults to `<out stem>_hist.csv`.
    #[arg(long)]
    hist_out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[command(subcommand)]
    mode: BenchMode,
}

#[derive(Subcommand)]
enum BenchMode {
    /// Sweep estimator risk across a lambda grid (always includes
    /// sqrt(2 log p) and sqrt(2 log n)).
    Sweep(SweepArgs),
    /// Paired Dantzig selector vs. Gauss-Dantzig comparison.
    Bias(BiasArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DesignArg {
    Gaussian,
    Equicorrelated,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SignsArg {
    AllPositive,
    Random,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BenchMethodArg {
    Dantzig,
    GaussDantzig,
    Lasso,
    BasisPursuit,
}

impl From<BenchMethodArg> for BenchMethod {
    fn from(m: BenchMethodArg) -> Self {
        match m {
            BenchMethodArg::Dantzig => BenchMethod::DantzigSelector,
            BenchMethodArg::GaussDantzig => BenchMethod::GaussDantzig,
            BenchMethodArg::Lasso => BenchMethod::Lasso,
            BenchMethodArg::BasisPursuit => BenchMethod::BasisPursuit,
        }
    }
}

/// Synthetic-problem shape shared by `bench` and `gen`.
#[derive(Args)]
struct SpecArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: usize,
    /// Number of nonzero coefficients.
    #[arg(long)]
    s: usize,
    /// Signal amplitude as a multiple of sigma.
    #[arg(long, default_value_t = 5.0)]
    amplitude: f64,
    /// Explicit amplitudes (comma-separated, absolute scale); overrides
    /// --amplitude.
    #[arg(long, value_parser = parse_f64_list)]
    amplitudes: Option<std::vec::Vec<f64>>,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    #[arg(long, value_enum, default_value = "gaussian")]
    design: DesignArg,
    /// Equicorrelation coefficient (with --design equicorrelated).
    #[arg(long, default_value_t = 0.0)]
    rho: f64,
    #[arg(long, value_enum, default_value = "all-positive")]
    signs: SignsArg,
}

impl SpecArgs {
    fn to_spec(&self) -> SyntheticSpec {
        SyntheticSpec {
            n: self.n,
            p: self.p,
            sparsity: self.s,
            amplitudes: match &self.amplitudes {
                Some(v) => Amplitudes::Values(v.clone()),
                None => Amplitudes::ConstantSigmaMultiple(self.amplitude),
            },
            sigma: self.sigma,
            design: match self.design {
                DesignArg::Gaussian => DesignKind::GaussianIid,
                DesignArg::Equicorrelated => DesignKind::EquiCorrelated { rho: self.rho },
            },
            sign_pattern: match self.signs {
                SignsArg::AllPositive => SignPattern::AllPositive,
                SignsArg::Random => SignPattern::RandomSigns,
            },
        }
    }
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    spec: SpecArgs,
    /// Lambda factors to sweep (comma-separated).
    #[arg(long, value_parser = parse_f64_list, default_value = "1.0")]
    lambdas: std::vec::Vec<f64>,
    /// Methods to benchmark.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "dantzig")]
    methods: Vec<BenchMethodArg>,
    #[arg(long)]
    reps: usize,
    #[arg(long)]
    seed: u64,
    /// JSON report path.
    #[arg(long)]
    out: PathBuf,
    /// Optional CSV rendering of the report rows.
    #[arg(long)]
    csv_out: Option<PathBuf>,
}

#[derive(Args)]
struct BiasArgs {
    #[command(flatten)]
    spec: SpecArgs,
    #[arg(long)]
    reps: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    spec: SpecArgs,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    x_out: PathBuf,
    #[arg(long)]
    y_out: PathBuf,
    #[arg(long)]
    beta_out: PathBuf,
}

fn parse_f64_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .map_err(|_| format!("cannot parse {part:?} as a number"))
        })
        .collect()
}

fn parse_index_list(s: &str) -> Result<Vec<usize>, String> {
    s.split(',')
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .map_err(|_| format!("cannot parse {part:?} as an index"))
        })
        .collect()
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Uup(args) => cmd_uup(args),
        Command::Corrsim(args) => cmd_corrsim(args),
        Command::Bench(args) => match args.mode {
            BenchMode::Sweep(a) => cmd_sweep(a),
            BenchMode::Bias(a) => cmd_bias(a),
        },
        Command::Gen(args) => cmd_gen(args),
    }
}

#[derive(Serialize)]
struct SolveReport {
    meta: ReportMeta,
    method: &'static str,
    n: usize,
    p: usize,
    sigma: f64,
    standardized: bool,
    /// l2 norms of the original columns when standardization was applied;
    /// beta refers to the standardized design in that case.
    column_norms: Option<Vec<f64>>,
    lambda_factor: f64,
    /// `lambda_factor * sigma`: the bound on |X'(y - X beta)|_inf for
    /// Dantzig-type methods.
    constraint_bound: f64,
    support_threshold: f64,
    beta: Vec<f64>,
    support: Vec<usize>,
    /// |X'(y - X beta)|_inf — the feasibility residual of the Dantzig
    /// constraint on the design actually used.
    correlated_residual_sup_norm: f64,
    residual_l2_norm: f64,
    lp: Option<LpStats>,
    warnings: Vec<String>,
}

fn cmd_solve(args: SolveArgs) -> Result<(), CliError> {
    let x_raw = read_matrix_csv(&args.x)?;
    let y = read_vector_csv(&args.y)?;
    if y.len() != x_raw.rows() {
        return Err(CliError::Data(format!(
            "y has {} entries but X has {} rows",
            y.len(),
            x_raw.rows()
        )));
    }
    let lambda_mode = match args.lambda_mode {
        LambdaModeArg::Sqrt2LogP => LambdaMode::SqrtTwoLogP,
        LambdaModeArg::Sqrt2LogN => LambdaMode::SqrtTwoLogN,
        LambdaModeArg::Custom => {
            let v = args.lambda.ok_or_else(|| {
                CliError::Usage("--lambda-mode custom requires --lambda".into())
            })?;
            LambdaMode::Custom(v)
        }
    };
    if args.lambda.is_some() && args.lambda_mode != LambdaModeArg::Custom {
        return Err(CliError::Usage(
            "--lambda only applies with --lambda-mode custom".into(),
        ));
    }

    let sigma = match args.method {
        MethodArg::BasisPursuit => args.sigma.unwrap_or(0.0),
        _ => args.sigma.ok_or_else(|| {
            CliError::Usage("--sigma is required for this method".into())
        })?,
    };

    let column_norms: Option<Vec<f64>> = (!args.no_standardize)
        .then(|| (0..x_raw.cols()).map(|j| norm2(&x_raw.column(j))).collect());
    let prob = RegressionProblem::new(x_raw, y, sigma)?;
    let prob = if args.no_standardize {
        prob
    } else {
        prob.standardize()?
    };

    let solver = SolverOptions {
        max_iterations: args.max_iterations,
        gap_tolerance: args.gap_tol,
        feasibility_tolerance: args.feas_tol,
        ..SolverOptions::default()
    };
    let opts = DantzigOptions {
        lambda_mode,
        support_threshold: args.support_threshold,
        solver,
    };

    let n = prob.num_observations();
    let p = prob.num_predictors();
    let (method_name, estimate): (&'static str, Estimate) = match args.method {
        MethodArg::Dantzig => ("dantzig", dantzig_selector(&prob, &opts)?),
        MethodArg::GaussDantzig => ("gauss-dantzig", gauss_dantzig(&prob, &opts)?),
        MethodArg::BasisPursuit => (
            "basis-pursuit",
            basis_pursuit(prob.x(), prob.y(), &opts.solver)?,
        ),
        MethodArg::Lasso => {
            let factor = match lambda_mode {
                LambdaMode::SqrtTwoLogP => crate::estimators::default_lambda(p)?,
                LambdaMode::SqrtTwoLogN => crate::estimators::default_lambda(n)?,
                LambdaMode::Custom(v) => v,
            };
            (
                "lasso",
                lasso_cd(&prob, factor * sigma, args.lasso_max_pass, args.lasso_tol)?,
            )
        }
    };

    let fitted = prob.x().matvec(&estimate.beta)?;
    let residual: Vec<f64> = prob
        .y()
        .iter()
        .zip(&fitted)
        .map(|(&a, &b)| a - b)
        .collect();
    let correlated = prob.x().transpose_matvec(&residual)?;

    let report = SolveReport {
        meta: ReportMeta::new("solve", None),
        method: method_name,
        n,
        p,
        sigma,
        standardized: !args.no_standardize,
        column_norms,
        lambda_factor: estimate.lambda_used,
        constraint_bound: estimate.lambda_used * sigma,
        support_threshold: args.support_threshold,
        correlated_residual_sup_norm: norm_inf(&correlated),
        residual_l2_norm: norm2(&residual),
        beta: estimate.beta.clone(),
        support: estimate.support.clone(),
        lp: estimate.lp_stats.clone(),
        warnings: estimate.warnings.clone(),
    };
    write_report_json(&args.out, &report)?;
    println!(
        "wrote {} ({} support size {})",
        args.out.display(),
        method_name,
        report.support.len()
    );
    Ok(())
}

#[derive(Serialize)]
struct UupReport<'a> {
    meta: ReportMeta,
    #[serde(skip_serializing_if = "Option::is_none")]
    rip: Option<&'a RipReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    canonical_correlation: Option<&'a GroupCorrReport>,
}

fn cmd_uup(args: UupArgs) -> Result<(), CliError> {
    let x = read_matrix_csv(&args.x)?;
    let cca_pair = args.cca_a.is_some() || args.cca_b.is_some();
    let explicit_groups = args.group_a.is_some() || args.group_b.is_some();

    if explicit_groups {
        let ga = args.group_a.clone().ok_or_else(|| {
            CliError::Usage("--group-a and --group-b must be given together".into())
        })?;
        let gb = args.group_b.clone().ok_or_else(|| {
            CliError::Usage("--group-a and --group-b must be given together".into())
        })?;
        let report = group_correlation_single(&x, &ga, &gb)?;
        let out = UupReport {
            meta: ReportMeta::new("uup", None),
            rip: None,
            canonical_correlation: Some(&report),
        };
        write_report_json(&args.out, &out)?;
        println!("wrote {} (rho = {:.6})", args.out.display(), report.rho);
        return Ok(());
    }

    if cca_pair {
        let (sa, sb) = match (args.cca_a, args.cca_b) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(CliError::Usage(
                    "--cca-a and --cca-b must be given together".into(),
                ))
            }
        };
        let trials = args
            .trials
            .ok_or_else(|| CliError::Usage("sampled canonical correlation needs --trials".into()))?;
        let seed = args
            .seed
            .ok_or_else(|| CliError::Usage("sampled canonical correlation needs --seed".into()))?;
        let report = max_canonical_correlation_sampled(&x, sa, sb, trials, seed)?;
        let out = UupReport {
            meta: ReportMeta::new("uup", Some(seed)),
            rip: None,
            canonical_correlation: Some(&report),
        };
        write_report_json(&args.out, &out)?;
        println!(
            "wrote {} (max rho over {} trials = {:.6})",
            args.out.display(),
            trials,
            report.rho
        );
        return Ok(());
    }

    let s = args
        .s
        .ok_or_else(|| CliError::Usage("a delta_S probe needs --s (or use --cca-a/--cca-b)".into()))?;
    let report = match args.mode {
        UupModeArg::Exact => restricted_isometry_exact(&x, s, args.budget)?,
        UupModeArg::Sampled => {
            let trials = args
                .trials
                .ok_or_else(|| CliError::Usage("sampled mode needs --trials".into()))?;
            let seed = args
                .seed
                .ok_or_else(|| CliError::Usage("sampled mode needs --seed".into()))?;
            restricted_isometry_sampled(&x, s, trials, seed)?
        }
    };
    let out = UupReport {
        meta: ReportMeta::new("uup", report.seed),
        rip: Some(&report),
        canonical_correlation: None,
    };
    write_report_json(&args.out, &out)?;
    println!(
        "wrote {} (delta_{} = {:.6} over {} subsets)",
        args.out.display(),
        report.s,
        report.delta,
        report.subsets_checked
    );
    Ok(())
}

#[derive(Serialize)]
struct CorrsimMeta {
    meta: ReportMeta,
    config: SimConfig,
    summary: collinearity::SummaryStats,
    degenerate_pairs_skipped: u64,
    gaussian_sampler: String,
    samples_csv: String,
    histogram_csv: String,
}

fn default_hist_path(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().to_string())
        .unwrap_or_else(|| "corrsim".to_string());
    out.with_file_name(format!("{stem}_hist.csv"))
}

fn cmd_corrsim(args: CorrsimArgs) -> Result<(), CliError> {
    let config = SimConfig {
        n: args.n,
        p: args.p,
        reps: args.reps,
        seed: args.seed,
        bins: args.bins,
    };
    let dist = collinearity::simulate_max_abs_correlation(&config)?;

    let mut samples_csv = String::from("rep,max_abs_corr\n");
    for (rep, v) in dist.samples.iter().enumerate() {
        let _ = writeln!(samples_csv, "{rep},{v:.16e}");
    }
    std::fs::write(&args.out, samples_csv).map_err(|e| CliError::Data(format!(
        "{}: {e}",
        args.out.display()
    )))?;

    let hist_path = args.hist_out.unwrap_or_else(|| default_hist_path(&args.out));
    let mut hist_csv = String::from("bin_lower,bin_upper,count\n");
    for (i, count) in dist.histogram.counts.iter().enumerate() {
        let _ = writeln!(
            hist_csv,
            "{:.16e},{:.16e},{count}",
            dist.histogram.edges[i],
            dist.histogram.edges[i + 1]
        );
    }
    std::fs::write(&hist_path, hist_csv).map_err(|e| CliError::Data(format!(
        "{}: {e}",
        hist_path.display()
    )))?;

    let meta = CorrsimMeta {
        meta: ReportMeta::new("corrsim", Some(args.seed)),
        config,
        summary: dist.summary,
        degenerate_pairs_skipped: dist.degenerate_pairs_skipped,
        gaussian_sampler: dist.gaussian_sampler.clone(),
        samples_csv: args.out.display().to_string(),
        histogram_csv: hist_path.display().to_string(),
    };
    println!("{}", io::to_json_string(&meta)?);
    Ok(())
}

#[derive(Serialize)]
struct SweepOut {
    meta: ReportMeta,
    report: crate::riskbench::RiskReport,
}

fn cmd_sweep(args: SweepArgs) -> Result<(), CliError> {
    let spec = args.spec.to_spec();
    let methods: Vec<BenchMethod> = args.methods.iter().map(|&m| m.into()).collect();
    let report = run_risk_sweep(&spec, &args.lambdas, &methods, args.reps, args.seed)?;

    if let Some(csv_path) = &args.csv_out {
        let mut csv = String::from(
            "method,lambda,is_sqrt_2_log_p,is_sqrt_2_log_n,empirical_risk,ideal_risk,risk_ratio,is_empirical_argmin,reps,seed\n",
        );
        for row in &report.rows {
            let ratio = row
                .risk_ratio
                .map(|r| format!("{r:.16e}"))
                .unwrap_or_default();
            let _ = writeln!(
                csv,
                "{},{:.16e},{},{},{:.16e},{:.16e},{ratio},{},{},{}",
                row.method.label(),
                row.lambda_factor,
                row.is_sqrt_two_log_p,
                row.is_sqrt_two_log_n,
                row.empirical_risk,
                row.ideal_risk,
                row.is_empirical_argmin,
                report.reps,
                report.seed
            );
        }
        std::fs::write(csv_path, csv).map_err(|e| {
            CliError::Data(format!("{}: {e}", csv_path.display()))
        })?;
    }

    let out = SweepOut {
        meta: ReportMeta::new("bench sweep", Some(args.seed)),
        report,
    };
    write_report_json(&args.out, &out)?;
    println!(
        "wrote {} ({} rows)",
        args.out.display(),
        out.report.rows.len()
    );
    Ok(())
}

#[derive(Serialize)]
struct BiasOut {
    meta: ReportMeta,
    report: crate::riskbench::BiasReport,
}

fn cmd_bias(args: BiasArgs) -> Result<(), CliError> {
    let spec = args.spec.to_spec();
    let report = compare_bias(&spec, args.reps, args.seed)?;
    let out = BiasOut {
        meta: ReportMeta::new("bench bias", Some(args.seed)),
        report,
    };
    write_report_json(&args.out, &out)?;
    println!(
        "wrote {} (ds mse {:.4}, gauss-dantzig mse {:.4})",
        args.out.display(),
        out.report.ds_mean_sq_error,
        out.report.gd_mean_sq_error
    );
    Ok(())
}

#[derive(Serialize)]
struct GenMeta {
    meta: ReportMeta,
    spec: SyntheticSpec,
    support: Vec<usize>,
    x_csv: String,
    y_csv: String,
    beta_csv: String,
}

fn cmd_gen(args: GenArgs) -> Result<(), CliError> {
    let spec = args.spec.to_spec();
    let (prob, beta) = generate_synthetic(&spec, args.seed)?;
    write_matrix_csv(&args.x_out, prob.x(), None)?;
    write_vector_csv(&args.y_out, prob.y(), Some("y"))?;
    write_vector_csv(&args.beta_out, &beta, Some("beta"))?;
    let support: Vec<usize> = beta
        .iter()
        .enumerate()
        .filter(|(_, &b)| b != 0.0)
        .map(|(j, _)| j)
        .collect();
    let meta = GenMeta {
        meta: ReportMeta::new("gen", Some(args.seed)),
        spec,
        support,
        x_csv: args.x_out.display().to_string(),
        y_csv: args.y_out.display().to_string(),
        beta_csv: args.beta_out.display().to_string(),
    };
    println!("{}", io::to_json_string(&meta)?);
    Ok(())
}
