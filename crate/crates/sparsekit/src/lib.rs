//! Sparse recovery in underdetermined linear models (`p >> n`).
//!
//! The crate bundles the estimators, diagnostics and benchmarking machinery
//! that come up when studying `y = X beta + eps` with far more predictors
//! than observations:
//!
//! * [`estimators`] — the Dantzig selector (`min ||beta||_1` subject to
//!   `||X^T (y - X beta)||_inf <= lambda * sigma`), basis pursuit for the
//!   noiseless case, the two-stage Gauss–Dantzig refit, an OLS-on-support
//!   helper and a coordinate-descent Lasso baseline.
//! * [`lp`] — the dense primal–dual interior-point solver the estimators
//!   reduce to.
//! * [`rip`] — restricted-isometry constants (exact subset enumeration with a
//!   hard budget, or seeded sampling) and canonical correlations between
//!   predictor groups.
//! * [`collinearity`] — Monte Carlo distribution of the maximum absolute
//!   pairwise sample correlation among independent Gaussian predictors.
//! * [`riskbench`] — synthetic-problem generation, ideal (oracle) risk, a
//!   lambda sweep harness and a Dantzig vs. Gauss–Dantzig bias comparison.
//! * [`linalg`] — the small dense linear-algebra kernel underneath it all.
//! * [`io`] / [`cli`] — CSV/JSON persistence and the command-line front end.
//!
//! Every randomized routine takes an explicit 64-bit seed and derives one
//! independent stream per replication, so results are reproducible bit for
//! bit under any thread count. Start with the `examples/` directory; each
//! file there exercises one capability end to end.

pub mod cli;
pub mod collinearity;
pub mod estimators;
pub mod io;
pub mod linalg;
pub mod lp;
pub mod policy;
pub mod rip;
pub mod riskbench;
pub mod rng;

pub use linalg::Matrix;
pub use policy::NumericPolicy;
