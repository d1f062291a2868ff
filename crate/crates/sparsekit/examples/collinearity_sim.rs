//! Distribution of the maximum absolute pairwise sample correlation among
//! independent Gaussian predictors: a desk-scale look at how spurious
//! collinearity grows with p for fixed n.
//!
//! ```text
//! cargo run --release --example collinearity_sim
//! ```

use sparsekit::collinearity::{simulate_max_abs_correlation, SimConfig};

fn print_histogram(dist: &sparsekit::collinearity::MaxCorrDistribution) {
    let max_count = dist.histogram.counts.iter().copied().max().unwrap_or(1);
    for (i, &count) in dist.histogram.counts.iter().enumerate() {
        if count == 0 {
            continue;
        }
        let bar = "#".repeat((40 * count / max_count.max(1)) as usize);
        println!(
            "  [{:.3}, {:.3}) {bar} {count}",
            dist.histogram.edges[i],
            dist.histogram.edges[i + 1]
        );
    }
}

fn main() {
    let n = 60;
    for (p, reps, seed) in [(100usize, 100usize, 1u64), (1000, 100, 2)] {
        let mut config = SimConfig::new(n, p, reps, seed);
        config.bins = 20;
        let dist = simulate_max_abs_correlation(&config).unwrap();
        println!(
            "n = {n}, p = {p}, {reps} replications: median {:.4}, mean {:.4}, range [{:.4}, {:.4}]",
            dist.summary.median, dist.summary.mean, dist.summary.min, dist.summary.max
        );
        print_histogram(&dist);
        println!();
    }
    println!("with p = 1000 the max spurious correlation concentrates near 0.6 —");
    println!("strong collinearity among predictors that are independent by construction.");
}
