//! Direct use of the interior-point engine on a small linear program.
//!
//! ```text
//! cargo run --release --example lp_solve
//! ```

use sparsekit::linalg::Matrix;
use sparsekit::lp::{feasibility_check, solve_lp, LinearProgram, SolverOptions};

fn main() {
    // minimize -x - 2y
    // subject to  x +  y <= 4
    //             x + 3y <= 6
    //             0 <= x, y
    let g = Matrix::from_rows(&[
        vec![1.0, 1.0],
        vec![1.0, 3.0],
    ])
    .unwrap();
    let lp = LinearProgram::minimize(vec![-1.0, -2.0])
        .inequalities(g, vec![4.0, 6.0])
        .bounds(vec![0.0, 0.0], vec![f64::INFINITY, f64::INFINITY])
        .build()
        .unwrap();

    let sol = solve_lp(&lp, &SolverOptions::default()).unwrap();
    println!("status:     {:?}", sol.status);
    println!("x:          ({:.6}, {:.6})", sol.x[0], sol.x[1]);
    println!("objective:  {:.6}", sol.objective_value);
    println!("iterations: {}", sol.iterations);
    println!("rel gap:    {:.2e}", sol.duality_gap);
    println!("dual (rows): {:?}", sol.dual_ineq);

    let report = feasibility_check(&lp, &sol.x, 1e-6).unwrap();
    println!(
        "feasible at 1e-6: {} (worst inequality violation {:.1e})",
        report.feasible, report.max_ineq_violation
    );

    // The optimum sits at the vertex (3, 1) with objective -5.
    assert!((sol.objective_value + 5.0).abs() < 1e-6);
}
