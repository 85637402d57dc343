//! Locates the tolerance transition by fitting a logistic curve to the
//! cell means of a one-axis sweep.
//!
//! `cargo run --release --example sensitivity_fit [iterations]`

use arm_core::sweep::grid;
use arm_core::{fit_logistic, run_sweep, Axis, Param, SimConfig, SweepSpec};

fn main() -> arm_core::Result<()> {
    let iterations = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(8);
    let spec = SweepSpec {
        iterations,
        ..SweepSpec::new(
            SimConfig {
                max_steps: 1_000_000,
                ..SimConfig::default()
            },
            vec![Axis::new(Param::Tolerance, grid(0.05, 1.0, 0.05))],
        )
    };
    let result = run_sweep(&spec, None)?;
    let (xs, ys): (Vec<f64>, Vec<f64>) = result.means().into_iter().unzip();
    for (x, y) in xs.iter().zip(&ys) {
        println!("T={x:<5} mean {y:.4}");
    }
    let fit = fit_logistic(&xs, &ys)?;
    println!(
        "a = {:.4}, k = {:.2}, x0 = {:.4}, rmse = {:.4}, converged = {}",
        fit.a, fit.k, fit.x0, fit.rmse, fit.converged
    );
    Ok(())
}
