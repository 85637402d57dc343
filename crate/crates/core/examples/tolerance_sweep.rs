//! Tolerance x responsiveness sweep, written as sweep and aggregate CSVs.
//!
//! `cargo run --release --example tolerance_sweep [out_dir]`

use std::path::PathBuf;

use arm_core::output::{save_aggregate, save_sweep};
use arm_core::sweep::grid;
use arm_core::{run_sweep, Axis, Param, SimConfig, SweepSpec};

fn main() -> arm_core::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "out/tolerance_sweep".into()));
    let spec = SweepSpec {
        iterations: 5,
        master_seed: 1,
        ..SweepSpec::new(
            SimConfig {
                max_steps: 200_000,
                ..SimConfig::default()
            },
            vec![
                Axis::new(Param::Tolerance, grid(0.05, 0.95, 0.1)),
                Axis::new(Param::Responsiveness, vec![0.1, 0.25, 0.5]),
            ],
        )
    };
    let result = run_sweep(&spec, None)?;
    for cell in &result.cells {
        println!("T={:<5} R={:<5} mean {:.4}", cell.values[0], cell.values[1], cell.stats.mean);
    }
    save_sweep(&out.join("sweep.csv"), &result)?;
    save_aggregate(&out.join("aggregate.csv"), &result)?;
    println!("wrote {}", out.display());
    Ok(())
}
