//! One run at the default parameters, printing the polarization trajectory.
//!
//! `cargo run --release --example single_run [steps]`

use std::time::Instant;

use arm_core::{simulate, SimConfig};

fn main() -> arm_core::Result<()> {
    let steps: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1_000_000);
    let cfg = SimConfig {
        max_steps: steps,
        record_every: (steps / 10).max(1),
        seed: 42,
        ..SimConfig::default()
    };
    let start = Instant::now();
    let record = simulate(&cfg)?;
    let secs = start.elapsed().as_secs_f64();
    for p in &record.series {
        println!("{:>9}  {:.5}", p.step, p.polarization);
    }
    println!("{:.1} M steps/s", steps as f64 / secs / 1e6);
    Ok(())
}
