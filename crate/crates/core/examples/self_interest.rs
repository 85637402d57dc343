//! Final polarization as the pull toward preferred positions grows.

use arm_core::{final_polarization, SimConfig};

fn main() -> arm_core::Result<()> {
    for p in [0.0, 0.01, 0.02, 0.05, 0.1] {
        let cfg = SimConfig {
            self_interest_prob: p,
            max_steps: 2_500_000,
            seed: 7,
            ..SimConfig::default()
        };
        println!("P = {:>4.0}%  final variance {:.4}", p * 100.0, final_polarization(&cfg)?);
    }
    Ok(())
}
