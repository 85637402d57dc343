//! A rightward shock applied to every actor at step 500,000, with
//! snapshots before and after it.

use arm_core::{simulate, ShockConfig, SimConfig};

fn main() -> arm_core::Result<()> {
    for delta in [0.1, 0.4, 0.8] {
        let cfg = SimConfig {
            shock: Some(ShockConfig {
                strength: vec![delta],
                at_step: 500_000,
            }),
            snapshot_steps: vec![499_999, 501_000],
            max_steps: 2_500_000,
            record_every: 500_000,
            seed: 3,
            ..SimConfig::default()
        };
        let record = simulate(&cfg)?;
        let mean_at = |i: usize| {
            let pop = &record.snapshots[i].population;
            pop.flat().iter().sum::<f64>() / pop.len() as f64
        };
        println!(
            "delta {delta}: mean position {:.3} -> {:.3}, final variance {:.4}",
            mean_at(0),
            mean_at(1),
            record.final_polarization().unwrap()
        );
    }
    Ok(())
}
