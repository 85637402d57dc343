//! The stochastic attraction-repulsion rule for several steepness values.
//! Infinite steepness reproduces the deterministic rule step for step.

use arm_core::rules::sar_repulsion_probability;
use arm_core::{final_polarization, Rule, SimConfig};

fn main() -> arm_core::Result<()> {
    print!("repulsion probability at d = 0.1, 0.25, 0.5:");
    for k in [2.0, 8.0, f64::INFINITY] {
        let f: Vec<String> = [0.1, 0.25, 0.5]
            .iter()
            .map(|d| format!("{:.3}", sar_repulsion_probability(*d, k, 0.25, 1)))
            .collect();
        print!("  k={k}: [{}]", f.join(", "));
    }
    println!();
    let ar = SimConfig {
        max_steps: 1_500_000,
        seed: 2,
        ..SimConfig::default()
    };
    println!("deterministic rule: {:.4}", final_polarization(&ar)?);
    for k in [2.0, 4.0, 16.0, 64.0, f64::INFINITY] {
        let cfg = SimConfig {
            rule: Rule::Sar { steepness: k },
            ..ar.clone()
        };
        println!("k = {k:<4}  final variance {:.4}", final_polarization(&cfg)?);
    }
    Ok(())
}
