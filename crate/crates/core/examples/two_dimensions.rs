//! Two ideological dimensions with different exposures per dimension.
//! Polarization is the trace of the covariance matrix (at most 0.5).

use arm_core::{final_polarization, SimConfig};

fn main() -> arm_core::Result<()> {
    for (e1, e2) in [(0.1, 0.05), (0.1, 0.4), (0.4, 0.4)] {
        let cfg = SimConfig {
            exposure: vec![e1, e2],
            max_steps: 2_000_000,
            seed: 11,
            ..SimConfig::with_dims(2)
        };
        println!("E = ({e1}, {e2})  final trace {:.4}", final_polarization(&cfg)?);
    }
    Ok(())
}
