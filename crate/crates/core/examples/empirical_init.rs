//! Starting populations drawn from a histogram instead of a normal
//! distribution. Pass a histogram TOML (`bin_edges`, `weights`) or use the
//! bundled one.

use arm_core::init::init_empirical;
use arm_core::presets::bundled_histogram;
use arm_core::{final_polarization, polarization_1d, HistogramSpec, Initializer, SimConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> arm_core::Result<()> {
    let hist = match std::env::args().nth(1) {
        Some(path) => HistogramSpec::load(path)?,
        None => bundled_histogram(),
    };
    let pop = init_empirical(100, &hist, &mut ChaCha8Rng::seed_from_u64(0))?;
    println!("histogram mean {:.3}; initial variance {:.4}", hist.mean(), polarization_1d(pop.flat())?);
    for t in [0.15, 0.25, 0.35, 0.55] {
        let cfg = SimConfig {
            tolerance: t,
            initializer: Initializer::Empirical(hist.clone()),
            max_steps: 1_000_000,
            seed: 5,
            ..SimConfig::default()
        };
        println!("T = {t}  final variance {:.4}", final_polarization(&cfg)?);
    }
    Ok(())
}
