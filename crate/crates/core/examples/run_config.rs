//! Loads a run configuration TOML and writes the time series CSV, the same
//! way `arm run` does.
//!
//! `cargo run --release --example run_config -- examples/configs/center_holds.toml out/`

use std::path::PathBuf;

use arm_core::output::{save_snapshots, save_time_series};
use arm_core::{simulate, SimConfig};

fn main() -> arm_core::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = PathBuf::from(args.next().unwrap_or_else(|| "examples/configs/center_holds.toml".into()));
    let out = PathBuf::from(args.next().unwrap_or_else(|| "out/run_config".into()));
    let cfg = SimConfig::load(&path)?;
    let record = simulate(&cfg)?;
    save_time_series(&out.join("timeseries.csv"), &record.series)?;
    if !record.snapshots.is_empty() {
        save_snapshots(&out.join("snapshots.csv"), &record.snapshots)?;
    }
    println!("final variance {:.4}; wrote {}", record.final_polarization().unwrap(), out.display());
    Ok(())
}
