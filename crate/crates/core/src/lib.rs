//! Seeded simulation engine and experiment harness for the
//! attraction-repulsion model (ARM) of ideological polarization.
//!
//! Actors hold positions in `[0,1]^D`. Each step one actor meets a random
//! partner with probability `(1/2)^(d/E)`, then moves a fraction `R` of the
//! distance toward the partner if they are within tolerance `T`, or away
//! from it otherwise. Polarization is the population variance (the trace of
//! the covariance matrix when `D > 1`).
//!
//! ```
//! use arm_core::{final_polarization, SimConfig};
//!
//! let cfg = SimConfig { max_steps: 50_000, seed: 3, ..SimConfig::default() };
//! let variance = final_polarization(&cfg).unwrap();
//! assert!((0.0..=0.25).contains(&variance));
//! ```

pub mod cli;
pub mod config;
pub mod engine;
pub mod error;
pub mod fit;
pub mod init;
pub mod interventions;
pub mod manifest;
pub mod metrics;
pub mod model;
pub mod output;
pub mod presets;
pub mod rules;
pub mod sweep;

pub use config::{Initializer, Rule, ShockConfig, SimConfig};
pub use engine::{final_polarization, simulate, Engine, StepKind, StepOutcome, TrajectoryRecord};
pub use error::{Error, Result};
pub use fit::{fit_logistic, LogisticFit};
pub use init::HistogramSpec;
pub use metrics::{aggregate_sweep_cell, polarization_1d, polarization_trace, CellStats};
pub use model::{Population, Position};
pub use sweep::{derive_seed_list, run_sweep, Axis, Param, SweepResult, SweepSpec};
pub use manifest::RunManifest;
