//! Experiment driver for the low Mach number limit: TOML configuration,
//! initial data, single runs, epsilon sweeps against a shared incompressible
//! reference, checksummed manifests and report rebuilding.

pub mod analyze;
pub mod cli;
pub mod config;
pub mod error;
pub mod experiment;
pub mod initial;
pub mod manifest;
pub mod oracle;
pub mod selftest;
pub mod sweep;

pub use analyze::{analyze, Analysis};
pub use config::{Config, InitSpec, Preparation};
pub use error::{HarnessError, HarnessResult};
pub use experiment::{run_experiment, run_member, Reference, RunReport, RunStatus};
pub use initial::gen_initial_data;
pub use manifest::{verify_manifest, RunManifest};
pub use sweep::{run_sweep, SweepPlan, SweepReport};
