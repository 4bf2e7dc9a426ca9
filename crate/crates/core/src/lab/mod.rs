//! Experiment orchestration: configurations, the eps-sweep, order fitting,
//! single-model runs and the identity suite.

pub mod config;
pub mod fit;
pub mod identity;
pub mod runs;
pub mod sweep;

pub use config::{DtRule, Recipe, SweepConfig};
pub use fit::{fit_order, OrderFit};
pub use identity::{identity_suite, IdentityCheck};
pub use runs::{
    simulate_el, simulate_qs, validate_energy, write_run, ElRunConfig, EnergyValidation, QsRunConfig, RunReport,
    RunSummary,
};
pub use sweep::{run_sweep, write_sweep, SweepReport};
