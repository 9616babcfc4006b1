//! Time integration, run orchestration and decay diagnostics.

mod config;
mod diagnostics;
mod heat;
mod ic;
mod run;
mod stepper;

pub use config::{
    DecaySpec, IcSpec, NamedNorm, NormTarget, Preset, SimConfig, DEFAULT_CADENCE, DEFAULT_CFL,
};
pub use diagnostics::{
    decay_fit, exponential_fit, z_norms, z_norms_with, DecayFit, MIN_FIT_SAMPLES,
};
pub use heat::{heat_decay, HeatDecaySpec, HEAT_COLUMNS};
pub use ic::{initial_sigma_u, initial_state};
pub use run::{
    output_column_names, plan_steps, run, run_from, state_diagnostics, static_column_names,
    trace_column_names, RunOutput, RunStatus, StateDiagnostics, COMPOSITE_COLUMNS, RUNNING_COLUMNS,
};
pub use stepper::{step, Stepper, MAX_CFL_VIOLATIONS};
