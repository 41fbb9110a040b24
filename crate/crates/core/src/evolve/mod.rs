//! Time evolution used to cross-check the stability analyses: a linearized
//! per-wavenumber channel stepper and a pseudo-spectral nonlinear solver on
//! the torus.

mod experiment;
mod invariants;
mod linear;
mod torus;

pub use experiment::{linear_stability_norm_experiment, stability_norm_experiment, ExperimentLabel, StabilityNormReport};
pub use invariants::{compute_invariants, stability_norm, Casimir, InvariantLedger};
pub use linear::{measure_growth_rate, step_linear_channel, GrowthMeasurement, LinearChannel, LinearChannelState, LINEAR_CFL};
pub use torus::{dealias, evolve_torus, step_torus_nonlinear, torus_cfl_limit, TorusRun, TorusRunOptions, TorusStepper, DEFAULT_COURANT, TORUS_CFL};
