//! Smoothed ADMM for fractional programs (Dinkelbach and quadratic-transform
//! variants), the smoothing-only and projected-subgradient baselines, and the
//! per-iteration diagnostics.

pub mod config;
pub mod diagnostics;
mod run;
mod steps;
pub mod trace;

pub use config::{chi_lower_bound, schedule, SolverConfig, Variant};
pub use diagnostics::{majorizer_pair, potential, numerator_floor, potential_floor, schedule_ratio_gap};
pub use run::{initial_point, run, run_spgm, run_spm, DENOMINATOR_FLOOR};
pub use steps::{
    alpha_update, crit_residual, e_plus, lambda_update, x_update_d, x_update_q, y_update,
    z_update, CritPoint, IterateState, XStep,
};
pub use trace::{Diagnostics, Flags, Trace, TraceRecord};
