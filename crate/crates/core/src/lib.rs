//! Solvers for nonsmooth fractional programs `min u(x)/d(x)` with
//! `u = f + δ − g + h(A·)`: smoothed ADMM in Dinkelbach and quadratic-transform
//! forms, subgradient baselines, proximal operators and benchmark builders.

pub mod error;
pub mod linalg;
pub mod prox;
pub mod smoothing;
pub mod fractional;
pub mod solver;
pub mod apps;

pub use error::{Error, Result};
