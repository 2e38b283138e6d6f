use std::fmt;

use serde::{Deserialize, Serialize};

use super::config::{SolverConfig, Variant};

/// Assumption-violation bits attached to a trace record.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Flags(pub u8);

impl Flags {
    /// `λ^t ≤ 0` or `α^{t+1} ≤ 0`.
    pub const SCALAR_NONPOSITIVE: Flags = Flags(1);
    /// `U(x^t, y^t; z^t; β^t, μ^t) ≤ 0`.
    pub const U_NONPOSITIVE: Flags = Flags(2);
    /// `d(x^t) < 1e-12`.
    pub const DENOMINATOR_FLOOR: Flags = Flags(4);

    pub fn empty() -> Self {
        Flags(0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, other: Flags) -> bool {
        self.0 & other.0 == other.0
    }

    pub fn insert(&mut self, other: Flags) {
        self.0 |= other.0;
    }
}

impl fmt::Display for Flags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Values at iterate `t`, plus the step metrics of `t → t+1` (`NaN` on the
/// final record).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub t: usize,
    pub beta: f64,
    pub mu: f64,
    /// `λ^t` (D), `α^{t+1}` (Q) or the step size `1/β^t` (SPM).
    pub scalar: f64,
    /// `F(x^t)`
    pub objective: f64,
    /// `U(x^t, y^t; z^t; β^t, μ^t)` (`u(x^t)` for SPM).
    pub u: f64,
    /// `L^t` (D), `K(α^t, x^t, y^t; z^t; β^t, μ^t)` (Q) or `F(x^t)` (SPM).
    pub lk: f64,
    /// `d(x^t)`
    pub denominator: f64,
    /// `‖Ax^t − y^t‖`
    pub primal_residual: f64,
    /// `E₊^t`
    pub e_plus: f64,
    /// `crit(W^t)` when diagnostics are recorded.
    pub crit: f64,
    pub flag: Flags,
    pub wall_ms: f64,
}

/// Aggregated per-iteration checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// `max ‖z^{t+1} − ∇h_{μ^t}(y^{t+1})‖ / max(1, ‖z^{t+1}‖)`.
    pub max_dual_identity: f64,
    pub max_z_norm: f64,
    /// `max(‖z⁰‖, C_h)`
    pub z_bound: f64,
    pub z_bound_violations: usize,
    /// `max(‖y^{t+1} − y̌^{t+1}‖ − μ^tC_h)`.
    pub max_smoothing_gap_excess: f64,
    pub schedule_violations: usize,
    pub majorizer_checks: usize,
    /// `min (Ṁ(x) − Ẇ(x)) / max(1, |Ẇ(x)|)` over the spot-check probes.
    pub min_majorizer_gap: f64,
    /// `max |Ṁ(x^t) − Ẇ(x^t)| / max(1, |Ẇ(x^t)|)`.
    pub max_majorizer_touch: f64,
    /// Argmin property `Ṁ(x^{t+1}) ≤ Ṁ(x^t)`, relative excess.
    pub max_majorizer_descent_excess: f64,
    pub descent_checks: usize,
    /// Relative excess of `L(x^{t+1}, y^t; ...)` over `L(x^t, y^t; ...)`
    /// (resp. the `K` analogue).
    pub max_descent_excess: f64,
}

impl Default for Diagnostics {
    fn default() -> Self {
        Diagnostics {
            max_dual_identity: 0.0,
            max_z_norm: 0.0,
            z_bound: 0.0,
            z_bound_violations: 0,
            max_smoothing_gap_excess: f64::NEG_INFINITY,
            schedule_violations: 0,
            majorizer_checks: 0,
            min_majorizer_gap: f64::INFINITY,
            max_majorizer_touch: 0.0,
            max_majorizer_descent_excess: f64::NEG_INFINITY,
            descent_checks: 0,
            max_descent_excess: f64::NEG_INFINITY,
        }
    }
}

/// Output of one solver run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub variant: Variant,
    pub config: SolverConfig,
    pub instance: String,
    pub records: Vec<TraceRecord>,
    pub diagnostics: Diagnostics,
    pub x_final: Vec<f64>,
    /// `‖z⁰‖`
    pub z0_norm: f64,
}

impl Trace {
    pub fn last(&self) -> &TraceRecord {
        self.records.last().expect("a trace always has the initial record")
    }

    pub fn final_objective(&self) -> f64 {
        self.last().objective
    }

    /// Records whose step metrics are defined (all but the final one).
    pub fn steps(&self) -> &[TraceRecord] {
        &self.records[..self.records.len() - 1]
    }

    pub fn any_flag_from(&self, t0: usize) -> bool {
        self.records
            .iter()
            .filter(|r| r.t >= t0)
            .any(|r| !r.flag.is_empty())
    }
}
