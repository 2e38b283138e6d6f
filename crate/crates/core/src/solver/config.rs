use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Algorithm selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    FadmmD,
    FadmmQ,
    SpgmD,
    SpgmQ,
    Spm,
}

impl Variant {
    pub const ALL: [Variant; 5] = [
        Variant::FadmmD,
        Variant::FadmmQ,
        Variant::SpgmD,
        Variant::SpgmQ,
        Variant::Spm,
    ];

    /// Uses the quadratic transform (`α`) instead of the Dinkelbach ratio.
    pub fn is_quadratic(self) -> bool {
        matches!(self, Variant::FadmmQ | Variant::SpgmQ)
    }

    /// Keeps the multiplier `z` (false for the smoothing-only baselines).
    pub fn uses_multiplier(self) -> bool {
        matches!(self, Variant::FadmmD | Variant::FadmmQ)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::FadmmD => "FADMM-D",
            Variant::FadmmQ => "FADMM-Q",
            Variant::SpgmD => "SPGM-D",
            Variant::SpgmQ => "SPGM-Q",
            Variant::Spm => "SPM",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        Variant::ALL
            .into_iter()
            .find(|v| v.as_str().to_ascii_lowercase() == key)
            .ok_or_else(|| Error::Data(format!("unknown variant `{s}`")))
    }
}

/// Smallest admissible `χ` for a given `ξ`.
pub fn chi_lower_bound(xi: f64) -> f64 {
    2.0 * (1.0 + xi).sqrt()
}

/// Parameters of the penalty/smoothing schedule and run budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub xi: f64,
    pub theta: f64,
    pub p: f64,
    pub chi: f64,
    pub beta0: f64,
    pub max_iter: usize,
    /// Advisory wall-clock budget, checked once per iteration.
    pub max_seconds: Option<f64>,
    pub variant: Variant,
    pub seed: u64,
    /// Per-iteration identities, descent and majorizer checks, and `crit`.
    pub record_diagnostics: bool,
    /// Majorizer spot-check period in iterations (0 disables).
    pub spot_check_every: usize,
    /// Record elapsed wall-clock time; when false `wall_ms` is always 0.
    pub record_time: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        let xi = 1.0;
        SolverConfig {
            xi,
            theta: 1.01,
            p: 1.0 / 3.0,
            chi: chi_lower_bound(xi) + 1e-5,
            beta0: 1.0,
            max_iter: 1000,
            max_seconds: None,
            variant: Variant::FadmmD,
            seed: 0,
            record_diagnostics: false,
            spot_check_every: 25,
            record_time: true,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |name, value, reason| {
            Err(Error::InvalidParameter {
                name,
                value,
                reason,
            })
        };
        if !(self.xi > 0.0 && self.xi.is_finite()) {
            return bad("xi", self.xi, "must be positive and finite");
        }
        if !(self.theta > 1.0 && self.theta.is_finite()) {
            return bad("theta", self.theta, "must exceed 1");
        }
        if !(self.p > 0.0 && self.p < 1.0) {
            return bad("p", self.p, "must lie in (0, 1)");
        }
        if !(self.chi > chi_lower_bound(self.xi) && self.chi.is_finite()) {
            return bad("chi", self.chi, "must exceed 2*sqrt(1 + xi)");
        }
        if !(self.beta0 > 0.0 && self.beta0.is_finite()) {
            return bad("beta0", self.beta0, "must be positive and finite");
        }
        if let Some(s) = self.max_seconds {
            if !(s > 0.0) {
                return bad("max_seconds", s, "must be positive");
            }
        }
        Ok(())
    }

    /// `(β^t, μ^t) = (β⁰(1 + ξt^p), χ/β^t)`.
    pub fn schedule(&self, t: usize) -> (f64, f64) {
        let beta = self.beta0 * (1.0 + self.xi * (t as f64).powf(self.p));
        (beta, self.chi / beta)
    }
}

/// `(β^t, μ^t)`.
pub fn schedule(cfg: &SolverConfig, t: usize) -> (f64, f64) {
    cfg.schedule(t)
}
