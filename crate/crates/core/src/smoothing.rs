//! Nesterov smoothing `h_μ(y) = max_v ⟨y, v⟩ − h*(v) − (μ/2)‖v‖²` of
//! prox-friendly convex functions, evaluated through the prox of `h`.

use crate::error::{check_positive, Result};
use crate::linalg::{dist, norm1};
use crate::prox::{prox_generalized_max, soft_threshold_scalar};

/// A convex, `C_h`-Lipschitz function with an exact proximal map.
pub trait SmoothableConvex: Send + Sync {
    fn dim(&self) -> usize;
    fn value(&self, y: &[f64]) -> f64;
    /// `argmin_v h(v) + ‖v − y‖²/(2μ)` for `μ > 0`.
    fn prox(&self, y: &[f64], mu: f64) -> Vec<f64>;
    /// `C_h`
    fn lipschitz(&self) -> f64;
    /// One deterministic element of `∂h(y)`.
    fn subgradient(&self, y: &[f64]) -> Vec<f64>;
}

/// `h_μ(y) = ‖y − ẏ‖²/(2μ) + h(ẏ)` with `ẏ = Prox(y; h, μ)`.
pub fn smooth_value(h: &dyn SmoothableConvex, mu: f64, y: &[f64]) -> Result<f64> {
    check_positive("mu", mu)?;
    let p = h.prox(y, mu);
    let d = dist(y, &p);
    Ok(d * d / (2.0 * mu) + h.value(&p))
}

/// `∇h_μ(y) = (y − Prox(y; h, μ))/μ`.
pub fn smooth_grad(h: &dyn SmoothableConvex, mu: f64, y: &[f64]) -> Result<Vec<f64>> {
    check_positive("mu", mu)?;
    let p = h.prox(y, mu);
    Ok(y.iter().zip(&p).map(|(a, b)| (a - b) / mu).collect())
}

/// Minimizer of `h_μ(y) + (β/2)‖y − b‖²` together with the auxiliary point
/// `y̌ = Prox(b; h, μ + 1/β)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothedProx {
    pub ybar: Vec<f64>,
    pub ycheck: Vec<f64>,
}

/// `ȳ = (y̌ + βμb)/(1 + βμ)` with `y̌ = Prox(b; h, μ + 1/β)`.
pub fn prox_smoothed(
    h: &dyn SmoothableConvex,
    mu: f64,
    beta: f64,
    b: &[f64],
) -> Result<SmoothedProx> {
    check_positive("mu", mu)?;
    check_positive("beta", beta)?;
    let ycheck = h.prox(b, mu + 1.0 / beta);
    let bm = beta * mu;
    let ybar = ycheck
        .iter()
        .zip(b)
        .map(|(yc, bi)| (yc + bm * bi) / (1.0 + bm))
        .collect();
    Ok(SmoothedProx { ybar, ycheck })
}

/// `scale·‖y‖₁` on `ℝ^dim`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct L1Norm {
    pub scale: f64,
    pub dim: usize,
}

impl SmoothableConvex for L1Norm {
    fn dim(&self) -> usize {
        self.dim
    }
    fn value(&self, y: &[f64]) -> f64 {
        self.scale * norm1(y)
    }
    fn prox(&self, y: &[f64], mu: f64) -> Vec<f64> {
        let tau = self.scale * mu;
        y.iter().map(|&v| soft_threshold_scalar(v, tau)).collect()
    }
    fn lipschitz(&self) -> f64 {
        self.scale * (self.dim as f64).sqrt()
    }
    fn subgradient(&self, y: &[f64]) -> Vec<f64> {
        y.iter().map(|&v| self.scale * sign0(v)).collect()
    }
}

/// `scale·‖y − shift‖₁`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftedL1 {
    pub scale: f64,
    pub shift: Vec<f64>,
}

impl SmoothableConvex for ShiftedL1 {
    fn dim(&self) -> usize {
        self.shift.len()
    }
    fn value(&self, y: &[f64]) -> f64 {
        self.scale * dist_l1(y, &self.shift)
    }
    fn prox(&self, y: &[f64], mu: f64) -> Vec<f64> {
        let tau = self.scale * mu;
        y.iter()
            .zip(&self.shift)
            .map(|(&v, &b)| b + soft_threshold_scalar(v - b, tau))
            .collect()
    }
    fn lipschitz(&self) -> f64 {
        self.scale * (self.shift.len() as f64).sqrt()
    }
    fn subgradient(&self, y: &[f64]) -> Vec<f64> {
        y.iter()
            .zip(&self.shift)
            .map(|(&v, &b)| self.scale * sign0(v - b))
            .collect()
    }
}

/// `max(0, max(y + shift))`, 1-Lipschitz.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedMax {
    pub shift: Vec<f64>,
}

impl SmoothableConvex for GeneralizedMax {
    fn dim(&self) -> usize {
        self.shift.len()
    }
    fn value(&self, y: &[f64]) -> f64 {
        y.iter()
            .zip(&self.shift)
            .map(|(a, b)| a + b)
            .fold(0.0, f64::max)
    }
    fn prox(&self, y: &[f64], mu: f64) -> Vec<f64> {
        prox_generalized_max(y, mu, &self.shift).expect("dimensions and radius validated")
    }
    fn lipschitz(&self) -> f64 {
        1.0
    }
    fn subgradient(&self, y: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; y.len()];
        let mut best = 0.0;
        let mut arg = None;
        for (i, (a, b)) in y.iter().zip(&self.shift).enumerate() {
            if a + b > best {
                best = a + b;
                arg = Some(i);
            }
        }
        if let Some(i) = arg {
            g[i] = 1.0;
        }
        g
    }
}

#[inline]
fn sign0(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

fn dist_l1(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}
