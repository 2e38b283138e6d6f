use crate::error::{check_dim, Error, Result};
use crate::fractional::{sqrt_subgradient, u_value, varphi, Problem};
use crate::linalg::{dist, norm};
use crate::smoothing::prox_smoothed;

use super::config::SolverConfig;

/// Live iterate `(x^t, y^t, z^t)` with its schedule values.
#[derive(Debug, Clone, PartialEq)]
pub struct IterateState {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub z: Vec<f64>,
    pub t: usize,
    pub beta: f64,
    pub mu: f64,
    /// `λ^t` (D) or `α^{t+1}` (Q); `NaN` before Step S4.
    pub scalar: f64,
    /// `y̌^t`
    pub ycheck: Vec<f64>,
}

impl IterateState {
    pub fn new(cfg: &SolverConfig, x: Vec<f64>, y: Vec<f64>, z: Vec<f64>) -> Self {
        let (beta, mu) = cfg.schedule(0);
        let ycheck = y.clone();
        IterateState {
            x,
            y,
            z,
            t: 0,
            beta,
            mu,
            scalar: f64::NAN,
            ycheck,
        }
    }
}

/// Output of the linearized `x`-step.
#[derive(Debug, Clone, PartialEq)]
pub struct XStep {
    /// `x^{t+1}`
    pub x: Vec<f64>,
    /// `x′ = x^t − g/(θℓ)`
    pub xprime: Vec<f64>,
    /// `∇s(x^t) = ∇f(x^t) + Aᵀ(z^t + β^t(Ax^t − y^t))`
    pub grad_s: Vec<f64>,
    /// Selected `ξ ∈ ∂g(x^t)`.
    pub xi_g: Vec<f64>,
    /// Selected element of `∂d(x^t)` (D) or `∂√d(x^t)` (Q).
    pub xi_d: Vec<f64>,
    /// `λ^t` (D) or `2/α^{t+1}` (Q).
    pub weight: f64,
    /// Weak-convexity modulus paired with `xi_d`.
    pub modulus: f64,
    /// `ℓ(β^t)`
    pub ell: f64,
}

impl XStep {
    /// `θℓ(β^t)`, the inverse prox radius.
    pub fn step(&self, theta: f64) -> f64 {
        theta * self.ell
    }

    /// `ζ = −θℓ(x^{t+1} − x′) ∈ ∂δ(x^{t+1})`.
    pub fn prox_subgradient(&self, theta: f64) -> Vec<f64> {
        let s = self.step(theta);
        self.x
            .iter()
            .zip(&self.xprime)
            .map(|(a, b)| -s * (a - b))
            .collect()
    }
}

/// `∇s(x) = ∇f(x) + Aᵀ(z + β(Ax − y))`.
pub(crate) fn grad_s(p: &Problem, x: &[f64], y: &[f64], z: &[f64], beta: f64) -> Vec<f64> {
    let ax = p.a.apply(x);
    let v: Vec<f64> = ax
        .iter()
        .zip(y)
        .zip(z)
        .map(|((a, yi), zi)| zi + beta * (a - yi))
        .collect();
    let mut g = p.a.apply_adjoint(&v);
    for (gi, fi) in g.iter_mut().zip(p.f.gradient(x)) {
        *gi += fi;
    }
    g
}

fn x_step(
    p: &Problem,
    st: &IterateState,
    cfg: &SolverConfig,
    weight: f64,
    xi_d: Vec<f64>,
    modulus: f64,
) -> Result<XStep> {
    let grad = grad_s(p, &st.x, &st.y, &st.z, st.beta);
    let xi_g = p.g.subgradient(&st.x);
    let a_norm = p.a.op_norm();
    let ell = p.f.lipschitz() + st.beta * a_norm * a_norm + weight.max(0.0) * modulus;
    if !(ell > 0.0 && ell.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "ell",
            value: ell,
            reason: "majorizer curvature must be positive and finite",
        });
    }
    let step = cfg.theta * ell;
    let xprime: Vec<f64> = st
        .x
        .iter()
        .zip(&grad)
        .zip(&xi_g)
        .zip(&xi_d)
        .map(|(((x, gs), gg), gd)| x - (gs - gg - weight * gd) / step)
        .collect();
    let x = p.delta.prox(&xprime, 1.0 / step);
    Ok(XStep {
        x,
        xprime,
        grad_s: grad,
        xi_g,
        xi_d,
        weight,
        modulus,
        ell,
    })
}

/// Dinkelbach `x`-step: `Prox(x′; δ, 1/(θℓ))` with
/// `g = ∇s(x^t) − ∂g(x^t) − λ^t∂d(x^t)` and `ℓ = L_f + β^t‖A‖² + λ^tW_d`.
pub fn x_update_d(p: &Problem, st: &IterateState, cfg: &SolverConfig) -> Result<XStep> {
    let xi_d = p.d.subgradient(&st.x);
    x_step(p, st, cfg, st.scalar, xi_d, p.d.weak_convexity())
}

/// Quadratic-transform `x`-step with `∂√d` weighted by `2/α^{t+1}`.
pub fn x_update_q(p: &Problem, st: &IterateState, cfg: &SolverConfig) -> Result<XStep> {
    let modulus = p.d.sqrt_weak_convexity().ok_or_else(|| Error::UnsupportedVariant {
        variant: cfg.variant.to_string(),
        reason: "the denominator has no weakly convex square root".into(),
    })?;
    let xi_d = sqrt_subgradient(p.d.as_ref(), &st.x)?;
    let weight = if st.scalar.is_infinite() {
        0.0
    } else {
        2.0 / st.scalar
    };
    x_step(p, st, cfg, weight, xi_d, modulus)
}

/// `λ^t = U(x^t, y^t; z^t; β^t, μ^t)/d(x^t)`.
pub fn lambda_update(p: &Problem, st: &IterateState) -> Result<f64> {
    let d = p.d.value(&st.x);
    if !(d > 0.0) {
        return Err(Error::Denominator { value: d });
    }
    Ok(u_value(p, &st.x, &st.y, &st.z, st.beta, st.mu)? / d)
}

/// `α^{t+1} = √d(x^t)/U(x^t, y^t; z^t; β^t, μ^t)`.
pub fn alpha_update(p: &Problem, st: &IterateState) -> Result<f64> {
    let d = p.d.value(&st.x);
    if !(d > 0.0) {
        return Err(Error::Denominator { value: d });
    }
    Ok(d.sqrt() / u_value(p, &st.x, &st.y, &st.z, st.beta, st.mu)?)
}

/// Step S5: `(y^{t+1}, y̌^{t+1})` with `b^t = Ax^{t+1} + z^t/β^t`.
pub fn y_update(p: &Problem, st: &IterateState, x_next: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    check_dim("y_update", p.dim(), x_next.len())?;
    let b: Vec<f64> = p
        .a
        .apply(x_next)
        .iter()
        .zip(&st.z)
        .map(|(a, z)| a + z / st.beta)
        .collect();
    let out = prox_smoothed(p.h.as_ref(), st.mu, st.beta, &b)?;
    Ok((out.ybar, out.ycheck))
}

/// Step S6: `z^{t+1} = z^t + β^t(Ax^{t+1} − y^{t+1})`.
pub fn z_update(p: &Problem, st: &IterateState, x_next: &[f64], y_next: &[f64]) -> Vec<f64> {
    p.a.apply(x_next)
        .iter()
        .zip(y_next)
        .zip(&st.z)
        .map(|((a, y), z)| z + st.beta * (a - y))
        .collect()
}

/// `E₊^t = β^t(‖x^{t+1} − x^t‖ + ‖y^{t+1} − y^t‖ + ‖Ax^{t+1} − y^{t+1}‖)`.
pub fn e_plus(p: &Problem, prev: &IterateState, next: &IterateState) -> f64 {
    prev.beta
        * (dist(&next.x, &prev.x) + dist(&next.y, &prev.y) + dist(&p.a.apply(&next.x), &next.y))
}

/// The point `W^t = (x^{t+1}, x^t, y̌^{t+1}, y^t, z^{t+1}, z^t)` together with
/// the subgradient selections used by the step.
#[derive(Debug, Clone, Copy)]
pub struct CritPoint<'a> {
    pub x_next: &'a [f64],
    pub x: &'a [f64],
    pub ycheck_next: &'a [f64],
    pub y: &'a [f64],
    pub z_next: &'a [f64],
    pub z: &'a [f64],
    /// Element of `∂δ(x^{t+1})`.
    pub zeta: &'a [f64],
    /// Element of `∂g(x^t)`.
    pub xi_g: &'a [f64],
    /// Element of `∂d(x^t)`.
    pub xi_d: &'a [f64],
}

/// `crit(W)`: the `‖∂h(y̌⁺) − z⁺‖` term vanishes since `z⁺ ∈ ∂h(y̌⁺)`.
pub fn crit_residual(p: &Problem, w: &CritPoint<'_>) -> Result<f64> {
    let phi = varphi(p, w.x, w.y)?;
    let ax_next = p.a.apply(w.x_next);
    let mut r = p.a.apply_adjoint(w.z_next);
    for ((((ri, zi), fi), gi), di) in r
        .iter_mut()
        .zip(w.zeta)
        .zip(p.f.gradient(w.x_next))
        .zip(w.xi_g)
        .zip(w.xi_d)
    {
        *ri += zi + fi - gi - phi * di;
    }
    Ok(dist(w.x_next, w.x)
        + dist(w.ycheck_next, w.y)
        + dist(w.z_next, w.z)
        + dist(&ax_next, w.ycheck_next)
        + norm(&r))
}
