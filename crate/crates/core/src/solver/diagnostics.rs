//! Runtime checks of the convergence theory: majorizer pairs, potential
//! functions and their floors, and the schedule inequality.

use crate::fractional::{s_value, Problem};
use crate::linalg::dot;

use super::config::SolverConfig;
use super::steps::{IterateState, XStep};
use super::trace::Trace;

/// `(Ṁ^t(x), Ẇ^t(x))` for the Dinkelbach step, or `(M̈^t(x), Ẅ^t(x))` when
/// `quadratic`, at probe `x`. `step` must come from the state `st`.
pub fn majorizer_pair(
    p: &Problem,
    st: &IterateState,
    step: &XStep,
    cfg: &SolverConfig,
    quadratic: bool,
    x: &[f64],
) -> (f64, f64) {
    let dtilde = |v: &[f64]| {
        let d = p.d.value(v);
        if quadratic {
            d.sqrt()
        } else {
            d
        }
    };
    let delta = p.delta.value(x);
    let w = s_value(p, x, &st.y, &st.z, st.beta) + delta - p.g.value(x) - step.weight * dtilde(x);

    let diff: Vec<f64> = x.iter().zip(&st.x).map(|(a, b)| a - b).collect();
    let sq = dot(&diff, &diff);
    let a_norm = p.a.op_norm();
    let lin = s_value(p, &st.x, &st.y, &st.z, st.beta)
        + dot(&diff, &step.grad_s)
        + 0.5 * (p.f.lipschitz() + st.beta * a_norm * a_norm) * sq;
    let concave = -p.g.value(&st.x) - dot(&diff, &step.xi_g);
    let den = -dtilde(&st.x) - dot(&diff, &step.xi_d) + 0.5 * step.modulus * sq;
    let m =
        delta + lin + concave + step.weight * den + 0.5 * (cfg.theta - 1.0) * step.ell * sq;
    (m, w)
}

/// Potential `P^t` for `t ≥ 1` (`NaN` at `t = 0`), rebuilt from the trace
/// with `d̲ = min d(x^t)` and `ᾱ = max α^t` taken from the trace itself.
///
/// D: `P^t = L^t + 12(1+ξ)C_h²/(β⁰d̲t) + C_h²μ^t/(2d̲)`.
/// Q: `P^t = K^t + 12ᾱ²(1+ξ)C_h²/(β⁰t) + ᾱ²C_h²μ^t/2`.
pub fn potential(p: &Problem, trace: &Trace) -> Vec<f64> {
    let cfg = &trace.config;
    let c_h = p.h.lipschitz();
    let c2 = c_h * c_h;
    let d_min = trace
        .records
        .iter()
        .map(|r| r.denominator)
        .fold(f64::INFINITY, f64::min);
    let alpha_max = trace
        .steps()
        .iter()
        .map(|r| r.scalar)
        .filter(|a| a.is_finite())
        .fold(0.0, f64::max);
    let quadratic = trace.variant.is_quadratic();
    trace
        .records
        .iter()
        .map(|r| {
            if r.t == 0 {
                return f64::NAN;
            }
            let t = r.t as f64;
            if quadratic {
                let a2 = alpha_max * alpha_max;
                r.lk + 12.0 * a2 * (1.0 + cfg.xi) * c2 / (cfg.beta0 * t) + 0.5 * a2 * c2 * r.mu
            } else {
                r.lk + 12.0 * (1.0 + cfg.xi) * c2 / (cfg.beta0 * d_min * t)
                    + c2 * r.mu / (2.0 * d_min)
            }
        })
        .collect()
}

/// Lower bound on `P^t` from `U^t ≥ u̲ = F̲d̲ − v̲/β⁰`, `v̲ = (8 + χ/2)z̄²`,
/// `z̄ = max(‖z⁰‖, C_h)`, with `F̲, d̲, d̄, ᾱ` taken from the trace.
///
/// D: `u̲/d̄` when `u̲ > 0`, else `u̲/d̲`.
/// Q: `−d̄/u̲` when `u̲ > 0` (since `K ≥ −d/U`), else `ᾱ²u̲ − 2ᾱ√d̄`.
pub fn potential_floor(p: &Problem, trace: &Trace) -> f64 {
    let u_low = numerator_floor(p, trace);
    let (d_min, d_max) = trace
        .records
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), r| {
            (lo.min(r.denominator), hi.max(r.denominator))
        });
    if trace.variant.is_quadratic() {
        if u_low > 0.0 {
            -d_max / u_low
        } else {
            let a = trace
                .steps()
                .iter()
                .map(|r| r.scalar.abs())
                .filter(|a| a.is_finite())
                .fold(0.0, f64::max);
            a * a * u_low - 2.0 * a * d_max.sqrt()
        }
    } else if u_low > 0.0 {
        u_low / d_max
    } else {
        u_low / d_min
    }
}

/// `u̲ = F̲d̲ − v̲/β⁰`; positive exactly when `β⁰ > v̲/(F̲d̲)` holds on the
/// trace, i.e. when [`potential_floor`] is the positive bound.
pub fn numerator_floor(p: &Problem, trace: &Trace) -> f64 {
    let cfg = &trace.config;
    let zbar = trace.z0_norm.max(p.h.lipschitz());
    let f_min = trace.records.iter().map(|r| r.objective).fold(f64::INFINITY, f64::min);
    let d_min = trace.records.iter().map(|r| r.denominator).fold(f64::INFINITY, f64::min);
    f_min * d_min - (8.0 + 0.5 * cfg.chi) * zbar * zbar / cfg.beta0
}

/// `((μ^{t−1}/μ^t − 1)², 6/t − 6/(t+1))` for `t ≥ 1`.
pub fn schedule_ratio_gap(cfg: &SolverConfig, t: usize) -> (f64, f64) {
    let (_, m0) = cfg.schedule(t - 1);
    let (_, m1) = cfg.schedule(t);
    let r = m0 / m1 - 1.0;
    let t = t as f64;
    (r * r, 6.0 / t - 6.0 / (t + 1.0))
}

/// `a / max(1, |scale|)`
pub(crate) fn rel(a: f64, scale: f64) -> f64 {
    a / scale.abs().max(1.0)
}
