use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{check_dim, Error, Result};
use crate::fractional::{objective, residual_norm, u_value, Problem};
use crate::linalg::{all_finite, dist, norm};
use crate::smoothing::smooth_grad;

use super::config::{SolverConfig, Variant};
use super::diagnostics::{majorizer_pair, rel};
use super::steps::{
    crit_residual, e_plus, x_update_d, x_update_q, y_update, z_update, CritPoint, IterateState,
    XStep,
};
use super::trace::{Diagnostics, Flags, Trace, TraceRecord};

/// Threshold under which `d(x^t)` is flagged.
pub const DENOMINATOR_FLOOR: f64 = 1e-12;
const PROBES: usize = 20;
const RECORD_PREALLOC: usize = 1 << 16;
const PROBE_SEED_SALT: u64 = 0x9e37_79b9_7f4a_7c15;

/// Standard Gaussian `(x⁰, y⁰, z⁰)` from `seed`, with `x⁰` mapped into
/// `dom δ` by a prox of radius `1e-12`.
pub fn initial_point(p: &Problem, seed: u64) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gauss = |n: usize| -> Vec<f64> {
        (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
    };
    let x = gauss(p.dim());
    let y = gauss(p.dual_dim());
    let z = gauss(p.dual_dim());
    (p.delta.prox(&x, 1e-12), y, z)
}

/// Runs `cfg.variant` from `(x⁰, y⁰, z⁰)`. SPGM ignores `z⁰`; SPM ignores
/// `y⁰` and `z⁰`.
pub fn run(
    p: &Problem,
    cfg: &SolverConfig,
    x0: &[f64],
    y0: &[f64],
    z0: &[f64],
) -> Result<Trace> {
    match cfg.variant {
        Variant::FadmmD | Variant::FadmmQ => run_admm(p, cfg, x0, y0, z0, true),
        Variant::SpgmD | Variant::SpgmQ => run_spgm(p, cfg, x0, y0),
        Variant::Spm => run_spm(p, cfg, x0),
    }
}

/// The ADMM loop with the multiplier frozen at `z = 0`.
pub fn run_spgm(p: &Problem, cfg: &SolverConfig, x0: &[f64], y0: &[f64]) -> Result<Trace> {
    let z0 = vec![0.0; p.dual_dim()];
    run_admm(p, cfg, x0, y0, &z0, false)
}

fn check_inputs(p: &Problem, cfg: &SolverConfig, x0: &[f64], y0: &[f64], z0: &[f64]) -> Result<()> {
    cfg.validate()?;
    check_dim("run: x0", p.dim(), x0.len())?;
    check_dim("run: y0", p.dual_dim(), y0.len())?;
    check_dim("run: z0", p.dual_dim(), z0.len())?;
    if cfg.variant.is_quadratic() && !p.has_sqrt_oracle() {
        return Err(Error::UnsupportedVariant {
            variant: cfg.variant.to_string(),
            reason: "the denominator has no weakly convex square root".into(),
        });
    }
    Ok(())
}

struct Clock {
    start: Instant,
    record: bool,
}

impl Clock {
    fn ms(&self) -> f64 {
        if self.record {
            self.start.elapsed().as_secs_f64() * 1e3
        } else {
            0.0
        }
    }

    fn expired(&self, cfg: &SolverConfig) -> bool {
        cfg.max_seconds
            .is_some_and(|s| self.start.elapsed().as_secs_f64() >= s)
    }
}

fn ensure_finite(st: &IterateState) -> Result<()> {
    let bad = |what| Error::NonFinite {
        what,
        iteration: st.t,
    };
    if !all_finite(&st.x) {
        return Err(bad("x"));
    }
    if !all_finite(&st.y) {
        return Err(bad("y"));
    }
    if !all_finite(&st.z) {
        return Err(bad("z"));
    }
    Ok(())
}

fn run_admm(
    p: &Problem,
    cfg: &SolverConfig,
    x0: &[f64],
    y0: &[f64],
    z0: &[f64],
    keep_multiplier: bool,
) -> Result<Trace> {
    check_inputs(p, cfg, x0, y0, z0)?;
    let clock = Clock {
        start: Instant::now(),
        record: cfg.record_time,
    };
    let quadratic = cfg.variant.is_quadratic();
    let c_h = p.h.lipschitz();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ PROBE_SEED_SALT);

    let z0 = if keep_multiplier {
        z0.to_vec()
    } else {
        vec![0.0; z0.len()]
    };
    let z0_norm = norm(&z0);
    let mut diag = Diagnostics {
        z_bound: z0_norm.max(c_h),
        max_z_norm: z0_norm,
        ..Default::default()
    };
    let mut st = IterateState::new(cfg, x0.to_vec(), y0.to_vec(), z0);
    let mut records = Vec::with_capacity(cfg.max_iter.min(RECORD_PREALLOC) + 1);
    let mut prev_alpha = f64::NAN;

    for t in 0..=cfg.max_iter {
        let (beta, mu) = cfg.schedule(t);
        st.t = t;
        st.beta = beta;
        st.mu = mu;
        ensure_finite(&st)?;

        let d = p.d.value(&st.x);
        if !(d > 0.0) {
            return Err(Error::Denominator { value: d });
        }
        let u = u_value(p, &st.x, &st.y, &st.z, beta, mu)?;
        let mut flag = Flags::empty();
        if d < DENOMINATOR_FLOOR {
            flag.insert(Flags::DENOMINATOR_FLOOR);
        }
        if !(u > 0.0) {
            flag.insert(Flags::U_NONPOSITIVE);
        }
        let (scalar, lk) = if quadratic {
            let alpha = d.sqrt() / u;
            let a_t = if t == 0 { alpha } else { prev_alpha };
            (alpha, -2.0 * a_t * d.sqrt() + a_t * a_t * u)
        } else {
            let lambda = u / d;
            (lambda, lambda)
        };
        if !(scalar > 0.0) {
            flag.insert(Flags::SCALAR_NONPOSITIVE);
        }
        st.scalar = scalar;

        let mut rec = TraceRecord {
            t,
            beta,
            mu,
            scalar,
            objective: objective(p, &st.x)?,
            u,
            lk,
            denominator: d,
            primal_residual: residual_norm(p, &st.x, &st.y),
            e_plus: f64::NAN,
            crit: f64::NAN,
            flag,
            wall_ms: clock.ms(),
        };
        if t == cfg.max_iter || clock.expired(cfg) {
            records.push(rec);
            break;
        }

        let xs = if quadratic {
            x_update_q(p, &st, cfg)?
        } else {
            x_update_d(p, &st, cfg)?
        };
        let (y_next, yc_next) = y_update(p, &st, &xs.x)?;
        let z_next = if keep_multiplier {
            z_update(p, &st, &xs.x, &y_next)
        } else {
            vec![0.0; y_next.len()]
        };
        let (beta_next, mu_next) = cfg.schedule(t + 1);
        let next = IterateState {
            x: xs.x.clone(),
            y: y_next,
            z: z_next,
            t: t + 1,
            beta: beta_next,
            mu: mu_next,
            scalar: f64::NAN,
            ycheck: yc_next,
        };
        rec.e_plus = e_plus(p, &st, &next);

        if cfg.record_diagnostics {
            check_step(p, cfg, &st, &xs, &next, keep_multiplier, &mut diag, &mut rng)?;
            let xi_d_plain = if quadratic {
                p.d.subgradient(&st.x)
            } else {
                xs.xi_d.clone()
            };
            let zeta = xs.prox_subgradient(cfg.theta);
            rec.crit = crit_residual(
                p,
                &CritPoint {
                    x_next: &next.x,
                    x: &st.x,
                    ycheck_next: &next.ycheck,
                    y: &st.y,
                    z_next: &next.z,
                    z: &st.z,
                    zeta: &zeta,
                    xi_g: &xs.xi_g,
                    xi_d: &xi_d_plain,
                },
            )?;
        }
        records.push(rec);
        prev_alpha = scalar;
        st = next;
    }

    Ok(Trace {
        variant: cfg.variant,
        config: cfg.clone(),
        instance: String::new(),
        records,
        diagnostics: diag,
        x_final: st.x,
        z0_norm,
    })
}

#[allow(clippy::too_many_arguments)]
fn check_step(
    p: &Problem,
    cfg: &SolverConfig,
    st: &IterateState,
    xs: &XStep,
    next: &IterateState,
    keep_multiplier: bool,
    diag: &mut Diagnostics,
    rng: &mut ChaCha8Rng,
) -> Result<()> {
    let quadratic = cfg.variant.is_quadratic();
    let c_h = p.h.lipschitz();

    if keep_multiplier {
        let grad = smooth_grad(p.h.as_ref(), st.mu, &next.y)?;
        let zn = norm(&next.z);
        let gap = rel(dist(&next.z, &grad), zn);
        diag.max_dual_identity = diag.max_dual_identity.max(gap);
        diag.max_z_norm = diag.max_z_norm.max(zn);
        if zn > diag.z_bound + 1e-12 {
            diag.z_bound_violations += 1;
        }
    }
    let smoothing_gap = dist(&next.y, &next.ycheck) - st.mu * c_h;
    diag.max_smoothing_gap_excess = diag.max_smoothing_gap_excess.max(smoothing_gap);
    if !(st.beta <= next.beta && next.beta <= (1.0 + cfg.xi) * st.beta) {
        diag.schedule_violations += 1;
    }

    // the majorizer argument needs a positive weight
    if !(xs.weight > 0.0 && st.scalar.is_finite()) {
        return Ok(());
    }

    diag.descent_checks += 1;
    let excess = if quadratic {
        let alpha = st.scalar;
        let d_old = p.d.value(&st.x);
        let d_new = p.d.value(&next.x);
        let u_old = u_value(p, &st.x, &st.y, &st.z, st.beta, st.mu)?;
        let u_new = u_value(p, &next.x, &st.y, &st.z, st.beta, st.mu)?;
        let k_old = -2.0 * alpha * d_old.sqrt() + alpha * alpha * u_old;
        let k_new = -2.0 * alpha * d_new.sqrt() + alpha * alpha * u_new;
        rel(k_new - k_old, k_old)
    } else {
        let d_new = p.d.value(&next.x);
        let l_new = u_value(p, &next.x, &st.y, &st.z, st.beta, st.mu)? / d_new;
        rel(l_new - st.scalar, st.scalar)
    };
    diag.max_descent_excess = diag.max_descent_excess.max(excess);

    if cfg.spot_check_every == 0 || st.t % cfg.spot_check_every != 0 {
        return Ok(());
    }
    let (m0, w0) = majorizer_pair(p, st, xs, cfg, quadratic, &st.x);
    if !(m0.is_finite() && w0.is_finite()) {
        return Ok(());
    }
    diag.majorizer_checks += 1;
    diag.max_majorizer_touch = diag.max_majorizer_touch.max(rel((m0 - w0).abs(), w0));
    let (m1, _) = majorizer_pair(p, st, xs, cfg, quadratic, &xs.x);
    diag.max_majorizer_descent_excess = diag.max_majorizer_descent_excess.max(rel(m1 - m0, m0));

    let n = st.x.len();
    let scale = norm(&st.x).max(1.0) / (n as f64).sqrt();
    let radius = 1.0 / xs.step(cfg.theta);
    for k in 0..PROBES {
        let sigma = scale * 10f64.powi(k as i32 % 4 - 3);
        let raw: Vec<f64> = st
            .x
            .iter()
            .map(|v| {
                let g: f64 = StandardNormal.sample(rng);
                v + sigma * g
            })
            .collect();
        let probe = p.delta.prox(&raw, radius);
        let (m, w) = majorizer_pair(p, st, xs, cfg, quadratic, &probe);
        if m.is_finite() && w.is_finite() {
            diag.min_majorizer_gap = diag.min_majorizer_gap.min(rel(m - w, w));
        }
    }
    Ok(())
}

/// Projected subgradient method `x^{t+1} = P_Ω(x^t − g^t/β^t)` with the
/// quotient-rule selection `g^t = (∂u·d − u·∂d)/d²`.
pub fn run_spm(p: &Problem, cfg: &SolverConfig, x0: &[f64]) -> Result<Trace> {
    cfg.validate()?;
    check_dim("run_spm: x0", p.dim(), x0.len())?;
    let unsupported = || Error::UnsupportedVariant {
        variant: Variant::Spm.to_string(),
        reason: "the domain of delta is not projectable".into(),
    };
    let mut x = p.delta.projection(x0).ok_or_else(unsupported)?;
    let clock = Clock {
        start: Instant::now(),
        record: cfg.record_time,
    };
    let mut records = Vec::with_capacity(cfg.max_iter.min(RECORD_PREALLOC) + 1);
    for t in 0..=cfg.max_iter {
        let (beta, mu) = cfg.schedule(t);
        if !all_finite(&x) {
            return Err(Error::NonFinite {
                what: "x",
                iteration: t,
            });
        }
        let d = p.d.value(&x);
        if !(d > 0.0) {
            return Err(Error::Denominator { value: d });
        }
        let u = p.numerator(&x);
        let mut flag = Flags::empty();
        if d < DENOMINATOR_FLOOR {
            flag.insert(Flags::DENOMINATOR_FLOOR);
        }
        let f = u / d;
        let mut rec = TraceRecord {
            t,
            beta,
            mu,
            scalar: 1.0 / beta,
            objective: f,
            u,
            lk: f,
            denominator: d,
            primal_residual: 0.0,
            e_plus: f64::NAN,
            crit: f64::NAN,
            flag,
            wall_ms: clock.ms(),
        };
        if t == cfg.max_iter || clock.expired(cfg) {
            records.push(rec);
            break;
        }
        let du = p.numerator_subgradient(&x);
        let dd = p.d.subgradient(&x);
        let raw: Vec<f64> = x
            .iter()
            .zip(du.iter().zip(&dd))
            .map(|(xi, (a, b))| xi - (a * d - u * b) / (d * d) / beta)
            .collect();
        let x_next = p.delta.projection(&raw).ok_or_else(unsupported)?;
        rec.e_plus = beta * dist(&x_next, &x);
        records.push(rec);
        x = x_next;
    }
    Ok(Trace {
        variant: Variant::Spm,
        config: cfg.clone(),
        instance: String::new(),
        records,
        diagnostics: Diagnostics::default(),
        x_final: x,
        z0_norm: 0.0,
    })
}
