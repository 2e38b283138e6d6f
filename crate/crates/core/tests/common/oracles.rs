//! Brute-force reference solvers for the closed-form proxes.
#![allow(dead_code)]

/// Minimizer of a unimodal `f` on `[a, b]`.
pub fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iters {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Dense grid on `[lo, hi]` followed by golden-section refinement around the
/// best grid point.
pub fn grid_min_1d(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    let n = 2000;
    let h = (hi - lo) / n as f64;
    let mut best = lo;
    let mut fbest = f(lo);
    for i in 1..=n {
        let x = lo + h * i as f64;
        let v = f(x);
        if v < fbest {
            best = x;
            fbest = v;
        }
    }
    let x = golden_section(&f, (best - h).max(lo), (best + h).min(hi), 200);
    if f(x) < fbest {
        x
    } else {
        best
    }
}

pub fn soft_threshold_objective(x: &[f64], b: &[f64], tau: f64) -> f64 {
    x.iter()
        .zip(b)
        .map(|(xi, bi)| tau * xi.abs() + 0.5 * (xi - bi) * (xi - bi))
        .sum()
}

pub fn soft_threshold_oracle(b: &[f64], tau: f64) -> Vec<f64> {
    b.iter()
        .map(|&bi| {
            let r = bi.abs() + tau + 1.0;
            grid_min_1d(|x| tau * x.abs() + 0.5 * (x - bi) * (x - bi), -r, r)
        })
        .collect()
}

pub fn l1_box_objective(x: &[f64], xp: &[f64], mu: f64, rho2: f64, rho0: f64) -> f64 {
    if x.iter().any(|v| v.abs() > rho0 * (1.0 + 1e-12)) {
        return f64::INFINITY;
    }
    x.iter()
        .zip(xp)
        .map(|(xi, pi)| rho2 * xi.abs() + (xi - pi) * (xi - pi) / (2.0 * mu))
        .sum()
}

pub fn l1_box_oracle(xp: &[f64], mu: f64, rho2: f64, rho0: f64) -> Vec<f64> {
    xp.iter()
        .map(|&p| {
            let r = rho0.min(p.abs() + 1.0);
            grid_min_1d(|x| rho2 * x.abs() + (x - p) * (x - p) / (2.0 * mu), -r, r)
        })
        .collect()
}

/// Euclidean projection onto the simplex by enumerating every support.
pub fn simplex_oracle(v: &[f64]) -> Vec<f64> {
    let n = v.len();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for mask in 1u32..(1 << n) {
        let s: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let tau = (s.iter().map(|&i| v[i]).sum::<f64>() - 1.0) / s.len() as f64;
        let mut x = vec![0.0; n];
        let mut ok = true;
        for &i in &s {
            x[i] = v[i] - tau;
            if x[i] < -1e-15 {
                ok = false;
            }
        }
        if !ok {
            continue;
        }
        let d: f64 = x.iter().zip(v).map(|(a, b)| (a - b) * (a - b)).sum();
        if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
            best = Some((d, x));
        }
    }
    best.expect("the full support is always feasible after clamping").1
}

pub fn generalized_max_objective(x: &[f64], xp: &[f64], mu: f64, b: &[f64]) -> f64 {
    let quad: f64 = x.iter().zip(xp).map(|(a, c)| (a - c) * (a - c)).sum();
    let m = x.iter().zip(b).map(|(a, c)| a + c).fold(0.0, f64::max);
    quad / (2.0 * mu) + m
}

/// `max(0, max v) = min{c ≥ 0 : v ≤ c}` reduces the prox to a 1-D convex
/// search over the level `c`, with `v = min(v′, c)`.
pub fn generalized_max_oracle(xp: &[f64], mu: f64, b: &[f64]) -> Vec<f64> {
    let vp: Vec<f64> = xp.iter().zip(b).map(|(a, c)| a + c).collect();
    let top = vp.iter().copied().fold(0.0, f64::max);
    let q = |c: f64| {
        vp.iter()
            .map(|&v| (v - c).max(0.0).powi(2))
            .sum::<f64>()
            / (2.0 * mu)
            + c
    };
    let c = if top == 0.0 { 0.0 } else { grid_min_1d(q, 0.0, top) };
    vp.iter().zip(b).map(|(&v, bi)| v.min(c) - bi).collect()
}

/// Cyclic coordinate descent with golden-section line searches.
pub fn coordinate_descent(f: impl Fn(&[f64]) -> f64, x0: &[f64], radius: f64, sweeps: usize) -> Vec<f64> {
    let mut x = x0.to_vec();
    for _ in 0..sweeps {
        for i in 0..x.len() {
            let c = x[i];
            let t = golden_section(
                |v| {
                    let mut y = x.clone();
                    y[i] = v;
                    f(&y)
                },
                c - radius,
                c + radius,
                120,
            );
            x[i] = t;
        }
    }
    x
}
