//! Quick randomized check of the closed-form proxes against perturbation probes.

use fadmm::linalg::Matrix;
use fadmm::prox::{
    project_simplex, prox_generalized_max, prox_l1_box, prox_orthogonality, soft_threshold,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct SelftestLine {
    pub name: &'static str,
    pub cases: usize,
    pub worst_gap: f64,
    pub pass: bool,
}

const CASES: usize = 200;
const PROBES: usize = 50;
const TOL: f64 = 1e-9;

fn sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Worst `obj(x̂) − obj(probe)` over random feasible probes around `x̂`.
fn probe_gap(
    rng: &mut ChaCha8Rng,
    xhat: &[f64],
    obj: &dyn Fn(&[f64]) -> f64,
    feasible: &dyn Fn(Vec<f64>) -> Vec<f64>,
) -> f64 {
    let base = obj(xhat);
    let mut worst = f64::NEG_INFINITY;
    for k in 0..PROBES {
        let scale = 10f64.powi(-(k as i32 % 6));
        let p: Vec<f64> = xhat
            .iter()
            .map(|v| v + scale * rng.random_range(-1.0..1.0))
            .collect();
        let p = feasible(p);
        worst = worst.max(base - obj(&p));
    }
    worst
}

fn line(name: &'static str, gaps: impl Iterator<Item = f64>) -> SelftestLine {
    let worst = gaps.fold(f64::NEG_INFINITY, f64::max);
    SelftestLine {
        name,
        cases: CASES,
        worst_gap: worst,
        pass: worst <= TOL,
    }
}

pub fn run_selftest(seed: u64) -> Vec<SelftestLine> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| -> (Vec<f64>, f64) {
        let n = rng.random_range(1..=3);
        let v = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
        (v, rng.random_range(0.01..3.0))
    };
    let id = |p: Vec<f64>| p;
    let mut out = Vec::new();

    let gaps: Vec<f64> = (0..CASES)
        .map(|_| {
            let (b, tau) = draw(&mut rng);
            let obj = |x: &[f64]| tau * x.iter().map(|v| v.abs()).sum::<f64>() + 0.5 * sq(x, &b);
            let x = soft_threshold(&b, tau).expect("tau is positive");
            probe_gap(&mut rng, &x, &obj, &id)
        })
        .collect();
    out.push(line("soft_threshold", gaps.into_iter()));

    let gaps: Vec<f64> = (0..CASES)
        .map(|_| {
            let (xp, mu) = draw(&mut rng);
            let rho2 = rng.random_range(0.0..3.0);
            let rho0 = rng.random_range(0.1..4.0);
            let obj = |x: &[f64]| rho2 * x.iter().map(|v| v.abs()).sum::<f64>() + sq(x, &xp) / (2.0 * mu);
            let x = prox_l1_box(&xp, mu, rho2, rho0).expect("valid parameters");
            let clamp = |p: Vec<f64>| p.into_iter().map(|v| v.clamp(-rho0, rho0)).collect();
            probe_gap(&mut rng, &x, &obj, &clamp)
        })
        .collect();
    out.push(line("prox_l1_box", gaps.into_iter()));

    let gaps: Vec<f64> = (0..CASES)
        .map(|_| {
            let (v, _) = draw(&mut rng);
            let x = project_simplex(&v);
            let obj = |p: &[f64]| sq(p, &v);
            let proj = |p: Vec<f64>| project_simplex(&p);
            probe_gap(&mut rng, &x, &obj, &proj)
        })
        .collect();
    out.push(line("project_simplex", gaps.into_iter()));

    let gaps: Vec<f64> = (0..CASES)
        .map(|_| {
            let (xp, mu) = draw(&mut rng);
            let b: Vec<f64> = xp.iter().map(|_| rng.random_range(-2.0..2.0)).collect();
            let obj = |x: &[f64]| {
                let m = x.iter().zip(&b).map(|(a, c)| a + c).fold(0.0, f64::max);
                sq(x, &xp) / (2.0 * mu) + m
            };
            let x = prox_generalized_max(&xp, mu, &b).expect("valid parameters");
            probe_gap(&mut rng, &x, &obj, &id)
        })
        .collect();
    out.push(line("prox_generalized_max", gaps.into_iter()));

    let (n, r) = (200, 10);
    let data: Vec<f64> = (0..n * r).map(|_| rng.random_range(-1.0..1.0)).collect();
    let x = prox_orthogonality(&data, n, r).expect("n >= r");
    let g = Matrix::from_col_major(n, r, &x).expect("sizes match").gram();
    let mut worst: f64 = 0.0;
    for i in 0..r {
        for j in 0..r {
            let e = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g.get(i, j) - e).abs());
        }
    }
    out.push(SelftestLine {
        name: "prox_orthogonality",
        cases: 1,
        worst_gap: worst,
        pass: worst <= TOL,
    });
    out
}
