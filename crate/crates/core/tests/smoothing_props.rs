mod common {
    pub mod oracles;
}

use common::oracles::coordinate_descent;
use fadmm::linalg::{dist, dot, norm};
use fadmm::smoothing::{
    prox_smoothed, smooth_grad, smooth_value, GeneralizedMax, L1Norm, ShiftedL1, SmoothableConvex,
};
use proptest::prelude::*;

const DIM: usize = 4;

fn family(kind: usize, shift: &[f64]) -> Box<dyn SmoothableConvex> {
    match kind {
        0 => Box::new(L1Norm {
            scale: 1.5,
            dim: DIM,
        }),
        1 => Box::new(ShiftedL1 {
            scale: 2.0,
            shift: shift.to_vec(),
        }),
        _ => Box::new(GeneralizedMax {
            shift: shift.to_vec(),
        }),
    }
}

fn probe() -> impl Strategy<Value = (usize, Vec<f64>, Vec<f64>)> {
    (
        0usize..3,
        prop::collection::vec(-4.0..4.0f64, DIM),
        prop::collection::vec(-2.0..2.0f64, DIM),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn smoothing_gap_bounded((kind, y, shift) in probe(), mu in 1e-3..10.0f64) {
        let h = family(kind, &shift);
        let c = h.lipschitz();
        let gap = h.value(&y) - smooth_value(h.as_ref(), mu, &y).unwrap();
        prop_assert!(gap >= -1e-12);
        prop_assert!(gap <= 0.5 * mu * c * c + 1e-12);
    }

    #[test]
    fn smoothing_monotone_in_mu((kind, y, shift) in probe(), a in 1e-3..10.0f64, b in 1e-3..10.0f64) {
        let (mu2, mu1) = if a <= b { (a, b) } else { (b, a) };
        let h = family(kind, &shift);
        let c = h.lipschitz();
        let diff = smooth_value(h.as_ref(), mu2, &y).unwrap() - smooth_value(h.as_ref(), mu1, &y).unwrap();
        prop_assert!(diff >= -1e-12);
        prop_assert!(diff <= 0.5 * (mu1 - mu2) * c * c + 1e-12);
    }

    #[test]
    fn gradient_ratio_bound((kind, y, shift) in probe(), a in 1e-3..10.0f64, b in 1e-3..10.0f64) {
        let (mu2, mu1) = if a <= b { (a, b) } else { (b, a) };
        let h = family(kind, &shift);
        let g2 = smooth_grad(h.as_ref(), mu2, &y).unwrap();
        let g1 = smooth_grad(h.as_ref(), mu1, &y).unwrap();
        prop_assert!(dist(&g2, &g1) <= (mu1 / mu2 - 1.0) * h.lipschitz() + 1e-12);
        prop_assert!(norm(&g1) <= h.lipschitz() + 1e-12);
    }

    #[test]
    fn gradient_matches_central_difference(
        (kind, y, shift) in probe(),
        offset in prop::collection::vec(-0.1..0.1f64, DIM),
        mu in 0.05..5.0f64,
    ) {
        let h = family(kind, &shift);
        let y: Vec<f64> = y.iter().zip(&offset).map(|(a, b)| a + b).collect();
        let g = smooth_grad(h.as_ref(), mu, &y).unwrap();
        let step = 1e-6;
        for i in 0..DIM {
            let mut p = y.clone();
            let mut m = y.clone();
            p[i] += step;
            m[i] -= step;
            let fd = (smooth_value(h.as_ref(), mu, &p).unwrap()
                - smooth_value(h.as_ref(), mu, &m).unwrap())
                / (2.0 * step);
            prop_assert!((fd - g[i]).abs() <= 1e-5, "coord {}: {} vs {}", i, fd, g[i]);
        }
    }

    #[test]
    fn smoothed_prox_gap((kind, b, shift) in probe(), mu in 1e-3..10.0f64, beta in 1e-2..100.0f64) {
        let h = family(kind, &shift);
        let r = prox_smoothed(h.as_ref(), mu, beta, &b).unwrap();
        prop_assert!(dist(&r.ybar, &r.ycheck) <= mu * h.lipschitz() * (1.0 + 1e-12) + 1e-12);
    }

    #[test]
    fn smoothed_prox_subgradient(
        (kind, b, shift) in probe(),
        mu in 1e-2..5.0f64,
        beta in 1e-1..10.0f64,
        probes in prop::collection::vec(prop::collection::vec(-5.0..5.0f64, DIM), 10),
    ) {
        let h = family(kind, &shift);
        let r = prox_smoothed(h.as_ref(), mu, beta, &b).unwrap();
        let sub: Vec<f64> = b.iter().zip(&r.ybar).map(|(bi, yi)| beta * (bi - yi)).collect();
        let hc = h.value(&r.ycheck);
        for p in &probes {
            let d: Vec<f64> = p.iter().zip(&r.ycheck).map(|(a, c)| a - c).collect();
            prop_assert!(h.value(p) >= hc + dot(&sub, &d) - 1e-9);
        }
    }

    #[test]
    fn extended_moreau_decomposition(b in prop::collection::vec(-5.0..5.0f64, DIM), mu in 1e-2..5.0f64, s in 0.1..3.0f64) {
        let h = L1Norm { scale: s, dim: DIM };
        let p = h.prox(&b, mu);
        for i in 0..DIM {
            let conj = (b[i] / mu).clamp(-s, s);
            prop_assert!((b[i] - (p[i] + mu * conj)).abs() <= 1e-12 * b[i].abs().max(1.0));
        }
    }
}

#[test]
fn smoothed_prox_matches_coordinate_descent() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    for trial in 0..60 {
        let shift: Vec<f64> = (0..DIM).map(|_| rng.random_range(-2.0..2.0)).collect();
        let b: Vec<f64> = (0..DIM).map(|_| rng.random_range(-4.0..4.0)).collect();
        let mu = rng.random_range(0.05..3.0);
        let beta = rng.random_range(0.2..5.0);
        let h = family(trial % 3, &shift);
        let obj = |y: &[f64]| {
            let d = dist(y, &b);
            smooth_value(h.as_ref(), mu, y).unwrap() + 0.5 * beta * d * d
        };
        let cd = coordinate_descent(obj, &b, 10.0, 60);
        let r = prox_smoothed(h.as_ref(), mu, beta, &b).unwrap();
        assert!(obj(&r.ybar) <= obj(&cd) + 1e-9, "trial {trial}");
        assert!(dist(&r.ybar, &cd) <= 1e-6, "trial {trial}: {}", dist(&r.ybar, &cd));
    }
}
