mod common {
    pub mod oracles;
}

use common::oracles::*;
use fadmm::linalg::{dist, Matrix};
use fadmm::prox::{
    project_box, project_simplex, prox_generalized_max, prox_generalized_max_detailed,
    prox_l1_box, prox_orthogonality, soft_threshold,
};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn vec_pair(lo: usize, hi: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (lo..hi).prop_flat_map(|n| {
        (
            prop::collection::vec(-5.0..5.0f64, n),
            prop::collection::vec(-5.0..5.0f64, n),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn soft_threshold_matches_grid(b in prop::collection::vec(-5.0..5.0f64, 1..4), tau in 0.0..3.0f64) {
        let ours = soft_threshold(&b, tau).unwrap();
        let oracle = soft_threshold_oracle(&b, tau);
        let gap = soft_threshold_objective(&ours, &b, tau) - soft_threshold_objective(&oracle, &b, tau);
        prop_assert!(gap <= 1e-6);
    }

    #[test]
    fn l1_box_matches_grid(
        xp in prop::collection::vec(-5.0..5.0f64, 1..4),
        mu in 0.01..3.0f64,
        rho2 in 0.01..3.0f64,
        rho0 in 0.1..4.0f64,
    ) {
        let ours = prox_l1_box(&xp, mu, rho2, rho0).unwrap();
        let oracle = l1_box_oracle(&xp, mu, rho2, rho0);
        let gap = l1_box_objective(&ours, &xp, mu, rho2, rho0)
            - l1_box_objective(&oracle, &xp, mu, rho2, rho0);
        prop_assert!(gap <= 1e-6);
        prop_assert!(ours.iter().all(|v| v.abs() <= rho0));
    }

    #[test]
    fn simplex_matches_enumeration(v in prop::collection::vec(-3.0..3.0f64, 1..4)) {
        let ours = project_simplex(&v);
        let oracle = simplex_oracle(&v);
        let d = |x: &[f64]| x.iter().zip(&v).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
        prop_assert!(d(&ours) - d(&oracle) <= 1e-6);
        prop_assert!((ours.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(ours.iter().all(|&x| x >= 0.0));
    }

    #[test]
    fn generalized_max_matches_level_search(
        (xp, b) in vec_pair(1, 4),
        mu in 0.01..3.0f64,
    ) {
        let ours = prox_generalized_max(&xp, mu, &b).unwrap();
        let oracle = generalized_max_oracle(&xp, mu, &b);
        let gap = generalized_max_objective(&ours, &xp, mu, &b)
            - generalized_max_objective(&oracle, &xp, mu, &b);
        prop_assert!(gap <= 1e-6);
    }

    #[test]
    fn generalized_max_dual_feasible((xp, b) in vec_pair(1, 8), mu in 0.01..3.0f64) {
        let r = prox_generalized_max_detailed(&xp, mu, &b).unwrap();
        if let Some(z) = r.dual {
            prop_assert!(z.iter().all(|&v| v >= 0.0));
            prop_assert!((z.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn convex_proxes_nonexpansive(
        (a, b) in vec_pair(1, 8),
        shift in prop::collection::vec(-2.0..2.0f64, 8),
        mu in 0.01..3.0f64,
        rho in 0.1..3.0f64,
    ) {
        let n = a.len();
        let d0 = dist(&a, &b) * (1.0 + 1e-12) + 1e-12;
        let st = |x: &[f64]| soft_threshold(x, mu).unwrap();
        prop_assert!(dist(&st(&a), &st(&b)) <= d0);
        let lb = |x: &[f64]| prox_l1_box(x, mu, rho, rho).unwrap();
        prop_assert!(dist(&lb(&a), &lb(&b)) <= d0);
        prop_assert!(dist(&project_simplex(&a), &project_simplex(&b)) <= d0);
        let gm = |x: &[f64]| prox_generalized_max(x, mu, &shift[..n]).unwrap();
        prop_assert!(dist(&gm(&a), &gm(&b)) <= d0);
        prop_assert!(dist(&project_box(&a, rho), &project_box(&b, rho)) <= d0);
    }

    #[test]
    fn projections_idempotent(v in prop::collection::vec(-5.0..5.0f64, 1..10), rho in 0.1..3.0f64) {
        let p = project_simplex(&v);
        prop_assert_eq!(project_simplex(&p), p);
        let q = project_box(&v, rho);
        prop_assert_eq!(project_box(&q, rho), q);
    }

    #[test]
    fn orthogonality_matches_polar_factor(data in prop::collection::vec(-3.0..3.0f64, 12)) {
        let (n, r) = (6, 2);
        let ours = prox_orthogonality(&data, n, r).unwrap();
        let m = DMatrix::from_column_slice(n, r, &data);
        let svd = m.svd(true, true);
        prop_assume!(svd.singular_values.iter().all(|&s| s > 1e-6));
        let polar = svd.u.unwrap() * svd.v_t.unwrap();
        for (a, b) in ours.iter().zip(polar.as_slice()) {
            prop_assert!((a - b).abs() < 1e-9);
        }
    }
}

#[test]
fn orthogonality_large_input_is_orthonormal() {
    use rand::SeedableRng;
    use rand_distr::{Distribution, StandardNormal};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let (n, r) = (2000, 20);
    let data: Vec<f64> = (0..n * r).map(|_| StandardNormal.sample(&mut rng)).collect();
    let x = prox_orthogonality(&data, n, r).unwrap();
    let g = Matrix::from_col_major(n, r, &x).unwrap().gram();
    for i in 0..r {
        for j in 0..r {
            let e = if i == j { 1.0 } else { 0.0 };
            assert!((g.get(i, j) - e).abs() < 1e-9);
        }
    }
}
