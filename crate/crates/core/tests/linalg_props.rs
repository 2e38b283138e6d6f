use fadmm::linalg::{
    dot, norm, spectral_norm, thin_svd, DenseOperator, LinearOperator, Matrix, SPECTRAL_MAX_ITER,
    SPECTRAL_TOL,
};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

fn random_matrix(rows: usize, cols: usize, seed: u64) -> Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = (0..rows * cols).map(|_| StandardNormal.sample(&mut rng)).collect();
    Matrix::new(rows, cols, data).unwrap()
}

fn to_na(m: &Matrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.data())
}

fn matrix_strategy() -> impl Strategy<Value = (Matrix, Vec<f64>, Vec<f64>)> {
    (1usize..8, 1usize..8).prop_flat_map(|(r, c)| {
        (
            prop::collection::vec(-5.0..5.0f64, r * c),
            prop::collection::vec(-5.0..5.0f64, c),
            prop::collection::vec(-5.0..5.0f64, r),
        )
            .prop_map(move |(d, x, y)| (Matrix::new(r, c, d).unwrap(), x, y))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn adjoint_probe((m, x, y) in matrix_strategy()) {
        let lhs = dot(&m.matvec(&x).unwrap(), &y);
        let rhs = dot(&x, &m.matvec_t(&y).unwrap());
        let scale = norm(&x) * norm(&y) * m.frobenius_norm();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * scale.max(1e-300));

        let op = DenseOperator::new(m.clone());
        prop_assert_eq!(op.apply(&x), m.matvec(&x).unwrap());
        prop_assert_eq!(op.apply_adjoint(&y), m.matvec_t(&y).unwrap());
    }

    #[test]
    fn spectral_norm_dominates_probes((m, x, _) in matrix_strategy()) {
        let s = spectral_norm(&m, SPECTRAL_TOL, SPECTRAL_MAX_ITER);
        let nx = norm(&x);
        prop_assume!(nx > 1e-8);
        let ratio = norm(&m.matvec(&x).unwrap()) / nx;
        prop_assert!(ratio <= s * (1.0 + 1e-6) + 1e-12);
    }

    #[test]
    fn spectral_norm_matches_nalgebra((m, _, _) in matrix_strategy()) {
        let s = spectral_norm(&m, SPECTRAL_TOL, SPECTRAL_MAX_ITER);
        let sv = to_na(&m).singular_values();
        let top = sv.iter().copied().fold(0.0, f64::max);
        prop_assert!((s - top).abs() <= 1e-6 * top.max(1.0));
    }

    #[test]
    fn svd_singular_values_match_nalgebra(seed in any::<u64>(), r in 1usize..12, c in 1usize..6) {
        let m = random_matrix(r.max(c), c, seed);
        let svd = thin_svd(&m).unwrap();
        let mut ours = svd.s.clone();
        ours.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let mut theirs: Vec<f64> = to_na(&m).singular_values().iter().copied().collect();
        theirs.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for (a, b) in ours.iter().zip(&theirs) {
            prop_assert!((a - b).abs() <= 1e-9 * theirs[0].max(1.0));
        }
    }
}

fn svd_round_trip(rows: usize, cols: usize, seed: u64) {
    let m = random_matrix(rows, cols, seed);
    let svd = thin_svd(&m).unwrap();
    let us = Matrix::from_diag(&svd.s);
    let rec = svd.u.matmul(&us).unwrap().matmul(&svd.v.transpose()).unwrap();
    let err: f64 = rec
        .data()
        .iter()
        .zip(m.data())
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    assert!(err <= 1e-9 * m.frobenius_norm(), "{rows}x{cols}: {err}");
    let utu = svd.u.gram();
    let vtv = svd.v.gram();
    for i in 0..cols {
        for j in 0..cols {
            let e = if i == j { 1.0 } else { 0.0 };
            assert!((utu.get(i, j) - e).abs() < 1e-10);
            assert!((vtv.get(i, j) - e).abs() < 1e-10);
        }
    }
}

#[test]
fn svd_round_trip_sizes() {
    svd_round_trip(10, 4, 1);
    svd_round_trip(50, 8, 2);
    svd_round_trip(2000, 20, 3);
}

#[test]
fn svd_rank_deficient() {
    let mut m = random_matrix(6, 3, 9);
    for i in 0..6 {
        let v = m.get(i, 0) + 2.0 * m.get(i, 1);
        m.set(i, 2, v);
    }
    let svd = thin_svd(&m).unwrap();
    let smallest = svd.s.iter().copied().fold(f64::INFINITY, f64::min);
    assert!(smallest < 1e-10);
    let rec = svd
        .u
        .matmul(&Matrix::from_diag(&svd.s))
        .unwrap()
        .matmul(&svd.v.transpose())
        .unwrap();
    for (a, b) in rec.data().iter().zip(m.data()) {
        assert!((a - b).abs() < 1e-10);
    }
}
