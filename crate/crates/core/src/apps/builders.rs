use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{check_positive, Error, Result};
use crate::fractional::{
    BlockQuadratic, L1Box, MaxQuadratic, Problem, ScaledTopK, Simplex, Stiefel, TopKDenominator,
    Zero,
};
use crate::linalg::{DenseOperator, IdentityOperator, Matrix};
use crate::smoothing::{GeneralizedMax, L1Norm, ShiftedL1};

use super::dataset::Dataset;

/// FDA uses `β⁰ = 100ρ`.
pub const FDA_BETA0_PER_RHO: f64 = 100.0;
pub const SRM_BETA0: f64 = 0.01;
pub const RECOVERY_BETA0: f64 = 0.01;
pub const SRM_DEFAULT_P: usize = 100;

/// Per-class means and covariances (normalized by the class count).
/// Class 1 holds the `+1` labels.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassStats {
    pub mu1: Vec<f64>,
    pub mu2: Vec<f64>,
    pub s1: Matrix,
    pub s2: Matrix,
}

pub fn class_stats(ds: &Dataset) -> Result<ClassStats> {
    let n = ds.cols();
    let stats = |label: f64| -> Result<(Vec<f64>, Matrix)> {
        let rows: Vec<&[f64]> = (0..ds.rows())
            .filter(|&i| ds.labels[i] == label)
            .map(|i| ds.q.row(i))
            .collect();
        if rows.is_empty() {
            return Err(Error::Data(format!("class {label} has no samples")));
        }
        let cnt = rows.len() as f64;
        let mut mu = vec![0.0; n];
        for r in &rows {
            for (m, v) in mu.iter_mut().zip(r.iter()) {
                *m += v;
            }
        }
        mu.iter_mut().for_each(|m| *m /= cnt);
        let mut s = Matrix::zeros(n, n);
        for r in &rows {
            let c: Vec<f64> = r.iter().zip(&mu).map(|(v, m)| v - m).collect();
            for i in 0..n {
                for j in 0..n {
                    s.set(i, j, s.get(i, j) + c[i] * c[j] / cnt);
                }
            }
        }
        Ok((mu, s))
    };
    let (mu1, s1) = stats(1.0)?;
    let (mu2, s2) = stats(-1.0)?;
    Ok(ClassStats { mu1, mu2, s1, s2 })
}

fn frobenius_normalized(m: Matrix) -> Matrix {
    let f = m.frobenius_norm();
    if f > 0.0 {
        m.scale(1.0 / f)
    } else {
        m
    }
}

/// Sparse FDA: `min_{XᵀX=I} [tr(XᵀCX) + ρ(‖X‖₁ − ‖X‖_[k])] / tr(XᵀDX)` with
/// `X` stored column-major as a vector of length `n·r`.
#[derive(Debug, Clone, PartialEq)]
pub struct FdaInstance {
    pub c: Matrix,
    pub d: Matrix,
    pub r: usize,
    pub k: usize,
    pub rho: f64,
}

impl FdaInstance {
    pub fn n(&self) -> usize {
        self.c.rows()
    }

    pub fn beta0(&self) -> f64 {
        FDA_BETA0_PER_RHO * self.rho
    }

    pub fn problem(&self) -> Result<Problem> {
        let (n, r) = (self.n(), self.r);
        if r == 0 || r > n {
            return Err(Error::Data(format!("FDA needs 1 <= r <= n, got n = {n}, r = {r}")));
        }
        if !(self.rho >= 0.0) || !self.rho.is_finite() {
            return Err(Error::InvalidParameter {
                name: "rho",
                value: self.rho,
                reason: "must be finite and nonnegative",
            });
        }
        Problem::new(
            Box::new(BlockQuadratic::new(self.c.clone(), r)?),
            Box::new(Stiefel::new(n, r)?),
            Box::new(ScaledTopK::new(self.rho, self.k, n * r)?),
            Box::new(L1Norm {
                scale: self.rho,
                dim: n * r,
            }),
            Box::new(IdentityOperator::new(n * r)),
            Box::new(BlockQuadratic::new(self.d.clone(), r)?),
        )
    }
}

pub fn build_fda(ds: &Dataset, r: usize, rho: f64) -> Result<(FdaInstance, Problem)> {
    let n = ds.cols();
    if r == 0 || r > n {
        return Err(Error::Data(format!("FDA needs 1 <= r <= n, got n = {n}, r = {r}")));
    }
    let st = class_stats(ds)?;
    let mut c = st.s1.clone();
    for i in 0..n {
        for j in 0..n {
            c.set(i, j, c.get(i, j) + st.s2.get(i, j));
        }
    }
    let diff: Vec<f64> = st.mu1.iter().zip(&st.mu2).map(|(a, b)| a - b).collect();
    let mut d = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            d.set(i, j, diff[i] * diff[j]);
        }
    }
    if d.frobenius_norm() == 0.0 {
        return Err(Error::Data("FDA class means coincide, so d vanishes".into()));
    }
    let k = ((0.1 * (n * r) as f64).floor() as usize).max(1);
    let inst = FdaInstance {
        c: frobenius_normalized(c),
        d: frobenius_normalized(d),
        r,
        k,
        rho,
    };
    let p = inst.problem()?;
    Ok((inst, p))
}

/// Robust SRM: `min_{x∈Δ} max(0, max(b − Dx)) / maxᵢ xᵀCᵢx`.
#[derive(Debug, Clone, PartialEq)]
pub struct SrmInstance {
    pub d: Matrix,
    pub b: Vec<f64>,
    pub cs: Vec<Matrix>,
}

impl SrmInstance {
    pub fn beta0(&self) -> f64 {
        SRM_BETA0
    }

    pub fn problem(&self) -> Result<Problem> {
        let n = self.d.cols();
        Problem::new(
            Box::new(Zero { dim: n }),
            Box::new(Simplex { dim: n }),
            Box::new(Zero { dim: n }),
            Box::new(GeneralizedMax {
                shift: self.b.clone(),
            }),
            Box::new(DenseOperator::new(self.d.scale(-1.0))),
            Box::new(MaxQuadratic::new(self.cs.clone())?),
        )
    }
}

/// `p_count` matrices `Cᵢ = YYᵀ/n`, `Y = 10·randn(n, n)`.
pub fn build_srm(ds: &Dataset, p_count: usize, seed: u64) -> Result<(SrmInstance, Problem)> {
    if p_count == 0 {
        return Err(Error::Data("SRM needs at least one covariance matrix".into()));
    }
    let n = ds.cols();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cs = (0..p_count)
        .map(|_| {
            let y: Vec<f64> = (0..n * n)
                .map(|_| {
                    let v: f64 = StandardNormal.sample(&mut rng);
                    10.0 * v
                })
                .collect();
            let y = Matrix::new(n, n, y).expect("square");
            y.transpose().gram().scale(1.0 / n as f64)
        })
        .collect();
    let inst = SrmInstance {
        d: ds.q.clone(),
        b: ds.labels.clone(),
        cs,
    };
    let p = inst.problem()?;
    Ok((inst, p))
}

/// Robust sparse recovery:
/// `min_{‖x‖∞≤ρ₀} (ρ₁‖Ax − b‖₁ + ρ₂‖x‖₁) / ‖x‖_[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryInstance {
    pub a: Matrix,
    pub b: Vec<f64>,
    pub rho0: f64,
    pub rho1: f64,
    pub rho2: f64,
    pub k: usize,
}

impl RecoveryInstance {
    pub fn beta0(&self) -> f64 {
        RECOVERY_BETA0
    }

    pub fn problem(&self) -> Result<Problem> {
        check_positive("rho0", self.rho0)?;
        check_positive("rho1", self.rho1)?;
        check_positive("rho2", self.rho2)?;
        let n = self.a.cols();
        if self.k > n {
            return Err(Error::Data(format!("k = {} exceeds n = {n}", self.k)));
        }
        Problem::new(
            Box::new(Zero { dim: n }),
            Box::new(L1Box {
                dim: n,
                rho0: self.rho0,
                rho2: self.rho2,
            }),
            Box::new(Zero { dim: n }),
            Box::new(ShiftedL1 {
                scale: self.rho1,
                shift: self.b.clone(),
            }),
            Box::new(DenseOperator::new(self.a.clone())),
            Box::new(TopKDenominator::new(self.k, n)?),
        )
    }
}

pub fn build_recovery(
    ds: &Dataset,
    rho0: f64,
    rho1: f64,
    rho2: f64,
    k: usize,
) -> Result<(RecoveryInstance, Problem)> {
    let inst = RecoveryInstance {
        a: ds.q.clone(),
        b: ds.labels.clone(),
        rho0,
        rho1,
        rho2,
        k,
    };
    let p = inst.problem()?;
    Ok((inst, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apps::gen_randn;
    use crate::fractional::objective;
    use crate::solver::{run, SolverConfig, Variant};

    fn hand_dataset() -> Dataset {
        let q = Matrix::from_rows(&[
            vec![1.0, 2.0],
            vec![3.0, 2.0],
            vec![0.0, -1.0],
            vec![2.0, 1.0],
        ])
        .unwrap();
        Dataset::new(q, vec![1.0, 1.0, -1.0, -1.0], "hand").unwrap()
    }

    #[test]
    fn stats_hand_dataset() {
        let st = class_stats(&hand_dataset()).unwrap();
        assert_eq!(st.mu1, vec![2.0, 2.0]);
        assert_eq!(st.mu2, vec![1.0, 0.0]);
        assert_eq!(st.s1.data(), &[1.0, 0.0, 0.0, 0.0]);
        assert_eq!(st.s2.data(), &[1.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn stats_degenerate() {
        let q = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let st = class_stats(&Dataset::new(q.clone(), vec![1.0, -1.0], "x").unwrap()).unwrap();
        assert_eq!(st.mu1, vec![1.0, 2.0]);
        assert_eq!(st.mu2, vec![3.0, 4.0]);
        assert_eq!(st.s1.frobenius_norm(), 0.0);
        assert!(class_stats(&Dataset::new(q, vec![1.0, 1.0], "x").unwrap()).is_err());
    }

    #[test]
    fn fda_isotropic() {
        let n = 3;
        let inst = FdaInstance {
            c: Matrix::identity(n),
            d: Matrix::identity(n),
            r: n,
            k: 1,
            rho: 0.0,
        };
        let p = inst.problem().unwrap();
        let f = objective(&p, &Matrix::identity(n).to_col_major()).unwrap();
        assert!((f - 1.0).abs() < 1e-14);
    }

    #[test]
    fn fda_hand_3x1() {
        let inst = FdaInstance {
            c: Matrix::from_diag(&[1.0, 2.0, 3.0]),
            d: Matrix::from_diag(&[4.0, 0.0, 1.0]),
            r: 1,
            k: 1,
            rho: 0.5,
        };
        let p = inst.problem().unwrap();
        let x = [0.6, 0.0, 0.8];
        // num = 0.36 + 1.92 + 0.5 (1.4 - 0.8) = 2.58, den = 1.44 + 0.64 = 2.08
        let f = objective(&p, &x).unwrap();
        assert!((f - 2.58 / 2.08).abs() < 1e-14);
        assert!(build_fda(&hand_dataset(), 3, 1.0).is_err());
    }

    #[test]
    fn fda_from_data_normalized() {
        let ds = gen_randn(40, 6, 1).unwrap();
        let (inst, p) = build_fda(&ds, 2, 10.0).unwrap();
        assert!((inst.c.frobenius_norm() - 1.0).abs() < 1e-12);
        assert!((inst.d.frobenius_norm() - 1.0).abs() < 1e-12);
        assert_eq!(inst.k, 1);
        assert_eq!(p.dim(), 12);
        assert_eq!(inst.beta0(), 1000.0);
    }

    #[test]
    fn srm_identity_covariance() {
        let inst = SrmInstance {
            d: Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 2.0]]).unwrap(),
            b: vec![1.0, -1.0],
            cs: vec![Matrix::identity(2)],
        };
        let p = inst.problem().unwrap();
        let x = [0.25, 0.75];
        // max(0, 1 - 0.25, -1 - 1.5) / (0.0625 + 0.5625)
        let f = objective(&p, &x).unwrap();
        assert!((f - 0.75 / 0.625).abs() < 1e-14);
    }

    #[test]
    fn srm_covariances_psd() {
        let ds = gen_randn(10, 4, 2).unwrap();
        let (inst, _) = build_srm(&ds, 3, 7).unwrap();
        assert_eq!(inst.cs.len(), 3);
        for c in &inst.cs {
            assert!(c.is_symmetric(1e-12));
            assert!(c.get(0, 0) > 0.0);
        }
        assert!(build_srm(&ds, 0, 7).is_err());
    }

    #[test]
    fn recovery_hand_3d() {
        let ds = Dataset::new(Matrix::identity(3), vec![1.0, -1.0, 1.0], "id").unwrap();
        let (_, p) = build_recovery(&ds, f64::INFINITY, 2.0, 3.0, 2).unwrap();
        let x = [1.0, 0.0, -2.0];
        // 2 (0 + 1 + 3) + 3 (3) = 17 over |−2| + |1| = 3
        let f = objective(&p, &x).unwrap();
        assert!((f - 17.0 / 3.0).abs() < 1e-14);
        assert!(objective(&p, &[0.0; 3]).is_err());
        assert!(build_recovery(&ds, 1.0, 1.0, 1.0, 4).is_err());
        assert!(build_recovery(&ds, 1.0, 0.0, 1.0, 1).is_err());
    }

    #[test]
    fn recovery_rejects_quadratic_variant() {
        let ds = gen_randn(5, 4, 0).unwrap();
        let (_, p) = build_recovery(&ds, f64::INFINITY, 10.0, 1.0, 1).unwrap();
        let cfg = SolverConfig {
            variant: Variant::FadmmQ,
            ..SolverConfig::default()
        };
        let err = run(&p, &cfg, &[1.0; 4], &[0.0; 5], &[0.0; 5]).unwrap_err();
        assert!(matches!(err, Error::UnsupportedVariant { .. }));
    }
}
