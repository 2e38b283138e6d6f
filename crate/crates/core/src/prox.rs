//! Closed-form proximal operators, `Prox(x′; p, μ) = argmin_x p(x) + ‖x − x′‖²/(2μ)`.

use crate::error::{check_dim, check_positive, Error, Result};
use crate::linalg::{thin_svd, Matrix};

/// Componentwise `sign(bᵢ)·max(|bᵢ| − τ, 0)`.
pub fn soft_threshold(b: &[f64], tau: f64) -> Result<Vec<f64>> {
    if !(tau >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "tau",
            value: tau,
            reason: "must be nonnegative",
        });
    }
    Ok(b.iter().map(|&v| soft_threshold_scalar(v, tau)).collect())
}

#[inline]
pub(crate) fn soft_threshold_scalar(v: f64, tau: f64) -> f64 {
    v.signum() * (v.abs() - tau).max(0.0)
}

/// Prox of `ρ₂‖x‖₁ + ι{‖x‖∞ ≤ ρ₀}` with radius `mu`. `rho0` may be `+∞`.
///
/// Each coordinate is solved by enumerating the five candidate critical points
/// `{0, −ρ₀, ρ₀, P[0,ρ₀](x′ − μρ₂), P[−ρ₀,0](x′ + μρ₂)}` and keeping the best;
/// exact ties go to the candidate of smaller magnitude.
pub fn prox_l1_box(xprime: &[f64], mu: f64, rho2: f64, rho0: f64) -> Result<Vec<f64>> {
    check_positive("mu", mu)?;
    check_positive("rho0", rho0)?;
    if !(rho2 >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "rho2",
            value: rho2,
            reason: "must be nonnegative",
        });
    }
    Ok(xprime
        .iter()
        .map(|&xp| prox_l1_box_scalar(xp, mu, rho2, rho0))
        .collect())
}

pub(crate) fn prox_l1_box_scalar(xp: f64, mu: f64, rho2: f64, rho0: f64) -> f64 {
    let q = |x: f64| (x - xp) * (x - xp) / (2.0 * mu) + rho2 * x.abs();
    let mut candidates = [
        0.0,
        (xp - mu * rho2).clamp(0.0, rho0),
        (xp + mu * rho2).clamp(-rho0, 0.0),
        -rho0,
        rho0,
    ];
    let n = if rho0.is_finite() { 5 } else { 3 };
    let cands = &mut candidates[..n];
    let mut best = cands[0];
    let mut best_q = q(best);
    for &c in cands.iter().skip(1) {
        let qc = q(c);
        if qc < best_q || (qc == best_q && c.abs() < best.abs()) {
            best = c;
            best_q = qc;
        }
    }
    best
}

/// Euclidean projection onto the probability simplex `{p ≥ 0, Σp = 1}` by
/// sorting and thresholding, `O(n log n)`.
pub fn project_simplex(xprime: &[f64]) -> Vec<f64> {
    if xprime.is_empty() {
        return Vec::new();
    }
    // points already on the simplex up to rounding are returned unchanged
    let sum: f64 = xprime.iter().sum();
    let slack = 4.0 * f64::EPSILON * xprime.len() as f64;
    if xprime.iter().all(|&v| v >= 0.0) && (sum - 1.0).abs() <= slack {
        return xprime.to_vec();
    }
    let theta = simplex_threshold(xprime);
    xprime.iter().map(|v| (v - theta).max(0.0)).collect()
}

/// The shift `θ` with `Σ max(xᵢ − θ, 0) = 1`.
fn simplex_threshold(x: &[f64]) -> f64 {
    let mut u = x.to_vec();
    // stable descending sort
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = (u[0] - 1.0) / 1.0;
    for (j, &uj) in u.iter().enumerate() {
        cumsum += uj;
        let t = (cumsum - 1.0) / (j + 1) as f64;
        if uj - t > 0.0 {
            theta = t;
        } else {
            break;
        }
    }
    theta
}

/// Result of [`prox_generalized_max_detailed`].
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedMaxProx {
    pub x: Vec<f64>,
    /// Dual simplex point `z̄` when the max-branch solution was selected.
    pub dual: Option<Vec<f64>>,
}

/// Prox of `p(x) = max(0, max(x + b))` with radius `mu`.
pub fn prox_generalized_max(xprime: &[f64], mu: f64, b: &[f64]) -> Result<Vec<f64>> {
    prox_generalized_max_detailed(xprime, mu, b).map(|r| r.x)
}

/// Same as [`prox_generalized_max`], also returning the dual simplex point.
///
/// With `v′ = x′ + b`: if `max(v′) ≤ 0` the prox is the identity. Otherwise the
/// reduced problem `min ‖v − v′‖²/(2μ) + max(v)` is solved through its dual
/// `z̄ = P_Δ(v′/μ)`, `v̄ = v′ − μz̄`, and compared against the `max(v) ≤ 0`
/// branch `min(v′, 0)`; the one with the lower full objective wins.
pub fn prox_generalized_max_detailed(
    xprime: &[f64],
    mu: f64,
    b: &[f64],
) -> Result<GeneralizedMaxProx> {
    check_positive("mu", mu)?;
    check_dim("prox_generalized_max", xprime.len(), b.len())?;
    let vp: Vec<f64> = xprime.iter().zip(b).map(|(x, bi)| x + bi).collect();
    let vmax = vp.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if vmax <= 0.0 {
        return Ok(GeneralizedMaxProx {
            x: xprime.to_vec(),
            dual: None,
        });
    }
    let objective = |v: &[f64]| {
        let quad: f64 = v.iter().zip(&vp).map(|(a, c)| (a - c) * (a - c)).sum();
        let m = v.iter().copied().fold(0.0, f64::max);
        quad / (2.0 * mu) + m
    };
    let scaled_vp: Vec<f64> = vp.iter().map(|v| v / mu).collect();
    let z = project_simplex(&scaled_vp);
    let v_max_branch: Vec<f64> = vp.iter().zip(&z).map(|(v, zi)| v - mu * zi).collect();
    let v_zero_branch: Vec<f64> = vp.iter().map(|v| v.min(0.0)).collect();

    let (v, dual) = if objective(&v_max_branch) <= objective(&v_zero_branch) {
        (v_max_branch, Some(z))
    } else {
        (v_zero_branch, None)
    };
    Ok(GeneralizedMaxProx {
        x: v.iter().zip(b).map(|(vi, bi)| vi - bi).collect(),
        dual,
    })
}

/// Projection of `mat(x′)` (`n × r`, column-major) onto the Stiefel set
/// `{X : XᵀX = I_r}` via the polar factor `X̄ = U Vᵀ`.
pub fn prox_orthogonality(xprime: &[f64], n: usize, r: usize) -> Result<Vec<f64>> {
    if n < r {
        return Err(Error::Data(format!(
            "orthogonality prox needs n >= r, got n = {n}, r = {r}"
        )));
    }
    let m = Matrix::from_col_major(n, r, xprime)?;
    let svd = thin_svd(&m)?;
    let polar = svd.u.matmul(&svd.v.transpose())?;
    Ok(polar.to_col_major())
}

/// Componentwise clamp to `[−ρ₀, ρ₀]`.
pub fn project_box(xprime: &[f64], rho0: f64) -> Vec<f64> {
    xprime.iter().map(|v| v.clamp(-rho0, rho0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn soft_threshold_basics() {
        assert_eq!(soft_threshold(&[2.0, -0.5], 1.0).unwrap(), vec![1.0, 0.0]);
        assert_eq!(soft_threshold(&[2.0, -0.5], 0.0).unwrap(), vec![2.0, -0.5]);
        assert!(soft_threshold(&[1.0], -1.0).is_err());
    }

    #[test]
    fn prox_l1_box_cases() {
        assert_eq!(prox_l1_box(&[3.0], 1.0, 1.0, 2.0).unwrap(), vec![2.0]);
        assert_eq!(prox_l1_box(&[0.0], 1.0, 1.0, 2.0).unwrap(), vec![0.0]);
        assert_eq!(
            prox_l1_box(&[-4.0], 1.0, 1.0, f64::INFINITY).unwrap(),
            vec![-3.0]
        );
        assert!(prox_l1_box(&[1.0], 0.0, 1.0, 1.0).is_err());
        assert!(prox_l1_box(&[1.0], 1.0, -1.0, 1.0).is_err());
        assert!(prox_l1_box(&[1.0], 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn simplex_cases() {
        assert_eq!(project_simplex(&[0.3, 0.7]), vec![0.3, 0.7]);
        assert_eq!(project_simplex(&[2.0, 0.0]), vec![1.0, 0.0]);
        let p = project_simplex(&[0.5, 0.5, 0.5]);
        for v in p {
            assert!((v - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn generalized_max_inactive_branch() {
        // x′ + b = (−1, −2)
        let b = [0.5, 1.0];
        let xp = [-1.5, -3.0];
        let out = prox_generalized_max_detailed(&xp, 3.0, &b).unwrap();
        assert_eq!(out.x, xp.to_vec());
        assert!(out.dual.is_none());
    }

    #[test]
    fn generalized_max_active_branch() {
        // x′ + b = (3, 0), μ = 1 → z̄ = (1, 0), v̄ = (2, 0)
        let b = [1.0, -1.0];
        let xp = [2.0, 1.0];
        let out = prox_generalized_max_detailed(&xp, 1.0, &b).unwrap();
        assert_eq!(out.dual.as_deref(), Some(&[1.0, 0.0][..]));
        assert_eq!(out.x, vec![2.0 - 1.0, 0.0 + 1.0]);
    }

    #[test]
    fn generalized_max_zero_branch_guard() {
        // v′ = 0.1, μ = 1: the reduced solution −0.9 has negative max, real optimum is 0
        let out = prox_generalized_max_detailed(&[0.1], 1.0, &[0.0]).unwrap();
        assert_eq!(out.x, vec![0.0]);
        assert!(out.dual.is_none());
    }

    #[test]
    fn orthogonality_cases() {
        let x = prox_orthogonality(&[2.0, 0.0, 0.0, 3.0], 2, 2).unwrap();
        let expect = [1.0, 0.0, 0.0, 1.0];
        for (a, b) in x.iter().zip(expect) {
            assert!((a - b).abs() < 1e-14);
        }
        assert!(prox_orthogonality(&[1.0; 6], 2, 3).is_err());
    }

    #[test]
    fn box_cases() {
        assert_eq!(project_box(&[3.0, -0.5], 1.0), vec![1.0, -0.5]);
        assert_eq!(project_box(&[0.2, -0.1], 1.0), vec![0.2, -0.1]);
        assert_eq!(project_box(&[-5.0], 2.0), vec![-2.0]);
    }
}
