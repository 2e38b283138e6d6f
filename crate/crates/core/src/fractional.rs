//! Problem model for `min_x F(x) = u(x)/d(x)` with
//! `u(x) = f(x) + δ(x) − g(x) + h(Ax)`, plus the component oracles shared by
//! the applications.

use crate::error::{check_dim, Error, Result};
use crate::linalg::{dist, dot, norm, spectral_norm, LinearOperator, Matrix};
use crate::linalg::{SPECTRAL_MAX_ITER, SPECTRAL_TOL};
use crate::prox::{project_box, project_simplex, prox_l1_box, prox_orthogonality};
use crate::smoothing::{smooth_value, SmoothableConvex};

/// Smallest `d(x)` for which the `√d` subgradient is formed.
pub const SQRT_GUARD: f64 = 1e-18;

/// Differentiable `f` with `L_f`-Lipschitz gradient.
pub trait SmoothPart: Send + Sync {
    fn dim(&self) -> usize;
    fn value(&self, x: &[f64]) -> f64;
    fn gradient(&self, x: &[f64]) -> Vec<f64>;
    /// `L_f`
    fn lipschitz(&self) -> f64;
}

/// Proper closed `δ` with an exact prox. Indicators report `0` on the domain
/// and `+∞` outside it.
pub trait ProxTerm: Send + Sync {
    fn dim(&self) -> usize;
    fn value(&self, x: &[f64]) -> f64;
    /// `Prox(x′; δ, radius)`
    fn prox(&self, xprime: &[f64], radius: f64) -> Vec<f64>;
    /// Projection onto `dom δ` when `δ` is an indicator plus a finite convex
    /// function; `None` when the domain is not projectable.
    fn projection(&self, x: &[f64]) -> Option<Vec<f64>>;
    /// Selected subgradient of the finite part of `δ` (zero for indicators).
    fn finite_subgradient(&self, x: &[f64]) -> Vec<f64>;
}

/// Convex `g`, entering `u` with a minus sign.
pub trait ConvexPart: Send + Sync {
    fn dim(&self) -> usize;
    fn value(&self, x: &[f64]) -> f64;
    fn subgradient(&self, x: &[f64]) -> Vec<f64>;
}

/// Denominator `d ≥ 0`, `C_d`-Lipschitz and `W_d`-weakly convex.
pub trait Denominator: Send + Sync {
    fn dim(&self) -> usize;
    fn value(&self, x: &[f64]) -> f64;
    fn subgradient(&self, x: &[f64]) -> Vec<f64>;
    /// `C_d`
    fn lipschitz(&self) -> f64;
    /// Weak-convexity modulus of `d`.
    fn weak_convexity(&self) -> f64;
    /// Weak-convexity modulus of `√d`; `None` when `√d` is not weakly convex.
    fn sqrt_weak_convexity(&self) -> Option<f64> {
        None
    }
}

/// `∂√d(x) = ∂d(x)/(2√d(x))`.
pub fn sqrt_subgradient(d: &dyn Denominator, x: &[f64]) -> Result<Vec<f64>> {
    if d.sqrt_weak_convexity().is_none() {
        return Err(Error::UnsupportedVariant {
            variant: "sqrt-denominator".into(),
            reason: "the denominator has no weakly convex square root".into(),
        });
    }
    let v = d.value(x);
    if !(v >= SQRT_GUARD) {
        return Err(Error::Denominator { value: v });
    }
    let s = 2.0 * v.sqrt();
    Ok(d.subgradient(x).into_iter().map(|g| g / s).collect())
}

/// The six components `(f, δ, g, h, A, d)`.
pub struct Problem {
    pub f: Box<dyn SmoothPart>,
    pub delta: Box<dyn ProxTerm>,
    pub g: Box<dyn ConvexPart>,
    pub h: Box<dyn SmoothableConvex>,
    pub a: Box<dyn LinearOperator>,
    pub d: Box<dyn Denominator>,
}

impl Problem {
    pub fn new(
        f: Box<dyn SmoothPart>,
        delta: Box<dyn ProxTerm>,
        g: Box<dyn ConvexPart>,
        h: Box<dyn SmoothableConvex>,
        a: Box<dyn LinearOperator>,
        d: Box<dyn Denominator>,
    ) -> Result<Self> {
        let n = a.cols();
        check_dim("problem: f", n, f.dim())?;
        check_dim("problem: delta", n, delta.dim())?;
        check_dim("problem: g", n, g.dim())?;
        check_dim("problem: d", n, d.dim())?;
        check_dim("problem: h", a.rows(), h.dim())?;
        Ok(Problem { f, delta, g, h, a, d })
    }

    /// `n`
    pub fn dim(&self) -> usize {
        self.a.cols()
    }

    /// `m`
    pub fn dual_dim(&self) -> usize {
        self.a.rows()
    }

    pub fn has_sqrt_oracle(&self) -> bool {
        self.d.sqrt_weak_convexity().is_some()
    }

    fn checked_denominator(&self, x: &[f64]) -> Result<f64> {
        let v = self.d.value(x);
        if v > 0.0 {
            Ok(v)
        } else {
            Err(Error::Denominator { value: v })
        }
    }

    /// `u(x) = f(x) + δ(x) − g(x) + h(Ax)`.
    pub fn numerator(&self, x: &[f64]) -> f64 {
        let ax = self.a.apply(x);
        self.numerator_at(x, &ax)
    }

    fn numerator_at(&self, x: &[f64], y: &[f64]) -> f64 {
        let dl = self.delta.value(x);
        if dl.is_infinite() {
            return f64::INFINITY;
        }
        self.f.value(x) + dl - self.g.value(x) + self.h.value(y)
    }

    /// Selected element of `∂u(x) = ∇f + ∂δ_finite − ∂g + Aᵀ∂h(Ax)`.
    pub fn numerator_subgradient(&self, x: &[f64]) -> Vec<f64> {
        let ax = self.a.apply(x);
        let mut s = self.a.apply_adjoint(&self.h.subgradient(&ax));
        for (((si, fi), di), gi) in s
            .iter_mut()
            .zip(self.f.gradient(x))
            .zip(self.delta.finite_subgradient(x))
            .zip(self.g.subgradient(x))
        {
            *si += fi + di - gi;
        }
        s
    }
}

/// `F(x) = u(x)/d(x)`; `+∞` when `x ∉ dom δ`.
pub fn objective(p: &Problem, x: &[f64]) -> Result<f64> {
    check_dim("objective", p.dim(), x.len())?;
    let d = p.checked_denominator(x)?;
    Ok(p.numerator(x) / d)
}

/// `φ(x, y) = (f(x) + δ(x) − g(x) + h(y))/d(x)`.
pub fn varphi(p: &Problem, x: &[f64], y: &[f64]) -> Result<f64> {
    check_dim("varphi: x", p.dim(), x.len())?;
    check_dim("varphi: y", p.dual_dim(), y.len())?;
    let d = p.checked_denominator(x)?;
    Ok(p.numerator_at(x, y) / d)
}

/// `S(x, y; z; β) = f(x) + ⟨Ax − y, z⟩ + (β/2)‖Ax − y‖²`.
pub fn s_value(p: &Problem, x: &[f64], y: &[f64], z: &[f64], beta: f64) -> f64 {
    let r: Vec<f64> = p.a.apply(x).iter().zip(y).map(|(a, b)| a - b).collect();
    let rn = norm(&r);
    p.f.value(x) + dot(&r, z) + 0.5 * beta * rn * rn
}

/// `U(x, y; z; β, μ) = S(x, y; z; β) + δ(x) − g(x) + h_μ(y)`.
pub fn u_value(
    p: &Problem,
    x: &[f64],
    y: &[f64],
    z: &[f64],
    beta: f64,
    mu: f64,
) -> Result<f64> {
    check_dim("U: x", p.dim(), x.len())?;
    check_dim("U: y", p.dual_dim(), y.len())?;
    check_dim("U: z", p.dual_dim(), z.len())?;
    let hm = smooth_value(p.h.as_ref(), mu, y)?;
    let dl = p.delta.value(x);
    if dl.is_infinite() {
        return Ok(f64::INFINITY);
    }
    Ok(s_value(p, x, y, z, beta) + dl - p.g.value(x) + hm)
}

/// `L = U/d(x)`.
pub fn l_value(
    p: &Problem,
    x: &[f64],
    y: &[f64],
    z: &[f64],
    beta: f64,
    mu: f64,
) -> Result<f64> {
    let d = p.checked_denominator(x)?;
    Ok(u_value(p, x, y, z, beta, mu)? / d)
}

/// `K(α, x, y; z; β, μ) = −2α√d(x) + α²U`.
#[allow(clippy::too_many_arguments)]
pub fn k_value(
    p: &Problem,
    alpha: f64,
    x: &[f64],
    y: &[f64],
    z: &[f64],
    beta: f64,
    mu: f64,
) -> Result<f64> {
    let d = p.d.value(x);
    if !(d >= 0.0) {
        return Err(Error::Denominator { value: d });
    }
    if alpha == 0.0 {
        return Ok(0.0);
    }
    let u = u_value(p, x, y, z, beta, mu)?;
    Ok(-2.0 * alpha * d.sqrt() + alpha * alpha * u)
}

/// `‖x‖_[k]`: sum of the `k` largest magnitudes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TopKNorm {
    pub k: usize,
}

impl TopKNorm {
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter {
                name: "k",
                value: 0.0,
                reason: "must be at least 1",
            });
        }
        Ok(TopKNorm { k })
    }

    fn check(&self, n: usize) -> Result<()> {
        if self.k == 0 || self.k > n {
            return Err(Error::InvalidParameter {
                name: "k",
                value: self.k as f64,
                reason: "must lie in 1..=dim(x)",
            });
        }
        Ok(())
    }

    /// Indices of the top-`k` entries, ordered by descending `|xᵢ|` then
    /// ascending index.
    pub fn support(&self, x: &[f64]) -> Result<Vec<usize>> {
        self.check(x.len())?;
        let mut idx: Vec<usize> = (0..x.len()).collect();
        idx.sort_by(|&i, &j| x[j].abs().total_cmp(&x[i].abs()).then(i.cmp(&j)));
        idx.truncate(self.k);
        Ok(idx)
    }

    pub fn value(&self, x: &[f64]) -> Result<f64> {
        Ok(self.support(x)?.into_iter().map(|i| x[i].abs()).sum())
    }

    pub fn subgradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut s = vec![0.0; x.len()];
        for i in self.support(x)? {
            s[i] = sign0(x[i]);
        }
        Ok(s)
    }
}

#[inline]
fn sign0(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

// ---------------------------------------------------------------------------
// components
// ---------------------------------------------------------------------------

/// `f = 0` (also usable as `g = 0`).
#[derive(Debug, Clone, Copy)]
pub struct Zero {
    pub dim: usize,
}

impl SmoothPart for Zero {
    fn dim(&self) -> usize {
        self.dim
    }
    fn value(&self, _x: &[f64]) -> f64 {
        0.0
    }
    fn gradient(&self, _x: &[f64]) -> Vec<f64> {
        vec![0.0; self.dim]
    }
    fn lipschitz(&self) -> f64 {
        0.0
    }
}

impl ConvexPart for Zero {
    fn dim(&self) -> usize {
        self.dim
    }
    fn value(&self, _x: &[f64]) -> f64 {
        0.0
    }
    fn subgradient(&self, _x: &[f64]) -> Vec<f64> {
        vec![0.0; self.dim]
    }
}

/// `q(x) = Σⱼ xⱼᵀ M xⱼ` over the `blocks` columns of `mat(x)` (`n × blocks`,
/// column-major), i.e. `tr(XᵀMX)` for symmetric PSD `M`.
#[derive(Debug, Clone)]
pub struct BlockQuadratic {
    m: Matrix,
    blocks: usize,
    norm2: f64,
}

impl BlockQuadratic {
    pub fn new(m: Matrix, blocks: usize) -> Result<Self> {
        check_dim("block quadratic: square", m.rows(), m.cols())?;
        if blocks == 0 {
            return Err(Error::InvalidParameter {
                name: "blocks",
                value: 0.0,
                reason: "must be at least 1",
            });
        }
        let norm2 = spectral_norm(&m, SPECTRAL_TOL, SPECTRAL_MAX_ITER);
        Ok(BlockQuadratic { m, blocks, norm2 })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    /// `mat(Mx)` vectorized, i.e. `vec(MX)`.
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.m.rows();
        let mut out = Vec::with_capacity(x.len());
        for j in 0..self.blocks {
            out.extend(self.m.matvec_unchecked(&x[j * n..(j + 1) * n]));
        }
        out
    }

    fn quad(&self, x: &[f64]) -> f64 {
        dot(x, &self.apply(x))
    }
}

impl SmoothPart for BlockQuadratic {
    fn dim(&self) -> usize {
        self.m.rows() * self.blocks
    }
    fn value(&self, x: &[f64]) -> f64 {
        self.quad(x)
    }
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        self.apply(x).into_iter().map(|v| 2.0 * v).collect()
    }
    fn lipschitz(&self) -> f64 {
        2.0 * self.norm2
    }
}

impl Denominator for BlockQuadratic {
    fn dim(&self) -> usize {
        self.m.rows() * self.blocks
    }
    fn value(&self, x: &[f64]) -> f64 {
        self.quad(x)
    }
    fn subgradient(&self, x: &[f64]) -> Vec<f64> {
        self.apply(x).into_iter().map(|v| 2.0 * v).collect()
    }
    /// Gradient bound on `{‖X‖_F² = blocks}`.
    fn lipschitz(&self) -> f64 {
        2.0 * self.norm2 * (self.blocks as f64).sqrt()
    }
    fn weak_convexity(&self) -> f64 {
        0.0
    }
    fn sqrt_weak_convexity(&self) -> Option<f64> {
        Some(0.0)
    }
}

/// `d(x) = maxᵢ xᵀCᵢx` over symmetric PSD `Cᵢ`; ties select the lowest index.
#[derive(Debug, Clone)]
pub struct MaxQuadratic {
    cs: Vec<Matrix>,
    max_norm2: f64,
}

impl MaxQuadratic {
    pub fn new(cs: Vec<Matrix>) -> Result<Self> {
        let first = cs
            .first()
            .ok_or_else(|| Error::Data("max-quadratic needs at least one matrix".into()))?;
        let n = first.rows();
        for c in &cs {
            check_dim("max quadratic: rows", n, c.rows())?;
            check_dim("max quadratic: cols", n, c.cols())?;
        }
        let max_norm2 = cs
            .iter()
            .map(|c| spectral_norm(c, SPECTRAL_TOL, SPECTRAL_MAX_ITER))
            .fold(0.0, f64::max);
        Ok(MaxQuadratic { cs, max_norm2 })
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.cs
    }

    /// `(j, xᵀC_jx)` for the lowest-index maximizer.
    pub fn argmax(&self, x: &[f64]) -> (usize, f64) {
        let mut best = (0, f64::NEG_INFINITY);
        for (i, c) in self.cs.iter().enumerate() {
            let v = dot(x, &c.matvec_unchecked(x));
            if v > best.1 {
                best = (i, v);
            }
        }
        best
    }
}

impl Denominator for MaxQuadratic {
    fn dim(&self) -> usize {
        self.cs[0].rows()
    }
    fn value(&self, x: &[f64]) -> f64 {
        self.argmax(x).1
    }
    fn subgradient(&self, x: &[f64]) -> Vec<f64> {
        let (j, _) = self.argmax(x);
        self.cs[j]
            .matvec_unchecked(x)
            .into_iter()
            .map(|v| 2.0 * v)
            .collect()
    }
    /// Gradient bound on the unit ball.
    fn lipschitz(&self) -> f64 {
        2.0 * self.max_norm2
    }
    fn weak_convexity(&self) -> f64 {
        0.0
    }
    fn sqrt_weak_convexity(&self) -> Option<f64> {
        Some(0.0)
    }
}

/// `d(x) = ‖x‖_[k]`.
#[derive(Debug, Clone, Copy)]
pub struct TopKDenominator {
    pub norm: TopKNorm,
    pub dim: usize,
}

impl TopKDenominator {
    pub fn new(k: usize, dim: usize) -> Result<Self> {
        let norm = TopKNorm::new(k)?;
        norm.check(dim)?;
        Ok(TopKDenominator { norm, dim })
    }
}

impl Denominator for TopKDenominator {
    fn dim(&self) -> usize {
        self.dim
    }
    fn value(&self, x: &[f64]) -> f64 {
        self.norm.value(x).expect("k validated at construction")
    }
    fn subgradient(&self, x: &[f64]) -> Vec<f64> {
        self.norm.subgradient(x).expect("k validated at construction")
    }
    fn lipschitz(&self) -> f64 {
        (self.norm.k as f64).sqrt()
    }
    fn weak_convexity(&self) -> f64 {
        0.0
    }
}

/// `g(x) = scale·‖x‖_[k]`.
#[derive(Debug, Clone, Copy)]
pub struct ScaledTopK {
    pub scale: f64,
    pub norm: TopKNorm,
    pub dim: usize,
}

impl ScaledTopK {
    pub fn new(scale: f64, k: usize, dim: usize) -> Result<Self> {
        let norm = TopKNorm::new(k)?;
        norm.check(dim)?;
        Ok(ScaledTopK { scale, norm, dim })
    }
}

impl ConvexPart for ScaledTopK {
    fn dim(&self) -> usize {
        self.dim
    }
    fn value(&self, x: &[f64]) -> f64 {
        self.scale * self.norm.value(x).expect("k validated at construction")
    }
    fn subgradient(&self, x: &[f64]) -> Vec<f64> {
        self.norm
            .subgradient(x)
            .expect("k validated at construction")
            .into_iter()
            .map(|s| self.scale * s)
            .collect()
    }
}

/// `δ = 0`.
#[derive(Debug, Clone, Copy)]
pub struct Unconstrained {
    pub dim: usize,
}

impl ProxTerm for Unconstrained {
    fn dim(&self) -> usize {
        self.dim
    }
    fn value(&self, _x: &[f64]) -> f64 {
        0.0
    }
    fn prox(&self, xprime: &[f64], _radius: f64) -> Vec<f64> {
        xprime.to_vec()
    }
    fn projection(&self, x: &[f64]) -> Option<Vec<f64>> {
        Some(x.to_vec())
    }
    fn finite_subgradient(&self, _x: &[f64]) -> Vec<f64> {
        vec![0.0; self.dim]
    }
}

/// Indicator of `{X ∈ ℝ^{n×r} : XᵀX = I_r}` on `vec(X)`.
#[derive(Debug, Clone, Copy)]
pub struct Stiefel {
    pub n: usize,
    pub r: usize,
    /// Feasibility tolerance on `‖XᵀX − I‖_F`.
    pub tol: f64,
}

impl Stiefel {
    pub fn new(n: usize, r: usize) -> Result<Self> {
        if r == 0 || n < r {
            return Err(Error::Data(format!(
                "Stiefel set needs 1 <= r <= n, got n = {n}, r = {r}"
            )));
        }
        Ok(Stiefel { n, r, tol: 1e-8 })
    }

    pub fn orthogonality_error(&self, x: &[f64]) -> f64 {
        let n = self.n;
        let mut s = 0.0;
        for i in 0..self.r {
            for j in 0..self.r {
                let v = dot(&x[i * n..(i + 1) * n], &x[j * n..(j + 1) * n]);
                let e = if i == j { v - 1.0 } else { v };
                s += e * e;
            }
        }
        s.sqrt()
    }
}

impl ProxTerm for Stiefel {
    fn dim(&self) -> usize {
        self.n * self.r
    }
    fn value(&self, x: &[f64]) -> f64 {
        if self.orthogonality_error(x) <= self.tol {
            0.0
        } else {
            f64::INFINITY
        }
    }
    fn prox(&self, xprime: &[f64], _radius: f64) -> Vec<f64> {
        prox_orthogonality(xprime, self.n, self.r).expect("shape validated at construction")
    }
    fn projection(&self, x: &[f64]) -> Option<Vec<f64>> {
        Some(self.prox(x, 1.0))
    }
    fn finite_subgradient(&self, _x: &[f64]) -> Vec<f64> {
        vec![0.0; self.dim()]
    }
}

/// Indicator of the probability simplex.
#[derive(Debug, Clone, Copy)]
pub struct Simplex {
    pub dim: usize,
}

impl ProxTerm for Simplex {
    fn dim(&self) -> usize {
        self.dim
    }
    fn value(&self, x: &[f64]) -> f64 {
        let sum: f64 = x.iter().sum();
        let tol = 1e-9;
        if x.iter().all(|&v| v >= -tol) && (sum - 1.0).abs() <= tol {
            0.0
        } else {
            f64::INFINITY
        }
    }
    fn prox(&self, xprime: &[f64], _radius: f64) -> Vec<f64> {
        project_simplex(xprime)
    }
    fn projection(&self, x: &[f64]) -> Option<Vec<f64>> {
        Some(project_simplex(x))
    }
    fn finite_subgradient(&self, _x: &[f64]) -> Vec<f64> {
        vec![0.0; self.dim]
    }
}

/// `δ(x) = ι{‖x‖∞ ≤ ρ₀}(x) + ρ₂‖x‖₁`; `rho0` may be `+∞`.
#[derive(Debug, Clone, Copy)]
pub struct L1Box {
    pub dim: usize,
    pub rho0: f64,
    pub rho2: f64,
}

impl ProxTerm for L1Box {
    fn dim(&self) -> usize {
        self.dim
    }
    fn value(&self, x: &[f64]) -> f64 {
        let lim = self.rho0 * (1.0 + 1e-12);
        if x.iter().all(|v| v.abs() <= lim) {
            self.rho2 * x.iter().map(|v| v.abs()).sum::<f64>()
        } else {
            f64::INFINITY
        }
    }
    fn prox(&self, xprime: &[f64], radius: f64) -> Vec<f64> {
        prox_l1_box(xprime, radius, self.rho2, self.rho0).expect("parameters validated")
    }
    fn projection(&self, x: &[f64]) -> Option<Vec<f64>> {
        Some(project_box(x, self.rho0))
    }
    fn finite_subgradient(&self, x: &[f64]) -> Vec<f64> {
        x.iter().map(|&v| self.rho2 * sign0(v)).collect()
    }
}

/// `‖Ax − y‖`
pub fn residual_norm(p: &Problem, x: &[f64], y: &[f64]) -> f64 {
    dist(&p.a.apply(x), y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::IdentityOperator;
    use crate::smoothing::L1Norm;

    fn toy_l1_over_sq(n: usize) -> Problem {
        Problem::new(
            Box::new(Zero { dim: n }),
            Box::new(Unconstrained { dim: n }),
            Box::new(Zero { dim: n }),
            Box::new(L1Norm { scale: 1.0, dim: n }),
            Box::new(IdentityOperator::new(n)),
            Box::new(BlockQuadratic::new(Matrix::identity(n), 1).unwrap()),
        )
        .unwrap()
    }

    #[test]
    fn objective_hand_value() {
        let p = toy_l1_over_sq(2);
        assert_eq!(objective(&p, &[1.0, 0.0]).unwrap(), 1.0);
        assert_eq!(varphi(&p, &[1.0, 0.0], &[2.0, 0.0]).unwrap(), 2.0);
    }

    #[test]
    fn zero_denominator_is_error() {
        let p = toy_l1_over_sq(2);
        assert_eq!(
            objective(&p, &[0.0, 0.0]),
            Err(Error::Denominator { value: 0.0 })
        );
    }

    #[test]
    fn k_value_cases() {
        let p = toy_l1_over_sq(1);
        let x = [2.0];
        assert_eq!(k_value(&p, 0.0, &x, &[5.0], &[1.0], 1.0, 1.0).unwrap(), 0.0);
        // U = f + ⟨2 − 1, 0.5⟩ + ½·1 + Huber₁(1) = 0.5 + 0.5 + 0.5
        let u = u_value(&p, &x, &[1.0], &[0.5], 1.0, 1.0).unwrap();
        assert!((u - 1.5).abs() < 1e-15);
        let k = k_value(&p, 0.5, &x, &[1.0], &[0.5], 1.0, 1.0).unwrap();
        assert!((k - (-2.0 * 0.5 * 2.0 + 0.25 * 1.5)).abs() < 1e-15);
    }

    #[test]
    fn topk_cases() {
        let t = TopKNorm::new(2).unwrap();
        assert_eq!(t.value(&[3.0, -1.0, 2.0]).unwrap(), 5.0);
        assert_eq!(t.subgradient(&[3.0, -1.0, 2.0]).unwrap(), vec![1.0, 0.0, 1.0]);
        let t1 = TopKNorm::new(1).unwrap();
        assert_eq!(t1.subgradient(&[1.0, 1.0, 0.0]).unwrap(), vec![1.0, 0.0, 0.0]);
        assert_eq!(t.subgradient(&[0.0, 0.0, 0.0]).unwrap(), vec![0.0; 3]);
        let full = TopKNorm::new(3).unwrap();
        assert_eq!(full.value(&[3.0, -1.0, 2.0]).unwrap(), 6.0);
        assert!(TopKNorm::new(4).unwrap().value(&[1.0, 2.0]).is_err());
        assert!(TopKNorm::new(0).is_err());
    }

    #[test]
    fn sqrt_subgradient_isotropic() {
        let d = BlockQuadratic::new(Matrix::identity(2), 1).unwrap();
        let s = sqrt_subgradient(&d, &[3.0, 4.0]).unwrap();
        assert!((s[0] - 0.6).abs() < 1e-15 && (s[1] - 0.8).abs() < 1e-15);
        assert!(matches!(
            sqrt_subgradient(&d, &[0.0, 0.0]),
            Err(Error::Denominator { .. })
        ));
        let topk = TopKDenominator::new(1, 2).unwrap();
        assert!(matches!(
            sqrt_subgradient(&topk, &[1.0, 0.0]),
            Err(Error::UnsupportedVariant { .. })
        ));
    }

    #[test]
    fn problem_dimension_checks() {
        let r = Problem::new(
            Box::new(Zero { dim: 3 }),
            Box::new(Unconstrained { dim: 2 }),
            Box::new(Zero { dim: 2 }),
            Box::new(L1Norm { scale: 1.0, dim: 2 }),
            Box::new(IdentityOperator::new(2)),
            Box::new(BlockQuadratic::new(Matrix::identity(2), 1).unwrap()),
        );
        assert!(matches!(r, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn max_quadratic_tie_selects_first() {
        let d = MaxQuadratic::new(vec![Matrix::identity(2), Matrix::identity(2)]).unwrap();
        assert_eq!(d.argmax(&[1.0, 1.0]).0, 0);
        assert_eq!(d.value(&[1.0, 1.0]), 2.0);
    }

    #[test]
    fn infeasible_is_infinite() {
        let n = 2;
        let p = Problem::new(
            Box::new(Zero { dim: n }),
            Box::new(Simplex { dim: n }),
            Box::new(Zero { dim: n }),
            Box::new(L1Norm { scale: 1.0, dim: n }),
            Box::new(IdentityOperator::new(n)),
            Box::new(BlockQuadratic::new(Matrix::identity(n), 1).unwrap()),
        )
        .unwrap();
        assert_eq!(objective(&p, &[1.0, 1.0]).unwrap(), f64::INFINITY);
        assert_eq!(objective(&p, &[0.5, 0.5]).unwrap(), 1.0 / 0.5);
    }
}
