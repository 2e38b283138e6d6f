//! Dense vectors and matrices, plus the two factorizations the solvers rely on:
//! power-iteration spectral norms and a one-sided Jacobi thin SVD.
//!
//! Vectors are plain `Vec<f64>` / `&[f64]`; the helpers below cover the handful
//! of BLAS-1 style operations the algorithms need.

use crate::error::{check_dim, Error, Result};

/// Tolerance used by [`DenseOperator`] when estimating `‖A‖₂`.
pub const SPECTRAL_TOL: f64 = 1e-8;
/// Iteration cap used by [`DenseOperator`] when estimating `‖A‖₂`.
pub const SPECTRAL_MAX_ITER: usize = 500;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn norm1(a: &[f64]) -> f64 {
    a.iter().map(|v| v.abs()).sum()
}

pub fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scaled(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|v| v * s).collect()
}

/// `y += alpha * x`
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Euclidean distance `‖a − b‖`.
pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub fn all_finite(a: &[f64]) -> bool {
    a.iter().all(|v| v.is_finite())
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Data(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        check_dim("Matrix::new", rows * cols, data.len())?;
        if !all_finite(&data) {
            return Err(Error::Data("matrix entries must be finite".into()));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Matrix::zeros(n, n);
        for (i, d) in diag.iter().enumerate() {
            m.data[i * n + i] = *d;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            check_dim("Matrix::from_rows", c, row.len())?;
            data.extend_from_slice(row);
        }
        Matrix::new(r, c, data)
    }

    /// Builds an `rows × cols` matrix from column-major storage (the `vec(X)`
    /// convention: columns stacked on top of each other).
    pub fn from_col_major(rows: usize, cols: usize, v: &[f64]) -> Result<Self> {
        check_dim("Matrix::from_col_major", rows * cols, v.len())?;
        let mut m = Matrix::zeros(rows, cols);
        for j in 0..cols {
            for i in 0..rows {
                m.data[i * cols + j] = v[j * rows + i];
            }
        }
        Ok(m)
    }

    /// Column-major flattening, inverse of [`Matrix::from_col_major`].
    pub fn to_col_major(&self) -> Vec<f64> {
        let mut v = vec![0.0; self.rows * self.cols];
        for i in 0..self.rows {
            for j in 0..self.cols {
                v[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        v
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    pub fn scale(&self, s: f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: scaled(&self.data, s),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        norm(&self.data)
    }

    /// `M v`
    pub fn matvec(&self, v: &[f64]) -> Result<Vec<f64>> {
        check_dim("matvec", self.cols, v.len())?;
        Ok(self.matvec_unchecked(v))
    }

    /// `Mᵀ v`
    pub fn matvec_t(&self, v: &[f64]) -> Result<Vec<f64>> {
        check_dim("matvec_t", self.rows, v.len())?;
        Ok(self.matvec_t_unchecked(v))
    }

    pub(crate) fn matvec_unchecked(&self, v: &[f64]) -> Vec<f64> {
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub(crate) fn matvec_t_unchecked(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.cols];
        for (i, vi) in v.iter().enumerate() {
            if *vi != 0.0 {
                axpy(*vi, self.row(i), &mut out);
            }
        }
        out
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        check_dim("matmul", self.cols, other.rows)?;
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a != 0.0 {
                    axpy(a, other.row(k), orow);
                }
            }
        }
        Ok(out)
    }

    /// `MᵀM`
    pub fn gram(&self) -> Matrix {
        let mut g = Matrix::zeros(self.cols, self.cols);
        for i in 0..self.rows {
            let r = self.row(i);
            for a in 0..self.cols {
                let ra = r[a];
                if ra == 0.0 {
                    continue;
                }
                for b in a..self.cols {
                    g.data[a * self.cols + b] += ra * r[b];
                }
            }
        }
        for a in 0..self.cols {
            for b in 0..a {
                g.data[a * self.cols + b] = g.data[b * self.cols + a];
            }
        }
        g
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.rows == self.cols
            && (0..self.rows)
                .all(|i| (0..i).all(|j| (self.get(i, j) - self.get(j, i)).abs() <= tol))
    }
}

/// Largest singular value of `m` by power iteration on `MᵀM`.
///
/// Starts from the normalized all-ones vector so the result is reproducible. If
/// the iterate lands in the null space, the next standard basis vector is tried.
/// Returns 0 for the zero matrix.
pub fn spectral_norm(m: &Matrix, tol: f64, max_iter: usize) -> f64 {
    if m.data.iter().all(|v| *v == 0.0) {
        return 0.0;
    }
    let n = m.cols;
    let starts = std::iter::once(vec![1.0 / (n as f64).sqrt(); n]).chain((0..n).map(|i| {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        e
    }));
    for mut v in starts {
        let mut sigma = 0.0;
        let mut collapsed = false;
        for _ in 0..max_iter {
            let w = m.matvec_unchecked(&v);
            let s_new = norm(&w);
            let u = m.matvec_t_unchecked(&w);
            let un = norm(&u);
            if un == 0.0 || s_new == 0.0 {
                collapsed = true;
                break;
            }
            v = scaled(&u, 1.0 / un);
            let done = (s_new - sigma).abs() <= tol * s_new;
            sigma = s_new;
            if done {
                break;
            }
        }
        if !collapsed {
            // One more Rayleigh step so the returned value reflects the final iterate.
            return norm(&m.matvec_unchecked(&v)).max(sigma);
        }
    }
    0.0
}

/// Thin singular value decomposition `M = U diag(s) Vᵀ`.
#[derive(Debug, Clone)]
pub struct Svd {
    /// `rows × cols`, orthonormal columns.
    pub u: Matrix,
    /// Descending, nonnegative.
    pub s: Vec<f64>,
    /// `cols × cols`, orthogonal.
    pub v: Matrix,
}

const JACOBI_EPS: f64 = 1e-15;
const JACOBI_MAX_SWEEPS: usize = 80;
const RANK_TOL: f64 = 1e-12;

/// Thin SVD for tall matrices (`rows ≥ cols`) by one-sided (Hestenes) Jacobi.
///
/// Columns whose singular value falls below `1e-12·s_max` get their left
/// singular vector completed deterministically by Gram-Schmidt over the
/// standard basis, so `U` always has orthonormal columns.
pub fn thin_svd(m: &Matrix) -> Result<Svd> {
    let (n, r) = (m.rows, m.cols);
    if n < r {
        return Err(Error::Data(format!(
            "thin_svd needs rows >= cols, got {n}x{r}"
        )));
    }
    let mut w: Vec<Vec<f64>> = (0..r).map(|j| m.col(j)).collect();
    let mut v: Vec<Vec<f64>> = (0..r)
        .map(|j| {
            let mut e = vec![0.0; r];
            e[j] = 1.0;
            e
        })
        .collect();

    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..r {
            for q in (p + 1)..r {
                let alpha = dot(&w[p], &w[p]);
                let beta = dot(&w[q], &w[q]);
                let gamma = dot(&w[p], &w[q]);
                if gamma == 0.0 || gamma.abs() <= JACOBI_EPS * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_pair(&mut w, p, q, c, s);
                rotate_pair(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..r).collect();
    let norms: Vec<f64> = w.iter().map(|c| norm(c)).collect();
    order.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]));
    let s_max = norms[order[0]];

    let mut s = Vec::with_capacity(r);
    let mut u_cols: Vec<Vec<f64>> = Vec::with_capacity(r);
    let mut deficient = Vec::new();
    for (k, &j) in order.iter().enumerate() {
        s.push(norms[j]);
        if s_max > 0.0 && norms[j] > RANK_TOL * s_max {
            u_cols.push(scaled(&w[j], 1.0 / norms[j]));
        } else {
            u_cols.push(Vec::new());
            deficient.push(k);
        }
    }
    complete_orthonormal(&mut u_cols, &deficient, n);

    let mut u = Matrix::zeros(n, r);
    let mut vm = Matrix::zeros(r, r);
    for (k, &j) in order.iter().enumerate() {
        for i in 0..n {
            u.set(i, k, u_cols[k][i]);
        }
        for i in 0..r {
            vm.set(i, k, v[j][i]);
        }
    }
    Ok(Svd { u, s, v: vm })
}

fn rotate_pair(cols: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (lo, hi) = cols.split_at_mut(q);
    let (cp, cq) = (&mut lo[p], &mut hi[0]);
    for (a, b) in cp.iter_mut().zip(cq.iter_mut()) {
        let (x, y) = (*a, *b);
        *a = c * x - s * y;
        *b = s * x + c * y;
    }
}

/// Fills the empty slots listed in `missing` with unit vectors orthogonal to
/// every other filled column, trying `e_0, e_1, …` in order.
fn complete_orthonormal(cols: &mut [Vec<f64>], missing: &[usize], n: usize) {
    let mut candidate = 0usize;
    for &slot in missing {
        while candidate < n {
            let mut e = vec![0.0; n];
            e[candidate] = 1.0;
            candidate += 1;
            // Two passes of modified Gram-Schmidt.
            for _ in 0..2 {
                for c in cols.iter().filter(|c| !c.is_empty()) {
                    let proj = dot(c, &e);
                    axpy(-proj, c, &mut e);
                }
            }
            let en = norm(&e);
            if en > 1e-6 {
                cols[slot] = scaled(&e, 1.0 / en);
                break;
            }
        }
    }
}

/// A linear map `ℝⁿ → ℝᵐ` with its adjoint and a cached operator norm.
pub trait LinearOperator: Send + Sync {
    fn rows(&self) -> usize;
    fn cols(&self) -> usize;
    fn apply(&self, x: &[f64]) -> Vec<f64>;
    fn apply_adjoint(&self, y: &[f64]) -> Vec<f64>;
    /// `‖A‖₂`
    fn op_norm(&self) -> f64;
}

/// Dense matrix operator.
#[derive(Debug, Clone)]
pub struct DenseOperator {
    matrix: Matrix,
    norm: f64,
}

impl DenseOperator {
    pub fn new(matrix: Matrix) -> Self {
        let norm = spectral_norm(&matrix, SPECTRAL_TOL, SPECTRAL_MAX_ITER);
        DenseOperator { matrix, norm }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }
}

impl LinearOperator for DenseOperator {
    fn rows(&self) -> usize {
        self.matrix.rows
    }
    fn cols(&self) -> usize {
        self.matrix.cols
    }
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.matrix.matvec_unchecked(x)
    }
    fn apply_adjoint(&self, y: &[f64]) -> Vec<f64> {
        self.matrix.matvec_t_unchecked(y)
    }
    fn op_norm(&self) -> f64 {
        self.norm
    }
}

/// The identity on `ℝⁿ`, stored implicitly.
#[derive(Debug, Clone, Copy)]
pub struct IdentityOperator {
    n: usize,
}

impl IdentityOperator {
    pub fn new(n: usize) -> Self {
        IdentityOperator { n }
    }
}

impl LinearOperator for IdentityOperator {
    fn rows(&self) -> usize {
        self.n
    }
    fn cols(&self) -> usize {
        self.n
    }
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        x.to_vec()
    }
    fn apply_adjoint(&self, y: &[f64]) -> Vec<f64> {
        y.to_vec()
    }
    fn op_norm(&self) -> f64 {
        1.0
    }
}
