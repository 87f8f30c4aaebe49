//! Small dense complex linear algebra.
//!
//! Everything in this crate lives in dimension 16 or less, so the routines
//! here favour accuracy and simplicity over asymptotic speed: Hermitian
//! eigenproblems use cyclic Jacobi rotations and null spaces come from a
//! one-sided (Hestenes) Jacobi SVD.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use thiserror::Error;

pub type C64 = Complex64;

/// Absolute Hermiticity tolerance accepted by [`hermitian_eigensystem`],
/// scaled by `max(1, max|M_ij|)`.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Default relative singular-value threshold for [`null_space`].
pub const DEFAULT_NULL_TOL: f64 = 1e-10;

const MAX_SWEEPS: usize = 100;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix is not Hermitian (max |M - M^dag| = {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("entry count {len} does not match shape {rows}x{cols}")]
    BadShape { rows: usize, cols: usize, len: usize },
}

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Dense complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self, LinalgError> {
        if rows * cols != data.len() {
            return Err(LinalgError::BadShape {
                rows,
                cols,
                len: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::default(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from real row-major entries.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self, LinalgError> {
        Self::new(rows, cols, entries.iter().map(|&x| c(x, 0.0)).collect())
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { diag[i] } else { C64::default() })
    }

    /// Matrix whose columns are the given vectors (all of equal length).
    pub fn from_columns(cols: &[ComplexVector]) -> Self {
        let rows = cols.first().map_or(0, |v| v.dim());
        Self::from_fn(rows, cols.len(), |i, j| cols[j][i])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> ComplexVector {
        ComplexVector((0..self.rows).map(|i| self[(i, j)]).collect())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, k: C64) -> Self {
        self.map(|z| z * k)
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`; infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.shape() != other.shape() {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |M - M^dag|`, infinite for non-square matrices.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// `(M + M^dag) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let adj = self.adjoint();
        Self::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] + adj[(i, j)]) * 0.5)
    }

    pub fn mul_vec(&self, v: &ComplexVector) -> ComplexVector {
        assert_eq!(self.cols, v.dim(), "matrix-vector dimension mismatch");
        ComplexVector(
            (0..self.rows)
                .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
                .collect(),
        )
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::DimMismatch {
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::default() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:>10.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    /// Panics on incompatible shapes; use [`ComplexMatrix::try_mul`] to get an error.
    fn mul(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        self.try_mul(rhs).expect("matrix product dimension mismatch")
    }
}

impl Mul<f64> for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, k: f64) -> ComplexMatrix {
        self.map(|z| z * k)
    }
}

impl Mul<C64> for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, k: C64) -> ComplexMatrix {
        self.scale(k)
    }
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "matrix sum shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "matrix difference shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl AddAssign<&ComplexMatrix> for ComplexMatrix {
    fn add_assign(&mut self, rhs: &ComplexMatrix) {
        assert_eq!(self.shape(), rhs.shape(), "matrix sum shape mismatch");
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.map(|z| -z)
    }
}

/// Dense complex column vector.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexVector(pub Vec<C64>);

impl ComplexVector {
    pub fn zeros(dim: usize) -> Self {
        Self(vec![C64::default(); dim])
    }

    pub fn from_real(entries: &[f64]) -> Self {
        Self(entries.iter().map(|&x| c(x, 0.0)).collect())
    }

    /// Standard basis vector `e_k`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[k] = c(1.0, 0.0);
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[C64] {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        Self(self.0.iter().map(|z| z / n).collect())
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    /// Inner product `<self|other>`, antilinear in `self`.
    pub fn inner(&self, other: &Self) -> C64 {
        assert_eq!(self.dim(), other.dim(), "inner product dimension mismatch");
        self.0.iter().zip(&other.0).map(|(a, b)| a.conj() * b).sum()
    }

    /// Outer product `|self><other|`.
    pub fn outer(&self, other: &Self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.dim(), other.dim(), |i, j| self.0[i] * other.0[j].conj())
    }

    pub fn scale(&self, k: C64) -> Self {
        Self(self.0.iter().map(|z| z * k).collect())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Index<usize> for ComplexVector {
    type Output = C64;

    fn index(&self, i: usize) -> &C64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for ComplexVector {
    fn index_mut(&mut self, i: usize) -> &mut C64 {
        &mut self.0[i]
    }
}

/// Kronecker product, row index `(i1, i2) -> i1 * dim(B) + i2`.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (br, bc) = b.shape();
    ComplexMatrix::from_fn(a.rows() * br, a.cols() * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

/// `AB - BA`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    if !a.is_square() || a.shape() != b.shape() {
        return Err(LinalgError::DimMismatch {
            left: a.shape(),
            right: b.shape(),
        });
    }
    Ok(&(a * b) - &(b * a))
}

/// Eigenvalues (ascending) and orthonormal eigenvectors (as columns) of a
/// Hermitian matrix.
#[derive(Clone, Debug)]
pub struct Eigensystem {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl Eigensystem {
    pub fn vector(&self, k: usize) -> ComplexVector {
        self.vectors.column(k)
    }

    /// `V diag(values) V^dag`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.values.len();
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| self.vectors[(i, k)] * self.values[k] * self.vectors[(j, k)].conj())
                .sum()
        })
    }

    pub fn min_value(&self) -> f64 {
        self.values.first().copied().unwrap_or(f64::NAN)
    }
}

/// Unitary 2x2 rotation `[[jpp, jpq], [jqp, jqq]]` that diagonalizes the
/// Hermitian block `[[app, apq], [conj(apq), aqq]]` under `J^dag A J`.
fn jacobi_rotation(app: f64, aqq: f64, apq: C64) -> [C64; 4] {
    let g = apq.norm();
    let phase = if g > 0.0 { apq / g } else { c(1.0, 0.0) };
    let tau = (aqq - app) / (2.0 * g);
    let t = if tau.is_infinite() {
        0.0
    } else {
        tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
    };
    let cs = 1.0 / (1.0 + t * t).sqrt();
    let sn = t * cs;
    // diag(1, conj(phase)) makes the block real; then a real Jacobi rotation.
    let ph = phase.conj();
    [c(cs, 0.0), c(sn, 0.0), -ph * sn, ph * cs]
}

/// Right-multiplies columns `p`, `q` of `m` by the 2x2 rotation `j`.
fn rotate_columns(m: &mut ComplexMatrix, p: usize, q: usize, j: &[C64; 4]) {
    for k in 0..m.rows() {
        let mp = m[(k, p)];
        let mq = m[(k, q)];
        m[(k, p)] = mp * j[0] + mq * j[2];
        m[(k, q)] = mp * j[1] + mq * j[3];
    }
}

fn off_diagonal_norm_sqr(m: &ComplexMatrix) -> f64 {
    let n = m.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += m[(i, j)].norm_sqr();
            }
        }
    }
    s
}

/// Cyclic Jacobi eigendecomposition of a Hermitian matrix.
pub fn hermitian_eigensystem(m: &ComplexMatrix) -> Result<Eigensystem, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let deviation = m.hermitian_deviation();
    if deviation > HERMITIAN_TOL * m.max_abs().max(1.0) {
        return Err(LinalgError::NotHermitian { deviation });
    }
    let n = m.rows();
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();
    let target = (f64::EPSILON * scale).powi(2);

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm_sqr(&a) <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.norm() <= f64::MIN_POSITIVE {
                    continue;
                }
                let j = jacobi_rotation(a[(p, p)].re, a[(q, q)].re, apq);
                rotate_columns(&mut a, p, q, &j);
                // rows: A <- J^dag A
                for k in 0..n {
                    let ap = a[(p, k)];
                    let aq = a[(q, k)];
                    a[(p, k)] = j[0].conj() * ap + j[2].conj() * aq;
                    a[(q, k)] = j[1].conj() * ap + j[3].conj() * aq;
                }
                a[(p, q)] = C64::default();
                a[(q, p)] = C64::default();
                a[(p, p)].im = 0.0;
                a[(q, q)].im = 0.0;
                rotate_columns(&mut v, p, q, &j);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(Eigensystem { values, vectors })
}

/// Singular values and right singular vectors.
#[derive(Clone, Debug)]
pub struct Svd {
    /// Descending.
    pub singular_values: Vec<f64>,
    /// Right singular vectors as columns, ordered like `singular_values`.
    pub right_vectors: ComplexMatrix,
}

/// One-sided Jacobi SVD: rotates column pairs of `A V` until they are
/// mutually orthogonal; the column norms are then the singular values.
pub fn svd(m: &ComplexMatrix) -> Svd {
    let n = m.cols();
    let mut u = m.clone();
    let mut v = ComplexMatrix::identity(n);

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, C64::default());
                for k in 0..u.rows() {
                    let up = u[(k, p)];
                    let uq = u[(k, q)];
                    alpha += up.norm_sqr();
                    beta += uq.norm_sqr();
                    gamma += up.conj() * uq;
                }
                if gamma.norm() <= f64::EPSILON * (alpha * beta).sqrt() || gamma.norm() == 0.0 {
                    continue;
                }
                rotated = true;
                let j = jacobi_rotation(alpha, beta, gamma);
                rotate_columns(&mut u, p, q, &j);
                rotate_columns(&mut v, p, q, &j);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = (0..n).map(|j| u.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    Svd {
        singular_values: order.iter().map(|&j| norms[j]).collect(),
        right_vectors: ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k])]),
    }
}

/// Orthonormal basis of the numerical null space of a square matrix: right
/// singular vectors whose singular value is at most `tol * sigma_max`.
pub fn null_space(m: &ComplexMatrix, tol: f64) -> Vec<ComplexVector> {
    let s = svd(m);
    let sigma_max = s.singular_values.first().copied().unwrap_or(0.0);
    s.singular_values
        .iter()
        .enumerate()
        .filter(|(_, &sigma)| sigma <= tol * sigma_max)
        .map(|(k, _)| s.right_vectors.column(k))
        .collect()
}

/// Modified Gram-Schmidt; drops vectors that are numerically dependent.
pub fn orthonormalize(vectors: &[ComplexVector]) -> Vec<ComplexVector> {
    let mut basis: Vec<ComplexVector> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let proj = b.inner(&w);
                for (wi, bi) in w.0.iter_mut().zip(&b.0) {
                    *wi -= proj * bi;
                }
            }
        }
        if w.norm() > 1e-12 * v.norm().max(f64::MIN_POSITIVE) {
            basis.push(w.normalized());
        }
    }
    basis
}

/// Largest principal angle (radians) between the spans of two vector sets.
///
/// Computed as `asin` of the spectral norm of `(I - Q_a Q_a^dag) Q_b`, which
/// stays accurate for tiny angles. Returns `pi/2` when the spans have
/// different dimensions.
pub fn max_principal_angle(a: &[ComplexVector], b: &[ComplexVector]) -> f64 {
    let qa = orthonormalize(a);
    let qb = orthonormalize(b);
    if qa.len() != qb.len() {
        return std::f64::consts::FRAC_PI_2;
    }
    if qa.is_empty() {
        return 0.0;
    }
    let residuals: Vec<ComplexVector> = qb
        .iter()
        .map(|w| {
            let mut r = w.clone();
            for q in &qa {
                let proj = q.inner(w);
                for (ri, qi) in r.0.iter_mut().zip(&q.0) {
                    *ri -= proj * qi;
                }
            }
            r
        })
        .collect();
    let sigma = svd(&ComplexMatrix::from_columns(&residuals))
        .singular_values
        .first()
        .copied()
        .unwrap_or(0.0);
    sigma.min(1.0).asin()
}
