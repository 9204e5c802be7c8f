//! Dense complex linear algebra for small (dim <= 16) Hermitian operators.
//!
//! [`Matrix`] is a general rectangular complex matrix used for products,
//! unitaries and isometries. [`HermitianMatrix`] wraps a square matrix whose
//! entries are kept exactly conjugate-symmetric; it carries the spectral
//! routines. [`DensityMatrix`] adds the unit-trace and positivity checks.

use std::fmt;
use std::ops::Deref;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Eigenvalues below `DEFAULT_SUPPORT_CUTOFF * lambda_max` are treated as zero
/// by every fractional power, negative power and logarithm.
pub const DEFAULT_SUPPORT_CUTOFF: f64 = 1e-12;

/// Maximal entrywise asymmetry `|M_ij - conj(M_ji)|` accepted on input.
pub const HERMITIAN_TOLERANCE: f64 = 1e-9;

const JACOBI_RELATIVE_TOL: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 64;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from row vectors; all rows must have the same length.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                expected: cols,
                got: bad.len(),
            });
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let complex: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&complex)
    }

    pub fn diagonal(entries: &[Complex64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &z) in entries.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    /// Column vector from a slice.
    pub fn column(v: &[Complex64]) -> Self {
        Matrix {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matmul shape mismatch");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn kron(&self, rhs: &Matrix) -> Matrix {
        Matrix::from_fn(self.rows * rhs.rows, self.cols * rhs.cols, |i, j| {
            self[(i / rhs.rows, j / rhs.cols)] * rhs[(i % rhs.rows, j % rhs.cols)]
        })
    }

    pub fn scale(&self, s: Complex64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, rhs: &Matrix) -> f64 {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest `|M_ij - conj(M_ji)|`; infinite for non-square input.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `max |U^dagger U - I|`.
    pub fn isometry_defect(&self) -> f64 {
        self.adjoint()
            .matmul(self)
            .max_abs_diff(&Matrix::identity(self.cols))
    }

    /// `self * h * self^dagger`, symmetrised into a Hermitian matrix.
    pub fn conjugate(&self, h: &HermitianMatrix) -> HermitianMatrix {
        let m = self.matmul(h.as_matrix()).matmul(&self.adjoint());
        HermitianMatrix::symmetrize(m)
    }
}

/// Square complex matrix with `M_ij == conj(M_ji)` exactly and a real diagonal.
#[derive(Clone, PartialEq)]
pub struct HermitianMatrix(Matrix);

impl fmt::Debug for HermitianMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hermitian{:?}", self.0)
    }
}

impl HermitianMatrix {
    /// Validates a square matrix as Hermitian within [`HERMITIAN_TOLERANCE`]
    /// and removes the residual asymmetry.
    pub fn new(m: Matrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch {
                expected: m.rows,
                got: m.cols,
            });
        }
        if m.rows == 0 {
            return Err(Error::InvalidParameter(
                "dimension must be at least 1".into(),
            ));
        }
        if m.data
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::InvalidParameter("non-finite matrix entry".into()));
        }
        let defect = m.hermiticity_defect();
        if defect > HERMITIAN_TOLERANCE {
            return Err(Error::NotHermitian(defect));
        }
        Ok(Self::symmetrize(m))
    }

    /// `(M + M^dagger) / 2` without validation. Callers guarantee the input is
    /// Hermitian up to rounding.
    pub(crate) fn symmetrize(mut m: Matrix) -> Self {
        let n = m.rows;
        for i in 0..n {
            m[(i, i)] = Complex64::new(m[(i, i)].re, 0.0);
            for j in (i + 1)..n {
                let z = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        HermitianMatrix(m)
    }

    pub fn zeros(dim: usize) -> Self {
        HermitianMatrix(Matrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        HermitianMatrix(Matrix::identity(dim))
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let entries: Vec<Complex64> = diag.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        HermitianMatrix(Matrix::diagonal(&entries))
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(Matrix::from_real_rows(rows)?)
    }

    /// Rank-one operator `|v><v|` (not normalised).
    pub fn projector(v: &[Complex64]) -> Self {
        let m = Matrix::from_fn(v.len(), v.len(), |i, j| v[i] * v[j].conj());
        Self::symmetrize(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.rows
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.0[(i, i)].re).collect()
    }

    pub fn trace(&self) -> f64 {
        self.diagonal().iter().sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        HermitianMatrix(self.0.scale(Complex64::new(s, 0.0)))
    }

    pub fn add(&self, rhs: &HermitianMatrix) -> Self {
        HermitianMatrix(self.0.add(&rhs.0))
    }

    pub fn sub(&self, rhs: &HermitianMatrix) -> Self {
        HermitianMatrix(self.0.sub(&rhs.0))
    }

    pub fn kron(&self, rhs: &HermitianMatrix) -> Self {
        HermitianMatrix(self.0.kron(&rhs.0))
    }

    pub fn matmul(&self, rhs: &HermitianMatrix) -> Matrix {
        self.0.matmul(&rhs.0)
    }

    /// `tr(self * rhs)`, real for Hermitian operands.
    pub fn trace_product(&self, rhs: &HermitianMatrix) -> f64 {
        assert_eq!(self.dim(), rhs.dim());
        let n = self.dim();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (self.0[(i, j)] * rhs.0[(j, i)]).re;
            }
        }
        acc
    }

    pub fn max_abs_diff(&self, rhs: &HermitianMatrix) -> f64 {
        self.0.max_abs_diff(&rhs.0)
    }

    /// Largest off-diagonal modulus.
    pub fn max_off_diagonal(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    worst = worst.max(self.0[(i, j)].norm());
                }
            }
        }
        worst
    }

    /// Spectral decomposition by cyclic complex Jacobi rotations.
    pub fn eig(&self) -> Spectrum {
        jacobi_eigen(&self.0)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.eig().eigenvalues
    }

    /// `U diag(f(lambda)) U^dagger` with `f(lambda) = lambda^p` on the support
    /// (`lambda > cutoff * lambda_max`) and zero elsewhere.
    pub fn power(&self, p: f64, support_cutoff: f64) -> HermitianMatrix {
        self.eig().apply_on_support(support_cutoff, |l| l.powf(p))
    }

    /// Base-2 logarithm on the support, zero off the support.
    pub fn log2(&self, support_cutoff: f64) -> HermitianMatrix {
        self.eig().apply_on_support(support_cutoff, f64::log2)
    }

    /// Partial trace over one factor of a `dims.0 x dims.1` bipartition.
    pub fn partial_trace(&self, dims: (usize, usize), keep: Subsystem) -> Result<HermitianMatrix> {
        let (da, db) = dims;
        if da * db != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: da * db,
            });
        }
        let m = &self.0;
        let out = match keep {
            Subsystem::A => Matrix::from_fn(da, da, |i, j| {
                (0..db).map(|k| m[(i * db + k, j * db + k)]).sum()
            }),
            Subsystem::B => Matrix::from_fn(db, db, |i, j| {
                (0..da).map(|k| m[(k * db + i, k * db + j)]).sum()
            }),
        };
        Ok(Self::symmetrize(out))
    }

    /// Sum of `lambda^p` over the support; the trace of [`Self::power`].
    pub fn trace_power(&self, p: f64, support_cutoff: f64) -> f64 {
        self.eig().support_sum(support_cutoff, |l| l.powf(p))
    }
}

impl Deref for HermitianMatrix {
    type Target = Matrix;

    fn deref(&self) -> &Matrix {
        &self.0
    }
}

/// Which factor of a bipartite space to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors
/// stored as the columns of `eigenvectors`.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Matrix,
}

impl Spectrum {
    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// `U diag(f(lambda)) U^dagger` for all eigenvalues.
    pub fn reconstruct(&self, f: impl Fn(f64) -> f64) -> HermitianMatrix {
        let vals: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        self.compose(&vals)
    }

    pub(crate) fn apply_on_support(&self, cutoff: f64, f: impl Fn(f64) -> f64) -> HermitianMatrix {
        let threshold = cutoff * self.max_eigenvalue();
        let vals: Vec<f64> = self
            .eigenvalues
            .iter()
            .map(|&l| if l > threshold && l > 0.0 { f(l) } else { 0.0 })
            .collect();
        self.compose(&vals)
    }

    pub(crate) fn support_sum(&self, cutoff: f64, f: impl Fn(f64) -> f64) -> f64 {
        let threshold = cutoff * self.max_eigenvalue();
        self.eigenvalues
            .iter()
            .filter(|&&l| l > threshold && l > 0.0)
            .map(|&l| f(l))
            .sum()
    }

    fn compose(&self, vals: &[f64]) -> HermitianMatrix {
        let u = &self.eigenvectors;
        let n = u.rows();
        let mut out = Matrix::zeros(n, n);
        for (k, &v) in vals.iter().enumerate() {
            if v == 0.0 {
                continue;
            }
            for i in 0..n {
                let uik = u[(i, k)] * v;
                for j in 0..n {
                    out[(i, j)] += uik * u[(j, k)].conj();
                }
            }
        }
        HermitianMatrix::symmetrize(out)
    }
}

fn jacobi_eigen(input: &Matrix) -> Spectrum {
    let n = input.rows;
    let mut a = input.clone();
    let mut v = Matrix::identity(n);
    let total = a.frobenius_norm();
    let target = JACOBI_RELATIVE_TOL * total;

    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= target || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]).then(i.cmp(&j)));
    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let eigenvectors = Matrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Spectrum {
        eigenvalues,
        eigenvectors,
    }
}

/// One complex Jacobi rotation annihilating `a[p][q]`.
///
/// The phase of `a[p][q]` is absorbed into column `q` first, which reduces the
/// 2x2 pivot block to the real symmetric case.
fn rotate(a: &mut Matrix, v: &mut Matrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // Below rounding of the diagonal the rotation cannot change anything.
    if mag <= f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        a[(p, q)] = ZERO;
        a[(q, p)] = ZERO;
        return;
    }
    let phase = apq / mag;
    let theta = (aqq - app) / (2.0 * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // J = diag(1, conj(phase)) * [[c, s], [-s, c]]
    let j_pp = Complex64::new(c, 0.0);
    let j_pq = Complex64::new(s, 0.0);
    let j_qp = -phase.conj() * s;
    let j_qq = phase.conj() * c;

    let n = a.rows;
    // A <- A J
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * j_pp + akq * j_qp;
        a[(k, q)] = akp * j_pq + akq * j_qq;
    }
    // A <- J^dagger A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = j_pp.conj() * apk + j_qp.conj() * aqk;
        a[(q, k)] = j_pq.conj() * apk + j_qq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
    // V <- V J
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * j_pp + vkq * j_qp;
        v[(k, q)] = vkp * j_pq + vkq * j_qq;
    }
}

/// Unit-trace positive semidefinite Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(HermitianMatrix);

impl DensityMatrix {
    pub const TRACE_TOLERANCE: f64 = 1e-10;
    pub const PSD_TOLERANCE: f64 = 1e-10;

    pub fn new(h: HermitianMatrix) -> Result<Self> {
        let tr = h.trace();
        if (tr - 1.0).abs() > Self::TRACE_TOLERANCE {
            return Err(Error::NotDensity(format!("trace {tr}")));
        }
        let min = h.eigenvalues()[0];
        if min < -Self::PSD_TOLERANCE {
            return Err(Error::NotDensity(format!("minimum eigenvalue {min:.3e}")));
        }
        Ok(DensityMatrix(h))
    }

    /// Wraps without checks; for builders whose output is a density by construction.
    pub(crate) fn new_unchecked(h: HermitianMatrix) -> Self {
        DensityMatrix(h)
    }

    /// `|v><v| / <v|v>`.
    pub fn pure(v: &[Complex64]) -> Self {
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        DensityMatrix(HermitianMatrix::projector(v).scale(1.0 / norm))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix(HermitianMatrix::identity(dim).scale(1.0 / dim as f64))
    }

    pub fn as_hermitian(&self) -> &HermitianMatrix {
        &self.0
    }

    pub fn into_hermitian(self) -> HermitianMatrix {
        self.0
    }

    pub fn partial_trace(&self, dims: (usize, usize), keep: Subsystem) -> Result<DensityMatrix> {
        Ok(DensityMatrix(self.0.partial_trace(dims, keep)?))
    }

    pub fn kron(&self, rhs: &DensityMatrix) -> DensityMatrix {
        DensityMatrix(self.0.kron(&rhs.0))
    }

    /// Von Neumann entropy in bits, `-sum lambda log2 lambda` on the support.
    pub fn entropy(&self) -> f64 {
        -self
            .0
            .eig()
            .support_sum(DEFAULT_SUPPORT_CUTOFF, |l| l * l.log2())
    }
}

impl Deref for DensityMatrix {
    type Target = HermitianMatrix;

    fn deref(&self) -> &HermitianMatrix {
        &self.0
    }
}

/// Spectral decomposition of a Hermitian matrix.
pub fn eig(m: &HermitianMatrix) -> Spectrum {
    m.eig()
}

pub fn matrix_power(m: &HermitianMatrix, p: f64, support_cutoff: f64) -> HermitianMatrix {
    m.power(p, support_cutoff)
}

pub fn matrix_log2(m: &HermitianMatrix, support_cutoff: f64) -> HermitianMatrix {
    m.log2(support_cutoff)
}

pub fn partial_trace(
    m: &HermitianMatrix,
    dims: (usize, usize),
    keep: Subsystem,
) -> Result<HermitianMatrix> {
    m.partial_trace(dims, keep)
}

/// Haar-random pure state on `dA x dB x dC` (amplitudes indexed `a*dB*dC + b*dC + c`).
pub fn random_pure_tripartite(dims: (usize, usize, usize), seed: u64) -> Vec<Complex64> {
    let (da, db, dc) = dims;
    random_unit_vector(da * db * dc, seed)
}

/// Normalised vector of independent complex Gaussians, deterministic per seed.
pub fn random_unit_vector(len: usize, seed: u64) -> Vec<Complex64> {
    let mut g = crate::rng::GaussianStream::new(seed, 0);
    let mut v: Vec<Complex64> = (0..len)
        .map(|_| Complex64::new(g.next_standard(), g.next_standard()))
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut v {
        *z /= norm;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn identity_spectrum() {
        let s = HermitianMatrix::identity(2).eig();
        assert_eq!(s.eigenvalues, vec![1.0, 1.0]);
    }

    #[test]
    fn diagonal_spectrum_keeps_basis() {
        let s = HermitianMatrix::from_diagonal(&[0.3, 0.7]).eig();
        assert_eq!(s.eigenvalues, vec![0.3, 0.7]);
        assert!(s.eigenvectors.max_abs_diff(&Matrix::identity(2)) < 1e-15);
    }

    #[test]
    fn pauli_x_spectrum() {
        // characteristic polynomial lambda^2 - 1
        let x = HermitianMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let s = x.eig();
        assert_close(s.eigenvalues[0], -1.0, 1e-15);
        assert_close(s.eigenvalues[1], 1.0, 1e-15);
    }

    #[test]
    fn complex_2x2_closed_form() {
        // [[a, z], [z*, d]] has eigenvalues (a+d)/2 -+ sqrt(((a-d)/2)^2 + |z|^2)
        let z = c(0.3, -0.4);
        let m = HermitianMatrix::new(
            Matrix::from_rows(&[vec![c(1.2, 0.0), z], vec![z.conj(), c(-0.5, 0.0)]]).unwrap(),
        )
        .unwrap();
        let mean = (1.2 - 0.5) / 2.0;
        let rad = ((1.7f64 / 2.0).powi(2) + z.norm_sqr()).sqrt();
        let s = m.eig();
        assert_close(s.eigenvalues[0], mean - rad, 1e-14);
        assert_close(s.eigenvalues[1], mean + rad, 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = Matrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert!(matches!(
            HermitianMatrix::new(m),
            Err(Error::NotHermitian(_))
        ));
    }

    #[test]
    fn power_examples() {
        let half = DensityMatrix::maximally_mixed(2);
        let sq = half.power(2.0, DEFAULT_SUPPORT_CUTOFF);
        assert!(sq.max_abs_diff(&HermitianMatrix::identity(2).scale(0.25)) < 1e-15);

        let proj = HermitianMatrix::from_diagonal(&[1.0, 0.0]);
        let inv_sqrt = proj.power(-0.5, DEFAULT_SUPPORT_CUTOFF);
        assert!(inv_sqrt.max_abs_diff(&proj) < 1e-15);

        let d = HermitianMatrix::from_diagonal(&[0.25, 0.75]);
        let root = d.power(0.5, DEFAULT_SUPPORT_CUTOFF);
        assert_close(root.get(0, 0).re, 0.5, 1e-15);
        assert_close(root.get(1, 1).re, 0.75f64.sqrt(), 1e-15);
        assert_close(root.get(1, 1).re, 0.866_025_403_784_438_6, 1e-15);
    }

    #[test]
    fn log2_examples() {
        let half = DensityMatrix::maximally_mixed(2);
        let l = half.log2(DEFAULT_SUPPORT_CUTOFF);
        assert!(l.max_abs_diff(&HermitianMatrix::identity(2).scale(-1.0)) < 1e-15);

        let proj = HermitianMatrix::from_diagonal(&[1.0, 0.0]);
        assert!(proj.log2(DEFAULT_SUPPORT_CUTOFF).max_abs() < 1e-15);

        let d = HermitianMatrix::from_diagonal(&[0.25, 0.75]);
        let l = d.log2(DEFAULT_SUPPORT_CUTOFF);
        assert_close(l.get(0, 0).re, -2.0, 1e-15);
        assert_close(l.get(1, 1).re, -0.415_037_499_278_843_8, 1e-15);
    }

    #[test]
    fn partial_trace_examples() {
        let ra = HermitianMatrix::from_real_rows(&[vec![0.6, 0.1], vec![0.1, 0.4]]).unwrap();
        let rb = HermitianMatrix::from_real_rows(&[vec![0.2, -0.3], vec![-0.3, 0.8]]).unwrap();
        let prod = ra.kron(&rb);
        let got = prod.partial_trace((2, 2), Subsystem::B).unwrap();
        assert!(got.max_abs_diff(&rb) < 1e-15);

        // |Phi+><Phi+|, traced by direct index contraction
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = HermitianMatrix::projector(&[c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)]);
        let mut contracted = [[0.0; 2]; 2];
        for (i, row) in contracted.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                for k in 0..2 {
                    *v += bell.get(i * 2 + k, j * 2 + k).re;
                }
            }
        }
        let got = bell.partial_trace((2, 2), Subsystem::A).unwrap();
        assert_close(contracted[0][0], 0.5, 1e-15);
        assert_close(contracted[0][1], 0.0, 1e-15);
        assert!(got.max_abs_diff(&HermitianMatrix::identity(2).scale(0.5)) < 1e-15);

        let m = HermitianMatrix::from_real_rows(&[vec![0.3, 0.1], vec![0.1, 0.7]]).unwrap();
        let scalar = m.partial_trace((1, 2), Subsystem::A).unwrap();
        assert_eq!(scalar.dim(), 1);
        assert_close(scalar.get(0, 0).re, 1.0, 1e-15);

        assert!(matches!(
            m.partial_trace((2, 2), Subsystem::A),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn random_state_properties() {
        assert_eq!(random_pure_tripartite((1, 1, 1), 7).len(), 1);
        assert_close(random_pure_tripartite((1, 1, 1), 7)[0].norm(), 1.0, 1e-15);
        let a = random_pure_tripartite((2, 3, 4), 11);
        let b = random_pure_tripartite((2, 3, 4), 11);
        assert_eq!(a, b);
        let norm: f64 = a.iter().map(|z| z.norm_sqr()).sum();
        assert_close(norm, 1.0, 1e-12);
        assert_ne!(a, random_pure_tripartite((2, 3, 4), 12));
    }

    #[test]
    fn density_validation() {
        assert!(DensityMatrix::new(HermitianMatrix::from_diagonal(&[0.5, 0.6])).is_err());
        assert!(DensityMatrix::new(HermitianMatrix::from_diagonal(&[1.5, -0.5])).is_err());
        assert!(DensityMatrix::new(HermitianMatrix::from_diagonal(&[0.25, 0.75])).is_ok());
    }

    #[test]
    fn entropy_of_mixed_qubit() {
        assert_close(DensityMatrix::maximally_mixed(4).entropy(), 2.0, 1e-14);
        assert_close(
            DensityMatrix::pure(&[c(1.0, 0.0), c(0.0, 1.0)]).entropy(),
            0.0,
            1e-14,
        );
    }
}
