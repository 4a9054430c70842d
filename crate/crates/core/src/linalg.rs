//! Dense complex linear algebra for small Hilbert spaces.
//!
//! Everything here works on `d × d` matrices with `d` in the tens at most:
//! Hermitian eigendecomposition, unitary propagators built from a spectral
//! decomposition, and a scaling-and-squaring exponential for matrices that
//! are not normal (the damped evolution of the continuous-measurement model).
//!
//! Units: ħ = 1, so a Hamiltonian's eigenvalues are angular frequencies.

use std::ops::{Add, Mul, Sub};

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

/// Default tolerance for the Hermiticity check.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Default bound on `‖V Λ V† − M‖_max`, relative to `max(1, ‖M‖_max)`.
pub const RECONSTRUCTION_TOL: f64 = 1e-9;
/// Default relative tolerance of [`matrix_exp_general`].
pub const EXP_TOL: f64 = 1e-10;

// Components smaller than this are skipped when fixing eigenvector phases.
const PHASE_THRESHOLD: f64 = 1e-8;
const MAX_TAYLOR_TERMS: usize = 64;

/// A dense square complex matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl ComplexMatrix {
    pub fn new(inner: DMatrix<C64>) -> Result<Self> {
        if inner.nrows() == 0 || inner.nrows() != inner.ncols() {
            return Err(Error::InvalidArgument(format!(
                "matrix must be square with dim >= 1, got {}x{}",
                inner.nrows(),
                inner.ncols()
            )));
        }
        if let Some((i, _)) = inner
            .iter()
            .enumerate()
            .find(|(_, z)| !(z.re.is_finite() && z.im.is_finite()))
        {
            let d = inner.nrows();
            return Err(Error::InvalidArgument(format!(
                "non-finite entry at ({}, {})",
                i % d,
                i / d
            )));
        }
        Ok(Self(inner))
    }

    /// Builds a matrix from row-major rows.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let d = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: bad.len(),
            });
        }
        Self::new(DMatrix::from_fn(d, d, |i, j| rows[i][j]))
    }

    /// Builds a matrix with real entries from row-major rows.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    pub fn from_diagonal(diag: &[C64]) -> Result<Self> {
        Self::new(DMatrix::from_diagonal(&DVector::from_column_slice(diag)))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_inner(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<C64> {
        self.0
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.0[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self(self.0.map(|z| z * factor))
    }

    /// Largest entry modulus.
    pub fn max_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest column sum of entry moduli (induced 1-norm).
    pub fn one_norm(&self) -> f64 {
        self.0
            .column_iter()
            .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// `‖M − M†‖_max`.
    pub fn hermiticity_defect(&self) -> f64 {
        (&self.0 - self.0.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn apply(&self, v: &DVector<C64>) -> DVector<C64> {
        &self.0 * v
    }

    /// `‖A − B‖_max`. Panics on a dimension mismatch.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        (self - other).max_norm()
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

/// Eigenvalues (ascending) and orthonormal eigenvectors (as columns) of a
/// Hermitian matrix.
///
/// Each eigenvector's first component with modulus above `1e-8` is real and
/// positive, so the decomposition of a given matrix is reproducible.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData {
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<C64>,
}

impl SpectralData {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvalue(&self, i: usize) -> f64 {
        self.eigenvalues[i]
    }

    /// Matrix whose `i`-th column is the `i`-th eigenvector.
    pub fn eigenvectors(&self) -> &DMatrix<C64> {
        &self.eigenvectors
    }

    pub fn eigenvector(&self, i: usize) -> DVector<C64> {
        self.eigenvectors.column(i).into_owned()
    }

    /// `Σ_k λ_k v_k v_k†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        ComplexMatrix(self.apply_function(|x| C64::new(x, 0.0)))
    }

    /// `max_ij |⟨v_i|v_j⟩ − δ_ij|`.
    pub fn orthonormality_defect(&self) -> f64 {
        let gram = self.eigenvectors.adjoint() * &self.eigenvectors;
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let delta = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((gram[(i, j)] - C64::new(delta, 0.0)).norm());
            }
        }
        worst
    }

    /// Spectral calculus: `Σ_k h(λ_k) v_k v_k†`.
    pub fn function_of(&self, h: impl Fn(f64) -> C64) -> ComplexMatrix {
        ComplexMatrix(self.apply_function(h))
    }

    fn apply_function(&self, h: impl Fn(f64) -> C64) -> DMatrix<C64> {
        let mut scaled = self.eigenvectors.clone();
        for (k, mut col) in scaled.column_iter_mut().enumerate() {
            col *= h(self.eigenvalues[k]);
        }
        scaled * self.eigenvectors.adjoint()
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Fails with [`Error::NonHermitian`] when `‖M − M†‖_max > tol`. The
/// Hermitian part `(M + M†)/2` is what gets diagonalized.
pub fn hermitian_eigendecomposition(m: &ComplexMatrix, tol: f64) -> Result<SpectralData> {
    let defect = m.hermiticity_defect();
    if defect > tol {
        return Err(Error::NonHermitian {
            max_deviation: defect,
            tol,
        });
    }
    let d = m.dim();
    let sym = (&m.0 + m.0.adjoint()) * C64::new(0.5, 0.0);
    let eig = nalgebra::linalg::SymmetricEigen::try_new(sym, f64::EPSILON, 1000 * d)
        .ok_or_else(|| Error::NumericalFailure("Hermitian eigensolver did not converge".into()))?;

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::from_fn(d, d, |r, c| eig.eigenvectors[(r, order[c])]);

    // Modified Gram-Schmidt keeps degenerate subspaces orthonormal.
    for j in 0..d {
        for k in 0..j {
            let proj = vectors.column(k).dotc(&vectors.column(j));
            let prev = vectors.column(k).into_owned();
            vectors.column_mut(j).axpy(-proj, &prev, C64::new(1.0, 0.0));
        }
        let norm = vectors.column(j).norm();
        if norm < 1e-6 {
            return Err(Error::NumericalFailure(
                "eigenvectors are linearly dependent".into(),
            ));
        }
        vectors.column_mut(j).unscale_mut(norm);

        if let Some(lead) = vectors
            .column(j)
            .iter()
            .copied()
            .find(|z| z.norm() > PHASE_THRESHOLD)
        {
            let phase = lead.conj() / lead.norm();
            for z in vectors.column_mut(j).iter_mut() {
                *z *= phase;
            }
        }
    }

    let spectral = SpectralData {
        eigenvalues,
        eigenvectors: vectors,
    };
    let scale = m.max_norm().max(1.0);
    let residual = spectral.reconstruct().max_abs_diff(m);
    if residual > RECONSTRUCTION_TOL * scale {
        return Err(Error::NumericalFailure(format!(
            "eigendecomposition reconstruction residual {residual:e}"
        )));
    }
    Ok(spectral)
}

/// `U(t) = Σ_m e^{−i E_m t} |φ_m⟩⟨φ_m|` for the Hamiltonian whose spectrum is
/// `h`.
pub fn propagator(h: &SpectralData, t: f64) -> Result<ComplexMatrix> {
    if !t.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "time must be finite, got {t}"
        )));
    }
    Ok(h.function_of(|e| C64::new(0.0, -e * t).exp()))
}

/// Matrix exponential by scaling and squaring with a truncated Taylor series.
///
/// Works for any square matrix, normal or not. `tol` is the target relative
/// accuracy in max norm; the series for the scaled matrix is truncated at
/// `tol / 2^s` (floored at machine epsilon) so that `s` squarings stay
/// within budget.
pub fn matrix_exp_general(m: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let d = m.dim();
    let norm = m.one_norm();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let x = &m.0 * C64::new(0.5f64.powi(squarings), 0.0);
    let cutoff = (tol * 0.5f64.powi(squarings)).max(f64::EPSILON);

    let mut sum = DMatrix::<C64>::identity(d, d);
    let mut term = DMatrix::<C64>::identity(d, d);
    let mut converged = false;
    for k in 1..=MAX_TAYLOR_TERMS {
        term = (&term * &x) / C64::new(k as f64, 0.0);
        sum += &term;
        let term_norm = term.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let sum_norm = sum.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if term_norm <= cutoff * sum_norm {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NumericalFailure(
            "Taylor series did not converge".into(),
        ));
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    if sum.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::NumericalFailure(
            "matrix exponential overflowed".into(),
        ));
    }
    Ok(ComplexMatrix(sum))
}
