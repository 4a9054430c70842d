//! Observables, Hamiltonians, prepared states, Born-rule outcome
//! distributions and the transition matrix `P_nm = |⟨ψ_n|φ_m⟩|²` between the
//! eigenbasis of an observable and that of a Hamiltonian.
//!
//! Outcome labels are indices into the ascending-sorted spectrum of the
//! measured observable. Each label is a rank-1 projector, so degenerate
//! eigenvalues still give distinct outcomes.

use std::ops::Deref;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eigendecomposition, ComplexMatrix, SpectralData, C64, HERMITIAN_TOL,
};

/// Weights in `[-NEGATIVE_CLAMP, 0)` are rounding noise and become zero.
pub const NEGATIVE_CLAMP: f64 = 1e-12;
/// Tolerance on `Σ p = 1` for normalized distributions and on the row and
/// column sums of a [`TransitionMatrix`].
pub const STOCHASTIC_TOL: f64 = 1e-9;
/// Tolerance on `‖ψ‖ = 1` for states tagged normalized.
pub const NORM_TOL: f64 = 1e-10;

pub mod pauli {
    use super::*;

    fn m(rows: [[C64; 2]; 2]) -> ComplexMatrix {
        ComplexMatrix::from_rows(&[rows[0].to_vec(), rows[1].to_vec()]).expect("finite 2x2")
    }

    const O: C64 = C64::new(0.0, 0.0);
    const ONE: C64 = C64::new(1.0, 0.0);
    const I: C64 = C64::new(0.0, 1.0);

    pub fn x() -> ComplexMatrix {
        m([[O, ONE], [ONE, O]])
    }

    pub fn y() -> ComplexMatrix {
        m([[O, -I], [I, O]])
    }

    pub fn z() -> ComplexMatrix {
        m([[ONE, O], [O, -ONE]])
    }
}

/// A Hermitian matrix together with its spectral decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
    spectral: SpectralData,
}

impl HermitianOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let spectral = hermitian_eigendecomposition(&matrix, HERMITIAN_TOL)?;
        Ok(Self { matrix, spectral })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn spectral(&self) -> &SpectralData {
        &self.spectral
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }
}

/// The measured observable `A`; its eigenvectors `|ψ_n⟩` label the outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable(HermitianOperator);

impl Observable {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        HermitianOperator::new(matrix).map(Self)
    }
}

impl Deref for Observable {
    type Target = HermitianOperator;
    fn deref(&self) -> &HermitianOperator {
        &self.0
    }
}

/// The free Hamiltonian `H` (ħ = 1); eigenpairs `(E_m, |φ_m⟩)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian(HermitianOperator);

impl Hamiltonian {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        HermitianOperator::new(matrix).map(Self)
    }
}

impl Deref for Hamiltonian {
    type Target = HermitianOperator;
    fn deref(&self) -> &HermitianOperator {
        &self.0
    }
}

/// A pure state. States produced by non-unitary evolution carry the
/// `normalized == false` tag.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: DVector<C64>,
    normalized: bool,
}

impl StateVector {
    /// Wraps amplitudes whose norm is 1 within [`NORM_TOL`].
    pub fn normalized(amplitudes: DVector<C64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::UnnormalizedInput { norm });
        }
        Ok(Self {
            amplitudes,
            normalized: true,
        })
    }

    pub fn unnormalized(amplitudes: DVector<C64>) -> Self {
        Self {
            amplitudes,
            normalized: false,
        }
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// `|⟨ψ_k|self⟩|²` for every eigenvector of `a`, without any
    /// normalization check.
    pub fn outcome_weights(&self, a: &Observable) -> Result<Vec<f64>> {
        check_dim(a.dim(), self.dim())?;
        let coeffs = a.spectral().eigenvectors().adjoint() * &self.amplitudes;
        Ok(coeffs.iter().map(|z| z.norm_sqr()).collect())
    }
}

/// Doubly stochastic matrix of squared overlaps between two orthonormal
/// bases. Rows are labelled by the first basis, columns by the second.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    entries: DMatrix<f64>,
}

impl TransitionMatrix {
    /// Builds `|amplitudes_ij|²`; the amplitude matrix must be unitary to the
    /// extent that all row and column sums land within [`STOCHASTIC_TOL`]
    /// of 1.
    pub fn from_unitary_amplitudes(amplitudes: &DMatrix<C64>) -> Result<Self> {
        let tm = Self {
            entries: amplitudes.map(|z| z.norm_sqr()),
        };
        let defect = tm.stochastic_defect();
        if defect > STOCHASTIC_TOL {
            return Err(Error::NumericalFailure(format!(
                "transition matrix is not doubly stochastic (defect {defect:e})"
            )));
        }
        Ok(tm)
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[(row, col)]
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.entries.row_iter().map(|r| r.sum()).collect()
    }

    pub fn column_sums(&self) -> Vec<f64> {
        self.entries.column_iter().map(|c| c.sum()).collect()
    }

    /// Largest deviation of any row or column sum from 1.
    pub fn stochastic_defect(&self) -> f64 {
        self.row_sums()
            .into_iter()
            .chain(self.column_sums())
            .map(|s| (s - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// How the weights of an [`OutcomeDistribution`] relate to a probability
/// vector.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistributionMode {
    #[default]
    /// Weights sum to 1.
    Normalized,
    /// Raw weights exactly as the closed-form expressions produce them; under
    /// damped evolution they sum to less than 1.
    PaperLiteral,
}

impl DistributionMode {
    pub fn as_str(self) -> &'static str {
        match self {
            DistributionMode::Normalized => "normalized",
            DistributionMode::PaperLiteral => "paper_literal",
        }
    }
}

/// Nonnegative weights over the outcomes of a measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    weights: Vec<f64>,
    mode: DistributionMode,
}

impl OutcomeDistribution {
    /// Validates and wraps `weights`.
    ///
    /// Negatives down to `-1e-12` are clamped to zero, anything below is
    /// [`Error::NegativeWeight`]. In normalized mode the sum must be 1 within
    /// `1e-9` and weights are clamped to at most 1.
    pub fn new(mut weights: Vec<f64>, mode: DistributionMode) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidArgument("empty distribution".into()));
        }
        for (index, w) in weights.iter_mut().enumerate() {
            if !w.is_finite() {
                return Err(Error::NumericalFailure(format!(
                    "non-finite weight at outcome {index}"
                )));
            }
            if *w < 0.0 {
                if *w < -NEGATIVE_CLAMP {
                    return Err(Error::NegativeWeight { index, value: *w });
                }
                *w = 0.0;
            }
        }
        if mode == DistributionMode::Normalized {
            let total: f64 = weights.iter().sum();
            if (total - 1.0).abs() > STOCHASTIC_TOL {
                return Err(Error::NumericalFailure(format!(
                    "normalized distribution sums to {total}"
                )));
            }
            for (index, w) in weights.iter_mut().enumerate() {
                if *w > 1.0 {
                    if *w > 1.0 + NEGATIVE_CLAMP {
                        return Err(Error::ProbabilityOutOfRange { index, value: *w });
                    }
                    *w = 1.0;
                }
            }
        }
        Ok(Self { weights, mode })
    }

    /// Point mass on `outcome`.
    pub fn delta(dim: usize, outcome: usize) -> Result<Self> {
        if outcome >= dim {
            return Err(Error::IndexOutOfRange {
                index: outcome,
                dim,
            });
        }
        let mut w = vec![0.0; dim];
        w[outcome] = 1.0;
        Self::new(w, DistributionMode::Normalized)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, outcome: usize) -> f64 {
        self.weights[outcome]
    }

    pub fn mode(&self) -> DistributionMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Outcome with the largest weight (lowest index on ties).
    pub fn argmax(&self) -> usize {
        self.weights
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, &w)| {
                if w > best.1 {
                    (i, w)
                } else {
                    best
                }
            })
            .0
    }

    /// Half the L1 distance between the weight vectors.
    pub fn total_variation(&self, other: &OutcomeDistribution) -> Result<f64> {
        check_dim(self.len(), other.len())?;
        Ok(0.5
            * self
                .weights
                .iter()
                .zip(&other.weights)
                .map(|(p, q)| (p - q).abs())
                .sum::<f64>())
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

pub(crate) fn check_index(index: usize, dim: usize) -> Result<()> {
    if index >= dim {
        return Err(Error::IndexOutOfRange { index, dim });
    }
    Ok(())
}

/// `P_nm = |⟨ψ_n|φ_m⟩|²` with `n` indexing eigenvectors of `a` and `m`
/// eigenvectors of `h`.
pub fn transition_matrix(a: &Observable, h: &Hamiltonian) -> Result<TransitionMatrix> {
    check_dim(a.dim(), h.dim())?;
    let overlaps = a.spectral().eigenvectors().adjoint() * h.spectral().eigenvectors();
    TransitionMatrix::from_unitary_amplitudes(&overlaps)
}

/// The eigenstate `|ψ_n⟩` of `a`.
pub fn prepare_eigenstate(a: &Observable, n: usize) -> Result<StateVector> {
    check_index(n, a.dim())?;
    StateVector::normalized(a.spectral().eigenvector(n))
}

/// Born-rule probabilities `|⟨ψ_k|state⟩|²` of measuring `a`.
pub fn born_distribution(state: &StateVector, a: &Observable) -> Result<OutcomeDistribution> {
    check_dim(a.dim(), state.dim())?;
    let norm = state.norm();
    if !state.is_normalized() || (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::UnnormalizedInput { norm });
    }
    OutcomeDistribution::new(state.outcome_weights(a)?, DistributionMode::Normalized)
}

/// `XY − YX`.
pub fn commutator(x: &ComplexMatrix, y: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_dim(x.dim(), y.dim())?;
    Ok(&(x * y) - &(y * x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::propagator;
    use crate::test_util::{random_complex, random_hermitian, random_state};
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn obs(m: ComplexMatrix) -> Observable {
        Observable::new(m).unwrap()
    }

    fn ham(m: ComplexMatrix) -> Hamiltonian {
        Hamiltonian::new(m).unwrap()
    }

    #[test]
    fn same_basis_gives_identity_transition() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let m = random_hermitian(&mut rng, 4);
        let p = transition_matrix(&obs(m.clone()), &ham(m)).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(p.get(i, j), expected, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn sigma_z_against_sigma_x_is_uniform() {
        let p = transition_matrix(&obs(pauli::z()), &ham(pauli::x())).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(p.get(i, j), 0.5, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn random_pair_is_doubly_stochastic() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = obs(random_hermitian(&mut rng, 5));
        let h = ham(random_hermitian(&mut rng, 5));
        let p = transition_matrix(&a, &h).unwrap();
        // independent summation over the raw overlaps
        for n in 0..5 {
            let row: f64 = (0..5)
                .map(|m| {
                    a.spectral()
                        .eigenvector(n)
                        .dotc(&h.spectral().eigenvector(m))
                        .norm_sqr()
                })
                .sum();
            assert_abs_diff_eq!(row, 1.0, epsilon = 1e-9);
        }
        assert!(p.stochastic_defect() <= 1e-9);
        assert!(p
            .entries()
            .iter()
            .all(|&x| (0.0..=1.0 + 1e-12).contains(&x)));
    }

    #[test]
    fn transition_dimension_mismatch() {
        let a = obs(pauli::z());
        let h = ham(ComplexMatrix::identity(3));
        assert_eq!(
            transition_matrix(&a, &h),
            Err(Error::DimensionMismatch {
                expected: 2,
                found: 3
            })
        );
    }

    #[test]
    fn eigenstates_of_paulis() {
        let up = prepare_eigenstate(&obs(pauli::z()), 1).unwrap();
        assert!((up.amplitudes()[0] - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(up.amplitudes()[1].norm() < 1e-15);

        let plus = prepare_eigenstate(&obs(pauli::x()), 1).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((plus.amplitudes()[0] - C64::new(r, 0.0)).norm() < 1e-14);
        assert!((plus.amplitudes()[1] - C64::new(r, 0.0)).norm() < 1e-14);

        assert_eq!(
            prepare_eigenstate(&obs(pauli::x()), 2),
            Err(Error::IndexOutOfRange { index: 2, dim: 2 })
        );
    }

    #[test]
    fn prepared_state_satisfies_eigen_relation() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let a = obs(random_hermitian(&mut rng, 6));
        for n in 0..6 {
            let psi = prepare_eigenstate(&a, n).unwrap();
            let lhs = a.matrix().apply(psi.amplitudes());
            let rhs = psi.amplitudes() * C64::new(a.spectral().eigenvalue(n), 0.0);
            assert!((lhs - rhs).norm() <= 1e-9);
        }
    }

    #[test]
    fn born_of_eigenstate_is_delta() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let a = obs(random_hermitian(&mut rng, 4));
        let psi = prepare_eigenstate(&a, 2).unwrap();
        let p = born_distribution(&psi, &a).unwrap();
        assert_eq!(p.argmax(), 2);
        assert_abs_diff_eq!(p.weight(2), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn born_of_plus_state_in_z_basis() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let psi =
            StateVector::normalized(DVector::from_vec(vec![C64::new(r, 0.0), C64::new(r, 0.0)]))
                .unwrap();
        let p = born_distribution(&psi, &obs(pauli::z())).unwrap();
        assert_abs_diff_eq!(p.weight(0), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(p.weight(1), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn born_completeness_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for d in 2..=6 {
            let a = obs(random_hermitian(&mut rng, d));
            let psi = random_state(&mut rng, d);
            let p = born_distribution(&psi, &a).unwrap();
            assert_abs_diff_eq!(p.total(), 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn born_rejects_unnormalized() {
        let psi = StateVector::unnormalized(DVector::from_vec(vec![
            C64::new(0.5, 0.0),
            C64::new(0.0, 0.0),
        ]));
        assert!(matches!(
            born_distribution(&psi, &obs(pauli::z())),
            Err(Error::UnnormalizedInput { .. })
        ));
        assert!(StateVector::normalized(psi.amplitudes().clone()).is_err());
    }

    #[test]
    fn born_after_unitary_evolution_sums_to_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let a = obs(random_hermitian(&mut rng, 5));
        let h = ham(random_hermitian(&mut rng, 5));
        let psi = prepare_eigenstate(&a, 0).unwrap();
        for t in [0.0, 0.3, 1.7, -4.0, 25.0] {
            let u = propagator(h.spectral(), t).unwrap();
            let evolved = StateVector::normalized(u.apply(psi.amplitudes())).unwrap();
            assert_abs_diff_eq!(
                born_distribution(&evolved, &a).unwrap().total(),
                1.0,
                epsilon = 1e-10
            );
        }
    }

    #[test]
    fn commutator_cases() {
        let x = pauli::x();
        assert!(commutator(&x, &x).unwrap().max_norm() == 0.0);

        let xy = commutator(&pauli::x(), &pauli::y()).unwrap();
        let expected = pauli::z().scale(C64::new(0.0, 2.0));
        assert!(xy.max_abs_diff(&expected) < 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(16);
        let p = random_complex(&mut rng, 4);
        let q = random_complex(&mut rng, 4);
        let pq = commutator(&p, &q).unwrap();
        let qp = commutator(&q, &p).unwrap();
        assert!((&pq + &qp).max_norm() < 1e-14);

        assert!(commutator(&p, &ComplexMatrix::identity(2)).is_err());
    }

    #[test]
    fn commuting_nondegenerate_pair_gives_permutation() {
        let h = ham(ComplexMatrix::from_real_rows(&[
            vec![3.0, 0.0, 0.0],
            vec![0.0, -1.0, 0.0],
            vec![0.0, 0.0, 0.5],
        ])
        .unwrap());
        let a = obs(ComplexMatrix::from_real_rows(&[
            vec![0.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 2.0],
        ])
        .unwrap());
        let p = transition_matrix(&a, &h).unwrap();
        assert!(p
            .entries()
            .iter()
            .all(|&x| x.abs() < 1e-9 || (x - 1.0).abs() < 1e-9));
    }

    #[test]
    fn distribution_validation() {
        let d = OutcomeDistribution::new(vec![-5e-13, 1.0], DistributionMode::Normalized).unwrap();
        assert_eq!(d.weights(), &[0.0, 1.0]);
        assert_eq!(
            OutcomeDistribution::new(vec![-1e-6, 1.0], DistributionMode::PaperLiteral),
            Err(Error::NegativeWeight {
                index: 0,
                value: -1e-6
            })
        );
        assert!(OutcomeDistribution::new(vec![0.3, 0.3], DistributionMode::Normalized).is_err());
        assert!(OutcomeDistribution::new(vec![0.3, 0.3], DistributionMode::PaperLiteral).is_ok());
        assert!(OutcomeDistribution::new(vec![f64::NAN], DistributionMode::PaperLiteral).is_err());
        assert!(OutcomeDistribution::delta(2, 2).is_err());
    }

    #[test]
    fn total_variation_of_deltas() {
        let a = OutcomeDistribution::delta(3, 0).unwrap();
        let b = OutcomeDistribution::delta(3, 2).unwrap();
        assert_eq!(a.total_variation(&b).unwrap(), 1.0);
        assert_eq!(a.total_variation(&a).unwrap(), 0.0);
    }
}
