//! Measurement-outcome distributions and their Shannon entropy for small
//! quantum systems, under three protocols:
//!
//! * free unitary evolution ([`zeno::free_evolution_distribution`]),
//! * `N` projective measurements spread over `[0, T]`
//!   ([`zeno::zeno_chain_distribution`], plus the short-time closed forms),
//! * continuous monitoring through a non-Hermitian effective Hamiltonian
//!   ([`continuous::continuous_distribution`]).
//!
//! ħ = 1 throughout. Outcomes are labelled by the index of the observable's
//! eigenvalue in ascending order.
//!
//! ```
//! use zeno_entropy::prelude::*;
//!
//! let h = Hamiltonian::new(pauli::x().scale(C64::new(0.5, 0.0))).unwrap();
//! let a = Observable::new(pauli::z()).unwrap();
//! let s = |n| {
//!     let schedule = ZenoSchedule::new(1.0, n).unwrap();
//!     zeno_chain_entropy(&h, &a, 1, &schedule, LogBase::Nats).unwrap().value()
//! };
//! assert!(s(1000) < s(10));
//! ```
//!
//! The `examples/` directory has one runnable program per capability, and the
//! `zeno-entropy` binary drives parameter sweeps from a JSON config.

pub mod cli;
pub mod config;
pub mod continuous;
pub mod entropy;
pub mod error;
pub mod experiment;
pub mod linalg;
pub mod model;
pub mod output;
pub mod presets;
pub mod zeno;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::continuous::{
        bch_residual, commuting_case_distribution, commuting_case_survival,
        continuous_distribution, continuous_entropy, effective_hamiltonian, evolve_continuous,
        CouplingFunction, EntropyScope, MeasurementConfig,
    };
    pub use crate::entropy::{normalize, shannon_entropy, EntropyValue, LogBase};
    pub use crate::error::{Error, Result};
    pub use crate::linalg::{
        hermitian_eigendecomposition, matrix_exp_general, propagator, ComplexMatrix, SpectralData,
        C64,
    };
    pub use crate::model::{
        born_distribution, commutator, pauli, prepare_eigenstate, transition_matrix,
        DistributionMode, Hamiltonian, Observable, OutcomeDistribution, StateVector,
        TransitionMatrix,
    };
    pub use crate::zeno::{
        free_evolution_distribution, free_evolution_entropy, monte_carlo_zeno, survival_exact,
        survival_short_time, zeno_chain_distribution, zeno_chain_entropy, zeno_entropy_asymptotic,
        zeno_survival, ZenoFormula, ZenoSchedule,
    };
}

#[cfg(test)]
pub(crate) mod test_util {
    use nalgebra::DMatrix;
    use rand::Rng;

    use crate::linalg::{ComplexMatrix, C64};
    use crate::model::StateVector;

    pub fn random_complex(rng: &mut impl Rng, d: usize) -> ComplexMatrix {
        ComplexMatrix::new(DMatrix::from_fn(d, d, |_, _| {
            C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        }))
        .unwrap()
    }

    pub fn random_hermitian(rng: &mut impl Rng, d: usize) -> ComplexMatrix {
        let m = random_complex(rng, d);
        (&m + &m.adjoint()).scale(C64::new(0.5, 0.0))
    }

    pub fn random_state(rng: &mut impl Rng, d: usize) -> StateVector {
        let v = nalgebra::DVector::from_fn(d, |_, _| {
            C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        StateVector::normalized(v.normalize()).unwrap()
    }
}
