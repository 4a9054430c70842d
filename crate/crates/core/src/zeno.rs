//! Free evolution and quantum Zeno dynamics.
//!
//! The system is prepared in an eigenstate `|ψ_n0⟩` of the observable `A`,
//! evolves under `H`, and is measured in the eigenbasis of `A` at times
//! `τ, 2τ, …, Nτ = T`. Two families of results live here:
//!
//! * the short-time closed forms for the survival probability and the
//!   large-`N` entropy, evaluated exactly as written, and
//! * the exact outcome chain: every measurement is a rank-1 collapse, so the
//!   outcome sequence is a Markov chain with kernel
//!   `M_kj(τ) = |⟨ψ_k|U(τ)|ψ_j⟩|²`, and the `N`-th outcome is distributed as
//!   `M^N e_n0`. A seeded Monte Carlo sampler of the same chain serves as an
//!   independent check.
//!
//! The exact chain is what the entropy-decrease claims are measured on.

use log::{debug, warn};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entropy::{shannon_entropy, shannon_entropy_weights, EntropyValue, LogBase};
use crate::error::{Error, Result};
use crate::linalg::{propagator, C64};
use crate::model::{
    born_distribution, check_dim, check_index, prepare_eigenstate, transition_matrix,
    DistributionMode, Hamiltonian, Observable, OutcomeDistribution, StateVector, TransitionMatrix,
    NEGATIVE_CLAMP,
};

/// Short-time expansions are flagged unreliable above this value of
/// `τ · max|ω_mk|`.
pub const SHORT_TIME_LIMIT: f64 = 0.5;

/// `N` equally spaced measurements over `[0, T]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZenoSchedule {
    total_time: f64,
    num_measurements: u64,
}

impl ZenoSchedule {
    pub fn new(total_time: f64, num_measurements: u64) -> Result<Self> {
        if !(total_time.is_finite() && total_time > 0.0) {
            return Err(Error::InvalidSchedule(format!(
                "total time must be positive and finite, got {total_time}"
            )));
        }
        if num_measurements == 0 {
            return Err(Error::InvalidSchedule(
                "number of measurements must be at least 1".into(),
            ));
        }
        Ok(Self {
            total_time,
            num_measurements,
        })
    }

    pub fn total_time(&self) -> f64 {
        self.total_time
    }

    pub fn num_measurements(&self) -> u64 {
        self.num_measurements
    }

    /// Interval between measurements.
    pub fn tau(&self) -> f64 {
        self.total_time / self.num_measurements as f64
    }

    /// `τ · max|ω_mk|`.
    pub fn short_time_parameter(&self, freqs: &FrequencyTable) -> f64 {
        self.tau() * freqs.max_abs()
    }

    pub fn is_short_time_reliable(&self, freqs: &FrequencyTable) -> bool {
        self.short_time_parameter(freqs) <= SHORT_TIME_LIMIT
    }
}

/// Transition frequencies `ω_mk = E_m − E_k` (ħ = 1).
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyTable(DMatrix<f64>);

impl FrequencyTable {
    pub fn new(h: &Hamiltonian) -> Self {
        let e = h.spectral().eigenvalues();
        Self(DMatrix::from_fn(e.len(), e.len(), |m, k| e[m] - e[k]))
    }

    pub fn get(&self, m: usize, k: usize) -> f64 {
        self.0[(m, k)]
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|w| w.abs()).fold(0.0, f64::max)
    }
}

/// Maps a computed probability into `[0, 1]`; anything further than `1e-12`
/// outside is an error.
fn clamp_probability(value: f64) -> Result<f64> {
    if !(-NEGATIVE_CLAMP..=1.0 + NEGATIVE_CLAMP).contains(&value) {
        return Err(Error::ProbabilityOutOfRange { index: 0, value });
    }
    let clamped = value.clamp(0.0, 1.0);
    if clamped != value {
        debug!("clamped probability {value:e} to {clamped}");
    }
    Ok(clamped)
}

fn evolved_state(h: &Hamiltonian, a: &Observable, n0: usize, t: f64) -> Result<StateVector> {
    check_dim(a.dim(), h.dim())?;
    let psi = prepare_eigenstate(a, n0)?;
    let u = propagator(h.spectral(), t)?;
    StateVector::normalized(u.apply(psi.amplitudes()))
}

/// Survival amplitude `c_n(t) = ⟨ψ_n|e^{−iHt}|ψ_n⟩` of the prepared state.
pub fn survival_amplitude(h: &Hamiltonian, a: &Observable, n: usize, t: f64) -> Result<C64> {
    let evolved = evolved_state(h, a, n, t)?;
    Ok(a.spectral().eigenvector(n).dotc(evolved.amplitudes()))
}

/// `Σ_{mk} cos(ω_mk t) P_nm P_nk`: the survival probability of `|ψ_n⟩`
/// written through the transition matrix and the frequency table.
pub fn survival_from_spectrum(
    p: &TransitionMatrix,
    freqs: &FrequencyTable,
    n: usize,
    t: f64,
) -> f64 {
    let d = p.dim();
    let mut sum = 0.0;
    for m in 0..d {
        for k in 0..d {
            sum += (freqs.get(m, k) * t).cos() * p.get(n, m) * p.get(n, k);
        }
    }
    sum
}

/// `Σ_{mk} ω_mk² P_nm P_nk`, which equals `2 Var_n(H)`.
pub fn frequency_moment(p: &TransitionMatrix, freqs: &FrequencyTable, n: usize) -> f64 {
    let d = p.dim();
    let mut sum = 0.0;
    for m in 0..d {
        for k in 0..d {
            let w = freqs.get(m, k);
            sum += w * w * p.get(n, m) * p.get(n, k);
        }
    }
    sum
}

/// `⟨ψ|H²|ψ⟩ − ⟨ψ|H|ψ⟩²` for a normalized state.
pub fn energy_variance(h: &Hamiltonian, state: &StateVector) -> Result<f64> {
    check_dim(h.dim(), state.dim())?;
    let h_psi = h.matrix().apply(state.amplitudes());
    let mean = state.amplitudes().dotc(&h_psi).re;
    let second = h_psi.norm_squared();
    Ok(second - mean * mean)
}

/// Outcome distribution `p_k(t) = |⟨ψ_k|U(t)|ψ_n0⟩|²` after free evolution.
pub fn free_evolution_distribution(
    h: &Hamiltonian,
    a: &Observable,
    n0: usize,
    t: f64,
) -> Result<OutcomeDistribution> {
    born_distribution(&evolved_state(h, a, n0, t)?, a)
}

pub fn free_evolution_entropy(
    h: &Hamiltonian,
    a: &Observable,
    n0: usize,
    t: f64,
    base: LogBase,
) -> Result<EntropyValue> {
    shannon_entropy(&free_evolution_distribution(h, a, n0, t)?, base)
}

/// `−Σ_n s_n ln s_n` with `s_n = Σ_{mk} cos(ω_mk t) P_nm P_nk`, the survival
/// probability of each possible preparation `n`, in nats.
///
/// The `s_n` are not a distribution over outcomes of one experiment; this is
/// the closed-form expression evaluated term by term.
pub fn free_evolution_entropy_paper_literal(
    h: &Hamiltonian,
    a: &Observable,
    t: f64,
) -> Result<f64> {
    let p = transition_matrix(a, h)?;
    let freqs = FrequencyTable::new(h);
    let survivals: Vec<f64> = (0..p.dim())
        .map(|n| survival_from_spectrum(&p, &freqs, n, t))
        .collect();
    shannon_entropy_weights(&survivals)
}

/// Survival after one measurement at `τ`, short-time form:
/// `1 − (τ²/2) Σ_{mk} ω_mk² P_nm P_nk`.
pub fn survival_short_time(h: &Hamiltonian, a: &Observable, n0: usize, tau: f64) -> Result<f64> {
    if !(tau.is_finite() && tau >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tau must be nonnegative, got {tau}"
        )));
    }
    check_index(n0, a.dim())?;
    let p = transition_matrix(a, h)?;
    let freqs = FrequencyTable::new(h);
    Ok(1.0 - 0.5 * tau * tau * frequency_moment(&p, &freqs, n0))
}

/// Exact survival `|⟨ψ_n0|U(τ)|ψ_n0⟩|²` after one measurement.
pub fn survival_exact(h: &Hamiltonian, a: &Observable, n0: usize, tau: f64) -> Result<f64> {
    survival_amplitude(h, a, n0, tau).map(|c| c.norm_sqr())
}

/// Which closed form to use for the survival after `N` measurements.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZenoFormula {
    /// The one-step short-time survival at `τ = T/N`, raised to the `N`:
    /// `(1 − (T/N)² Var)^N`.
    #[default]
    Corrected,
    /// `(1 − (T²/2N) Σ_{mk} ω_mk² P_nm P_nk)^N` as printed.
    PaperLiteral,
}

impl ZenoFormula {
    pub fn as_str(self) -> &'static str {
        match self {
            ZenoFormula::Corrected => "corrected",
            ZenoFormula::PaperLiteral => "paper_literal",
        }
    }
}

/// Survival probability after `N` measurements from the short-time closed
/// form selected by `formula`.
///
/// A base `1 − x` with `x > 1` lies outside the expansion's validity and is
/// reported as [`Error::InvalidSchedule`].
pub fn zeno_survival(
    h: &Hamiltonian,
    a: &Observable,
    n0: usize,
    schedule: &ZenoSchedule,
    formula: ZenoFormula,
) -> Result<f64> {
    check_index(n0, a.dim())?;
    let p = transition_matrix(a, h)?;
    let freqs = FrequencyTable::new(h);
    let moment = frequency_moment(&p, &freqs, n0);
    let n = schedule.num_measurements() as f64;
    let t = schedule.total_time();
    let decrement = match formula {
        ZenoFormula::Corrected => schedule.tau().powi(2) * 0.5 * moment,
        ZenoFormula::PaperLiteral => t * t / (2.0 * n) * moment,
    };
    if decrement >= 1.0 {
        return Err(Error::InvalidSchedule(format!(
            "short-time decrement {decrement} >= 1 ({} formula, N = {})",
            formula.as_str(),
            schedule.num_measurements()
        )));
    }
    let value = (1.0 - decrement).powf(n);
    clamp_probability(value)
}

/// Large-`N` entropy, evaluated as written:
/// `(T²/2N) Σ_n X_n exp(−(T²/2N) X_n)` with `X_n = Σ_{mk} ω_mk² P_nm P_nk`,
/// in nats. The sum runs over every preparation `n`.
pub fn zeno_entropy_asymptotic(
    h: &Hamiltonian,
    a: &Observable,
    schedule: &ZenoSchedule,
) -> Result<f64> {
    let p = transition_matrix(a, h)?;
    let freqs = FrequencyTable::new(h);
    let n = schedule.num_measurements() as f64;
    let t = schedule.total_time();
    let scale = t * t / (2.0 * n);
    let moments: Vec<f64> = (0..p.dim())
        .map(|i| frequency_moment(&p, &freqs, i))
        .collect();
    let max_var = moments.iter().fold(0.0f64, |m, &x| m.max(0.5 * x));
    if t * t * max_var / n > SHORT_TIME_LIMIT {
        warn!(
            "large-N entropy outside its regime: T^2 Var / N = {}",
            t * t * max_var / n
        );
    }
    Ok(scale * moments.iter().map(|&x| x * (-scale * x).exp()).sum::<f64>())
}

/// One-step kernel `M_kj(τ) = |⟨ψ_k|U(τ)|ψ_j⟩|²`: the probability that a
/// measurement at `τ` yields `k` given the previous outcome `j`. Columns index
/// the previous outcome.
pub fn zeno_kernel(h: &Hamiltonian, a: &Observable, tau: f64) -> Result<TransitionMatrix> {
    check_dim(a.dim(), h.dim())?;
    let u = propagator(h.spectral(), tau)?;
    let psi = a.spectral().eigenvectors();
    let amplitudes = psi.adjoint() * u.as_inner() * psi;
    TransitionMatrix::from_unitary_amplitudes(&amplitudes)
}

/// Exact distribution of the `N`-th measurement outcome: `M(τ)^N e_n0`.
pub fn zeno_chain_distribution(
    h: &Hamiltonian,
    a: &Observable,
    n0: usize,
    schedule: &ZenoSchedule,
) -> Result<OutcomeDistribution> {
    check_index(n0, a.dim())?;
    let kernel = zeno_kernel(h, a, schedule.tau())?;
    let mut power = kernel.entries().clone();
    let mut q = DVector::<f64>::zeros(kernel.dim());
    q[n0] = 1.0;
    let mut remaining = schedule.num_measurements();
    while remaining > 0 {
        if remaining & 1 == 1 {
            q = &power * q;
        }
        remaining >>= 1;
        if remaining > 0 {
            power = &power * &power;
        }
    }
    OutcomeDistribution::new(q.iter().copied().collect(), DistributionMode::Normalized)
}

pub fn zeno_chain_entropy(
    h: &Hamiltonian,
    a: &Observable,
    n0: usize,
    schedule: &ZenoSchedule,
    base: LogBase,
) -> Result<EntropyValue> {
    shannon_entropy(&zeno_chain_distribution(h, a, n0, schedule)?, base)
}

/// Samples `trials` measurement trajectories of the outcome chain and returns
/// the empirical distribution of the final outcome.
///
/// Trial `i` draws from ChaCha8 seeded with `seed` on stream `i`, so the
/// result depends only on `(seed, trials)` and not on thread scheduling.
pub fn monte_carlo_zeno(
    h: &Hamiltonian,
    a: &Observable,
    n0: usize,
    schedule: &ZenoSchedule,
    trials: u64,
    seed: u64,
) -> Result<OutcomeDistribution> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    check_index(n0, a.dim())?;
    let kernel = zeno_kernel(h, a, schedule.tau())?;
    let d = kernel.dim();
    // cumulative[j][k] = Σ_{i<=k} M_ij
    let cumulative: Vec<Vec<f64>> = (0..d)
        .map(|j| {
            let mut acc = 0.0;
            (0..d)
                .map(|k| {
                    acc += kernel.get(k, j);
                    acc
                })
                .collect()
        })
        .collect();
    let steps = schedule.num_measurements();

    let counts = (0..trials)
        .into_par_iter()
        .fold(
            || vec![0u64; d],
            |mut counts, trial| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(trial);
                let mut state = n0;
                for _ in 0..steps {
                    let u: f64 = rng.random();
                    let column = &cumulative[state];
                    state = column.iter().position(|&c| u < c).unwrap_or(d - 1);
                }
                counts[state] += 1;
                counts
            },
        )
        .reduce(
            || vec![0u64; d],
            |mut x, y| {
                x.iter_mut().zip(y).for_each(|(a, b)| *a += b);
                x
            },
        );
    let weights = counts.iter().map(|&c| c as f64 / trials as f64).collect();
    OutcomeDistribution::new(weights, DistributionMode::Normalized)
}
