//! Continuous measurement through a non-Hermitian effective Hamiltonian.
//!
//! Monitoring `A` with an apparatus that reads `a` with accuracy `Δa` at
//! information rate `f` is modelled by
//!
//! ```text
//! H_eff = H − i f g((A − a)/Δa),    |ψ(t)⟩ = e^{−i H_eff t} |ψ(0)⟩    (ħ = 1)
//! ```
//!
//! with `g ≥ 0`, `g(0) = 0` applied to `A` by spectral calculus. The
//! anti-Hermitian part is negative semidefinite, so norms only decay and the
//! outcome weights `|⟨ψ_k|ψ(t)⟩|²` sum to at most one.
//!
//! When `[H, u(A)]` commutes with both `H` and `A` the exponential splits as
//! `e^{X+Y} = e^X e^Y e^{−[X,Y]/2}` with `X = −iHt`, `Y = −f t u(A)`. Then
//! the survival of `|ψ_n⟩` is `e^{−2 f g_n t} |V_nn|²` with
//! `V = e^{−iHt} e^{−(i/2) f t² [H, u(A)]}`. That closed form is only used
//! after the commutator condition has been checked numerically.

use crate::entropy::{entropy_term, normalize, shannon_entropy, EntropyValue, LogBase};
use crate::error::{Error, Result};
use crate::linalg::{matrix_exp_general, ComplexMatrix, C64, EXP_TOL};
use crate::model::{
    check_dim, check_index, commutator, prepare_eigenstate, DistributionMode, Hamiltonian,
    Observable, OutcomeDistribution, StateVector,
};

/// Bound on `‖[[H, u], H]‖_max` and `‖[[H, u], A]‖_max` for the closed form.
pub const BCH_TOL: f64 = 1e-9;

// Grid on which a tabulated coupling function is checked for g >= 0.
const COUPLING_GRID: (f64, f64, usize) = (-50.0, 50.0, 10_001);

/// The apparatus response `g`.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum CouplingFunction {
    /// `g(x) = x²`.
    #[default]
    Quadratic,
    /// Piecewise-linear interpolation through `(x, g)` nodes, constant beyond
    /// the end nodes.
    Table(Vec<(f64, f64)>),
}

impl CouplingFunction {
    /// Builds a tabulated coupling function. Nodes must have strictly
    /// increasing finite `x`, nonnegative `g`, and a node at `x = 0` with
    /// `g = 0`.
    pub fn table(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidConfig(
                "coupling table needs at least two nodes".into(),
            ));
        }
        if points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(Error::InvalidConfig(
                "coupling table has non-finite nodes".into(),
            ));
        }
        if points.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidConfig(
                "coupling table abscissae must be strictly increasing".into(),
            ));
        }
        let g = Self::Table(points);
        g.validate()?;
        Ok(g)
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            CouplingFunction::Quadratic => x * x,
            CouplingFunction::Table(points) => {
                let first = points[0];
                let last = points[points.len() - 1];
                if x <= first.0 {
                    return first.1;
                }
                if x >= last.0 {
                    return last.1;
                }
                let i = points.partition_point(|p| p.0 <= x);
                let (x0, y0) = points[i - 1];
                let (x1, y1) = points[i];
                y0 + (y1 - y0) * (x - x0) / (x1 - x0)
            }
        }
    }

    /// Checks `g(0) = 0` and `g ≥ 0` on a fixed grid.
    pub fn validate(&self) -> Result<()> {
        if self.eval(0.0) != 0.0 {
            return Err(Error::InvalidConfig(format!(
                "coupling function must vanish at 0, got g(0) = {}",
                self.eval(0.0)
            )));
        }
        let (lo, hi, n) = COUPLING_GRID;
        for i in 0..n {
            let x = lo + (hi - lo) * i as f64 / (n - 1) as f64;
            let g = self.eval(x);
            if g.is_nan() || g < 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "coupling function is negative at x = {x}: g = {g}"
                )));
            }
        }
        Ok(())
    }
}

/// Parameters of the monitoring apparatus.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementConfig {
    rate: f64,
    readout: f64,
    accuracy: f64,
    coupling: CouplingFunction,
}

impl MeasurementConfig {
    /// `rate` is `f` (≥ 0; zero switches the measurement off), `readout` is
    /// `a`, `accuracy` is `Δa` (> 0).
    pub fn new(rate: f64, readout: f64, accuracy: f64, coupling: CouplingFunction) -> Result<Self> {
        if !(rate.is_finite() && rate >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "rate of information gain must be finite and nonnegative, got {rate}"
            )));
        }
        if !readout.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "readout must be finite, got {readout}"
            )));
        }
        if !(accuracy.is_finite() && accuracy > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "accuracy must be finite and positive, got {accuracy}"
            )));
        }
        coupling.validate()?;
        Ok(Self {
            rate,
            readout,
            accuracy,
            coupling,
        })
    }

    pub fn quadratic(rate: f64, readout: f64, accuracy: f64) -> Result<Self> {
        Self::new(rate, readout, accuracy, CouplingFunction::Quadratic)
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn readout(&self) -> f64 {
        self.readout
    }

    pub fn accuracy(&self) -> f64 {
        self.accuracy
    }

    pub fn coupling(&self) -> &CouplingFunction {
        &self.coupling
    }

    /// `g((a_n − a)/Δa)` for an eigenvalue `a_n`.
    pub fn coupling_at(&self, eigenvalue: f64) -> f64 {
        self.coupling
            .eval((eigenvalue - self.readout) / self.accuracy)
    }
}

/// `u(A) = g((A − a)/Δa) = Σ_n g((a_n − a)/Δa) |ψ_n⟩⟨ψ_n|`.
pub fn coupling_operator(a: &Observable, cfg: &MeasurementConfig) -> ComplexMatrix {
    a.spectral()
        .function_of(|x| C64::new(cfg.coupling_at(x), 0.0))
}

/// `H − i f u(A)`; only constructible through [`effective_hamiltonian`], so
/// its anti-Hermitian part is always negative semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveHamiltonian {
    matrix: ComplexMatrix,
}

impl EffectiveHamiltonian {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// `e^{−i H_eff t}` for `t ≥ 0`.
    pub fn evolution_operator(&self, t: f64) -> Result<ComplexMatrix> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "damped evolution needs a finite t >= 0, got {t}"
            )));
        }
        matrix_exp_general(&self.matrix.scale(C64::new(0.0, -t)), EXP_TOL)
    }
}

pub fn effective_hamiltonian(
    h: &Hamiltonian,
    a: &Observable,
    cfg: &MeasurementConfig,
) -> Result<EffectiveHamiltonian> {
    check_dim(h.dim(), a.dim())?;
    let damping = coupling_operator(a, cfg).scale(C64::new(0.0, -cfg.rate()));
    Ok(EffectiveHamiltonian {
        matrix: h.matrix() + &damping,
    })
}

/// `e^{−i H_eff t} |ψ0⟩`, tagged unnormalized.
pub fn evolve_continuous(
    h_eff: &EffectiveHamiltonian,
    psi0: &StateVector,
    t: f64,
) -> Result<StateVector> {
    check_dim(h_eff.dim(), psi0.dim())?;
    let u = h_eff.evolution_operator(t)?;
    Ok(StateVector::unnormalized(u.apply(psi0.amplitudes())))
}

/// Outcome weights `|⟨ψ_k|e^{−i H_eff t}|ψ_n0⟩|²`, raw in paper-literal mode
/// or divided by their total in normalized mode.
pub fn continuous_distribution(
    h: &Hamiltonian,
    a: &Observable,
    n0: usize,
    cfg: &MeasurementConfig,
    t: f64,
    mode: DistributionMode,
) -> Result<OutcomeDistribution> {
    let h_eff = effective_hamiltonian(h, a, cfg)?;
    let psi0 = prepare_eigenstate(a, n0)?;
    let weights = evolve_continuous(&h_eff, &psi0, t)?.outcome_weights(a)?;
    let raw = OutcomeDistribution::new(weights, DistributionMode::PaperLiteral)?;
    match mode {
        DistributionMode::PaperLiteral => Ok(raw),
        DistributionMode::Normalized => normalize(&raw),
    }
}

/// Survival weight of every preparation: `|⟨ψ_n|e^{−i H_eff t}|ψ_n⟩|²`.
pub fn continuous_survivals(
    h: &Hamiltonian,
    a: &Observable,
    cfg: &MeasurementConfig,
    t: f64,
) -> Result<Vec<f64>> {
    let u = effective_hamiltonian(h, a, cfg)?.evolution_operator(t)?;
    let psi = a.spectral().eigenvectors();
    let in_a_basis = psi.adjoint() * u.as_inner() * psi;
    Ok(in_a_basis.diagonal().iter().map(|z| z.norm_sqr()).collect())
}

/// `max(‖[[H, u], H]‖_max, ‖[[H, u], A]‖_max)`.
pub fn bch_residual(h: &Hamiltonian, a: &Observable, cfg: &MeasurementConfig) -> Result<f64> {
    check_dim(h.dim(), a.dim())?;
    let c = commutator(h.matrix(), &coupling_operator(a, cfg))?;
    let with_h = commutator(&c, h.matrix())?.max_norm();
    let with_a = commutator(&c, a.matrix())?.max_norm();
    Ok(with_h.max(with_a))
}

fn require_bch(h: &Hamiltonian, a: &Observable, cfg: &MeasurementConfig) -> Result<()> {
    let residual = bch_residual(h, a, cfg)?;
    if residual > BCH_TOL {
        return Err(Error::AssumptionViolated {
            residual,
            tol: BCH_TOL,
        });
    }
    Ok(())
}

/// `e^{−iHt} e^{−(i/2) f s [H, u(A)]}` with `s = t²` (exact split) or
/// `s = t` (printed form).
fn split_factor(
    h: &Hamiltonian,
    a: &Observable,
    cfg: &MeasurementConfig,
    t: f64,
    s: f64,
) -> Result<ComplexMatrix> {
    let c = commutator(h.matrix(), &coupling_operator(a, cfg))?;
    let free = crate::linalg::propagator(h.spectral(), t)?;
    let correction = matrix_exp_general(&c.scale(C64::new(0.0, -0.5 * cfg.rate() * s)), EXP_TOL)?;
    Ok(&free * &correction)
}

/// `V = e^{−iHt} e^{−(i/2) f t² [H, u(A)]}` expressed in the eigenbasis of
/// `A`, i.e. `V_kn = ⟨ψ_k|V|ψ_n⟩`.
pub fn split_operator(
    h: &Hamiltonian,
    a: &Observable,
    cfg: &MeasurementConfig,
    t: f64,
) -> Result<ComplexMatrix> {
    check_dim(h.dim(), a.dim())?;
    let v = split_factor(h, a, cfg, t, t * t)?;
    let psi = a.spectral().eigenvectors();
    ComplexMatrix::new(psi.adjoint() * v.as_inner() * psi)
}

/// Closed-form outcome weights from preparation `n0` when the commutator
/// condition holds: `e^{−2 f g_n0 t} |V_{k n0}|²` (paper-literal mode). The
/// `n0` component is the survival `e^{−2 f g_n0 t} |V_{n0 n0}|²`.
pub fn commuting_case_distribution(
    h: &Hamiltonian,
    a: &Observable,
    n0: usize,
    cfg: &MeasurementConfig,
    t: f64,
) -> Result<OutcomeDistribution> {
    check_index(n0, a.dim())?;
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "t must be finite and >= 0, got {t}"
        )));
    }
    require_bch(h, a, cfg)?;
    let v = split_operator(h, a, cfg, t)?;
    let decay = (-2.0 * cfg.rate() * cfg.coupling_at(a.spectral().eigenvalue(n0)) * t).exp();
    let weights = (0..a.dim())
        .map(|k| decay * v.get(k, n0).norm_sqr())
        .collect();
    OutcomeDistribution::new(weights, DistributionMode::PaperLiteral)
}

/// Closed-form survival data for every preparation `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormSurvival {
    /// `u_n = g((a_n − a)/Δa) · t`.
    pub exposure: Vec<f64>,
    /// `|V_nn|²`.
    pub overlap: Vec<f64>,
    pub rate: f64,
}

impl ClosedFormSurvival {
    /// `p_n = e^{−2 f u_n} |V_nn|²`.
    pub fn weights(&self) -> Vec<f64> {
        self.exposure
            .iter()
            .zip(&self.overlap)
            .map(|(u, v)| (-2.0 * self.rate * u).exp() * v)
            .collect()
    }

    /// `2f Σ_n u_n e^{−2f u_n} |V_nn|² − Σ_n e^{−2f u_n} |V_nn|² ln |V_nn|²`,
    /// in nats.
    pub fn entropy(&self) -> f64 {
        let f = self.rate;
        self.exposure
            .iter()
            .zip(&self.overlap)
            .map(|(&u, &v)| {
                let decay = (-2.0 * f * u).exp();
                2.0 * f * u * decay * v + decay * entropy_term(v)
            })
            .sum()
    }
}

pub fn commuting_case_survival(
    h: &Hamiltonian,
    a: &Observable,
    cfg: &MeasurementConfig,
    t: f64,
) -> Result<ClosedFormSurvival> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "t must be finite and >= 0, got {t}"
        )));
    }
    require_bch(h, a, cfg)?;
    let v = split_operator(h, a, cfg, t)?;
    let d = a.dim();
    Ok(ClosedFormSurvival {
        exposure: (0..d)
            .map(|n| cfg.coupling_at(a.spectral().eigenvalue(n)) * t)
            .collect(),
        overlap: (0..d).map(|n| v.get(n, n).norm_sqr()).collect(),
        rate: cfg.rate(),
    })
}

/// Largest `||V_nn|² − |V'_nn|²|` between the exact split (commutator
/// exponent `∝ t²`) and the variant with the exponent linear in `t`.
pub fn printed_form_mismatch(
    h: &Hamiltonian,
    a: &Observable,
    cfg: &MeasurementConfig,
    t: f64,
) -> Result<f64> {
    check_dim(h.dim(), a.dim())?;
    let psi = a.spectral().eigenvectors();
    let exact = psi.adjoint() * split_factor(h, a, cfg, t, t * t)?.as_inner() * psi;
    let printed = psi.adjoint() * split_factor(h, a, cfg, t, t)?.as_inner() * psi;
    Ok((0..a.dim())
        .map(|n| (exact[(n, n)].norm_sqr() - printed[(n, n)].norm_sqr()).abs())
        .fold(0.0, f64::max))
}

/// Which preparations an entropy sums over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntropyScope {
    /// Outcome weights of a single experiment prepared in `|ψ_n0⟩`.
    Prepared(usize),
    /// Survival weight of each preparation `n`, one term per `n`.
    AllPreparations,
}

/// Entropy of the continuous-measurement weights.
///
/// * normalized mode: Shannon entropy of the weights divided by their sum;
/// * paper-literal mode: `−Σ p ln p` on the raw weights. For
///   [`EntropyScope::AllPreparations`] with the commutator condition
///   satisfied it is evaluated through [`ClosedFormSurvival::entropy`];
///   otherwise from the survivals of the direct exponential.
pub fn continuous_entropy(
    h: &Hamiltonian,
    a: &Observable,
    scope: EntropyScope,
    cfg: &MeasurementConfig,
    t: f64,
    mode: DistributionMode,
    base: LogBase,
) -> Result<EntropyValue> {
    let weights = match scope {
        EntropyScope::Prepared(n0) => {
            continuous_distribution(h, a, n0, cfg, t, DistributionMode::PaperLiteral)?
        }
        EntropyScope::AllPreparations => {
            if mode == DistributionMode::PaperLiteral && bch_residual(h, a, cfg)? <= BCH_TOL {
                let nats = commuting_case_survival(h, a, cfg, t)?.entropy();
                return Ok(EntropyValue::from_nats(nats, base));
            }
            OutcomeDistribution::new(
                continuous_survivals(h, a, cfg, t)?,
                DistributionMode::PaperLiteral,
            )?
        }
    };
    match mode {
        DistributionMode::PaperLiteral => shannon_entropy(&weights, base),
        DistributionMode::Normalized => shannon_entropy(&normalize(&weights)?, base),
    }
}
