//! Sweep driver: one [`ResultRow`] per point of the sweep grid.
//!
//! Points are ordered lexicographically over the axes `N, t, f, delta_a` (the
//! first axis varies slowest) and computed in parallel; the row order is the
//! grid order regardless of scheduling.

use log::{debug, info};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, Protocol};
use crate::continuous::{
    continuous_distribution, continuous_entropy, EntropyScope, MeasurementConfig,
};
use crate::entropy::{shannon_entropy, EntropyValue, LogBase};
use crate::error::{Error, Result};
use crate::model::DistributionMode;
use crate::presets::System;
use crate::zeno::{
    free_evolution_entropy, free_evolution_entropy_paper_literal, monte_carlo_zeno, survival_exact,
    zeno_chain_distribution, zeno_entropy_asymptotic, zeno_survival, FrequencyTable, ZenoFormula,
    ZenoSchedule,
};

/// Column order of the CSV output.
pub const COLUMNS: [&str; 15] = [
    "protocol",
    "preset",
    "n0",
    "N",
    "t",
    "f",
    "delta_a",
    "log_base",
    "distribution",
    "zeno_formula",
    "survival_probability",
    "entropy_nats",
    "entropy_bits",
    "total_weight",
    "validity_flag",
];

/// One sweep point. Fields that do not apply to the protocol are `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub protocol: Protocol,
    pub preset: String,
    pub n0: usize,
    #[serde(rename = "N")]
    pub n: Option<u64>,
    pub t: Option<f64>,
    pub f: Option<f64>,
    pub delta_a: Option<f64>,
    pub log_base: LogBase,
    pub distribution: Option<DistributionMode>,
    pub zeno_formula: Option<ZenoFormula>,
    pub survival_probability: f64,
    pub entropy_nats: f64,
    pub entropy_bits: f64,
    /// Sum of the raw weights (continuous protocol and paper-literal free
    /// evolution).
    pub total_weight: Option<f64>,
    /// Zeno protocol: whether `τ · max|ω| ≤ 0.5`.
    pub validity_flag: Option<bool>,
}

impl ResultRow {
    /// Entropy in the row's selected base.
    pub fn entropy(&self) -> f64 {
        match self.log_base {
            LogBase::Nats => self.entropy_nats,
            LogBase::Bits => self.entropy_bits,
        }
    }
}

/// Axis values of a sweep point.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_a: Option<f64>,
}

impl SweepPoint {
    fn of(row: &ResultRow) -> Self {
        Self {
            n: row.n,
            t: row.t,
            f: row.f,
            delta_a: row.delta_a,
        }
    }

    fn require_t(&self) -> f64 {
        self.t.expect("validated config has a t axis")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdCrossing {
    /// Index of the first row whose entropy is below the threshold.
    pub row: usize,
    pub point: SweepPoint,
    pub entropy: f64,
}

/// Entropies are in the config's selected log base.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub rows: usize,
    pub log_base: LogBase,
    pub min_entropy: Option<f64>,
    pub max_entropy: Option<f64>,
    pub threshold: f64,
    pub first_below_threshold: Option<ThresholdCrossing>,
}

impl Summary {
    pub fn from_rows(rows: &[ResultRow], log_base: LogBase, threshold: f64) -> Self {
        let entropies = rows.iter().map(ResultRow::entropy);
        let first_below_threshold = rows
            .iter()
            .enumerate()
            .find(|(_, r)| r.entropy() < threshold)
            .map(|(row, r)| ThresholdCrossing {
                row,
                point: SweepPoint::of(r),
                entropy: r.entropy(),
            });
        Self {
            rows: rows.len(),
            log_base,
            min_entropy: entropies.clone().reduce(f64::min),
            max_entropy: entropies.reduce(f64::max),
            threshold,
            first_below_threshold,
        }
    }
}

/// Sampled final-outcome distribution against the exact chain at one
/// `(N, t)` point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloRecord {
    #[serde(rename = "N")]
    pub n: u64,
    pub t: f64,
    pub trials: u64,
    pub seed: u64,
    pub empirical: Vec<f64>,
    pub exact: Vec<f64>,
    pub tv_distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunOutput {
    pub config: ExperimentConfig,
    pub rows: Vec<ResultRow>,
    pub summary: Summary,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub monte_carlo: Vec<MonteCarloRecord>,
}

/// Grid points in output order.
pub fn sweep_points(cfg: &ExperimentConfig) -> Vec<SweepPoint> {
    fn axis<T: Copy>(values: &Option<Vec<T>>) -> Vec<Option<T>> {
        match values {
            Some(v) => v.iter().copied().map(Some).collect(),
            None => vec![None],
        }
    }
    let s = &cfg.sweep;
    let mut points = Vec::new();
    for &n in &axis(&s.n) {
        for &t in &axis(&s.t) {
            for &f in &axis(&s.f) {
                for &delta_a in &axis(&s.delta_a) {
                    points.push(SweepPoint { n, t, f, delta_a });
                }
            }
        }
    }
    points
}

/// Validates `cfg`, evaluates every sweep point and summarizes.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunOutput> {
    let system = cfg
        .validate()
        .map_err(|e| Error::InvalidConfig(e.to_string()))?;
    let points = sweep_points(cfg);
    info!(
        "{} protocol on {}: {} sweep points",
        cfg.protocol.as_str(),
        system.name,
        points.len()
    );

    let rows = points
        .par_iter()
        .map(|p| compute_row(cfg, &system, p))
        .collect::<Result<Vec<_>>>()?;

    let monte_carlo = match (&cfg.monte_carlo, cfg.protocol) {
        (Some(mc), Protocol::Zeno) => points
            .iter()
            .map(|p| monte_carlo_record(cfg, &system, p, mc.trials, mc.seed))
            .collect::<Result<Vec<_>>>()?,
        _ => Vec::new(),
    };

    let summary = Summary::from_rows(&rows, cfg.modes.log_base, cfg.threshold());
    Ok(RunOutput {
        config: cfg.clone(),
        rows,
        summary,
        monte_carlo,
    })
}

fn compute_row(cfg: &ExperimentConfig, system: &System, point: &SweepPoint) -> Result<ResultRow> {
    debug!("computing {point:?}");
    let (h, a, n0) = (&system.hamiltonian, &system.observable, cfg.n0);
    let modes = cfg.modes;
    let mut row = ResultRow {
        protocol: cfg.protocol,
        preset: cfg.system_label().to_owned(),
        n0,
        n: point.n,
        t: point.t,
        f: point.f,
        delta_a: point.delta_a,
        log_base: modes.log_base,
        distribution: Some(modes.distribution),
        zeno_formula: None,
        survival_probability: 0.0,
        entropy_nats: 0.0,
        entropy_bits: 0.0,
        total_weight: None,
        validity_flag: None,
    };

    let entropy: EntropyValue = match cfg.protocol {
        Protocol::Free => {
            let t = point.require_t();
            row.survival_probability = survival_exact(h, a, n0, t)?;
            match modes.distribution {
                DistributionMode::Normalized => free_evolution_entropy(h, a, n0, t, LogBase::Nats)?,
                DistributionMode::PaperLiteral => {
                    let survivals = (0..system.dim())
                        .map(|n| survival_exact(h, a, n, t))
                        .collect::<Result<Vec<_>>>()?;
                    row.total_weight = Some(survivals.iter().sum());
                    EntropyValue::from_nats(
                        free_evolution_entropy_paper_literal(h, a, t)?,
                        LogBase::Nats,
                    )
                }
            }
        }
        Protocol::Zeno => {
            let n = point.n.expect("validated config has an N axis");
            let schedule = ZenoSchedule::new(point.require_t(), n)?;
            row.zeno_formula = Some(modes.zeno_formula);
            row.validity_flag = Some(schedule.is_short_time_reliable(&FrequencyTable::new(h)));
            row.survival_probability = zeno_survival(h, a, n0, &schedule, modes.zeno_formula)?;
            match modes.distribution {
                DistributionMode::Normalized => shannon_entropy(
                    &zeno_chain_distribution(h, a, n0, &schedule)?,
                    LogBase::Nats,
                )?,
                DistributionMode::PaperLiteral => EntropyValue::from_nats(
                    zeno_entropy_asymptotic(h, a, &schedule)?,
                    LogBase::Nats,
                ),
            }
        }
        Protocol::Continuous => {
            let t = point.require_t();
            let measurement = MeasurementConfig::quadratic(
                point.f.expect("validated config has an f axis"),
                a.spectral().eigenvalue(n0),
                point.delta_a.expect("validated config has a delta_a axis"),
            )?;
            let raw =
                continuous_distribution(h, a, n0, &measurement, t, DistributionMode::PaperLiteral)?;
            let total = raw.total();
            row.total_weight = Some(total);
            row.survival_probability = match modes.distribution {
                DistributionMode::Normalized => {
                    if total < crate::entropy::MIN_TOTAL_WEIGHT {
                        return Err(Error::ZeroTotalWeight);
                    }
                    raw.weight(n0) / total
                }
                DistributionMode::PaperLiteral => raw.weight(n0),
            };
            continuous_entropy(
                h,
                a,
                EntropyScope::Prepared(n0),
                &measurement,
                t,
                modes.distribution,
                LogBase::Nats,
            )?
        }
    };
    row.entropy_nats = entropy.nats();
    row.entropy_bits = entropy.bits();
    Ok(row)
}

fn monte_carlo_record(
    cfg: &ExperimentConfig,
    system: &System,
    point: &SweepPoint,
    trials: u64,
    seed: u64,
) -> Result<MonteCarloRecord> {
    let (h, a) = (&system.hamiltonian, &system.observable);
    let n = point.n.expect("validated config has an N axis");
    let t = point.require_t();
    let schedule = ZenoSchedule::new(t, n)?;
    let empirical = monte_carlo_zeno(h, a, cfg.n0, &schedule, trials, seed)?;
    let exact = zeno_chain_distribution(h, a, cfg.n0, &schedule)?;
    Ok(MonteCarloRecord {
        n,
        t,
        trials,
        seed,
        tv_distance: empirical.total_variation(&exact)?,
        empirical: empirical.weights().to_vec(),
        exact: exact.weights().to_vec(),
    })
}
