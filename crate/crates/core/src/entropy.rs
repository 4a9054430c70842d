//! Shannon entropy of outcome distributions.
//!
//! Natural log is the default: the small-`τ` expansions used elsewhere rely
//! on `−p ln p ≈ 1 − p` near `p = 1`, which only holds in nats.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{DistributionMode, OutcomeDistribution, NEGATIVE_CLAMP};

/// Totals below this are treated as zero by [`normalize`].
pub const MIN_TOTAL_WEIGHT: f64 = 1e-300;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LogBase {
    #[default]
    Nats,
    Bits,
}

impl LogBase {
    pub fn as_str(self) -> &'static str {
        match self {
            LogBase::Nats => "nats",
            LogBase::Bits => "bits",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyValue {
    value: f64,
    base: LogBase,
}

impl EntropyValue {
    pub fn from_nats(nats: f64, base: LogBase) -> Self {
        let value = match base {
            LogBase::Nats => nats,
            LogBase::Bits => nats / std::f64::consts::LN_2,
        };
        Self { value, base }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn base(&self) -> LogBase {
        self.base
    }

    pub fn nats(&self) -> f64 {
        match self.base {
            LogBase::Nats => self.value,
            LogBase::Bits => self.value * std::f64::consts::LN_2,
        }
    }

    pub fn bits(&self) -> f64 {
        self.nats() / std::f64::consts::LN_2
    }
}

/// `−w ln w` with `0 · ln 0 = 0`.
pub fn entropy_term(w: f64) -> f64 {
    if w == 0.0 {
        0.0
    } else {
        -w * w.ln()
    }
}

/// `−Σ w ln w` over raw weights, in nats. No normalization is assumed.
pub fn shannon_entropy_weights(weights: &[f64]) -> Result<f64> {
    let mut total = 0.0;
    for (index, &w) in weights.iter().enumerate() {
        if w < -NEGATIVE_CLAMP {
            return Err(Error::NegativeWeight { index, value: w });
        }
        total += entropy_term(w.max(0.0));
    }
    Ok(total)
}

/// `S = −Σ p ln p`, reported in `base`.
///
/// For a paper-literal (unnormalized) distribution the sum is taken verbatim
/// over the raw weights and the `ln d` bound does not apply.
pub fn shannon_entropy(dist: &OutcomeDistribution, base: LogBase) -> Result<EntropyValue> {
    shannon_entropy_weights(dist.weights()).map(|nats| EntropyValue::from_nats(nats, base))
}

/// Divides the weights by their sum.
pub fn normalize(dist: &OutcomeDistribution) -> Result<OutcomeDistribution> {
    let total = dist.total();
    if total.is_nan() || total < MIN_TOTAL_WEIGHT {
        return Err(Error::ZeroTotalWeight);
    }
    let weights = dist.weights().iter().map(|w| w / total).collect();
    OutcomeDistribution::new(weights, DistributionMode::Normalized)
}
