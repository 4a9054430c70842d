//! JSON experiment configuration.
//!
//! ```json
//! {
//!   "system": {"preset": "two-level-rabi"},
//!   "protocol": "zeno",
//!   "n0": 1,
//!   "sweep": {"N": [1, 10, 100, 1000], "t": [1.0]},
//!   "modes": {"log_base": "nats", "distribution": "normalized", "zeno_formula": "corrected"},
//!   "monte_carlo": {"trials": 100000, "seed": 7},
//!   "threshold": 0.01
//! }
//! ```
//!
//! `system` is either `{"preset": <name>}` (the Rabi preset also accepts
//! `"omega"`) or `{"hamiltonian": M, "observable": M}` with `M` a row-major
//! nested array of `[re, im]` pairs. Unknown keys are rejected at every level.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::entropy::LogBase;
use crate::linalg::{ComplexMatrix, C64, HERMITIAN_TOL};
use crate::model::DistributionMode;
use crate::presets::{self, System};
use crate::zeno::ZenoFormula;

/// Default entropy threshold reported in the run summary.
pub const DEFAULT_THRESHOLD: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("validation error: {0}")]
    Validation(String),
}

pub type ComplexRows = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hamiltonian: Option<ComplexRows>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observable: Option<ComplexRows>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Protocol {
    Free,
    Zeno,
    Continuous,
}

impl Protocol {
    pub fn as_str(self) -> &'static str {
        match self {
            Protocol::Free => "free",
            Protocol::Zeno => "zeno",
            Protocol::Continuous => "continuous",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub n: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_a: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Modes {
    pub log_base: LogBase,
    pub distribution: DistributionMode,
    pub zeno_formula: ZenoFormula,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonteCarlo {
    pub trials: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub system: SystemSpec,
    pub protocol: Protocol,
    pub n0: usize,
    pub sweep: Sweep,
    #[serde(default)]
    pub modes: Modes,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monte_carlo: Option<MonteCarlo>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
}

impl ExperimentConfig {
    pub fn threshold(&self) -> f64 {
        self.threshold.unwrap_or(DEFAULT_THRESHOLD)
    }

    /// Label written to the `preset` column.
    pub fn system_label(&self) -> &str {
        self.system.preset.as_deref().unwrap_or("custom")
    }

    /// Builds the Hamiltonian and observable.
    pub fn build_system(&self) -> Result<System, ConfigError> {
        let spec = &self.system;
        match (&spec.preset, &spec.hamiltonian, &spec.observable) {
            (Some(name), None, None) => {
                if spec.omega.is_some() && name != presets::TWO_LEVEL_RABI {
                    return Err(ConfigError::Validation(format!(
                        "system.omega only applies to the {} preset",
                        presets::TWO_LEVEL_RABI
                    )));
                }
                if let Some(w) = spec.omega {
                    if !w.is_finite() {
                        return Err(ConfigError::Validation(format!("system.omega must be finite, got {w}")));
                    }
                }
                presets::by_name(name, spec.omega)
                    .ok_or_else(|| ConfigError::Validation(format!("unknown preset {name:?}")))?
                    .map_err(|e| ConfigError::Validation(e.to_string()))
            }
            (None, Some(h), Some(a)) => {
                if spec.omega.is_some() {
                    return Err(ConfigError::Validation(
                        "system.omega only applies to the two-level-rabi preset".into(),
                    ));
                }
                let h = hermitian_matrix("hamiltonian", h)?;
                let a = hermitian_matrix("observable", a)?;
                if h.dim() != a.dim() {
                    return Err(ConfigError::Validation(format!(
                        "hamiltonian is {0}x{0} but observable is {1}x{1}",
                        h.dim(),
                        a.dim()
                    )));
                }
                System::new("custom", h, a).map_err(|e| ConfigError::Validation(e.to_string()))
            }
            _ => Err(ConfigError::Validation(
                "system must be either {\"preset\": ...} or {\"hamiltonian\": ..., \"observable\": ...}"
                    .into(),
            )),
        }
    }

    /// Semantic checks beyond the JSON schema. Returns the resolved system.
    pub fn validate(&self) -> Result<System, ConfigError> {
        let system = self.build_system()?;
        if self.n0 >= system.dim() {
            return Err(ConfigError::Validation(format!(
                "n0 = {} out of range for dimension {}",
                self.n0,
                system.dim()
            )));
        }

        let required: &[&str] = match self.protocol {
            Protocol::Free => &["t"],
            Protocol::Zeno => &["N", "t"],
            Protocol::Continuous => &["t", "f", "delta_a"],
        };
        let axes: [(&str, Option<usize>); 4] = [
            ("N", self.sweep.n.as_ref().map(Vec::len)),
            ("t", self.sweep.t.as_ref().map(Vec::len)),
            ("f", self.sweep.f.as_ref().map(Vec::len)),
            ("delta_a", self.sweep.delta_a.as_ref().map(Vec::len)),
        ];
        for (name, len) in axes {
            match (required.contains(&name), len) {
                (true, None) | (true, Some(0)) => {
                    return Err(ConfigError::Validation(format!(
                        "sweep.{name} must be a nonempty list for the {} protocol",
                        self.protocol.as_str()
                    )))
                }
                (false, Some(_)) => {
                    return Err(ConfigError::Validation(format!(
                        "sweep.{name} is not used by the {} protocol",
                        self.protocol.as_str()
                    )))
                }
                _ => {}
            }
        }

        let check = |name: &str, values: &Option<Vec<f64>>, ok: fn(f64) -> bool, what: &str| {
            for (i, &v) in values.iter().flatten().enumerate() {
                if !ok(v) {
                    return Err(ConfigError::Validation(format!(
                        "sweep.{name}[{i}] = {v} must be {what}"
                    )));
                }
            }
            Ok(())
        };
        match self.protocol {
            Protocol::Free => check("t", &self.sweep.t, f64::is_finite, "finite")?,
            Protocol::Zeno => check("t", &self.sweep.t, |v| v.is_finite() && v > 0.0, "positive")?,
            Protocol::Continuous => check(
                "t",
                &self.sweep.t,
                |v| v.is_finite() && v >= 0.0,
                "nonnegative",
            )?,
        }
        check(
            "f",
            &self.sweep.f,
            |v| v.is_finite() && v >= 0.0,
            "nonnegative",
        )?;
        check(
            "delta_a",
            &self.sweep.delta_a,
            |v| v.is_finite() && v > 0.0,
            "positive",
        )?;
        if let Some(i) = self.sweep.n.iter().flatten().position(|&n| n == 0) {
            return Err(ConfigError::Validation(format!(
                "sweep.N[{i}] must be at least 1"
            )));
        }

        if let Some(mc) = &self.monte_carlo {
            if self.protocol != Protocol::Zeno {
                return Err(ConfigError::Validation(
                    "monte_carlo is only supported by the zeno protocol".into(),
                ));
            }
            if mc.trials == 0 {
                return Err(ConfigError::Validation(
                    "monte_carlo.trials must be at least 1".into(),
                ));
            }
        }
        if let Some(th) = self.threshold {
            if !(th.is_finite() && th > 0.0) {
                return Err(ConfigError::Validation(format!(
                    "threshold must be positive, got {th}"
                )));
            }
        }
        Ok(system)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

fn hermitian_matrix(name: &str, rows: &ComplexRows) -> Result<ComplexMatrix, ConfigError> {
    let d = rows.len();
    if d == 0 {
        return Err(ConfigError::Validation(format!("{name} is empty")));
    }
    if let Some(i) = rows.iter().position(|r| r.len() != d) {
        return Err(ConfigError::Validation(format!(
            "{name} row {i} has {} entries, expected {d}",
            rows[i].len()
        )));
    }
    let entry = |i: usize, j: usize| C64::new(rows[i][j][0], rows[i][j][1]);
    for i in 0..d {
        for j in 0..d {
            let z = entry(i, j);
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(ConfigError::Validation(format!(
                    "{name} entry ({i},{j}) is not finite"
                )));
            }
        }
    }
    for i in 0..d {
        for j in i..d {
            let (z, w) = (entry(i, j), entry(j, i));
            if (z - w.conj()).norm() > HERMITIAN_TOL {
                return Err(ConfigError::Validation(format!(
                    "{name} is not Hermitian: entry ({i},{j}) = {} {:+}i is not the conjugate of entry ({j},{i}) = {} {:+}i",
                    z.re, z.im, w.re, w.im
                )));
            }
        }
    }
    let rows: Vec<Vec<C64>> = (0..d)
        .map(|i| (0..d).map(|j| entry(i, j)).collect())
        .collect();
    ComplexMatrix::from_rows(&rows).map_err(|e| ConfigError::Validation(e.to_string()))
}

/// Parses and validates a config document.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| match e.classify() {
        serde_json::error::Category::Data => ConfigError::Schema(e.to_string()),
        _ => ConfigError::Parse(e.to_string()),
    })?;
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "system": {"preset": "two-level-rabi"},
        "protocol": "zeno",
        "n0": 1,
        "sweep": {"N": [1, 10, 100, 1000], "t": [1.0]}
    }"#;

    #[test]
    fn minimal_preset_config() {
        let cfg = parse_config(MINIMAL).unwrap();
        assert_eq!(cfg.protocol, Protocol::Zeno);
        assert_eq!(cfg.sweep.n.as_deref(), Some(&[1, 10, 100, 1000][..]));
        assert_eq!(cfg.modes, Modes::default());
        assert_eq!(cfg.threshold(), DEFAULT_THRESHOLD);
        assert_eq!(cfg.system_label(), "two-level-rabi");
    }

    #[test]
    fn round_trips_through_json() {
        let cfg = parse_config(MINIMAL).unwrap();
        let again = parse_config(&cfg.to_json()).unwrap();
        assert_eq!(cfg, again);
    }

    #[test]
    fn non_hermitian_matrix_names_the_entry() {
        let text = r#"{
            "system": {
                "hamiltonian": [[[0, 0], [1, 0]], [[2, 0], [0, 0]]],
                "observable": [[[1, 0], [0, 0]], [[0, 0], [-1, 0]]]
            },
            "protocol": "free", "n0": 0, "sweep": {"t": [0.5]}
        }"#;
        match parse_config(text) {
            Err(ConfigError::Validation(msg)) => {
                assert!(msg.contains("hamiltonian"), "{msg}");
                assert!(msg.contains("(0,1)"), "{msg}");
            }
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn explicit_complex_matrices() {
        let text = r#"{
            "system": {
                "hamiltonian": [[[0, 0], [0, -0.5]], [[0, 0.5], [0, 0]]],
                "observable": [[[1, 0], [0, 0]], [[0, 0], [-1, 0]]]
            },
            "protocol": "free", "n0": 1, "sweep": {"t": [0.5]}
        }"#;
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.system_label(), "custom");
    }

    #[test]
    fn malformed_and_unknown_keys() {
        assert!(matches!(parse_config("{"), Err(ConfigError::Parse(_))));
        let extra = MINIMAL.replacen("\"n0\": 1", "\"n0\": 1, \"bogus\": true", 1);
        assert!(matches!(parse_config(&extra), Err(ConfigError::Schema(_))));
        let nested = MINIMAL.replacen("\"t\": [1.0]", "\"t\": [1.0], \"x\": [1]", 1);
        assert!(matches!(parse_config(&nested), Err(ConfigError::Schema(_))));
        let wrong_type = MINIMAL.replacen("\"n0\": 1", "\"n0\": \"one\"", 1);
        assert!(matches!(
            parse_config(&wrong_type),
            Err(ConfigError::Schema(_))
        ));
        let bad_mode = MINIMAL.replacen(
            "\"n0\": 1",
            "\"n0\": 1, \"modes\": {\"log_base\": \"e\"}",
            1,
        );
        assert!(matches!(
            parse_config(&bad_mode),
            Err(ConfigError::Schema(_))
        ));
    }

    #[test]
    fn validation_failures() {
        let cases = [
            MINIMAL.replacen("\"n0\": 1", "\"n0\": 2", 1),
            MINIMAL.replacen("[1, 10, 100, 1000]", "[]", 1),
            MINIMAL.replacen("[1, 10, 100, 1000]", "[0, 10]", 1),
            MINIMAL.replacen("[1.0]", "[-1.0]", 1),
            MINIMAL.replacen("\"t\": [1.0]", "\"t\": [1.0], \"f\": [1.0]", 1),
            MINIMAL.replacen("\"zeno\"", "\"continuous\"", 1),
            MINIMAL.replacen("two-level-rabi", "five-level", 1),
            MINIMAL.replacen("\"two-level-rabi\"", "\"commuting\", \"omega\": 2.0", 1),
            MINIMAL.replacen("\"n0\": 1", "\"n0\": 1, \"threshold\": -1", 1),
            MINIMAL.replacen(
                "\"n0\": 1",
                "\"n0\": 1, \"monte_carlo\": {\"trials\": 0, \"seed\": 1}",
                1,
            ),
            MINIMAL
                .replacen("\"zeno\"", "\"free\"", 1)
                .replacen("\"N\": [1, 10, 100, 1000], ", "", 1)
                .replacen(
                    "\"n0\": 1",
                    "\"n0\": 1, \"monte_carlo\": {\"trials\": 5, \"seed\": 1}",
                    1,
                ),
        ];
        for text in cases {
            assert!(
                matches!(parse_config(&text), Err(ConfigError::Validation(_))),
                "accepted: {text}"
            );
        }
    }

    #[test]
    fn rabi_frequency_is_configurable() {
        let text = MINIMAL.replacen(
            "\"two-level-rabi\"",
            "\"two-level-rabi\", \"omega\": 2.0",
            1,
        );
        let cfg = parse_config(&text).unwrap();
        let sys = cfg.build_system().unwrap();
        let e = sys.hamiltonian.spectral().eigenvalues();
        assert!((e[1] - e[0] - 2.0).abs() < 1e-12);
    }
}
