use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bridge::Claim;
use crate::classical::{DistributionSpec, Method};
use crate::error::{Error, Result};

pub const DEFAULT_DT: f64 = 1e-3;
pub const DEFAULT_FD_STEP: f64 = 1e-4;
pub const DEFAULT_CUTOFF_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    VerifyAlgebra,
    VerifyEq8,
    VerifyEq9,
    VerifyEq6,
    Eq10Gap,
    ZeroPoint,
    ExtendedSurvey,
}

impl ExperimentKind {
    fn needs_distribution(self) -> bool {
        !matches!(self, ExperimentKind::VerifyAlgebra | ExperimentKind::ExtendedSurvey)
    }

    fn needs_hamiltonian(self) -> bool {
        matches!(self, ExperimentKind::VerifyEq6 | ExperimentKind::Eq10Gap)
    }

    fn needs_observable(self) -> bool {
        matches!(self, ExperimentKind::VerifyEq9 | ExperimentKind::Eq10Gap)
    }
}

/// A fixed cutoff, or `"auto"` to size it from the sampled ensemble.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CutoffSpec {
    Fixed(usize),
    Auto(AutoCutoff),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AutoCutoff {
    Auto,
}

impl Default for CutoffSpec {
    fn default() -> Self {
        CutoffSpec::Auto(AutoCutoff::Auto)
    }
}

fn one() -> usize {
    1
}

/// One experiment. Polynomials use the `phi[j]`, `pi[j]` text grammar.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Defaults to the config file stem.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub kind: ExperimentKind,
    pub modes: usize,
    #[serde(default)]
    pub cutoff: CutoffSpec,
    /// Poisson tail target for `"auto"` cutoffs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoff_tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hamiltonian: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observable: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distribution: Option<DistributionSpec>,
    #[serde(default = "one")]
    pub samples: usize,
    /// Evaluation times (eq10-gap) or survey times (extended-survey).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub times: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default)]
    pub method: Method,
    /// Overrides the distribution's seed; also seeds random lemma draws.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fd_step: Option<f64>,
    /// Overrides the default claim of eq10-gap.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub claim: Option<Claim>,
    /// Random identity draws for verify-algebra.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lemma_draws: Option<usize>,
    /// Also check every sample as a pure state (verify-eq9).
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub samplewise: bool,
    /// Report path relative to the output root, without extension.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

/// 1-based line of the first occurrence of `"field"` in `text`.
fn field_line(text: &str, field: &str) -> Option<usize> {
    let key = format!("\"{field}\"");
    text.lines().position(|l| l.contains(&key)).map(|i| i + 1)
}

fn located(text: &str, field: &str, err: Error) -> Error {
    match field_line(text, field) {
        Some(line) => Error::Config(format!("line {line}: {field}: {err}")),
        None => Error::Config(format!("{field}: {err}")),
    }
}

impl ExperimentConfig {
    /// Parse and validate. Errors name the offending line.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate().map_err(|(field, err)| located(text, field, err))?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let mut config =
            Self::from_json_str(&text).map_err(|e| Error::Config(format!("{}: {}", path.display(), strip_config(e))))?;
        if config.name.is_none() {
            config.name = path.file_stem().map(|s| s.to_string_lossy().into_owned());
        }
        Ok(config)
    }

    pub fn name(&self) -> String {
        self.name.clone().unwrap_or_else(|| format!("{:?}", self.kind).to_lowercase())
    }

    pub fn dt(&self) -> f64 {
        self.dt.unwrap_or(DEFAULT_DT)
    }

    pub fn fd_step(&self) -> f64 {
        self.fd_step.unwrap_or(DEFAULT_FD_STEP)
    }

    pub fn cutoff_tolerance(&self) -> f64 {
        self.cutoff_tolerance.unwrap_or(DEFAULT_CUTOFF_TOLERANCE)
    }

    /// The distribution with the config seed applied.
    pub fn seeded_distribution(&self) -> Option<DistributionSpec> {
        self.distribution.clone().map(|mut d| {
            if let Some(seed) = self.seed {
                d.seed = seed;
            }
            d
        })
    }

    fn validate(&self) -> std::result::Result<(), (&'static str, Error)> {
        let cfg = |m: String| Error::Config(m);
        if self.modes == 0 {
            return Err(("modes", cfg("must be at least 1".into())));
        }
        if let CutoffSpec::Fixed(0) = self.cutoff {
            return Err(("cutoff", cfg("must be at least 1".into())));
        }
        if matches!(self.cutoff, CutoffSpec::Auto(_)) && !self.kind.needs_distribution() {
            return Err(("cutoff", cfg("\"auto\" needs a distribution; give a number".into())));
        }
        if let Some(t) = self.cutoff_tolerance {
            if !(t > 0.0 && t < 1.0) {
                return Err(("cutoff_tolerance", cfg(format!("must lie in (0, 1), got {t}"))));
            }
        }
        if self.samples == 0 {
            return Err(("samples", cfg("must be at least 1".into())));
        }
        for (field, v) in [("dt", self.dt), ("fd_step", self.fd_step)] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return Err((field, cfg(format!("must be positive, got {v}"))));
                }
            }
        }
        if let Some(t) = self.times.iter().find(|t| !t.is_finite() || **t < 0.0) {
            return Err(("times", cfg(format!("times must be finite and nonnegative, got {t}"))));
        }
        if self.kind == ExperimentKind::Eq10Gap && self.times.is_empty() {
            return Err(("times", cfg("eq10-gap needs at least one time".into())));
        }
        match &self.distribution {
            Some(d) => {
                d.validate().map_err(|e| ("distribution", e))?;
                if d.modes() != self.modes {
                    return Err((
                        "distribution",
                        Error::DimensionMismatch { expected: self.modes, got: d.modes() },
                    ));
                }
            }
            None if self.kind.needs_distribution() => {
                return Err(("kind", cfg("this experiment needs a \"distribution\"".into())));
            }
            None => {}
        }
        if self.kind.needs_hamiltonian() && self.hamiltonian.is_none() {
            return Err(("kind", cfg("this experiment needs a \"hamiltonian\"".into())));
        }
        if self.kind.needs_observable() && self.observable.is_none() {
            return Err(("kind", cfg("this experiment needs an \"observable\"".into())));
        }
        if let Some(h) = &self.hamiltonian {
            crate::classical::HamiltonianSpec::parse(h, self.modes).map_err(|e| ("hamiltonian", e))?;
        }
        if let Some(g) = &self.observable {
            crate::symbolic::parse_phipi(g, Some(self.modes)).map_err(|e| ("observable", e))?;
        }
        Ok(())
    }
}

fn strip_config(e: Error) -> String {
    match e {
        Error::Config(m) => m,
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EQ9: &str = r#"{
  "kind": "verify-eq9",
  "modes": 1,
  "cutoff": "auto",
  "observable": "phi[1]^2",
  "distribution": { "kind": "delta", "state": { "phi": [1.0], "pi": [0.0] } }
}"#;

    #[test]
    fn parses_with_defaults() {
        let c = ExperimentConfig::from_json_str(EQ9).unwrap();
        assert_eq!(c.kind, ExperimentKind::VerifyEq9);
        assert_eq!(c.cutoff, CutoffSpec::default());
        assert_eq!(c.samples, 1);
        assert_eq!(c.method, Method::ImplicitMidpoint);
        assert_eq!(c.dt(), DEFAULT_DT);
        let fixed = ExperimentConfig::from_json_str(&EQ9.replace("\"auto\"", "12")).unwrap();
        assert_eq!(fixed.cutoff, CutoffSpec::Fixed(12));
    }

    #[test]
    fn round_trips() {
        let c = ExperimentConfig::from_json_str(EQ9).unwrap();
        let again = ExperimentConfig::from_json_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(c, again);
    }

    #[test]
    fn polynomial_errors_name_line_and_column() {
        let bad = EQ9.replace("phi[1]^2", "phi[1]^^2");
        let msg = ExperimentConfig::from_json_str(&bad).unwrap_err().to_string();
        assert!(msg.contains("line 5") && msg.contains("observable") && msg.contains("column"), "{msg}");
    }

    #[test]
    fn json_errors_carry_position() {
        let msg = ExperimentConfig::from_json_str("{\n  \"kind\": \"verify-eq9\",\n  \"modes\": ,\n}").unwrap_err().to_string();
        assert!(msg.contains("line 3"), "{msg}");
    }

    #[test]
    fn rejects_inconsistent_configs() {
        for (from, to) in [
            ("\"modes\": 1", "\"modes\": 2"),
            ("\"modes\": 1", "\"modes\": 0"),
            ("\"cutoff\": \"auto\"", "\"cutoff\": \"manual\""),
            ("\"observable\": \"phi[1]^2\",", ""),
            ("\"kind\": \"verify-eq9\"", "\"kind\": \"verify-eq11\""),
            ("\"modes\": 1,", "\"modes\": 1, \"colour\": 3,"),
        ] {
            assert!(ExperimentConfig::from_json_str(&EQ9.replace(from, to)).is_err(), "{to}");
        }
    }

    #[test]
    fn seed_overrides_distribution() {
        let mut c = ExperimentConfig::from_json_str(EQ9).unwrap();
        assert_eq!(c.seeded_distribution().unwrap().seed, 0);
        c.seed = Some(42);
        assert_eq!(c.seeded_distribution().unwrap().seed, 42);
    }
}
