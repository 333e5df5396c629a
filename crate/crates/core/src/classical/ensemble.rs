use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::hamiltonian::HamiltonianSpec;
use super::integrate::{csv_header, csv_row, integrate_final, Method};
use super::state::ClassicalState;
use super::Neumaier;
use crate::error::{Error, Result};

/// Shape of the phase-space probability measure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DistributionKind {
    Delta { state: ClassicalState },
    ProductGaussian { mean: ClassicalState, std_phi: Vec<f64>, std_pi: Vec<f64> },
    UniformBox { lower: ClassicalState, upper: ClassicalState },
}

/// A distribution plus the seed that fixes its samples.
///
/// Samples are drawn from ChaCha20 seeded with `seed`, one state at a time,
/// coordinates in the order `φ_1…φ_N, π_1…π_N`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistributionSpec {
    #[serde(flatten)]
    pub kind: DistributionKind,
    #[serde(default)]
    pub seed: u64,
}

impl DistributionSpec {
    pub fn delta(state: ClassicalState) -> Self {
        Self { kind: DistributionKind::Delta { state }, seed: 0 }
    }

    pub fn gaussian(mean: ClassicalState, std_phi: Vec<f64>, std_pi: Vec<f64>, seed: u64) -> Self {
        Self { kind: DistributionKind::ProductGaussian { mean, std_phi, std_pi }, seed }
    }

    pub fn uniform_box(lower: ClassicalState, upper: ClassicalState, seed: u64) -> Self {
        Self { kind: DistributionKind::UniformBox { lower, upper }, seed }
    }

    pub fn modes(&self) -> usize {
        match &self.kind {
            DistributionKind::Delta { state } => state.modes(),
            DistributionKind::ProductGaussian { mean, .. } => mean.modes(),
            DistributionKind::UniformBox { lower, .. } => lower.modes(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidDistribution(m.to_string()));
        match &self.kind {
            DistributionKind::Delta { state } => state.validate().map_err(|e| Error::InvalidDistribution(e.to_string())),
            DistributionKind::ProductGaussian { mean, std_phi, std_pi } => {
                mean.validate().map_err(|e| Error::InvalidDistribution(e.to_string()))?;
                if std_phi.len() != mean.modes() || std_pi.len() != mean.modes() {
                    return bad("standard deviation vectors must match the mode count");
                }
                if std_phi.iter().chain(std_pi).any(|s| !(*s >= 0.0) || !s.is_finite()) {
                    return bad("standard deviations must be finite and nonnegative");
                }
                Ok(())
            }
            DistributionKind::UniformBox { lower, upper } => {
                lower.validate().map_err(|e| Error::InvalidDistribution(e.to_string()))?;
                upper.validate().map_err(|e| Error::InvalidDistribution(e.to_string()))?;
                if lower.modes() != upper.modes() {
                    return bad("box bounds have different mode counts");
                }
                if lower.to_flat().iter().zip(upper.to_flat()).any(|(l, u)| *l > u) {
                    return bad("box bounds are not ordered");
                }
                Ok(())
            }
        }
    }
}

/// Weighted empirical measure over phase space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ensemble {
    pub samples: Vec<ClassicalState>,
    pub weights: Vec<f64>,
    /// Time the samples are taken at; `0` for freshly drawn ensembles.
    pub time: f64,
    pub distribution: Option<DistributionSpec>,
}

impl Ensemble {
    /// Equal-weight ensemble over `samples`.
    pub fn uniform(samples: Vec<ClassicalState>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidDistribution("ensemble needs at least one sample".into()));
        }
        let n = samples[0].modes();
        for s in &samples {
            s.check_modes(n)?;
        }
        let w = 1.0 / samples.len() as f64;
        Ok(Self { weights: vec![w; samples.len()], samples, time: 0.0, distribution: None })
    }

    /// A single pure state.
    pub fn pure(state: ClassicalState) -> Self {
        Self { samples: vec![state], weights: vec![1.0], time: 0.0, distribution: None }
    }

    pub fn weighted(samples: Vec<ClassicalState>, weights: Vec<f64>) -> Result<Self> {
        if samples.is_empty() || samples.len() != weights.len() {
            return Err(Error::InvalidDistribution("samples and weights must be non-empty and of equal length".into()));
        }
        if weights.iter().any(|w| !(*w >= 0.0)) {
            return Err(Error::InvalidDistribution("weights must be nonnegative".into()));
        }
        let mut total = Neumaier::default();
        weights.iter().for_each(|w| total.add(*w));
        if (total.value() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidDistribution(format!("weights sum to {}, not 1", total.value())));
        }
        let n = samples[0].modes();
        for s in &samples {
            s.check_modes(n)?;
        }
        Ok(Self { samples, weights, time: 0.0, distribution: None })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn modes(&self) -> usize {
        self.samples[0].modes()
    }

    pub fn seed(&self) -> Option<u64> {
        self.distribution.as_ref().map(|d| d.seed)
    }

    /// Weighted average `Σ_k w_k f(s_k)` with compensated summation.
    pub fn mean(&self, f: impl Fn(&ClassicalState) -> f64) -> f64 {
        let mut acc = Neumaier::default();
        for (s, w) in self.samples.iter().zip(&self.weights) {
            acc.add(w * f(s));
        }
        acc.value()
    }

    /// Weighted average of per-sample values addressed by index.
    pub fn mean_indexed(&self, f: impl Fn(usize) -> f64) -> f64 {
        let mut acc = Neumaier::default();
        for (k, w) in self.weights.iter().enumerate() {
            acc.add(w * f(k));
        }
        acc.value()
    }

    /// Standard error of the weighted mean of `f`, treating weights as a
    /// probability vector.
    pub fn standard_error(&self, f: impl Fn(&ClassicalState) -> f64) -> f64 {
        if self.len() < 2 {
            return 0.0;
        }
        let mu = self.mean(&f);
        let var = self.mean(|s| (f(s) - mu).powi(2));
        let eff = 1.0 / self.weights.iter().map(|w| w * w).sum::<f64>();
        (var / (eff - 1.0).max(1.0)).sqrt()
    }

    pub fn max_amplitude(&self) -> f64 {
        self.samples.iter().map(ClassicalState::max_amplitude).fold(0.0, f64::max)
    }

    /// Columns `t, φ_1…φ_N, π_1…π_N, weight`.
    pub fn to_csv(&self) -> String {
        let mut out = csv_header(self.modes());
        out.insert_str(out.len() - 1, ",weight");
        for (s, w) in self.samples.iter().zip(&self.weights) {
            let mut row = csv_row(self.time, s);
            row.insert_str(row.len() - 1, &format!(",{w:e}"));
            out.push_str(&row);
        }
        out
    }
}

/// Draw `count` equal-weight samples; identical seeds give identical ensembles.
pub fn sample_ensemble(d: &DistributionSpec, count: usize) -> Result<Ensemble> {
    if count == 0 {
        return Err(Error::InvalidDistribution("sample count must be at least 1".into()));
    }
    d.validate()?;
    let mut rng = ChaCha20Rng::seed_from_u64(d.seed);
    let samples: Vec<ClassicalState> = (0..count)
        .map(|_| match &d.kind {
            DistributionKind::Delta { state } => state.clone(),
            DistributionKind::ProductGaussian { mean, std_phi, std_pi } => {
                let mut draw = |m: f64, s: f64| m + s * rng.sample::<f64, _>(StandardNormal);
                let phi = mean.phi.iter().zip(std_phi).map(|(m, s)| draw(*m, *s)).collect();
                let pi = mean.pi.iter().zip(std_pi).map(|(m, s)| draw(*m, *s)).collect();
                ClassicalState { phi, pi }
            }
            DistributionKind::UniformBox { lower, upper } => {
                let flat: Vec<f64> =
                    lower.to_flat().iter().zip(upper.to_flat()).map(|(l, u)| l + (u - l) * rng.gen::<f64>()).collect();
                ClassicalState::from_flat(&flat)
            }
        })
        .collect();
    let mut e = Ensemble::uniform(samples)?;
    e.distribution = Some(d.clone());
    Ok(e)
}

/// Advance every sample by `t`, keeping weights and order.
pub fn evolve_ensemble(h: &HamiltonianSpec, e: &Ensemble, t: f64, dt: f64, method: Method) -> Result<Ensemble> {
    let samples = e
        .samples
        .iter()
        .enumerate()
        .map(|(k, s)| integrate_final(h, s, t, dt, method).map_err(|err| err.context(format!("sample {k}"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(Ensemble { samples, weights: e.weights.clone(), time: e.time + t, distribution: e.distribution.clone() })
}
