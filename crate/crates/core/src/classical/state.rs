use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point `(φ, π)` of the classical phase space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassicalState {
    pub phi: Vec<f64>,
    pub pi: Vec<f64>,
}

impl ClassicalState {
    pub fn new(phi: Vec<f64>, pi: Vec<f64>) -> Result<Self> {
        let s = Self { phi, pi };
        s.validate()?;
        Ok(s)
    }

    pub fn origin(modes: usize) -> Self {
        Self { phi: vec![0.0; modes], pi: vec![0.0; modes] }
    }

    /// Single-mode convenience constructor.
    pub fn single(phi: f64, pi: f64) -> Self {
        Self { phi: vec![phi], pi: vec![pi] }
    }

    pub fn validate(&self) -> Result<()> {
        if self.phi.len() != self.pi.len() {
            return Err(Error::DimensionMismatch { expected: self.phi.len(), got: self.pi.len() });
        }
        if self.phi.is_empty() {
            return Err(Error::Config("classical state has no modes".into()));
        }
        if self.phi.iter().chain(&self.pi).any(|x| !x.is_finite()) {
            return Err(Error::Config("classical state has non-finite entries".into()));
        }
        Ok(())
    }

    pub fn modes(&self) -> usize {
        self.phi.len()
    }

    pub(crate) fn check_modes(&self, modes: usize) -> Result<()> {
        if self.phi.len() != modes || self.pi.len() != modes {
            return Err(Error::DimensionMismatch { expected: modes, got: self.phi.len().max(self.pi.len()) });
        }
        Ok(())
    }

    /// `z_j = (φ_j + iπ_j)/√2`, 1-based.
    pub fn z(&self, j: usize) -> Complex64 {
        Complex64::new(self.phi[j - 1], self.pi[j - 1]) * std::f64::consts::FRAC_1_SQRT_2
    }

    /// Largest per-mode coherent amplitude `max_j |z_j|`.
    pub fn max_amplitude(&self) -> f64 {
        (1..=self.modes()).map(|j| self.z(j).norm()).fold(0.0, f64::max)
    }

    /// Flattened `(φ_1…φ_N, π_1…π_N)`.
    pub fn to_flat(&self) -> Vec<f64> {
        self.phi.iter().chain(&self.pi).copied().collect()
    }

    pub(crate) fn from_flat(x: &[f64]) -> Self {
        let n = x.len() / 2;
        Self { phi: x[..n].to_vec(), pi: x[n..].to_vec() }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.to_flat().iter().zip(other.to_flat()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(ClassicalState::new(vec![1.0], vec![0.0, 1.0]).is_err());
        assert!(ClassicalState::new(vec![f64::NAN], vec![0.0]).is_err());
        assert!(ClassicalState::new(vec![], vec![]).is_err());
        let s = ClassicalState::new(vec![1.0, 2.0], vec![0.0, -1.0]).unwrap();
        assert_eq!(s.modes(), 2);
        assert_eq!(ClassicalState::from_flat(&s.to_flat()), s);
    }

    #[test]
    fn complex_chart() {
        let s = ClassicalState::single(1.0, 1.0);
        assert!((s.z(1) - Complex64::new(1.0, 1.0) / 2f64.sqrt()).norm() < 1e-15);
        assert!((s.max_amplitude() - 1.0).abs() < 1e-15);
    }
}
