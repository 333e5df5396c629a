//! Layered-tolerance comparison records.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::fock::BasisDescriptor;

/// What a check asserts about the two sides.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "claim", rename_all = "kebab-case")]
pub enum Claim {
    /// Pass when `abs_gap ≤ tolerance`.
    Agreement,
    /// Pass when `abs_gap > factor × tolerance`.
    Discrepancy { factor: f64 },
}

/// Error budget: float error, truncation, Monte Carlo.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub float_error: f64,
    pub truncation: f64,
    pub monte_carlo: f64,
}

impl Tolerances {
    pub fn total(&self) -> f64 {
        self.float_error + self.truncation + self.monte_carlo
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub experiment: String,
    pub lhs_re: f64,
    pub lhs_im: f64,
    pub rhs_re: f64,
    pub rhs_im: f64,
    pub abs_gap: f64,
    pub rel_gap: f64,
    pub tolerances: Tolerances,
    pub tolerance: f64,
    #[serde(flatten)]
    pub claim: Claim,
    pub passed: bool,
    pub basis: BasisDescriptor,
    pub seed: Option<u64>,
    /// Auxiliary diagnostics, keyed by name.
    pub details: BTreeMap<String, f64>,
}

impl EquivalenceReport {
    pub fn new(
        experiment: impl Into<String>,
        lhs: Complex64,
        rhs: Complex64,
        tolerances: Tolerances,
        claim: Claim,
        basis: BasisDescriptor,
        seed: Option<u64>,
    ) -> Self {
        let abs_gap = (lhs - rhs).norm();
        let scale = lhs.norm().max(rhs.norm());
        let rel_gap = if scale > 0.0 { abs_gap / scale } else { 0.0 };
        let tolerance = tolerances.total();
        let passed = match claim {
            Claim::Agreement => abs_gap <= tolerance,
            Claim::Discrepancy { factor } => abs_gap > factor * tolerance,
        };
        Self {
            experiment: experiment.into(),
            lhs_re: lhs.re,
            lhs_im: lhs.im,
            rhs_re: rhs.re,
            rhs_im: rhs.im,
            abs_gap,
            rel_gap,
            tolerances,
            tolerance,
            claim,
            passed,
            basis,
            seed,
            details: BTreeMap::new(),
        }
    }

    pub fn lhs(&self) -> Complex64 {
        Complex64::new(self.lhs_re, self.lhs_im)
    }

    pub fn rhs(&self) -> Complex64 {
        Complex64::new(self.rhs_re, self.rhs_im)
    }

    pub fn with_detail(mut self, key: &str, value: f64) -> Self {
        self.details.insert(key.to_string(), value);
        self
    }

    /// Add a secondary requirement; the report fails if it does not hold.
    pub fn require(mut self, key: &str, ok: bool) -> Self {
        self.details.insert(format!("{key}_ok"), if ok { 1.0 } else { 0.0 });
        self.passed &= ok;
        self
    }

    pub const CSV_HEADER: &'static str =
        "experiment,lhs_re,lhs_im,rhs_re,rhs_im,abs_gap,rel_gap,float_error,truncation,monte_carlo,tolerance,claim,passed,modes,cutoff,seed";

    pub fn csv_row(&self) -> String {
        let claim = match self.claim {
            Claim::Agreement => "agreement".to_string(),
            Claim::Discrepancy { factor } => format!("discrepancy>{factor}"),
        };
        format!(
            "{},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{},{},{},{},{}",
            self.experiment,
            self.lhs_re,
            self.lhs_im,
            self.rhs_re,
            self.rhs_im,
            self.abs_gap,
            self.rel_gap,
            self.tolerances.float_error,
            self.tolerances.truncation,
            self.tolerances.monte_carlo,
            self.tolerance,
            claim,
            self.passed,
            self.basis.modes,
            self.basis.cutoff,
            self.seed.map(|s| s.to_string()).unwrap_or_default()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis() -> BasisDescriptor {
        BasisDescriptor { modes: 1, cutoff: 4, dimension: 5 }
    }

    #[test]
    fn agreement_and_discrepancy() {
        let tol = Tolerances { float_error: 1e-8, truncation: 1e-9, monte_carlo: 0.0 };
        let close = EquivalenceReport::new("x", Complex64::new(1.0, 0.0), Complex64::new(1.0 + 5e-9, 0.0), tol, Claim::Agreement, basis(), None);
        assert!(close.passed);
        assert!((close.abs_gap - 5e-9).abs() < 1e-15);
        let far = EquivalenceReport::new("y", Complex64::new(1.0, 0.0), Complex64::new(1.1, 0.0), tol, Claim::Discrepancy { factor: 10.0 }, basis(), Some(3));
        assert!(far.passed);
        assert!(!far.clone().require("side", false).passed);
        assert_eq!(far.csv_row().split(',').count(), EquivalenceReport::CSV_HEADER.split(',').count());
    }

    #[test]
    fn json_round_trip() {
        let r = EquivalenceReport::new("z", Complex64::new(0.5, -0.1), Complex64::new(0.5, 0.0), Tolerances::default(), Claim::Discrepancy { factor: 10.0 }, basis(), Some(1))
            .with_detail("fd_gap", 1e-9);
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"claim\":\"discrepancy\""));
        let back: EquivalenceReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }
}
