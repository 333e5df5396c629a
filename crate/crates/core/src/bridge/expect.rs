//! Expectation values against the classical density matrix.

use num_complex::Complex64;
use serde::Serialize;

use super::cutoff::poisson_cdf;
use super::density::DensityMatrix;
use crate::classical::Ensemble;
use crate::error::{Error, Result};
use crate::fock::{field_phi, field_pi, trace_product};
use crate::symbolic::{evaluate_matrix, PhiPiPolynomial, DEFAULT_DEGREE_CAP};

/// A real expectation value with the discarded imaginary part.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Expectation {
    pub value: f64,
    pub imaginary_residue: f64,
}

impl From<Complex64> for Expectation {
    fn from(c: Complex64) -> Self {
        Self { value: c.re, imaginary_residue: c.im }
    }
}

/// `Tr(ρ Φ_j)`.
pub fn expect_field(rho: &DensityMatrix, j: usize) -> Result<Expectation> {
    Ok(trace_product(rho.matrix(), &field_phi(j, rho.basis())?)?.into())
}

/// `Tr(ρ Π_j)`.
pub fn expect_momentum(rho: &DensityMatrix, j: usize) -> Result<Expectation> {
    Ok(trace_product(rho.matrix(), &field_pi(j, rho.basis())?)?.into())
}

/// `Tr(ρ g_n(Φ, Π))`. The cutoff must exceed the degree of `g`, so that
/// every monomial of `g_n` acts without underflow on part of the basis.
pub fn expect_normal(rho: &DensityMatrix, g: &PhiPiPolynomial) -> Result<Complex64> {
    g.check_degree(DEFAULT_DEGREE_CAP)?;
    if g.modes() != rho.basis().modes() {
        return Err(Error::DimensionMismatch { expected: rho.basis().modes(), got: g.modes() });
    }
    if rho.basis().cutoff() <= g.degree() as usize {
        return Err(Error::InsufficientMargin { cutoff: rho.basis().cutoff(), degree: g.degree() });
    }
    trace_product(rho.matrix(), &evaluate_matrix(&g.substitute_normal(), rho.basis())?)
}

/// Bound on `|Tr(ρ g_n) − ⟨g⟩|` caused by truncating each coherent state.
///
/// For `w` the truncated closed form, `⟨w|(a⁺)^I a^J|w⟩ = z̄^I z^J Π_j F_j`
/// with `F_j` the Poisson CDF of `|z_j|²` at `M − max(I_j, J_j)`, so each
/// normal-ordered term is off by exactly `|c z̄^I z^J| (1 − Π_j F_j)`.
pub fn normal_truncation_bound(e: &Ensemble, g: &PhiPiPolynomial, cutoff: usize) -> f64 {
    let gn = g.substitute_normal();
    let mut total = 0.0;
    for (s, w) in e.samples.iter().zip(&e.weights) {
        let lambdas: Vec<f64> = (1..=s.modes()).map(|j| s.z(j).norm_sqr()).collect();
        let mut per_sample = 0.0;
        for (mono, c) in gn.terms() {
            let mut magnitude = c.to_complex().norm();
            let mut kept = 1.0;
            for (j, lambda) in lambdas.iter().enumerate() {
                let (i_j, k_j) = (mono.create[j], mono.annihilate[j]);
                magnitude *= lambda.sqrt().powi((i_j + k_j) as i32);
                kept *= poisson_cdf(*lambda, cutoff as i64 - i_j.max(k_j) as i64);
            }
            per_sample += magnitude * (1.0 - kept).max(0.0);
        }
        total += w * per_sample;
    }
    total
}
