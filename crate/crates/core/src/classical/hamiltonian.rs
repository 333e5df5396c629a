use serde::{Serialize, Serializer};

use super::state::ClassicalState;
use crate::error::{Error, Result};
use crate::symbolic::{parse_phipi, CompiledPolynomial, PhiPiPolynomial, Variable, DEFAULT_DEGREE_CAP};

/// A real polynomial Hamiltonian with precompiled gradients.
#[derive(Clone, Debug)]
pub struct HamiltonianSpec {
    h: PhiPiPolynomial,
    energy: CompiledPolynomial,
    d_phi: Vec<CompiledPolynomial>,
    d_pi: Vec<CompiledPolynomial>,
}

impl HamiltonianSpec {
    pub fn new(h: PhiPiPolynomial) -> Result<Self> {
        Self::with_cap(h, DEFAULT_DEGREE_CAP)
    }

    pub fn with_cap(h: PhiPiPolynomial, cap: u32) -> Result<Self> {
        if !h.is_real() {
            return Err(Error::Config(format!("Hamiltonian {h} has non-real coefficients")));
        }
        h.check_degree(cap)?;
        let n = h.modes();
        let d_phi = (1..=n).map(|j| h.partial_derivative(Variable::Phi(j)).map(|p| p.compile())).collect::<Result<_>>()?;
        let d_pi = (1..=n).map(|j| h.partial_derivative(Variable::Pi(j)).map(|p| p.compile())).collect::<Result<_>>()?;
        Ok(Self { energy: h.compile(), h, d_phi, d_pi })
    }

    pub fn parse(text: &str, modes: usize) -> Result<Self> {
        Self::new(parse_phipi(text, Some(modes))?)
    }

    /// `Σ_j (φ_j² + π_j²)/2`.
    pub fn harmonic(modes: usize) -> Self {
        Self::new(PhiPiPolynomial::harmonic(modes)).expect("harmonic Hamiltonian is real and quadratic")
    }

    /// `Σ_j (φ_j² + π_j²)/2 + λ φ_j⁴` with `λ = num/den`.
    pub fn quartic(modes: usize, num: i64, den: i64) -> Self {
        Self::new(PhiPiPolynomial::quartic(modes, num, den)).expect("quartic Hamiltonian is real")
    }

    pub fn modes(&self) -> usize {
        self.h.modes()
    }

    pub fn polynomial(&self) -> &PhiPiPolynomial {
        &self.h
    }

    pub(crate) fn rhs_into(&self, phi: &[f64], pi: &[f64], phidot: &mut [f64], pidot: &mut [f64]) {
        for j in 0..self.modes() {
            phidot[j] = self.d_pi[j].evaluate_real(phi, pi);
            pidot[j] = -self.d_phi[j].evaluate_real(phi, pi);
        }
    }
}

impl Serialize for HamiltonianSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.h.to_string())
    }
}

/// `(φ̇_j, π̇_j) = (∂H/∂π_j, −∂H/∂φ_j)`.
pub fn lagrange_euler_rhs(h: &HamiltonianSpec, s: &ClassicalState) -> Result<(Vec<f64>, Vec<f64>)> {
    s.check_modes(h.modes())?;
    let n = h.modes();
    let (mut phidot, mut pidot) = (vec![0.0; n], vec![0.0; n]);
    h.rhs_into(&s.phi, &s.pi, &mut phidot, &mut pidot);
    Ok((phidot, pidot))
}

pub fn energy(h: &HamiltonianSpec, s: &ClassicalState) -> Result<f64> {
    s.check_modes(h.modes())?;
    Ok(h.energy.evaluate_real(&s.phi, &s.pi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::Exact;

    #[test]
    fn harmonic_rhs() {
        let h = HamiltonianSpec::harmonic(1);
        let (p, q) = lagrange_euler_rhs(&h, &ClassicalState::single(0.3, -0.7)).unwrap();
        assert!((p[0] + 0.7).abs() < 1e-15 && (q[0] + 0.3).abs() < 1e-15);
    }

    #[test]
    fn quartic_rhs_and_energy() {
        let h = HamiltonianSpec::quartic(1, 1, 10);
        let s = ClassicalState::single(1.0, 0.0);
        let (p, q) = lagrange_euler_rhs(&h, &s).unwrap();
        assert_eq!(p[0], 0.0);
        assert!((q[0] + 1.4).abs() < 1e-14);
        assert!((energy(&h, &s).unwrap() - 0.6).abs() < 1e-14);
        assert!((energy(&HamiltonianSpec::harmonic(1), &s).unwrap() - 0.5).abs() < 1e-15);
        let (p0, q0) = lagrange_euler_rhs(&h, &ClassicalState::single(0.0, 0.0)).unwrap();
        assert_eq!((p0[0], q0[0]), (0.0, 0.0));
    }

    #[test]
    fn rejects_complex_and_high_degree() {
        let complex = PhiPiPolynomial::phi(1, 1).scale(&Exact::i());
        assert!(HamiltonianSpec::new(complex).is_err());
        assert!(HamiltonianSpec::with_cap(PhiPiPolynomial::quartic(1, 1, 10), 3).is_err());
        assert!(lagrange_euler_rhs(&HamiltonianSpec::harmonic(2), &ClassicalState::single(1.0, 0.0)).is_err());
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let h = HamiltonianSpec::parse("(phi[1]^2 + pi[1]^2)/2 + 0.1*phi[1]^4 + 0.3*phi[1]*pi[2]^3 + phi[2]^2*pi[1]", 2).unwrap();
        let s = ClassicalState::new(vec![0.4, -0.9], vec![1.1, 0.25]).unwrap();
        let (phidot, pidot) = lagrange_euler_rhs(&h, &s).unwrap();
        let step = 1e-5;
        for j in 0..2 {
            let shifted = |dphi: f64, dpi: f64| {
                let mut t = s.clone();
                t.phi[j] += dphi;
                t.pi[j] += dpi;
                energy(&h, &t).unwrap()
            };
            let dh_dpi = (shifted(0.0, step) - shifted(0.0, -step)) / (2.0 * step);
            let dh_dphi = (shifted(step, 0.0) - shifted(-step, 0.0)) / (2.0 * step);
            assert!((phidot[j] - dh_dpi).abs() < 1e-6);
            assert!((pidot[j] + dh_dphi).abs() < 1e-6);
        }
    }
}
