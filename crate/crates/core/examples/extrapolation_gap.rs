//! <g> at a later time: Heisenberg picture versus classical evolution.
//! Quadratic H agrees; the quartic H does not.

use fockbridge::bridge::eq10_gap;
use fockbridge::classical::{ClassicalState, Ensemble, HamiltonianSpec};
use fockbridge::fock::FockBasis;
use fockbridge::symbolic::PhiPiPolynomial;

fn main() -> fockbridge::Result<()> {
    let e = Ensemble::pure(ClassicalState::single(1.5, 0.0));
    let g = PhiPiPolynomial::phi(1, 1).pow(2);
    for (label, h, t) in [("harmonic", HamiltonianSpec::harmonic(1), 0.7), ("quartic", HamiltonianSpec::quartic(1, 1, 10), 1.0)] {
        let r = eq10_gap(&e, &h, &g, FockBasis::new(1, 30)?, t, 1e-3)?;
        println!(
            "{label:>8}: quantum {:.8} classical {:.8} gap {:.2e} budget {:.2e} claim {:?} passed {}",
            r.lhs_re, r.rhs_re, r.abs_gap, r.tolerance, r.claim, r.passed
        );
    }
    Ok(())
}
