//! Rate of change of <Phi> and <Pi> from the commutator with H_n versus the classical flow.

use fockbridge::bridge::{check_eq6, check_eq6_pi};
use fockbridge::classical::{Ensemble, ClassicalState, HamiltonianSpec};
use fockbridge::fock::FockBasis;

fn main() -> fockbridge::Result<()> {
    let h = HamiltonianSpec::quartic(1, 1, 10);
    let e = Ensemble::pure(ClassicalState::single(1.0, 0.5));
    let basis = FockBasis::new(1, 24)?;
    for r in [check_eq6(&e, &h, 1, basis, 1e-4)?, check_eq6_pi(&e, &h, 1, basis, 1e-4)?] {
        println!(
            "{}: operator {:.10} classical {:.10} finite difference {:.10} passed {}",
            r.experiment, r.lhs_re, r.rhs_re, r.details["fd_re"], r.passed
        );
    }
    Ok(())
}
