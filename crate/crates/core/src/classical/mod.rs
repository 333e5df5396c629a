//! Classical Hamiltonian mechanics on the phase space `(φ_1…φ_N, π_1…π_N)`.

mod ensemble;
mod hamiltonian;
mod integrate;
mod state;

pub use ensemble::{evolve_ensemble, sample_ensemble, DistributionKind, DistributionSpec, Ensemble};
pub use hamiltonian::{energy, lagrange_euler_rhs, HamiltonianSpec};
pub(crate) use integrate::step_plan;
pub use integrate::{integrate, Method, Trajectory, IMPLICIT_MAX_ITERATIONS, IMPLICIT_TOLERANCE};
pub use state::ClassicalState;

/// Neumaier-compensated summation.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Neumaier {
    sum: f64,
    compensation: f64,
}

impl Neumaier {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}
