//! Classical ensembles as density matrices, and the checks that compare
//! their quantum and classical statistics.

mod checks;
mod cutoff;
mod density;
mod expect;
mod heisenberg;
mod report;
mod states;

pub use checks::{
    check_eq6, check_eq6_pi, check_rate, eq10_gap, eq10_gap_with, verify_field, verify_normal, zero_point_gap, Rate,
    ZeroPointGap, CUTOFF_PROBE, DISCREPANCY_FACTOR, IDENTITY_TOLERANCE, RATE_TOLERANCE,
};
pub use cutoff::{cutoff_estimate, poisson_cdf, poisson_tail, required_cutoff, state_tail};
pub use density::{density_from_ensemble, density_from_ensemble_with_bound, DensityMatrix};
pub use expect::{expect_field, expect_momentum, expect_normal, normal_truncation_bound, Expectation};
pub use heisenberg::{
    conjugate, hamiltonian_matrix, heisenberg_operator, heisenberg_operator_ode, observable_matrix, propagator,
};
pub use report::{Claim, EquivalenceReport, Tolerances};
pub use states::{
    coherent_vector, coherent_vector_with_bound, displacement_generator, displacement_vector, v_vector, v_vector_real,
    DEFAULT_TAIL_BOUND,
};
