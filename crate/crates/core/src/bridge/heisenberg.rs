//! Heisenberg-picture evolution `G(t) = U(t)⁺ G(0) U(t)`, `U(t) = exp(−i H_n t)`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::classical::HamiltonianSpec;
use crate::error::{Error, Result};
use crate::fock::{linalg, FockBasis, OperatorMatrix};
use crate::symbolic::{evaluate_matrix, PhiPiPolynomial};

/// `H_n` as a matrix on `basis`.
pub fn hamiltonian_matrix(h: &HamiltonianSpec, basis: FockBasis) -> Result<OperatorMatrix> {
    evaluate_matrix(&h.polynomial().substitute_normal(), basis)
}

/// `g_n(Φ, Π)` as a matrix on `basis`.
pub fn observable_matrix(g: &PhiPiPolynomial, basis: FockBasis) -> Result<OperatorMatrix> {
    evaluate_matrix(&g.substitute_normal(), basis)
}

/// `exp(−i H t)` for a Hermitian `H`.
pub fn propagator(h: &OperatorMatrix, t: f64) -> Result<DMatrix<Complex64>> {
    if !t.is_finite() {
        return Err(Error::ExpmFailed(format!("non-finite time {t}")));
    }
    linalg::expm(&(h.to_dense() * Complex64::new(0.0, -t)))
}

/// `U⁺ G U`.
pub fn conjugate(g: &OperatorMatrix, u: &DMatrix<Complex64>) -> Result<OperatorMatrix> {
    let gd = g.to_dense();
    OperatorMatrix::from_dense(g.basis(), linalg::matmul(&linalg::matmul(&u.adjoint(), &gd), u))
}

/// Heisenberg-picture `G(t)` for `G(0) = g_n(Φ, Π)`, solving
/// `Ġ = −i[G, H_n]` exactly on the truncated space.
pub fn heisenberg_operator(g: &PhiPiPolynomial, h: &HamiltonianSpec, basis: FockBasis, t: f64) -> Result<OperatorMatrix> {
    let g0 = observable_matrix(g, basis)?;
    if t == 0.0 {
        return Ok(g0);
    }
    conjugate(&g0, &propagator(&hamiltonian_matrix(h, basis)?, t)?)
}

/// RK4 integration of `Ġ = −i[G, H_n]` with steps no larger than `dt`.
/// Used to cross-check [`heisenberg_operator`].
pub fn heisenberg_operator_ode(
    g: &PhiPiPolynomial,
    h: &HamiltonianSpec,
    basis: FockBasis,
    t: f64,
    dt: f64,
) -> Result<OperatorMatrix> {
    let mut x = observable_matrix(g, basis)?.into_dense();
    let Some((steps, step)) = crate::classical::step_plan(t, dt) else {
        return OperatorMatrix::from_dense(basis, x);
    };
    let hm = hamiltonian_matrix(h, basis)?.into_dense();
    let minus_i = Complex64::new(0.0, -1.0);
    let rhs = |m: &DMatrix<Complex64>| (linalg::matmul(m, &hm) - linalg::matmul(&hm, m)) * minus_i;
    let half = Complex64::new(step / 2.0, 0.0);
    let full = Complex64::new(step, 0.0);
    for _ in 0..steps {
        let k1 = rhs(&x);
        let k2 = rhs(&(&x + &k1 * half));
        let k3 = rhs(&(&x + &k2 * half));
        let k4 = rhs(&(&x + &k3 * full));
        x += (k1 + k2 * Complex64::new(2.0, 0.0) + k3 * Complex64::new(2.0, 0.0) + k4) * Complex64::new(step / 6.0, 0.0);
    }
    OperatorMatrix::from_dense(basis, x)
}
