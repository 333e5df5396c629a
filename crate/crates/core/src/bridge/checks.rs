//! Numerical verification of the classical/quantum correspondences.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::density::{density_from_ensemble, DensityMatrix};
use super::expect::{expect_field, expect_momentum, expect_normal, normal_truncation_bound};
use super::heisenberg::{conjugate, hamiltonian_matrix, observable_matrix, propagator};
use super::report::{Claim, EquivalenceReport, Tolerances};
use super::states::coherent_vector_with_bound;
use crate::classical::{evolve_ensemble, lagrange_euler_rhs, ClassicalState, Ensemble, HamiltonianSpec, Method};
use crate::error::{Error, Result};
use crate::fock::{
    annihilation_matrix, commutator, creation_matrix, field_phi, field_pi, linalg, trace_product, FockBasis,
    OperatorMatrix,
};
use crate::symbolic::{evaluate_matrix, Exact, PhiPiPolynomial, Variable};

/// Float tolerance for the Eq. 8 and Eq. 9 identities.
pub const IDENTITY_TOLERANCE: f64 = 1e-8;
/// Float tolerance for rate identities and the finite-difference cross-check.
pub const RATE_TOLERANCE: f64 = 1e-6;
/// Cutoff increment used to estimate truncation error by convergence.
pub const CUTOFF_PROBE: usize = 4;
/// Ratio by which an Eq. 10 gap must exceed its error budget to count as real.
pub const DISCREPANCY_FACTOR: f64 = 10.0;

/// Which first-order rate is compared.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rate {
    /// `φ̇_j` against `−i[Φ_j, H_n]`.
    Phi,
    /// `π̇_j` against `−i[Π_j, H_n]`.
    Pi,
    /// `ż_j` against `−i[a_j, H_n]`.
    Z,
    /// `ẏ_j` against `−i[a_j⁺, H_n]`.
    Y,
}

impl Rate {
    pub const ALL: [Rate; 4] = [Rate::Phi, Rate::Pi, Rate::Z, Rate::Y];

    fn operator(self, j: usize, basis: FockBasis) -> Result<OperatorMatrix> {
        match self {
            Rate::Phi => field_phi(j, basis),
            Rate::Pi => field_pi(j, basis),
            Rate::Z => annihilation_matrix(j, basis),
            Rate::Y => creation_matrix(j, basis),
        }
    }

    /// The classical rate as a polynomial in `(φ, π)`.
    fn polynomial(self, h: &PhiPiPolynomial, j: usize) -> Result<PhiPiPolynomial> {
        Ok(match self {
            Rate::Phi => h.partial_derivative(Variable::Pi(j))?,
            Rate::Pi => h.partial_derivative(Variable::Phi(j))?.scale(&Exact::from_integer(-1)),
            Rate::Z => h.partial_derivative(Variable::Y(j))?.scale(&-Exact::i()),
            Rate::Y => h.partial_derivative(Variable::Z(j))?.scale(&Exact::i()),
        })
    }

    fn classical(self, h: &HamiltonianSpec, s: &ClassicalState, j: usize) -> Result<Complex64> {
        let (phidot, pidot) = lagrange_euler_rhs(h, s)?;
        let (p, q) = (phidot[j - 1], pidot[j - 1]);
        Ok(match self {
            Rate::Phi => Complex64::new(p, 0.0),
            Rate::Pi => Complex64::new(q, 0.0),
            Rate::Z => Complex64::new(p, q) * FRAC_1_SQRT_2,
            Rate::Y => Complex64::new(p, -q) * FRAC_1_SQRT_2,
        })
    }

    fn name(self) -> &'static str {
        match self {
            Rate::Phi => "phi",
            Rate::Pi => "pi",
            Rate::Z => "z",
            Rate::Y => "y",
        }
    }
}

fn complex_mean(e: &Ensemble, f: impl Fn(&ClassicalState) -> Result<Complex64>) -> Result<Complex64> {
    let values = e.samples.iter().map(f).collect::<Result<Vec<_>>>()?;
    let re = e.mean_indexed(|k| values[k].re);
    let im = e.mean_indexed(|k| values[k].im);
    Ok(Complex64::new(re, im))
}

/// Bound on `|Tr(ρ D)|` for an operator defect `D` that vanishes between
/// interior kets: `2‖D‖ Σ_k w_k ‖P_B w_k‖ ‖w_k‖`, where `B` collects the
/// kets touched by a non-negligible entry of `D`.
fn defect_bound(defect: &DMatrix<Complex64>, e: &Ensemble, basis: FockBasis) -> Result<f64> {
    let scale = defect.iter().map(|x| x.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(0.0);
    }
    let threshold = 1e-12 * scale.max(1.0);
    let n = defect.nrows();
    let boundary: Vec<usize> = (0..n)
        .filter(|&i| (0..n).any(|k| defect[(i, k)].norm() > threshold || defect[(k, i)].norm() > threshold))
        .collect();
    let norm = linalg::operator_norm(defect);
    let mut total = 0.0;
    for (s, w) in e.samples.iter().zip(&e.weights) {
        let v = coherent_vector_with_bound(s, basis, 1.0)?;
        let c = v.coefficients();
        let outside: f64 = boundary.iter().map(|&i| c[i].norm_sqr()).sum::<f64>().sqrt();
        total += w * 2.0 * norm * outside * v.norm();
    }
    // Entries below the threshold are float noise; charge them in full.
    let noise: f64 = defect.iter().filter(|x| x.norm() <= threshold).map(|x| x.norm()).sum();
    Ok(total + noise)
}

/// Compare `−i Tr(ρ [O_j, H_n])` with the ensemble average of the matching
/// classical rate, and cross-check the operator side against a central
/// difference of `Tr(ρ O_j(t))` at `±fd_step`.
pub fn check_rate(
    e: &Ensemble,
    h: &HamiltonianSpec,
    rate: Rate,
    j: usize,
    basis: FockBasis,
    fd_step: f64,
) -> Result<EquivalenceReport> {
    if !(fd_step > 0.0) {
        return Err(Error::Config(format!("finite-difference step must be positive, got {fd_step}")));
    }
    basis.check_mode(j)?;
    let rho = density_from_ensemble(e, basis)?;
    let hm = hamiltonian_matrix(h, basis)?;
    let op = rate.operator(j, basis)?;
    let minus_i = Complex64::new(0.0, -1.0);
    let c = commutator(&op, &hm)?.scale(minus_i);
    let lhs = trace_product(rho.matrix(), &c)?;
    let rhs = complex_mean(e, |s| rate.classical(h, s, j))?;

    let rate_poly = rate.polynomial(h.polynomial(), j)?;
    let exact = evaluate_matrix(&rate_poly.substitute_normal(), basis)?;
    let defect = c.sub(&exact)?.into_dense();
    let truncation = defect_bound(&defect, e, basis)? + normal_truncation_bound(e, &rate_poly, basis.cutoff());

    let u = propagator(&hm, fd_step)?;
    let forward = trace_product(rho.matrix(), &conjugate(&op, &u)?)?;
    let backward = trace_product(rho.matrix(), &conjugate(&op, &u.adjoint())?)?;
    let fd = (forward - backward) / (2.0 * fd_step);
    let fd_gap = (fd - lhs).norm();

    let tolerances = Tolerances { float_error: RATE_TOLERANCE, truncation, monte_carlo: 0.0 };
    Ok(EquivalenceReport::new(
        format!("eq6-{}{}", rate.name(), j),
        lhs,
        rhs,
        tolerances,
        Claim::Agreement,
        basis.into(),
        e.seed(),
    )
    .with_detail("fd_re", fd.re)
    .with_detail("fd_im", fd.im)
    .with_detail("fd_gap", fd_gap)
    .with_detail("fd_step", fd_step)
    .require("fd", fd_gap <= RATE_TOLERANCE))
}

/// `d⟨φ_j⟩/dt`: `−i Tr(ρ[Φ_j, H_n])` against `⟨∂H/∂π_j⟩`.
pub fn check_eq6(e: &Ensemble, h: &HamiltonianSpec, j: usize, basis: FockBasis, fd_step: f64) -> Result<EquivalenceReport> {
    check_rate(e, h, Rate::Phi, j, basis, fd_step)
}

/// `d⟨π_j⟩/dt`: `−i Tr(ρ[Π_j, H_n])` against `−⟨∂H/∂φ_j⟩`.
pub fn check_eq6_pi(e: &Ensemble, h: &HamiltonianSpec, j: usize, basis: FockBasis, fd_step: f64) -> Result<EquivalenceReport> {
    check_rate(e, h, Rate::Pi, j, basis, fd_step)
}

/// `Tr(ρ Φ_j)` (or `Π_j`) against the ensemble mean of `φ_j` (or `π_j`).
pub fn verify_field(e: &Ensemble, j: usize, momentum: bool, basis: FockBasis) -> Result<EquivalenceReport> {
    let rho = density_from_ensemble(e, basis)?;
    let (value, g, name) = if momentum {
        (expect_momentum(&rho, j)?, PhiPiPolynomial::pi(basis.modes(), j), "pi")
    } else {
        (expect_field(&rho, j)?, PhiPiPolynomial::phi(basis.modes(), j), "phi")
    };
    let rhs = e.mean(|s| if momentum { s.pi[j - 1] } else { s.phi[j - 1] });
    let tolerances = Tolerances {
        float_error: IDENTITY_TOLERANCE,
        truncation: normal_truncation_bound(e, &g, basis.cutoff()),
        monte_carlo: 0.0,
    };
    Ok(EquivalenceReport::new(
        format!("eq8-{name}{j}"),
        Complex64::new(value.value, 0.0),
        Complex64::new(rhs, 0.0),
        tolerances,
        Claim::Agreement,
        basis.into(),
        e.seed(),
    )
    .with_detail("imaginary_residue", value.imaginary_residue)
    .require("imaginary_residue", value.imaginary_residue.abs() <= 1e-10))
}

/// `Tr(ρ g_n)` against the ensemble mean of `g`.
pub fn verify_normal(e: &Ensemble, g: &PhiPiPolynomial, basis: FockBasis) -> Result<EquivalenceReport> {
    let rho = density_from_ensemble(e, basis)?;
    verify_normal_with(&rho, e, g)
}

pub(crate) fn verify_normal_with(rho: &DensityMatrix, e: &Ensemble, g: &PhiPiPolynomial) -> Result<EquivalenceReport> {
    let lhs = expect_normal(rho, g)?;
    let compiled = g.compile();
    let rhs = complex_mean(e, |s| Ok(compiled.evaluate(&s.phi, &s.pi)))?;
    let tolerances = Tolerances {
        float_error: IDENTITY_TOLERANCE,
        truncation: normal_truncation_bound(e, g, rho.basis().cutoff()),
        monte_carlo: 0.0,
    };
    Ok(EquivalenceReport::new("eq9", lhs, rhs, tolerances, Claim::Agreement, rho.basis().into(), e.seed()))
}

/// The two sides of the extrapolated identity at time `t`:
/// `Tr(ρ(0) G(t))` and `⟨g(φ(t), π(t))⟩`.
///
/// The error budget is estimated by convergence: the integrator by halving
/// `dt`, the truncation by raising the cutoff by [`CUTOFF_PROBE`]. The claim
/// defaults to agreement for quadratic `H` or `t = 0`, and to a discrepancy
/// of more than [`DISCREPANCY_FACTOR`] times the budget otherwise.
pub fn eq10_gap(
    e: &Ensemble,
    h: &HamiltonianSpec,
    g: &PhiPiPolynomial,
    basis: FockBasis,
    t: f64,
    dt: f64,
) -> Result<EquivalenceReport> {
    eq10_gap_with(e, h, g, basis, t, dt, Method::default(), None)
}

#[allow(clippy::too_many_arguments)]
pub fn eq10_gap_with(
    e: &Ensemble,
    h: &HamiltonianSpec,
    g: &PhiPiPolynomial,
    basis: FockBasis,
    t: f64,
    dt: f64,
    method: Method,
    claim: Option<Claim>,
) -> Result<EquivalenceReport> {
    if !(t >= 0.0) {
        return Err(Error::Config(format!("eq10 time must be nonnegative, got {t}")));
    }
    let quantum = |b: FockBasis| -> Result<Complex64> {
        let rho = density_from_ensemble(e, b)?;
        let g0 = observable_matrix(g, b)?;
        let gt = if t == 0.0 { g0 } else { conjugate(&g0, &propagator(&hamiltonian_matrix(h, b)?, t)?)? };
        trace_product(rho.matrix(), &gt)
    };
    let compiled = g.compile();
    let classical = |step: f64| -> Result<Complex64> {
        let evolved = evolve_ensemble(h, e, t, step, method)?;
        complex_mean(&evolved, |s| Ok(compiled.evaluate(&s.phi, &s.pi)))
    };
    let lhs = quantum(basis)?;
    let lhs_probe = quantum(FockBasis::new(basis.modes(), basis.cutoff() + CUTOFF_PROBE)?)?;
    let rhs = classical(dt)?;
    let rhs_half = classical(dt / 2.0)?;
    let cutoff_error = (lhs - lhs_probe).norm() + normal_truncation_bound(e, g, basis.cutoff());
    let integrator_error = (rhs - rhs_half).norm();
    let float_estimate = 1e-10 * (1.0 + lhs.norm() + rhs.norm());
    let claim = claim.unwrap_or(if h.polynomial().is_quadratic() || t == 0.0 {
        Claim::Agreement
    } else {
        Claim::Discrepancy { factor: DISCREPANCY_FACTOR }
    });
    let float_error = match claim {
        Claim::Agreement => RATE_TOLERANCE + float_estimate,
        Claim::Discrepancy { .. } => float_estimate,
    };
    let tolerances = Tolerances { float_error: float_error + integrator_error, truncation: cutoff_error, monte_carlo: 0.0 };
    Ok(EquivalenceReport::new("eq10", lhs, rhs, tolerances, claim, basis.into(), e.seed())
        .with_detail("t", t)
        .with_detail("dt", dt)
        .with_detail("integrator_error", integrator_error)
        .with_detail("cutoff_error", cutoff_error)
        .with_detail("float_estimate", float_estimate))
}

/// Per-mode and total `Tr(ρ (H_sym − H_n))` for `H = Σ_j (φ_j² + π_j²)/2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroPointGap {
    pub per_mode: Vec<f64>,
    pub total: f64,
    /// Exact constant by which the orderings differ, per mode.
    pub symbolic: Vec<String>,
}

pub fn zero_point_gap(rho: &DensityMatrix) -> Result<ZeroPointGap> {
    let basis = rho.basis();
    let n = basis.modes();
    let mut per_mode = Vec::with_capacity(n);
    let mut symbolic = Vec::with_capacity(n);
    for j in 1..=n {
        let hj = PhiPiPolynomial::phi(n, j).pow(2).add(&PhiPiPolynomial::pi(n, j).pow(2)).scale(&Exact::ratio(1, 2));
        let diff = hj.substitute_symmetric().sub(&hj.substitute_normal());
        symbolic.push(diff.to_string());
        per_mode.push(trace_product(rho.matrix(), &evaluate_matrix(&diff, basis)?)?.re);
    }
    let total = per_mode.iter().sum();
    Ok(ZeroPointGap { per_mode, total, symbolic })
}
