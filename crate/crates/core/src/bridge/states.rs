//! Moment vectors, coherent states and displacement operators.

use nalgebra::DVector;
use num_complex::Complex64;

use super::cutoff::{required_cutoff, state_tail};
use crate::classical::ClassicalState;
use crate::error::{Error, Result};
use crate::fock::{annihilation_matrix, creation_matrix, linalg, FockBasis, FockVector, OperatorMatrix};

/// Default bound on the discarded probability mass of a coherent state.
pub const DEFAULT_TAIL_BOUND: f64 = 1e-8;

/// Per-mode coefficient tables `t_j[n]`, multiplied over modes for each ket.
fn product_vector(basis: FockBasis, tables: &[Vec<Complex64>]) -> FockVector {
    let coefficients = DVector::from_fn(basis.dimension(), |k, _| {
        tables.iter().enumerate().map(|(j, t)| t[basis.occupation(k, j + 1)]).product()
    });
    FockVector::new(basis, coefficients).expect("dimension follows the basis")
}

fn inv_sqrt_factorials(cutoff: usize) -> Vec<f64> {
    let mut out = vec![1.0; cutoff + 1];
    for n in 1..=cutoff {
        out[n] = out[n - 1] / (n as f64).sqrt();
    }
    out
}

/// `v(y) = Σ Π_j y_j^{i_j}/√(i_j!) |i_1…i_N⟩`, truncated at the cutoff.
pub fn v_vector(y: &[Complex64], basis: FockBasis) -> Result<FockVector> {
    if y.len() != basis.modes() {
        return Err(Error::DimensionMismatch { expected: basis.modes(), got: y.len() });
    }
    let scale = inv_sqrt_factorials(basis.cutoff());
    let tables: Vec<Vec<Complex64>> =
        y.iter().map(|&yj| (0..=basis.cutoff()).map(|n| yj.powu(n as u32) * scale[n]).collect()).collect();
    Ok(product_vector(basis, &tables))
}

/// Real-argument form of [`v_vector`].
pub fn v_vector_real(phi: &[f64], basis: FockBasis) -> Result<FockVector> {
    let y: Vec<Complex64> = phi.iter().map(|&p| Complex64::new(p, 0.0)).collect();
    v_vector(&y, basis)
}

fn check_tail(s: &ClassicalState, basis: FockBasis, bound: f64) -> Result<f64> {
    s.check_modes(basis.modes())?;
    let tail = state_tail(s, basis.cutoff());
    if tail > bound {
        return Err(Error::CutoffTooSmall { cutoff: basis.cutoff(), tail, bound, required: required_cutoff(s, bound) });
    }
    Ok(tail)
}

/// The coherent state `w(φ, π)` with per-mode coefficients
/// `exp(−|z_j|²/2) z_j^n/√(n!)`, `z_j = (φ_j + iπ_j)/√2`.
///
/// The closed form is kept on the truncated space, so `‖w‖² = 1 − tail`.
pub fn coherent_vector(s: &ClassicalState, basis: FockBasis) -> Result<FockVector> {
    coherent_vector_with_bound(s, basis, DEFAULT_TAIL_BOUND)
}

pub fn coherent_vector_with_bound(s: &ClassicalState, basis: FockBasis, bound: f64) -> Result<FockVector> {
    check_tail(s, basis, bound)?;
    let scale = inv_sqrt_factorials(basis.cutoff());
    let tables: Vec<Vec<Complex64>> = (1..=basis.modes())
        .map(|j| {
            let z = s.z(j);
            let envelope = (-0.5 * z.norm_sqr()).exp();
            (0..=basis.cutoff()).map(|n| z.powu(n as u32) * (envelope * scale[n])).collect()
        })
        .collect();
    Ok(product_vector(basis, &tables))
}

/// The anti-Hermitian generator `Σ_j (z_j a_j⁺ − z̄_j a_j)`.
pub fn displacement_generator(s: &ClassicalState, basis: FockBasis) -> Result<OperatorMatrix> {
    s.check_modes(basis.modes())?;
    let mut g = OperatorMatrix::zeros(basis);
    for j in 1..=basis.modes() {
        let z = s.z(j);
        let term = creation_matrix(j, basis)?.scale(z).sub(&annihilation_matrix(j, basis)?.scale(z.conj()))?;
        g = g.add(&term)?;
    }
    Ok(g)
}

/// `exp(Σ_j (z_j a_j⁺ − z̄_j a_j)) |0⟩` via the matrix exponential.
pub fn displacement_vector(s: &ClassicalState, basis: FockBasis) -> Result<FockVector> {
    check_tail(s, basis, DEFAULT_TAIL_BOUND)?;
    let u = linalg::expm(&displacement_generator(s, basis)?.into_dense())?;
    FockVector::new(basis, u.column(basis.vacuum_index()).into_owned())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bridge::cutoff_estimate;

    fn basis(modes: usize, cutoff: usize) -> FockBasis {
        FockBasis::new(modes, cutoff).unwrap()
    }

    #[test]
    fn v_at_origin_is_vacuum() {
        let b = basis(2, 4);
        let v = v_vector_real(&[0.0, 0.0], b).unwrap();
        assert_eq!(v, FockVector::vacuum(b));
    }

    #[test]
    fn v_single_mode_coefficients() {
        let b = basis(1, 4);
        let v = v_vector_real(&[1.0], b).unwrap();
        let expected = [1.0, 1.0, 1.0 / 2f64.sqrt(), 1.0 / 6f64.sqrt(), 1.0 / 24f64.sqrt()];
        for (n, e) in expected.iter().enumerate() {
            assert!((v.get(&[n]).re - e).abs() < 1e-15);
        }
    }

    #[test]
    fn v_norm_is_exponential() {
        let y = [Complex64::new(0.9, -0.6), Complex64::new(-0.3, 1.1)];
        let amp = y.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let b = basis(2, cutoff_estimate(amp, 1e-12));
        let v = v_vector(&y, b).unwrap();
        let expected = y.iter().map(|c| c.norm_sqr()).sum::<f64>().exp();
        assert!((v.norm_sqr() / expected - 1.0).abs() < 1e-9);
    }

    #[test]
    fn coherent_origin_is_vacuum() {
        let b = basis(2, 3);
        assert_eq!(coherent_vector(&ClassicalState::origin(2), b).unwrap(), FockVector::vacuum(b));
    }

    #[test]
    fn coherent_is_eigenvector_off_the_boundary() {
        let s = ClassicalState::single(1.2, -0.7);
        let b = basis(1, 30);
        let w = coherent_vector(&s, b).unwrap();
        assert!((w.norm() - 1.0).abs() < 1e-12);
        let aw = annihilation_matrix(1, b).unwrap().apply(&w).unwrap();
        assert!(aw.sub(&w.scale(s.z(1))).norm() < 1e-10);
    }

    #[test]
    fn coherent_rejects_small_cutoff() {
        let s = ClassicalState::single(3.0, 0.0);
        match coherent_vector(&s, basis(1, 4)) {
            Err(Error::CutoffTooSmall { required, cutoff: 4, .. }) => {
                assert!(coherent_vector(&s, basis(1, required)).is_ok());
                assert!(coherent_vector(&s, basis(1, required - 1)).is_err());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn displacement_matches_closed_form() {
        let s = ClassicalState::new(vec![1.0, -0.4], vec![0.6, 0.9]).unwrap();
        let b = basis(2, 18);
        let d = displacement_vector(&s, b).unwrap();
        let w = coherent_vector(&s, b).unwrap();
        assert!(d.sub(&w).norm() < 1e-8);
        assert!((d.norm() - 1.0).abs() < 1e-10);
        assert_eq!(displacement_vector(&ClassicalState::origin(2), b).unwrap(), FockVector::vacuum(b));
    }
}
