//! Elementary operators: a_j, a_j⁺, N_j, Φ_j, Π_j.

use num_complex::Complex64;

use super::basis::FockBasis;
use super::matrix::OperatorMatrix;
use crate::error::Result;

/// `a_j |…, N_j, …⟩ = √N_j |…, N_j − 1, …⟩`; kets with `N_j = 0` map to zero.
pub fn annihilation_matrix(j: usize, basis: FockBasis) -> Result<OperatorMatrix> {
    basis.check_mode(j)?;
    let stride = basis.stride(j);
    let triplets = (0..basis.dimension()).filter_map(|k| {
        let n = basis.occupation(k, j);
        (n > 0).then(|| (k - stride, k, Complex64::new((n as f64).sqrt(), 0.0)))
    });
    Ok(OperatorMatrix::from_triplets(basis, triplets))
}

/// `a_j⁺ |…, N_j, …⟩ = √(N_j + 1) |…, N_j + 1, …⟩` for `N_j < M`.
///
/// At the cutoff, `a_j⁺ |…, M, …⟩ = 0`, which keeps `a_j⁺` the exact
/// adjoint of the truncated `a_j`. The price is a boundary defect in the
/// CCR: `[a_j, a_j⁺] = I − (M + 1) P_{N_j = M}`.
pub fn creation_matrix(j: usize, basis: FockBasis) -> Result<OperatorMatrix> {
    basis.check_mode(j)?;
    let stride = basis.stride(j);
    let triplets = (0..basis.dimension()).filter_map(|k| {
        let n = basis.occupation(k, j);
        (n < basis.cutoff()).then(|| (k + stride, k, Complex64::new(((n + 1) as f64).sqrt(), 0.0)))
    });
    Ok(OperatorMatrix::from_triplets(basis, triplets))
}

/// `N_j = a_j⁺ a_j`, diagonal with eigenvalue `N_j`.
pub fn number_matrix(j: usize, basis: FockBasis) -> Result<OperatorMatrix> {
    basis.check_mode(j)?;
    let triplets = (0..basis.dimension()).map(|k| (k, k, Complex64::new(basis.occupation(k, j) as f64, 0.0)));
    Ok(OperatorMatrix::from_triplets(basis, triplets))
}

/// `Φ_j = (a_j + a_j⁺)/√2`.
pub fn field_phi(j: usize, basis: FockBasis) -> Result<OperatorMatrix> {
    let a = annihilation_matrix(j, basis)?;
    let ad = creation_matrix(j, basis)?;
    Ok(a.add(&ad)?.scale(Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0)))
}

/// `Π_j = (a_j − a_j⁺)/(i√2)`.
pub fn field_pi(j: usize, basis: FockBasis) -> Result<OperatorMatrix> {
    let a = annihilation_matrix(j, basis)?;
    let ad = creation_matrix(j, basis)?;
    Ok(a.sub(&ad)?.scale(Complex64::new(0.0, -std::f64::consts::FRAC_1_SQRT_2)))
}
