//! Dense complex linear algebra helpers: matrix exponential, spectra, norms.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_TAYLOR_TERMS: usize = 40;

/// Below this size complex products use nalgebra's generic kernel directly.
const SPLIT_PRODUCT_MIN: usize = 24;

/// Complex matrix product through four real GEMMs,
/// `(A + iB)(C + iD) = (AC − BD) + i(AD + BC)`.
pub fn matmul(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    if a.nrows().min(a.ncols()).min(b.ncols()) < SPLIT_PRODUCT_MIN {
        return a * b;
    }
    let (ar, ai) = (a.map(|x| x.re), a.map(|x| x.im));
    let (br, bi) = (b.map(|x| x.re), b.map(|x| x.im));
    let re = &ar * &br - &ai * &bi;
    let im = &ar * &bi + &ai * &br;
    re.zip_map(&im, Complex64::new)
}

fn norm1(m: &DMatrix<Complex64>) -> f64 {
    (0..m.ncols()).map(|c| m.column(c).iter().map(|x| x.norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// `exp(A)` by scaling and squaring with a truncated Taylor series.
///
/// `A` is scaled by `2^−s` until `‖A‖₁ ≤ 1/2`; the series is summed until
/// the next term is below `1e−18` relative to the partial sum (about 15
/// terms), then squared back `s` times.
pub fn expm(a: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::ExpmFailed(format!("non-square {}x{} matrix", n, a.ncols())));
    }
    let norm = norm1(a);
    if !norm.is_finite() {
        return Err(Error::ExpmFailed("matrix has non-finite entries".into()));
    }
    let s = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    if s > 1000 {
        return Err(Error::ExpmFailed(format!("norm {norm:.3e} too large to scale")));
    }
    let scaled = a * Complex64::new(0.5f64.powi(s), 0.0);
    let mut sum = DMatrix::<Complex64>::identity(n, n);
    let mut term = DMatrix::<Complex64>::identity(n, n);
    let mut converged = false;
    for k in 1..=MAX_TAYLOR_TERMS {
        term = matmul(&term, &scaled) * Complex64::new(1.0 / k as f64, 0.0);
        sum += &term;
        if norm1(&term) <= 1e-18 * norm1(&sum).max(1.0) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::ExpmFailed(format!("Taylor series did not converge in {MAX_TAYLOR_TERMS} terms")));
    }
    for _ in 0..s {
        sum = matmul(&sum, &sum);
    }
    if sum.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
        return Err(Error::ExpmFailed("result overflowed".into()));
    }
    Ok(sum)
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> DVector<f64> {
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = nalgebra::SymmetricEigen::new(h);
    let mut v: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    DVector::from_vec(v)
}

/// Largest singular value.
pub fn operator_norm(m: &DMatrix<Complex64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values().iter().copied().fold(0.0, f64::max)
}

pub fn frobenius_norm(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn expm_of_zero_is_identity() {
        let z = DMatrix::<Complex64>::zeros(3, 3);
        assert_eq!(expm(&z).unwrap(), DMatrix::identity(3, 3));
    }

    #[test]
    fn expm_of_diagonal() {
        let d = DMatrix::from_diagonal(&DVector::from_vec(vec![c(1.0, 0.0), c(0.0, 2.0), c(-3.0, 0.5)]));
        let e = expm(&d).unwrap();
        for k in 0..3 {
            assert!((e[(k, k)] - d[(k, k)].exp()).norm() < 1e-13 * d[(k, k)].exp().norm().max(1.0));
        }
    }

    #[test]
    fn expm_rotation_generator() {
        // exp(θ [[0, -1], [1, 0]]) is a rotation by θ.
        let theta = 2.3;
        let g = DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(-theta, 0.0), c(theta, 0.0), c(0.0, 0.0)]);
        let e = expm(&g).unwrap();
        let expected = DMatrix::from_row_slice(
            2,
            2,
            &[c(theta.cos(), 0.0), c(-theta.sin(), 0.0), c(theta.sin(), 0.0), c(theta.cos(), 0.0)],
        );
        assert!((e - expected).iter().all(|x| x.norm() < 1e-13));
    }

    #[test]
    fn expm_rejects_non_finite() {
        let m = DMatrix::from_element(2, 2, c(f64::NAN, 0.0));
        assert!(expm(&m).is_err());
    }

    #[test]
    fn split_product_matches_generic() {
        let a = DMatrix::from_fn(40, 30, |r, k| c((r as f64 * 0.3).sin(), (k as f64 * 0.7).cos()));
        let b = DMatrix::from_fn(30, 35, |r, k| c((r * k) as f64 * 0.01, -(r as f64)));
        assert!((matmul(&a, &b) - &a * &b).iter().all(|x| x.norm() < 1e-10));
    }

    #[test]
    fn norms() {
        let m = DMatrix::from_row_slice(2, 2, &[c(3.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 4.0)]);
        assert!((operator_norm(&m) - 4.0).abs() < 1e-12);
        assert!((frobenius_norm(&m) - 5.0).abs() < 1e-12);
        let ev = hermitian_eigenvalues(&DMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)]));
        assert!((ev[0] - 1.0).abs() < 1e-12 && (ev[1] - 3.0).abs() < 1e-12);
    }
}
