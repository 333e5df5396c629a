//! The classical density matrix `ρ = Σ_k w_k |w(s_k)⟩⟨w(s_k)|`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::cutoff::state_tail;
use super::states::{coherent_vector_with_bound, DEFAULT_TAIL_BOUND};
use crate::classical::Ensemble;
use crate::error::{Error, Result};
use crate::fock::{linalg, FockBasis, FockVector, OperatorMatrix};

#[derive(Clone, Debug)]
pub struct DensityMatrix {
    basis: FockBasis,
    matrix: OperatorMatrix,
    truncation_tail: f64,
}

/// Entrywise Neumaier accumulator for a dense complex matrix.
struct CompensatedMatrix {
    sum: DMatrix<Complex64>,
    compensation: DMatrix<Complex64>,
}

fn neumaier(sum: &mut f64, comp: &mut f64, x: f64) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

impl CompensatedMatrix {
    fn zeros(n: usize) -> Self {
        Self { sum: DMatrix::zeros(n, n), compensation: DMatrix::zeros(n, n) }
    }

    fn add_outer(&mut self, weight: f64, v: &FockVector) {
        let c = v.coefficients();
        let n = c.len();
        for col in 0..n {
            let right = c[col].conj() * weight;
            if right == Complex64::new(0.0, 0.0) {
                continue;
            }
            for row in 0..n {
                let x = c[row] * right;
                let (s, k) = (&mut self.sum[(row, col)], &mut self.compensation[(row, col)]);
                neumaier(&mut s.re, &mut k.re, x.re);
                neumaier(&mut s.im, &mut k.im, x.im);
            }
        }
    }

    fn finish(self) -> DMatrix<Complex64> {
        self.sum + self.compensation
    }
}

impl DensityMatrix {
    pub fn basis(&self) -> FockBasis {
        self.basis
    }

    pub fn matrix(&self) -> &OperatorMatrix {
        &self.matrix
    }

    /// Upper bound on the probability mass discarded by truncation, maximized over samples.
    pub fn truncation_tail(&self) -> f64 {
        self.truncation_tail
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.matrix.is_hermitian(tol)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        linalg::hermitian_eigenvalues(&self.matrix.to_dense()).iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Number of eigenvalues above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        linalg::hermitian_eigenvalues(&self.matrix.to_dense()).iter().filter(|&&e| e > tol).count()
    }
}

pub fn density_from_ensemble(e: &Ensemble, basis: FockBasis) -> Result<DensityMatrix> {
    density_from_ensemble_with_bound(e, basis, DEFAULT_TAIL_BOUND)
}

/// Fails with the offending sample index when a sample's tail exceeds `bound`.
pub fn density_from_ensemble_with_bound(e: &Ensemble, basis: FockBasis, bound: f64) -> Result<DensityMatrix> {
    if e.modes() != basis.modes() {
        return Err(Error::DimensionMismatch { expected: basis.modes(), got: e.modes() });
    }
    let mut acc = CompensatedMatrix::zeros(basis.dimension());
    let mut tail: f64 = 0.0;
    for (k, (s, w)) in e.samples.iter().zip(&e.weights).enumerate() {
        let v = coherent_vector_with_bound(s, basis, bound).map_err(|err| err.context(format!("sample {k}")))?;
        acc.add_outer(*w, &v);
        tail = tail.max(state_tail(s, basis.cutoff()));
    }
    let matrix = OperatorMatrix::from_dense(basis, acc.finish())?;
    Ok(DensityMatrix { basis, matrix, truncation_tail: tail })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{sample_ensemble, ClassicalState, DistributionSpec};

    fn basis(modes: usize, cutoff: usize) -> FockBasis {
        FockBasis::new(modes, cutoff).unwrap()
    }

    #[test]
    fn pure_state_is_rank_one_projector() {
        let rho = density_from_ensemble(&Ensemble::pure(ClassicalState::single(1.0, 0.5)), basis(1, 20)).unwrap();
        assert!((rho.trace() - 1.0).abs() <= rho.truncation_tail() + 1e-14);
        assert_eq!(rho.rank(1e-10), 1);
        let sq = rho.matrix().mul(rho.matrix()).unwrap();
        assert!(sq.max_abs_diff(rho.matrix()).unwrap() < 1e-10);
    }

    #[test]
    fn two_samples() {
        let e = Ensemble::uniform(vec![ClassicalState::single(1.0, 0.0), ClassicalState::single(-0.5, 0.8)]).unwrap();
        let rho = density_from_ensemble(&e, basis(1, 20)).unwrap();
        assert!(rho.is_hermitian(1e-12));
        assert_eq!(rho.rank(1e-10), 2);
        assert!((rho.trace() - 1.0).abs() <= rho.truncation_tail() + 1e-14);
    }

    #[test]
    fn vacuum_delta_is_exact() {
        let b = basis(2, 3);
        let rho = density_from_ensemble(&Ensemble::pure(ClassicalState::origin(2)), b).unwrap();
        let expected = OperatorMatrix::projector(b, &[0, 0]).unwrap();
        assert_eq!(rho.matrix().max_abs_diff(&expected).unwrap(), 0.0);
        assert_eq!(rho.truncation_tail(), 0.0);
    }

    #[test]
    fn gaussian_ensemble_is_a_state() {
        let d = DistributionSpec::gaussian(ClassicalState::new(vec![0.5, -0.2], vec![0.1, 0.3]).unwrap(), vec![0.2; 2], vec![0.2; 2], 9);
        let e = sample_ensemble(&d, 50).unwrap();
        let rho = density_from_ensemble(&e, basis(2, 12)).unwrap();
        assert!(rho.is_hermitian(1e-12));
        assert!(rho.min_eigenvalue() >= -1e-10);
        assert!((rho.trace() - 1.0).abs() <= rho.truncation_tail() + 1e-12);
    }

    #[test]
    fn sample_order_does_not_matter() {
        let d = DistributionSpec::gaussian(ClassicalState::single(0.5, 0.0), vec![0.5], vec![0.5], 4);
        let e = sample_ensemble(&d, 200).unwrap();
        let mut reversed = e.clone();
        reversed.samples.reverse();
        let a = density_from_ensemble(&e, basis(1, 25)).unwrap();
        let b = density_from_ensemble(&reversed, basis(1, 25)).unwrap();
        assert!(a.matrix().max_abs_diff(b.matrix()).unwrap() <= 1e-15);
    }

    #[test]
    fn oversized_sample_is_named() {
        let e = Ensemble::uniform(vec![ClassicalState::single(0.1, 0.0), ClassicalState::single(5.0, 0.0)]).unwrap();
        let err = density_from_ensemble(&e, basis(1, 6)).unwrap_err();
        assert!(err.to_string().starts_with("sample 1"), "{err}");
    }
}
