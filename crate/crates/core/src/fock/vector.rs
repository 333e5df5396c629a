use nalgebra::DVector;
use num_complex::Complex64;

use super::basis::FockBasis;
use crate::error::{Error, Result};

/// A state `Σ c_k |k⟩` over a truncated basis.
#[derive(Clone, Debug, PartialEq)]
pub struct FockVector {
    basis: FockBasis,
    coefficients: DVector<Complex64>,
}

impl FockVector {
    pub fn new(basis: FockBasis, coefficients: DVector<Complex64>) -> Result<Self> {
        if coefficients.len() != basis.dimension() {
            return Err(Error::DimensionMismatch { expected: basis.dimension(), got: coefficients.len() });
        }
        Ok(Self { basis, coefficients })
    }

    pub fn zeros(basis: FockBasis) -> Self {
        Self { basis, coefficients: DVector::zeros(basis.dimension()) }
    }

    /// The basis ket with the given occupations.
    pub fn ket(basis: FockBasis, occupations: &[usize]) -> Result<Self> {
        let idx = basis.index(occupations).ok_or(Error::DimensionMismatch {
            expected: basis.modes(),
            got: occupations.len(),
        })?;
        let mut v = Self::zeros(basis);
        v.coefficients[idx] = Complex64::new(1.0, 0.0);
        Ok(v)
    }

    pub fn vacuum(basis: FockBasis) -> Self {
        let mut v = Self::zeros(basis);
        v.coefficients[0] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn basis(&self) -> FockBasis {
        self.basis
    }

    pub fn coefficients(&self) -> &DVector<Complex64> {
        &self.coefficients
    }

    pub fn into_coefficients(self) -> DVector<Complex64> {
        self.coefficients
    }

    pub fn get(&self, occupations: &[usize]) -> Complex64 {
        self.basis.index(occupations).map(|i| self.coefficients[i]).unwrap_or_default()
    }

    /// `Σ |c_k|²`.
    pub fn norm_sqr(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `⟨self|other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &FockVector) -> Complex64 {
        self.coefficients.dotc(&other.coefficients)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { basis: self.basis, coefficients: &self.coefficients * c }
    }

    pub fn sub(&self, other: &FockVector) -> Self {
        Self { basis: self.basis, coefficients: &self.coefficients - &other.coefficients }
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        if n == 0.0 {
            return self.clone();
        }
        self.scale(Complex64::new(1.0 / n, 0.0))
    }
}
