use nalgebra::DMatrix;
use nalgebra_sparse::{CooMatrix, CsrMatrix};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::basis::FockBasis;
use super::vector::FockVector;
use crate::error::{Error, Result};

/// Above this dimension elementary operators are built sparse.
pub const SPARSE_THRESHOLD: usize = 1024;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Clone, Debug)]
pub enum Storage {
    Dense(DMatrix<Complex64>),
    Sparse(CsrMatrix<Complex64>),
}

/// A complex square matrix over a [`FockBasis`], stored dense or CSR.
///
/// Binary operations accept either storage. Sparse ⊗ sparse stays sparse;
/// any dense operand makes the result dense.
#[derive(Clone, Debug)]
pub struct OperatorMatrix {
    basis: FockBasis,
    storage: Storage,
}

fn same_basis(a: &FockBasis, b: &FockBasis) -> Result<()> {
    if a != b {
        return Err(Error::BasisMismatch { left: a.to_string(), right: b.to_string() });
    }
    Ok(())
}

impl OperatorMatrix {
    pub fn from_dense(basis: FockBasis, m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != basis.dimension() || m.ncols() != basis.dimension() {
            return Err(Error::DimensionMismatch { expected: basis.dimension(), got: m.nrows() });
        }
        Ok(Self { basis, storage: Storage::Dense(m) })
    }

    pub fn from_csr(basis: FockBasis, m: CsrMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != basis.dimension() || m.ncols() != basis.dimension() {
            return Err(Error::DimensionMismatch { expected: basis.dimension(), got: m.nrows() });
        }
        Ok(Self { basis, storage: Storage::Sparse(m) })
    }

    /// Build from `(row, col, value)` triplets; duplicates are summed.
    /// Storage follows [`SPARSE_THRESHOLD`].
    pub fn from_triplets(basis: FockBasis, triplets: impl IntoIterator<Item = (usize, usize, Complex64)>) -> Self {
        Self::from_triplets_with(basis, triplets, basis.dimension() > SPARSE_THRESHOLD)
    }

    pub fn from_triplets_with(
        basis: FockBasis,
        triplets: impl IntoIterator<Item = (usize, usize, Complex64)>,
        sparse: bool,
    ) -> Self {
        let d = basis.dimension();
        if sparse {
            let mut coo = CooMatrix::new(d, d);
            for (r, c, v) in triplets {
                coo.push(r, c, v);
            }
            Self { basis, storage: Storage::Sparse(CsrMatrix::from(&coo)) }
        } else {
            let mut m = DMatrix::zeros(d, d);
            for (r, c, v) in triplets {
                m[(r, c)] += v;
            }
            Self { basis, storage: Storage::Dense(m) }
        }
    }

    pub fn zeros(basis: FockBasis) -> Self {
        Self::from_triplets(basis, std::iter::empty())
    }

    pub fn identity(basis: FockBasis) -> Self {
        Self::from_triplets(basis, (0..basis.dimension()).map(|k| (k, k, Complex64::new(1.0, 0.0))))
    }

    /// `|k⟩⟨k|` for the ket with the given occupations.
    pub fn projector(basis: FockBasis, occupations: &[usize]) -> Result<Self> {
        let k = basis
            .index(occupations)
            .ok_or(Error::DimensionMismatch { expected: basis.modes(), got: occupations.len() })?;
        Ok(Self::from_triplets(basis, [(k, k, Complex64::new(1.0, 0.0))]))
    }

    /// `|u⟩⟨v|`.
    pub fn outer(u: &FockVector, v: &FockVector) -> Result<Self> {
        same_basis(&u.basis(), &v.basis())?;
        let m = u.coefficients() * v.coefficients().adjoint();
        Self::from_dense(u.basis(), m)
    }

    pub fn basis(&self) -> FockBasis {
        self.basis
    }

    pub fn dimension(&self) -> usize {
        self.basis.dimension()
    }

    pub fn storage(&self) -> &Storage {
        &self.storage
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self.storage, Storage::Sparse(_))
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        match &self.storage {
            Storage::Dense(m) => m.clone(),
            Storage::Sparse(s) => DMatrix::from(s),
        }
    }

    pub fn into_dense(self) -> DMatrix<Complex64> {
        match self.storage {
            Storage::Dense(m) => m,
            Storage::Sparse(s) => DMatrix::from(&s),
        }
    }

    pub fn as_dense(&self) -> Self {
        Self { basis: self.basis, storage: Storage::Dense(self.to_dense()) }
    }

    pub fn as_sparse(&self) -> Self {
        let csr = match &self.storage {
            Storage::Dense(m) => CsrMatrix::from(m),
            Storage::Sparse(s) => s.clone(),
        };
        Self { basis: self.basis, storage: Storage::Sparse(csr) }
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        match &self.storage {
            Storage::Dense(m) => m[(row, col)],
            Storage::Sparse(s) => s.get_entry(row, col).map(|e| e.into_value()).unwrap_or(ZERO),
        }
    }

    /// Nonzero entries in row-major order.
    pub fn entries(&self) -> Vec<(usize, usize, Complex64)> {
        match &self.storage {
            Storage::Dense(m) => {
                let mut out = Vec::new();
                for r in 0..m.nrows() {
                    for c in 0..m.ncols() {
                        let v = m[(r, c)];
                        if v != ZERO {
                            out.push((r, c, v));
                        }
                    }
                }
                out
            }
            Storage::Sparse(s) => s
                .triplet_iter()
                .filter(|(_, _, v)| **v != ZERO)
                .map(|(r, c, v)| (r, c, *v))
                .collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        let storage = match &self.storage {
            Storage::Dense(m) => Storage::Dense(m.adjoint()),
            Storage::Sparse(s) => {
                let mut t = s.transpose();
                for v in t.values_mut() {
                    *v = v.conj();
                }
                Storage::Sparse(t)
            }
        };
        Self { basis: self.basis, storage }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let storage = match &self.storage {
            Storage::Dense(m) => Storage::Dense(m * c),
            Storage::Sparse(s) => {
                let mut t = s.clone();
                for v in t.values_mut() {
                    *v *= c;
                }
                Storage::Sparse(t)
            }
        };
        Self { basis: self.basis, storage }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        same_basis(&self.basis, &other.basis)?;
        let storage = match (&self.storage, &other.storage) {
            (Storage::Sparse(a), Storage::Sparse(b)) => Storage::Sparse(a * b),
            (Storage::Sparse(a), Storage::Dense(b)) => Storage::Dense(a * b),
            (Storage::Dense(a), Storage::Sparse(b)) => Storage::Dense((&b.transpose() * &a.transpose()).transpose()),
            (Storage::Dense(a), Storage::Dense(b)) => Storage::Dense(super::linalg::matmul(a, b)),
        };
        Ok(Self { basis: self.basis, storage })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        same_basis(&self.basis, &other.basis)?;
        let storage = match (&self.storage, &other.storage) {
            (Storage::Sparse(a), Storage::Sparse(b)) => Storage::Sparse(a + b),
            _ => Storage::Dense(self.to_dense() + other.to_dense()),
        };
        Ok(Self { basis: self.basis, storage })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn pow(&self, exp: u32) -> Result<Self> {
        let mut acc = if self.is_sparse() {
            Self::identity(self.basis).as_sparse()
        } else {
            Self::identity(self.basis).as_dense()
        };
        for _ in 0..exp {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn trace(&self) -> Complex64 {
        match &self.storage {
            Storage::Dense(m) => m.trace(),
            Storage::Sparse(s) => (0..s.nrows()).map(|k| s.get_entry(k, k).map(|e| e.into_value()).unwrap_or(ZERO)).sum(),
        }
    }

    pub fn apply(&self, v: &FockVector) -> Result<FockVector> {
        same_basis(&self.basis, &v.basis())?;
        let out = match &self.storage {
            Storage::Dense(m) => m * v.coefficients(),
            Storage::Sparse(s) => {
                let mut out = nalgebra::DVector::zeros(s.nrows());
                for (r, row) in s.row_iter().enumerate() {
                    out[r] = row.col_indices().iter().zip(row.values()).map(|(&c, x)| x * v.coefficients()[c]).sum();
                }
                out
            }
        };
        FockVector::new(self.basis, out)
    }

    /// `⟨u| A |v⟩`.
    pub fn matrix_element(&self, u: &FockVector, v: &FockVector) -> Result<Complex64> {
        Ok(u.inner(&self.apply(v)?))
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        same_basis(&self.basis, &other.basis)?;
        let d = self.sub(other)?;
        Ok(d.entries().iter().map(|(_, _, v)| v.norm()).fold(0.0, f64::max))
    }

    /// Largest entrywise difference over the given columns (all rows).
    pub fn max_abs_diff_on_columns(&self, other: &Self, columns: &[usize]) -> Result<f64> {
        same_basis(&self.basis, &other.basis)?;
        let d = self.sub(other)?.to_dense();
        let mut worst: f64 = 0.0;
        for &c in columns {
            for r in 0..d.nrows() {
                worst = worst.max(d[(r, c)].norm());
            }
        }
        Ok(worst)
    }

    /// The block `P A P` restricted to `indices`, as a dense matrix.
    pub fn restrict(&self, indices: &[usize]) -> DMatrix<Complex64> {
        let dense = self.to_dense();
        DMatrix::from_fn(indices.len(), indices.len(), |r, c| dense[(indices[r], indices[c])])
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()).map(|d| d <= tol).unwrap_or(false)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries().iter().map(|(_, _, v)| v.norm()).fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson {
            basis: BasisDescriptor::from(self.basis),
            entries: self.entries().into_iter().map(|(r, c, v)| (r, c, v.re, v.im)).collect(),
        }
    }

    pub fn from_json(json: &MatrixJson) -> Result<Self> {
        let basis = FockBasis::new(json.basis.modes, json.basis.cutoff)?;
        if basis.dimension() != json.basis.dimension {
            return Err(Error::DimensionMismatch { expected: basis.dimension(), got: json.basis.dimension });
        }
        let d = basis.dimension();
        if let Some(&(r, c, _, _)) = json.entries.iter().find(|(r, c, _, _)| *r >= d || *c >= d) {
            return Err(Error::DimensionMismatch { expected: d, got: r.max(c) + 1 });
        }
        Ok(Self::from_triplets(basis, json.entries.iter().map(|&(r, c, re, im)| (r, c, Complex64::new(re, im)))))
    }
}

/// `[A, B] = AB − BA`.
pub fn commutator(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<OperatorMatrix> {
    a.mul(b)?.sub(&b.mul(a)?)
}

/// `Tr(AB) = Σ_ij A_ij B_ji`, without forming the product.
pub fn trace_product(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<Complex64> {
    same_basis(&a.basis, &b.basis)?;
    Ok(match (&a.storage, &b.storage) {
        (Storage::Sparse(sa), _) => {
            let mut acc = ZERO;
            for (i, row) in sa.row_iter().enumerate() {
                for (&j, x) in row.col_indices().iter().zip(row.values()) {
                    acc += x * b.get(j, i);
                }
            }
            acc
        }
        (Storage::Dense(_), Storage::Sparse(_)) => trace_product(b, a)?,
        (Storage::Dense(ma), Storage::Dense(mb)) => {
            let mut acc = ZERO;
            for i in 0..ma.nrows() {
                for j in 0..ma.ncols() {
                    acc += ma[(i, j)] * mb[(j, i)];
                }
            }
            acc
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisDescriptor {
    pub modes: usize,
    pub cutoff: usize,
    pub dimension: usize,
}

impl From<FockBasis> for BasisDescriptor {
    fn from(b: FockBasis) -> Self {
        Self { modes: b.modes(), cutoff: b.cutoff(), dimension: b.dimension() }
    }
}

/// Golden-file form: basis descriptor plus coordinate-list entries
/// `[row, col, re, im]` in row-major order, zeros omitted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub basis: BasisDescriptor,
    pub entries: Vec<(usize, usize, f64, f64)>,
}
