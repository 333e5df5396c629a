//! Truncated Fock-space linear algebra.

mod basis;
mod ladder;
pub mod linalg;
mod matrix;
mod vector;

pub use basis::{basis_dim, FockBasis};
pub use ladder::{annihilation_matrix, creation_matrix, field_phi, field_pi, number_matrix};
pub use matrix::{commutator, trace_product, BasisDescriptor, MatrixJson, OperatorMatrix, Storage, SPARSE_THRESHOLD};
pub use vector::FockVector;
