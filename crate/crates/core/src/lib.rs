//! Exact operator algebra, truncated Fock-space numerics and classical
//! phase-space dynamics for bosonic field theories, with a bridge that
//! compares quantum expectations against classical ensembles.

pub mod bridge;
pub mod classical;
pub mod error;
pub mod extended;
pub mod fock;
pub mod harness;
pub mod symbolic;

pub use error::{Error, Result};
