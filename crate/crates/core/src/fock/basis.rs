use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of kets in the truncated basis: `(cutoff + 1)^modes`.
pub fn basis_dim(modes: usize, cutoff: usize) -> Result<usize> {
    if modes == 0 || cutoff == 0 {
        return Err(Error::InvalidBasis { modes, cutoff });
    }
    let base = cutoff.checked_add(1).ok_or(Error::DimensionOverflow { modes, cutoff })?;
    let exp = u32::try_from(modes).map_err(|_| Error::DimensionOverflow { modes, cutoff })?;
    base.checked_pow(exp).ok_or(Error::DimensionOverflow { modes, cutoff })
}

/// Occupation-number basis for `modes` bosonic modes, each truncated at
/// `cutoff` quanta.
///
/// Kets are enumerated lexicographically in `(N_1, …, N_modes)` with mode 1
/// varying slowest: `index = Σ_j N_j (cutoff+1)^(modes−j)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FockBasis {
    modes: usize,
    cutoff: usize,
    dimension: usize,
}

impl FockBasis {
    pub fn new(modes: usize, cutoff: usize) -> Result<Self> {
        let dimension = basis_dim(modes, cutoff)?;
        Ok(Self { modes, cutoff, dimension })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn check_mode(&self, j: usize) -> Result<()> {
        if j == 0 || j > self.modes {
            return Err(Error::ModeOutOfRange { mode: j, modes: self.modes });
        }
        Ok(())
    }

    /// Stride of mode `j` (1-based) in the flat index.
    pub fn stride(&self, j: usize) -> usize {
        (self.cutoff + 1).pow((self.modes - j) as u32)
    }

    pub fn occupations(&self, index: usize) -> Vec<usize> {
        let base = self.cutoff + 1;
        let mut occ = vec![0; self.modes];
        let mut rest = index;
        for slot in occ.iter_mut().rev() {
            *slot = rest % base;
            rest /= base;
        }
        occ
    }

    /// Inverse of [`Self::occupations`]; `None` if any occupation exceeds the cutoff.
    pub fn index(&self, occupations: &[usize]) -> Option<usize> {
        if occupations.len() != self.modes || occupations.iter().any(|&n| n > self.cutoff) {
            return None;
        }
        Some(occupations.iter().fold(0, |acc, &n| acc * (self.cutoff + 1) + n))
    }

    /// Occupation of mode `j` (1-based) in ket `index`.
    pub fn occupation(&self, index: usize, j: usize) -> usize {
        (index / self.stride(j)) % (self.cutoff + 1)
    }

    /// Kets whose every occupation is at most `cutoff − margin`.
    ///
    /// Polynomial identities of degree ≤ `margin` hold exactly on these
    /// columns; the truncation boundary never enters.
    pub fn interior(&self, margin: usize) -> Vec<usize> {
        let limit = match self.cutoff.checked_sub(margin) {
            Some(l) => l,
            None => return Vec::new(),
        };
        (0..self.dimension)
            .filter(|&k| self.occupations(k).iter().all(|&n| n <= limit))
            .collect()
    }

    pub fn vacuum_index(&self) -> usize {
        0
    }
}

impl fmt::Display for FockBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FockBasis(modes={}, cutoff={}, dim={})", self.modes, self.cutoff, self.dimension)
    }
}
