//! Symmetric minus normal ordering of the harmonic energy is N/2 for any state.

use fockbridge::bridge::{density_from_ensemble, zero_point_gap};
use fockbridge::classical::{sample_ensemble, ClassicalState, DistributionSpec};
use fockbridge::fock::FockBasis;

fn main() -> fockbridge::Result<()> {
    for n in 1..=3 {
        let mean = ClassicalState::new(vec![0.3; n], vec![-0.2; n])?;
        let e = sample_ensemble(&DistributionSpec::gaussian(mean, vec![0.1; n], vec![0.1; n], n as u64), 10)?;
        let gap = zero_point_gap(&density_from_ensemble(&e, FockBasis::new(n, 10)?)?)?;
        println!("N = {n}: total {:.12}, per mode {:?}, exact {:?}", gap.total, gap.per_mode, gap.symbolic);
    }
    Ok(())
}
