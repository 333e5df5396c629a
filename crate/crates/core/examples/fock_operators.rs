//! Ladder matrices on a truncated basis and the boundary defect of the CCR.

use fockbridge::fock::{annihilation_matrix, commutator, creation_matrix, field_phi, field_pi, FockBasis, FockVector};

fn main() -> fockbridge::Result<()> {
    let basis = FockBasis::new(1, 3)?;
    let a = annihilation_matrix(1, basis)?;
    let ad = creation_matrix(1, basis)?;

    let two = FockVector::ket(basis, &[2])?;
    println!("a|2> = {:?}", a.apply(&two)?.coefficients().as_slice());
    println!("a+ superdiagonal: {:?}", (0..3).map(|k| ad.get(k + 1, k).re).collect::<Vec<_>>());

    // [a, a+] = I - (M+1)|M><M|
    let c = commutator(&a, &ad)?;
    println!("diag [a, a+] = {:?}", (0..4).map(|k| c.get(k, k).re).collect::<Vec<_>>());

    let big = FockBasis::new(2, 6)?;
    let ccr = commutator(&field_phi(1, big)?, &field_pi(1, big)?)?;
    let interior = big.interior(1);
    println!("[Phi, Pi] on {} interior kets: {}", interior.len(), ccr.get(interior[3], interior[3]));
    Ok(())
}
