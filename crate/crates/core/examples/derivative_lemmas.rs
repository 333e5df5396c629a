//! Commutators with field operators act as phase-space derivatives.

use fockbridge::fock::FockBasis;
use fockbridge::symbolic::{lemmas, parse_phipi};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn main() -> fockbridge::Result<()> {
    let g = parse_phipi("phi[1]^3*pi[2] + 1/2*pi[1]^2 - phi[2]", Some(2))?;
    let basis = FockBasis::new(2, 12)?;
    for l in [lemmas::field_phi(&g, 1)?, lemmas::field_pi(&g, 1)?] {
        println!("{}: exact={} matrix defect={:.1e}", l.lemma, l.holds(), l.matrix_defect(basis)?);
        println!("  rhs = {}", l.rhs);
    }

    let mut rng = ChaCha20Rng::seed_from_u64(1);
    let draws = lemmas::random_instances(&mut rng, 2, 4)?;
    let held = draws.iter().filter(|l| l.holds()).count();
    println!("random instances holding exactly: {held}/{}", draws.len());
    Ok(())
}
