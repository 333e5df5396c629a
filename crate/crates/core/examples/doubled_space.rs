//! Doubled Fock space: extended coherent vectors, G0 and the interaction-picture survey.

use fockbridge::classical::ClassicalState;
use fockbridge::extended::{
    commutator_survey, default_survey_grid, extended_coherent_vector, g0_operator, survey_csv, DoubledBasis,
};

fn main() -> fockbridge::Result<()> {
    let basis = DoubledBasis::new(1, 10)?;
    let w = extended_coherent_vector(&ClassicalState::single(0.8, 0.3), basis)?;
    println!("extended vector norm {:.6}, tail {:.1e}", w.norm, w.truncation_tail);

    let g0 = g0_operator(basis)?;
    let vac = basis.fock().vacuum_index();
    println!("G0 vacuum entry: {}", g0.get(vac, vac));

    let rows = commutator_survey(basis, &default_survey_grid())?;
    print!("{}", survey_csv(&rows[..6]));
    Ok(())
}
