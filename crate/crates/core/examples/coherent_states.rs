//! Coherent encodings of classical states and the cutoff they need.

use fockbridge::bridge::{coherent_vector, cutoff_estimate, displacement_vector, state_tail, v_vector};
use fockbridge::classical::ClassicalState;
use fockbridge::fock::{annihilation_matrix, FockBasis};
use num_complex::Complex64;

fn main() -> fockbridge::Result<()> {
    let cutoff = cutoff_estimate(1.5, 1e-12);
    let basis = FockBasis::new(1, cutoff)?;
    println!("cutoff for |z| <= 1.5 at tail 1e-12: {cutoff}");

    let y = Complex64::new(0.9, -0.6);
    let v = v_vector(&[y], basis)?;
    println!("|v(y)|^2 = {:.15}, exp(|y|^2) = {:.15}", v.norm_sqr(), y.norm_sqr().exp());

    let s = ClassicalState::single(1.2, -0.7);
    let w = coherent_vector(&s, basis)?;
    let residual = annihilation_matrix(1, basis)?.apply(&w)?.sub(&w.scale(s.z(1))).norm();
    println!("||a w - z w|| = {residual:.2e}, tail = {:.2e}", state_tail(&s, cutoff));

    let d = displacement_vector(&s, FockBasis::new(1, cutoff + 20)?)?;
    println!("displaced vacuum vs closed form, first coefficient: {} vs {}", d.coefficients()[0], w.coefficients()[0]);
    Ok(())
}
