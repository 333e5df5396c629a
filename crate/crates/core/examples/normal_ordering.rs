//! Normal product (pure reordering) versus CCR rewriting to normal form.

use fockbridge::symbolic::{normal_product, parse_words, rewrite_to_normal_form, symbolic_commutator, OperatorPolynomial};

fn main() -> fockbridge::Result<()> {
    let word = parse_words("ad[1]*ad[2]*a[3]*ad[3]*a[2]*a[1]", None)?;
    println!("rewritten:      {}", rewrite_to_normal_form(&word));
    println!("normal product: {}", normal_product(&word));

    let mixed = parse_words("a[1]*ad[2]*ad[1]", None)?;
    println!("normal product of a1 ad2 ad1: {}", normal_product(&mixed));
    println!("rewritten a1 ad2 ad1:          {}", rewrite_to_normal_form(&mixed));

    let a = OperatorPolynomial::annihilation(1, 1);
    let ad3 = OperatorPolynomial::creation(1, 1).pow(3);
    println!("[a, (a+)^3] = {}", symbolic_commutator(&a, &ad3));
    Ok(())
}
