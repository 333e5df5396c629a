//! Numerical evaluation of symbolic operators on a truncated Fock basis.

use std::collections::HashMap;

use super::operator::{Generator, Monomial, OperatorPolynomial, WordPolynomial};
use crate::error::{Error, Result};
use crate::fock::{annihilation_matrix, creation_matrix, FockBasis, OperatorMatrix};

fn check_modes(poly_modes: usize, basis: FockBasis) -> Result<()> {
    if poly_modes != basis.modes() {
        return Err(Error::DimensionMismatch { expected: basis.modes(), got: poly_modes });
    }
    Ok(())
}

/// `sqrt(n! / (n - k)!)`, the amplitude of `a^k |n⟩`.
fn falling_sqrt(n: usize, k: usize) -> f64 {
    ((n - k + 1)..=n).map(|x| (x as f64).sqrt()).product()
}

/// Column action of a normal-ordered monomial on `|occ⟩`, or `None` when it
/// annihilates the ket (underflow) or pushes it past the cutoff.
fn monomial_action(mono: &Monomial, basis: FockBasis, col: usize) -> Option<(usize, f64)> {
    let mut row = col;
    let mut amp = 1.0;
    for j in 0..basis.modes() {
        let n = basis.occupation(col, j + 1);
        let d = mono.annihilate[j] as usize;
        let c = mono.create[j] as usize;
        if d > n {
            return None;
        }
        let m = n - d;
        if m + c > basis.cutoff() {
            return None;
        }
        amp *= falling_sqrt(n, d) * falling_sqrt(m + c, c);
        let stride = basis.stride(j + 1);
        row = row - d * stride + c * stride;
    }
    Some((row, amp))
}

/// Matrix of a normal-ordered polynomial on `basis`.
///
/// Each monomial acts as its literal product of truncated ladder matrices, so
/// the result equals the product of the elementary matrices term by term.
pub fn evaluate_matrix(p: &OperatorPolynomial, basis: FockBasis) -> Result<OperatorMatrix> {
    check_modes(p.modes(), basis)?;
    let mut triplets = Vec::new();
    for (mono, coeff) in p.terms() {
        let c = coeff.to_complex();
        for col in 0..basis.dimension() {
            if let Some((row, amp)) = monomial_action(mono, basis, col) {
                triplets.push((row, col, c * amp));
            }
        }
    }
    Ok(OperatorMatrix::from_triplets(basis, triplets))
}

/// Matrix of an arbitrary word polynomial as the literal product of
/// truncated ladder matrices, without any reordering.
pub fn evaluate_words_matrix(p: &WordPolynomial, basis: FockBasis) -> Result<OperatorMatrix> {
    check_modes(p.modes(), basis)?;
    let mut cache: HashMap<Generator, OperatorMatrix> = HashMap::new();
    let mut total = OperatorMatrix::zeros(basis);
    for (word, coeff) in p.terms() {
        let mut acc = OperatorMatrix::identity(basis);
        for g in &word.0 {
            if !cache.contains_key(g) {
                let m = if g.daggered { creation_matrix(g.mode, basis)? } else { annihilation_matrix(g.mode, basis)? };
                cache.insert(*g, m);
            }
            acc = acc.mul(&cache[g])?;
        }
        total = total.add(&acc.scale(coeff.to_complex()))?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::{normal_product, parse_operator, parse_words, rewrite_to_normal_form};

    fn basis(modes: usize, cutoff: usize) -> FockBasis {
        FockBasis::new(modes, cutoff).unwrap()
    }

    #[test]
    fn monomials_match_literal_products() {
        let b = basis(2, 4);
        for src in ["ad[1]*ad[2]*a[1]", "ad[1]^2*a[1]^3", "a[2]^2", "(1/2+1r2i)*ad[2] + 3", "pi[2] + ad[1]*ad[2]^2*a[2]"] {
            let op = parse_operator(src, Some(2)).unwrap();
            let direct = evaluate_matrix(&op, b).unwrap();
            let literal = evaluate_words_matrix(&WordPolynomial::from(&op), b).unwrap();
            assert!(direct.max_abs_diff(&literal).unwrap() < 1e-12, "{src}");
        }
    }

    #[test]
    fn normal_form_agrees_on_interior() {
        let b = basis(2, 8);
        let words = parse_words("a[1]*a[2]*ad[1]^2*a[2]*ad[2]", Some(2)).unwrap();
        let literal = evaluate_words_matrix(&words, b).unwrap();
        let rewritten = evaluate_matrix(&rewrite_to_normal_form(&words), b).unwrap();
        let interior = b.interior(3);
        assert!(literal.max_abs_diff_on_columns(&rewritten, &interior).unwrap() < 1e-10);
        // The permutation-only product differs from the operator product.
        let permuted = evaluate_matrix(&normal_product(&words), b).unwrap();
        assert!(literal.max_abs_diff_on_columns(&permuted, &interior).unwrap() > 0.5);
    }

    #[test]
    fn mode_mismatch_rejected() {
        let op = parse_operator("a[1]", Some(1)).unwrap();
        assert!(evaluate_matrix(&op, basis(2, 2)).is_err());
    }
}
