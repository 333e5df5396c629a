//! Exact symbolic algebra on bosonic operator words and phase-space
//! polynomials.

pub mod coeff;
mod eval;
pub mod lemmas;
pub mod operator;
pub mod parse;
pub mod phipi;

pub use coeff::{Exact, QSqrt2};
pub use eval::{evaluate_matrix, evaluate_words_matrix};
pub use lemmas::{Lemma, LemmaInstance};
pub use operator::{
    normal_product, rewrite_to_normal_form, rewrite_with, symbolic_commutator, Generator, Monomial,
    OperatorPolynomial, RewriteStrategy, Word, WordPolynomial,
};
pub use parse::{parse_operator, parse_phipi, parse_word, parse_words};
pub use phipi::{CompiledPolynomial, Exponents, PhiPiPolynomial, Variable, DEFAULT_DEGREE_CAP};

/// `g_n(Φ, Π)` for a phase-space polynomial `g`.
pub fn substitute_normal(g: &PhiPiPolynomial) -> OperatorPolynomial {
    g.substitute_normal()
}

pub fn partial_derivative(g: &PhiPiPolynomial, v: Variable) -> crate::Result<PhiPiPolynomial> {
    g.partial_derivative(v)
}
