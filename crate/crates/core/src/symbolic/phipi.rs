//! Commutative polynomials in the classical variables φ_1…φ_N, π_1…π_N.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use super::coeff::Exact;
use super::operator::{rewrite_to_normal_form, OperatorPolynomial, WordPolynomial};
use crate::error::{Error, Result};

/// Default cap on the total degree of Hamiltonians and observables.
pub const DEFAULT_DEGREE_CAP: u32 = 8;

/// A classical variable. Indices are 1-based.
///
/// `Y`/`Z` are the complex chart `z_j = (φ_j + iπ_j)/√2`,
/// `y_j = (φ_j − iπ_j)/√2`; derivatives with respect to them follow the
/// chain rule `∂/∂y = (∂/∂φ + i∂/∂π)/√2`, `∂/∂z = (∂/∂φ − i∂/∂π)/√2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variable {
    Phi(usize),
    Pi(usize),
    Y(usize),
    Z(usize),
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variable::Phi(j) => write!(f, "phi[{j}]"),
            Variable::Pi(j) => write!(f, "pi[{j}]"),
            Variable::Y(j) => write!(f, "y[{j}]"),
            Variable::Z(j) => write!(f, "z[{j}]"),
        }
    }
}

/// Exponents `(φ_1…φ_N, π_1…π_N)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exponents(pub Vec<u32>);

impl Exponents {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiPiPolynomial {
    modes: usize,
    terms: BTreeMap<Exponents, Exact>,
}

impl PhiPiPolynomial {
    pub fn zero(modes: usize) -> Self {
        Self { modes, terms: BTreeMap::new() }
    }

    pub fn constant(modes: usize, c: Exact) -> Self {
        let mut p = Self::zero(modes);
        p.add_term(Exponents(vec![0; 2 * modes]), c);
        p
    }

    pub fn one(modes: usize) -> Self {
        Self::constant(modes, Exact::one())
    }

    /// The single variable φ_j or π_j (or the complex-chart combination for
    /// `Y`/`Z`).
    pub fn variable(modes: usize, v: Variable) -> Self {
        let modes = modes.max(v.mode());
        let unit = |idx: usize| {
            let mut e = vec![0; 2 * modes];
            e[idx] = 1;
            let mut p = Self::zero(modes);
            p.add_term(Exponents(e), Exact::one());
            p
        };
        match v {
            Variable::Phi(j) => unit(j - 1),
            Variable::Pi(j) => unit(modes + j - 1),
            Variable::Z(j) => unit(j - 1).add(&unit(modes + j - 1).scale(&Exact::i())).scale(&Exact::inv_sqrt2()),
            Variable::Y(j) => unit(j - 1).sub(&unit(modes + j - 1).scale(&Exact::i())).scale(&Exact::inv_sqrt2()),
        }
    }

    pub fn phi(modes: usize, j: usize) -> Self {
        Self::variable(modes, Variable::Phi(j))
    }

    pub fn pi(modes: usize, j: usize) -> Self {
        Self::variable(modes, Variable::Pi(j))
    }

    /// `Σ_j (φ_j² + π_j²)/2`.
    pub fn harmonic(modes: usize) -> Self {
        let mut h = Self::zero(modes);
        for j in 1..=modes {
            h = h.add(&Self::phi(modes, j).pow(2)).add(&Self::pi(modes, j).pow(2));
        }
        h.scale(&Exact::ratio(1, 2))
    }

    /// Harmonic part plus `λ Σ_j φ_j⁴`, with `λ = num/den`.
    pub fn quartic(modes: usize, num: i64, den: i64) -> Self {
        let mut h = Self::harmonic(modes);
        for j in 1..=modes {
            h = h.add(&Self::phi(modes, j).pow(4).scale(&Exact::ratio(num, den)));
        }
        h
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Exact)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Exponents::degree).max().unwrap_or(0)
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(Exact::is_real)
    }

    /// True when every monomial has at most quadratic degree.
    pub fn is_quadratic(&self) -> bool {
        self.degree() <= 2
    }

    pub fn add_term(&mut self, e: Exponents, c: Exact) {
        assert_eq!(e.0.len(), 2 * self.modes, "exponent vector length");
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(x) => {
                *x += &c;
                if x.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    /// The same polynomial over more modes.
    pub fn widen(&self, modes: usize) -> Self {
        if modes <= self.modes {
            return self.clone();
        }
        let mut out = Self::zero(modes);
        for (e, c) in &self.terms {
            let mut v = vec![0; 2 * modes];
            v[..self.modes].copy_from_slice(&e.0[..self.modes]);
            v[modes..modes + self.modes].copy_from_slice(&e.0[self.modes..]);
            out.add_term(Exponents(v), c.clone());
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let modes = self.modes.max(other.modes);
        let mut out = self.widen(modes);
        for (e, c) in &other.widen(modes).terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Exact::from_integer(-1)))
    }

    pub fn scale(&self, c: &Exact) -> Self {
        let mut out = Self::zero(self.modes);
        for (e, x) in &self.terms {
            out.add_term(e.clone(), x * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let modes = self.modes.max(other.modes);
        let (l, r) = (self.widen(modes), other.widen(modes));
        let mut out = Self::zero(modes);
        for (e1, c1) in &l.terms {
            for (e2, c2) in &r.terms {
                let e = Exponents(e1.0.iter().zip(&e2.0).map(|(a, b)| a + b).collect());
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one(self.modes);
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn check_degree(&self, cap: u32) -> Result<()> {
        if self.degree() > cap {
            return Err(Error::DegreeCap { degree: self.degree(), cap });
        }
        Ok(())
    }

    /// Formal partial derivative.
    pub fn partial_derivative(&self, v: Variable) -> Result<Self> {
        let j = v.mode();
        if j == 0 || j > self.modes {
            return Err(Error::UnknownVariable(v.to_string()));
        }
        Ok(match v {
            Variable::Phi(j) => self.derivative_index(j - 1),
            Variable::Pi(j) => self.derivative_index(self.modes + j - 1),
            Variable::Y(j) => self
                .derivative_index(j - 1)
                .add(&self.derivative_index(self.modes + j - 1).scale(&Exact::i()))
                .scale(&Exact::inv_sqrt2()),
            Variable::Z(j) => self
                .derivative_index(j - 1)
                .sub(&self.derivative_index(self.modes + j - 1).scale(&Exact::i()))
                .scale(&Exact::inv_sqrt2()),
        })
    }

    fn derivative_index(&self, idx: usize) -> Self {
        let mut out = Self::zero(self.modes);
        for (e, c) in &self.terms {
            let k = e.0[idx];
            if k == 0 {
                continue;
            }
            let mut d = e.0.clone();
            d[idx] -= 1;
            out.add_term(Exponents(d), c.scale_int(k as i64));
        }
        out
    }

    /// Evaluate at a real phase-space point.
    pub fn evaluate(&self, phi: &[f64], pi: &[f64]) -> Complex64 {
        debug_assert!(phi.len() >= self.modes && pi.len() >= self.modes);
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut m = 1.0;
                for j in 0..self.modes {
                    m *= phi[j].powi(e.0[j] as i32) * pi[j].powi(e.0[self.modes + j] as i32);
                }
                c.to_complex() * m
            })
            .sum()
    }

    /// A float copy suitable for fast repeated evaluation.
    pub fn compile(&self) -> CompiledPolynomial {
        CompiledPolynomial {
            modes: self.modes,
            terms: self.terms.iter().map(|(e, c)| (e.0.clone(), c.to_complex())).collect(),
        }
    }

    /// `g_n(Φ, Π)`: substitute Φ_j = (a_j + a_j⁺)/√2, Π_j = (a_j − a_j⁺)/(i√2),
    /// expand commutatively, and take the normal product of every word.
    ///
    /// Working in the symbol chart `y_j ↔ a_j⁺`, `z_j ↔ a_j`, this is the
    /// change of variables `f(y, z) = g((z + y)/√2, (z − y)/(i√2))` followed
    /// by reading each `y^i z^j` as `(a⁺)^i a^j`.
    pub fn substitute_normal(&self) -> OperatorPolynomial {
        let n = self.modes;
        let phis: Vec<OperatorPolynomial> = (1..=n).map(|j| OperatorPolynomial::field_phi(n, j)).collect();
        let pis: Vec<OperatorPolynomial> = (1..=n).map(|j| OperatorPolynomial::field_pi(n, j)).collect();
        let mut out = OperatorPolynomial::zero(n);
        for (e, c) in &self.terms {
            let mut acc = OperatorPolynomial::scalar(n, c.clone());
            for j in 0..n {
                for _ in 0..e.0[j] {
                    acc = acc.symbol_mul(&phis[j]);
                }
                for _ in 0..e.0[n + j] {
                    acc = acc.symbol_mul(&pis[j]);
                }
            }
            out = out.add(&acc);
        }
        out
    }

    /// Weyl-symmetric operator: each monomial becomes the average over all
    /// distinct orderings of its Φ/Π factors, rewritten to normal form.
    pub fn substitute_symmetric(&self) -> OperatorPolynomial {
        let n = self.modes;
        let mut out = OperatorPolynomial::zero(n);
        for (e, c) in &self.terms {
            let mut factors: Vec<usize> = Vec::new();
            for (idx, &k) in e.0.iter().enumerate() {
                factors.extend(std::iter::repeat(idx).take(k as usize));
            }
            let perms = distinct_permutations(&factors);
            let count = perms.len() as i64;
            let mut sum = OperatorPolynomial::zero(n);
            for perm in perms {
                let mut word = WordPolynomial::scalar(n, Exact::one());
                for idx in perm {
                    let field = if idx < n {
                        OperatorPolynomial::field_phi(n, idx + 1)
                    } else {
                        OperatorPolynomial::field_pi(n, idx - n + 1)
                    };
                    word = word.mul(&WordPolynomial::from(&field));
                }
                sum = sum.add(&rewrite_to_normal_form(&word));
            }
            out = out.add(&sum.scale(&(c * &Exact::ratio(1, count))));
        }
        out
    }
}

impl Variable {
    pub fn mode(&self) -> usize {
        match *self {
            Variable::Phi(j) | Variable::Pi(j) | Variable::Y(j) | Variable::Z(j) => j,
        }
    }
}

fn distinct_permutations(items: &[usize]) -> Vec<Vec<usize>> {
    let mut sorted = items.to_vec();
    sorted.sort_unstable();
    let mut out = vec![sorted.clone()];
    // Lexicographic next-permutation enumerates each distinct ordering once.
    loop {
        let Some(i) = (0..sorted.len().saturating_sub(1)).rev().find(|&i| sorted[i] < sorted[i + 1]) else {
            break;
        };
        let k = (i + 1..sorted.len()).rev().find(|&k| sorted[k] > sorted[i]).unwrap();
        sorted.swap(i, k);
        sorted[i + 1..].reverse();
        out.push(sorted.clone());
    }
    out
}

/// Float coefficients and exponent vectors for hot evaluation loops.
#[derive(Clone, Debug)]
pub struct CompiledPolynomial {
    modes: usize,
    terms: Vec<(Vec<u32>, Complex64)>,
}

impl CompiledPolynomial {
    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn evaluate(&self, phi: &[f64], pi: &[f64]) -> Complex64 {
        let n = self.modes;
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut m = 1.0;
                for j in 0..n {
                    m *= phi[j].powi(e[j] as i32) * pi[j].powi(e[n + j] as i32);
                }
                c * m
            })
            .sum()
    }

    /// Real part of [`Self::evaluate`], for polynomials known to be real.
    pub fn evaluate_real(&self, phi: &[f64], pi: &[f64]) -> f64 {
        self.evaluate(phi, pi).re
    }
}

impl fmt::Display for PhiPiPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}")?;
            for (idx, &k) in e.0.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let v = if idx < self.modes { Variable::Phi(idx + 1) } else { Variable::Pi(idx - self.modes + 1) };
                if k == 1 {
                    write!(f, "*{v}")?;
                } else {
                    write!(f, "*{v}^{k}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivatives() {
        let h = PhiPiPolynomial::harmonic(1);
        assert_eq!(h.partial_derivative(Variable::Pi(1)).unwrap(), PhiPiPolynomial::pi(1, 1));
        let q = PhiPiPolynomial::phi(1, 1).pow(4).scale(&Exact::ratio(1, 10));
        let dq = q.partial_derivative(Variable::Phi(1)).unwrap();
        assert_eq!(dq, PhiPiPolynomial::phi(1, 1).pow(3).scale(&Exact::ratio(4, 10)));
        let cross = PhiPiPolynomial::phi(2, 1).mul(&PhiPiPolynomial::pi(2, 2));
        assert!(cross.partial_derivative(Variable::Pi(1)).unwrap().is_zero());
        assert!(h.partial_derivative(Variable::Phi(2)).is_err());
    }

    #[test]
    fn substitute_phi_is_field_operator() {
        let g = PhiPiPolynomial::phi(1, 1);
        assert_eq!(g.substitute_normal(), OperatorPolynomial::field_phi(1, 1));
    }

    #[test]
    fn harmonic_normal_form_is_number_operator() {
        let h = PhiPiPolynomial::harmonic(1);
        let n = OperatorPolynomial::creation(1, 1).mul(&OperatorPolynomial::annihilation(1, 1));
        assert_eq!(h.substitute_normal(), n);
        // symmetric ordering keeps the zero-point constant
        let sym = h.substitute_symmetric();
        assert_eq!(sym.sub(&n), OperatorPolynomial::scalar(1, Exact::ratio(1, 2)));
    }

    #[test]
    fn complex_chart_variables_map_to_ladder_symbols() {
        // ((φ − iπ)/√2)^2 ((φ + iπ)/√2) → (a⁺)² a
        let y = PhiPiPolynomial::variable(1, Variable::Y(1));
        let z = PhiPiPolynomial::variable(1, Variable::Z(1));
        let g = y.pow(2).mul(&z);
        let expected = OperatorPolynomial::creation(1, 1).pow(2).mul(&OperatorPolynomial::annihilation(1, 1));
        assert_eq!(g.substitute_normal(), expected);
    }

    #[test]
    fn permutations_are_distinct() {
        assert_eq!(distinct_permutations(&[0, 0, 1]).len(), 3);
        assert_eq!(distinct_permutations(&[0, 1, 2]).len(), 6);
        assert_eq!(distinct_permutations(&[]).len(), 1);
    }
}
