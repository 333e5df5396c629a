//! Commutator-as-derivative identities, each as a pair of sides that must
//! agree exactly after canonicalization.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::coeff::{rational, Exact};
use super::eval::evaluate_matrix;
use super::operator::{symbolic_commutator, Monomial, OperatorPolynomial};
use super::phipi::{Exponents, PhiPiPolynomial, Variable};
use crate::error::{Error, Result};
use crate::fock::{commutator, FockBasis};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Lemma {
    /// `[a_j, f(a⁺)] = ∂f/∂y_j (a⁺)`
    CreationOnly,
    /// `[a_j⁺, f(a)] = −∂f/∂z_j (a)`
    AnnihilationOnly,
    /// `[a_j, f_n] = (∂f/∂y_j)_n`
    NormalAnnihilator,
    /// `[a_j⁺, f_n] = −(∂f/∂z_j)_n`
    NormalCreator,
    /// `[Φ_j, Π_k^m] = iδ_jk m Π_k^(m−1)`
    FieldPower,
    /// `[Φ_j, g_n] = i(∂g/∂π_j)_n`
    FieldPhi,
    /// `[Π_j, g_n] = −i(∂g/∂φ_j)_n`
    FieldPi,
}

impl Lemma {
    pub const ALL: [Lemma; 7] = [
        Lemma::CreationOnly,
        Lemma::AnnihilationOnly,
        Lemma::NormalAnnihilator,
        Lemma::NormalCreator,
        Lemma::FieldPower,
        Lemma::FieldPhi,
        Lemma::FieldPi,
    ];
}

impl fmt::Display for Lemma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Lemma::CreationOnly => "creation-only",
            Lemma::AnnihilationOnly => "annihilation-only",
            Lemma::NormalAnnihilator => "normal-annihilator",
            Lemma::NormalCreator => "normal-creator",
            Lemma::FieldPower => "field-power",
            Lemma::FieldPhi => "field-phi",
            Lemma::FieldPi => "field-pi",
        })
    }
}

/// Both sides of one identity, plus the operators whose commutator forms the
/// left side.
#[derive(Clone, Debug)]
pub struct LemmaInstance {
    pub lemma: Lemma,
    pub left_factor: OperatorPolynomial,
    pub right_factor: OperatorPolynomial,
    pub lhs: OperatorPolynomial,
    pub rhs: OperatorPolynomial,
}

impl LemmaInstance {
    fn new(lemma: Lemma, x: OperatorPolynomial, y: OperatorPolynomial, rhs: OperatorPolynomial) -> Self {
        let lhs = symbolic_commutator(&x, &y);
        Self { lemma, left_factor: x, right_factor: y, lhs, rhs }
    }

    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }

    /// Largest `|[X, Y] − rhs|` entry over kets with every occupation at most
    /// `M − margin`, where the commutator is formed from truncated matrices.
    /// The margin is one more than the degree of `Y`, so every intermediate
    /// ket stays below the cutoff.
    pub fn matrix_defect(&self, basis: FockBasis) -> Result<f64> {
        let margin = self.right_factor.degree().max(self.left_factor.degree()) as usize + 1;
        if margin > basis.cutoff() {
            return Err(Error::InsufficientMargin { cutoff: basis.cutoff(), degree: margin as u32 });
        }
        let x = evaluate_matrix(&self.left_factor, basis)?;
        let y = evaluate_matrix(&self.right_factor, basis)?;
        let c = commutator(&x, &y)?;
        c.max_abs_diff_on_columns(&evaluate_matrix(&self.rhs, basis)?, &basis.interior(margin))
    }
}

fn check_mode(modes: usize, j: usize) -> Result<()> {
    if j == 0 || j > modes {
        return Err(Error::ModeOutOfRange { mode: j, modes });
    }
    Ok(())
}

/// Requires `f` to contain creation generators only.
pub fn creation_only(f: &OperatorPolynomial, j: usize) -> Result<LemmaInstance> {
    check_mode(f.modes(), j)?;
    if !f.is_creation_only() {
        return Err(Error::Config("creation-only identity needs f(a⁺)".into()));
    }
    let a = OperatorPolynomial::annihilation(f.modes(), j);
    Ok(LemmaInstance::new(Lemma::CreationOnly, a, f.clone(), f.d_creation(j)))
}

/// Requires `f` to contain annihilation generators only.
pub fn annihilation_only(f: &OperatorPolynomial, j: usize) -> Result<LemmaInstance> {
    check_mode(f.modes(), j)?;
    if !f.is_annihilation_only() {
        return Err(Error::Config("annihilation-only identity needs f(a)".into()));
    }
    let ad = OperatorPolynomial::creation(f.modes(), j);
    Ok(LemmaInstance::new(Lemma::AnnihilationOnly, ad, f.clone(), f.d_annihilation(j).scale(&-Exact::one())))
}

pub fn normal_annihilator(f: &OperatorPolynomial, j: usize) -> Result<LemmaInstance> {
    check_mode(f.modes(), j)?;
    let a = OperatorPolynomial::annihilation(f.modes(), j);
    Ok(LemmaInstance::new(Lemma::NormalAnnihilator, a, f.clone(), f.d_creation(j)))
}

pub fn normal_creator(f: &OperatorPolynomial, j: usize) -> Result<LemmaInstance> {
    check_mode(f.modes(), j)?;
    let ad = OperatorPolynomial::creation(f.modes(), j);
    Ok(LemmaInstance::new(Lemma::NormalCreator, ad, f.clone(), f.d_annihilation(j).scale(&-Exact::one())))
}

/// `Π_k^m` is the operator power, rewritten to normal form.
pub fn field_power(modes: usize, j: usize, k: usize, m: u32) -> Result<LemmaInstance> {
    check_mode(modes, j)?;
    check_mode(modes, k)?;
    let phi = OperatorPolynomial::field_phi(modes, j);
    let pi_k = OperatorPolynomial::field_pi(modes, k);
    let rhs = if j == k && m > 0 {
        pi_k.pow(m - 1).scale(&(&Exact::i() * &Exact::from_integer(m as i64)))
    } else {
        OperatorPolynomial::zero(modes)
    };
    Ok(LemmaInstance::new(Lemma::FieldPower, phi, pi_k.pow(m), rhs))
}

pub fn field_phi(g: &PhiPiPolynomial, j: usize) -> Result<LemmaInstance> {
    check_mode(g.modes(), j)?;
    let rhs = g.partial_derivative(Variable::Pi(j))?.substitute_normal().scale(&Exact::i());
    let phi = OperatorPolynomial::field_phi(g.modes(), j);
    Ok(LemmaInstance::new(Lemma::FieldPhi, phi, g.substitute_normal(), rhs))
}

pub fn field_pi(g: &PhiPiPolynomial, j: usize) -> Result<LemmaInstance> {
    check_mode(g.modes(), j)?;
    let rhs = g.partial_derivative(Variable::Phi(j))?.substitute_normal().scale(&-Exact::i());
    let pi = OperatorPolynomial::field_pi(g.modes(), j);
    Ok(LemmaInstance::new(Lemma::FieldPi, pi, g.substitute_normal(), rhs))
}

fn random_coefficient(rng: &mut impl Rng, complex: bool) -> Exact {
    let mut part = || rational(rng.gen_range(-9..=9), rng.gen_range(1..=4));
    let re = part();
    let im = if complex { part() } else { rational(0, 1) };
    Exact::gaussian(re, im)
}

/// Random normal-ordered polynomial with up to `terms` monomials of total
/// degree at most `degree`. `creation` / `annihilation` switch the two
/// generator kinds on or off.
pub fn random_operator_polynomial(
    rng: &mut impl Rng,
    modes: usize,
    degree: u32,
    terms: usize,
    creation: bool,
    annihilation: bool,
) -> OperatorPolynomial {
    let mut p = OperatorPolynomial::zero(modes);
    for _ in 0..terms {
        let mut m = Monomial::identity(modes);
        let d = rng.gen_range(0..=degree);
        for _ in 0..d {
            let j = rng.gen_range(0..modes);
            match (creation, annihilation) {
                (true, true) if rng.gen_bool(0.5) => m.create[j] += 1,
                (true, _) => m.create[j] += 1,
                (false, true) => m.annihilate[j] += 1,
                (false, false) => {}
            }
            if creation && annihilation && m.degree() < d && rng.gen_bool(0.5) {
                m.annihilate[rng.gen_range(0..modes)] += 1;
            }
        }
        p = p.add(&OperatorPolynomial::monomial(m, random_coefficient(rng, true)));
    }
    p
}

/// Random real phase-space polynomial of total degree at most `degree`.
pub fn random_phipi_polynomial(rng: &mut impl Rng, modes: usize, degree: u32, terms: usize) -> PhiPiPolynomial {
    let mut g = PhiPiPolynomial::zero(modes);
    for _ in 0..terms {
        let mut e = vec![0u32; 2 * modes];
        for _ in 0..rng.gen_range(0..=degree) {
            e[rng.gen_range(0..2 * modes)] += 1;
        }
        g.add_term(Exponents(e), random_coefficient(rng, false));
    }
    g
}

/// One instance of every identity for a fresh random draw, over all modes.
pub fn random_instances(rng: &mut impl Rng, modes: usize, degree: u32) -> Result<Vec<LemmaInstance>> {
    let f_create = random_operator_polynomial(rng, modes, degree, 4, true, false);
    let f_annihilate = random_operator_polynomial(rng, modes, degree, 4, false, true);
    let f = random_operator_polynomial(rng, modes, degree, 5, true, true);
    let g = random_phipi_polynomial(rng, modes, degree, 5);
    let mut out = Vec::new();
    for j in 1..=modes {
        out.push(creation_only(&f_create, j)?);
        out.push(annihilation_only(&f_annihilate, j)?);
        out.push(normal_annihilator(&f, j)?);
        out.push(normal_creator(&f, j)?);
        let k = rng.gen_range(1..=modes);
        out.push(field_power(modes, j, k, rng.gen_range(0..=degree))?);
        out.push(field_phi(&g, j)?);
        out.push(field_pi(&g, j)?);
    }
    Ok(out)
}
