//! Noncommuting polynomials in the bosonic generators `a_j`, `a_j⁺`.
//!
//! [`WordPolynomial`] holds arbitrary products in the order they were
//! written. [`OperatorPolynomial`] holds the canonical normal-ordered form:
//! every word is `ad[..]… a[..]…` with each block sorted by mode.
//!
//! Two maps take a word polynomial to canonical form:
//! [`normal_product`] only permutes generators (no commutator terms), while
//! [`rewrite_to_normal_form`] applies `[a_i, a_j⁺] = δ_ij` and returns an
//! equal operator.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use super::coeff::Exact;

/// `a_mode` or, when `daggered`, `a_mode⁺`. Modes are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub mode: usize,
    pub daggered: bool,
}

impl Generator {
    pub fn create(mode: usize) -> Self {
        Self { mode, daggered: true }
    }

    pub fn annihilate(mode: usize) -> Self {
        Self { mode, daggered: false }
    }

    pub fn adjoint(self) -> Self {
        Self { mode: self.mode, daggered: !self.daggered }
    }
}

/// Creation generators sort before annihilation generators, then by mode.
impl Ord for Generator {
    fn cmp(&self, other: &Self) -> Ordering {
        other.daggered.cmp(&self.daggered).then(self.mode.cmp(&other.mode))
    }
}

impl PartialOrd for Generator {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.daggered {
            write!(f, "ad[{}]", self.mode)
        } else {
            write!(f, "a[{}]", self.mode)
        }
    }
}

/// An operator product, left to right. The empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<Generator>);

impl Word {
    pub fn identity() -> Self {
        Self(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_mode(&self) -> usize {
        self.0.iter().map(|g| g.mode).max().unwrap_or(0)
    }

    /// Reverse the product and flip every dagger.
    pub fn adjoint(&self) -> Self {
        Self(self.0.iter().rev().map(|g| g.adjoint()).collect())
    }

    pub fn concat(&self, other: &Word) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Self(v)
    }

    pub fn is_normal_ordered(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }
}

/// Shorter words first, then lexicographic by generator.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, coeff: &Exact, gens: impl Iterator<Item = Generator>) -> fmt::Result {
    write!(f, "{coeff}")?;
    for g in gens {
        write!(f, "*{g}")?;
    }
    Ok(())
}

/// A normal-ordered monomial `Π (a_j⁺)^create[j] · Π a_j^annihilate[j]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub create: Vec<u32>,
    pub annihilate: Vec<u32>,
}

impl Monomial {
    pub fn identity(modes: usize) -> Self {
        Self { create: vec![0; modes], annihilate: vec![0; modes] }
    }

    pub fn modes(&self) -> usize {
        self.create.len()
    }

    pub fn degree(&self) -> u32 {
        self.create.iter().sum::<u32>() + self.annihilate.iter().sum::<u32>()
    }

    pub fn is_identity(&self) -> bool {
        self.degree() == 0
    }

    /// Count generators of `word`, discarding their order.
    pub fn from_word(word: &Word, modes: usize) -> Self {
        let mut m = Self::identity(modes);
        for g in &word.0 {
            if g.daggered {
                m.create[g.mode - 1] += 1;
            } else {
                m.annihilate[g.mode - 1] += 1;
            }
        }
        m
    }

    /// Generators in canonical order.
    pub fn generators(&self) -> impl Iterator<Item = Generator> + '_ {
        let create = self
            .create
            .iter()
            .enumerate()
            .flat_map(|(j, &e)| std::iter::repeat(Generator::create(j + 1)).take(e as usize));
        let annihilate = self
            .annihilate
            .iter()
            .enumerate()
            .flat_map(|(j, &e)| std::iter::repeat(Generator::annihilate(j + 1)).take(e as usize));
        create.chain(annihilate)
    }

    pub fn to_word(&self) -> Word {
        Word(self.generators().collect())
    }

    pub fn adjoint(&self) -> Self {
        Self { create: self.annihilate.clone(), annihilate: self.create.clone() }
    }

    fn widened(&self, modes: usize) -> Self {
        let mut m = self.clone();
        m.create.resize(modes, 0);
        m.annihilate.resize(modes, 0);
        m
    }

    /// Commutative product of the symbols (exponents add).
    pub fn symbol_mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            create: self.create.iter().zip(&other.create).map(|(a, b)| a + b).collect(),
            annihilate: self.annihilate.iter().zip(&other.annihilate).map(|(a, b)| a + b).collect(),
        }
    }

    /// Operator product of two normal-ordered monomials, returned in normal
    /// form. Per mode, `a^m (a⁺)^n = Σ_k C(m,k) C(n,k) k! (a⁺)^(n−k) a^(m−k)`;
    /// distinct modes commute, so the contractions factorize over modes.
    pub fn operator_mul(&self, other: &Monomial) -> Vec<(Monomial, i64)> {
        let modes = self.modes();
        let mut out: Vec<(Monomial, i64)> = vec![(self.symbol_mul(other), 1)];
        for j in 0..modes {
            let m = self.annihilate[j];
            let n = other.create[j];
            let kmax = m.min(n);
            if kmax == 0 {
                continue;
            }
            let mut next = Vec::with_capacity(out.len() * (kmax as usize + 1));
            for (mono, c) in &out {
                for k in 0..=kmax {
                    let mut mk = mono.clone();
                    mk.create[j] -= k;
                    mk.annihilate[j] -= k;
                    next.push((mk, c * contraction_count(m, n, k)));
                }
            }
            out = next;
        }
        out
    }
}

/// `C(m,k) · C(n,k) · k!`.
fn contraction_count(m: u32, n: u32, k: u32) -> i64 {
    binomial(m, k) * binomial(n, k) * factorial(k)
}

pub(crate) fn binomial(n: u32, k: u32) -> i64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i64 / (i + 1) as i64;
    }
    acc
}

pub(crate) fn factorial(k: u32) -> i64 {
    (1..=k as i64).product()
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.generators().cmp(other.generators()))
            .then_with(|| self.modes().cmp(&other.modes()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sum of arbitrary-order words with exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordPolynomial {
    modes: usize,
    terms: BTreeMap<Word, Exact>,
}

impl WordPolynomial {
    pub fn zero(modes: usize) -> Self {
        Self { modes, terms: BTreeMap::new() }
    }

    pub fn from_word(modes: usize, word: Word, coeff: Exact) -> Self {
        let mut p = Self::zero(modes.max(word.max_mode()));
        p.add_term(word, coeff);
        p
    }

    pub fn generator(modes: usize, g: Generator) -> Self {
        Self::from_word(modes, Word(vec![g]), Exact::one())
    }

    pub fn scalar(modes: usize, c: Exact) -> Self {
        Self::from_word(modes, Word::identity(), c)
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Exact)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, word: Word, coeff: Exact) {
        self.modes = self.modes.max(word.max_mode());
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&word) {
            Some(c) => {
                *c += &coeff;
                if c.is_zero() {
                    self.terms.remove(&word);
                }
            }
            None => {
                self.terms.insert(word, coeff);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Exact) -> Self {
        let mut out = Self::zero(self.modes);
        for (w, x) in &self.terms {
            out.add_term(w.clone(), x * c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&Exact::from_integer(-1))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Concatenation product; no reordering.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.modes.max(other.modes));
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                out.add_term(w1.concat(w2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::scalar(self.modes, Exact::one());
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero(self.modes);
        for (w, c) in &self.terms {
            out.add_term(w.adjoint(), c.conj());
        }
        out
    }
}

impl From<&OperatorPolynomial> for WordPolynomial {
    fn from(p: &OperatorPolynomial) -> Self {
        let mut out = Self::zero(p.modes());
        for (m, c) in p.terms() {
            out.add_term(m.to_word(), c.clone());
        }
        out
    }
}

impl fmt::Display for WordPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write_term(f, c, w.0.iter().copied())?;
        }
        Ok(())
    }
}

/// Canonical normal-ordered operator polynomial.
///
/// Zero coefficients are never stored, and two equal operators print to
/// the same bytes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorPolynomial {
    modes: usize,
    terms: BTreeMap<Monomial, Exact>,
}

impl OperatorPolynomial {
    pub fn zero(modes: usize) -> Self {
        Self { modes, terms: BTreeMap::new() }
    }

    pub fn identity(modes: usize) -> Self {
        Self::scalar(modes, Exact::one())
    }

    pub fn scalar(modes: usize, c: Exact) -> Self {
        let mut p = Self::zero(modes);
        p.add_term(Monomial::identity(modes), c);
        p
    }

    pub fn monomial(mono: Monomial, c: Exact) -> Self {
        let mut p = Self::zero(mono.modes());
        p.add_term(mono, c);
        p
    }

    pub fn annihilation(modes: usize, j: usize) -> Self {
        let mut m = Monomial::identity(modes.max(j));
        m.annihilate[j - 1] = 1;
        Self::monomial(m, Exact::one())
    }

    pub fn creation(modes: usize, j: usize) -> Self {
        Self::annihilation(modes, j).adjoint()
    }

    /// Φ_j = (a_j + a_j⁺)/√2.
    pub fn field_phi(modes: usize, j: usize) -> Self {
        Self::annihilation(modes, j).add(&Self::creation(modes, j)).scale(&Exact::inv_sqrt2())
    }

    /// Π_j = (a_j − a_j⁺)/(i√2) = −i(a_j − a_j⁺)/√2.
    pub fn field_pi(modes: usize, j: usize) -> Self {
        let factor = &Exact::inv_sqrt2() * &(-Exact::i());
        Self::annihilation(modes, j).sub(&Self::creation(modes, j)).scale(&factor)
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Exact)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn coefficient(&self, mono: &Monomial) -> Exact {
        self.terms.get(&mono.widened(self.modes)).cloned().unwrap_or_default()
    }

    /// Scalar part (coefficient of the identity word).
    pub fn constant(&self) -> Exact {
        self.coefficient(&Monomial::identity(self.modes))
    }

    /// The same operator over `modes ≥ self.modes()` modes.
    pub fn widen(&self, modes: usize) -> Self {
        let modes = modes.max(self.modes);
        if modes == self.modes {
            return self.clone();
        }
        Self {
            modes,
            terms: self.terms.iter().map(|(m, c)| (m.widened(modes), c.clone())).collect(),
        }
    }

    fn add_term(&mut self, mono: Monomial, coeff: Exact) {
        if coeff.is_zero() {
            return;
        }
        let mono = if mono.modes() < self.modes { mono.widened(self.modes) } else { mono };
        if mono.modes() > self.modes {
            *self = self.widen(mono.modes());
        }
        match self.terms.get_mut(&mono) {
            Some(c) => {
                *c += &coeff;
                if c.is_zero() {
                    self.terms.remove(&mono);
                }
            }
            None => {
                self.terms.insert(mono, coeff);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let modes = self.modes.max(other.modes);
        let mut out = self.widen(modes);
        for (m, c) in &other.terms {
            out.add_term(m.widened(modes), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Exact::from_integer(-1)))
    }

    pub fn scale(&self, c: &Exact) -> Self {
        let mut out = Self::zero(self.modes);
        for (m, x) in &self.terms {
            out.add_term(m.clone(), x * c);
        }
        out
    }

    /// Operator product, result in normal form.
    pub fn mul(&self, other: &Self) -> Self {
        let modes = self.modes.max(other.modes);
        let (lhs, rhs) = (self.widen(modes), other.widen(modes));
        let mut out = Self::zero(modes);
        for (m1, c1) in &lhs.terms {
            for (m2, c2) in &rhs.terms {
                let c = c1 * c2;
                for (m, k) in m1.operator_mul(m2) {
                    out.add_term(m, c.scale_int(k));
                }
            }
        }
        out
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::identity(self.modes);
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }

    /// Product of the commutative symbols, i.e. the normal product of the
    /// operator product: `:A B:`.
    pub fn symbol_mul(&self, other: &Self) -> Self {
        let modes = self.modes.max(other.modes);
        let (lhs, rhs) = (self.widen(modes), other.widen(modes));
        let mut out = Self::zero(modes);
        for (m1, c1) in &lhs.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.symbol_mul(m2), c1 * c2);
            }
        }
        out
    }

    /// Hermitian conjugate. The adjoint of a normal-ordered monomial is
    /// again normal ordered.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero(self.modes);
        for (m, c) in &self.terms {
            out.add_term(m.adjoint(), c.conj());
        }
        out
    }

    /// Formal `∂/∂y_j` of the symbol, with `y_j ↔ a_j⁺`.
    pub fn d_creation(&self, j: usize) -> Self {
        self.derivative(j, true)
    }

    /// Formal `∂/∂z_j` of the symbol, with `z_j ↔ a_j`.
    pub fn d_annihilation(&self, j: usize) -> Self {
        self.derivative(j, false)
    }

    fn derivative(&self, j: usize, creation: bool) -> Self {
        let mut out = Self::zero(self.modes);
        if j == 0 || j > self.modes {
            return out;
        }
        for (m, c) in &self.terms {
            let e = if creation { m.create[j - 1] } else { m.annihilate[j - 1] };
            if e == 0 {
                continue;
            }
            let mut d = m.clone();
            if creation {
                d.create[j - 1] -= 1;
            } else {
                d.annihilate[j - 1] -= 1;
            }
            out.add_term(d, c.scale_int(e as i64));
        }
        out
    }

    /// True if only creation generators appear (a function `f(a⁺)`).
    pub fn is_creation_only(&self) -> bool {
        self.terms.keys().all(|m| m.annihilate.iter().all(|&e| e == 0))
    }

    pub fn is_annihilation_only(&self) -> bool {
        self.terms.keys().all(|m| m.create.iter().all(|&e| e == 0))
    }
}

impl fmt::Display for OperatorPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write_term(f, c, m.generators())?;
        }
        Ok(())
    }
}

/// Reorder each word so creation generators stand left of annihilation
/// generators, without commutator corrections.
pub fn normal_product(p: &WordPolynomial) -> OperatorPolynomial {
    let mut out = OperatorPolynomial::zero(p.modes());
    for (w, c) in p.terms() {
        out.add_term(Monomial::from_word(w, p.modes()), c.clone());
    }
    out
}

/// How [`rewrite_with`] chooses the next reduction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RewriteStrategy {
    /// Multiply generators left to right with the closed-form contraction
    /// rule of [`Monomial::operator_mul`].
    Contraction,
    /// Adjacent-swap rewriting, always at the leftmost out-of-order pair.
    LeftmostSwap,
    /// Adjacent-swap rewriting, always at the rightmost out-of-order pair.
    RightmostSwap,
}

/// The normal form of `p` as an operator (equal to `p`).
pub fn rewrite_to_normal_form(p: &WordPolynomial) -> OperatorPolynomial {
    rewrite_with(p, RewriteStrategy::Contraction)
}

pub fn rewrite_with(p: &WordPolynomial, strategy: RewriteStrategy) -> OperatorPolynomial {
    let modes = p.modes();
    let mut out = OperatorPolynomial::zero(modes);
    for (w, c) in p.terms() {
        let reduced = match strategy {
            RewriteStrategy::Contraction => reduce_by_contraction(w, modes),
            RewriteStrategy::LeftmostSwap => reduce_by_swaps(w, modes, false),
            RewriteStrategy::RightmostSwap => reduce_by_swaps(w, modes, true),
        };
        out = out.add(&reduced.scale(c));
    }
    out
}

fn reduce_by_contraction(w: &Word, modes: usize) -> OperatorPolynomial {
    let mut acc = OperatorPolynomial::identity(modes);
    for g in &w.0 {
        let gen = if g.daggered {
            OperatorPolynomial::creation(modes, g.mode)
        } else {
            OperatorPolynomial::annihilation(modes, g.mode)
        };
        acc = acc.mul(&gen);
    }
    acc
}

/// Rewrite one word by repeatedly fixing an adjacent out-of-order pair:
/// `a_i a_j⁺ → a_j⁺ a_i + δ_ij`, and same-kind pairs commute freely.
fn reduce_by_swaps(w: &Word, modes: usize, rightmost: bool) -> OperatorPolynomial {
    let mut out = OperatorPolynomial::zero(modes);
    let mut stack: Vec<(Vec<Generator>, i64)> = vec![(w.0.clone(), 1)];
    while let Some((word, c)) = stack.pop() {
        let mut positions = (0..word.len().saturating_sub(1)).filter(|&i| word[i] > word[i + 1]);
        let pos = if rightmost { positions.last() } else { positions.next() };
        match pos {
            None => {
                let mono = Monomial::from_word(&Word(word), modes);
                out.add_term(mono, Exact::from_integer(c));
            }
            Some(i) => {
                let (x, y) = (word[i], word[i + 1]);
                let mut swapped = word.clone();
                swapped.swap(i, i + 1);
                stack.push((swapped, c));
                if !x.daggered && y.daggered && x.mode == y.mode {
                    let mut contracted = word[..i].to_vec();
                    contracted.extend_from_slice(&word[i + 2..]);
                    stack.push((contracted, c));
                }
            }
        }
    }
    out
}

/// `[A, B] = AB − BA` in normal form.
pub fn symbolic_commutator(a: &OperatorPolynomial, b: &OperatorPolynomial) -> OperatorPolynomial {
    a.mul(b).sub(&b.mul(a))
}
