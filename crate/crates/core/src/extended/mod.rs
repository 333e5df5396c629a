//! The doubled Fock space `F^{2N}`: extended coherent vectors, modified field
//! operators, the generator `G₀` and interaction-picture operators.
//!
//! Prefactors follow the defining formulas literally. Where they disagree with
//! the single-block conventions the discrepancy is measured and reported,
//! never silently rescaled.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bridge::{coherent_vector_with_bound, DEFAULT_TAIL_BOUND};
use crate::classical::ClassicalState;
use crate::error::{Error, Result};
use crate::fock::{annihilation_matrix, commutator, creation_matrix, linalg, FockBasis, FockVector, OperatorMatrix};

/// Default survey times for both `t` and `t'`.
pub const DEFAULT_SURVEY_TIMES: [f64; 4] = [0.0, 0.25, 0.5, 1.0];

/// `2N` modes over one cutoff. Mode `j ≤ N` is `a_j`; mode `N + j` is `b_j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DoubledBasis {
    modes: usize,
    inner: FockBasis,
}

impl DoubledBasis {
    pub fn new(modes: usize, cutoff: usize) -> Result<Self> {
        let doubled = modes.checked_mul(2).ok_or(Error::DimensionOverflow { modes, cutoff })?;
        Ok(Self { modes, inner: FockBasis::new(doubled, cutoff)? })
    }

    /// Number of classical modes `N`.
    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn fock(&self) -> FockBasis {
        self.inner
    }

    pub fn a_mode(&self, j: usize) -> Result<usize> {
        self.check(j)?;
        Ok(j)
    }

    pub fn b_mode(&self, j: usize) -> Result<usize> {
        self.check(j)?;
        Ok(j + self.modes)
    }

    fn check(&self, j: usize) -> Result<()> {
        if j == 0 || j > self.modes {
            return Err(Error::ModeOutOfRange { mode: j, modes: self.modes });
        }
        Ok(())
    }

    fn a(&self, j: usize) -> Result<OperatorMatrix> {
        annihilation_matrix(self.a_mode(j)?, self.inner)
    }

    fn ad(&self, j: usize) -> Result<OperatorMatrix> {
        creation_matrix(self.a_mode(j)?, self.inner)
    }

    fn b(&self, j: usize) -> Result<OperatorMatrix> {
        annihilation_matrix(self.b_mode(j)?, self.inner)
    }

    fn bd(&self, j: usize) -> Result<OperatorMatrix> {
        creation_matrix(self.b_mode(j)?, self.inner)
    }
}

impl fmt::Display for DoubledBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "doubled N={} over {}", self.modes, self.inner)
    }
}

/// The extended coherent vector with its measured normalization.
#[derive(Clone, Debug)]
pub struct ExtendedCoherent {
    pub vector: FockVector,
    pub norm: f64,
    /// Scalar that would normalize the literal vector, `1/norm`.
    pub corrective_scale: f64,
    /// Probability mass of the normalized state lost to truncation.
    pub truncation_tail: f64,
}

/// `exp((1/√2) Σ_j ((φ_j + iπ_j) a_j⁺ + (φ_j − iπ_j) b_j⁺ − (φ_j² + π_j²))) |0⟩`.
///
/// The exponent is creation-only plus a scalar, so the vector factorizes
/// into per-block coherent amplitudes `z_j` (a-block) and `z̄_j` (b-block)
/// times `exp(−√2 Σ|z_j|²)`, against `exp(−Σ|z_j|²)` for a unit vector.
pub fn extended_coherent_vector(s: &ClassicalState, basis: DoubledBasis) -> Result<ExtendedCoherent> {
    s.check_modes(basis.modes())?;
    let doubled = ClassicalState {
        phi: s.phi.iter().chain(&s.phi).copied().collect(),
        pi: s.pi.iter().copied().chain(s.pi.iter().map(|p| -p)).collect(),
    };
    let unit = coherent_vector_with_bound(&doubled, basis.fock(), DEFAULT_TAIL_BOUND)?;
    let r2: f64 = (1..=s.modes()).map(|j| s.z(j).norm_sqr()).sum();
    let literal = unit.scale(Complex64::new(((1.0 - std::f64::consts::SQRT_2) * r2).exp(), 0.0));
    let norm = literal.norm();
    Ok(ExtendedCoherent {
        truncation_tail: 1.0 - unit.norm_sqr(),
        corrective_scale: 1.0 / norm,
        norm,
        vector: literal,
    })
}

/// The exponent of [`extended_coherent_vector`] as a matrix.
pub fn extended_exponent(s: &ClassicalState, basis: DoubledBasis) -> Result<OperatorMatrix> {
    s.check_modes(basis.modes())?;
    let mut out = OperatorMatrix::zeros(basis.fock());
    let inv = std::f64::consts::FRAC_1_SQRT_2;
    for j in 1..=basis.modes() {
        let alpha = Complex64::new(s.phi[j - 1], s.pi[j - 1]);
        out = out.add(&basis.ad(j)?.scale(alpha * inv))?.add(&basis.bd(j)?.scale(alpha.conj() * inv))?;
        let scalar = -(s.phi[j - 1].powi(2) + s.pi[j - 1].powi(2)) * inv;
        out = out.add(&OperatorMatrix::identity(basis.fock()).scale(Complex64::new(scalar, 0.0)))?;
    }
    Ok(out)
}

/// `Φ_j = (a_j + a_j⁺ + b_j + b_j⁺)/(2√2)` and `Π_j = (a_j − a_j⁺ − b_j + b_j⁺)/(2i√2)`.
pub fn extended_field_ops(j: usize, basis: DoubledBasis) -> Result<(OperatorMatrix, OperatorMatrix)> {
    let (a, ad, b, bd) = (basis.a(j)?, basis.ad(j)?, basis.b(j)?, basis.bd(j)?);
    let k = 1.0 / (2.0 * std::f64::consts::SQRT_2);
    let phi = a.add(&ad)?.add(&b)?.add(&bd)?.scale(Complex64::new(k, 0.0));
    let pi = a.sub(&ad)?.sub(&b)?.add(&bd)?.scale(Complex64::new(0.0, -k));
    Ok((phi, pi))
}

/// Which form of `G₀` to build.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum G0Reading {
    /// `Σ_j (a_j a_j⁺ − b_j b_j⁺)` as a literal product of truncated matrices.
    #[default]
    Literal,
    /// `Σ_j (a_j⁺ a_j − b_j⁺ b_j)`.
    NormalOrdered,
}

pub fn g0_operator(basis: DoubledBasis) -> Result<OperatorMatrix> {
    g0_operator_with(basis, G0Reading::Literal)
}

pub fn g0_operator_with(basis: DoubledBasis, reading: G0Reading) -> Result<OperatorMatrix> {
    let mut g = OperatorMatrix::zeros(basis.fock());
    for j in 1..=basis.modes() {
        let (a, ad, b, bd) = (basis.a(j)?, basis.ad(j)?, basis.b(j)?, basis.bd(j)?);
        let (a, ad, b, bd) = (a.as_sparse(), ad.as_sparse(), b.as_sparse(), bd.as_sparse());
        let term = match reading {
            G0Reading::Literal => a.mul(&ad)?.sub(&b.mul(&bd)?)?,
            G0Reading::NormalOrdered => ad.mul(&a)?.sub(&bd.mul(&b)?)?,
        };
        g = g.add(&term)?;
    }
    Ok(if basis.fock().dimension() > crate::fock::SPARSE_THRESHOLD { g } else { g.as_dense() })
}

/// `exp(−iG t) A exp(iG t)`. A diagonal `G` is exponentiated entrywise and
/// applied in `O(n²)`; anything else goes through the matrix exponential.
pub fn conjugate_by_generator(a: &OperatorMatrix, g: &OperatorMatrix, t: f64) -> Result<OperatorMatrix> {
    if !t.is_finite() {
        return Err(Error::ExpmFailed(format!("non-finite time {t}")));
    }
    if a.basis() != g.basis() {
        return Err(Error::BasisMismatch { left: a.basis().to_string(), right: g.basis().to_string() });
    }
    let entries = g.entries();
    let mut x = a.to_dense();
    if entries.iter().all(|(r, c, _)| r == c) {
        let mut phase = vec![Complex64::new(1.0, 0.0); x.nrows()];
        for (r, _, v) in entries {
            phase[r] = (v * Complex64::new(0.0, -t)).exp();
        }
        for c in 0..x.ncols() {
            for r in 0..x.nrows() {
                x[(r, c)] *= phase[r] * phase[c].conj();
            }
        }
        return OperatorMatrix::from_dense(a.basis(), x);
    }
    let u = linalg::expm(&(g.to_dense() * Complex64::new(0.0, -t)))?;
    x = linalg::matmul(&linalg::matmul(&u, &x), &u.adjoint());
    OperatorMatrix::from_dense(a.basis(), x)
}

/// `exp(−iG₀t) A exp(iG₀t)` with the literal `G₀`.
pub fn interaction_picture(a: &OperatorMatrix, basis: DoubledBasis, t: f64) -> Result<OperatorMatrix> {
    conjugate_by_generator(a, &g0_operator(basis)?, t)
}

/// Largest entry of `[x, y]` over `x ∈ {a_j, a_j⁺}`, `y ∈ {b_k, b_k⁺}`, all `j, k`.
pub fn block_commutation_defect(basis: DoubledBasis) -> Result<f64> {
    let mut worst = 0.0f64;
    for j in 1..=basis.modes() {
        for k in 1..=basis.modes() {
            for x in [basis.a(j)?, basis.ad(j)?] {
                for y in [basis.b(k)?, basis.bd(k)?] {
                    worst = worst.max(commutator(&x, &y)?.max_abs());
                }
            }
        }
    }
    Ok(worst)
}

/// `max |A(t + s) − (A(t))(s)|` for the interaction picture.
pub fn group_property_defect(a: &OperatorMatrix, basis: DoubledBasis, t: f64, s: f64) -> Result<f64> {
    let g0 = g0_operator(basis)?;
    let two_step = conjugate_by_generator(&conjugate_by_generator(a, &g0, t)?, &g0, s)?;
    two_step.max_abs_diff(&conjugate_by_generator(a, &g0, t + s)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SurveyCommutator {
    /// `[q_j(t), q_k(t')]`
    QQ,
    /// `[q_j(t), p_k(t')]`
    QP,
    /// `[p_j(t), p_k(t')]`
    PP,
}

impl fmt::Display for SurveyCommutator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SurveyCommutator::QQ => "qq",
            SurveyCommutator::QP => "qp",
            SurveyCommutator::PP => "pp",
        })
    }
}

/// One survey entry, restricted to the interior subspace.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurveyRow {
    pub j: usize,
    pub k: usize,
    pub t: f64,
    pub t_prime: f64,
    pub which: SurveyCommutator,
    /// Operator norm of the commutator.
    pub norm: f64,
    /// Least-squares scalar `c` in `C ≈ c·I`.
    pub fit_re: f64,
    pub fit_im: f64,
    /// Operator norm of `C − c·I`.
    pub fit_residual: f64,
}

impl SurveyRow {
    pub const CSV_HEADER: &'static str = "j,k,t,t_prime,which,norm,fit_re,fit_im,fit_residual";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{:e},{:e},{:e},{:e}",
            self.j, self.k, self.t, self.t_prime, self.which, self.norm, self.fit_re, self.fit_im, self.fit_residual
        )
    }
}

pub fn survey_csv(rows: &[SurveyRow]) -> String {
    let mut out = String::from(SurveyRow::CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

fn scalar_fit(block: &DMatrix<Complex64>) -> (Complex64, f64, f64) {
    let n = block.nrows();
    if n == 0 {
        return (Complex64::new(0.0, 0.0), 0.0, 0.0);
    }
    let c = block.trace() / n as f64;
    let residual = block - DMatrix::<Complex64>::identity(n, n) * c;
    (c, linalg::operator_norm(block), linalg::operator_norm(&residual))
}

/// Commutators of interaction-picture fields over all mode pairs and time
/// pairs, measured on kets whose occupations are all below the cutoff.
pub fn commutator_survey(basis: DoubledBasis, times: &[(f64, f64)]) -> Result<Vec<SurveyRow>> {
    let interior = basis.fock().interior(1);
    let n = basis.modes();
    let mut fields = Vec::with_capacity(n);
    for j in 1..=n {
        fields.push(extended_field_ops(j, basis)?);
    }
    let g0 = g0_operator(basis)?;
    let mut rows = Vec::new();
    for &(t, t_prime) in times {
        let at = |time: f64| -> Result<Vec<(OperatorMatrix, OperatorMatrix)>> {
            fields
                .iter()
                .map(|(phi, pi)| Ok((conjugate_by_generator(phi, &g0, time)?, conjugate_by_generator(pi, &g0, time)?)))
                .collect()
        };
        let first = at(t)?;
        let second = at(t_prime)?;
        for j in 1..=n {
            for k in 1..=n {
                let (qj, pj) = &first[j - 1];
                let (qk, pk) = &second[k - 1];
                for (which, x, y) in
                    [(SurveyCommutator::QQ, qj, qk), (SurveyCommutator::QP, qj, pk), (SurveyCommutator::PP, pj, pk)]
                {
                    let block = commutator(x, y)?.restrict(&interior);
                    let (c, norm, fit_residual) = scalar_fit(&block);
                    rows.push(SurveyRow { j, k, t, t_prime, which, norm, fit_re: c.re, fit_im: c.im, fit_residual });
                }
            }
        }
    }
    Ok(rows)
}

/// Every `(t, t')` pair from [`DEFAULT_SURVEY_TIMES`].
pub fn default_survey_grid() -> Vec<(f64, f64)> {
    DEFAULT_SURVEY_TIMES.iter().flat_map(|&t| DEFAULT_SURVEY_TIMES.iter().map(move |&u| (t, u))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(n: usize, m: usize) -> DoubledBasis {
        DoubledBasis::new(n, m).unwrap()
    }

    #[test]
    fn block_mapping() {
        let b = basis(2, 3);
        assert_eq!(b.fock().modes(), 4);
        assert_eq!(b.b_mode(2).unwrap(), 4);
        assert!(b.a_mode(3).is_err());
    }

    #[test]
    fn vacuum_at_origin() {
        let b = basis(1, 4);
        let w = extended_coherent_vector(&ClassicalState::origin(1), b).unwrap();
        assert_eq!(w.vector, FockVector::vacuum(b.fock()));
        assert_eq!(w.norm, 1.0);
    }

    #[test]
    fn block_amplitudes_follow_the_exponent() {
        let b = basis(1, 16);
        let s = ClassicalState::single(0.7, 0.4);
        let w = extended_coherent_vector(&s, b).unwrap().vector;
        let vac = w.get(&[0, 0]);
        let alpha = Complex64::new(0.7, 0.4) / 2f64.sqrt();
        assert!((w.get(&[1, 0]) / vac - alpha).norm() < 1e-14);
        assert!((w.get(&[0, 1]) / vac - alpha.conj()).norm() < 1e-14);
        assert!((w.get(&[2, 1]) / vac - alpha * alpha * alpha.conj() / 2f64.sqrt()).norm() < 1e-14);
    }

    #[test]
    fn closed_form_matches_matrix_exponential() {
        let b = basis(1, 14);
        let s = ClassicalState::single(0.5, -0.3);
        let w = extended_coherent_vector(&s, b).unwrap();
        let u = linalg::expm(&extended_exponent(&s, b).unwrap().into_dense()).unwrap();
        let direct = FockVector::new(b.fock(), u.column(0).into_owned()).unwrap();
        assert!(direct.sub(&w.vector).norm() < 1e-12);
        let r2 = s.z(1).norm_sqr();
        assert!((w.norm - ((1.0 - 2f64.sqrt()) * r2).exp()).abs() < 1e-9);
        assert!(w.norm.is_finite() && (w.norm * w.corrective_scale - 1.0).abs() < 1e-15);
    }

    #[test]
    fn fields_are_hermitian_and_commute() {
        let b = basis(2, 3);
        for j in 1..=2 {
            let (phi, pi) = extended_field_ops(j, b).unwrap();
            assert!(phi.is_hermitian(0.0) && pi.is_hermitian(0.0));
            for k in 1..=2 {
                let (phk, pik) = extended_field_ops(k, b).unwrap();
                assert_eq!(commutator(&phi, &phk).unwrap().max_abs(), 0.0);
                assert_eq!(commutator(&pi, &pik).unwrap().max_abs(), 0.0);
            }
        }
    }

    #[test]
    fn equal_time_phi_pi_vanishes_on_interior() {
        let b = basis(1, 6);
        let (phi, pi) = extended_field_ops(1, b).unwrap();
        let c = commutator(&phi, &pi).unwrap();
        let interior = b.fock().interior(1);
        assert!(c.max_abs_diff_on_columns(&OperatorMatrix::zeros(b.fock()), &interior).unwrap() < 1e-12);
    }

    #[test]
    fn blocks_commute_exactly() {
        assert_eq!(block_commutation_defect(basis(2, 3)).unwrap(), 0.0);
    }

    #[test]
    fn g0_eigenvalues() {
        let b = basis(1, 5);
        let g = g0_operator(b).unwrap();
        assert!(g.is_hermitian(0.0));
        let vac = b.fock().index(&[0, 0]).unwrap();
        assert_eq!(g.get(vac, vac), Complex64::new(0.0, 0.0));
        let one = b.fock().index(&[1, 0]).unwrap();
        assert!((g.get(one, one) - 1.0).norm() < 1e-12);
        let normal = g0_operator_with(b, G0Reading::NormalOrdered).unwrap();
        let interior = b.fock().interior(1);
        assert!(g.max_abs_diff_on_columns(&normal, &interior).unwrap() < 1e-12);
        for &i in &interior {
            let occ = b.fock().occupations(i);
            assert!((g.get(i, i).re - (occ[0] as f64 - occ[1] as f64)).abs() < 1e-12);
        }
    }

    #[test]
    fn interaction_picture_is_a_group_action() {
        let b = basis(1, 6);
        let (phi, _) = extended_field_ops(1, b).unwrap();
        assert_eq!(interaction_picture(&phi, b, 0.0).unwrap().max_abs_diff(&phi).unwrap(), 0.0);
        let two_step = interaction_picture(&interaction_picture(&phi, b, 0.3).unwrap(), b, 0.45).unwrap();
        let one_step = interaction_picture(&phi, b, 0.75).unwrap();
        assert!(two_step.max_abs_diff(&one_step).unwrap() < 1e-10);
        assert!(group_property_defect(&phi, b, 0.3, 0.45).unwrap() < 1e-10);
        assert!(one_step.is_hermitian(1e-12));
        let g = g0_operator(b).unwrap();
        assert!(interaction_picture(&g, b, 1.3).unwrap().max_abs_diff(&g).unwrap() < 1e-12);
    }

    #[test]
    fn survey_distinct_modes_commute() {
        let b = basis(2, 3);
        let rows = commutator_survey(b, &[(0.0, 0.0), (0.25, 1.0)]).unwrap();
        assert_eq!(rows.len(), 2 * 4 * 3);
        for r in rows.iter().filter(|r| r.j != r.k) {
            assert!(r.norm <= 1e-10, "{r:?}");
        }
        let csv = survey_csv(&rows);
        assert_eq!(csv.lines().count(), rows.len() + 1);
    }
}
