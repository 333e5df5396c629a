use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use super::config::{CutoffSpec, ExperimentConfig, ExperimentKind};
use crate::bridge::{
    check_eq6, check_eq6_pi, cutoff_estimate, density_from_ensemble, eq10_gap_with, required_cutoff,
    verify_field, verify_normal, zero_point_gap, Claim, EquivalenceReport, Tolerances, DEFAULT_TAIL_BOUND,
};
use crate::classical::{sample_ensemble, Ensemble, HamiltonianSpec};
use crate::error::{Error, Result};
use crate::extended::{
    block_commutation_defect, commutator_survey, default_survey_grid, extended_field_ops, g0_operator,
    group_property_defect, DoubledBasis, SurveyRow,
};
use crate::fock::{
    annihilation_matrix, commutator, creation_matrix, field_phi, field_pi, number_matrix, FockBasis, OperatorMatrix,
};
use crate::symbolic::{lemmas, parse_phipi, Exact, Lemma, LemmaInstance, OperatorPolynomial, PhiPiPolynomial};

/// Per-entry tolerance for identities that hold exactly in exact arithmetic.
pub const ENTRY_TOLERANCE: f64 = 1e-12;
/// Tolerance for identities checked through products of truncated matrices.
pub const MATRIX_TOLERANCE: f64 = 1e-10;
/// Basis dimensions above this are refused.
pub const MAX_DIMENSION: usize = 4096;

/// Everything an experiment needs once the config is resolved.
pub(crate) struct Prepared {
    pub basis: FockBasis,
    pub hamiltonian: Option<HamiltonianSpec>,
    pub observable: Option<PhiPiPolynomial>,
    pub ensemble: Option<Ensemble>,
}

pub(crate) fn prepare(config: &ExperimentConfig) -> Result<Prepared> {
    let hamiltonian = config.hamiltonian.as_deref().map(|h| HamiltonianSpec::parse(h, config.modes)).transpose()?;
    let observable = config.observable.as_deref().map(|g| parse_phipi(g, Some(config.modes))).transpose()?;
    let ensemble = match config.seeded_distribution() {
        Some(d) if config.kind != ExperimentKind::VerifyAlgebra && config.kind != ExperimentKind::ExtendedSurvey => {
            Some(sample_ensemble(&d, config.samples)?)
        }
        _ => None,
    };
    let cutoff = match (config.cutoff, &ensemble) {
        (CutoffSpec::Fixed(m), _) => m,
        (CutoffSpec::Auto(_), Some(e)) => {
            let degree = [hamiltonian.as_ref().map(|h| h.polynomial().degree()), observable.as_ref().map(|g| g.degree())]
                .into_iter()
                .flatten()
                .max()
                .unwrap_or(0) as usize;
            let per_sample = e.samples.iter().map(|s| required_cutoff(s, DEFAULT_TAIL_BOUND)).max().unwrap_or(1);
            cutoff_estimate(e.max_amplitude(), config.cutoff_tolerance()).max(per_sample).max(degree + 1)
        }
        (CutoffSpec::Auto(_), None) => return Err(Error::Config("\"auto\" cutoff needs a distribution".into())),
    };
    let modes = match config.kind {
        ExperimentKind::ExtendedSurvey => 2 * config.modes,
        _ => config.modes,
    };
    let basis = FockBasis::new(modes, cutoff)?;
    if basis.dimension() > MAX_DIMENSION {
        return Err(Error::Config(format!(
            "basis dimension {} exceeds the limit {MAX_DIMENSION}; lower modes or cutoff",
            basis.dimension()
        )));
    }
    Ok(Prepared { basis, hamiltonian, observable, ensemble })
}

fn exact_check(name: impl Into<String>, defect: f64, tolerance: f64, basis: FockBasis) -> EquivalenceReport {
    EquivalenceReport::new(
        name,
        Complex64::new(defect, 0.0),
        Complex64::new(0.0, 0.0),
        Tolerances { float_error: tolerance, truncation: 0.0, monte_carlo: 0.0 },
        Claim::Agreement,
        basis.into(),
        None,
    )
}

fn max_over<T>(items: impl IntoIterator<Item = T>, f: impl Fn(T) -> Result<f64>) -> Result<f64> {
    items.into_iter().try_fold(0.0f64, |acc, x| Ok(acc.max(f(x)?)))
}

/// Largest deviation of `[a_j, a_j⁺]` from `I − (M+1)P_{N_j=M}`, and whether
/// every entry rounds to exactly the expected integer.
pub fn truncation_artifact_defect(basis: FockBasis, j: usize) -> Result<(f64, bool)> {
    let c = commutator(&annihilation_matrix(j, basis)?, &creation_matrix(j, basis)?)?.to_dense();
    let m = basis.cutoff() as i64;
    let mut worst = 0.0f64;
    let mut integral = true;
    for r in 0..basis.dimension() {
        for k in 0..basis.dimension() {
            let expected = if r != k {
                0
            } else if basis.occupation(r, j) == basis.cutoff() {
                -m
            } else {
                1
            };
            let x = c[(r, k)];
            worst = worst.max((x - Complex64::new(expected as f64, 0.0)).norm());
            integral &= x.im == 0.0 && x.re.round() as i64 == expected && (x.re - x.re.round()).abs() <= ENTRY_TOLERANCE;
        }
    }
    Ok((worst, integral))
}

fn lemma_reports(instances: &[LemmaInstance], basis: FockBasis, prefix: &str) -> Result<Vec<EquivalenceReport>> {
    let mut out = Vec::new();
    for lemma in Lemma::ALL {
        let group: Vec<&LemmaInstance> = instances.iter().filter(|l| l.lemma == lemma).collect();
        if group.is_empty() {
            continue;
        }
        let failures = group.iter().filter(|l| !l.holds()).count();
        let mut matrix = 0.0f64;
        let mut measured = 0;
        for l in &group {
            match l.matrix_defect(basis) {
                Ok(d) => {
                    matrix = matrix.max(d);
                    measured += 1;
                }
                // Too close to the cutoff for a matrix check; the symbolic check still applies.
                Err(Error::InsufficientMargin { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        out.push(
            exact_check(format!("{prefix}{lemma}"), matrix, MATRIX_TOLERANCE, basis)
                .with_detail("instances", group.len() as f64)
                .with_detail("matrix_instances", measured as f64)
                .with_detail("symbolic_failures", failures as f64)
                .require("symbolic", failures == 0),
        );
    }
    Ok(out)
}

pub(crate) fn verify_algebra(config: &ExperimentConfig, p: &Prepared) -> Result<Vec<EquivalenceReport>> {
    let basis = p.basis;
    let modes = basis.modes();
    let cutoff = basis.cutoff();
    let mut out = Vec::new();
    let zero = OperatorMatrix::zeros(basis);
    let identity = OperatorMatrix::identity(basis);
    let ones = basis.interior(1);

    out.push(exact_check(
        "ladder-adjoint",
        max_over(1..=modes, |j| creation_matrix(j, basis)?.max_abs_diff(&annihilation_matrix(j, basis)?.adjoint()))?,
        ENTRY_TOLERANCE,
        basis,
    ));
    let mut ccr = 0.0f64;
    let mut same_kind = 0.0f64;
    let mut fields = 0.0f64;
    for j in 1..=modes {
        let (a, phi_j, pi_j) = (annihilation_matrix(j, basis)?, field_phi(j, basis)?, field_pi(j, basis)?);
        for k in 1..=modes {
            let (ak, adk) = (annihilation_matrix(k, basis)?, creation_matrix(k, basis)?);
            let expected = if j == k { identity.clone() } else { zero.clone() };
            ccr = ccr.max(commutator(&a, &adk)?.max_abs_diff_on_columns(&expected, &ones)?);
            same_kind = same_kind.max(commutator(&a, &ak)?.max_abs());
            same_kind = same_kind.max(commutator(&creation_matrix(j, basis)?, &adk)?.max_abs());
            if j != k {
                same_kind = same_kind.max(commutator(&a, &adk)?.max_abs());
            }
            let expected = expected.scale(Complex64::new(0.0, 1.0));
            fields = fields.max(commutator(&phi_j, &field_pi(k, basis)?)?.max_abs_diff_on_columns(&expected, &ones)?);
            fields = fields.max(commutator(&phi_j, &field_phi(k, basis)?)?.max_abs());
            fields = fields.max(commutator(&pi_j, &field_pi(k, basis)?)?.max_abs());
        }
    }
    out.push(exact_check("ccr-interior", ccr, ENTRY_TOLERANCE, basis));
    out.push(exact_check("ccr-vanishing", same_kind, 0.0, basis));
    out.push(exact_check("field-ccr", fields, ENTRY_TOLERANCE, basis));

    let mut artifact = 0.0f64;
    let mut integral = true;
    for j in 1..=modes {
        let (d, ok) = truncation_artifact_defect(basis, j)?;
        artifact = artifact.max(d);
        integral &= ok;
    }
    out.push(exact_check("truncation-artifact", artifact, ENTRY_TOLERANCE, basis).require("integral", integral));

    let number = max_over(1..=modes, |j| {
        let n = number_matrix(j, basis)?;
        let diag = OperatorMatrix::from_triplets(
            basis,
            (0..basis.dimension()).map(|i| (i, i, Complex64::new(basis.occupation(i, j) as f64, 0.0))),
        );
        n.max_abs_diff(&diag)
    })?;
    out.push(exact_check("number-operator", number, ENTRY_TOLERANCE, basis));

    let mut power = 0.0f64;
    for j in 1..=modes {
        let (a, ad) = (annihilation_matrix(j, basis)?, creation_matrix(j, basis)?);
        for m in 1..=4u32.min(cutoff as u32) {
            let lhs = commutator(&a, &ad.pow(m)?)?;
            let rhs = ad.pow(m - 1)?.scale(Complex64::new(m as f64, 0.0));
            power = power.max(lhs.max_abs_diff_on_columns(&rhs, &basis.interior(m as usize))?);
        }
    }
    out.push(exact_check("power-commutator", power, MATRIX_TOLERANCE, basis));

    let mut instances = Vec::new();
    for g in [p.hamiltonian.as_ref().map(|h| h.polynomial().clone()), p.observable.clone()].into_iter().flatten() {
        for j in 1..=modes {
            instances.push(lemmas::field_phi(&g, j)?);
            instances.push(lemmas::field_pi(&g, j)?);
            let gn = g.substitute_normal();
            instances.push(lemmas::normal_annihilator(&gn, j)?);
            instances.push(lemmas::normal_creator(&gn, j)?);
        }
    }
    out.extend(lemma_reports(&instances, basis, "given-")?);

    if let Some(draws) = config.lemma_draws.filter(|&d| d > 0) {
        let mut rng = ChaCha20Rng::seed_from_u64(config.seed.unwrap_or(0));
        let mut random = Vec::new();
        for _ in 0..draws {
            random.extend(lemmas::random_instances(&mut rng, modes, 4)?);
        }
        out.extend(lemma_reports(&random, basis, "random-")?.into_iter().map(|mut r| {
            r.seed = Some(config.seed.unwrap_or(0));
            r
        }));
    }
    Ok(out)
}

fn ensemble(p: &Prepared) -> Result<&Ensemble> {
    p.ensemble.as_ref().ok_or_else(|| Error::Config("experiment needs a distribution".into()))
}

fn hamiltonian(p: &Prepared) -> Result<&HamiltonianSpec> {
    p.hamiltonian.as_ref().ok_or_else(|| Error::Config("experiment needs a hamiltonian".into()))
}

fn observable(p: &Prepared) -> Result<&PhiPiPolynomial> {
    p.observable.as_ref().ok_or_else(|| Error::Config("experiment needs an observable".into()))
}

pub(crate) fn verify_eq8(p: &Prepared) -> Result<Vec<EquivalenceReport>> {
    let e = ensemble(p)?;
    let mut out = Vec::new();
    for j in 1..=p.basis.modes() {
        out.push(verify_field(e, j, false, p.basis)?);
        out.push(verify_field(e, j, true, p.basis)?);
    }
    Ok(out)
}

pub(crate) fn verify_eq9(config: &ExperimentConfig, p: &Prepared) -> Result<Vec<EquivalenceReport>> {
    let (e, g) = (ensemble(p)?, observable(p)?);
    let mut out = vec![verify_normal(e, g, p.basis)?];
    if config.samplewise {
        for (k, s) in e.samples.iter().enumerate() {
            let mut r = verify_normal(&Ensemble::pure(s.clone()), g, p.basis)?;
            r.experiment = format!("eq9-sample{k}");
            out.push(r);
        }
    }
    Ok(out)
}

pub(crate) fn verify_eq6(config: &ExperimentConfig, p: &Prepared) -> Result<Vec<EquivalenceReport>> {
    let (e, h) = (ensemble(p)?, hamiltonian(p)?);
    let mut out = Vec::new();
    for j in 1..=p.basis.modes() {
        out.push(check_eq6(e, h, j, p.basis, config.fd_step())?);
        out.push(check_eq6_pi(e, h, j, p.basis, config.fd_step())?);
    }
    Ok(out)
}

pub(crate) fn eq10(config: &ExperimentConfig, p: &Prepared) -> Result<Vec<EquivalenceReport>> {
    let (e, h, g) = (ensemble(p)?, hamiltonian(p)?, observable(p)?);
    config
        .times
        .iter()
        .map(|&t| {
            eq10_gap_with(e, h, g, p.basis, t, config.dt(), config.method, config.claim)
                .map_err(|err| err.context(format!("t = {t}")))
        })
        .collect()
}

pub(crate) fn zero_point(p: &Prepared) -> Result<Vec<EquivalenceReport>> {
    let e = ensemble(p)?;
    let rho = density_from_ensemble(e, p.basis)?;
    let gap = zero_point_gap(&rho)?;
    let n = p.basis.modes() as f64;
    let symbolic_ok = gap.symbolic.iter().all(|s| s == &Exact::ratio(1, 2).to_string());
    let tolerances = Tolerances { float_error: 1e-10, truncation: n / 2.0 * rho.truncation_tail(), monte_carlo: 0.0 };
    let mut report = EquivalenceReport::new(
        "zero-point",
        Complex64::new(gap.total, 0.0),
        Complex64::new(n / 2.0, 0.0),
        tolerances,
        Claim::Agreement,
        p.basis.into(),
        e.seed(),
    )
    .require("symbolic", symbolic_ok);
    for (j, v) in gap.per_mode.iter().enumerate() {
        report = report.with_detail(&format!("mode{}", j + 1), *v);
    }
    Ok(vec![report])
}

pub(crate) fn extended_survey(config: &ExperimentConfig, p: &Prepared) -> Result<(Vec<EquivalenceReport>, Vec<SurveyRow>)> {
    let basis = DoubledBasis::new(config.modes, p.basis.cutoff())?;
    let fock = basis.fock();
    let g0 = g0_operator(basis)?;
    let vacuum = fock.vacuum_index();
    let vacuum_image: f64 = (0..fock.dimension()).map(|r| g0.get(r, vacuum).norm_sqr()).sum::<f64>().sqrt();
    let (phi, pi) = extended_field_ops(1, basis)?;
    let group = group_property_defect(&phi, basis, 0.3, 0.45)?.max(group_property_defect(&pi, basis, 0.7, -0.2)?);
    let reports = vec![
        exact_check("block-commutation", block_commutation_defect(basis)?, 0.0, fock),
        exact_check("group-property", group, MATRIX_TOLERANCE, fock),
        exact_check("g0-vacuum", vacuum_image, ENTRY_TOLERANCE, fock),
    ];
    let grid = if config.times.is_empty() {
        default_survey_grid()
    } else {
        config.times.iter().flat_map(|&t| config.times.iter().map(move |&u| (t, u))).collect()
    };
    Ok((reports, commutator_survey(basis, &grid)?))
}

/// Canonical normal form of an operator expression.
pub fn reduce(expr: &str) -> Result<OperatorPolynomial> {
    Ok(crate::symbolic::rewrite_to_normal_form(&crate::symbolic::parse_words(expr, None)?))
}
