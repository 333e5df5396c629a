//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use fockbridge::bridge::{
    coherent_vector_with_bound, cutoff_estimate, density_from_ensemble, expect_normal, v_vector, verify_normal,
};
use fockbridge::classical::{sample_ensemble, ClassicalState, DistributionKind, DistributionSpec, Ensemble};
use fockbridge::fock::{annihilation_matrix, FockBasis};
use fockbridge::harness::{self, truncation_artifact_defect, ExperimentConfig, RunReport};
use fockbridge::symbolic::{lemmas, normal_product, parse_words, rewrite_to_normal_form};
use fockbridge::Result;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

type Outcome = Result<(bool, String)>;

fn manifest() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn config(name: &str) -> Result<ExperimentConfig> {
    ExperimentConfig::load(&manifest().join("configs").join(name))
}

fn run_config(name: &str) -> Result<RunReport> {
    harness::run(&config(name)?)
}

fn failed_names(r: &RunReport) -> String {
    let names: Vec<&str> = r.failed_checks().map(|c| c.experiment.as_str()).collect();
    if names.is_empty() {
        String::new()
    } else {
        format!("; failed: {}", names.join(","))
    }
}

/// Uniform draw from the closed disk of radius `r`.
fn disk(rng: &mut impl Rng, r: f64) -> Complex64 {
    Complex64::from_polar(r * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..std::f64::consts::TAU))
}

/// The classical state whose coherent amplitudes are `z`.
fn state_with_amplitudes(z: &[Complex64]) -> Result<ClassicalState> {
    let s2 = std::f64::consts::SQRT_2;
    ClassicalState::new(z.iter().map(|z| s2 * z.re).collect(), z.iter().map(|z| s2 * z.im).collect())
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(manifest().join("tests/golden").join(name)).unwrap_or_default()
}

fn c1_golden() -> Outcome {
    let rewrite = format!("{}\n", rewrite_to_normal_form(&parse_words("ad[1]*ad[2]*a[3]*ad[3]*a[2]*a[1]", None)?));
    let product = format!("{}\n", normal_product(&parse_words("a[1]*ad[2]*ad[1]", None)?));
    let ok = rewrite == golden("normal_form_rewrite.txt") && product == golden("normal_product.txt");
    Ok((ok, format!("rewrite {} bytes, normal product {} bytes", rewrite.len(), product.len())))
}

fn c2_lemmas() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(2);
    let mut polynomials = 0;
    let mut instances = 0;
    let mut symbolic_failures = 0;
    let mut worst = 0.0f64;
    let mut measured = 0;
    for draw in 0..100 {
        let modes = 1 + draw % 3;
        let batch = lemmas::random_instances(&mut rng, modes, 4)?;
        polynomials += 4;
        instances += batch.len();
        symbolic_failures += batch.iter().filter(|l| !l.holds()).count();
        if modes <= 2 {
            let basis = FockBasis::new(modes, 12)?;
            for l in &batch {
                worst = worst.max(l.matrix_defect(basis)?);
                measured += 1;
            }
        }
    }
    let ok = symbolic_failures == 0 && worst <= 1e-10;
    Ok((
        ok,
        format!(
            "{polynomials} polynomials, {instances} identities exact ({symbolic_failures} failures), {measured} matrix checks max {worst:.1e}"
        ),
    ))
}

fn c3_norm() -> Outcome {
    let cutoff = cutoff_estimate(1.5, 1e-12);
    let basis = FockBasis::new(1, cutoff)?;
    let mut rng = ChaCha20Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let y = disk(&mut rng, 1.5);
        let exact = y.norm_sqr().exp();
        worst = worst.max((v_vector(&[y], basis)?.norm_sqr() - exact).abs() / exact);
    }
    Ok((worst <= 1e-9, format!("M = {cutoff}, max relative error {worst:.1e}")))
}

fn c4_eigenvalue() -> Outcome {
    // a w − z w = −z c_M |M⟩ exactly, and |c_M|² ≤ tail(M − 1).
    let target = 1e-8;
    let cutoff = cutoff_estimate(1.5, (target / 1.5f64).powi(2)) + 1;
    let short = cutoff_estimate(1.5, 1e-12);
    let mut rng = ChaCha20Rng::seed_from_u64(4);
    let (mut worst, mut worst_short) = (0.0f64, 0.0f64);
    for k in 0..50 {
        let modes = 1 + k % 2;
        let z: Vec<Complex64> = (0..modes).map(|_| disk(&mut rng, 1.5)).collect();
        let s = state_with_amplitudes(&z)?;
        for (m, slot) in [(cutoff, &mut worst), (short, &mut worst_short)] {
            let basis = FockBasis::new(modes, m)?;
            let w = coherent_vector_with_bound(&s, basis, 1.0)?;
            for j in 1..=modes {
                let r = annihilation_matrix(j, basis)?.apply(&w)?.sub(&w.scale(s.z(j))).norm();
                *slot = slot.max(r);
            }
        }
    }
    Ok((
        worst <= target,
        format!("M = {cutoff}, max residual {worst:.1e}; at M = {short} it would be {worst_short:.1e}"),
    ))
}

fn c5_fields() -> Outcome {
    let c = config("eq8-gaussian.json")?;
    let amplitude_ok = match &c.distribution.as_ref().map(|d| &d.kind) {
        Some(DistributionKind::ProductGaussian { mean, .. }) => mean.max_amplitude() <= 1.0,
        _ => false,
    };
    let r = harness::run(&c)?;
    let worst = r.checks.iter().map(|x| x.abs_gap).fold(0.0, f64::max);
    let ok = r.passed && amplitude_ok && r.samples == 1000 && r.basis.modes == 2 && r.checks.len() == 4;
    Ok((ok, format!("{} samples, M = {}, max gap {worst:.1e}{}", r.samples, r.basis.cutoff, failed_names(&r))))
}

fn c6_samplewise() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    let mut failures = 0;
    for k in 0..100 {
        let modes = 1 + k % 2;
        let basis = FockBasis::new(modes, 16)?;
        let z: Vec<Complex64> = (0..modes).map(|_| disk(&mut rng, 1.0)).collect();
        let s = state_with_amplitudes(&z)?;
        let g = lemmas::random_phipi_polynomial(&mut rng, modes, 4, 5);
        let r = verify_normal(&Ensemble::pure(s), &g, basis)?;
        worst = worst.max(r.abs_gap);
        failures += usize::from(!r.passed);
    }

    let basis = FockBasis::new(2, 16)?;
    let mean = ClassicalState::new(vec![0.3, -0.4], vec![0.2, 0.5])?;
    let e = sample_ensemble(&DistributionSpec::gaussian(mean, vec![0.2; 2], vec![0.2; 2], 6), 40)?;
    let g = lemmas::random_phipi_polynomial(&mut rng, 2, 4, 6);
    let ensemble = verify_normal(&e, &g, basis)?;
    let whole = expect_normal(&density_from_ensemble(&e, basis)?, &g)?;
    let mut parts = Complex64::new(0.0, 0.0);
    for (s, w) in e.samples.iter().zip(&e.weights) {
        parts += expect_normal(&density_from_ensemble(&Ensemble::pure(s.clone()), basis)?, &g)? * *w;
    }
    let linearity = (whole - parts).norm();
    let ok = failures == 0 && ensemble.passed && linearity <= 1e-12 * whole.norm().max(1.0);
    Ok((
        ok,
        format!(
            "100 pairs max gap {worst:.1e} ({failures} failures); ensemble gap {:.1e}, linearity {linearity:.1e}",
            ensemble.abs_gap
        ),
    ))
}

fn c7_rates() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for name in ["eq6-harmonic-pure.json", "eq6-quartic-pure.json", "eq6-harmonic-ensemble.json", "eq6-quartic-ensemble.json"] {
        let c = config(name)?;
        let r = harness::run(&c)?;
        let expected_samples = if name.contains("ensemble") { 200 } else { 1 };
        let fd_ok = r.checks.iter().all(|x| x.details.get("fd_gap").is_some_and(|g| *g <= 1e-6));
        let both = r.checks.iter().any(|x| x.experiment.starts_with("eq6-phi"))
            && r.checks.iter().any(|x| x.experiment.starts_with("eq6-pi"));
        ok &= r.passed && fd_ok && both && r.samples == expected_samples && c.fd_step() == 1e-4;
        let gap = r.checks.iter().map(|x| x.abs_gap).fold(0.0, f64::max);
        let fd = r.checks.iter().filter_map(|x| x.details.get("fd_gap")).fold(0.0f64, |a, b| a.max(*b));
        lines.push(format!("{} gap {gap:.0e} fd {fd:.0e}", name.trim_end_matches(".json").trim_start_matches("eq6-")));
    }
    Ok((ok, lines.join("; ")))
}

fn c8_extrapolation() -> Outcome {
    let harmonic = run_config("eq10-harmonic.json")?;
    let h = &harmonic.checks[0];
    let a_ok = harmonic.passed && h.abs_gap <= 1e-6 + h.tolerances.truncation && h.details["t"] == 0.7;
    let quartic = run_config("eq10-quartic.json")?;
    let q = &quartic.checks[0];
    let b_ok = quartic.passed
        && q.abs_gap > 10.0 * q.tolerance
        && q.details["t"] == 1.0
        && matches!(q.claim, fockbridge::bridge::Claim::Discrepancy { factor } if factor == 10.0);
    Ok((
        a_ok && b_ok,
        format!(
            "harmonic gap {:.1e}; quartic gap {:.3e} vs 10 x {:.2e} (ratio {:.0})",
            h.abs_gap,
            q.abs_gap,
            q.tolerance,
            q.abs_gap / q.tolerance
        ),
    ))
}

fn c9_zero_point() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for n in 1..=3 {
        let mut c = config(&format!("zero-point-n{n}.json"))?;
        let first = harness::run(&c)?;
        c.seed = Some(c.seed.unwrap_or(0) + 1000);
        if let Some(DistributionSpec { kind: DistributionKind::ProductGaussian { std_phi, std_pi, .. }, .. }) = &mut c.distribution {
            std_phi.iter_mut().chain(std_pi.iter_mut()).for_each(|x| *x *= 0.5);
        }
        let second = harness::run(&c)?;
        let (a, b) = (first.checks[0].lhs_re, second.checks[0].lhs_re);
        let exact = n as f64 / 2.0;
        ok &= first.passed && second.passed && (a - exact).abs() <= 1e-10 && (b - exact).abs() <= 1e-10 && (a - b).abs() <= 1e-10;
        parts.push(format!("N={n}: {:.1e}/{:.1e}", (a - exact).abs(), (b - exact).abs()));
    }
    Ok((ok, parts.join(", ")))
}

fn c10_artifact() -> Outcome {
    let mut ok = true;
    for m in [3, 8] {
        let (defect, integral) = truncation_artifact_defect(FockBasis::new(1, m)?, 1)?;
        ok &= integral && defect <= 1e-12;
        ok &= run_config(&format!("algebra-m{m}.json"))?.passed;
    }
    Ok((ok, "[a, a+] = I - (M+1)|M><M| entrywise for M = 3, 8".into()))
}

fn c11_survey() -> Outcome {
    let r = run_config("extended-survey.json")?;
    let check = |name: &str| r.checks.iter().find(|c| c.experiment == name).map(|c| (c.passed, c.abs_gap));
    let (block, group, vacuum) = (check("block-commutation"), check("group-property"), check("g0-vacuum"));
    let equal_time = r
        .survey
        .iter()
        .find(|row| row.t == 0.0 && row.t_prime == 0.0 && row.which == fockbridge::extended::SurveyCommutator::QP)
        .map(|row| Complex64::new(row.fit_re, row.fit_im));
    let ok = r.passed
        && r.basis.modes == 2
        && r.basis.cutoff == 10
        && r.survey.len() == 16 * 3
        && block.is_some_and(|b| b.0 && b.1 == 0.0)
        && group.is_some_and(|g| g.0)
        && vacuum.is_some_and(|v| v.0);
    Ok((
        ok,
        format!(
            "{} rows; group defect {:.1e}; equal-time [q,p] fit {:.1e}{:+.1e}i",
            r.survey.len(),
            group.map_or(f64::NAN, |g| g.1),
            equal_time.unwrap_or_default().re,
            equal_time.unwrap_or_default().im
        ),
    ))
}

fn masked_files(root: &Path) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for entry in std::fs::read_dir(root)? {
        let path = entry?.path();
        let name = path.file_name().unwrap_or_default().to_string_lossy().into_owned();
        let text = std::fs::read_to_string(&path)?;
        let body = if name.ends_with(".json") {
            let mut v: serde_json::Value = serde_json::from_str(&text)?;
            if let Some(obj) = v.as_object_mut() {
                obj.remove("timestamp");
            }
            serde_json::to_string(&v)?
        } else {
            text
        };
        out.insert(name, body);
    }
    Ok(out)
}

fn c12_determinism() -> Outcome {
    let first = tempfile::tempdir()?;
    let second = tempfile::tempdir()?;
    let configs = manifest().join("configs");
    let a = harness::suite(&configs, first.path())?;
    let b = harness::suite(&configs, second.path())?;
    let (fa, fb) = (masked_files(first.path())?, masked_files(second.path())?);
    let differing: Vec<&String> = fa.keys().filter(|k| fa.get(*k) != fb.get(*k)).collect();
    let ok = !fa.is_empty() && fa.len() == fb.len() && differing.is_empty() && a.masked_json()? == b.masked_json()?;
    Ok((ok, format!("{} files identical across two suite runs ({} configs)", fa.len() - differing.len(), a.entries.len())))
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, u64, fn() -> Outcome); 12] = [
        (1, "symbolic golden files", 1, c1_golden),
        (2, "derivative identities", 60, c2_lemmas),
        (3, "coherent norm", 5, c3_norm),
        (4, "annihilator eigenvalue", 5, c4_eigenvalue),
        (5, "field expectations", 60, c5_fields),
        (6, "normal-ordered expectations", 120, c6_samplewise),
        (7, "rates of change", 120, c7_rates),
        (8, "extrapolation dual check", 60, c8_extrapolation),
        (9, "zero-point gap", 10, c9_zero_point),
        (10, "truncation artifact", 1, c10_artifact),
        (11, "doubled-space survey", 60, c11_survey),
        (12, "determinism", 600, c12_determinism),
    ];
    let mut failures = 0;
    for (n, title, limit, f) in criteria {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(limit);
        let (passed, detail) = match outcome {
            Ok((ok, detail)) => (ok && in_time, detail),
            Err(e) => (false, format!("error: {e}")),
        };
        failures += usize::from(!passed);
        println!(
            "{} {n:>2} {title:<28} {:>7.3}s (limit {limit}s{}) {detail}",
            if passed { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            if in_time { "" } else { ", exceeded" }
        );
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
