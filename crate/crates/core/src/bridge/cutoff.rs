//! Poisson tails of coherent-state occupation distributions.

use crate::classical::ClassicalState;

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `Σ_{n>m} e^{−λ} λⁿ/n!`, summed from the smallest term upward.
pub fn poisson_tail(lambda: f64, m: usize) -> f64 {
    if lambda <= 0.0 {
        return 0.0;
    }
    if (m as f64) < lambda {
        return (1.0 - poisson_cdf(lambda, m as i64)).max(0.0);
    }
    let n0 = m + 1;
    let first = (-lambda + n0 as f64 * lambda.ln() - ln_factorial(n0)).exp();
    let mut terms = vec![first];
    let mut term = first;
    let mut n = n0;
    // Past the mode terms fall at least geometrically; stop far below f64 resolution.
    while term > 0.0 && term > first * 1e-20 {
        n += 1;
        term *= lambda / n as f64;
        terms.push(term);
    }
    terms.iter().rev().sum()
}

/// `Σ_{n≤m} e^{−λ} λⁿ/n!`; zero for negative `m`.
pub fn poisson_cdf(lambda: f64, m: i64) -> f64 {
    if m < 0 {
        return 0.0;
    }
    let m = m as usize;
    if lambda <= 0.0 {
        return 1.0;
    }
    if m as f64 >= lambda {
        return 1.0 - poisson_tail(lambda, m);
    }
    let mut term = (-lambda).exp();
    let mut terms = vec![term];
    for n in 1..=m {
        term *= lambda / n as f64;
        terms.push(term);
    }
    terms.sort_by(|a, b| a.partial_cmp(b).unwrap());
    terms.iter().sum()
}

/// Smallest cutoff `M ≥ 1` whose Poisson tail at `λ = amplitude²` is at most
/// `tolerance`. The tolerance is clamped into `(0, 1]`.
pub fn cutoff_estimate(max_amplitude: f64, tolerance: f64) -> usize {
    let lambda = max_amplitude * max_amplitude;
    let tol = tolerance.clamp(f64::MIN_POSITIVE, 1.0);
    let mut m = 1;
    while poisson_tail(lambda, m) > tol {
        m += 1;
    }
    m
}

/// Probability mass of the coherent state for `s` lying above `cutoff` in
/// at least one mode: `1 − Π_j (1 − tail_j)`.
pub fn state_tail(s: &ClassicalState, cutoff: usize) -> f64 {
    let kept: f64 = (1..=s.modes()).map(|j| 1.0 - poisson_tail(s.z(j).norm_sqr(), cutoff)).product();
    (1.0 - kept).max(0.0)
}

/// Smallest cutoff at which [`state_tail`] is at most `bound`.
pub fn required_cutoff(s: &ClassicalState, bound: f64) -> usize {
    let per_mode = bound / s.modes() as f64;
    let mut m = cutoff_estimate(s.max_amplitude(), per_mode);
    while state_tail(s, m) > bound && m < 10_000 {
        m += 1;
    }
    m
}
