//! Seeded invariant suites shared by the `validate` command and the tests.

use std::f64::consts::FRAC_PI_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dynamics::{evolve_two_sided, kraus_evolve};
use crate::error::Result;
use crate::measurement::{
    chi_four, chi_four_closed_form, concavity_term, three_element_family, vn_horizontal, vn_vertical, Apex,
};
use crate::numerics::{c, max_abs_diff4, upsilon, CMat4};
use crate::steering::{apex_interval, check_filter_invariance_with_basis, filter_family};
use crate::xstate::{random_xstate_with, FilterOp, XState};

pub const LEMMA1_TOL: f64 = 1e-8;
pub const CHI4_TOL: f64 = 1e-10;
pub const COMPLETENESS_SUITE_TOL: f64 = 1e-12;
pub const RECOVERY_TOL: f64 = 1e-10;
pub const SHORTCUT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub name: String,
    pub cases: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl SuiteResult {
    fn new(name: &str, cases: usize, max_residual: f64, tolerance: f64, extra_ok: bool) -> Self {
        Self {
            name: name.to_string(),
            cases,
            max_residual,
            tolerance,
            passed: extra_ok && max_residual.is_finite() && max_residual < tolerance,
        }
    }
}

/// Pauli basis change with one entry nudged, for negative controls.
pub fn perturbed_upsilon() -> CMat4 {
    let mut y = upsilon();
    y[(1, 0)] += c(1e-3);
    y
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Filtered ellipsoid matrices stay proportional to the original.
pub fn lemma1_suite(n: usize, seed: u64, basis: &CMat4) -> Result<SuiteResult> {
    let mut rng = rng_for(seed, 1);
    let mut worst = 0.0f64;
    let mut cases = 0;
    while cases < n {
        let x = random_xstate_with(&mut rng);
        let filter = FilterOp::new(rng.random_range(0.05..=1.0), rng.random_range(0.05..=1.0))?;
        // Singular R (no steering ellipsoid volume) carries no quadric to compare.
        let Ok(report) = check_filter_invariance_with_basis(&x, &filter, basis) else { continue };
        worst = worst.max(report.deviation);
        cases += 1;
    }
    Ok(SuiteResult::new("lemma1", cases, worst, LEMMA1_TOL, true))
}

/// Closed-form four-element Holevo quantity against the generic one, plus
/// non-negativity of the concavity term.
pub fn chi4_identity_suite(n: usize, seed: u64) -> Result<SuiteResult> {
    let mut rng = rng_for(seed, 2);
    let (mut worst, mut cases, mut concave_ok) = (0.0f64, 0, true);
    while cases < n {
        let x = random_xstate_with(&mut rng);
        let (lo, hi) = apex_interval(&x)?;
        if hi - lo < 1e-6 {
            continue;
        }
        let z1 = lo + (hi - lo) * rng.random_range(0.001..0.999);
        let z2 = lo + (hi - lo) * rng.random_range(0.001..0.999);
        let q = rng.random::<f64>();
        let generic = chi_four(&x, q, z1, z2)?;
        let closed = chi_four_closed_form(&x, q, z1, z2)?;
        worst = worst.max((generic - closed).abs());
        concave_ok &= concavity_term(q, z1, z2) >= -1e-15;
        cases += 1;
    }
    Ok(SuiteResult::new("chi4-identity", cases, worst, CHI4_TOL, concave_ok))
}

pub fn completeness_suite(n: usize, seed: u64) -> Result<SuiteResult> {
    let mut rng = rng_for(seed, 3);
    let mut worst = vn_horizontal().completeness_residual().max(vn_vertical().completeness_residual());
    for i in 0..n {
        let apex = if i % 2 == 0 { Apex::Up } else { Apex::Down };
        let theta = rng.random_range(0.0..=FRAC_PI_2);
        worst = worst.max(three_element_family(theta, apex)?.completeness_residual());
    }
    Ok(SuiteResult::new("completeness", n + 2, worst, COMPLETENESS_SUITE_TOL, true))
}

/// The family member at `ξ = √(a+c)` is the state itself.
pub fn recovery_suite(n: usize, seed: u64) -> Result<SuiteResult> {
    let mut rng = rng_for(seed, 4);
    let mut worst = 0.0f64;
    for _ in 0..n {
        let x = random_xstate_with(&mut rng);
        let back = filter_family(&x, (x.a() + x.c()).sqrt())?;
        worst = worst.max(back.max_param_diff(&x));
    }
    Ok(SuiteResult::new("recovery", n, worst, RECOVERY_TOL, true))
}

/// `(u, v) → (γ²u, γ²v)` against the full Kraus sum.
pub fn evolution_shortcut_suite(n: usize, seed: u64) -> Result<SuiteResult> {
    let mut rng = rng_for(seed, 5);
    let mut worst = 0.0f64;
    for _ in 0..n {
        let x: XState = random_xstate_with(&mut rng);
        let gamma = rng.random_range(0.0..=1.0);
        let shortcut = evolve_two_sided(&x, gamma)?.to_density();
        worst = worst.max(max_abs_diff4(&kraus_evolve(&x.to_density(), gamma)?, &shortcut));
    }
    Ok(SuiteResult::new("evolution-shortcut", n, worst, SHORTCUT_TOL, true))
}

/// Runs every suite; `fault` swaps in [`perturbed_upsilon`] for the first one.
pub fn run_all(n: usize, seed: u64, fault: bool) -> Result<Vec<SuiteResult>> {
    let basis = if fault { perturbed_upsilon() } else { upsilon() };
    Ok(vec![
        lemma1_suite(n, seed, &basis)?,
        chi4_identity_suite(n, seed)?,
        completeness_suite(n, seed)?,
        recovery_suite(n, seed)?,
        evolution_shortcut_suite(n, seed)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_on_small_runs() {
        for s in run_all(50, 7, false).unwrap() {
            assert!(s.passed, "{s:?}");
        }
    }

    #[test]
    fn fault_breaks_only_lemma1() {
        let results = run_all(50, 7, true).unwrap();
        assert!(!results[0].passed);
        assert!(results[1..].iter().all(|s| s.passed));
    }
}
