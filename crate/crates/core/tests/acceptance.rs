//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use discord_kit::correlations::{chi_curves, classical_correlation, Strategy};
use discord_kit::dynamics::{
    correlation_trajectory, detect_transition, evolve_two_sided, DampingSpec, TransitionKind,
};
use discord_kit::measurement::{chi_horizontal, chi_vertical, optimize_three};
use discord_kit::steering::{ellipsoid_from_channel, ellipsoid_params, extract_channel, filter_family};
use discord_kit::suites::{
    chi4_identity_suite, evolution_shortcut_suite, lemma1_suite, recovery_suite,
};
use discord_kit::numerics::upsilon;
use discord_kit::xstate::random_xstate;
use discord_kit::XState;

const SEED: u64 = 20240601;

fn fig3() -> XState {
    XState::new(0.4875, 0.1625, 0.0875, 0.2625, 0.3354, 0.1118).unwrap()
}

fn centered() -> XState {
    XState::new(0.35, 0.15, 0.15, 0.35, 0.3, 0.1).unwrap()
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn c1() -> Outcome {
    let x = fig3();
    // Hand arithmetic: pp = (a+c)(b+d) = 0.575 · 0.425.
    let pp: f64 = 0.575 * 0.425;
    let hand = [
        (0.3354 + 0.1118) / pp.sqrt(),
        (0.3354 - 0.1118) / pp.sqrt(),
        (0.4875 * 0.2625 - 0.1625 * 0.0875) / pp,
        (0.4875 * 0.1625 - 0.0875 * 0.2625) / pp,
    ];
    let quoted = [0.904633, 0.452316, 0.465479, 0.230179];
    let _ = ellipsoid_params(&x);
    let start = Instant::now();
    let e = ellipsoid_params(&x).unwrap();
    let elapsed = start.elapsed();
    let got = [e.l1, e.l2, e.l3, e.z0];
    let via_channel = ellipsoid_from_channel(&extract_channel(&x).unwrap());
    let chan = [via_channel.l1, via_channel.l2, via_channel.l3, via_channel.z0];
    let err_hand = got.iter().zip(hand).map(|(g, h)| (g - h).abs()).fold(0.0, f64::max);
    let err_quoted = got.iter().zip(quoted).map(|(g, h)| (g - h).abs()).fold(0.0, f64::max);
    let err_chan = got.iter().zip(chan).map(|(g, h)| (g - h).abs()).fold(0.0, f64::max);
    outcome(
        err_hand < 1e-4 && err_quoted < 1e-4 && err_chan < 1e-10 && elapsed < Duration::from_millis(1),
        format!(
            "(l1,l2,l3,z0)=({:.6},{:.6},{:.6},{:.6}) |hand|={err_hand:.1e} |quoted|={err_quoted:.1e} |channel|={err_chan:.1e} t={elapsed:?}",
            e.l1, e.l2, e.l3, e.z0
        ),
    )
}

fn c2() -> Outcome {
    let strategies = [Strategy::Hv, Strategy::ThreeElement, Strategy::BruteForce { restarts: 200, seed: SEED }];
    let mut worst = 0.0f64;
    for s in strategies {
        let bell = classical_correlation(&XState::bell_phi(), s);
        worst = worst
            .max((bell.mutual_info - 2.0).abs())
            .max((bell.classical - 1.0).abs())
            .max((bell.discord - 1.0).abs());
        let classical = classical_correlation(&XState::new(0.4, 0.1, 0.2, 0.3, 0.0, 0.0).unwrap(), s);
        worst = worst.max(classical.discord.abs());
        let mixed = classical_correlation(&XState::maximally_mixed(), s);
        worst = worst.max(mixed.mutual_info.abs()).max(mixed.classical.abs()).max(mixed.discord.abs());
    }
    outcome(worst < 1e-9, format!("max anchor error {worst:.1e}"))
}

fn suite_outcome(r: discord_kit::suites::SuiteResult, tol: f64) -> Outcome {
    outcome(
        r.passed && r.max_residual < tol,
        format!("{} cases, max residual {:.2e} (tol {tol:.0e})", r.cases, r.max_residual),
    )
}

fn c3() -> Outcome {
    suite_outcome(lemma1_suite(1000, SEED, &upsilon()).unwrap(), 1e-8)
}

fn c4() -> Outcome {
    suite_outcome(recovery_suite(1000, SEED).unwrap(), 1e-10)
}

fn c5() -> Outcome {
    suite_outcome(chi4_identity_suite(1000, SEED).unwrap(), 1e-10)
}

fn c6() -> Outcome {
    let mut worst = 0.0f64;
    let states = std::iter::once(fig3()).chain((0..200).map(|s| random_xstate(SEED + s)));
    for x in states {
        for xi in [1e-6, 1.0 - 1e-6] {
            let r = filter_family(&x, xi).unwrap().pauli_rep();
            worst = worst.max(chi_horizontal(&r)).max(chi_vertical(&r));
        }
    }
    outcome(worst < 1e-4, format!("max chi at xi in {{1e-6, 1-1e-6}} over 201 states: {worst:.2e}"))
}

fn c7() -> Outcome {
    let n = 500;
    let mut dominance_violations = 0;
    let mut oracle_excess = 0;
    let mut worst = f64::NEG_INFINITY;
    for i in 0..n {
        let x = random_xstate(SEED.wrapping_add(10_000 + i));
        let hv = classical_correlation(&x, Strategy::Hv).classical;
        let three = classical_correlation(&x, Strategy::ThreeElement).classical;
        let brute = classical_correlation(&x, Strategy::BruteForce { restarts: 200, seed: SEED + i }).classical;
        if three < hv - 1e-12 {
            dominance_violations += 1;
        }
        if brute - three >= 1e-5 {
            oracle_excess += 1;
        }
        worst = worst.max(brute - three);
    }
    let frac = 1.0 - oracle_excess as f64 / n as f64;
    outcome(
        dominance_violations == 0 && frac >= 0.99,
        format!(
            "C_three<C_hv in {dominance_violations}/{n}; brute-C_three<1e-5 in {:.1}% (max {worst:.1e})",
            100.0 * frac
        ),
    )
}

fn c8() -> Outcome {
    let x = fig3();
    let spec = DampingSpec::default_for(0.01).unwrap();
    let traj = correlation_trajectory(&x, &spec, &[Strategy::Hv, Strategy::ThreeElement]);
    let dominance = traj.points.iter().all(|p| p.c_three >= p.c_hv - 1e-12);
    let report = detect_transition(&traj);
    let Some(t_bar) = report.t_bar else {
        return outcome(false, "no von Neumann crossing found");
    };
    // Dense scan of the window around t̄, beyond the 200-point grid.
    let dt = spec.times[1] - spec.times[0];
    let delta = 5.0 * dt;
    let dense = 4001;
    let excess = (0..dense)
        .map(|i| {
            let t = (t_bar - delta + 2.0 * delta * i as f64 / (dense - 1) as f64).max(0.0);
            let r = evolve_two_sided(&x, spec.gamma_at(t)).unwrap().pauli_rep();
            optimize_three(&r).chi - chi_horizontal(&r).max(chi_vertical(&r))
        })
        .fold(report.window_margin.unwrap_or(0.0), f64::max);
    outcome(
        dominance && excess > 1e-4 && report.kind == TransitionKind::Smooth,
        format!(
            "t_bar={t_bar:.6} C_three>=C_hv: {dominance}; max excess near t_bar {excess:.3e} bits (need > 1e-4); kind={:?}",
            report.kind
        ),
    )
}

fn c9() -> Outcome {
    let x = centered();
    let e = ellipsoid_params(&x).unwrap();
    let gamma = (e.l3 / e.l1).sqrt();
    let damped = evolve_two_sided(&x, gamma).unwrap();
    let curves = chi_curves(&damped, 512).unwrap();
    let max_diff = curves.iter().map(|p| (p.chi_h - p.chi_v).abs()).fold(0.0, f64::max);
    let rate = 0.01;
    let traj = correlation_trajectory(&x, &DampingSpec::default_for(rate).unwrap(), &[]);
    let report = detect_transition(&traj);
    let expected_t = (e.l1 / e.l3).ln() / (2.0 * rate);
    outcome(
        e.z0.abs() < 1e-15 && max_diff < 1e-8 && report.kind == TransitionKind::Sudden,
        format!(
            "z0={:.1e}; max|chi_h-chi_v| at gamma^2=l3/l1: {max_diff:.1e}; kind={:?}; t_bar={:.6} (circle at {expected_t:.6})",
            e.z0,
            report.kind,
            report.t_bar.unwrap_or(f64::NAN)
        ),
    )
}

fn c10() -> Outcome {
    suite_outcome(evolution_shortcut_suite(1000, SEED).unwrap(), 1e-12)
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("ellipsoid reproduction", Duration::from_secs(1), c1),
        ("exact anchors", Duration::from_secs(1), c2),
        ("filter invariance", Duration::from_secs(30), c3),
        ("recovery point", Duration::from_secs(10), c4),
        ("four-element identity", Duration::from_secs(30), c5),
        ("endpoint limits", Duration::from_secs(10), c6),
        ("strategy dominance", Duration::from_secs(600), c7),
        ("damping sweep", Duration::from_secs(120), c8),
        ("centered special case", Duration::from_secs(60), c9),
        ("evolution shortcut", Duration::from_secs(10), c10),
    ];
    let mut failed = 0;
    for (i, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = check();
        let elapsed = start.elapsed();
        let ok = o.ok && elapsed <= *budget;
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {:>2} {:<24} {}  [{:.2?} / {:?}]  {}",
            i + 1,
            name,
            if ok { "PASS" } else { "FAIL" },
            elapsed,
            budget,
            o.detail
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
