//! Two-sided phase damping and the classical-correlation trajectories it
//! produces.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::correlations::{classical_correlation, Strategy};
use crate::error::{DiscordError, Result};
use crate::measurement::{chi_horizontal, chi_vertical, optimize_three};
use crate::numerics::{c, kron, CMat2, CMat4};
use crate::optimize::bisect;
use crate::xstate::XState;

pub const DEFAULT_TIME_POINTS: usize = 200;
/// Default horizon in units of `1/Γ`.
pub const DEFAULT_HORIZON: f64 = 5.0;
pub const SUDDEN_THRESHOLD: f64 = 1e-9;
pub const WINDOW_STEPS: usize = 5;
pub const T_BAR_XTOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DampingSpec {
    pub gamma_rate: f64,
    pub times: Vec<f64>,
}

impl DampingSpec {
    pub fn new(gamma_rate: f64, times: Vec<f64>) -> Result<Self> {
        if !(gamma_rate.is_finite() && gamma_rate >= 0.0) {
            return Err(DiscordError::InvalidGrid(format!("damping rate {gamma_rate} must be >= 0")));
        }
        if times.len() < 2 {
            return Err(DiscordError::InvalidGrid("need at least two time points".into()));
        }
        if times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
            return Err(DiscordError::InvalidGrid("times must be finite and non-negative".into()));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(DiscordError::InvalidGrid("times must be strictly increasing".into()));
        }
        Ok(Self { gamma_rate, times })
    }

    /// `n` evenly spaced times on `[0, t_max]`.
    pub fn uniform(gamma_rate: f64, t_max: f64, n: usize) -> Result<Self> {
        if !(t_max.is_finite() && t_max > 0.0) {
            return Err(DiscordError::InvalidGrid(format!("t_max {t_max} must be > 0")));
        }
        if n < 2 {
            return Err(DiscordError::InvalidGrid(format!("{n} time points")));
        }
        let times = (0..n).map(|i| t_max * i as f64 / (n - 1) as f64).collect();
        Self::new(gamma_rate, times)
    }

    /// `n` log-spaced times on `[t_max·10⁻ᵈ, t_max]` preceded by `t = 0`.
    pub fn log_spaced(gamma_rate: f64, t_max: f64, n: usize, decades: f64) -> Result<Self> {
        if !(t_max.is_finite() && t_max > 0.0) || n < 3 || decades.is_nan() || decades <= 0.0 {
            return Err(DiscordError::InvalidGrid("log grid needs t_max > 0, n >= 3, decades > 0".into()));
        }
        let mut times = vec![0.0];
        times.extend((0..n - 1).map(|i| t_max * 10f64.powf(-decades * (1.0 - i as f64 / (n - 2) as f64))));
        Self::new(gamma_rate, times)
    }

    /// 200 points over `[0, 5/Γ]`.
    pub fn default_for(gamma_rate: f64) -> Result<Self> {
        if gamma_rate.is_nan() || gamma_rate <= 0.0 {
            return Err(DiscordError::InvalidGrid("default grid needs a positive damping rate".into()));
        }
        Self::uniform(gamma_rate, DEFAULT_HORIZON / gamma_rate, DEFAULT_TIME_POINTS)
    }

    pub fn gamma_at(&self, t: f64) -> f64 {
        (-self.gamma_rate * t).exp()
    }
}

/// `K₁ = diag(1, γ)`, `K₂ = diag(0, √(1−γ²))`.
pub fn phase_damp_kraus(gamma: f64) -> Result<(CMat2, CMat2)> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(DiscordError::GammaOutOfRange(gamma));
    }
    let k1 = CMat2::new(c(1.0), c(0.0), c(0.0), c(gamma));
    let k2 = CMat2::new(c(0.0), c(0.0), c(0.0), c((1.0 - gamma * gamma).sqrt()));
    Ok((k1, k2))
}

/// `Σ_{i,j} (K_i⊗K_j) ρ (K_i⊗K_j)†` on a general two-qubit matrix.
pub fn kraus_evolve(rho: &CMat4, gamma: f64) -> Result<CMat4> {
    let (k1, k2) = phase_damp_kraus(gamma)?;
    let ks = [k1, k2];
    let mut out = CMat4::zeros();
    for ki in &ks {
        for kj in &ks {
            let k = kron(ki, kj);
            out += k * rho * k.adjoint();
        }
    }
    Ok(out)
}

/// Coherences shrink by `γ²`; populations are untouched.
pub fn evolve_two_sided(x: &XState, gamma: f64) -> Result<XState> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(DiscordError::GammaOutOfRange(gamma));
    }
    let g2 = gamma * gamma;
    x.with_coherences(g2 * x.u(), g2 * x.v())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub gamma: f64,
    pub chi_h: f64,
    pub chi_v: f64,
    pub c_hv: f64,
    pub c_three: f64,
    /// `C_three − C_hv`.
    pub margin: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_brute: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub state: XState,
    pub spec: DampingSpec,
    pub points: Vec<TrajectoryPoint>,
}

pub const TRAJECTORY_HEADER: [&str; 7] = ["t", "gamma", "chi_h", "chi_v", "C_hv", "C_three", "margin"];

fn evaluate(x: &XState, t: f64, gamma: f64, brute: Option<Strategy>) -> TrajectoryPoint {
    let evolved = evolve_two_sided(x, gamma).expect("gamma in [0, 1]");
    let r = evolved.pauli_rep();
    let (chi_h, chi_v) = (chi_horizontal(&r), chi_vertical(&r));
    let c_hv = chi_h.max(chi_v);
    let c_three = optimize_three(&r).chi;
    TrajectoryPoint {
        t,
        gamma,
        chi_h,
        chi_v,
        c_hv,
        c_three,
        margin: c_three - c_hv,
        c_brute: brute.map(|s| classical_correlation(&evolved, s).classical),
    }
}

/// Evaluates the von Neumann and three-element correlations at every time;
/// a brute-force strategy in `strategies` adds the oracle value.
pub fn correlation_trajectory(x: &XState, spec: &DampingSpec, strategies: &[Strategy]) -> Trajectory {
    let brute = strategies.iter().copied().find(|s| matches!(s, Strategy::BruteForce { .. }));
    let points = spec
        .times
        .par_iter()
        .map(|&t| evaluate(x, t, spec.gamma_at(t), brute))
        .collect();
    Trajectory { state: *x, spec: spec.clone(), points }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransitionKind {
    Sudden,
    Smooth,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionReport {
    pub t_bar: Option<f64>,
    pub kind: TransitionKind,
    /// Largest `C_three − C_hv` in the window around `t_bar`.
    pub window_margin: Option<f64>,
    pub margin_at_t_bar: Option<f64>,
    /// `(t, C_three − C_hv)` along the grid.
    pub margin: Vec<(f64, f64)>,
}

/// Locates the time where `χ_↔(t) = χ_↕` and classifies the change of
/// optimal measurement there as sudden or smooth.
pub fn detect_transition(series: &Trajectory) -> TransitionReport {
    let pts = &series.points;
    let margin = pts.iter().map(|p| (p.t, p.margin)).collect();
    let none = |margin| TransitionReport {
        t_bar: None,
        kind: TransitionKind::None,
        window_margin: None,
        margin_at_t_bar: None,
        margin,
    };
    if series.spec.gamma_rate == 0.0 {
        return none(margin);
    }
    let Some(k) = pts.windows(2).position(|w| (w[0].chi_h - w[0].chi_v) > 0.0 && (w[1].chi_h - w[1].chi_v) <= 0.0)
    else {
        return none(margin);
    };
    let x = series.state;
    let diff = |t: f64| {
        let r = evolve_two_sided(&x, series.spec.gamma_at(t)).expect("gamma in [0, 1]").pauli_rep();
        chi_horizontal(&r) - chi_vertical(&r)
    };
    let t_bar = bisect(diff, pts[k].t, pts[k + 1].t, T_BAR_XTOL, 200);
    let at_bar = evaluate(&x, t_bar, series.spec.gamma_at(t_bar), None).margin;
    let lo = k.saturating_sub(WINDOW_STEPS - 1);
    let hi = (k + 1 + WINDOW_STEPS - 1).min(pts.len() - 1);
    let window = pts[lo..=hi].iter().map(|p| p.margin).fold(at_bar, f64::max);
    TransitionReport {
        t_bar: Some(t_bar),
        kind: if window <= SUDDEN_THRESHOLD { TransitionKind::Sudden } else { TransitionKind::Smooth },
        window_margin: Some(window),
        margin_at_t_bar: Some(at_bar),
        margin,
    }
}
