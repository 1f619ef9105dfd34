//! Mutual information, classical correlation and discord, plus the
//! geometry of the horizontal/vertical Holevo curves along the filter family.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{DiscordError, Result};
use crate::measurement::{
    brute_force_optimize, chi_horizontal, chi_vertical, four_element_ensemble, holevo,
    optimize_three, Apex, PovmElementRecord,
};
use crate::numerics::von_neumann_entropy;
use crate::optimize::{bisect, golden_section_max};
use crate::steering::{apex_limits, filter_family};
use crate::xstate::XState;

pub const DEFAULT_CURVE_GRID: usize = 512;
/// Curve differences below this are treated as zero when counting sign changes.
pub const CROSSING_NOISE: f64 = 1e-12;
/// `max |χ_↔ − χ_↕|` below this marks the curves as identical.
pub const DEGENERATE_TOL: f64 = 1e-10;
pub const CROSSING_XTOL: f64 = 1e-10;
pub const CROSSING_MAX_ITER: usize = 80;
/// Grid used for the concave envelope in [`tangent_interval`].
pub const ENVELOPE_GRID: usize = 4096;
/// Maximum number of zoom levels around the crossing.
pub const ENVELOPE_LEVELS: usize = 4;
pub const BRUTE_ELEMENTS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "strategy", rename_all = "kebab-case")]
pub enum Strategy {
    #[serde(rename = "hv-vn")]
    Hv,
    ThreeElement,
    BruteForce { restarts: usize, seed: u64 },
}

impl Strategy {
    pub fn tag(&self) -> &'static str {
        match self {
            Strategy::Hv => "hv-vn",
            Strategy::ThreeElement => "three-element",
            Strategy::BruteForce { .. } => "brute-force",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum OptimizerDetails {
    Hv { chi_h: f64, chi_v: f64 },
    ThreeElement { theta: f64, apex: Apex },
    BruteForce { restart: usize, povm: Vec<PovmElementRecord> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub mutual_info: f64,
    pub classical: f64,
    pub discord: f64,
    pub strategy: String,
    pub details: OptimizerDetails,
}

/// `S(ρ^A) + S(ρ^B) − S(ρ^AB)` in bits.
pub fn mutual_information(x: &XState) -> f64 {
    let s = |r: Result<f64>| r.expect("valid state has a real spectrum");
    s(von_neumann_entropy(&x.reduced_a())) + s(von_neumann_entropy(&x.reduced_b()))
        - s(von_neumann_entropy(&x.to_density()))
}

pub fn classical_correlation(x: &XState, strategy: Strategy) -> CorrelationReport {
    let r = x.pauli_rep();
    let (classical, details) = match strategy {
        Strategy::Hv => {
            let (chi_h, chi_v) = (chi_horizontal(&r), chi_vertical(&r));
            (chi_h.max(chi_v), OptimizerDetails::Hv { chi_h, chi_v })
        }
        Strategy::ThreeElement => {
            let opt = optimize_three(&r);
            (opt.chi, OptimizerDetails::ThreeElement { theta: opt.theta, apex: opt.apex })
        }
        Strategy::BruteForce { restarts, seed } => {
            let res = brute_force_optimize(&r, BRUTE_ELEMENTS, restarts, seed);
            (res.chi, OptimizerDetails::BruteForce { restart: res.restart, povm: res.povm.records() })
        }
    };
    let mutual_info = mutual_information(x);
    CorrelationReport {
        mutual_info,
        classical,
        discord: mutual_info - classical,
        strategy: strategy.tag().to_string(),
        details,
    }
}

/// Family member at apex-interval height `z`, using `z(ξ) = z(0) + (z(1) − z(0)) ξ²`.
pub fn member_at_z(x: &XState, z: f64) -> Result<XState> {
    let (z0, z1) = apex_limits(x)?;
    let (lo, hi) = (z0.min(z1), z0.max(z1));
    if !(z > lo && z < hi) {
        return Err(DiscordError::ZOutOfRange { z, lo, hi });
    }
    filter_family(x, ((z - z0) / (z1 - z0)).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub xi: f64,
    pub z: f64,
    pub chi_h: f64,
    pub chi_v: f64,
    pub chi_3: f64,
}

pub fn curve_point(x: &XState, z: f64) -> Result<CurvePoint> {
    let (z0, z1) = apex_limits(x)?;
    let member = member_at_z(x, z)?;
    let r = member.pauli_rep();
    Ok(CurvePoint {
        xi: ((z - z0) / (z1 - z0)).sqrt(),
        z,
        chi_h: chi_horizontal(&r),
        chi_v: chi_vertical(&r),
        chi_3: optimize_three(&r).chi,
    })
}

fn interval(x: &XState) -> Result<(f64, f64)> {
    let (z0, z1) = apex_limits(x)?;
    let (lo, hi) = (z0.min(z1), z0.max(z1));
    if hi - lo < 1e-12 {
        return Err(DiscordError::InvalidGrid(format!(
            "apex interval [{lo}, {hi}] has no interior"
        )));
    }
    Ok((lo, hi))
}

/// χ_↔, χ_↕ and the three-element optimum at `grid` evenly spaced interior
/// heights `lo + (hi − lo)·i/(grid + 1)`, in increasing `z`.
pub fn chi_curves(x: &XState, grid: usize) -> Result<Vec<CurvePoint>> {
    let (lo, hi) = interval(x)?;
    (1..=grid)
        .into_par_iter()
        .map(|i| curve_point(x, lo + (hi - lo) * i as f64 / (grid + 1) as f64))
        .collect()
}

fn hv_diff(x: &XState, z: f64) -> f64 {
    let r = member_at_z(x, z).expect("z inside apex interval").pauli_rep();
    chi_horizontal(&r) - chi_vertical(&r)
}

/// Result of locating the interior intersection of χ_↔(z) and χ_↕(z).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "z", rename_all = "kebab-case")]
pub enum Crossing {
    None,
    At(f64),
    DegenerateEverywhere,
}

/// Scans the default grid for sign changes of `χ_↔ − χ_↕` and refines a
/// unique one by bisection.
pub fn find_crossing(x: &XState) -> Result<Crossing> {
    find_crossing_on(x, DEFAULT_CURVE_GRID)
}

pub fn find_crossing_on(x: &XState, grid: usize) -> Result<Crossing> {
    let (lo, hi) = interval(x)?;
    let zs: Vec<f64> = (1..=grid).map(|i| lo + (hi - lo) * i as f64 / (grid + 1) as f64).collect();
    let diffs: Vec<f64> = zs.par_iter().map(|&z| hv_diff(x, z)).collect();
    if diffs.iter().all(|d| d.abs() < DEGENERATE_TOL) {
        return Ok(Crossing::DegenerateEverywhere);
    }
    let signed: Vec<(f64, f64)> = zs
        .iter()
        .zip(&diffs)
        .filter(|(_, d)| d.abs() > CROSSING_NOISE)
        .map(|(&z, &d)| (z, d))
        .collect();
    let brackets: Vec<(f64, f64)> = signed
        .windows(2)
        .filter(|w| w[0].1.signum() != w[1].1.signum())
        .map(|w| (w[0].0, w[1].0))
        .collect();
    match brackets.as_slice() {
        [] => Ok(Crossing::None),
        [(a, b)] => Ok(Crossing::At(bisect(|z| hv_diff(x, z), *a, *b, CROSSING_XTOL, CROSSING_MAX_ITER))),
        many => Err(DiscordError::MultipleCrossings { count: many.len() }),
    }
}

/// Which von Neumann curve dominates below the crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Horizontal,
    Vertical,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TangentInterval {
    pub z_bar: Option<f64>,
    pub z1: Option<f64>,
    pub z2: Option<f64>,
    /// Curve touched at `z1`; the other one is touched at `z2`.
    pub lower_branch: Option<Branch>,
    pub exists: bool,
}

impl TangentInterval {
    fn empty(z_bar: Option<f64>) -> Self {
        Self { z_bar, z1: None, z2: None, lower_branch: None, exists: false }
    }

    /// Holevo quantity of the four-element ensemble bridging the tangent
    /// points, with average at height `z`.
    pub fn bridge_chi(&self, x: &XState, z: f64) -> Result<f64> {
        let (Some(z1), Some(z2), Some(branch)) = (self.z1, self.z2, self.lower_branch) else {
            return Err(DiscordError::NoCrossing);
        };
        if !(z >= z1 && z <= z2) {
            return Err(DiscordError::ZOutOfRange { z, lo: z1, hi: z2 });
        }
        let w = (z2 - z) / (z2 - z1);
        let e = match branch {
            Branch::Horizontal => four_element_ensemble(x, w, z1, z2)?,
            Branch::Vertical => four_element_ensemble(x, 1.0 - w, z2, z1)?,
        };
        Ok(holevo(&e))
    }
}

fn branch_value(x: &XState, branch: Branch, z: f64) -> f64 {
    let r = member_at_z(x, z).expect("z inside apex interval").pauli_rep();
    match branch {
        Branch::Horizontal => chi_horizontal(&r),
        Branch::Vertical => chi_vertical(&r),
    }
}

/// Upper convex hull (concave envelope) of points sorted by abscissa.
fn upper_hull(pts: &[(f64, f64)]) -> Vec<usize> {
    let mut hull: Vec<usize> = Vec::new();
    for i in 0..pts.len() {
        while hull.len() >= 2 {
            let (o, a) = (pts[hull[hull.len() - 2]], pts[hull[hull.len() - 1]]);
            let b = pts[i];
            let cross = (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }
    hull
}

/// Common-tangent interval of χ_↔(z) and χ_↕(z) around their crossing, from
/// the concave envelope of `max(χ_↔, χ_↕)` refined by alternating
/// tangent-point searches.
pub fn tangent_interval(x: &XState) -> Result<TangentInterval> {
    let z_bar = match find_crossing(x)? {
        Crossing::None => return Err(DiscordError::NoCrossing),
        Crossing::DegenerateEverywhere => return Ok(TangentInterval::empty(None)),
        Crossing::At(z) => z,
    };
    let (lo, hi) = interval(x)?;
    let max_chi = |z: f64| {
        let r = member_at_z(x, z).expect("interior").pauli_rep();
        chi_horizontal(&r).max(chi_vertical(&r))
    };
    // Zoom in on z̄ until the bridging hull edge skips at least one grid point.
    let (mut wlo, mut whi) = (lo, hi);
    let mut found = None;
    for level in 0..ENVELOPE_LEVELS {
        let n = ENVELOPE_GRID;
        let step = (whi - wlo) / (n + 1) as f64;
        let pts: Vec<(f64, f64)> = (0..=n + 1)
            .into_par_iter()
            .map(|i| {
                let z = wlo + step * i as f64;
                let at_apex = level == 0 && (i == 0 || i == n + 1);
                (z, if at_apex { 0.0 } else { max_chi(z) })
            })
            .collect();
        let hull = upper_hull(&pts);
        let Some(edge) = hull.windows(2).find(|w| pts[w[0]].0 <= z_bar && pts[w[1]].0 >= z_bar) else {
            break;
        };
        if edge[1] - edge[0] >= 2 {
            found = Some((pts[edge[0]].0, pts[edge[1]].0, step));
            break;
        }
        wlo = (z_bar - 4.0 * step).max(lo + 1e-3 * step);
        whi = (z_bar + 4.0 * step).min(hi - 1e-3 * step);
    }
    let Some((mut z1, mut z2, step)) = found else {
        return Ok(TangentInterval::empty(Some(z_bar)));
    };
    let lower_branch = if hv_diff(x, 0.5 * (z1 + z_bar)) > 0.0 {
        Branch::Horizontal
    } else {
        Branch::Vertical
    };
    let upper_branch = match lower_branch {
        Branch::Horizontal => Branch::Vertical,
        Branch::Vertical => Branch::Horizontal,
    };
    let slope = |a: f64, b: f64| {
        (branch_value(x, upper_branch, b) - branch_value(x, lower_branch, a)) / (b - a)
    };
    let margin = 3.0 * step;
    for _ in 0..60 {
        let (a1, b1) = ((z1 - margin).max(lo + 1e-3 * step), (z1 + margin).min(z_bar));
        let new_z1 = golden_section_max(|z| -slope(z, z2), a1, b1, 1e-13).0;
        let (a2, b2) = ((z2 - margin).max(z_bar), (z2 + margin).min(hi - 1e-3 * step));
        let new_z2 = golden_section_max(|z| slope(new_z1, z), a2, b2, 1e-13).0;
        let moved = (new_z1 - z1).abs().max((new_z2 - z2).abs());
        z1 = new_z1;
        z2 = new_z2;
        if moved < 1e-13 {
            break;
        }
    }
    Ok(TangentInterval {
        z_bar: Some(z_bar),
        z1: Some(z1),
        z2: Some(z2),
        lower_branch: Some(lower_branch),
        exists: z1 < z_bar && z_bar < z2,
    })
}
