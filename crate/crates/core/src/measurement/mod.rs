//! Rank-one POVMs on qubit B, the ensembles they induce on qubit A, and
//! Holevo quantities of those ensembles.
//!
//! A POVM element is `α |m̂⟩⟨m̂| = α (𝟙 + m̂·σ)/2`; completeness reads
//! `Σ α_k = 2` and `Σ α_k m̂_k = 0`.
//!
//! The optimizers work on the Pauli-basis matrix `R` of the two-qubit
//! state, where outcome `k` has probability `α_k (1 + R₀·m̂_k)/2` and leaves
//! A at Bloch vector `(R_{i0} + R_{ij} m̂_j) / (1 + R₀·m̂_k)`.

mod brute;

pub use brute::{brute_force_optimize, BruteForceResult};

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{DiscordError, Result};
use crate::numerics::{bloch_entropy, c, kron, partial_trace_b, BlochVector, CMat2, CMat4, RMat};
use crate::optimize::scan_then_refine;
use crate::steering::{apex_interval, filter_family, xi_of_z};
use crate::xstate::XState;

pub const COMPLETENESS_TOL: f64 = 1e-10;
/// Outcomes with lower probability are dropped from ensembles.
pub const ZERO_PROBABILITY: f64 = 1e-14;
/// Coarse θ scan resolution for [`optimize_three`].
pub const THETA_SCAN_POINTS: usize = 64;
pub const THETA_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PovmElement {
    pub alpha: f64,
    pub direction: BlochVector,
}

impl PovmElement {
    pub fn new(alpha: f64, direction: BlochVector) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 2.0 + COMPLETENESS_TOL) {
            return Err(DiscordError::InvalidPovm(format!("weight {alpha} not in (0, 2]")));
        }
        if (direction.norm() - 1.0).abs() > COMPLETENESS_TOL {
            return Err(DiscordError::InvalidPovm(format!(
                "direction {:?} is not a unit vector",
                direction.as_array()
            )));
        }
        Ok(Self { alpha, direction })
    }

    pub fn matrix(&self) -> CMat2 {
        self.direction.to_density() * c(self.alpha)
    }
}

/// Wire form `{alpha, mx, my, mz}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PovmElementRecord {
    pub alpha: f64,
    pub mx: f64,
    pub my: f64,
    pub mz: f64,
}

impl From<&PovmElement> for PovmElementRecord {
    fn from(e: &PovmElement) -> Self {
        Self { alpha: e.alpha, mx: e.direction.x, my: e.direction.y, mz: e.direction.z }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    elements: Vec<PovmElement>,
}

impl Povm {
    /// Validates element count (2–4) and completeness.
    pub fn new(elements: Vec<PovmElement>) -> Result<Self> {
        if !(2..=4).contains(&elements.len()) {
            return Err(DiscordError::InvalidPovm(format!(
                "{} elements; expected 2 to 4",
                elements.len()
            )));
        }
        let povm = Self { elements };
        let residue = povm.completeness_residual();
        if residue > COMPLETENESS_TOL {
            return Err(DiscordError::InvalidPovm(format!("completeness residual {residue:e}")));
        }
        Ok(povm)
    }

    /// Builds from raw `(α, m̂)` pairs: drops weights below [`ZERO_PROBABILITY`]
    /// and merges elements whose directions coincide.
    pub fn from_weighted_directions(raw: &[(f64, BlochVector)]) -> Result<Self> {
        let mut merged: Vec<PovmElement> = Vec::with_capacity(raw.len());
        for &(alpha, dir) in raw {
            if alpha < ZERO_PROBABILITY {
                continue;
            }
            if let Some(e) = merged.iter_mut().find(|e| {
                let d = e.direction;
                (d.x - dir.x).abs() < 1e-12 && (d.y - dir.y).abs() < 1e-12 && (d.z - dir.z).abs() < 1e-12
            }) {
                e.alpha += alpha;
            } else {
                merged.push(PovmElement::new(alpha, dir)?);
            }
        }
        Self::new(merged)
    }

    pub fn elements(&self) -> &[PovmElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `max(|Σα − 2|, ‖Σ α m̂‖)`.
    pub fn completeness_residual(&self) -> f64 {
        let total: f64 = self.elements.iter().map(|e| e.alpha).sum();
        let (mut sx, mut sy, mut sz) = (0.0, 0.0, 0.0);
        for e in &self.elements {
            sx += e.alpha * e.direction.x;
            sy += e.alpha * e.direction.y;
            sz += e.alpha * e.direction.z;
        }
        (total - 2.0).abs().max((sx * sx + sy * sy + sz * sz).sqrt())
    }

    pub fn records(&self) -> Vec<PovmElementRecord> {
        self.elements.iter().map(PovmElementRecord::from).collect()
    }
}

/// Measuring σ_x on B.
pub fn vn_horizontal() -> Povm {
    Povm {
        elements: vec![
            PovmElement { alpha: 1.0, direction: BlochVector::new(1.0, 0.0, 0.0) },
            PovmElement { alpha: 1.0, direction: BlochVector::new(-1.0, 0.0, 0.0) },
        ],
    }
}

/// Measuring σ_z on B.
pub fn vn_vertical() -> Povm {
    Povm {
        elements: vec![
            PovmElement { alpha: 1.0, direction: BlochVector::new(0.0, 0.0, 1.0) },
            PovmElement { alpha: 1.0, direction: BlochVector::new(0.0, 0.0, -1.0) },
        ],
    }
}

/// Which pole of B carries the lone projector of the three-element family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Apex {
    /// `|0⟩⟨0|`, steering A to the upper apex when `ad > bc`.
    Up,
    /// `|1⟩⟨1|`.
    Down,
}

impl Apex {
    fn sign(self) -> f64 {
        match self {
            Apex::Up => 1.0,
            Apex::Down => -1.0,
        }
    }
}

/// `{α₁|±ẑ⟩⟨±ẑ|, α|m̂₊⟩⟨m̂₊|, α|m̂₋⟩⟨m̂₋|}` with `α₁ = 2cosθ/(1+cosθ)`,
/// `α = 1/(1+cosθ)` and `m̂± = (±sinθ, 0, ∓s·cosθ)` where `s = ±1` is the apex side.
///
/// θ = 0 collapses to [`vn_vertical`], θ = π/2 to [`vn_horizontal`].
pub fn three_element_family(theta: f64, apex: Apex) -> Result<Povm> {
    Povm::from_weighted_directions(&three_element_raw(theta, apex)?)
}

fn three_element_raw(theta: f64, apex: Apex) -> Result<[(f64, BlochVector); 3]> {
    if !(0.0..=FRAC_PI_2).contains(&theta) {
        return Err(DiscordError::ThetaOutOfRange(theta));
    }
    let (st, ct) = theta.sin_cos();
    let s = apex.sign();
    let lone = 2.0 * ct / (1.0 + ct);
    let pair = 1.0 / (1.0 + ct);
    Ok([
        (lone, BlochVector::new(0.0, 0.0, s)),
        (pair, BlochVector::new(st, 0.0, -s * ct)),
        (pair, BlochVector::new(-st, 0.0, -s * ct)),
    ])
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleMember {
    pub p: f64,
    pub rho: CMat2,
}

/// Probability-weighted states of qubit A.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Ensemble {
    pub members: Vec<EnsembleMember>,
    /// Indices of POVM outcomes dropped for having (near) zero probability.
    pub dropped: Vec<usize>,
}

impl Ensemble {
    pub fn from_bloch(members: &[(f64, BlochVector)]) -> Self {
        Self {
            members: members
                .iter()
                .map(|&(p, b)| EnsembleMember { p, rho: b.to_density() })
                .collect(),
            dropped: Vec::new(),
        }
    }

    pub fn average(&self) -> CMat2 {
        self.members.iter().fold(CMat2::zeros(), |acc, m| acc + m.rho * c(m.p))
    }

    pub fn total_probability(&self) -> f64 {
        self.members.iter().map(|m| m.p).sum()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Concatenates two ensembles weighted by `w` and `1 − w`.
    pub fn mix(&self, w: f64, other: &Ensemble) -> Ensemble {
        fn scaled(e: &Ensemble, s: f64) -> impl Iterator<Item = EnsembleMember> + '_ {
            e.members
                .iter()
                .filter(move |_| s > 0.0)
                .map(move |m| EnsembleMember { p: s * m.p, rho: m.rho })
        }
        Ensemble {
            members: scaled(self, w).chain(scaled(other, 1.0 - w)).collect(),
            dropped: Vec::new(),
        }
    }
}

/// `p_k = Tr[ρ(𝟙⊗M_k)]`, `ρ_k = Tr_B[ρ(𝟙⊗M_k)]/p_k`.
pub fn post_measurement_ensemble(rho: &CMat4, povm: &Povm) -> Ensemble {
    let mut out = Ensemble::default();
    for (k, e) in povm.elements().iter().enumerate() {
        let unnorm = partial_trace_b(&(rho * kron(&CMat2::identity(), &e.matrix())));
        let p = unnorm.trace().re;
        if p < ZERO_PROBABILITY {
            out.dropped.push(k);
            continue;
        }
        out.members.push(EnsembleMember { p, rho: unnorm / c(p) });
    }
    out
}

/// `S(Σ p_k ρ_k) − Σ p_k S(ρ_k)` in bits.
pub fn holevo(e: &Ensemble) -> f64 {
    let avg = BlochVector::from_density(&e.average()).norm();
    let mixed: f64 = e
        .members
        .iter()
        .map(|m| m.p * bloch_entropy(BlochVector::from_density(&m.rho).norm()))
        .sum();
    bloch_entropy(avg) - mixed
}

/// Holevo quantity of the ensemble a POVM given as `(α, m̂)` pairs induces,
/// computed straight from the Pauli-basis matrix `r`.
pub fn holevo_from_pauli(r: &RMat, elements: &[(f64, BlochVector)]) -> f64 {
    let s_avg = bloch_entropy((r[(1, 0)].powi(2) + r[(2, 0)].powi(2) + r[(3, 0)].powi(2)).sqrt());
    let mut mixed = 0.0;
    for &(alpha, m) in elements {
        let w0 = r[(0, 0)] + r[(0, 1)] * m.x + r[(0, 2)] * m.y + r[(0, 3)] * m.z;
        let p = 0.5 * alpha * w0;
        if p < ZERO_PROBABILITY {
            continue;
        }
        let bx = r[(1, 0)] + r[(1, 1)] * m.x + r[(1, 2)] * m.y + r[(1, 3)] * m.z;
        let by = r[(2, 0)] + r[(2, 1)] * m.x + r[(2, 2)] * m.y + r[(2, 3)] * m.z;
        let bz = r[(3, 0)] + r[(3, 1)] * m.x + r[(3, 2)] * m.y + r[(3, 3)] * m.z;
        let radius = (bx * bx + by * by + bz * bz).sqrt() / w0;
        mixed += p * bloch_entropy(radius);
    }
    s_avg - mixed
}

fn pairs(povm: &Povm) -> Vec<(f64, BlochVector)> {
    povm.elements().iter().map(|e| (e.alpha, e.direction)).collect()
}

pub fn holevo_of_povm(r: &RMat, povm: &Povm) -> f64 {
    holevo_from_pauli(r, &pairs(povm))
}

/// χ_↔: Holevo quantity for σ_x on B.
pub fn chi_horizontal(r: &RMat) -> f64 {
    holevo_of_povm(r, &vn_horizontal())
}

/// χ_↕: Holevo quantity for σ_z on B.
pub fn chi_vertical(r: &RMat) -> f64 {
    holevo_of_povm(r, &vn_vertical())
}

pub fn chi_three(r: &RMat, theta: f64, apex: Apex) -> Result<f64> {
    Ok(holevo_from_pauli(r, &three_element_raw(theta, apex)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThreeElementOptimum {
    pub theta: f64,
    pub apex: Apex,
    pub chi: f64,
}

impl ThreeElementOptimum {
    pub fn povm(&self) -> Povm {
        three_element_family(self.theta, self.apex).expect("optimizer theta lies in range")
    }
}

/// Maximizes [`chi_three`] over θ ∈ [0, π/2] on both apex branches: a
/// 64-step scan followed by golden-section refinement.
pub fn optimize_three(r: &RMat) -> ThreeElementOptimum {
    let mut best = ThreeElementOptimum { theta: 0.0, apex: Apex::Up, chi: f64::NEG_INFINITY };
    for apex in [Apex::Up, Apex::Down] {
        let f = |t: f64| chi_three(r, t.clamp(0.0, FRAC_PI_2), apex).expect("clamped theta");
        let (theta, chi) = scan_then_refine(f, 0.0, FRAC_PI_2, THETA_SCAN_POINTS, THETA_TOL);
        if chi > best.chi {
            best = ThreeElementOptimum { theta: theta.clamp(0.0, FRAC_PI_2), apex, chi };
        }
    }
    best
}

/// Family member at height `z` of the vertical apex interval.
fn family_at(x: &XState, z: f64) -> Result<XState> {
    filter_family(x, xi_of_z(x, z)?)
}

/// χ_↔ and χ_↕ of the family member whose reduced state sits at height `z`.
pub fn chi_pair_at(x: &XState, z: f64) -> Result<(f64, f64)> {
    let r = family_at(x, z)?.pauli_rep();
    Ok((chi_horizontal(&r), chi_vertical(&r)))
}

/// `{q p_E, σ_E(z1); q p_F, σ_F(z1); (1−q) p_G, σ_G(z2); (1−q) p_H, σ_H(z2)}`:
/// the horizontal split at `z1` mixed with the vertical split at `z2`.
pub fn four_element_ensemble(x: &XState, q: f64, z1: f64, z2: f64) -> Result<Ensemble> {
    if !(0.0..=1.0).contains(&q) {
        return Err(DiscordError::QOutOfRange(q));
    }
    let horizontal = post_measurement_ensemble(&family_at(x, z1)?.to_density(), &vn_horizontal());
    let vertical = post_measurement_ensemble(&family_at(x, z2)?.to_density(), &vn_vertical());
    Ok(horizontal.mix(q, &vertical))
}

pub fn chi_four(x: &XState, q: f64, z1: f64, z2: f64) -> Result<f64> {
    Ok(holevo(&four_element_ensemble(x, q, z1, z2)?))
}

/// `S[σ(z_q)] − q S[σ(z1)] − (1−q) S[σ(z2)]` for reduced states on the z axis.
pub fn concavity_term(q: f64, z1: f64, z2: f64) -> f64 {
    let zq = q * z1 + (1.0 - q) * z2;
    bloch_entropy(zq.abs()) - q * bloch_entropy(z1.abs()) - (1.0 - q) * bloch_entropy(z2.abs())
}

/// `q χ_↔(z1) + (1−q) χ_↕(z2) + S[σ(z_q)] − q S[σ(z1)] − (1−q) S[σ(z2)]`.
pub fn chi_four_closed_form(x: &XState, q: f64, z1: f64, z2: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&q) {
        return Err(DiscordError::QOutOfRange(q));
    }
    let (lo, hi) = apex_interval(x)?;
    for z in [z1, z2] {
        if !(z > lo && z < hi) {
            return Err(DiscordError::ZOutOfRange { z, lo, hi });
        }
    }
    let (chi_h1, _) = chi_pair_at(x, z1)?;
    let (_, chi_v2) = chi_pair_at(x, z2)?;
    Ok(q * chi_h1 + (1.0 - q) * chi_v2 + concavity_term(q, z1, z2))
}
