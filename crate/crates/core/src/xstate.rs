//! Canonical two-qubit X states
//!
//! ```text
//!     ⎛ a 0 0 u ⎞
//! ρ = ⎜ 0 b v 0 ⎟     a+b+c+d = 1,  u,v ≥ 0,  u² ≤ ad,  v² ≤ bc
//!     ⎜ 0 v c 0 ⎟
//!     ⎝ u 0 0 d ⎠
//! ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{DiscordError, Result};
use crate::numerics::{c, BlochVector, CMat2, CMat4, RMat};

pub const NORMALIZATION_TOL: f64 = 1e-10;
pub const POSITIVITY_SLACK: f64 = 1e-12;

/// The six raw parameters as they appear on the wire.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RawXState {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub u: f64,
    pub v: f64,
}

/// A validated canonical X state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawXState", into = "RawXState")]
pub struct XState {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    u: f64,
    v: f64,
}

impl TryFrom<RawXState> for XState {
    type Error = DiscordError;

    fn try_from(raw: RawXState) -> Result<Self> {
        XState::new(raw.a, raw.b, raw.c, raw.d, raw.u, raw.v)
    }
}

impl From<XState> for RawXState {
    fn from(x: XState) -> Self {
        RawXState { a: x.a, b: x.b, c: x.c, d: x.d, u: x.u, v: x.v }
    }
}

impl XState {
    /// Validates the six parameters.
    pub fn new(a: f64, b: f64, c: f64, d: f64, u: f64, v: f64) -> Result<Self> {
        for (name, value) in [("a", a), ("b", b), ("c", c), ("d", d), ("u", u), ("v", v)] {
            if !value.is_finite() {
                return Err(DiscordError::NegativeParameter { name, value });
            }
            if value < 0.0 {
                return Err(DiscordError::NegativeParameter { name, value });
            }
        }
        let sum = a + b + c + d;
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(DiscordError::NotNormalized { sum });
        }
        if u * u > a * d + POSITIVITY_SLACK {
            return Err(DiscordError::PositivityViolation { constraint: "u^2 > ad" });
        }
        if v * v > b * c + POSITIVITY_SLACK {
            return Err(DiscordError::PositivityViolation { constraint: "v^2 > bc" });
        }
        Ok(Self { a, b, c, d, u, v })
    }

    pub fn from_slice(p: &[f64]) -> Result<Self> {
        match p {
            [a, b, c, d, u, v] => Self::new(*a, *b, *c, *d, *u, *v),
            _ => Err(DiscordError::InvalidGrid(format!(
                "expected six state parameters, got {}",
                p.len()
            ))),
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn d(&self) -> f64 {
        self.d
    }
    pub fn u(&self) -> f64 {
        self.u
    }
    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn params(&self) -> [f64; 6] {
        [self.a, self.b, self.c, self.d, self.u, self.v]
    }

    /// |Φ⟩ = (|00⟩ + |11⟩)/√2.
    pub fn bell_phi() -> Self {
        Self { a: 0.5, b: 0.0, c: 0.0, d: 0.5, u: 0.5, v: 0.0 }
    }

    pub fn maximally_mixed() -> Self {
        Self { a: 0.25, b: 0.25, c: 0.25, d: 0.25, u: 0.0, v: 0.0 }
    }

    pub fn to_density(&self) -> CMat4 {
        let mut m = CMat4::zeros();
        m[(0, 0)] = c(self.a);
        m[(1, 1)] = c(self.b);
        m[(2, 2)] = c(self.c);
        m[(3, 3)] = c(self.d);
        m[(0, 3)] = c(self.u);
        m[(3, 0)] = c(self.u);
        m[(1, 2)] = c(self.v);
        m[(2, 1)] = c(self.v);
        m
    }

    pub fn reduced_a(&self) -> CMat2 {
        CMat2::new(c(self.a + self.b), c(0.0), c(0.0), c(self.c + self.d))
    }

    pub fn reduced_b(&self) -> CMat2 {
        CMat2::new(c(self.a + self.c), c(0.0), c(0.0), c(self.b + self.d))
    }

    /// Bloch z of ρ^A; x and y vanish for X states.
    pub fn bloch_z_a(&self) -> f64 {
        self.a + self.b - self.c - self.d
    }

    pub fn bloch_a(&self) -> BlochVector {
        BlochVector::new(0.0, 0.0, self.bloch_z_a())
    }

    /// Pauli-basis matrix `R[(μ,ν)] = Tr[ρ σ_μ⊗σ_ν]` in closed form.
    pub fn pauli_rep(&self) -> RMat {
        let mut r = RMat::zeros();
        r[(0, 0)] = 1.0;
        r[(0, 3)] = self.a - self.b + self.c - self.d;
        r[(3, 0)] = self.a + self.b - self.c - self.d;
        r[(3, 3)] = self.a - self.b - self.c + self.d;
        r[(1, 1)] = 2.0 * (self.u + self.v);
        r[(2, 2)] = 2.0 * (self.v - self.u);
        r
    }

    /// Reads an X state back from a Pauli-basis matrix, normalizing by `R[(0,0)]`.
    ///
    /// Tiny negative round-off in the recovered parameters is clipped to zero.
    pub fn from_pauli_rep(r: &RMat) -> Result<Self> {
        let n = r[(0, 0)];
        let (r03, r30, r33) = (r[(0, 3)] / n, r[(3, 0)] / n, r[(3, 3)] / n);
        let (r11, r22) = (r[(1, 1)] / n, r[(2, 2)] / n);
        let clip = |x: f64| if x < 0.0 && x > -1e-14 { 0.0 } else { x };
        let a = clip((1.0 + r03 + r30 + r33) / 4.0);
        let b = clip((1.0 - r03 + r30 - r33) / 4.0);
        let cc = clip((1.0 + r03 - r30 - r33) / 4.0);
        let d = clip((1.0 - r03 - r30 + r33) / 4.0);
        let u = clip((r11 - r22) / 4.0);
        let v = clip((r11 + r22) / 4.0);
        // Boundary states (u² = ad) can miss the slack by round-off after a
        // filtering round trip; pull them back onto the boundary.
        let u = if u * u > a * d { u.min((a * d).sqrt() + 1e-15) } else { u };
        let v = if v * v > b * cc { v.min((b * cc).sqrt() + 1e-15) } else { v };
        Self::new(a, b, cc, d, u, v)
    }

    /// Largest absolute difference over the six parameters.
    pub fn max_param_diff(&self, other: &XState) -> f64 {
        self.params()
            .iter()
            .zip(other.params())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    /// `F = diag(√(a+c), √(b+d))`.
    pub fn canonical_filter(&self) -> Result<FilterOp> {
        let (p0, p1) = (self.a + self.c, self.b + self.d);
        if p0 <= 0.0 || p1 <= 0.0 {
            return Err(DiscordError::DegenerateMarginal { a_plus_c: p0, b_plus_d: p1 });
        }
        FilterOp::new(p0.sqrt(), p1.sqrt())
    }

    pub fn with_coherences(&self, u: f64, v: f64) -> Result<Self> {
        Self::new(self.a, self.b, self.c, self.d, u, v)
    }
}

/// A diagonal local filter `diag(f0, f1)` acting on qubit B.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterOp {
    f0: f64,
    f1: f64,
}

impl FilterOp {
    pub fn new(f0: f64, f1: f64) -> Result<Self> {
        let ok = |f: f64| f.is_finite() && f > 0.0 && f <= 1.0 + 1e-12;
        if !ok(f0) || !ok(f1) {
            return Err(DiscordError::InvalidFilter(format!(
                "diagonal entries ({f0}, {f1}) must lie in (0, 1]"
            )));
        }
        Ok(Self { f0, f1 })
    }

    /// `Ξ(ξ) = diag(ξ, √(1−ξ²))`.
    pub fn xi(xi: f64) -> Result<Self> {
        if !(xi > 0.0 && xi < 1.0) {
            return Err(DiscordError::XiOutOfRange(xi));
        }
        Self::new(xi, (1.0 - xi * xi).sqrt())
    }

    pub fn identity() -> Self {
        Self { f0: 1.0, f1: 1.0 }
    }

    pub fn diag(&self) -> (f64, f64) {
        (self.f0, self.f1)
    }

    pub fn det(&self) -> f64 {
        self.f0 * self.f1
    }

    pub fn matrix(&self) -> CMat2 {
        CMat2::new(c(self.f0), c(0.0), c(0.0), c(self.f1))
    }
}

/// Samples `(a,b,c,d)` uniformly on the simplex, then `u ∈ [0, √(ad)]`, `v ∈ [0, √(bc)]`.
pub fn random_xstate_with<R: Rng + ?Sized>(rng: &mut R) -> XState {
    let e: [f64; 4] = std::array::from_fn(|_| -(1.0 - rng.random::<f64>()).ln());
    let total: f64 = e.iter().sum();
    let [a, b, cc, d] = e.map(|x| x / total);
    let u = rng.random::<f64>() * (a * d).sqrt();
    let v = rng.random::<f64>() * (b * cc).sqrt();
    XState::new(a, b, cc, d, u, v).expect("sampled state violates constraints")
}

pub fn random_xstate(seed: u64) -> XState {
    random_xstate_with(&mut ChaCha8Rng::seed_from_u64(seed))
}
