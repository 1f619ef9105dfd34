//! Dense 2×2 / 4×4 complex matrices, the Pauli-basis representation of
//! two-qubit operators, reshuffling, partial traces and entropies.
//!
//! Basis order is |00⟩, |01⟩, |10⟩, |11⟩ with qubit A the left tensor factor.
//! All entropies are in bits.

use nalgebra::{Matrix2, Matrix4, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{DiscordError, Result};

pub type CMat2 = Matrix2<Complex64>;
pub type CMat4 = Matrix4<Complex64>;
/// Real 4×4 matrix in the (𝟙, σx, σy, σz) ⊗ (𝟙, σx, σy, σz) basis.
pub type RMat = Matrix4<f64>;

/// Max absolute entry of `ρ − ρ†` tolerated before a matrix is rejected as non-Hermitian.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Eigenvalues within this distance of 0 or 1 are clipped before taking logs.
pub const EIGEN_CLIP_TOL: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Pauli matrix σ_k with σ_0 = 𝟙.
pub fn pauli(k: usize) -> CMat2 {
    match k {
        0 => CMat2::new(ONE, ZERO, ZERO, ONE),
        1 => CMat2::new(ZERO, ONE, ONE, ZERO),
        2 => CMat2::new(ZERO, -I, I, ZERO),
        3 => CMat2::new(ONE, ZERO, ZERO, -ONE),
        _ => panic!("pauli index {k} out of range"),
    }
}

pub fn kron(a: &CMat2, b: &CMat2) -> CMat4 {
    CMat4::from_fn(|r, col| a[(r / 2, col / 2)] * b[(r % 2, col % 2)])
}

pub fn hermiticity_residue4(m: &CMat4) -> f64 {
    (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn hermiticity_residue2(m: &CMat2) -> f64 {
    (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Reshuffling `|ij⟩⟨i′j′| → |ii′⟩⟨jj′|`, i.e. `out[(i,i′),(j,j′)] = m[(i,j),(i′,j′)]`.
///
/// With this map the Bell projector goes to 𝟙/2 and a state goes to the
/// row-major superoperator of the channel whose Choi state it is.
pub fn reshuffle(m: &CMat4) -> CMat4 {
    let mut out = CMat4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for ip in 0..2 {
                for jp in 0..2 {
                    out[(2 * i + ip, 2 * j + jp)] = m[(2 * i + j, 2 * ip + jp)];
                }
            }
        }
    }
    out
}

/// Inverse of [`reshuffle`].
pub fn unreshuffle(m: &CMat4) -> CMat4 {
    let mut out = CMat4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for ip in 0..2 {
                for jp in 0..2 {
                    out[(2 * i + j, 2 * ip + jp)] = m[(2 * i + ip, 2 * j + jp)];
                }
            }
        }
    }
    out
}

/// The unitary Υ whose rows are the conjugated, row-major vectorized Pauli
/// matrices divided by √2.
pub fn upsilon() -> CMat4 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let (o, z) = (c(s), ZERO);
    let is = Complex64::new(0.0, s);
    CMat4::new(
        o, z, z, o, //
        z, o, o, z, //
        z, is, -is, z, //
        o, z, z, -o,
    )
}

/// `R = 2 Υ ρ^R Υ^T`, so that `R[(μ,ν)] = Tr[ρ σ_μ ⊗ σ_ν]`.
pub fn to_pauli_rep(rho: &CMat4) -> Result<RMat> {
    let residue = hermiticity_residue4(rho);
    if residue > HERMITICITY_TOL {
        return Err(DiscordError::NonHermitianInput { residue });
    }
    Ok(pauli_rep_with_basis(rho, &upsilon()))
}

/// `R = 2 Y ρ^R Yᵀ` for an arbitrary basis change `Y`; the imaginary residue is dropped.
pub fn pauli_rep_with_basis(rho: &CMat4, basis: &CMat4) -> RMat {
    ((basis * reshuffle(rho) * basis.transpose()) * c(2.0)).map(|z| z.re)
}

pub fn from_pauli_rep(r: &RMat) -> CMat4 {
    let y = upsilon();
    let shuffled = y.adjoint() * r.map(c) * y.conjugate() * c(0.5);
    unreshuffle(&shuffled)
}

/// Position of a qubit state in the Bloch ball.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn dot(&self, other: &BlochVector) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }

    pub fn from_density(rho: &CMat2) -> Self {
        Self {
            x: 2.0 * rho[(0, 1)].re,
            y: -2.0 * rho[(0, 1)].im,
            z: (rho[(0, 0)] - rho[(1, 1)]).re,
        }
    }

    /// `(𝟙 + r·σ)/2`.
    pub fn to_density(&self) -> CMat2 {
        CMat2::new(
            c((1.0 + self.z) / 2.0),
            Complex64::new(self.x / 2.0, -self.y / 2.0),
            Complex64::new(self.x / 2.0, self.y / 2.0),
            c((1.0 - self.z) / 2.0),
        )
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

/// Matrices whose spectrum can be fed to [`von_neumann_entropy`].
pub trait Spectrum {
    fn spectrum(&self) -> Result<Vec<f64>>;
}

impl Spectrum for CMat2 {
    /// Closed form through the Bloch radius.
    fn spectrum(&self) -> Result<Vec<f64>> {
        let residue = hermiticity_residue2(self);
        if residue > HERMITICITY_TOL {
            return Err(DiscordError::NonHermitianInput { residue });
        }
        let tr = (self[(0, 0)] + self[(1, 1)]).re;
        let half_gap = (((self[(0, 0)] - self[(1, 1)]).re / 2.0).powi(2) + self[(0, 1)].norm_sqr()).sqrt();
        Ok(vec![tr / 2.0 + half_gap, tr / 2.0 - half_gap])
    }
}

impl Spectrum for CMat4 {
    fn spectrum(&self) -> Result<Vec<f64>> {
        let residue = hermiticity_residue4(self);
        if residue > HERMITICITY_TOL {
            return Err(DiscordError::NonHermitianInput { residue });
        }
        // Symmetrize so the solver sees an exactly Hermitian matrix.
        let h = (self + self.adjoint()) * c(0.5);
        Ok(SymmetricEigen::new(h).eigenvalues.iter().copied().collect())
    }
}

/// `−Σ λ log₂ λ` over a probability spectrum.
pub fn entropy_of_spectrum(eigenvalues: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &lam in eigenvalues {
        if lam < -EIGEN_CLIP_TOL {
            return Err(DiscordError::UnphysicalState { min_eigenvalue: lam });
        }
        let lam = lam.clamp(0.0, 1.0);
        if lam > 0.0 {
            s -= lam * lam.log2();
        }
    }
    Ok(s.max(0.0))
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy<M: Spectrum>(rho: &M) -> Result<f64> {
    entropy_of_spectrum(&rho.spectrum()?)
}

/// `h(p) = −p log₂ p − (1−p) log₂(1−p)`.
pub fn binary_entropy(p: f64) -> f64 {
    let p = p.clamp(0.0, 1.0);
    let term = |x: f64| if x > 0.0 { -x * x.log2() } else { 0.0 };
    term(p) + term(1.0 - p)
}

/// Entropy of a qubit state with Bloch radius `r`.
#[inline]
pub fn bloch_entropy(r: f64) -> f64 {
    binary_entropy((1.0 + r.min(1.0)) / 2.0)
}

pub fn partial_trace_b(rho: &CMat4) -> CMat2 {
    CMat2::from_fn(|i, ip| rho[(2 * i, 2 * ip)] + rho[(2 * i + 1, 2 * ip + 1)])
}

pub fn partial_trace_a(rho: &CMat4) -> CMat2 {
    CMat2::from_fn(|j, jp| rho[(j, jp)] + rho[(2 + j, 2 + jp)])
}

/// Bell projector |Φ⟩⟨Φ| with |Φ⟩ = (|00⟩ + |11⟩)/√2.
pub fn bell_phi() -> CMat4 {
    let mut m = CMat4::zeros();
    for &(r, col) in &[(0, 0), (0, 3), (3, 0), (3, 3)] {
        m[(r, col)] = c(0.5);
    }
    m
}

pub fn max_abs_diff4(a: &CMat4, b: &CMat4) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}
