//! Channel extraction, steering ellipsoids and the ξ-parameterized filtering family.
//!
//! A state with non-degenerate B marginal is written as
//! `ρ = 2 (Λ ⊗ Λ_F) Φ` where Λ is a trace-preserving channel on A and
//! `F = diag(√(a+c), √(b+d))` a filter on B. Λ fixes the steering ellipsoid;
//! local filters on B move the reduced state of A inside it without
//! changing its shape.

use serde::{Deserialize, Serialize};

use crate::error::{DiscordError, Result};
use crate::numerics::{
    bell_phi, c, kron, partial_trace_b, pauli_rep_with_basis, reshuffle, to_pauli_rep, upsilon,
    BlochVector, CMat4, RMat,
};
use crate::xstate::{FilterOp, XState};

/// Below this `|det R|` the quadric form of the ellipsoid is undefined.
pub const SINGULAR_R_TOL: f64 = 1e-12;
/// Bisection tolerance in ξ for [`xi_of_z`].
pub const XI_TOL: f64 = 1e-13;

/// One-qubit channel on A in computational (`lambda`) and Pauli (`l`) form.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    pub lambda: CMat4,
    pub l: RMat,
}

/// `x²/l1² + y²/l2² + (z−z0)²/l3² = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SteeringEllipsoid {
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
    pub z0: f64,
}

impl SteeringEllipsoid {
    pub fn apex_top(&self) -> f64 {
        self.z0 + self.l3
    }

    pub fn apex_bottom(&self) -> f64 {
        self.z0 - self.l3
    }

    /// x-coordinate of the right end of the horizontal chord at height `z`
    /// in the x–z cross-section. Zero outside `[z0−l3, z0+l3]` or when `l3 = 0`.
    pub fn chord_half_width(&self, z: f64) -> f64 {
        if self.l3 <= 0.0 {
            return 0.0;
        }
        let t = (z - self.z0) / self.l3;
        self.l1 * (1.0 - t * t).max(0.0).sqrt()
    }

    /// Point of the surface in direction `(θ, φ)` of the parametrization.
    pub fn surface_point(&self, theta: f64, phi: f64) -> BlochVector {
        BlochVector::new(
            self.l1 * theta.sin() * phi.cos(),
            self.l2 * theta.sin() * phi.sin(),
            self.z0 + self.l3 * theta.cos(),
        )
    }

    /// The six axis endpoints.
    pub fn axis_endpoints(&self) -> [BlochVector; 6] {
        [
            BlochVector::new(self.l1, 0.0, self.z0),
            BlochVector::new(-self.l1, 0.0, self.z0),
            BlochVector::new(0.0, self.l2, self.z0),
            BlochVector::new(0.0, -self.l2, self.z0),
            BlochVector::new(0.0, 0.0, self.z0 + self.l3),
            BlochVector::new(0.0, 0.0, self.z0 - self.l3),
        ]
    }

    /// Shrinks the horizontal axes by `factor`, as two-sided dephasing does.
    pub fn dephased(&self, factor: f64) -> Self {
        Self { l1: self.l1 * factor, l2: self.l2 * factor, ..*self }
    }
}

/// The 4×4 quadric matrix 𝔈 with `(1 x y z) 𝔈 (1 x y z)ᵀ = 0` on the surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipsoidMatrix(pub RMat);

impl EllipsoidMatrix {
    pub fn quadric(&self, p: &BlochVector) -> f64 {
        let w = nalgebra::Vector4::new(1.0, p.x, p.y, p.z);
        (w.transpose() * self.0 * w)[(0, 0)]
    }

    /// Rescaled so that the quadric equals −1 at the point `center`.
    pub fn normalized_at(&self, center: &BlochVector) -> Self {
        let s = -self.quadric(center);
        EllipsoidMatrix(self.0 / s)
    }

    pub fn symmetry_residue(&self) -> f64 {
        (self.0 - self.0.transpose()).abs().max()
    }
}

fn eta() -> RMat {
    RMat::from_diagonal(&nalgebra::Vector4::new(1.0, -1.0, -1.0, -1.0))
}

/// `Λ = ρ^R Λ_F^{−T}` and `L = Υ Λ Υ†`.
pub fn extract_channel(x: &XState) -> Result<Channel> {
    let f = x.canonical_filter()?;
    let fm = f.matrix();
    // Λ_F = F ⊗ F* with F real diagonal.
    let lambda_f = kron(&fm, &fm);
    let inv_t = lambda_f
        .try_inverse()
        .expect("canonical filter is invertible")
        .transpose();
    let lambda = reshuffle(&x.to_density()) * inv_t;
    let y = upsilon();
    let l = (y * lambda * y.adjoint()).map(|z| z.re);
    Ok(Channel { lambda, l })
}

/// Pauli transfer matrix of `X ↦ Ξ X Ξ†` for a diagonal filter.
pub fn filter_transfer_matrix(filter: &FilterOp) -> RMat {
    let m = filter.matrix();
    let super_op = kron(&m, &m.conjugate());
    let y = upsilon();
    (y * super_op * y.adjoint()).map(|z| z.re)
}

/// Semi-axes and centre in closed form.
pub fn ellipsoid_params(x: &XState) -> Result<SteeringEllipsoid> {
    x.canonical_filter()?;
    let (a, b, cc, d, u, v) = (x.a(), x.b(), x.c(), x.d(), x.u(), x.v());
    let pp = (a + cc) * (b + d);
    let root = pp.sqrt();
    Ok(SteeringEllipsoid {
        l1: (u + v) / root,
        l2: (u - v).abs() / root,
        l3: (a * d - b * cc).abs() / pp,
        z0: (a * b - cc * d) / pp,
    })
}

/// Reads the ellipsoid off the diagonal/first column of a channel's L.
pub fn ellipsoid_from_channel(ch: &Channel) -> SteeringEllipsoid {
    SteeringEllipsoid {
        l1: ch.l[(1, 1)].abs(),
        l2: ch.l[(2, 2)].abs(),
        l3: ch.l[(3, 3)].abs(),
        z0: ch.l[(3, 0)],
    }
}

/// `𝔈 = R^{−T} η R^{−1}`.
pub fn ellipsoid_matrix(r: &RMat) -> Result<EllipsoidMatrix> {
    let det = r.determinant();
    if det.abs() < SINGULAR_R_TOL {
        return Err(DiscordError::SingularR { det });
    }
    let inv = r.try_inverse().ok_or(DiscordError::SingularR { det })?;
    let e = inv.transpose() * eta() * inv;
    Ok(EllipsoidMatrix((e + e.transpose()) * 0.5))
}

/// Applies `𝟙 ⊗ Ξ` and renormalizes; returns the state and the trace before normalization.
pub fn filter_on_b(x: &XState, filter: &FilterOp) -> Result<(XState, f64)> {
    let k = kron(&nalgebra::Matrix2::identity(), &filter.matrix());
    let unnorm = k * x.to_density() * k.adjoint();
    let norm = unnorm.trace().re;
    let r = to_pauli_rep(&(unnorm / c(norm)))?;
    Ok((XState::from_pauli_rep(&r)?, norm))
}

/// Outcome of a filter-invariance check: `𝔈′ ≈ ratio · 𝔈`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterInvarianceReport {
    /// Least-squares scalar relating the filtered quadric to the original.
    pub ratio: f64,
    /// `N² / |det Ξ|²` with `N` the trace of the unnormalized filtered state.
    pub predicted_ratio: f64,
    /// `max |𝔈′ − ratio·𝔈| / max |𝔈′|`.
    pub deviation: f64,
}

pub fn check_filter_invariance(x: &XState, filter: &FilterOp) -> Result<FilterInvarianceReport> {
    check_filter_invariance_with_basis(x, filter, &upsilon())
}

/// Same as [`check_filter_invariance`] with the Pauli-basis change supplied
/// by the caller (used for negative controls).
pub fn check_filter_invariance_with_basis(
    x: &XState,
    filter: &FilterOp,
    basis: &CMat4,
) -> Result<FilterInvarianceReport> {
    let rho = x.to_density();
    let k = kron(&nalgebra::Matrix2::identity(), &filter.matrix());
    let unnorm = k * rho * k.adjoint();
    let norm = unnorm.trace().re;
    let filtered = unnorm / c(norm);

    let e = ellipsoid_matrix(&pauli_rep_with_basis(&rho, basis))?.0;
    let e_f = ellipsoid_matrix(&pauli_rep_with_basis(&filtered, basis))?.0;

    let ratio = e.dot(&e_f) / e.dot(&e);
    let scale = e_f.abs().max();
    let deviation = (e_f - e * ratio).abs().max() / scale;
    let det = filter.det();
    Ok(FilterInvarianceReport { ratio, predicted_ratio: norm * norm / (det * det), deviation })
}

/// `σ^AB(ξ)`: the state with the same channel Λ and B filter `Ξ(ξ)`,
/// through `R_ξ = 2 L R_Φ L_ξᵀ`.
pub fn filter_family(x: &XState, xi: f64) -> Result<XState> {
    let filter = FilterOp::xi(xi)?;
    let ch = extract_channel(x)?;
    let r_phi = to_pauli_rep(&bell_phi())?;
    let r_xi = ch.l * r_phi * filter_transfer_matrix(&filter).transpose() * 2.0;
    XState::from_pauli_rep(&r_xi)
}

/// Bloch z of ρ^A at the two ends of the family: `((b−d)/(b+d), (a−c)/(a+c))`,
/// i.e. the limits ξ → 0⁺ and ξ → 1⁻.
pub fn apex_limits(x: &XState) -> Result<(f64, f64)> {
    x.canonical_filter()?;
    Ok(((x.b() - x.d()) / (x.b() + x.d()), (x.a() - x.c()) / (x.a() + x.c())))
}

/// `(lo, hi)` with `lo ≤ hi`: the vertical apexes of the ellipsoid.
pub fn apex_interval(x: &XState) -> Result<(f64, f64)> {
    let (z_at_0, z_at_1) = apex_limits(x)?;
    Ok((z_at_0.min(z_at_1), z_at_0.max(z_at_1)))
}

pub fn z_of_xi(x: &XState, xi: f64) -> Result<f64> {
    Ok(filter_family(x, xi)?.bloch_z_a())
}

/// Inverse of [`z_of_xi`] by bisection on the monotone forward map.
pub fn xi_of_z(x: &XState, z: f64) -> Result<f64> {
    let (z_at_0, z_at_1) = apex_limits(x)?;
    let (lo, hi) = (z_at_0.min(z_at_1), z_at_0.max(z_at_1));
    if !(z > lo && z < hi) {
        return Err(DiscordError::ZOutOfRange { z, lo, hi });
    }
    let increasing = z_at_1 > z_at_0;
    let (mut a, mut b) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if b - a < XI_TOL {
            break;
        }
        let zm = z_of_xi(x, mid)?;
        if (zm < z) == increasing {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Number of grid steps on which `z(ξ)` fails to move in the direction of
/// its endpoint limits. Zero means the one-to-one correspondence holds on the grid.
pub fn z_monotonicity_violations(x: &XState, grid: usize) -> Result<usize> {
    let (z_at_0, z_at_1) = apex_limits(x)?;
    let sign = (z_at_1 - z_at_0).signum();
    let zs = (1..=grid)
        .map(|i| z_of_xi(x, i as f64 / (grid + 1) as f64))
        .collect::<Result<Vec<_>>>()?;
    Ok(zs.windows(2).filter(|w| (w[1] - w[0]) * sign < 0.0).count())
}

/// Reduced state of A for the family member at height `z`.
pub fn family_reduced_a(x: &XState, xi: f64) -> Result<BlochVector> {
    let s = filter_family(x, xi)?;
    Ok(BlochVector::from_density(&partial_trace_b(&s.to_density())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{max_abs_diff4, unreshuffle};
    use crate::xstate::random_xstate;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fig3() -> XState {
        XState::new(0.4875, 0.1625, 0.0875, 0.2625, 0.3354, 0.1118).unwrap()
    }

    // Values from hand arithmetic on the closed forms with the Fig. 3 parameters:
    // (a+c)(b+d) = 0.244375, u+v = 0.4472, u−v = 0.2236, ad−bc = 0.11375, ab−cd = 0.05625.
    const FIG3_L1: f64 = 0.9046350439043617;
    const FIG3_L2: f64 = 0.4523175219521808;
    const FIG3_L3: f64 = 0.4654731457800511;
    const FIG3_Z0: f64 = 0.23017902813299235;

    #[test]
    fn bell_channel_is_identity() {
        let ch = extract_channel(&XState::bell_phi()).unwrap();
        assert!((ch.l - RMat::identity()).abs().max() < 1e-14);
        let e = ellipsoid_params(&XState::bell_phi()).unwrap();
        assert_eq!(e, SteeringEllipsoid { l1: 1.0, l2: 1.0, l3: 1.0, z0: 0.0 });
    }

    #[test]
    fn fig3_channel_and_ellipsoid() {
        let x = fig3();
        let ch = extract_channel(&x).unwrap();
        let l = ch.l;
        let expected_diag = [1.0, FIG3_L1, FIG3_L2, FIG3_L3];
        for (k, &val) in expected_diag.iter().enumerate() {
            assert!((l[(k, k)] - val).abs() < 1e-12, "L[{k},{k}] = {}", l[(k, k)]);
        }
        assert!((l[(3, 0)] - FIG3_Z0).abs() < 1e-12);
        // row 0 = (1,0,0,0), only Eq. (3) entries nonzero
        for m in 0..4 {
            for n in 0..4 {
                if ![(0, 0), (1, 1), (2, 2), (3, 3), (3, 0)].contains(&(m, n)) {
                    assert!(l[(m, n)].abs() < 1e-14);
                }
            }
        }
        // imaginary part of Υ Λ Υ† vanishes
        let y = upsilon();
        assert!((y * ch.lambda * y.adjoint()).map(|z| z.im).abs().max() < 1e-14);
        // defining relation ρ^R = Λ Λ_F^T
        let fm = x.canonical_filter().unwrap().matrix();
        let rebuilt = ch.lambda * kron(&fm, &fm).transpose();
        assert!(max_abs_diff4(&rebuilt, &reshuffle(&x.to_density())) < 1e-14);

        let e = ellipsoid_params(&x).unwrap();
        assert!((e.l1 - FIG3_L1).abs() < 1e-14);
        assert!((e.l2 - FIG3_L2).abs() < 1e-14);
        assert!((e.l3 - FIG3_L3).abs() < 1e-14);
        assert!((e.z0 - FIG3_Z0).abs() < 1e-14);
        let from_l = ellipsoid_from_channel(&ch);
        assert!((from_l.l1 - e.l1).abs() < 1e-12 && (from_l.z0 - e.z0).abs() < 1e-12);
    }

    #[test]
    fn product_state_has_no_horizontal_extent() {
        let x = XState::new(0.1, 0.2, 0.3, 0.4, 0.0, 0.0).unwrap();
        let ch = extract_channel(&x).unwrap();
        assert!(ch.l[(1, 1)].abs() < 1e-15 && ch.l[(2, 2)].abs() < 1e-15);
        let e = ellipsoid_params(&x).unwrap();
        assert_eq!((e.l1, e.l2), (0.0, 0.0));
        let equal = XState::new(0.3, 0.2, 0.2, 0.3, 0.15, 0.15).unwrap();
        assert_eq!(ellipsoid_params(&equal).unwrap().l2, 0.0);
    }

    #[test]
    fn degenerate_marginal_propagates() {
        let x = XState::new(0.0, 0.6, 0.0, 0.4, 0.0, 0.0).unwrap();
        assert!(matches!(extract_channel(&x), Err(DiscordError::DegenerateMarginal { .. })));
        assert!(matches!(ellipsoid_params(&x), Err(DiscordError::DegenerateMarginal { .. })));
    }

    #[test]
    fn l_image_of_sphere_is_parametric_ellipsoid() {
        for seed in 0..50 {
            let x = random_xstate(seed);
            let ch = extract_channel(&x).unwrap();
            let e = ellipsoid_params(&x).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..20 {
                let th = rng.random::<f64>() * std::f64::consts::PI;
                let ph = rng.random::<f64>() * std::f64::consts::TAU;
                let n = nalgebra::Vector4::new(1.0, th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos());
                let img = ch.l * n;
                let p = e.surface_point(th, ph);
                // L acts on (1, n) with signs on the axes; compare absolute geometry
                assert!((img[0] - 1.0).abs() < 1e-12);
                assert!((img[1].abs() - p.x.abs()).abs() < 1e-8);
                assert!((img[2].abs() - p.y.abs()).abs() < 1e-8);
                assert!((img[3] - e.z0 - (ch.l[(3, 3)] * th.cos())).abs() < 1e-8);
                let res = if e.l1 > 1e-9 && e.l2 > 1e-9 && e.l3 > 1e-9 {
                    (img[1] / e.l1).powi(2) + (img[2] / e.l2).powi(2) + ((img[3] - e.z0) / e.l3).powi(2) - 1.0
                } else {
                    0.0
                };
                assert!(res.abs() < 1e-8);
            }
        }
    }

    #[test]
    fn ellipsoid_matrix_examples() {
        let eta = ellipsoid_matrix(&XState::bell_phi().pauli_rep()).unwrap();
        assert!((eta.0 - super::eta()).abs().max() < 1e-14);

        let x = fig3();
        let e = ellipsoid_params(&x).unwrap();
        let m = ellipsoid_matrix(&x.pauli_rep())
            .unwrap()
            .normalized_at(&BlochVector::new(0.0, 0.0, e.z0));
        assert!(m.symmetry_residue() < 1e-12);
        for p in e.axis_endpoints() {
            assert!(m.quadric(&p).abs() < 1e-8, "residual {}", m.quadric(&p));
        }

        let singular = XState::new(0.25, 0.25, 0.25, 0.25, 0.0, 0.0).unwrap();
        assert!(matches!(ellipsoid_matrix(&singular.pauli_rep()), Err(DiscordError::SingularR { .. })));
    }

    #[test]
    fn ellipsoid_matrix_zero_set_matches_parametric_surface() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for seed in 100..150 {
            let x = random_xstate(seed);
            let e = ellipsoid_params(&x).unwrap();
            let Ok(m) = ellipsoid_matrix(&x.pauli_rep()) else { continue };
            let m = m.normalized_at(&BlochVector::new(0.0, 0.0, e.z0));
            for _ in 0..10 {
                let p = e.surface_point(rng.random::<f64>() * std::f64::consts::PI, rng.random::<f64>() * std::f64::consts::TAU);
                assert!(m.quadric(&p).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn filter_invariance_examples() {
        let x = fig3();
        let id = check_filter_invariance(&x, &FilterOp::identity()).unwrap();
        assert!((id.ratio - 1.0).abs() < 1e-12);
        assert!(id.deviation < 1e-14);

        let f = FilterOp::new(0.8, 0.6).unwrap();
        let rep = check_filter_invariance(&x, &f).unwrap();
        assert!(rep.deviation < 1e-8);
        assert!((rep.ratio / rep.predicted_ratio - 1.0).abs() < 1e-8);
        // N = 0.64(a+c) + 0.36(b+d) = 0.521; ratio = N² / (0.48)²
        let n = 0.64 * 0.575 + 0.36 * 0.425;
        assert!((rep.predicted_ratio - n * n / (0.48 * 0.48)).abs() < 1e-12);
    }

    #[test]
    fn filter_invariance_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let mut checked = 0;
        for seed in 0..100 {
            let x = random_xstate(1000 + seed);
            let f = FilterOp::new(rng.random_range(0.05..1.0), rng.random_range(0.05..1.0)).unwrap();
            match check_filter_invariance(&x, &f) {
                Ok(rep) => {
                    assert!(rep.deviation < 1e-8, "seed {seed}: {rep:?}");
                    checked += 1;
                }
                Err(DiscordError::SingularR { .. }) => {}
                Err(e) => panic!("{e}"),
            }
        }
        assert!(checked > 90);
    }

    #[test]
    fn perturbed_basis_breaks_invariance() {
        let mut y = upsilon();
        y[(1, 0)] += c(1e-3);
        let rep = check_filter_invariance_with_basis(&fig3(), &FilterOp::new(0.8, 0.6).unwrap(), &y).unwrap();
        assert!(rep.deviation > 1e-6, "{rep:?}");
    }

    /// Independent route: ρ(ξ) = (𝟙⊗D) ρ (𝟙⊗D) with D = Ξ(ξ) F⁻¹.
    fn family_oracle(x: &XState, xi: f64) -> XState {
        let p = xi / (x.a() + x.c()).sqrt();
        let q = (1.0 - xi * xi).sqrt() / (x.b() + x.d()).sqrt();
        let d = nalgebra::Matrix2::new(c(p), c(0.0), c(0.0), c(q));
        let k = kron(&nalgebra::Matrix2::identity(), &d);
        let rho = k * x.to_density() * k;
        XState::from_pauli_rep(&to_pauli_rep(&rho).unwrap()).unwrap()
    }

    #[test]
    fn filter_family_matches_density_route() {
        for seed in 0..50 {
            let x = random_xstate(seed);
            for xi in [0.01, 0.3, 0.5, 0.77, 0.99] {
                let fam = filter_family(&x, xi).unwrap();
                assert!(fam.max_param_diff(&family_oracle(&x, xi)) < 1e-12);
            }
        }
    }

    #[test]
    fn filter_family_recovery_and_limits() {
        let x = fig3();
        let back = filter_family(&x, 0.575f64.sqrt()).unwrap();
        assert!(back.max_param_diff(&x) < 1e-10);
        let z_lo = z_of_xi(&x, 1e-6).unwrap();
        let z_hi = z_of_xi(&x, 1.0 - 1e-6).unwrap();
        let (lim_lo, lim_hi): (f64, f64) = ((0.1625 - 0.2625) / 0.425, (0.4875 - 0.0875) / 0.575);
        assert!((lim_lo + 0.23529411764705882).abs() < 1e-15);
        assert!((lim_hi - 0.6956521739130435).abs() < 1e-15);
        assert!((z_lo - lim_lo).abs() < 1e-6);
        // z is linear in ξ², so at ξ = 1−1e-6 the gap is (1−ξ²)·|z_hi − z_lo| ≈ 1.86e-6
        let gap = (1.0 - (1.0f64 - 1e-6).powi(2)) * (lim_hi - lim_lo);
        assert!(((lim_hi - z_hi) - gap).abs() < 1e-12);
        assert!((z_hi - lim_hi).abs() < 2e-6);
        // the apexes of the ellipsoid
        let e = ellipsoid_params(&x).unwrap();
        assert!((e.apex_top() - 0.6956521739130435).abs() < 1e-12);
        assert!((e.apex_bottom() + 0.23529411764705882).abs() < 1e-12);
        assert!(matches!(filter_family(&x, 0.0), Err(DiscordError::XiOutOfRange(_))));
        assert!(matches!(filter_family(&x, 1.0), Err(DiscordError::XiOutOfRange(_))));
    }

    #[test]
    fn z_xi_round_trip() {
        let x = fig3();
        let z = z_of_xi(&x, 0.37).unwrap();
        assert!((xi_of_z(&x, z).unwrap() - 0.37).abs() < 1e-9);
        let z_here = z_of_xi(&x, 0.575f64.sqrt()).unwrap();
        assert!((z_here - x.bloch_z_a()).abs() < 1e-12);
        assert!(matches!(xi_of_z(&x, 0.9), Err(DiscordError::ZOutOfRange { .. })));

        // midpoint between apexes: plain bisection oracle on the forward map
        let (lo, hi) = apex_interval(&x).unwrap();
        let mid = 0.5 * (lo + hi);
        let (mut a, mut b) = (1e-9, 1.0 - 1e-9);
        for _ in 0..100 {
            let m = 0.5 * (a + b);
            if family_oracle(&x, m).bloch_z_a() < mid {
                a = m;
            } else {
                b = m;
            }
        }
        assert!((xi_of_z(&x, mid).unwrap() - 0.5 * (a + b)).abs() < 1e-9);
    }

    #[test]
    fn z_is_monotone_in_xi() {
        for seed in 0..20 {
            assert_eq!(z_monotonicity_violations(&random_xstate(seed), 256).unwrap(), 0);
        }
    }

    #[test]
    fn filter_on_b_matches_reshuffle_relation() {
        // (ρ')^R ∝ ρ^R Λ_Ξ^T for a diagonal filter on B
        let x = fig3();
        let f = FilterOp::new(0.9, 0.4).unwrap();
        let (filtered, norm) = filter_on_b(&x, &f).unwrap();
        let fm = f.matrix();
        let predicted = reshuffle(&x.to_density()) * kron(&fm, &fm).transpose() / c(norm);
        assert!(max_abs_diff4(&unreshuffle(&predicted), &filtered.to_density()) < 1e-12);
    }
}
