//! Angular channel weights of the partial-wave expansion.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::radial::PhysicalParams;
use crate::specfun::{jacobi_unchecked, ln_gamma_pos};

/// Endpoint in spherical coordinates about the flux tube.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpacePoint {
    r: f64,
    theta: f64,
    phi: f64,
}

impl SpacePoint {
    /// `r > 0`, `0 < θ < π` (the poles of the half-angle factors are
    /// excluded) and `0 ≤ φ < 2π`.
    pub fn new(r: f64, theta: f64, phi: f64) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::domain("r", r, "finite and > 0"));
        }
        if !(theta > 0.0 && theta < PI) {
            return Err(Error::domain("theta", theta, "in (0, pi)"));
        }
        if !(0.0..TAU).contains(&phi) {
            return Err(Error::domain("phi", phi, "in [0, 2pi)"));
        }
        Ok(Self { r, theta, phi })
    }

    /// Like [`SpacePoint::new`] but reduces any finite azimuth into `[0, 2π)`.
    pub fn with_wrapped_phi(r: f64, theta: f64, phi: f64) -> Result<Self> {
        if !phi.is_finite() {
            return Err(Error::domain("phi", phi, "finite"));
        }
        let mut wrapped = phi.rem_euclid(TAU);
        if wrapped >= TAU {
            wrapped = 0.0;
        }
        Self::new(r, theta, wrapped)
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// `ln[cos(θ/2) sin(θ/2)] = ln(sin θ / 2)`.
    fn ln_half_angle(&self) -> f64 {
        (0.5 * self.theta.sin()).ln()
    }

    /// Cosine of the angle between the directions of `self` and `other`.
    pub fn cos_angle_to(&self, other: &SpacePoint) -> f64 {
        let c = self.theta.cos() * other.theta.cos()
            + self.theta.sin() * other.theta.sin() * (self.phi - other.phi).cos();
        c.clamp(-1.0, 1.0)
    }
}

/// `ln[Γ(1+q)Γ(1+q+2s)/Γ²(1+q+s)]`.
fn ln_gamma_bracket(q: u32, s: f64) -> f64 {
    let q = q as f64;
    ln_gamma_pos(1.0 + q) + ln_gamma_pos(1.0 + q + 2.0 * s) - 2.0 * ln_gamma_pos(1.0 + q + s)
}

/// Full complex angular factor of channel `(q, k)`:
///
/// `(2(q+s)+1)/4π · Γ(1+q)Γ(1+q+2s)/Γ²(1+q+s) · e^{ik(φ_b-φ_a)}
///  · (cos θ_b/2 sin θ_b/2 cos θ_a/2 sin θ_a/2)^s · P_q^{(s,s)}(cos θ_b) P_q^{(s,s)}(cos θ_a)`
///
/// with `s = |k + β₀|`.
pub fn angular_weight(
    ch: crate::radial::ChannelIndex,
    p: &PhysicalParams,
    b: &SpacePoint,
    a: &SpacePoint,
) -> Complex64 {
    angular_weight_beta(ch.q, ch.k, p.beta0(), b, a)
}

pub(crate) fn angular_weight_beta(
    q: u32,
    k: i64,
    beta0: f64,
    b: &SpacePoint,
    a: &SpacePoint,
) -> Complex64 {
    let s = (k as f64 + beta0).abs();
    let norm = (2.0 * (q as f64 + s) + 1.0) / (4.0 * PI);
    let ln_mag = ln_gamma_bracket(q, s) + s * (b.ln_half_angle() + a.ln_half_angle());
    let poly = jacobi_unchecked(q, s, b.theta.cos()) * jacobi_unchecked(q, s, a.theta.cos());
    let real = norm * ln_mag.exp() * poly;
    Complex64::from_polar(1.0, k as f64 * (b.phi - a.phi)) * real
}

/// Outcome of a gauge-shift check over a truncation window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaugeShift {
    /// Window sum at `β₀`, over `q ≤ q_max`, `|k| ≤ k_max`.
    pub original: Complex64,
    /// Window sum at `β₀ + n`, over the reindexed window `|k + n| ≤ k_max`.
    pub shifted: Complex64,
    /// `original · e^{-in(φ_b-φ_a)}`, what `shifted` should equal.
    pub expected: Complex64,
    /// Largest single term on the window boundary relative to the total;
    /// a large value means the window is too small for the sums to mean much.
    pub boundary_fraction: f64,
}

impl GaugeShift {
    pub fn rel_error(&self) -> f64 {
        (self.shifted - self.expected).norm() / self.expected.norm()
    }
}

/// Sums the angular weights over a window at `β₀` and over the reindexed
/// window at `β₀ + n`. Since `k ↦ k - n` maps one window onto the other and
/// keeps `|k + β₀|` fixed, the two sums differ by exactly `e^{-in(φ_b-φ_a)}`.
pub fn gauge_shift_check(
    p: &PhysicalParams,
    b: &SpacePoint,
    a: &SpacePoint,
    n: i64,
    q_max: u32,
    k_max: u32,
) -> Result<GaugeShift> {
    let shifted_p = p.with_beta0(p.beta0() + n as f64)?;
    let k_max = k_max as i64;
    let mut original = Complex64::new(0.0, 0.0);
    let mut shifted = Complex64::new(0.0, 0.0);
    let mut boundary: f64 = 0.0;
    for q in 0..=q_max {
        for k in -k_max..=k_max {
            let w = angular_weight_beta(q, k, p.beta0(), b, a);
            original += w;
            shifted += angular_weight_beta(q, k - n, shifted_p.beta0(), b, a);
            if q == q_max || k.abs() == k_max {
                boundary = boundary.max(w.norm());
            }
        }
    }
    let expected = original * Complex64::from_polar(1.0, -(n as f64) * (b.phi - a.phi));
    Ok(GaugeShift {
        original,
        shifted,
        expected,
        boundary_fraction: boundary / original.norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial::ChannelIndex;
    use crate::specfun::assoc_legendre;

    fn params(beta0: f64) -> PhysicalParams {
        PhysicalParams::new(0.1, beta0, 0.7).unwrap()
    }

    #[test]
    fn point_validation() {
        assert!(SpacePoint::new(1.0, 0.0, 0.0).is_err());
        assert!(SpacePoint::new(1.0, PI, 0.0).is_err());
        assert!(SpacePoint::new(0.0, 1.0, 0.0).is_err());
        assert!(SpacePoint::new(1.0, 1.0, TAU).is_err());
        assert!(SpacePoint::new(1.0, 1.0, -0.1).is_err());
        let w = SpacePoint::with_wrapped_phi(1.0, 1.0, -0.5).unwrap();
        assert!((w.phi() - (TAU - 0.5)).abs() < 1e-15);
    }

    #[test]
    fn isotropic_term() {
        let b = SpacePoint::new(1.0, 0.4, 0.2).unwrap();
        let a = SpacePoint::new(2.0, 2.1, 5.0).unwrap();
        let w = angular_weight(ChannelIndex::new(0, 0), &params(0.0), &b, &a);
        assert!((w.re - 1.0 / (4.0 * PI)).abs() < 1e-16);
        assert_eq!(w.im, 0.0);
    }

    #[test]
    fn endpoint_swap_conjugates() {
        let b = SpacePoint::new(1.0, 0.4, 0.2).unwrap();
        let a = SpacePoint::new(2.0, 2.1, 5.0).unwrap();
        for (q, k) in [(0, 1), (3, -2), (5, 4)] {
            let ch = ChannelIndex::new(q, k);
            let ab = angular_weight(ch, &params(0.3), &b, &a);
            let ba = angular_weight(ch, &params(0.3), &a, &b);
            assert!((ab - ba.conj()).norm() <= 1e-15 * ab.norm());
        }
    }

    #[test]
    fn legendre_product_form_at_zero_flux() {
        // with β₀ = 0 and l = q + |k| each weight is Y_l^k(b) Y_l^k(a)*
        let b = SpacePoint::new(1.0, 0.7, 1.0).unwrap();
        let a = SpacePoint::new(1.0, 1.9, 0.3).unwrap();
        for l in 0..6u32 {
            for k in -(l as i64)..=(l as i64) {
                let m = k.unsigned_abs() as u32;
                let q = l - m;
                let ratio =
                    (ln_gamma_pos((l - m + 1) as f64) - ln_gamma_pos((l + m + 1) as f64)).exp();
                let want = (2 * l + 1) as f64 / (4.0 * PI)
                    * ratio
                    * assoc_legendre(l, m as i32, b.theta().cos()).unwrap()
                    * assoc_legendre(l, m as i32, a.theta().cos()).unwrap();
                let got = angular_weight(ChannelIndex::new(q, k), &params(0.0), &b, &a);
                let phase = Complex64::from_polar(1.0, k as f64 * (b.phi() - a.phi()));
                assert!((got - phase * want).norm() < 1e-13, "l={l} k={k}");
            }
        }
    }

    #[test]
    fn large_index_matches_reference() {
        // 30-digit reference values of the full weight (real part; Δφ = 0)
        let b = SpacePoint::new(1.0, 1.0, 0.0).unwrap();
        let a = SpacePoint::new(1.0, 2.0, 0.0).unwrap();
        let cases = [
            (40u32, 60i64, -0.122_139_350_673_348_014_7),
            (3, 10, -0.131_216_079_054_311_504_9),
            (3, 60, -0.000_208_569_374_492_317_124_8),
        ];
        for (q, k, want) in cases {
            let w = angular_weight(ChannelIndex::new(q, k), &params(0.3), &b, &a);
            assert!(
                ((w.re - want) / want).abs() < 1e-11,
                "q={q} k={k}: {}",
                w.re
            );
            assert_eq!(w.im, 0.0);
        }
    }

    #[test]
    fn gauge_shift_trivial_and_phase() {
        let p = params(0.3);
        let b = SpacePoint::new(1.0, 1.0, 0.0).unwrap();
        let a = SpacePoint::new(1.0, 2.0, 1.5).unwrap();
        let zero = gauge_shift_check(&p, &b, &a, 0, 6, 8).unwrap();
        assert_eq!(zero.original, zero.shifted);
        for n in [1, -2, 3] {
            let g = gauge_shift_check(&p, &b, &a, n, 6, 8).unwrap();
            assert!(g.rel_error() < 1e-12, "n={n}: {}", g.rel_error());
        }
    }
}
