//! Radial Green's functions of one `(q, k)` channel.
//!
//! The free kernel `g⁽⁰⁾` is available from its proper-time integral and from
//! the z-representation; the order-`n` perturbation terms `g⁽ⁿ⁾` from the
//! closed moment formula; and the full channel function `G_{q,|k+β₀|}` from
//! the truncated perturbation series, from the resummed z-integral and from
//! the closed Whittaker form.
//!
//! All kernels are evaluated in log space. With `s = sinh z` the exponent of
//! the z-kernel is rewritten as
//! `-κ(r_b+r_a) coth z + 2κ√(r_b r_a)/s = -κ(√r_b-√r_a)²/s - κ(r_b+r_a) tanh(z/2)`,
//! which is free of cancellation and pairs with the scaled Bessel function
//! `ln I_λ(x) - x`.

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{integrate_moment, integrate_semiinf_log, EvalResult, LogValue, QuadSpec};
use crate::specfun::{ln_gamma_pos, ln_i_scaled_from_ln_x, ln_whittaker_m, ln_whittaker_w};

/// Gamma arguments closer than this to a non-positive integer are treated as poles.
pub const POLE_EXCLUSION: f64 = 1e-8;

/// Coulomb coupling `α` and flux parameter `β₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Couplings {
    alpha: f64,
    beta0: f64,
}

impl Couplings {
    /// `0 ≤ α < 1/2` keeps every channel order real; `β₀` is any finite real.
    pub fn new(alpha: f64, beta0: f64) -> Result<Self> {
        if !(0.0..0.5).contains(&alpha) {
            return Err(Error::domain("alpha", alpha, "in [0, 1/2)"));
        }
        if !beta0.is_finite() {
            return Err(Error::domain("beta0", beta0, "finite"));
        }
        Ok(Self { alpha, beta0 })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta0(&self) -> f64 {
        self.beta0
    }

    pub fn at_energy(self, energy: f64) -> Result<PhysicalParams> {
        PhysicalParams::new(self.alpha, self.beta0, energy)
    }

    /// Magnetic flux through the tube, `Ω = 4πg` with `β₀ = -2eg`
    /// (`e = √α`). `None` for an uncharged particle.
    pub fn flux(&self) -> Option<f64> {
        (self.alpha > 0.0).then(|| -2.0 * PI * self.beta0 / self.alpha.sqrt())
    }

    /// Coupling constant `g = Ω/4π` of the vector potential.
    pub fn coupling_g(&self) -> Option<f64> {
        self.flux().map(|f| f / (4.0 * PI))
    }
}

/// Couplings plus an energy `0 < E < 1` below the rest-mass threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    alpha: f64,
    beta0: f64,
    energy: f64,
}

impl PhysicalParams {
    pub fn new(alpha: f64, beta0: f64, energy: f64) -> Result<Self> {
        let c = Couplings::new(alpha, beta0)?;
        if !(energy > 0.0 && energy < 1.0) {
            return Err(Error::domain("energy", energy, "in (0, 1)"));
        }
        Ok(Self {
            alpha: c.alpha,
            beta0: c.beta0,
            energy,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta0(&self) -> f64 {
        self.beta0
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn couplings(&self) -> Couplings {
        Couplings {
            alpha: self.alpha,
            beta0: self.beta0,
        }
    }

    pub fn with_beta0(self, beta0: f64) -> Result<Self> {
        Self::new(self.alpha, beta0, self.energy)
    }

    /// `κ = √(1 - E²)`.
    pub fn kappa(&self) -> f64 {
        ((1.0 - self.energy) * (1.0 + self.energy)).sqrt()
    }

    /// `ℰ = (1 - E²)/2`, the decay rate in the proper-time integral.
    pub fn script_e(&self) -> f64 {
        0.5 * (1.0 - self.energy) * (1.0 + self.energy)
    }

    /// `ν = Eα/κ`, the first Whittaker index.
    pub fn nu(&self) -> f64 {
        self.energy * self.alpha / self.kappa()
    }

    /// Expansion parameter of the perturbation series, `mβe²/ħ² = Eα`.
    pub fn expansion_parameter(&self) -> f64 {
        self.energy * self.alpha
    }
}

/// Principal index `q ≥ 0` and winding number `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ChannelIndex {
    pub q: u32,
    pub k: i64,
}

impl ChannelIndex {
    pub fn new(q: u32, k: i64) -> Self {
        Self { q, k }
    }

    /// Flux-shifted azimuthal index `|k + β₀|`.
    pub fn shift(&self, beta0: f64) -> f64 {
        (self.k as f64 + beta0).abs()
    }

    /// Effective angular momentum `q + |k + β₀|`.
    pub fn effective_l(&self, beta0: f64) -> f64 {
        self.q as f64 + self.shift(beta0)
    }

    /// Channel order `λ = √([2(q+|k+β₀|)+1]² - 4α²)`.
    pub fn lambda(&self, c: &Couplings) -> f64 {
        let two_l1 = 2.0 * self.effective_l(c.beta0) + 1.0;
        let two_a = 2.0 * c.alpha;
        ((two_l1 - two_a) * (two_l1 + two_a)).sqrt()
    }

    /// Argument `(1+λ)/2 - ν` of the Gamma prefactor of the closed form.
    pub fn gamma_arg(&self, p: &PhysicalParams) -> f64 {
        0.5 * (1.0 + self.lambda(&p.couplings())) - p.nu()
    }

    /// Fails with [`Error::Pole`] unless the energy lies below the first
    /// bound-state pole of this channel, outside the exclusion zone.
    pub fn require_below_first_pole(&self, p: &PhysicalParams) -> Result<f64> {
        let a = self.gamma_arg(p);
        if a > POLE_EXCLUSION {
            return Ok(a);
        }
        let nearest = (-a).round();
        let n_r = if (a + nearest).abs() < POLE_EXCLUSION {
            nearest
        } else {
            (-a).floor().max(0.0)
        };
        Err(Error::Pole {
            q: self.q,
            k: self.k,
            n_r: n_r as u32,
            gamma_arg: a,
        })
    }
}

fn ln_sinh(z: f64) -> f64 {
    if z < 20.0 {
        z.sinh().ln()
    } else {
        z - LN_2 + (-(-2.0 * z).exp()).ln_1p()
    }
}

fn check_radii(rb: f64, ra: f64) -> Result<()> {
    if !(rb > 0.0 && rb.is_finite()) {
        return Err(Error::domain("rb", rb, "finite and > 0"));
    }
    if !(ra > 0.0 && ra.is_finite()) {
        return Err(Error::domain("ra", ra, "finite and > 0"));
    }
    Ok(())
}

/// `ln` of the z-kernel
/// `(1/sinh z) e^{-κ(r_b+r_a) coth z} I_order(2κ√(r_b r_a)/sinh z)`.
pub fn ln_z_kernel(order: f64, kappa: f64, rb: f64, ra: f64, z: f64) -> f64 {
    let ln_s = ln_sinh(z);
    let inv_s = (-ln_s).exp();
    let d = (rb - ra) / (rb.sqrt() + ra.sqrt());
    let ln_x = (2.0 * kappa).ln() + 0.5 * (rb.ln() + ra.ln()) - ln_s;
    -ln_s - kappa * d * d * inv_s - kappa * (rb + ra) * (0.5 * z).tanh()
        + ln_i_scaled_from_ln_x(order, ln_x)
}

/// The kernel `h(z)` of channel `ch`, as `ln h` and sign (always `+`).
pub fn h_kernel(
    ch: ChannelIndex,
    p: &PhysicalParams,
    rb: f64,
    ra: f64,
    z: f64,
) -> Result<LogValue> {
    check_radii(rb, ra)?;
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::domain("z", z, "finite and > 0"));
    }
    let lambda = ch.lambda(&p.couplings());
    Ok(LogValue::positive(ln_z_kernel(
        lambda,
        p.kappa(),
        rb,
        ra,
        z,
    )))
}

/// Free radial kernel from the proper-time integral
/// `∫₀^∞ dS/S e^{-ℰS} e^{-(r_b²+r_a²)/2S} I_{λ/2}(r_b r_a/S)`.
pub fn g0_proper_time(
    ch: ChannelIndex,
    p: &PhysicalParams,
    rb: f64,
    ra: f64,
    spec: &QuadSpec,
) -> Result<EvalResult> {
    check_radii(rb, ra)?;
    let order = 0.5 * ch.lambda(&p.couplings());
    let script_e = p.script_e();
    let dr2 = (rb - ra) * (rb - ra);
    let ln_rr = rb.ln() + ra.ln();
    integrate_semiinf_log(
        |s| {
            let ln_s = s.ln();
            LogValue::positive(
                -ln_s - script_e * s - 0.5 * dr2 / s + ln_i_scaled_from_ln_x(order, ln_rr - ln_s),
            )
        },
        spec,
    )
}

/// Free radial kernel from the z-representation `2∫₀^∞ h(z) dz`.
pub fn g0_z_rep(
    ch: ChannelIndex,
    p: &PhysicalParams,
    rb: f64,
    ra: f64,
    spec: &QuadSpec,
) -> Result<EvalResult> {
    g_n_moment(ch, p, 0, rb, ra, spec)
}

fn g_n_moment(
    ch: ChannelIndex,
    p: &PhysicalParams,
    n: u32,
    rb: f64,
    ra: f64,
    spec: &QuadSpec,
) -> Result<EvalResult> {
    check_radii(rb, ra)?;
    let lambda = ch.lambda(&p.couplings());
    let kappa = p.kappa();
    let r = integrate_moment(
        |z| LogValue::positive(ln_z_kernel(lambda, kappa, rb, ra, z)),
        n,
        spec,
    )?;
    // 2^{n+1} / (n! κⁿ)
    let nf = n as f64;
    let factor = ((nf + 1.0) * LN_2 - ln_gamma_pos(nf + 1.0) - nf * kappa.ln()).exp();
    Ok(EvalResult {
        value: factor * r.value,
        err_estimate: factor * r.err_estimate,
        ..r
    })
}

/// Order-`n` radial term `g⁽ⁿ⁾ = 2^{n+1}/(n! κⁿ) ∫₀^∞ zⁿ h(z) dz`.
///
/// Refused at or beyond the first pole `ν ≥ (1+λ)/2`, where the series these
/// terms build no longer converges.
pub fn g_n_closed(
    ch: ChannelIndex,
    p: &PhysicalParams,
    n: u32,
    rb: f64,
    ra: f64,
    spec: &QuadSpec,
) -> Result<EvalResult> {
    ch.require_below_first_pole(p)?;
    g_n_moment(ch, p, n, rb, ra, spec)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesTerm {
    pub n: u32,
    /// `(Eα)ⁿ g⁽ⁿ⁾ / √(r_b r_a)`
    pub term: f64,
    pub partial_sum: f64,
    pub err_estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialSeries {
    pub terms: Vec<SeriesTerm>,
    /// `|last term| / |partial sum|`, the remainder proxy.
    pub remainder: f64,
}

impl RadialSeries {
    pub fn sum(&self) -> f64 {
        self.terms.last().map_or(0.0, |t| t.partial_sum)
    }
}

/// Partial sums `S_0 ... S_{n_max}` of
/// `G = (r_b r_a)^{-1/2} Σ_n (Eα)ⁿ g⁽ⁿ⁾(r_b, r_a)`.
pub fn radial_series(
    ch: ChannelIndex,
    p: &PhysicalParams,
    rb: f64,
    ra: f64,
    n_max: u32,
    spec: &QuadSpec,
) -> Result<RadialSeries> {
    series_until(ch, p, rb, ra, n_max, 0.0, spec)
}

/// Like [`radial_series`] but stops early once the remainder proxy drops
/// below `remainder_tol`.
pub fn radial_series_to_tolerance(
    ch: ChannelIndex,
    p: &PhysicalParams,
    rb: f64,
    ra: f64,
    remainder_tol: f64,
    n_cap: u32,
    spec: &QuadSpec,
) -> Result<RadialSeries> {
    series_until(ch, p, rb, ra, n_cap, remainder_tol, spec)
}

fn series_until(
    ch: ChannelIndex,
    p: &PhysicalParams,
    rb: f64,
    ra: f64,
    n_max: u32,
    remainder_tol: f64,
    spec: &QuadSpec,
) -> Result<RadialSeries> {
    ch.require_below_first_pole(p)?;
    let coupling = p.expansion_parameter();
    let prefactor = 1.0 / (rb * ra).sqrt();
    let mut terms = Vec::with_capacity(n_max as usize + 1);
    let mut sum = 0.0;
    let mut err = 0.0;
    let mut remainder = f64::INFINITY;
    for n in 0..=n_max {
        let term = if n > 0 && coupling == 0.0 {
            EvalResult::exact(0.0)
        } else {
            let g = g_n_moment(ch, p, n, rb, ra, spec)?;
            let c = prefactor * coupling.powi(n as i32);
            EvalResult {
                value: c * g.value,
                err_estimate: c * g.err_estimate,
                ..g
            }
        };
        sum += term.value;
        err += term.err_estimate;
        remainder = (term.value / sum).abs();
        terms.push(SeriesTerm {
            n,
            term: term.value,
            partial_sum: sum,
            err_estimate: err,
        });
        if remainder < remainder_tol || (n > 0 && coupling == 0.0) {
            break;
        }
    }
    Ok(RadialSeries { terms, remainder })
}

/// Resummed channel function
/// `G = 2(r_b r_a)^{-1/2} ∫₀^∞ e^{2νz} h(z) dz`, valid for `ν < (1+λ)/2`.
pub fn radial_integral(
    ch: ChannelIndex,
    p: &PhysicalParams,
    rb: f64,
    ra: f64,
    spec: &QuadSpec,
) -> Result<EvalResult> {
    check_radii(rb, ra)?;
    ch.require_below_first_pole(p)?;
    let lambda = ch.lambda(&p.couplings());
    let r = whittaker_integral(p.nu(), lambda, 2.0 * p.kappa(), rb, ra, spec)?;
    let c = 2.0 / (rb * ra).sqrt();
    Ok(EvalResult {
        value: c * r.value,
        err_estimate: c * r.err_estimate,
        ..r
    })
}

/// Closed channel function
/// `G = 1/(r_b r_a κ) · Γ((1+λ)/2-ν)/Γ(1+λ) · W_{ν,λ/2}(2κr_>) M_{ν,λ/2}(2κr_<)`.
pub fn radial_closed(ch: ChannelIndex, p: &PhysicalParams, rb: f64, ra: f64) -> Result<f64> {
    Ok(ln_radial_closed(ch, p, rb, ra)?.exp())
}

pub(crate) fn ln_radial_closed(
    ch: ChannelIndex,
    p: &PhysicalParams,
    rb: f64,
    ra: f64,
) -> Result<f64> {
    check_radii(rb, ra)?;
    ch.require_below_first_pole(p)?;
    let lambda = ch.lambda(&p.couplings());
    let kappa = p.kappa();
    let ln_wm = ln_whittaker_product(p.nu(), lambda, 2.0 * kappa, rb, ra)?;
    // the product form carries 1/(t√(ζ_bζ_a)) = 1/(2κ√(r_b r_a)); G needs 2/√(r_b r_a) times it
    Ok(LN_2 - 0.5 * (rb.ln() + ra.ln()) + ln_wm)
}

/// `∫₀^∞ dy e^{2νy}/sinh y · exp[-(t/2)(ζ_a+ζ_b) coth y] I_μ(t√(ζ_bζ_a)/sinh y)`
/// by quadrature.
pub fn whittaker_integral(
    nu: f64,
    mu: f64,
    t: f64,
    zeta_b: f64,
    zeta_a: f64,
    spec: &QuadSpec,
) -> Result<EvalResult> {
    if !(0.5 * (1.0 + mu) - nu > 0.0) {
        return Err(Error::domain("(1+mu)/2 - nu", 0.5 * (1.0 + mu) - nu, "> 0"));
    }
    if !(t > 0.0) {
        return Err(Error::domain("t", t, "> 0"));
    }
    let half_t = 0.5 * t;
    integrate_semiinf_log(
        |y| LogValue::positive(2.0 * nu * y + ln_z_kernel(mu, half_t, zeta_b, zeta_a, y)),
        spec,
    )
}

/// Closed form of [`whittaker_integral`]:
/// `Γ((1+μ)/2-ν) / (t√(ζ_bζ_a) Γ(μ+1)) · W_{ν,μ/2}(tζ_>) M_{ν,μ/2}(tζ_<)`.
pub fn whittaker_product(nu: f64, mu: f64, t: f64, zeta_b: f64, zeta_a: f64) -> Result<f64> {
    Ok(ln_whittaker_product(nu, mu, t, zeta_b, zeta_a)?.exp())
}

fn ln_whittaker_product(nu: f64, mu: f64, t: f64, zeta_b: f64, zeta_a: f64) -> Result<f64> {
    let a = 0.5 * (1.0 + mu) - nu;
    if !(a > 0.0) {
        return Err(Error::domain("(1+mu)/2 - nu", a, "> 0"));
    }
    if !(t > 0.0 && zeta_b > 0.0 && zeta_a > 0.0) {
        return Err(Error::domain("t*zeta", t * zeta_b.min(zeta_a), "> 0"));
    }
    let (hi, lo) = if zeta_b >= zeta_a {
        (zeta_b, zeta_a)
    } else {
        (zeta_a, zeta_b)
    };
    let ln_w = ln_whittaker_w(nu, 0.5 * mu, t * hi)?;
    let ln_m = ln_whittaker_m(nu, 0.5 * mu, t * lo)?;
    Ok(ln_gamma_pos(a) - ln_gamma_pos(mu + 1.0) - t.ln() - 0.5 * (hi.ln() + lo.ln()) + ln_w + ln_m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn derived_quantities() {
        let p = PhysicalParams::new(0.3, 0.0, 0.5).unwrap();
        assert!((p.kappa() - 0.75f64.sqrt()).abs() < 1e-16);
        assert!((p.script_e() - 0.375).abs() < 1e-16);
        assert!((p.nu() - 0.15 / 0.75f64.sqrt()).abs() < 1e-16);
        let ch = ChannelIndex::new(0, 0);
        assert!((ch.lambda(&p.couplings()) - 0.8).abs() < 1e-15);
    }

    #[test]
    fn flux_accessors() {
        let c = Couplings::new(0.25, 0.3).unwrap();
        let flux = c.flux().unwrap();
        assert!((flux + 2.0 * PI * 0.3 / 0.5).abs() < 1e-14);
        // β₀ = -2eg with e = √α
        let g = c.coupling_g().unwrap();
        assert!((-2.0 * 0.5 * g - 0.3).abs() < 1e-15);
        assert!(Couplings::new(0.0, 0.3).unwrap().flux().is_none());
    }

    #[test]
    fn params_validation() {
        assert!(PhysicalParams::new(0.5, 0.0, 0.5).is_err());
        assert!(PhysicalParams::new(-0.1, 0.0, 0.5).is_err());
        assert!(PhysicalParams::new(0.1, f64::NAN, 0.5).is_err());
        assert!(PhysicalParams::new(0.1, 0.0, 1.0).is_err());
        assert!(PhysicalParams::new(0.1, 0.0, 0.0).is_err());
        assert!(PhysicalParams::new(0.0, 0.0, 0.3).is_ok());
    }

    #[test]
    fn lambda_at_zero_coupling_is_odd_integer() {
        let c = Couplings::new(0.0, 0.0).unwrap();
        for (q, k) in [(0, 0), (2, -1), (3, 4)] {
            let ch = ChannelIndex::new(q, k);
            let l = q as f64 + k.unsigned_abs() as f64;
            assert_eq!(ch.lambda(&c), 2.0 * l + 1.0);
        }
    }

    #[test]
    fn kernel_large_z_slope() {
        // ln h ≈ -(1+λ) z + const
        let p = PhysicalParams::new(0.1, 0.3, 0.8).unwrap();
        let ch = ChannelIndex::new(1, -2);
        let lambda = ch.lambda(&p.couplings());
        let (z1, z2) = (30.0, 40.0);
        let h1 = h_kernel(ch, &p, 2.0, 1.0, z1).unwrap().ln_abs;
        let h2 = h_kernel(ch, &p, 2.0, 1.0, z2).unwrap().ln_abs;
        assert!(((h2 - h1) / (z2 - z1) + 1.0 + lambda).abs() < 1e-10);
    }

    #[test]
    fn kernel_small_z_essential_decay() {
        let p = PhysicalParams::new(0.1, 0.0, 0.8).unwrap();
        let ch = ChannelIndex::new(0, 0);
        let (rb, ra) = (2.0_f64, 1.0_f64);
        let c = p.kappa() * (rb.sqrt() - ra.sqrt()).powi(2);
        let z = 1e-5;
        let h = h_kernel(ch, &p, rb, ra, z).unwrap().ln_abs;
        // leading behaviour -c/z with an O(ln z) correction
        assert!((h * z + c).abs() < 1e-2 * c);
        let deep = h_kernel(ch, &p, rb, ra, 1e-12).unwrap();
        assert!(deep.value() == 0.0);
    }

    #[test]
    fn kernel_matches_direct_evaluation() {
        // α = 0, channel (0,0): λ = 1, so the Bessel factor is I₁ in closed form
        let p = PhysicalParams::new(0.0, 0.0, 0.9).unwrap();
        let (rb, ra, z) = (2.0_f64, 1.0_f64, 1.0_f64);
        let kappa = p.kappa();
        let x = 2.0 * kappa * (rb * ra).sqrt() / z.sinh();
        // I₁ by its power series
        let mut i1 = 0.0;
        let mut t = 0.5 * x;
        for k in 0..40 {
            i1 += t;
            t *= 0.25 * x * x / ((k + 1) as f64 * (k + 2) as f64);
        }
        let direct = (-kappa * (rb + ra) / z.tanh()).exp() / z.sinh() * i1;
        let got = h_kernel(ChannelIndex::new(0, 0), &p, rb, ra, z)
            .unwrap()
            .value();
        assert!(got > 0.0);
        assert!(rel(got, direct) < 1e-13);
    }

    #[test]
    fn pole_refusal() {
        // α = 0.3, channel (0,0): first pole at E = √0.9
        let e0 = 0.9f64.sqrt();
        let ch = ChannelIndex::new(0, 0);
        let at = PhysicalParams::new(0.3, 0.0, e0).unwrap();
        match ch.require_below_first_pole(&at) {
            Err(Error::Pole { n_r: 0, .. }) => {}
            other => panic!("{other:?}"),
        }
        let beyond = PhysicalParams::new(0.3, 0.0, 0.97).unwrap();
        assert!(matches!(
            radial_closed(ch, &beyond, 2.0, 1.0),
            Err(Error::Pole { .. })
        ));
        let below = PhysicalParams::new(0.3, 0.0, 0.9).unwrap();
        assert!(radial_closed(ch, &below, 2.0, 1.0).is_ok());
    }

    #[test]
    fn closed_form_symmetric_in_endpoints() {
        let p = PhysicalParams::new(1.0 / 137.0, 0.3, 0.5).unwrap();
        let ch = ChannelIndex::new(1, 2);
        let a = radial_closed(ch, &p, 2.0, 1.0).unwrap();
        let b = radial_closed(ch, &p, 1.0, 2.0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn expansion_parameter_bookkeeping() {
        // (Eα)ⁿ · 2^{n+1}/(n! κⁿ) = 2 (2ν)ⁿ / n!
        let p = PhysicalParams::new(0.3, 0.0, 0.5).unwrap();
        for n in 0..12u32 {
            let nf = n as f64;
            let lhs = p.expansion_parameter().powi(n as i32)
                * ((nf + 1.0) * LN_2 - ln_gamma_pos(nf + 1.0) - nf * p.kappa().ln()).exp();
            let rhs = 2.0 * (2.0 * p.nu()).powi(n as i32) / (1..=n).map(f64::from).product::<f64>();
            assert!(rel(lhs, rhs) < 1e-13, "n={n}");
        }
    }
}
