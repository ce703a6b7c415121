//! Batteries of numerical identity checks.
//!
//! Every check compares two independently computed numbers and records both,
//! the error metric and the threshold. Nothing here depends on wall-clock time
//! or thread scheduling, so a given suite always produces identical records.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::angular::SpacePoint;
use crate::error::Result;
use crate::greens::{
    bound_energies, greens_function, klein_gordon_energy, pole_scan, TruncationSpec,
};
use crate::quad::{
    integrate_finite, integrate_finite_log, integrate_semiinf_log, integrate_tail_log, EvalResult,
    LogValue, QuadSpec,
};
use crate::radial::{
    g0_proper_time, g0_z_rep, g_n_closed, radial_closed, radial_integral,
    radial_series_to_tolerance, whittaker_integral, whittaker_product, ChannelIndex, Couplings,
    PhysicalParams,
};
use crate::specfun::{
    assoc_legendre, bessel_i, bessel_i_log, bessel_k_scaled, jacobi_p, ln_gamma_pos, RealOrder,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Identities,
    Routes,
    Spectrum,
    Gauge,
    All,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Identities,
        Suite::Routes,
        Suite::Spectrum,
        Suite::Gauge,
        Suite::All,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Routes => "routes",
            Suite::Spectrum => "spectrum",
            Suite::Gauge => "gauge",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite '{s}'"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Abs,
    Rel,
}

/// One comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub suite: String,
    pub check: String,
    pub case: String,
    pub lhs: f64,
    pub rhs: f64,
    pub metric: Metric,
    pub error: f64,
    pub threshold: f64,
    pub passed: bool,
}

struct Recorder<'a> {
    suite: &'static str,
    tol: Option<f64>,
    out: &'a mut Vec<CheckRecord>,
}

impl Recorder<'_> {
    fn push(
        &mut self,
        check: &str,
        case: String,
        lhs: f64,
        rhs: f64,
        metric: Metric,
        threshold: f64,
    ) {
        let error = match metric {
            Metric::Abs => (lhs - rhs).abs(),
            Metric::Rel => ((lhs - rhs) / rhs).abs(),
        };
        let threshold = self.tol.unwrap_or(threshold);
        self.out.push(CheckRecord {
            suite: self.suite.to_string(),
            check: check.to_string(),
            case,
            lhs,
            rhs,
            metric,
            error,
            threshold,
            passed: error <= threshold,
        });
    }

    /// Records a precomputed error (used where the two sides are not scalars).
    fn push_error(
        &mut self,
        check: &str,
        case: String,
        error: f64,
        metric: Metric,
        threshold: f64,
    ) {
        let threshold = self.tol.unwrap_or(threshold);
        self.out.push(CheckRecord {
            suite: self.suite.to_string(),
            check: check.to_string(),
            case,
            lhs: error,
            rhs: 0.0,
            metric,
            error,
            threshold,
            passed: error <= threshold,
        });
    }
}

/// Runs one suite. `tol` replaces every per-check threshold when given.
pub fn run_suite(suite: Suite, tol: Option<f64>, quad: &QuadSpec) -> Result<Vec<CheckRecord>> {
    quad.validate()?;
    let mut out = Vec::new();
    let parts: &[Suite] = match suite {
        Suite::All => &[
            Suite::Identities,
            Suite::Routes,
            Suite::Spectrum,
            Suite::Gauge,
        ],
        _ => std::slice::from_ref(&suite),
    };
    for &s in parts {
        let mut rec = Recorder {
            suite: s.name(),
            tol,
            out: &mut out,
        };
        match s {
            Suite::Identities => identities(&mut rec, quad)?,
            Suite::Routes => routes(&mut rec, quad)?,
            Suite::Spectrum => spectrum(&mut rec)?,
            Suite::Gauge => gauge(&mut rec)?,
            Suite::All => unreachable!(),
        }
    }
    Ok(out)
}

pub const LEGENDRE_ANGLES: [f64; 4] = [0.3, 1.1, 2.0, 2.9];

/// `max |P_l^k(cos θ) - (-1)^k Γ(1+k+l)/Γ(1+l) (cos θ/2 sin θ/2)^k P_{l-k}^{(k,k)}(cos θ)|`
/// over `l ≤ l_max`, `0 ≤ k ≤ l`, with both sides multiplied by
/// `√((l-k)!/(l+k)!)`.
///
/// Unscaled, `P_10^10` reaches `~10⁸`, where one ulp is already `~10⁻⁸`; the
/// common scale factor brings every value to order one so an absolute
/// tolerance means the same thing for every `(l, k)`.
pub fn legendre_jacobi_max_error(l_max: u32, theta: f64) -> Result<f64> {
    let x = theta.cos();
    let half = (0.5 * theta).cos() * (0.5 * theta).sin();
    let mut worst: f64 = 0.0;
    for l in 0..=l_max {
        for k in 0..=l {
            let lhs = assoc_legendre(l, k as i32, x)?;
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let ln_ratio = ln_gamma_pos((1 + k + l) as f64) - ln_gamma_pos((1 + l) as f64);
            let ln_scale =
                0.5 * (ln_gamma_pos((1 + l - k) as f64) - ln_gamma_pos((1 + l + k) as f64));
            let rhs = sign * ln_ratio.exp() * half.powi(k as i32) * jacobi_p(l - k, k as f64, x)?;
            worst = worst.max(((lhs - rhs) * ln_scale.exp()).abs());
        }
    }
    Ok(worst)
}

/// Closed norm `2^{2a+1}/(2a+2n+1) · Γ(a+n+1)² / (n! Γ(2a+n+1))` of `P_n^{(a,a)}`.
pub fn jacobi_norm(n: u32, a: f64) -> f64 {
    let n = n as f64;
    ((2.0 * a + 1.0) * std::f64::consts::LN_2 - (2.0 * a + 2.0 * n + 1.0).ln()
        + 2.0 * ln_gamma_pos(a + n + 1.0)
        - ln_gamma_pos(n + 1.0)
        - ln_gamma_pos(2.0 * a + n + 1.0))
    .exp()
}

/// `∫_{-1}^{1} (1-x²)^a P_n^{(a,a)} P_m^{(a,a)} dx` by tanh-sinh.
pub fn jacobi_inner_product(n: u32, m: u32, a: f64, quad: &QuadSpec) -> Result<f64> {
    let r = integrate_finite(
        |x| {
            let w = ((1.0 - x) * (1.0 + x)).powf(a);
            w * crate::specfun::jacobi_unchecked(n, a, x)
                * crate::specfun::jacobi_unchecked(m, a, x)
        },
        -1.0,
        1.0,
        quad,
    )?;
    Ok(r.value)
}

/// Both sides of
/// `∫₀^∞ r e^{-r²/a} I_ν(ςr) I_ν(ξr) dr = (a/2) e^{a(ξ²+ς²)/4} I_ν(aξς/2)`.
pub fn bessel_gaussian_sides(
    nu: f64,
    a: f64,
    vs: f64,
    xi: f64,
    quad: &QuadSpec,
) -> Result<(f64, f64)> {
    let order = RealOrder::new(nu)?;
    let lhs = integrate_semiinf_log(
        |r| {
            let li = |c: f64| bessel_i_log(order, c * r).unwrap_or(f64::NEG_INFINITY);
            LogValue::positive(r.ln() - r * r / a + li(vs) + li(xi))
        },
        quad,
    )?
    .value;
    let rhs = 0.5 * a * (a * (xi * xi + vs * vs) / 4.0).exp() * bessel_i(order, 0.5 * a * xi * vs)?;
    Ok((lhs, rhs))
}

/// Parameter sets `(ν, μ, t, ζ_b, ζ_a)` with `(1+μ)/2 > ν` and `ζ_b > ζ_a`.
pub const WHITTAKER_SETS: [(f64, f64, f64, f64, f64); 3] = [
    (0.3, 0.8, 1.0, 2.0, 1.0),
    (0.05, 2.5, 0.6, 5.0, 0.5),
    (1.2, 3.1, 1.5, 1.3, 0.9),
];

fn identities(rec: &mut Recorder, quad: &QuadSpec) -> Result<()> {
    for theta in LEGENDRE_ANGLES {
        let err = legendre_jacobi_max_error(10, theta)?;
        rec.push_error(
            "legendre_jacobi",
            format!("l<=10 theta={theta}"),
            err,
            Metric::Abs,
            1e-12,
        );
    }

    for a in [0.3, 1.7] {
        let mut off: f64 = 0.0;
        for n in 0..=8 {
            for m in 0..n {
                off = off.max(jacobi_inner_product(n, m, a, quad)?.abs());
            }
            let diag = jacobi_inner_product(n, n, a, quad)?;
            rec.push(
                "jacobi_orthogonality",
                format!("a={a} n=m={n}"),
                diag,
                jacobi_norm(n, a),
                Metric::Rel,
                1e-10,
            );
        }
        rec.push_error(
            "jacobi_orthogonality",
            format!("a={a} off-diagonal n,m<=8"),
            off,
            Metric::Abs,
            1e-10,
        );
    }

    for (rb, ra) in G0_RADII {
        for energy in [0.5, 0.9] {
            for (q, k) in [(0u32, 0i64), (1, 2)] {
                for beta0 in [0.0, 0.3] {
                    let p = PhysicalParams::new(1.0 / 137.0, beta0, energy)?;
                    let ch = ChannelIndex::new(q, k);
                    let lhs = g0_proper_time(ch, &p, rb, ra, quad)?.value;
                    let rhs = g0_z_rep(ch, &p, rb, ra, quad)?.value;
                    rec.push(
                        "proper_time_z_representation",
                        format!("rb={rb} ra={ra} E={energy} q={q} k={k} beta0={beta0}"),
                        lhs,
                        rhs,
                        Metric::Rel,
                        1e-8,
                    );
                }
            }
        }
    }

    for nu in [0.5, 1.7] {
        for a in [0.5, 2.0] {
            for (vs, xi) in [(0.3, 1.2), (1.2, 0.3), (0.3, 0.3), (1.2, 1.2)] {
                let (lhs, rhs) = bessel_gaussian_sides(nu, a, vs, xi, quad)?;
                rec.push(
                    "bessel_gaussian_integral",
                    format!("nu={nu} a={a} varsigma={vs} xi={xi}"),
                    lhs,
                    rhs,
                    Metric::Rel,
                    1e-9,
                );
            }
        }
    }

    for (nu, mu, t, zb, za) in WHITTAKER_SETS {
        let lhs = whittaker_integral(nu, mu, t, zb, za, quad)?.value;
        let rhs = whittaker_product(nu, mu, t, zb, za)?;
        rec.push(
            "whittaker_integral",
            format!("nu={nu} mu={mu} t={t} zeta_b={zb} zeta_a={za}"),
            lhs,
            rhs,
            Metric::Rel,
            1e-8,
        );
    }
    Ok(())
}

/// Free radial kernel in closed form, `g⁽⁰⁾ = 2 I_{λ/2}(κr_<) K_{λ/2}(κr_>)`.
///
/// Used only as the building block of the convolution oracle, which
/// integrates it directly in `r` without going through the z-kernel.
pub fn g0_bessel(order: RealOrder, kappa: f64, r1: f64, r2: f64) -> Result<f64> {
    let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
    let ln = std::f64::consts::LN_2 + bessel_i_log(order, kappa * lo)? - kappa * hi
        + bessel_k_scaled(order, kappa * hi)?.ln();
    Ok(ln.exp())
}

/// `∫₀^∞ f(r) dr` split at the kinks `cuts` of the integrand: tanh-sinh on
/// each finite piece and exp-sinh on the tail.
fn integrate_with_cuts(
    f: impl Fn(f64) -> f64,
    cuts: &[f64],
    quad: &QuadSpec,
) -> Result<EvalResult> {
    let mut pts: Vec<f64> = cuts.to_vec();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let mut value = 0.0;
    let mut err = 0.0;
    let mut converged = true;
    let mut refinements = 0;
    let mut lo = 0.0;
    for &hi in &pts {
        let r = integrate_finite_log(|n| LogValue::from_value(f(n.x)), lo, hi, quad)?;
        value += r.value;
        err += r.err_estimate;
        converged &= r.converged;
        refinements = refinements.max(r.refinements_used);
        lo = hi;
    }
    let r = integrate_tail_log(lo, |x, _| LogValue::from_value(f(x)), quad)?;
    value += r.value;
    err += r.err_estimate;
    converged &= r.converged;
    Ok(EvalResult {
        value,
        err_estimate: err,
        refinements_used: refinements.max(r.refinements_used),
        converged,
    })
}

/// `g⁽¹⁾(r_b, r_a) = ∫₀^∞ g⁽⁰⁾(r_b, r) g⁽⁰⁾(r, r_a) dr` by direct quadrature.
pub fn convolution_g1(
    ch: ChannelIndex,
    p: &PhysicalParams,
    rb: f64,
    ra: f64,
    quad: &QuadSpec,
) -> Result<EvalResult> {
    let order = RealOrder::new(0.5 * ch.lambda(&p.couplings()))?;
    let kappa = p.kappa();
    let g0 = |x: f64, y: f64| g0_bessel(order, kappa, x, y).unwrap_or(f64::NAN);
    integrate_with_cuts(|r| g0(rb, r) * g0(r, ra), &[rb, ra], quad)
}

/// `g⁽²⁾(r_b, r_a) = ∫∫ g⁽⁰⁾(r_b, r₁) g⁽⁰⁾(r₁, r₂) g⁽⁰⁾(r₂, r_a) dr₁ dr₂`
/// as two nested one-dimensional quadratures.
pub fn convolution_g2(
    ch: ChannelIndex,
    p: &PhysicalParams,
    rb: f64,
    ra: f64,
    quad: &QuadSpec,
) -> Result<EvalResult> {
    let order = RealOrder::new(0.5 * ch.lambda(&p.couplings()))?;
    let kappa = p.kappa();
    let g0 = |x: f64, y: f64| g0_bessel(order, kappa, x, y).unwrap_or(f64::NAN);
    let inner = |r2: f64| {
        integrate_with_cuts(|r1| g0(rb, r1) * g0(r1, r2), &[rb, r2], quad)
            .map_or(f64::NAN, |r| r.value)
    };
    integrate_with_cuts(|r2| inner(r2) * g0(r2, ra), &[rb, ra], quad)
}

/// Radius pairs used by the free-kernel route comparison.
pub const G0_RADII: [(f64, f64); 3] = [(2.0, 1.0), (5.0, 0.5), (1.2, 1.0)];

fn routes(rec: &mut Recorder, quad: &QuadSpec) -> Result<()> {
    let cases = [
        (1.0 / 137.0, 0.0, 0.5, 0u32, 0i64, 2.0, 1.0),
        (1.0 / 137.0, 0.3, 0.5, 0, 0, 2.0, 1.0),
        (0.3, 0.0, 0.5, 0, 0, 2.0, 1.0),
        (0.3, 0.3, 0.5, 1, -2, 1.5, 0.7),
        (0.3, 0.0, 0.9, 2, 1, 3.0, 0.4),
    ];
    for (alpha, beta0, energy, q, k, rb, ra) in cases {
        let p = PhysicalParams::new(alpha, beta0, energy)?;
        let ch = ChannelIndex::new(q, k);
        let case = format!("alpha={alpha} beta0={beta0} E={energy} q={q} k={k} rb={rb} ra={ra}");
        let closed = radial_closed(ch, &p, rb, ra)?;
        let integral = radial_integral(ch, &p, rb, ra, quad)?.value;
        rec.push(
            "integral_closed",
            case.clone(),
            integral,
            closed,
            Metric::Rel,
            1e-8,
        );
        let series = radial_series_to_tolerance(ch, &p, rb, ra, 1e-8, 200, quad)?;
        rec.push(
            "series_closed",
            case,
            series.sum(),
            closed,
            Metric::Rel,
            1e-6,
        );
    }

    for (alpha, beta0, energy, q, k, rb, ra) in CONVOLUTION_CASES {
        let p = PhysicalParams::new(alpha, beta0, energy)?;
        let ch = ChannelIndex::new(q, k);
        let case = format!("alpha={alpha} beta0={beta0} E={energy} q={q} k={k} rb={rb} ra={ra}");
        let g1 = g_n_closed(ch, &p, 1, rb, ra, quad)?.value;
        rec.push(
            "convolution_g1",
            case.clone(),
            g1,
            convolution_g1(ch, &p, rb, ra, quad)?.value,
            Metric::Rel,
            1e-6,
        );
        let g2 = g_n_closed(ch, &p, 2, rb, ra, quad)?.value;
        rec.push(
            "convolution_g2",
            case,
            g2,
            convolution_g2(ch, &p, rb, ra, quad)?.value,
            Metric::Rel,
            1e-5,
        );
    }
    Ok(())
}

/// `(α, β₀, E, q, k, r_b, r_a)` for the convolution oracle.
pub const CONVOLUTION_CASES: [(f64, f64, f64, u32, i64, f64, f64); 2] = [
    (0.3, 0.0, 0.9, 0, 0, 2.0, 1.0),
    (1.0 / 137.0, 0.3, 0.5, 1, 2, 1.5, 0.6),
];

/// Channels scanned by the spectrum suite.
pub const SPECTRUM_CHANNELS: [(u32, i64); 3] = [(0, 0), (1, 0), (0, 2)];

fn spectrum(rec: &mut Recorder) -> Result<()> {
    for alpha in [0.1, 0.3] {
        for beta0 in [0.0, 0.3] {
            let c = Couplings::new(alpha, beta0)?;
            for (q, k) in SPECTRUM_CHANNELS {
                let ch = ChannelIndex::new(q, k);
                let scan = pole_scan(ch, &c, 0.5, 0.999, 4000)?;
                if scan.poles.is_empty() {
                    continue;
                }
                let exact = bound_energies(ch, &c, scan.poles.last().map_or(0, |p| p.n_r))?;
                for d in &scan.poles {
                    rec.push(
                        "pole_scan_closed",
                        format!("alpha={alpha} beta0={beta0} q={q} k={k} n_r={}", d.n_r),
                        d.energy,
                        exact[d.n_r as usize].energy,
                        Metric::Abs,
                        1e-12,
                    );
                }
            }
        }
    }

    let c = Couplings::new(0.3, 0.0)?;
    let scan = pole_scan(ChannelIndex::new(0, 0), &c, 0.5, 0.999, 4000)?;
    let first = scan.poles.first().map_or(f64::NAN, |p| p.energy);
    rec.push(
        "first_level",
        "alpha=0.3 q=0 k=0".into(),
        first,
        0.9f64.sqrt(),
        Metric::Abs,
        1e-12,
    );

    let alpha = 1.0 / 137.0;
    let c = Couplings::new(alpha, 0.0)?;
    for (q, k) in [(0u32, 0i64), (1, 1), (2, -3)] {
        let ch = ChannelIndex::new(q, k);
        let l = q + k.unsigned_abs() as u32;
        let lh = l as f64 + 0.5;
        rec.push(
            "klein_gordon_order",
            format!("alpha=1/137 q={q} k={k}"),
            0.5 * ch.lambda(&c),
            ((lh - alpha) * (lh + alpha)).sqrt(),
            Metric::Rel,
            1e-14,
        );
        for s in bound_energies(ch, &c, 3)? {
            rec.push(
                "klein_gordon_levels",
                format!("alpha=1/137 q={q} k={k} n_r={}", s.n_r),
                s.energy,
                klein_gordon_energy(s.n_r, l, alpha),
                Metric::Abs,
                1e-14,
            );
        }
    }
    Ok(())
}

/// The endpoint pair used by the gauge suite and its documentation.
pub fn gauge_points() -> (SpacePoint, SpacePoint) {
    (
        SpacePoint::new(2.0, 1.0, 0.0).expect("valid point"),
        SpacePoint::new(1.0, 2.0, 1.5).expect("valid point"),
    )
}

fn gauge(rec: &mut Recorder) -> Result<()> {
    let (b, a) = gauge_points();
    let trunc = TruncationSpec::fixed(20, 25);
    for (beta0, n) in [(0.3, 1i64), (0.3, -2), (0.0, 1)] {
        let p = PhysicalParams::new(0.0073, beta0, 0.9)?;
        let g = greens_function(&b, &a, &p, &trunc)?.value;
        let gs = greens_function(&b, &a, &p.with_beta0(beta0 + n as f64)?, &trunc)?.value;
        let want = g * Complex64::from_polar(1.0, -(n as f64) * (b.phi() - a.phi()));
        let err = (gs - want).norm() / want.norm();
        rec.push_error(
            "gauge_shift",
            format!("beta0={beta0} n={n}"),
            err,
            Metric::Rel,
            1e-8,
        );
    }
    // endpoint swap conjugates the total
    let p = PhysicalParams::new(0.0073, 0.3, 0.9)?;
    let g = greens_function(&b, &a, &p, &trunc)?.value;
    let swapped = greens_function(&a, &b, &p, &trunc)?.value;
    // i/2 is odd under conjugation: G(a,b) = -conj(G(b,a))
    let err = (swapped + g.conj()).norm() / g.norm();
    rec.push_error("endpoint_swap", "beta0=0.3".into(), err, Metric::Rel, 1e-12);
    Ok(())
}
