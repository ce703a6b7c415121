//! Confluent hypergeometric functions `M(a,b,z)`, `U(a,b,z)` and the
//! Whittaker functions built on them.

use super::gamma::{is_nonpositive_integer, ln_gamma_pos, recip_gamma};
use crate::error::{Error, Result};
use crate::quad::{integrate_finite_log, integrate_tail_log, LogValue, QuadSpec};

const MAX_TERMS: usize = 100_000;

/// Kummer's function `M(a, b, z)` by its ascending series.
///
/// Summation stops once three consecutive terms fall below `1e-16` of the
/// partial sum. For `a, b > 0` and `z ≥ 0` all terms are positive.
pub fn kummer_m(a: f64, b: f64, z: f64) -> Result<f64> {
    if is_nonpositive_integer(b) {
        return Err(Error::domain("b", b, "not a non-positive integer"));
    }
    if !(a.is_finite() && b.is_finite() && z.is_finite()) {
        return Err(Error::domain("z", z, "finite parameters"));
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut small = 0;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        term *= (a + nf) / (b + nf) * z / (nf + 1.0);
        sum += term;
        if term.abs() < 1e-16 * sum.abs() {
            small += 1;
            if small >= 3 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
        if !sum.is_finite() {
            break;
        }
    }
    Err(Error::NotConverged {
        what: "Kummer M series",
        value: sum,
        err_estimate: f64::INFINITY,
    })
}

fn u_quad_spec() -> QuadSpec {
    QuadSpec::default().with_rel_tol(1e-13).with_abs_tol(1e-300)
}

/// Tricomi's `U(a, b, z)` for `a > 0`, `z > 0`, from
/// `Γ(a) U = ∫₀^∞ e^{-zt} t^{a-1} (1+t)^{b-a-1} dt`.
///
/// For `a < 1` the endpoint behaviour `t^{a-1}` is integrated analytically:
/// with `g(t) = e^{-zt}(1+t)^{b-a-1}`,
/// `∫₀¹ t^{a-1} g = 1/a + ∫₀¹ t^{a-1}(g - 1)`, which stays accurate as `a → 0`.
pub fn kummer_u(a: f64, b: f64, z: f64) -> Result<f64> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::domain("a", a, "> 0"));
    }
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::domain("z", z, "> 0"));
    }
    if !b.is_finite() {
        return Err(Error::domain("b", b, "finite"));
    }
    let c = b - a - 1.0;
    let spec = u_quad_spec();
    let ln_gamma_a = ln_gamma_pos(a);

    if a >= 1.0 {
        let r = integrate_tail_log(
            0.0,
            |t, _| LogValue::positive((a - 1.0) * t.ln() + c * t.ln_1p() - z * t - ln_gamma_a),
            &spec,
        )?
        .require_converged("Kummer U integral")?;
        return Ok(r.value);
    }

    // ∫₀¹ t^{a-1} (g(t) - 1) dt
    let head = integrate_finite_log(
        |n| {
            let t = n.gap_lo;
            let g_minus_1 = (-z * t + c * t.ln_1p()).exp_m1();
            let v = LogValue::from_value(g_minus_1);
            LogValue {
                ln_abs: v.ln_abs + (a - 1.0) * t.ln(),
                sign: v.sign,
            }
        },
        0.0,
        1.0,
        &spec,
    )?
    .require_converged("Kummer U head integral")?;
    // ∫₁^∞ t^{a-1} g(t) dt
    let tail = integrate_tail_log(
        1.0,
        |t, _| LogValue::positive((a - 1.0) * t.ln() + c * t.ln_1p() - z * t),
        &spec,
    )?
    .require_converged("Kummer U tail integral")?;
    Ok(recip_gamma(a + 1.0) + recip_gamma(a) * (head.value + tail.value))
}

/// Whittaker `M_{κ,μ}(z) = e^{-z/2} z^{μ+1/2} M(μ-κ+1/2, 1+2μ, z)`.
pub fn whittaker_m(kappa: f64, mu: f64, z: f64) -> Result<f64> {
    if !(z > 0.0) {
        return Err(Error::domain("z", z, "> 0"));
    }
    let m = kummer_m(mu - kappa + 0.5, 1.0 + 2.0 * mu, z)?;
    Ok(m * (-0.5 * z + (mu + 0.5) * z.ln()).exp())
}

/// Whittaker `W_{κ,μ}(z) = e^{-z/2} z^{μ+1/2} U(μ-κ+1/2, 1+2μ, z)`, for `μ-κ+1/2 > 0`.
pub fn whittaker_w(kappa: f64, mu: f64, z: f64) -> Result<f64> {
    Ok(ln_whittaker_w(kappa, mu, z)?.exp())
}

/// `ln M_{κ,μ}(z)`; requires `M_{κ,μ}(z) > 0` (true when `μ-κ+1/2 > 0`).
pub(crate) fn ln_whittaker_m(kappa: f64, mu: f64, z: f64) -> Result<f64> {
    if !(z > 0.0) {
        return Err(Error::domain("z", z, "> 0"));
    }
    let m = kummer_m(mu - kappa + 0.5, 1.0 + 2.0 * mu, z)?;
    if !(m > 0.0) {
        return Err(Error::domain("M", m, "> 0 for the log form"));
    }
    Ok(m.ln() - 0.5 * z + (mu + 0.5) * z.ln())
}

pub(crate) fn ln_whittaker_w(kappa: f64, mu: f64, z: f64) -> Result<f64> {
    if !(z > 0.0) {
        return Err(Error::domain("z", z, "> 0"));
    }
    let u = kummer_u(mu - kappa + 0.5, 1.0 + 2.0 * mu, z)?;
    Ok(u.ln() - 0.5 * z + (mu + 0.5) * z.ln())
}
