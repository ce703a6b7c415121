//! Modified Bessel functions `I_ν` and `K_ν` of real order `ν ≥ 0`.
//!
//! `I_ν` is evaluated in log space: the ascending series (all terms positive,
//! so no cancellation) for `x < max(35, 2ν²)`, the Hankel large-argument
//! expansion beyond. The scaled form `ln I_ν(x) - x` is what the kernel
//! integrands consume, since their exponents cancel the growth `e^x`
//! analytically.
//!
//! `K_ν` uses Temme's series for `x < 2` and Steed's continued fraction
//! otherwise, at the reduced order `|μ| ≤ 1/2`, followed by upward recurrence.

use std::f64::consts::{LN_10, LN_2, PI};

use serde::{Deserialize, Serialize};

use super::gamma::ln_gamma_pos;
use crate::error::{Error, Result};

/// Order of a Bessel function or parameter of a Jacobi polynomial: finite and non-negative.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct RealOrder(f64);

impl RealOrder {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value >= 0.0 {
            Ok(Self(value))
        } else {
            Err(Error::domain("order", value, "finite and >= 0"))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

fn hankel_threshold(nu: f64) -> f64 {
    (2.0 * nu * nu).max(35.0)
}

/// `ln Σ_k (x²/4)^k / (k! (ν+1)_k)`, rescaled to stay finite.
fn ln_ascending_sum(nu: f64, x: f64) -> f64 {
    const RESCALE: f64 = 1e250;
    let q = 0.25 * x * x;
    let mut term = 1.0;
    // terms k ≥ 1; the leading 1 is added through ln_1p so small x keeps full accuracy
    let mut tail = 0.0;
    let mut ln_scale = 0.0;
    let mut k = 0.0;
    loop {
        k += 1.0;
        let ratio = q / (k * (nu + k));
        term *= ratio;
        tail += term;
        if tail > RESCALE {
            tail /= RESCALE;
            term /= RESCALE;
            ln_scale += 250.0 * LN_10;
        }
        if ratio < 1.0 && term <= 1e-17 * tail {
            break;
        }
    }
    if ln_scale == 0.0 {
        tail.ln_1p()
    } else {
        ln_scale + tail.ln()
    }
}

/// `ln Σ_k (-1)^k a_k(ν) / x^k`, truncated at the smallest term.
fn ln_hankel_sum(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut term = 1.0_f64;
    let mut sum = 1.0;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        let next = -term * (mu - odd * odd) / (8.0 * k as f64 * x);
        if next.abs() > term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum.ln()
}

/// `ln I_ν(x)` for `x > 0`.
fn ln_i(nu: f64, x: f64) -> f64 {
    if x >= hankel_threshold(nu) {
        x - 0.5 * (2.0 * PI * x).ln() + ln_hankel_sum(nu, x)
    } else {
        ln_i_series(nu, x)
    }
}

fn ln_i_series(nu: f64, x: f64) -> f64 {
    let lead = if nu == 0.0 { 0.0 } else { nu * (0.5 * x).ln() };
    lead - ln_gamma_pos(nu + 1.0) + ln_ascending_sum(nu, x)
}

/// `ln I_ν(x) - x` for `x > 0`.
pub(crate) fn ln_i_scaled(nu: f64, x: f64) -> f64 {
    debug_assert!(x > 0.0 && nu >= 0.0);
    if x >= hankel_threshold(nu) {
        -0.5 * (2.0 * PI * x).ln() + ln_hankel_sum(nu, x)
    } else {
        ln_i_series(nu, x) - x
    }
}

/// `ln I_ν(x)` with the argument given as `ln x`, valid even when `x`
/// underflows (only the leading power survives there).
pub(crate) fn ln_i_from_ln_x(nu: f64, ln_x: f64) -> f64 {
    if ln_x < -300.0 {
        if nu == 0.0 {
            return 0.0;
        }
        return nu * (ln_x - LN_2) - ln_gamma_pos(nu + 1.0);
    }
    ln_i(nu, ln_x.exp())
}

/// `ln I_ν(x) - x` with the argument given as `ln x`.
pub(crate) fn ln_i_scaled_from_ln_x(nu: f64, ln_x: f64) -> f64 {
    if ln_x < -300.0 {
        ln_i_from_ln_x(nu, ln_x)
    } else {
        ln_i_scaled(nu, ln_x.exp())
    }
}

/// `ln I_ν(x)` for `x > 0`.
pub fn bessel_i_log(order: RealOrder, x: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::domain("x", x, "finite and > 0"));
    }
    Ok(ln_i(order.get(), x))
}

/// `I_ν(x)` for `x ≥ 0`; overflows to infinity past `x ≈ 713`.
pub fn bessel_i(order: RealOrder, x: f64) -> Result<f64> {
    if x == 0.0 {
        return Ok(if order.get() == 0.0 { 1.0 } else { 0.0 });
    }
    bessel_i_log(order, x).map(f64::exp)
}

// Taylor coefficients of 1/Γ(z) about 0: 1/Γ(z) = Σ c[k] z^{k+1}.
const RGAMMA_TAYLOR: [f64; 26] = [
    1.0,
    0.577_215_664_901_532_86,
    -0.655_878_071_520_253_88,
    -0.042_002_635_034_095_236,
    0.166_538_611_382_291_49,
    -0.042_197_734_555_544_337,
    -0.009_621_971_527_876_973_6,
    0.007_218_943_246_663_099_5,
    -0.001_165_167_591_859_065_1,
    -0.000_215_241_674_114_950_97,
    0.000_128_050_282_388_116_19,
    -0.000_020_134_854_780_788_239,
    -1.250_493_482_142_670_7e-6,
    1.133_027_231_981_695_9e-6,
    -2.056_338_416_977_607_1e-7,
    6.116_095_104_481_415_8e-9,
    5.002_007_644_469_222_9e-9,
    -1.181_274_570_487_020_1e-9,
    1.043_426_711_691_100_5e-10,
    7.782_263_439_905_071_3e-12,
    -3.696_805_618_642_205_7e-12,
    5.100_370_287_454_476e-13,
    -2.058_326_053_566_506_8e-14,
    -5.348_122_539_423_018e-15,
    1.226_778_628_238_260_8e-15,
    -1.181_259_301_697_458_8e-16,
];

/// Temme's auxiliary functions for `|μ| ≤ 1/2`:
/// `(Γ₁, Γ₂, 1/Γ(1+μ), 1/Γ(1-μ))`.
fn temme_gammas(mu: f64) -> (f64, f64, f64, f64) {
    let m2 = mu * mu;
    let mut gam1 = 0.0;
    let mut gam2 = 0.0;
    let mut p = 1.0;
    for pair in RGAMMA_TAYLOR.chunks(2) {
        gam2 += pair[0] * p;
        if let Some(odd) = pair.get(1) {
            gam1 -= odd * p;
        }
        p *= m2;
    }
    (gam1, gam2, gam2 - mu * gam1, gam2 + mu * gam1)
}

/// `(e^x K_μ(x), e^x K_{μ+1}(x))` for `|μ| ≤ 1/2`.
fn k_scaled_reduced(mu: f64, x: f64) -> (f64, f64) {
    const EPS: f64 = 1e-16;
    const MAX_ITER: usize = 100_000;
    if x < 2.0 {
        let x2 = 0.5 * x;
        let pimu = PI * mu;
        let fact = if pimu.abs() < EPS {
            1.0
        } else {
            pimu / pimu.sin()
        };
        let d = -x2.ln();
        let e = mu * d;
        let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
        let (gam1, gam2, gampl, gammi) = temme_gammas(mu);
        let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
        let mut sum = ff;
        let e = e.exp();
        let mut p = 0.5 * e / gampl;
        let mut q = 0.5 / (e * gammi);
        let mut c = 1.0;
        let dd = x2 * x2;
        let mut sum1 = p;
        for i in 1..MAX_ITER {
            let fi = i as f64;
            ff = (fi * ff + p + q) / (fi * fi - mu * mu);
            c *= dd / fi;
            p /= fi - mu;
            q /= fi + mu;
            let del = c * ff;
            sum += del;
            sum1 += c * (p - fi * ff);
            if del.abs() < sum.abs() * EPS {
                break;
            }
        }
        let scale = x.exp();
        (sum * scale, sum1 * 2.0 / x * scale)
    } else {
        let mut b = 2.0 * (1.0 + x);
        let mut d = 1.0 / b;
        let mut h = d;
        let mut delh = d;
        let mut q1 = 0.0;
        let mut q2 = 1.0;
        let a1 = 0.25 - mu * mu;
        let mut q = a1;
        let mut c = a1;
        let mut a = -a1;
        let mut s = 1.0 + q * delh;
        for i in 2..MAX_ITER {
            let fi = i as f64;
            a -= 2.0 * (fi - 1.0);
            c = -a * c / fi;
            let qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += c * qnew;
            b += 2.0;
            d = 1.0 / (b + a * d);
            delh *= b * d - 1.0;
            h += delh;
            let dels = q * delh;
            s += dels;
            if (dels / s).abs() < EPS {
                break;
            }
        }
        let h = a1 * h;
        let kmu = (PI / (2.0 * x)).sqrt() / s;
        (kmu, kmu * (mu + x + 0.5 - h) / x)
    }
}

/// `e^x K_ν(x)` for `x > 0`.
pub fn bessel_k_scaled(order: RealOrder, x: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::domain("x", x, "finite and > 0"));
    }
    let nu = order.get();
    let nl = (nu + 0.5).floor();
    let mu = nu - nl;
    let (mut k0, mut k1) = k_scaled_reduced(mu, x);
    let two_over_x = 2.0 / x;
    for i in 1..=(nl as u64) {
        let next = (mu + i as f64) * two_over_x * k1 + k0;
        k0 = k1;
        k1 = next;
    }
    Ok(k0)
}

/// `K_ν(x)` for `x > 0`.
pub fn bessel_k(order: RealOrder, x: f64) -> Result<f64> {
    Ok(bessel_k_scaled(order, x)? * (-x).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ord(v: f64) -> RealOrder {
        RealOrder::new(v).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    /// Direct ascending series in plain arithmetic, for moderate arguments.
    fn series_oracle(nu: f64, x: f64, terms: usize) -> f64 {
        let mut sum = 0.0;
        for k in 0..terms {
            let k = k as f64;
            let ln_t = (2.0 * k + nu) * (0.5 * x).ln()
                - ln_gamma_pos(k + 1.0)
                - ln_gamma_pos(nu + k + 1.0);
            sum += ln_t.exp();
        }
        sum
    }

    #[test]
    fn half_integer_order_closed_form() {
        // I_{1/2}(x) = sqrt(2/(πx)) sinh x
        for x in [0.1, 1.0, 3.7, 20.0, 34.9, 35.1, 80.0, 400.0] {
            let want = (2.0 / (PI * x)).sqrt().ln() + x + (-(-2.0 * x).exp_m1()).ln() - LN_2;
            let got = bessel_i_log(ord(0.5), x).unwrap();
            assert!(
                rel(got, want) < 1e-12 || (got - want).abs() < 1e-14,
                "x={x}: {got} vs {want}"
            );
        }
        let x = 1.0;
        let closed = ((2.0 / (PI * x)).sqrt() * x.sinh()).ln();
        assert!((bessel_i_log(ord(0.5), x).unwrap() - closed).abs() < 1e-15);
        assert!((series_oracle(0.5, 1.0, 30).ln() - closed).abs() < 1e-15);
        // I_{3/2}(x) = sqrt(2/(πx)) (cosh x - sinh x / x)
        for x in [0.5, 2.0, 10.0, 50.0] {
            let want = ((2.0 / (PI * x)).sqrt() * (x.cosh() - x.sinh() / x)).ln();
            let got = bessel_i_log(ord(1.5), x).unwrap();
            assert!(rel(got, want) < 1e-12, "x={x}");
        }
    }

    #[test]
    fn zero_order_small_argument_limit() {
        let got = bessel_i_log(ord(0.0), 1e-3).unwrap();
        assert!((got - 2.499_999_843_750_017_5e-7).abs() < 1e-20);
        assert_eq!(bessel_i(ord(0.0), 0.0).unwrap(), 1.0);
        assert_eq!(bessel_i(ord(1.3), 0.0).unwrap(), 0.0);
    }

    #[test]
    fn ln_i_matches_reference_values() {
        // 40-digit reference values
        let cases = [
            (0.5, 1.0, -0.064_351_991_073_531_798_753),
            (2.3, 10.0, 7.665_139_412_163_498_9),
            (1.7, 0.3, -3.651_600_556_890_748_7),
            (0.0, 50.0, 47.127_575_501_871_804_6),
            (3.5, 100.0, 96.718_179_510_766_068_6),
            (7.2, 3.0, -5.741_141_707_385_761),
            (0.8, 500.0, 495.973_367_026_852_887_9),
            (10.0, 30.0, 25.705_719_808_142_329),
            (40.0, 60.0, 44.048_018_676_691_870_2),
            (1.7, 35.0, 32.265_125_680_166_052_3),
            (6.9, 45.0, 41.646_616_848_504_566),
            (20.5, 1e4, 9_994.454_890_238_054_4),
            (2.2, 1e6, 999_992.173_303_892_8),
            (0.3, 40.0, 37.238_647_407_439_029_9),
        ];
        for (nu, x, want) in cases {
            let got = bessel_i_log(ord(nu), x).unwrap();
            assert!(rel(got, want) < 1e-13, "I({nu},{x}): {got} vs {want}");
        }
    }

    #[test]
    fn series_and_hankel_agree_across_switchover() {
        for nu in [0.0, 0.8, 2.3, 4.1] {
            let x0 = hankel_threshold(nu);
            for x in [x0 * 0.999, x0, x0 * 1.001] {
                let s = nu * (0.5 * x).ln() - ln_gamma_pos(nu + 1.0) + ln_ascending_sum(nu, x) - x;
                let h = -0.5 * (2.0 * PI * x).ln() + ln_hankel_sum(nu, x);
                assert!(
                    (s - h).abs() < 2e-14 * (s + x).abs(),
                    "nu={nu} x={x}: {s} vs {h}"
                );
            }
        }
    }

    #[test]
    fn underflowing_argument_keeps_leading_power() {
        let nu = 2.5;
        let ln_x = -400.0;
        let want = nu * (ln_x - LN_2) - ln_gamma_pos(nu + 1.0);
        assert_eq!(ln_i_from_ln_x(nu, ln_x), want);
        let ln_x: f64 = -5.0;
        let direct = bessel_i_log(ord(nu), ln_x.exp()).unwrap();
        assert!((ln_i_from_ln_x(nu, ln_x) - direct).abs() < 1e-13);
    }

    #[test]
    fn k_matches_reference_values() {
        let cases = [
            (0.5, 1.0, 0.461_068_504_447_894_558),
            (1.7, 0.3, 11.098_113_534_997_124),
            (3.2, 5.0, 0.009_248_633_378_927_592),
            (0.0, 2.0, 0.113_893_872_749_533_436),
            (7.9, 10.0, 0.000_313_334_779_100_920_88),
            (0.4, 1.999, 0.117_875_465_263_613_145),
            (2.5, 0.01, 375_987.974_779_794_8),
            (1.2, 30.0, 2.183_426_121_339_328_7e-14),
        ];
        for (nu, x, want) in cases {
            let got = bessel_k(ord(nu), x).unwrap();
            assert!(rel(got, want) < 1e-13, "K({nu},{x}): {got} vs {want}");
        }
    }

    #[test]
    fn wronskian_ties_i_and_k() {
        // I_ν K_{ν+1} + I_{ν+1} K_ν = 1/x
        for (nu, x) in [(0.3, 0.7), (1.7, 2.5), (4.4, 12.0), (0.0, 60.0)] {
            let i0 = bessel_i_log(ord(nu), x).unwrap();
            let i1 = bessel_i_log(ord(nu + 1.0), x).unwrap();
            let k0 = bessel_k_scaled(ord(nu), x).unwrap().ln() - x;
            let k1 = bessel_k_scaled(ord(nu + 1.0), x).unwrap().ln() - x;
            let w = (i0 + k1).exp() + (i1 + k0).exp();
            assert!(rel(w, 1.0 / x) < 1e-13, "nu={nu} x={x}");
        }
    }

    #[test]
    fn domain_errors() {
        assert!(RealOrder::new(-0.1).is_err());
        assert!(RealOrder::new(f64::NAN).is_err());
        assert!(bessel_i_log(ord(1.0), 0.0).is_err());
        assert!(bessel_i_log(ord(1.0), -2.0).is_err());
        assert!(bessel_k(ord(1.0), 0.0).is_err());
    }
}
