//! Gamma function machinery: `ln|Γ(x)|` with sign, and the entire function `1/Γ(x)`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `ln(2π)/2`
const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;

// Lanczos approximation, g = 607/128, 15 terms.
const LANCZOS_G_PLUS_HALF: f64 = 5.242_187_5;
const LANCZOS_C0: f64 = 0.999_999_999_999_997_1;
const LANCZOS_COEF: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];

// ζ(2), ζ(3), ..., ζ(30) for the expansion of ln Γ(1+ε).
const ZETA: [f64; 29] = [
    1.644_934_066_848_226_4,
    1.202_056_903_159_594_3,
    1.082_323_233_711_138_2,
    1.036_927_755_143_369_9,
    1.017_343_061_984_449_1,
    1.008_349_277_381_922_8,
    1.004_077_356_197_944_3,
    1.002_008_392_826_082_2,
    1.000_994_575_127_818_1,
    1.000_494_188_604_119_5,
    1.000_246_086_553_308,
    1.000_122_713_347_578_5,
    1.000_061_248_135_058_7,
    1.000_030_588_236_307,
    1.000_015_282_259_408_7,
    1.000_007_637_197_637_9,
    1.000_003_817_293_265,
    1.000_001_908_212_716_6,
    1.000_000_953_962_033_9,
    1.000_000_476_932_986_8,
    1.000_000_238_450_502_7,
    1.000_000_119_219_926,
    1.000_000_059_608_189,
    1.000_000_029_803_503_5,
    1.000_000_014_901_554_8,
    1.000_000_007_450_711_8,
    1.000_000_003_725_334,
    1.000_000_001_862_659_7,
    1.000_000_000_931_327_4,
];

/// Natural logarithm of `|Γ(x)|` together with the sign of `Γ(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LnGamma {
    pub ln_abs: f64,
    pub sign: f64,
}

/// `true` when `x` is one of `0, -1, -2, ...`.
pub fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// `sin(πx)` with exact argument reduction, so zeros at integers are exact.
pub fn sin_pi(x: f64) -> f64 {
    if x == x.floor() {
        return 0.0;
    }
    // reduce to r in [-1, 1)
    let mut r = x % 2.0;
    if r >= 1.0 {
        r -= 2.0;
    } else if r < -1.0 {
        r += 2.0;
    }
    // reflect into [-1/2, 1/2]
    if r > 0.5 {
        r = 1.0 - r;
    } else if r < -0.5 {
        r = -1.0 - r;
    }
    (PI * r).sin()
}

/// `ln Γ(1+ε)` for small `|ε|` from the zeta series.
fn ln_gamma_1p_series(eps: f64) -> f64 {
    let mut sum = -EULER_GAMMA * eps;
    // (-ε)^k / k with the sign carried in `pow`
    let mut pow = -eps;
    for (i, z) in ZETA.iter().enumerate() {
        let k = (i + 2) as f64;
        pow *= -eps;
        let term = z * pow / k;
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

fn ln_gamma_lanczos(x: f64) -> f64 {
    let tmp = x + LANCZOS_G_PLUS_HALF;
    let tmp = (x + 0.5) * tmp.ln() - tmp;
    let mut ser = LANCZOS_C0;
    let mut y = x;
    for c in LANCZOS_COEF {
        y += 1.0;
        ser += c / y;
    }
    tmp + (2.506_628_274_631_000_5 * ser / x).ln()
}

fn ln_gamma_positive(x: f64) -> f64 {
    let d1 = x - 1.0;
    if d1.abs() < 0.2 {
        return ln_gamma_1p_series(d1);
    }
    let d2 = x - 2.0;
    if d2.abs() < 0.2 {
        return ln_gamma_1p_series(d2) + d2.ln_1p();
    }
    if x > 1e7 {
        // Stirling with two correction terms is exact to double precision here
        let inv = 1.0 / x;
        return (x - 0.5) * x.ln() - x + HALF_LN_TWO_PI + inv / 12.0 - inv * inv * inv / 360.0;
    }
    ln_gamma_lanczos(x)
}

/// `ln|Γ(x)|` and the sign of `Γ(x)`.
pub fn ln_gamma(x: f64) -> Result<LnGamma> {
    if !x.is_finite() {
        return Err(Error::domain("x", x, "finite"));
    }
    if is_nonpositive_integer(x) {
        return Err(Error::GammaPole(x));
    }
    if x > 0.0 {
        return Ok(LnGamma {
            ln_abs: ln_gamma_positive(x),
            sign: 1.0,
        });
    }
    // Γ(x) Γ(1-x) = π / sin(πx)
    let s = sin_pi(x);
    Ok(LnGamma {
        ln_abs: PI.ln() - s.abs().ln() - ln_gamma_positive(1.0 - x),
        sign: s.signum(),
    })
}

/// `ln Γ(x)` for `x > 0`, the common case inside the library.
pub(crate) fn ln_gamma_pos(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    ln_gamma_positive(x)
}

/// `1/Γ(x)`, an entire function: exactly zero at the poles of `Γ`.
pub fn recip_gamma(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if is_nonpositive_integer(x) {
        return 0.0;
    }
    if x > 0.0 {
        if x < 1e-3 {
            // 1/Γ(x) = x / Γ(1+x) keeps full relative accuracy near zero
            return x * (-ln_gamma_1p_series(x)).exp();
        }
        return (-ln_gamma_positive(x)).exp();
    }
    // 1/Γ(x) = Γ(1-x) sin(πx) / π
    sin_pi(x) * ln_gamma_positive(1.0 - x).exp() / PI
}
