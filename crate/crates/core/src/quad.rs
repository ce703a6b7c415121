//! Double-exponential quadrature for the semi-infinite and finite integrals
//! used throughout the crate.
//!
//! Two rules are provided:
//!
//! * exp-sinh on `(lo, ∞)`: `x = lo + exp(π/2 · sinh t)`, which gives
//!   doubly-exponential decay of the transformed integrand at both ends for
//!   integrands that decay exponentially at infinity and have (at most)
//!   algebraic or essential behaviour at `lo`;
//! * tanh-sinh on `[a, b]`: `x = c + h · tanh(π/2 · sinh t)`, tolerant of
//!   integrable endpoint singularities.
//!
//! Every rule is driven by the same refinement loop: the step is halved each
//! level (reusing all previous nodes) and the error estimate is the difference
//! between the last two levels, floored at the roundoff level of the sum.
//!
//! Integrands may be supplied in log form ([`LogValue`]); the sum is kept
//! relative to a running maximum so that terms whose magnitudes would
//! overflow individually still produce a finite result.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rule used for semi-infinite domains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Transform {
    /// exp-sinh substitution directly on `(lo, ∞)`.
    #[default]
    ExpDecaySemiinfinite,
    /// `x = lo + s/(1-s)` onto `(0, 1)`, then tanh-sinh.
    FiniteInterval,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_refinements: u32,
    pub transform: Transform,
}

impl Default for QuadSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_refinements: 12,
            transform: Transform::ExpDecaySemiinfinite,
        }
    }
}

impl QuadSpec {
    pub fn new(rel_tol: f64, abs_tol: f64, max_refinements: u32) -> Result<Self> {
        let spec = Self {
            rel_tol,
            abs_tol,
            max_refinements,
            transform: Transform::default(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::domain("rel_tol", self.rel_tol, "> 0"));
        }
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::domain("abs_tol", self.abs_tol, "> 0"));
        }
        if self.max_refinements < 1 {
            return Err(Error::domain(
                "max_refinements",
                self.max_refinements as f64,
                ">= 1",
            ));
        }
        Ok(())
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_transform(mut self, transform: Transform) -> Self {
        self.transform = transform;
        self
    }
}

/// Value of a computed quantity with its error estimate and convergence diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub value: f64,
    pub err_estimate: f64,
    pub refinements_used: u32,
    pub converged: bool,
}

impl EvalResult {
    /// An exact value (no numerical error).
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            err_estimate: 0.0,
            refinements_used: 0,
            converged: true,
        }
    }

    /// Turns a not-converged result into an error.
    pub fn require_converged(self, what: &'static str) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NotConverged {
                what,
                value: self.value,
                err_estimate: self.err_estimate,
            })
        }
    }
}

/// A real number carried as `ln|v|` and a sign in `{-1, 0, +1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogValue {
    pub ln_abs: f64,
    pub sign: f64,
}

impl LogValue {
    pub const ZERO: LogValue = LogValue {
        ln_abs: f64::NEG_INFINITY,
        sign: 0.0,
    };

    pub fn positive(ln_abs: f64) -> Self {
        if ln_abs == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            Self { ln_abs, sign: 1.0 }
        }
    }

    pub fn from_value(v: f64) -> Self {
        if v == 0.0 {
            Self::ZERO
        } else {
            Self {
                ln_abs: v.abs().ln(),
                sign: v.signum(),
            }
        }
    }

    pub fn value(self) -> f64 {
        if self.sign == 0.0 {
            0.0
        } else {
            self.sign * self.ln_abs.exp()
        }
    }
}

/// Sum of signed terms held relative to the running maximum magnitude.
#[derive(Debug, Clone, Copy)]
struct LogSum {
    scale: f64,
    sum: f64,
    abs_sum: f64,
}

impl LogSum {
    fn new() -> Self {
        Self {
            scale: f64::NEG_INFINITY,
            sum: 0.0,
            abs_sum: 0.0,
        }
    }

    fn add(&mut self, ln_abs: f64, sign: f64) {
        if sign == 0.0 || ln_abs == f64::NEG_INFINITY {
            return;
        }
        if ln_abs > self.scale {
            let r = (self.scale - ln_abs).exp();
            self.sum = self.sum * r + sign;
            self.abs_sum = self.abs_sum * r + 1.0;
            self.scale = ln_abs;
        } else {
            let e = (ln_abs - self.scale).exp();
            self.sum += sign * e;
            self.abs_sum += e;
        }
    }

    fn scaled(&self, ln_factor: f64) -> (f64, f64) {
        if self.scale == f64::NEG_INFINITY {
            return (0.0, 0.0);
        }
        let f = (self.scale + ln_factor).exp();
        (self.sum * f, self.abs_sum * f)
    }
}

/// A quadrature node in the original variable.
///
/// `gap_lo`/`gap_hi` are the distances to the lower/upper end of the
/// interval computed without cancellation (`gap_hi` is infinite on
/// semi-infinite domains).
#[derive(Debug, Clone, Copy)]
pub struct Node {
    pub x: f64,
    pub gap_lo: f64,
    pub gap_hi: f64,
    ln_weight: f64,
}

trait Rule {
    /// Node for the parameter `t`, or `None` once the node is no longer representable.
    fn node(&self, t: f64) -> Option<Node>;
    fn t_max(&self) -> f64;
}

struct ExpSinh {
    lo: f64,
}

impl Rule for ExpSinh {
    fn node(&self, t: f64) -> Option<Node> {
        let u = FRAC_PI_2 * t.sinh();
        let gap = u.exp();
        if gap == 0.0 || !gap.is_finite() {
            return None;
        }
        let x = self.lo + gap;
        Some(Node {
            x,
            gap_lo: gap,
            gap_hi: f64::INFINITY,
            ln_weight: u + (FRAC_PI_2 * t.cosh()).ln(),
        })
    }

    fn t_max(&self) -> f64 {
        6.7
    }
}

struct TanhSinh {
    a: f64,
    b: f64,
}

impl TanhSinh {
    fn half(&self) -> f64 {
        0.5 * (self.b - self.a)
    }
}

impl Rule for TanhSinh {
    fn node(&self, t: f64) -> Option<Node> {
        let half = self.half();
        let u = FRAC_PI_2 * t.sinh();
        let e = (-2.0 * u.abs()).exp();
        // distance to the nearer endpoint: half * (1 - tanh|u|)
        let near = half * 2.0 * e / (1.0 + e);
        if near == 0.0 {
            return None;
        }
        let far = 2.0 * half - near;
        let (x, gap_lo, gap_hi) = if t >= 0.0 {
            (self.b - near, far, near)
        } else {
            (self.a + near, near, far)
        };
        // sech²u = 4e / (1+e)²
        let ln_sech2 = std::f64::consts::LN_2 * 2.0 - 2.0 * u.abs() - 2.0 * e.ln_1p();
        Some(Node {
            x,
            gap_lo,
            gap_hi,
            ln_weight: half.ln() + (FRAC_PI_2 * t.cosh()).ln() + ln_sech2,
        })
    }

    fn t_max(&self) -> f64 {
        6.1
    }
}

const FIRST_STEP: f64 = 0.5;
const MIN_LEVELS: u32 = 2;
/// Terms below `max · e^{-46}` (≈ 1e-20 relative) end the range scan.
const NEGLIGIBLE_LN: f64 = -46.0;

fn integrate_rule<R: Rule>(
    rule: &R,
    spec: &QuadSpec,
    mut f: impl FnMut(&Node) -> LogValue,
) -> Result<EvalResult> {
    spec.validate()?;
    let mut acc = LogSum::new();
    let mut max_ln = f64::NEG_INFINITY;

    let mut eval = |t: f64, acc: &mut LogSum, max_ln: &mut f64| -> Result<Option<f64>> {
        let Some(node) = rule.node(t) else {
            return Ok(None);
        };
        let v = f(&node);
        if v.ln_abs.is_nan() || v.sign.is_nan() || v.ln_abs == f64::INFINITY {
            return Err(Error::NonFiniteIntegrand { x: node.x });
        }
        let ln_term = node.ln_weight + v.ln_abs;
        if v.sign != 0.0 && ln_term.is_finite() {
            acc.add(ln_term, v.sign);
            if ln_term > *max_ln {
                *max_ln = ln_term;
            }
        }
        Ok(Some(if v.sign == 0.0 {
            f64::NEG_INFINITY
        } else {
            ln_term
        }))
    };

    // Level 0: scan outward from t = 0 until terms are negligible.
    let mut t_hi = 0.0;
    let mut t_lo = 0.0;
    for dir in [1.0, -1.0] {
        let mut quiet = 0;
        let mut j = if dir > 0.0 { 0 } else { 1 };
        loop {
            let t = dir * j as f64 * FIRST_STEP;
            if t.abs() > rule.t_max() {
                break;
            }
            let Some(ln_term) = eval(t, &mut acc, &mut max_ln)? else {
                break;
            };
            if dir > 0.0 {
                t_hi = t;
            } else {
                t_lo = t;
            }
            if max_ln.is_finite() && ln_term < max_ln + NEGLIGIBLE_LN {
                quiet += 1;
                if quiet >= 3 {
                    break;
                }
            } else {
                quiet = 0;
            }
            j += 1;
        }
    }

    let mut h = FIRST_STEP;
    let (mut prev, _) = acc.scaled(h.ln());
    let mut result = EvalResult {
        value: prev,
        err_estimate: f64::INFINITY,
        refinements_used: 0,
        converged: false,
    };

    for level in 1..=spec.max_refinements {
        h *= 0.5;
        let i_lo = ((t_lo / h - 1.0) / 2.0).ceil() as i64;
        let i_hi = ((t_hi / h - 1.0) / 2.0).floor() as i64;
        for i in i_lo..=i_hi {
            let t = (2 * i + 1) as f64 * h;
            eval(t, &mut acc, &mut max_ln)?;
        }
        let (value, abs_value) = acc.scaled(h.ln());
        if !value.is_finite() {
            return Err(Error::NonFiniteIntegrand { x: f64::NAN });
        }
        let diff = (value - prev).abs();
        let floor = 8.0 * f64::EPSILON * abs_value;
        let err_estimate = diff.max(floor);
        let converged =
            level >= MIN_LEVELS && err_estimate <= (spec.rel_tol * value.abs()).max(spec.abs_tol);
        result = EvalResult {
            value,
            err_estimate,
            refinements_used: level,
            converged,
        };
        if converged {
            break;
        }
        prev = value;
    }
    Ok(result)
}

fn semiinf_rule<F>(lo: f64, spec: &QuadSpec, mut f: F) -> Result<EvalResult>
where
    F: FnMut(f64, f64) -> LogValue,
{
    match spec.transform {
        Transform::ExpDecaySemiinfinite => {
            integrate_rule(&ExpSinh { lo }, spec, |n| f(n.x, n.gap_lo))
        }
        Transform::FiniteInterval => {
            // x = lo + s/(1-s), dx = ds/(1-s)²
            integrate_rule(&TanhSinh { a: 0.0, b: 1.0 }, spec, |n| {
                let s = n.gap_lo;
                let one_minus_s = n.gap_hi;
                let gap = s / one_minus_s;
                if !gap.is_finite() {
                    return LogValue::ZERO;
                }
                let v = f(lo + gap, gap);
                LogValue {
                    ln_abs: v.ln_abs - 2.0 * one_minus_s.ln(),
                    sign: v.sign,
                }
            })
        }
    }
}

/// `∫₀^∞ f(x) dx` for an integrand given in plain form.
pub fn integrate_semiinf(f: impl Fn(f64) -> f64, spec: &QuadSpec) -> Result<EvalResult> {
    semiinf_rule(0.0, spec, |x, _| LogValue::from_value(f(x)))
}

/// `∫₀^∞ f(x) dx` for an integrand given as `ln|f|` and sign.
pub fn integrate_semiinf_log(f: impl Fn(f64) -> LogValue, spec: &QuadSpec) -> Result<EvalResult> {
    semiinf_rule(0.0, spec, |x, _| f(x))
}

/// `∫_lo^∞ f(x) dx`; the integrand receives `x` and the cancellation-free gap `x - lo`.
pub fn integrate_tail_log(
    lo: f64,
    f: impl Fn(f64, f64) -> LogValue,
    spec: &QuadSpec,
) -> Result<EvalResult> {
    semiinf_rule(lo, spec, f)
}

/// `∫₀^∞ zⁿ h(z) dz`, with `h` in log form.
pub fn integrate_moment(
    h: impl Fn(f64) -> LogValue,
    n: u32,
    spec: &QuadSpec,
) -> Result<EvalResult> {
    let n = n as f64;
    semiinf_rule(0.0, spec, |z, _| {
        let v = h(z);
        if n == 0.0 {
            return v;
        }
        LogValue {
            ln_abs: v.ln_abs + n * z.ln(),
            sign: v.sign,
        }
    })
}

/// `∫_a^b f(x) dx` by tanh-sinh.
pub fn integrate_finite(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    spec: &QuadSpec,
) -> Result<EvalResult> {
    integrate_finite_log(|n| LogValue::from_value(f(n.x)), a, b, spec)
}

/// `∫_a^b f dx` where the integrand sees the full node (with endpoint gaps)
/// and returns log form.
pub fn integrate_finite_log(
    f: impl Fn(&Node) -> LogValue,
    a: f64,
    b: f64,
    spec: &QuadSpec,
) -> Result<EvalResult> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::domain(
            "interval end",
            if a.is_finite() { b } else { a },
            "finite",
        ));
    }
    if a == b {
        return Ok(EvalResult::exact(0.0));
    }
    if b < a {
        let r = integrate_rule(&TanhSinh { a: b, b: a }, spec, f)?;
        return Ok(EvalResult {
            value: -r.value,
            ..r
        });
    }
    integrate_rule(&TanhSinh { a, b }, spec, f)
}
