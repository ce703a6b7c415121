//! Partial-wave assembly of the full Green's function and its bound-state
//! spectrum.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::angular::{angular_weight_beta, SpacePoint};
use crate::error::{Error, Result};
use crate::radial::{ln_radial_closed, ChannelIndex, Couplings, PhysicalParams};
use crate::specfun::recip_gamma;

/// Radii below this are refused: the Whittaker products have not been
/// validated in that regime.
pub const MIN_RADIUS: f64 = 1e-8;

/// Window of the `(q, k)` double sum.
///
/// The `k` window is centred on `k_c = -round(β₀)`, the winding number with
/// the smallest `|k + β₀|`, so that shifting `β₀` by an integer reindexes the
/// window exactly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationSpec {
    pub q_max: u32,
    pub k_max: u32,
    /// Relative truncation error the sum should reach.
    pub tail_tol: f64,
    /// Treat `(q_max, k_max)` as the starting window and keep adding shells
    /// until the truncation estimate meets `tail_tol`.
    pub adaptive: bool,
}

impl Default for TruncationSpec {
    fn default() -> Self {
        Self {
            q_max: 20,
            k_max: 25,
            tail_tol: 1e-12,
            adaptive: true,
        }
    }
}

impl TruncationSpec {
    pub fn fixed(q_max: u32, k_max: u32) -> Self {
        Self {
            q_max,
            k_max,
            adaptive: false,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tail_tol > 0.0 && self.tail_tol.is_finite()) {
            return Err(Error::domain("tail_tol", self.tail_tol, "finite and > 0"));
        }
        Ok(())
    }
}

/// Shells an adaptive sum may add beyond the starting window.
pub const MAX_EXTRA_SHELLS: u32 = 200;

/// Complex value with the same diagnostics as [`crate::EvalResult`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexEval {
    pub value: Complex64,
    /// Estimated truncation error: the geometric tails of the outermost
    /// `q` row and `|k - k_c|` column, extrapolated from their last two
    /// absolute masses.
    pub err_estimate: f64,
    /// `err_estimate ≤ tail_tol · |value|`.
    pub converged: bool,
    pub shells: u32,
    pub channels: u32,
    /// Final window actually summed.
    pub q_used: u32,
    pub k_used: u32,
}

/// The constant `iħ/2mc` in natural units.
pub fn overall_constant() -> Complex64 {
    Complex64::new(0.0, 0.5)
}

/// Everything in front of the double sum once the `1/(r_b r_a κ)` of the
/// channel functions and the `1/4π` of the angular weights are pulled out:
/// `(iħ/2mc) · mc/(4π r_b r_a √(m²c⁴-E²)) = i/(8π r_b r_a κ)`.
pub fn assembly_prefactor(rb: f64, ra: f64, kappa: f64) -> Complex64 {
    Complex64::new(0.0, 1.0 / (8.0 * PI * rb * ra * kappa))
}

/// Centre of the winding-number window.
pub fn k_centre(beta0: f64) -> i64 {
    -((beta0 + 0.5).floor() as i64)
}

/// Window `(q ≤ Q, |k - k_c| ≤ K)` after shell `s`. Up to the starting
/// window the shells are L-shaped and stop growing along a capped axis;
/// past it both axes grow by one per shell.
fn window_after(s: u32, q_max: u32, k_max: u32) -> (u32, u32) {
    let base = q_max.max(k_max);
    if s <= base {
        (s.min(q_max), s.min(k_max))
    } else {
        (q_max + (s - base), k_max + (s - base))
    }
}

/// `G(x_b, x_a; E) = (i/2) Σ_{q,k} G_{q,|k+β₀|}(r_b, r_a) · w_{q,k}(x_b, x_a)`,
/// accumulated shell by shell in a fixed order.
pub fn greens_function(
    b: &SpacePoint,
    a: &SpacePoint,
    p: &PhysicalParams,
    trunc: &TruncationSpec,
) -> Result<ComplexEval> {
    trunc.validate()?;
    for (name, r) in [("rb", b.r()), ("ra", a.r())] {
        if r < MIN_RADIUS {
            return Err(Error::domain(name, r, ">= 1e-8"));
        }
    }
    let kc = k_centre(p.beta0());
    let base = trunc.q_max.max(trunc.k_max);
    let last_shell = if trunc.adaptive {
        base + MAX_EXTRA_SHELLS
    } else {
        base
    };
    let mut total = Complex64::new(0.0, 0.0);
    let mut channels = 0u32;
    // absolute mass of each q row and each |k - k_c| column
    let mut rows: Vec<f64> = Vec::new();
    let mut cols: Vec<f64> = Vec::new();
    let (mut q_win, mut k_win) = (0u32, 0u32);
    let mut err = f64::INFINITY;
    let mut shells = 0u32;
    for s in 0..=last_shell {
        let prev = if s == 0 {
            None
        } else {
            Some(window_after(s - 1, trunc.q_max, trunc.k_max))
        };
        (q_win, k_win) = window_after(s, trunc.q_max, trunc.k_max);
        rows.resize(q_win as usize + 1, 0.0);
        cols.resize(k_win as usize + 1, 0.0);
        for q in 0..=q_win {
            for dk in -(k_win as i64)..=(k_win as i64) {
                let d = dk.unsigned_abs() as u32;
                if let Some((pq, pk)) = prev {
                    if q <= pq && d <= pk {
                        continue;
                    }
                }
                let k = kc + dk;
                let ch = ChannelIndex::new(q, k);
                let radial = ln_radial_closed(ch, p, b.r(), a.r())?.exp();
                let term =
                    overall_constant() * (radial * angular_weight_beta(q, k, p.beta0(), b, a));
                total += term;
                rows[q as usize] += term.norm();
                cols[d as usize] += term.norm();
                channels += 1;
            }
        }
        shells = s + 1;
        if s >= base {
            err = tail_estimate(&rows) + tail_estimate(&cols);
            if err <= trunc.tail_tol * total.norm() {
                break;
            }
        }
    }
    Ok(ComplexEval {
        value: total,
        err_estimate: err,
        converged: err <= trunc.tail_tol * total.norm(),
        shells,
        channels,
        q_used: q_win,
        k_used: k_win,
    })
}

/// Tail beyond the last entry of a sequence of masses: the last entry,
/// inflated by `r/(1-r)` when the ratio `r` of the last two says the
/// remainder is larger than one more entry.
fn tail_estimate(masses: &[f64]) -> f64 {
    let last = *masses.last().unwrap_or(&0.0);
    if masses.len() < 2 {
        return last;
    }
    let prev = masses[masses.len() - 2];
    let r = if prev > 0.0 {
        (last / prev).min(0.9)
    } else {
        0.9
    };
    last * (r / (1.0 - r)).max(1.0)
}

/// Bound state from the pole condition `(1+λ)/2 - ν(E) = -n_r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundState {
    pub n_r: u32,
    pub q: u32,
    pub k: i64,
    pub energy: f64,
    pub lambda: f64,
}

/// Energies `E = N/√(N² + α²)`, `N = n_r + (1+λ)/2`, for `n_r = 0..=n_r_max`.
pub fn bound_energies(ch: ChannelIndex, c: &Couplings, n_r_max: u32) -> Result<Vec<BoundState>> {
    if !(c.alpha() > 0.0) {
        return Err(Error::domain("alpha", c.alpha(), "> 0 for bound states"));
    }
    let lambda = ch.lambda(c);
    Ok((0..=n_r_max)
        .map(|n_r| {
            let n = n_r as f64 + 0.5 * (1.0 + lambda);
            BoundState {
                n_r,
                q: ch.q,
                k: ch.k,
                energy: n / n.hypot(c.alpha()),
                lambda,
            }
        })
        .collect())
}

/// Klein–Gordon Coulomb level
/// `E = [1 + α²/(n_r + 1/2 + √((l+1/2)² - α²))²]^{-1/2}` for angular momentum `l`.
pub fn klein_gordon_energy(n_r: u32, l: u32, alpha: f64) -> f64 {
    let lh = l as f64 + 0.5;
    let d = n_r as f64 + 0.5 + ((lh - alpha) * (lh + alpha)).sqrt();
    (1.0 + alpha * alpha / (d * d)).sqrt().recip()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectedPole {
    pub n_r: u32,
    pub energy: f64,
    /// Width of the final bisection bracket.
    pub bracket: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoleScan {
    pub poles: Vec<DetectedPole>,
    pub warnings: Vec<String>,
}

/// Bisection stops once the bracket is narrower than this.
pub const POLE_BRACKET: f64 = 1e-13;

/// Zeros of `E ↦ 1/Γ((1+λ)/2 - ν(E))` on `[e_lo, e_hi]`, bracketed on a
/// uniform grid of `n_grid` intervals and refined by bisection.
pub fn pole_scan(
    ch: ChannelIndex,
    c: &Couplings,
    e_lo: f64,
    e_hi: f64,
    n_grid: u32,
) -> Result<PoleScan> {
    if !(e_lo > 0.0 && e_lo < e_hi && e_hi < 1.0) {
        return Err(Error::domain(
            "energy range",
            e_hi - e_lo,
            "0 < e_lo < e_hi < 1",
        ));
    }
    if n_grid == 0 {
        return Err(Error::domain("n_grid", 0.0, ">= 1"));
    }
    let gamma_arg = |e: f64| -> f64 {
        // parameters at `e` are valid since 0 < e < 1
        let p = PhysicalParams::new(c.alpha(), c.beta0(), e).expect("energy inside (0, 1)");
        ch.gamma_arg(&p)
    };
    let f = |e: f64| recip_gamma(gamma_arg(e));
    // the argument decreases with E; poles in (e0, e1] sit at the integers -n in [a1, a0)
    let poles_between = |a0: f64, a1: f64| -> i64 {
        let first = (-a0).floor().max(-1.0) as i64 + 1;
        let last = (-a1).floor() as i64;
        (last - first.max(0) + 1).max(0)
    };
    let mut poles = Vec::new();
    let mut crowded = Vec::new();
    let step = (e_hi - e_lo) / n_grid as f64;
    let mut e0 = e_lo;
    let mut f0 = f(e0);
    for i in 1..=n_grid {
        let e1 = if i == n_grid {
            e_hi
        } else {
            e_lo + i as f64 * step
        };
        let f1 = f(e1);
        let inside = poles_between(gamma_arg(e0), gamma_arg(e1));
        if inside > 1 {
            crowded.push(format!(
                "interval [{e0}, {e1}] holds {inside} poles; the grid is too coarse to separate them"
            ));
        }
        if f0 == 0.0 {
            poles.push((e0, 0.0));
        } else if f0 * f1 < 0.0 {
            let (mut lo, mut hi, mut flo) = (e0, e1, f0);
            while hi - lo > POLE_BRACKET {
                let mid = 0.5 * (lo + hi);
                let fm = f(mid);
                if fm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if fm * flo < 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            poles.push((0.5 * (lo + hi), hi - lo));
        }
        e0 = e1;
        f0 = f1;
    }
    if f0 == 0.0 {
        poles.push((e0, 0.0));
    }
    let poles: Vec<DetectedPole> = poles
        .into_iter()
        .map(|(energy, bracket)| DetectedPole {
            n_r: (-gamma_arg(energy)).round().max(0.0) as u32,
            energy,
            bracket,
        })
        .collect();
    let mut warnings = crowded;
    for w in poles.windows(2) {
        if w[1].n_r != w[0].n_r + 1 {
            warnings.push(format!(
                "pole indices jump from n_r={} to n_r={}; the grid may be too coarse",
                w[0].n_r, w[1].n_r
            ));
        }
    }
    Ok(PoleScan { poles, warnings })
}
