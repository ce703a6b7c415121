//! Equal-parameter Jacobi polynomials and associated Legendre functions.

use crate::error::{Error, Result};

/// Jacobi polynomial `P_n^{(a,a)}(x)` by the three-term recurrence in the degree.
pub fn jacobi_p(n: u32, a: f64, x: f64) -> Result<f64> {
    if !(a > -1.0 && a.is_finite()) {
        return Err(Error::domain("a", a, "> -1"));
    }
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::domain("x", x, "in [-1, 1]"));
    }
    Ok(jacobi_unchecked(n, a, x))
}

pub(crate) fn jacobi_unchecked(n: u32, a: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut p_prev = 1.0;
    let mut p = (a + 1.0) * x;
    for m in 2..=n {
        // 2m(m+2a)(2m+2a-2) P_m = (2m+2a-1)(2m+2a)(2m+2a-2) x P_{m-1}
        //                          - 2(m+a-1)²(2m+2a) P_{m-2}
        let m = m as f64;
        let s = 2.0 * m + 2.0 * a;
        let lhs = 2.0 * m * (m + 2.0 * a) * (s - 2.0);
        let c1 = (s - 1.0) * s * (s - 2.0);
        let c2 = 2.0 * (m + a - 1.0) * (m + a - 1.0) * s;
        let next = (c1 * x * p - c2 * p_prev) / lhs;
        p_prev = p;
        p = next;
    }
    p
}

/// Associated Legendre function `P_l^k(x)` including the Condon–Shortley
/// phase `(-1)^k`, so that for `0 ≤ k ≤ l`
///
/// `P_l^k(cos θ) = (-1)^k Γ(1+k+l)/Γ(1+l) · (cos(θ/2) sin(θ/2))^k · P_{l-k}^{(k,k)}(cos θ)`.
///
/// Negative `k` follows `P_l^{-k} = (-1)^k (l-k)!/(l+k)! P_l^k`.
pub fn assoc_legendre(l: u32, k: i32, x: f64) -> Result<f64> {
    if k.unsigned_abs() > l {
        return Err(Error::LegendreIndex { l, k });
    }
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::domain("x", x, "in [-1, 1]"));
    }
    let m = k.unsigned_abs();
    let somx2 = ((1.0 - x) * (1.0 + x)).sqrt();
    // P_m^m = (-1)^m (2m-1)!! (1-x²)^{m/2}
    let mut pmm = 1.0;
    let mut fact = 1.0;
    for _ in 0..m {
        pmm *= -fact * somx2;
        fact += 2.0;
    }
    let value = if l == m {
        pmm
    } else {
        let mut p_prev = pmm;
        let mut p = x * (2 * m + 1) as f64 * pmm;
        for ll in (m + 2)..=l {
            let next =
                ((2 * ll - 1) as f64 * x * p - (ll + m - 1) as f64 * p_prev) / (ll - m) as f64;
            p_prev = p;
            p = next;
        }
        p
    };
    if k >= 0 {
        return Ok(value);
    }
    // (l-m)!/(l+m)!
    let mut ratio = 1.0;
    for j in (l - m + 1)..=(l + m) {
        ratio /= j as f64;
    }
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * ratio * value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gamma::ln_gamma_pos;

    #[test]
    fn jacobi_low_degrees() {
        for a in [0.0, 0.3, 1.7, 12.5] {
            for x in [-0.9, -0.2, 0.0, 0.45, 1.0] {
                assert_eq!(jacobi_p(0, a, x).unwrap(), 1.0);
                assert!((jacobi_p(1, a, x).unwrap() - (a + 1.0) * x).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn jacobi_zero_parameter_is_legendre() {
        // P_3(x) = (5x³ - 3x)/2
        for x in [-0.7, 0.1, 0.9] {
            let want = 0.5 * (5.0 * x * x * x - 3.0 * x);
            assert!((jacobi_p(3, 0.0, x).unwrap() - want).abs() < 1e-15);
        }
    }

    #[test]
    fn jacobi_endpoint_value() {
        // P_n^{(a,a)}(1) = Γ(n+a+1) / (n! Γ(a+1))
        for (n, a) in [(5u32, 0.3), (12, 1.7), (40, 3.2), (60, 0.5)] {
            let want = (ln_gamma_pos(n as f64 + a + 1.0)
                - ln_gamma_pos(n as f64 + 1.0)
                - ln_gamma_pos(a + 1.0))
            .exp();
            let got = jacobi_p(n, a, 1.0).unwrap();
            assert!(((got - want) / want).abs() < 1e-12, "n={n} a={a}");
        }
    }

    #[test]
    fn jacobi_domain_errors() {
        assert!(jacobi_p(2, -1.0, 0.3).is_err());
        assert!(jacobi_p(2, 0.5, 1.2).is_err());
    }

    #[test]
    fn legendre_reductions() {
        for x in [-0.8, 0.25, 0.6] {
            // k = 0 is the Legendre polynomial
            let p2 = 0.5 * (3.0 * x * x - 1.0);
            assert!((assoc_legendre(2, 0, x).unwrap() - p2).abs() < 1e-15);
            // Condon–Shortley: P_1^1 = -sqrt(1-x²)
            let s = (1.0 - x * x).sqrt();
            assert!((assoc_legendre(1, 1, x).unwrap() + s).abs() < 1e-15);
            // P_2^1 = -3x sqrt(1-x²), P_2^{-1} = -P_2^1 / 6
            let p21 = -3.0 * x * s;
            assert!((assoc_legendre(2, 1, x).unwrap() - p21).abs() < 1e-15);
            assert!((assoc_legendre(2, -1, x).unwrap() + p21 / 6.0).abs() < 1e-15);
        }
    }

    #[test]
    fn legendre_index_error() {
        assert_eq!(
            assoc_legendre(2, 3, 0.1),
            Err(Error::LegendreIndex { l: 2, k: 3 })
        );
        assert!(assoc_legendre(2, -3, 0.1).is_err());
    }
}
