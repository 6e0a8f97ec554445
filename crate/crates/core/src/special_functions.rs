//! Ultraspherical modified Bessel functions
//! `i_l(z) = z^(1 - n/2) I_(n/2 - 1 + l)(z)` and their first three derivatives.
//!
//! Values come from the ascending power series of `I_nu`. Derivatives are
//! assembled from the raising recursions
//!
//! ```text
//! i_l'   = (l/z) i_l + i_{l+1}
//! i_l''  = (l(l-1)/z^2) i_l + ((2l+1)/z) i_{l+1} + i_{l+2}
//! i_l''' = (l(l-1)(l-2)/z^3) i_l + (3l^2/z^2) i_{l+1} + ((3l+3)/z) i_{l+2} + i_{l+3}
//! ```
//!
//! so every derivative costs only additional series evaluations at higher
//! order. The series is stable for the moderate arguments (`z = sqrt(tau)`)
//! that occur in the ball spectrum.

use crate::error::{Error, Result};

/// Relative truncation tolerance of the ascending series.
pub const SERIES_TOLERANCE: f64 = 1e-15;
/// Hard cap on the number of series terms.
pub const MAX_SERIES_TERMS: usize = 300;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function.
///
/// Exact products are used at positive integers and half-integers (the only
/// orders reached by `nu = n/2 - 1 + l`); other arguments fall back to a
/// Lanczos approximation (g = 7, nine terms) with reflection for `x < 1/2`.
pub fn gamma(x: f64) -> f64 {
    if x > 0.0 && x <= 171.0 {
        let twice = 2.0 * x;
        if twice.fract() == 0.0 {
            return gamma_half_integer(twice as u32);
        }
    }
    lanczos_gamma(x)
}

/// `Gamma(m / 2)` for a positive integer `m`.
fn gamma_half_integer(m: u32) -> f64 {
    if m.is_multiple_of(2) {
        // Gamma(k) = (k-1)!
        (1..m / 2).fold(1.0, |acc, j| acc * j as f64)
    } else {
        // Gamma(k + 1/2) = sqrt(pi) * prod_{j=1..k} (j - 1/2)
        let k = m / 2;
        (1..=k).fold(std::f64::consts::PI.sqrt(), |acc, j| acc * (j as f64 - 0.5))
    }
}

fn lanczos_gamma(x: f64) -> f64 {
    use std::f64::consts::PI;
    if x < 0.5 {
        return PI / ((PI * x).sin() * lanczos_gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (k, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (x + k as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
}

/// One evaluation of `i_l` and its first three derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselEval {
    pub n: u32,
    pub l: u32,
    pub z: f64,
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

impl BesselEval {
    /// Order of the underlying `I_nu`.
    pub fn nu(&self) -> f64 {
        order(self.n, self.l)
    }
}

fn order(n: u32, l: u32) -> f64 {
    n as f64 / 2.0 - 1.0 + l as f64
}

fn check_args(n: u32, z: f64) -> Result<()> {
    if n < 2 {
        return Err(Error::Domain(format!("dimension n = {n} must be at least 2")));
    }
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::Domain(format!("argument z = {z} must be positive and finite")));
    }
    Ok(())
}

/// Series coefficients `c_k` with `i_l(z) = sum_k c_k z^(2k + l)`.
///
/// `c_0 = 2^-nu / Gamma(nu + 1)` and `c_{k+1} = c_k / (4 (k+1) (k + nu + 1))`.
/// Returns the coefficients actually needed to reach the relative tolerance
/// at argument `z`.
fn series_coefficients(n: u32, l: u32, z: f64) -> Result<Vec<f64>> {
    let nu = order(n, l);
    let c0 = 2f64.powf(-nu) / gamma(nu + 1.0);
    if !c0.is_finite() {
        return Err(Error::Overflow(format!("leading coefficient for nu = {nu}")));
    }
    let q = z * z;
    let mut coeffs = Vec::with_capacity(64);
    coeffs.push(c0);
    let mut c = c0;
    // Track the partial sum of c_k q^k, normalized by c_0 to avoid underflow.
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..MAX_SERIES_TERMS {
        let kf = k as f64;
        let ratio = 1.0 / (4.0 * (kf + 1.0) * (kf + nu + 1.0));
        c *= ratio;
        term *= ratio * q;
        coeffs.push(c);
        sum += term;
        if !sum.is_finite() {
            return Err(Error::Overflow(format!(
                "series for i_{l} (n = {n}) at z = {z} exceeds the floating range"
            )));
        }
        if term <= SERIES_TOLERANCE * sum * 0.1 {
            return Ok(coeffs);
        }
    }
    Err(Error::NonConvergence(format!(
        "i_{l} (n = {n}) at z = {z} did not converge in {MAX_SERIES_TERMS} terms"
    )))
}

/// `i_l(z)` from the ascending series.
pub fn bessel_i_value(n: u32, l: u32, z: f64) -> Result<f64> {
    check_args(n, z)?;
    let coeffs = series_coefficients(n, l, z)?;
    let q = z * z;
    // Horner in q, highest term first.
    let poly = coeffs.iter().rev().fold(0.0, |acc, c| acc * q + c);
    let value = poly * z.powi(l as i32);
    if !value.is_finite() {
        return Err(Error::Overflow(format!("i_{l} (n = {n}) at z = {z}")));
    }
    if value == 0.0 {
        return Err(Error::Numerical(format!("i_{l} (n = {n}) at z = {z} underflows to zero")));
    }
    Ok(value)
}

/// Evaluate `i_l(z)` and its first three derivatives in dimension `n`.
pub fn bessel_i_ultra(n: u32, l: u32, z: f64) -> Result<BesselEval> {
    check_args(n, z)?;
    let i0 = bessel_i_value(n, l, z)?;
    let i1 = bessel_i_value(n, l + 1, z)?;
    let i2 = bessel_i_value(n, l + 2, z)?;
    let i3 = bessel_i_value(n, l + 3, z)?;
    let lf = l as f64;
    let d1 = lf / z * i0 + i1;
    let d2 = lf * (lf - 1.0) / (z * z) * i0 + (2.0 * lf + 1.0) / z * i1 + i2;
    let d3 = lf * (lf - 1.0) * (lf - 2.0) / (z * z * z) * i0
        + 3.0 * lf * lf / (z * z) * i1
        + (3.0 * lf + 3.0) / z * i2
        + i3;
    Ok(BesselEval { n, l, z, value: i0, d1, d2, d3 })
}

/// Derivative of order `m` obtained by differentiating the series term by term.
///
/// Only used as an independent route for [`recursion_residuals`]. Terms whose
/// falling factorial vanishes are skipped, and truncation is judged against
/// the differentiated sum itself.
fn series_derivative(n: u32, l: u32, z: f64, m: u32) -> Result<f64> {
    let nu = order(n, l);
    let mut c = 2f64.powf(-nu) / gamma(nu + 1.0);
    let mut acc = 0.0;
    for k in 0..MAX_SERIES_TERMS {
        let p = (2 * k as u32 + l) as i64;
        let falling: f64 = (0..m as i64).map(|j| (p - j) as f64).product();
        if falling != 0.0 {
            let term = c * falling * z.powi((p - m as i64) as i32);
            acc += term;
            if !acc.is_finite() {
                return Err(Error::Overflow(format!("differentiated series for i_{l} at z = {z}")));
            }
            if term.abs() <= SERIES_TOLERANCE * acc.abs() * 0.1 {
                return Ok(acc);
            }
        }
        let kf = k as f64;
        c /= 4.0 * (kf + 1.0) * (kf + nu + 1.0);
    }
    Err(Error::NonConvergence(format!(
        "differentiated series for i_{l} (n = {n}) at z = {z} did not converge"
    )))
}

/// Residuals (LHS - RHS) of the four Bessel identities, each paired with the
/// magnitude scale of its terms.
///
/// Identity 0 is the three-term recursion `i_l = ((n + 2l)/z) i_{l+1} + i_{l+2}`;
/// identities 1..=3 are the derivative recursions, with the left-hand side
/// taken from the term-by-term differentiated series so that both sides are
/// computed along different routes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecursionResiduals {
    pub residuals: [f64; 4],
    pub scales: [f64; 4],
}

impl RecursionResiduals {
    pub fn max_abs(&self) -> f64 {
        self.residuals.iter().fold(0.0, |m, r| m.max(r.abs()))
    }

    pub fn max_relative(&self) -> f64 {
        self.residuals
            .iter()
            .zip(&self.scales)
            .fold(0.0, |m, (r, s)| m.max(r.abs() / s.max(f64::MIN_POSITIVE)))
    }
}

pub fn recursion_residuals(n: u32, l: u32, z: f64) -> Result<RecursionResiduals> {
    let eval = bessel_i_ultra(n, l, z)?;
    let i0 = eval.value;
    let i1 = bessel_i_value(n, l + 1, z)?;
    let i2 = bessel_i_value(n, l + 2, z)?;
    let i3 = bessel_i_value(n, l + 3, z)?;
    let lf = l as f64;
    let nf = n as f64;

    let t0 = [(nf + 2.0 * lf) / z * i1, i2];
    let lhs1 = series_derivative(n, l, z, 1)?;
    let t1 = [lf / z * i0, i1];
    let lhs2 = series_derivative(n, l, z, 2)?;
    let t2 = [lf * (lf - 1.0) / (z * z) * i0, (2.0 * lf + 1.0) / z * i1, i2];
    let lhs3 = series_derivative(n, l, z, 3)?;
    let t3 = [
        lf * (lf - 1.0) * (lf - 2.0) / (z * z * z) * i0,
        3.0 * lf * lf / (z * z) * i1,
        (3.0 * lf + 3.0) / z * i2,
        i3,
    ];

    let scale = |lhs: f64, terms: &[f64]| lhs.abs() + terms.iter().map(|t| t.abs()).sum::<f64>();
    Ok(RecursionResiduals {
        residuals: [
            i0 - t0.iter().sum::<f64>(),
            lhs1 - t1.iter().sum::<f64>(),
            lhs2 - t2.iter().sum::<f64>(),
            lhs3 - t3.iter().sum::<f64>(),
        ],
        scales: [scale(i0, &t0), scale(lhs1, &t1), scale(lhs2, &t2), scale(lhs3, &t3)],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gamma_exact_points() {
        assert_eq!(gamma(1.0), 1.0);
        assert_eq!(gamma(5.0), 24.0);
        assert_relative_eq!(gamma(0.5), std::f64::consts::PI.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(
            gamma(3.5),
            15.0 / 8.0 * std::f64::consts::PI.sqrt(),
            max_relative = 1e-15
        );
    }

    #[test]
    fn lanczos_matches_exact_values() {
        for m in 1..60u32 {
            let x = m as f64 / 2.0;
            assert_relative_eq!(lanczos_gamma(x), gamma(x), max_relative = 1e-13);
        }
        // Gamma(1/3) and Gamma(0.1) from tables.
        assert_relative_eq!(gamma(1.0 / 3.0), 2.678_938_534_707_748, max_relative = 1e-14);
        assert_relative_eq!(gamma(0.1), 9.513_507_698_668_732, max_relative = 1e-14);
    }

    #[test]
    fn closed_form_three_dimensions() {
        // n = 3: i_0(z) = sqrt(2/pi) sinh(z) / z
        let e = bessel_i_ultra(3, 0, 1.0).unwrap();
        let exact = (2.0 / std::f64::consts::PI).sqrt() * 1f64.sinh();
        assert_relative_eq!(e.value, exact, max_relative = 1e-14);
        assert_relative_eq!(e.value, 0.937_674_888_245_487_6, max_relative = 1e-14);
    }

    #[test]
    fn small_argument_limit_two_dimensions() {
        let e = bessel_i_ultra(2, 0, 1e-8).unwrap();
        assert_relative_eq!(e.value, 1.0, max_relative = 1e-15);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(matches!(bessel_i_ultra(2, 0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(bessel_i_ultra(2, 0, -1.0), Err(Error::Domain(_))));
        assert!(matches!(bessel_i_ultra(1, 0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(bessel_i_ultra(2, 0, f64::NAN), Err(Error::Domain(_))));
    }

    #[test]
    fn overflow_is_reported() {
        assert!(matches!(bessel_i_value(2, 0, 800.0), Err(Error::Overflow(_))));
    }

    #[test]
    fn identities_at_spec_points() {
        let r = recursion_residuals(2, 1, 1.0).unwrap();
        assert!(r.max_abs() <= 1e-12, "{r:?}");
        let r = recursion_residuals(3, 0, 5.0).unwrap();
        let i0 = bessel_i_value(3, 0, 5.0).unwrap();
        assert!(r.max_abs() <= 1e-11 * i0, "{r:?}");
        let r = recursion_residuals(5, 3, 0.1).unwrap();
        assert!(r.max_abs() <= 1e-12, "{r:?}");
    }
}
