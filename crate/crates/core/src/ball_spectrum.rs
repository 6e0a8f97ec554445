//! Closed-form spectrum of the unit ball.
//!
//! Every eigenfunction separates as `u_l = R_l(r) Y_l(theta)` with a degree-`l`
//! spherical harmonic `Y_l` and radial profile
//! `R_l(r) = A_l r^l + B_l i_l(sqrt(tau) r)`. The eigenvalue attached to index
//! `l` is available both as the literal ratio `N_(l) / D_(l)` written in terms
//! of `i_l` and its derivatives, and as the simplified form
//! `tau l + (correction)` written in terms of `i_{l+1}, i_{l+2}`. The two are
//! computed independently and cross-checked in the tests.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special_functions::{bessel_i_ultra, bessel_i_value, BesselEval};
use crate::spectrum::{Cluster, Spectrum};

/// Relative size below which a denominator is treated as vanished.
const DENOMINATOR_FLOOR: f64 = 1e-12;

/// Physical parameters of the plate: dimension, tension and Poisson ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlateParams {
    pub n: u32,
    pub tau: f64,
    pub sigma: f64,
}

impl PlateParams {
    /// Validated constructor: `n >= 2`, `tau > 0`, `sigma` in `(-1/(n-1), 1)`.
    pub fn new(n: u32, tau: f64, sigma: f64) -> Result<Self> {
        let p = Self { n, tau, sigma };
        p.validate()?;
        Ok(p)
    }

    /// Construct without checking admissibility. Used to probe what happens
    /// outside the admissible window (indefinite energy form).
    pub fn new_unchecked(n: u32, tau: f64, sigma: f64) -> Self {
        Self { n, tau, sigma }
    }

    pub fn planar(tau: f64, sigma: f64) -> Result<Self> {
        Self::new(2, tau, sigma)
    }

    /// Open interval of admissible Poisson ratios.
    pub fn sigma_window(n: u32) -> (f64, f64) {
        (-1.0 / (n as f64 - 1.0), 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Inadmissible(format!("n = {}", self.n)));
        }
        if !(self.tau > 0.0) || !self.tau.is_finite() {
            return Err(Error::Inadmissible(format!("tau = {}", self.tau)));
        }
        let (lo, hi) = Self::sigma_window(self.n);
        if !(self.sigma > lo && self.sigma < hi) {
            return Err(Error::Inadmissible(format!(
                "sigma = {} outside ({lo}, {hi}) for n = {}",
                self.sigma, self.n
            )));
        }
        debug_assert!(1.0 + self.sigma * (self.n as f64 - 1.0) > 0.0);
        Ok(())
    }

    pub fn is_admissible(&self) -> bool {
        self.validate().is_ok()
    }

    /// Same plate with a different tension.
    pub fn with_tau(&self, tau: f64) -> Self {
        Self { tau, ..*self }
    }
}

/// One closed-form mode of the unit ball.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BallMode {
    pub params: PlateParams,
    pub l: u32,
    pub lambda: f64,
    pub a_coef: f64,
    pub b_coef: f64,
    /// Literal denominator `D_(l)` of the eigenvalue ratio.
    pub denom: f64,
    /// Literal numerator `N_(l)`.
    pub numer: f64,
}

/// Angular factor of a planar mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Cos,
    Sin,
}

impl BallMode {
    /// Radial profile `R_l(r)`.
    pub fn radial(&self, r: f64) -> Result<f64> {
        let mut v = self.a_coef * r.powi(self.l as i32);
        if self.b_coef != 0.0 && r > 0.0 {
            let z = self.params.tau.sqrt() * r;
            v += self.b_coef * bessel_i_value(self.params.n, self.l, z)?;
        }
        Ok(v)
    }

    /// Pointwise eigenfunction for `n = 2`: `R_l(r) cos(l theta)` or `R_l(r) sin(l theta)`.
    pub fn eval_planar(&self, r: f64, theta: f64, parity: Parity) -> Result<f64> {
        if self.params.n != 2 {
            return Err(Error::Domain(
                "pointwise eigenfunctions are only available for n = 2".into(),
            ));
        }
        if self.l == 0 && parity == Parity::Sin {
            return Ok(0.0);
        }
        let angle = self.l as f64 * theta;
        let y = match parity {
            Parity::Cos => angle.cos(),
            Parity::Sin => angle.sin(),
        };
        Ok(self.radial(r)? * y)
    }
}

fn bessel_at_sqrt_tau(params: &PlateParams, l: u32) -> Result<BesselEval> {
    bessel_i_ultra(params.n, l, params.tau.sqrt())
}

/// Denominator `tau i'' + sqrt(tau) sigma (n-1) i' - sigma l(l+n-2) i` shared by
/// `B_l` and the first boundary condition, with its term-magnitude scale.
fn b_denominator(params: &PlateParams, l: u32, e: &BesselEval) -> (f64, f64) {
    let (n, tau, s) = (params.n as f64, params.tau, params.sigma);
    let lf = l as f64;
    let terms = [
        tau * e.d2,
        tau.sqrt() * s * (n - 1.0) * e.d1,
        -s * lf * (lf + n - 2.0) * e.value,
    ];
    (terms.iter().sum(), terms.iter().map(|t| t.abs()).sum())
}

fn check_denominator(value: f64, scale: f64, what: &str) -> Result<()> {
    if !(value.abs() > DENOMINATOR_FLOOR * scale) {
        return Err(Error::Numerical(format!(
            "{what} = {value:.3e} vanishes relative to its terms ({scale:.3e})"
        )));
    }
    Ok(())
}

/// `(N_(l), D_(l))` of the eigenvalue ratio, written with `i_l, i_l', i_l'', i_l'''`.
fn raw_ratio(params: &PlateParams, l: u32) -> Result<(f64, f64)> {
    params.validate()?;
    if l == 0 {
        return Ok((0.0, 1.0));
    }
    let e = bessel_at_sqrt_tau(params, l)?;
    let (n, tau, s) = (params.n as f64, params.tau, params.sigma);
    let st = tau.sqrt();
    let lf = l as f64;

    let (bden, bscale) = b_denominator(params, l, &e);
    let extra = (1.0 - s) * lf * (1.0 - lf) * e.value;
    let denom = bden + extra;
    check_denominator(denom, bscale + extra.abs(), "eigenvalue denominator")?;

    let c0 = -lf * lf
        * (lf + n - 2.0)
        * (s * tau + (1.0 - s) * (lf - 1.0) * (s * lf + s * n - 3.0 - s));
    let c1 = tau * st * lf * (s * n + lf * s - 2.0 * s - lf + 1.0)
        + st * (1.0 - s)
            * lf
            * (lf - 1.0)
            * ((lf + n - 2.0) * (s * n - s - 2.0 * lf + s * lf) - n + 1.0);
    let c2 = tau * lf * (tau + (1.0 - s) * (lf + 2.0 * n - 3.0) * (lf - 1.0));
    let c3 = tau * st * (1.0 - s) * lf * (lf - 1.0);
    let numer = c0 * e.value + c1 * e.d1 + c2 * e.d2 + c3 * e.d3;
    Ok((numer, denom))
}

/// Eigenvalue `lambda_(l)` from the literal ratio in terms of `i_l` and its
/// first three derivatives.
pub fn mode_eigenvalue_raw(params: &PlateParams, l: u32) -> Result<f64> {
    let (numer, denom) = raw_ratio(params, l)?;
    Ok(numer / denom)
}

/// Eigenvalue `lambda_(l)` as `tau l` plus a correction built from
/// `i_{l+1}(sqrt tau)` and `i_{l+2}(sqrt tau)`.
///
/// The correction carries the factor `(1 - sigma) l (l - 1)` and vanishes for
/// `l` in `{0, 1}`; every other factor is positive in the admissible window.
pub fn mode_eigenvalue_simplified(params: &PlateParams, l: u32) -> Result<f64> {
    params.validate()?;
    let (n, tau, s) = (params.n as f64, params.tau, params.sigma);
    let lf = l as f64;
    let base = tau * lf;
    if l <= 1 {
        return Ok(base);
    }
    let st = tau.sqrt();
    let i1 = bessel_i_value(params.n, l + 1, st)?;
    let i2 = bessel_i_value(params.n, l + 2, st)?;
    let denom = simplified_denominator(params, l, i1, i2);
    check_denominator(denom, denom.abs(), "simplified denominator")?;
    let p = (lf + n - 2.0) * (s * n - s + s * lf + 1.0) + 3.0 * lf * lf + 2.0 * n * lf - 2.0 * lf;
    let q = st * (2.0 * lf + n - 2.0);
    let correction = (1.0 - s) * lf * (lf - 1.0) * (p * i1 + q * i2) / denom;
    Ok(base + correction)
}

/// `(2l + sigma n + 1 - sigma) i_{l+1} + sqrt(tau) i_{l+2}` (the simplified
/// denominator divided by `sqrt(tau)`); positive whenever `1 + sigma(n-1) > 0`.
fn simplified_denominator(params: &PlateParams, l: u32, i1: f64, i2: f64) -> f64 {
    let (n, s) = (params.n as f64, params.sigma);
    (2.0 * l as f64 + s * n + 1.0 - s) * i1 + params.tau.sqrt() * i2
}

/// Bessel-free lower bound on `lambda_(l)` used to certify the sorted prefix.
///
/// The correction in [`mode_eigenvalue_simplified`] is a ratio
/// `(P a + Q b) / (R a + b)` with positive `a, b, R`, so it is bounded below by
/// `(1 - sigma) l (l-1) min(P / R, 2l + n - 2)`. This dominates `tau l`.
pub fn mode_eigenvalue_lower_bound(params: &PlateParams, l: u32) -> f64 {
    let (n, tau, s) = (params.n as f64, params.tau, params.sigma);
    let lf = l as f64;
    if l <= 1 {
        return tau * lf;
    }
    let p = (lf + n - 2.0) * (s * n - s + s * lf + 1.0) + 3.0 * lf * lf + 2.0 * n * lf - 2.0 * lf;
    let r = 2.0 * lf + s * n + 1.0 - s;
    let ratio = (p / r).min(2.0 * lf + n - 2.0).max(0.0);
    tau * lf + (1.0 - s) * lf * (lf - 1.0) * ratio
}

/// `B_l` for the normalization `A_l = 1`.
pub fn mode_b_coefficient(params: &PlateParams, l: u32) -> Result<f64> {
    params.validate()?;
    if l <= 1 {
        return Ok(0.0);
    }
    let e = bessel_at_sqrt_tau(params, l)?;
    let (den, scale) = b_denominator(params, l, &e);
    check_denominator(den, scale, "B_l denominator")?;
    let lf = l as f64;
    Ok((1.0 - params.sigma) * lf * (1.0 - lf) / den)
}

/// Build the closed-form mode with angular index `l`.
pub fn ball_mode(params: &PlateParams, l: u32) -> Result<BallMode> {
    let (numer, denom) = raw_ratio(params, l)?;
    let b_coef = mode_b_coefficient(params, l)?;
    Ok(BallMode { params: *params, l, lambda: numer / denom, a_coef: 1.0, b_coef, denom, numer })
}

/// Residuals of the two boundary conditions at `r = 1`:
///
/// ```text
/// (1 - sigma) R'' + sigma (Delta R)                                  = 0
/// tau R' + (1 - sigma) L (R' - R) - (Delta R)' - lambda R           = 0
/// ```
///
/// with `L = l(l + n - 2)` the spherical-harmonic eigenvalue and
/// `Delta R = R'' + (n-1)/r R' - L/r^2 R` the radial Laplacian. The profile
/// derivatives are taken directly, without using the Bessel ODE.
pub fn boundary_residuals(mode: &BallMode) -> Result<[f64; 2]> {
    let p = &mode.params;
    let (n, tau, s) = (p.n as f64, p.tau, p.sigma);
    let lf = mode.l as f64;
    let big_l = lf * (lf + n - 2.0);

    // Derivatives of r^l at r = 1.
    let mut r = [
        mode.a_coef,
        mode.a_coef * lf,
        mode.a_coef * lf * (lf - 1.0),
        mode.a_coef * lf * (lf - 1.0) * (lf - 2.0),
    ];
    if mode.b_coef != 0.0 {
        let e = bessel_at_sqrt_tau(p, mode.l)?;
        let st = tau.sqrt();
        r[0] += mode.b_coef * e.value;
        r[1] += mode.b_coef * st * e.d1;
        r[2] += mode.b_coef * tau * e.d2;
        r[3] += mode.b_coef * tau * st * e.d3;
    }
    let lap = r[2] + (n - 1.0) * r[1] - big_l * r[0];
    let lap_dr = r[3] + (n - 1.0) * (r[2] - r[1]) - big_l * (r[1] - 2.0 * r[0]);
    let bc1 = (1.0 - s) * r[2] + s * lap;
    let bc2 = tau * r[1] + (1.0 - s) * big_l * (r[1] - r[0]) - lap_dr - mode.lambda * r[0];
    Ok([bc1, bc2])
}

/// Dimension of the space of degree-`l` spherical harmonics in `R^n`.
pub fn harmonic_multiplicity(n: u32, l: u32) -> u64 {
    fn binom(top: i64, k: i64) -> u64 {
        if k < 0 || top < k || top < 0 {
            return 0;
        }
        let k = k.min(top - k);
        (0..k).fold(1u64, |acc, j| acc * (top - j) as u64 / (j + 1) as u64)
    }
    let (n, l) = (n as i64, l as i64);
    binom(n + l - 1, l) - binom(n + l - 3, l - 2)
}

/// First `count` eigenvalues of the unit ball, sorted, with multiplicities.
///
/// Indices `l = 0, 1, 2, ...` are evaluated until the certified lower bound
/// of the next index exceeds the largest value kept, so the returned prefix
/// is complete.
pub fn ball_spectrum(params: &PlateParams, count: usize) -> Result<Spectrum> {
    params.validate()?;
    if count == 0 {
        return Err(Error::Domain("count must be at least 1".into()));
    }
    let mut modes: Vec<(f64, u32, u64)> = Vec::new();
    let mut l = 0u32;
    loop {
        if modes.iter().map(|m| m.2).sum::<u64>() >= count as u64 {
            let mut sorted = modes.clone();
            sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut seen = 0u64;
            let mut cutoff = f64::INFINITY;
            for (lambda, _, m) in &sorted {
                seen += m;
                if seen >= count as u64 {
                    cutoff = *lambda;
                    break;
                }
            }
            if mode_eigenvalue_lower_bound(params, l) > cutoff {
                break;
            }
        }
        let lambda = mode_eigenvalue_simplified(params, l)?;
        modes.push((lambda, l, harmonic_multiplicity(params.n, l)));
        l += 1;
    }
    modes.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut eigenvalues = Vec::with_capacity(count);
    let mut clusters = Vec::new();
    for (lambda, l, m) in modes {
        if eigenvalues.len() >= count {
            break;
        }
        let take = (m as usize).min(count - eigenvalues.len());
        clusters.push(Cluster {
            start: eigenvalues.len(),
            size: take,
            value: lambda,
            angular_index: Some(l),
        });
        eigenvalues.extend(std::iter::repeat_n(lambda, take));
    }
    let mut s = Spectrum::from_sorted(eigenvalues);
    s.clusters = clusters;
    Ok(s)
}
