use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::domain::{Point, StarDomain};
use crate::geometry::quadrature::{boundary_rule, QuadratureRule};

/// Relative change under node doubling above which a boundary integral is
/// flagged as under-resolved.
pub const REFINEMENT_TOLERANCE: f64 = 1e-8;

/// A quadrature value with the relative change observed when the node
/// count is doubled.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureEstimate {
    pub value: f64,
    pub refinement_change: f64,
}

impl QuadratureEstimate {
    pub fn is_resolved(&self) -> bool {
        self.refinement_change <= REFINEMENT_TOLERANCE
    }
}

/// `int_{dOmega} |x - origin|^p dS` using the boundary nodes of `quad`, checked
/// against a rule with twice as many nodes.
pub fn boundary_moment_about(
    domain: &StarDomain,
    quad: &QuadratureRule,
    p: f64,
    origin: Point,
) -> Result<QuadratureEstimate> {
    if !(p > 1.0) {
        return Err(Error::Domain(format!("moment exponent p = {p} must exceed 1")));
    }
    let f = |x: &Point| (x[0] - origin[0]).hypot(x[1] - origin[1]).powf(p);
    let value: f64 = quad.boundary_points.iter().zip(&quad.boundary_weights).map(|(x, w)| w * f(x)).sum();
    let (pts, wts) = boundary_rule(domain, 2 * quad.boundary_points.len());
    let fine: f64 = pts.iter().zip(&wts).map(|(x, w)| w * f(x)).sum();
    let refinement_change = (fine - value).abs() / fine.abs().max(f64::MIN_POSITIVE);
    if refinement_change > REFINEMENT_TOLERANCE {
        warn!("boundary moment under-resolved: doubling nodes changed it by {refinement_change:.2e}");
    }
    Ok(QuadratureEstimate { value, refinement_change })
}

/// `int_{dOmega} |x|^p dS` with coordinates about the domain's declared center.
pub fn boundary_moment(
    domain: &StarDomain,
    quad: &QuadratureRule,
    p: f64,
) -> Result<QuadratureEstimate> {
    boundary_moment_about(domain, quad, p, domain.center)
}

/// Boundary centroid `(1/|dOmega|) int_{dOmega} y dS`. Coordinates taken about
/// this point have zero mean over the boundary.
pub fn centroid_shift(quad: &QuadratureRule) -> Point {
    let len = quad.perimeter();
    let sx = quad.integrate_boundary(|p| p[0]);
    let sy = quad.integrate_boundary(|p| p[1]);
    [sx / len, sy / len]
}

/// Area centroid `(1/|Omega|) int_Omega y dx`.
pub fn area_centroid(quad: &QuadratureRule) -> Point {
    let a = quad.area();
    [quad.integrate_interior(|p| p[0]) / a, quad.integrate_interior(|p| p[1]) / a]
}

/// The boundary-moment constant `c_{n,p}` and the stability constant `delta_n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityConstants {
    pub c_np: f64,
    pub delta_n: f64,
}

/// `c_{n,p} = ((n+p-1)(p-1)/4) ((2^(1/n) - 1)/n) min_{t in [1, 2^(1/n)]} t^(p-1)`
/// and `delta_n = ((n+1)/(8n)) (2^(1/n) - 1)`.
pub fn stability_constants(n: u32, p: f64) -> Result<StabilityConstants> {
    if n < 2 {
        return Err(Error::Domain(format!("dimension n = {n} must be at least 2")));
    }
    if !(p > 1.0) {
        return Err(Error::Domain(format!("exponent p = {p} must exceed 1")));
    }
    let nf = n as f64;
    let root = 2f64.powf(1.0 / nf) - 1.0;
    // t^(p-1) is increasing on [1, 2^(1/n)] for p > 1
    let min_t = 1.0;
    let c_np = (nf + p - 1.0) * (p - 1.0) / 4.0 * root / nf * min_t;
    let delta_n = (nf + 1.0) / (8.0 * nf) * root;
    Ok(StabilityConstants { c_np, delta_n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::DomainSpec;
    use crate::spectrum::QuadratureSizes;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn rule(d: &StarDomain) -> QuadratureRule {
        QuadratureRule::new(d, QuadratureSizes::default()).unwrap()
    }

    #[test]
    fn moments_of_disks() {
        let d = DomainSpec::unit_disk().resolve().unwrap();
        let m = boundary_moment(&d, &rule(&d), 2.0).unwrap();
        assert_relative_eq!(m.value, 2.0 * PI, max_relative = 1e-13);
        assert!(m.is_resolved());
        let d2 = DomainSpec::disk(2.0).resolve().unwrap();
        let m = boundary_moment(&d2, &rule(&d2), 2.0).unwrap();
        assert_relative_eq!(m.value, 16.0 * PI, max_relative = 1e-13);
        assert!(boundary_moment(&d, &rule(&d), 1.0).is_err());
    }

    #[test]
    fn constants() {
        let c = stability_constants(2, 2.0).unwrap();
        assert_relative_eq!(c.c_np, 3.0 * (2f64.sqrt() - 1.0) / 8.0, max_relative = 1e-15);
        assert_relative_eq!(c.c_np, 0.155_330, epsilon = 1e-6);
        assert_relative_eq!(c.delta_n, 3.0 / 16.0 * (2f64.sqrt() - 1.0), max_relative = 1e-15);
        assert_relative_eq!(c.delta_n, 0.077_665_0, epsilon = 1e-7);
        let c3 = stability_constants(3, 2.0).unwrap();
        assert_relative_eq!(c3.c_np, (2f64.cbrt() - 1.0) / 3.0, max_relative = 1e-15);
        assert_relative_eq!(c3.c_np, 0.086_640_35, epsilon = 1e-8);
    }

    #[test]
    fn centroids() {
        let d = DomainSpec::unit_disk().resolve().unwrap();
        let c = centroid_shift(&rule(&d));
        assert!(c[0].abs() < 1e-14 && c[1].abs() < 1e-14);
        let d = DomainSpec::Disk { radius: 1.0, center: [1.0, 3.0] }.resolve().unwrap();
        let c = centroid_shift(&rule(&d));
        assert_relative_eq!(c[0], 1.0, epsilon = 1e-13);
        assert_relative_eq!(c[1], 3.0, epsilon = 1e-13);
    }
}
