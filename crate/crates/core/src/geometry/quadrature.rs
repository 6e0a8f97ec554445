use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::domain::{Point, StarDomain};
use crate::spectrum::QuadratureSizes;

/// Gauss–Legendre nodes and weights on `[0, 1]`.
pub fn gauss_legendre_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    let nf = n as f64;
    for i in 0..m {
        // Chebyshev-type initial guess for the i-th root of P_n on [-1, 1].
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = 0.5 * (1.0 - x);
        nodes[n - 1 - i] = 0.5 * (1.0 + x);
        weights[i] = 0.5 * w;
        weights[n - 1 - i] = 0.5 * w;
    }
    (nodes, weights)
}

/// Interior and boundary quadrature on a star domain.
///
/// Interior: Gauss–Legendre in the normalized radius `t` times the
/// trapezoid rule in the polar angle, mapped through
/// `x = c + t r(theta) e(theta)` with Jacobian `t r(theta)^2`.
/// Boundary: trapezoid rule in `theta` with arc-length weight `|(r, r')|`.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub interior_points: Vec<Point>,
    pub interior_weights: Vec<f64>,
    pub boundary_points: Vec<Point>,
    pub boundary_weights: Vec<f64>,
    pub sizes: QuadratureSizes,
}

impl QuadratureRule {
    pub fn new(domain: &StarDomain, sizes: QuadratureSizes) -> Result<Self> {
        check_sizes(&sizes)?;
        let (tn, tw) = gauss_legendre_unit(sizes.radial);
        let dtheta = 2.0 * PI / sizes.angular as f64;
        let mut interior_points = Vec::with_capacity(sizes.radial * sizes.angular);
        let mut interior_weights = Vec::with_capacity(sizes.radial * sizes.angular);
        for j in 0..sizes.angular {
            let theta = j as f64 * dtheta;
            let r = domain.radius(theta);
            let (s, c) = theta.sin_cos();
            for (t, w) in tn.iter().zip(&tw) {
                interior_points.push([domain.center[0] + t * r * c, domain.center[1] + t * r * s]);
                interior_weights.push(w * t * r * r * dtheta);
            }
        }
        let (boundary_points, boundary_weights) = boundary_rule(domain, sizes.boundary);
        Ok(Self { interior_points, interior_weights, boundary_points, boundary_weights, sizes })
    }

    /// `|Omega|`.
    pub fn area(&self) -> f64 {
        self.interior_weights.iter().sum()
    }

    /// `|dOmega|`.
    pub fn perimeter(&self) -> f64 {
        self.boundary_weights.iter().sum()
    }

    pub fn integrate_interior(&self, f: impl Fn(Point) -> f64) -> f64 {
        self.interior_points.iter().zip(&self.interior_weights).map(|(p, w)| w * f(*p)).sum()
    }

    pub fn integrate_boundary(&self, f: impl Fn(Point) -> f64) -> f64 {
        self.boundary_points.iter().zip(&self.boundary_weights).map(|(p, w)| w * f(*p)).sum()
    }
}

fn check_sizes(sizes: &QuadratureSizes) -> Result<()> {
    if sizes.radial == 0 || sizes.angular < 3 || sizes.boundary < 3 {
        return Err(Error::Domain(format!("quadrature sizes too small: {sizes:?}")));
    }
    Ok(())
}

pub(crate) fn boundary_rule(domain: &StarDomain, count: usize) -> (Vec<Point>, Vec<f64>) {
    let dtheta = 2.0 * PI / count as f64;
    (0..count)
        .map(|j| {
            let theta = j as f64 * dtheta;
            (domain.boundary_point(theta), domain.speed(theta) * dtheta)
        })
        .unzip()
}

/// Interior rule split along each ray at the inner parallel curve at depth
/// `eps`, so that a density jumping across that curve is integrated by
/// panels on either side.
#[derive(Debug, Clone)]
pub struct ShellQuadrature {
    pub rule: QuadratureRule,
    /// `true` for nodes whose distance to the boundary exceeds `eps`.
    pub in_core: Vec<bool>,
    pub eps: f64,
    /// Fewest shell nodes found along any single ray.
    pub min_shell_nodes_per_ray: usize,
}

impl ShellQuadrature {
    /// `shell_radial` Gauss nodes are placed on the shell panel of each ray
    /// and `sizes.radial` on the core panel.
    pub fn new(
        domain: &StarDomain,
        sizes: QuadratureSizes,
        shell_radial: usize,
        eps: f64,
    ) -> Result<Self> {
        check_sizes(&sizes)?;
        if shell_radial == 0 {
            return Err(Error::Domain("shell panel needs at least one node".into()));
        }
        let (cn, cw) = gauss_legendre_unit(sizes.radial);
        let (sn, sw) = gauss_legendre_unit(shell_radial);
        let dtheta = 2.0 * PI / sizes.angular as f64;
        let per_ray = sizes.radial + shell_radial;
        let mut points = Vec::with_capacity(per_ray * sizes.angular);
        let mut weights = Vec::with_capacity(per_ray * sizes.angular);
        let mut in_core = Vec::with_capacity(per_ray * sizes.angular);
        let mut min_shell = usize::MAX;
        for j in 0..sizes.angular {
            let theta = j as f64 * dtheta;
            let r = domain.radius(theta);
            let (s, c) = theta.sin_cos();
            let at = |t: f64| [domain.center[0] + t * r * c, domain.center[1] + t * r * s];
            let split = ray_split(domain, &at, r, eps);
            let mut shell_here = 0;
            let panels = [(0.0, split, &cn, &cw), (split, 1.0, &sn, &sw)];
            for (a, b, nodes, ws) in panels {
                let len = b - a;
                for (u, w) in nodes.iter().zip(ws.iter()) {
                    let t = a + len * u;
                    let p = at(t);
                    let core = domain.distance_to_boundary(p) > eps;
                    if !core {
                        shell_here += 1;
                    }
                    points.push(p);
                    weights.push(w * len * t * r * r * dtheta);
                    in_core.push(core);
                }
            }
            min_shell = min_shell.min(shell_here);
        }
        let (boundary_points, boundary_weights) = boundary_rule(domain, sizes.boundary);
        let rule = QuadratureRule {
            interior_points: points,
            interior_weights: weights,
            boundary_points,
            boundary_weights,
            sizes: QuadratureSizes { radial: per_ray, ..sizes },
        };
        Ok(Self { rule, in_core, eps, min_shell_nodes_per_ray: min_shell })
    }

    pub fn core_area(&self) -> f64 {
        self.masked_area(true)
    }

    pub fn shell_area(&self) -> f64 {
        self.masked_area(false)
    }

    fn masked_area(&self, core: bool) -> f64 {
        self.rule
            .interior_weights
            .iter()
            .zip(&self.in_core)
            .filter(|(_, c)| **c == core)
            .map(|(w, _)| w)
            .sum()
    }
}

/// Normalized radius along a ray where the distance to the boundary drops to `eps`.
fn ray_split(domain: &StarDomain, at: &impl Fn(f64) -> Point, r: f64, eps: f64) -> f64 {
    let dist = |t: f64| domain.distance_to_boundary(at(t));
    // Walk inward from the boundary until the point is deeper than eps.
    let step = (eps / r).min(1.0) * 0.5;
    let mut hi = 1.0;
    let mut lo = (1.0 - step).max(0.0);
    while lo > 0.0 && dist(lo) <= eps {
        hi = lo;
        lo = (lo - step).max(0.0);
    }
    if dist(lo) <= eps {
        return 0.0;
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if dist(mid) > eps {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
