use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Point = [f64; 2];

fn origin() -> Point {
    [0.0, 0.0]
}

/// Parametrized planar domain, star-shaped about `center`.
///
/// JSON form is tagged by `kind`:
///
/// ```json
/// {"kind": "disk", "radius": 1.0, "center": [0, 0]}
/// {"kind": "ellipse", "a": 2.0, "b": 0.5, "center": [0, 0]}
/// {"kind": "star", "base": 1.0, "fourier_cos": [0.0, 0.0, 0.25], "fourier_sin": []}
/// {"kind": "scaled", "inner": {"kind": "disk", "radius": 1.0}, "s": 2.0}
/// ```
///
/// For `star` the radius is `base + sum_k fourier_cos[k-1] cos(k t) + fourier_sin[k-1] sin(k t)`.
/// `scaled` denotes `s * inner = {x : x / s in inner}`, which scales the
/// center as well.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DomainSpec {
    Disk {
        radius: f64,
        #[serde(default = "origin")]
        center: Point,
    },
    Ellipse {
        a: f64,
        b: f64,
        #[serde(default = "origin")]
        center: Point,
    },
    Star {
        base: f64,
        #[serde(default)]
        fourier_cos: Vec<f64>,
        #[serde(default)]
        fourier_sin: Vec<f64>,
        #[serde(default = "origin")]
        center: Point,
    },
    Scaled {
        inner: Box<DomainSpec>,
        s: f64,
    },
}

impl DomainSpec {
    pub fn unit_disk() -> Self {
        DomainSpec::Disk { radius: 1.0, center: origin() }
    }

    pub fn disk(radius: f64) -> Self {
        DomainSpec::Disk { radius, center: origin() }
    }

    pub fn ellipse(a: f64, b: f64) -> Self {
        DomainSpec::Ellipse { a, b, center: origin() }
    }

    pub fn star(base: f64, fourier_cos: Vec<f64>, fourier_sin: Vec<f64>) -> Self {
        DomainSpec::Star { base, fourier_cos, fourier_sin, center: origin() }
    }

    pub fn scaled(self, s: f64) -> Self {
        DomainSpec::Scaled { inner: Box::new(self), s }
    }

    /// Same shape with its center moved to `center` (for the outermost
    /// non-scaled variant; scaled shapes are translated through `inner`).
    pub fn translated(self, by: Point) -> Self {
        match self {
            DomainSpec::Disk { radius, center } => {
                DomainSpec::Disk { radius, center: [center[0] + by[0], center[1] + by[1]] }
            }
            DomainSpec::Ellipse { a, b, center } => {
                DomainSpec::Ellipse { a, b, center: [center[0] + by[0], center[1] + by[1]] }
            }
            DomainSpec::Star { base, fourier_cos, fourier_sin, center } => DomainSpec::Star {
                base,
                fourier_cos,
                fourier_sin,
                center: [center[0] + by[0], center[1] + by[1]],
            },
            DomainSpec::Scaled { inner, s } => DomainSpec::Scaled {
                inner: Box::new(inner.translated([by[0] / s, by[1] / s])),
                s,
            },
        }
    }

    /// Validate and flatten into a [`StarDomain`].
    pub fn resolve(&self) -> Result<StarDomain> {
        let domain = match self {
            DomainSpec::Disk { radius, center } => {
                positive(*radius, "disk radius")?;
                StarDomain::new(*center, 1.0, Profile::Circle { radius: *radius })
            }
            DomainSpec::Ellipse { a, b, center } => {
                positive(*a, "ellipse semi-axis a")?;
                positive(*b, "ellipse semi-axis b")?;
                StarDomain::new(*center, 1.0, Profile::Ellipse { a: *a, b: *b })
            }
            DomainSpec::Star { base, fourier_cos, fourier_sin, center } => {
                positive(*base, "star base radius")?;
                if fourier_cos.iter().chain(fourier_sin).any(|c| !c.is_finite()) {
                    return Err(Error::Geometry("non-finite Fourier coefficient".into()));
                }
                StarDomain::new(
                    *center,
                    1.0,
                    Profile::Fourier {
                        base: *base,
                        cos: fourier_cos.clone(),
                        sin: fourier_sin.clone(),
                    },
                )
            }
            DomainSpec::Scaled { inner, s } => {
                positive(*s, "scale factor")?;
                let d = inner.resolve()?;
                StarDomain::new([d.center[0] * s, d.center[1] * s], d.scale * s, d.profile)
            }
        };
        domain.check_star_shaped()?;
        Ok(domain)
    }
}

fn positive(v: f64, what: &str) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Geometry(format!("{what} must be positive and finite, got {v}")))
    }
}

/// Unscaled radius function about the center.
#[derive(Debug, Clone, PartialEq)]
pub enum Profile {
    Circle { radius: f64 },
    Ellipse { a: f64, b: f64 },
    Fourier { base: f64, cos: Vec<f64>, sin: Vec<f64> },
}

impl Profile {
    /// `[r, r', r'']` at polar angle `t`.
    fn derivs(&self, t: f64) -> [f64; 3] {
        match self {
            Profile::Circle { radius } => [*radius, 0.0, 0.0],
            Profile::Ellipse { a, b } => {
                let (s, c) = t.sin_cos();
                let (s2, c2) = (2.0 * t).sin_cos();
                let q = b * b * c * c + a * a * s * s;
                let dq = (a * a - b * b) * s2;
                let ddq = 2.0 * (a * a - b * b) * c2;
                let ab = a * b;
                let r = ab / q.sqrt();
                let dr = -0.5 * ab * q.powf(-1.5) * dq;
                let ddr = ab * (0.75 * q.powf(-2.5) * dq * dq - 0.5 * q.powf(-1.5) * ddq);
                [r, dr, ddr]
            }
            Profile::Fourier { base, cos, sin } => {
                let mut out = [*base, 0.0, 0.0];
                for (k, c) in cos.iter().enumerate() {
                    let kf = (k + 1) as f64;
                    let (sk, ck) = (kf * t).sin_cos();
                    out[0] += c * ck;
                    out[1] -= c * kf * sk;
                    out[2] -= c * kf * kf * ck;
                }
                for (k, c) in sin.iter().enumerate() {
                    let kf = (k + 1) as f64;
                    let (sk, ck) = (kf * t).sin_cos();
                    out[0] += c * sk;
                    out[1] += c * kf * ck;
                    out[2] -= c * kf * kf * sk;
                }
                out
            }
        }
    }

    fn area(&self) -> f64 {
        match self {
            Profile::Circle { radius } => PI * radius * radius,
            Profile::Ellipse { a, b } => PI * a * b,
            Profile::Fourier { base, cos, sin } => {
                let sq: f64 = cos.iter().chain(sin).map(|c| c * c).sum();
                PI * base * base + 0.5 * PI * sq
            }
        }
    }
}

/// Resolved star-shaped domain `{center + t r(theta) (cos theta, sin theta) : 0 <= t < 1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct StarDomain {
    pub center: Point,
    pub scale: f64,
    pub profile: Profile,
}

/// Number of samples used for sampled geometric quantities.
const SAMPLES: usize = 4096;

impl StarDomain {
    fn new(center: Point, scale: f64, profile: Profile) -> Self {
        Self { center, scale, profile }
    }

    /// `[r, r', r'']` at polar angle `t`.
    pub fn radius_derivs(&self, t: f64) -> [f64; 3] {
        let [r, dr, ddr] = self.profile.derivs(t);
        [self.scale * r, self.scale * dr, self.scale * ddr]
    }

    pub fn radius(&self, t: f64) -> f64 {
        self.radius_derivs(t)[0]
    }

    pub fn boundary_point(&self, t: f64) -> Point {
        let r = self.radius(t);
        let (s, c) = t.sin_cos();
        [self.center[0] + r * c, self.center[1] + r * s]
    }

    /// Derivative of the boundary parametrization with respect to `t`.
    pub fn boundary_tangent(&self, t: f64) -> Point {
        let [r, dr, _] = self.radius_derivs(t);
        let (s, c) = t.sin_cos();
        [dr * c - r * s, dr * s + r * c]
    }

    /// Arc-length speed `|(r, r')|`.
    pub fn speed(&self, t: f64) -> f64 {
        let [r, dr, _] = self.radius_derivs(t);
        r.hypot(dr)
    }

    /// Signed curvature of the boundary at parameter `t` (positive for convex arcs).
    pub fn curvature(&self, t: f64) -> f64 {
        let [r, dr, ddr] = self.radius_derivs(t);
        (r * r + 2.0 * dr * dr - r * ddr) / (r * r + dr * dr).powf(1.5)
    }

    pub fn area(&self) -> f64 {
        self.scale * self.scale * self.profile.area()
    }

    fn check_star_shaped(&self) -> Result<()> {
        let min = (0..SAMPLES)
            .map(|k| self.radius(2.0 * PI * k as f64 / SAMPLES as f64))
            .fold(f64::INFINITY, f64::min);
        if !(min > 0.0) {
            return Err(Error::Geometry(format!(
                "radius function is not positive (min sampled value {min:.3e})"
            )));
        }
        Ok(())
    }

    /// Largest sampled radius about the center.
    pub fn max_radius(&self) -> f64 {
        (0..SAMPLES)
            .map(|k| self.radius(2.0 * PI * k as f64 / SAMPLES as f64))
            .fold(0.0, f64::max)
    }

    /// Axis-aligned bounding box `[xmin, xmax, ymin, ymax]` from boundary samples.
    pub fn bounding_box(&self) -> [f64; 4] {
        let mut bb = [f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY];
        for k in 0..SAMPLES {
            let p = self.boundary_point(2.0 * PI * k as f64 / SAMPLES as f64);
            bb[0] = bb[0].min(p[0]);
            bb[1] = bb[1].max(p[0]);
            bb[2] = bb[2].min(p[1]);
            bb[3] = bb[3].max(p[1]);
        }
        bb
    }

    pub fn contains(&self, p: Point) -> bool {
        let dx = p[0] - self.center[0];
        let dy = p[1] - self.center[1];
        let rho = dx.hypot(dy);
        rho < self.radius(dy.atan2(dx))
    }

    /// Euclidean distance from `p` to the boundary curve.
    ///
    /// Exact for disks; otherwise a coarse search over boundary samples
    /// refined by Newton iterations on the squared distance.
    pub fn distance_to_boundary(&self, p: Point) -> f64 {
        if let Profile::Circle { radius } = self.profile {
            let rho = (p[0] - self.center[0]).hypot(p[1] - self.center[1]);
            return (self.scale * radius - rho).abs();
        }
        const COARSE: usize = 512;
        let h = 2.0 * PI / COARSE as f64;
        let dist2 = |t: f64| {
            let q = self.boundary_point(t);
            (q[0] - p[0]).powi(2) + (q[1] - p[1]).powi(2)
        };
        let mut best_t = 0.0;
        let mut best = f64::INFINITY;
        for k in 0..COARSE {
            let t = k as f64 * h;
            let d = dist2(t);
            if d < best {
                best = d;
                best_t = t;
            }
        }
        // Newton on g(t) = (gamma(t) - p) . gamma'(t), bracketed in [t - h, t + h].
        let (lo, hi) = (best_t - h, best_t + h);
        let mut t = best_t;
        for _ in 0..30 {
            let q = self.boundary_point(t);
            let d1 = self.boundary_tangent(t);
            let d2 = self.boundary_second(t);
            let diff = [q[0] - p[0], q[1] - p[1]];
            let g = diff[0] * d1[0] + diff[1] * d1[1];
            let dg = d1[0] * d1[0] + d1[1] * d1[1] + diff[0] * d2[0] + diff[1] * d2[1];
            if dg <= 0.0 {
                break;
            }
            let step = g / dg;
            let next = (t - step).clamp(lo, hi);
            if (next - t).abs() < 1e-15 {
                t = next;
                break;
            }
            t = next;
        }
        best.min(dist2(t)).sqrt()
    }

    fn boundary_second(&self, t: f64) -> Point {
        let [r, dr, ddr] = self.radius_derivs(t);
        let (s, c) = t.sin_cos();
        [ddr * c - 2.0 * dr * s - r * c, ddr * s + 2.0 * dr * c - r * s]
    }

    /// Half the smallest radius of curvature of the boundary: inward normal
    /// offsets up to this depth stay injective.
    pub fn focal_half_distance(&self) -> f64 {
        let kmax = (0..SAMPLES)
            .map(|k| self.curvature(2.0 * PI * k as f64 / SAMPLES as f64).abs())
            .fold(0.0, f64::max);
        0.5 / kmax
    }
}
