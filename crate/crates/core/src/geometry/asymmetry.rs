//! Fraenkel asymmetry by grid counting.
//!
//! With `|B| = |Omega|` the symmetric difference satisfies
//! `|Omega Δ B| = 2 (|Omega| - |Omega ∩ B|)`, so only the intersection is
//! counted on the grid. Membership of `Omega` is tabulated once per cell
//! center; each candidate ball then costs one pass over the rows using
//! per-row prefix counts.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::domain::{Point, StarDomain};
use crate::geometry::measures::area_centroid;
use crate::geometry::quadrature::QuadratureRule;
use crate::spectrum::QuadratureSizes;

pub const DEFAULT_RESOLUTION: usize = 2048;
const RESTARTS: usize = 3;

/// Cell-center membership table of a domain over its bounding box.
#[derive(Debug, Clone)]
pub struct MembershipGrid {
    origin: Point,
    hx: f64,
    hy: f64,
    nx: usize,
    ny: usize,
    /// `prefix[row * (nx + 1) + i]` = inside cells among the first `i` of `row`.
    prefix: Vec<u32>,
    /// Exact area of the domain.
    pub area: f64,
    pub perimeter: f64,
}

impl MembershipGrid {
    pub fn new(domain: &StarDomain, resolution: usize) -> Result<Self> {
        if resolution < 8 {
            return Err(Error::Domain(format!("grid resolution {resolution} too small")));
        }
        let [x0, x1, y0, y1] = domain.bounding_box();
        let pad = 1e-3 * (x1 - x0).max(y1 - y0);
        let (x0, x1, y0, y1) = (x0 - pad, x1 + pad, y0 - pad, y1 + pad);
        let (nx, ny) = (resolution, resolution);
        let hx = (x1 - x0) / nx as f64;
        let hy = (y1 - y0) / ny as f64;
        let rows: Vec<Vec<u32>> = (0..ny)
            .into_par_iter()
            .map(|j| {
                let y = y0 + (j as f64 + 0.5) * hy;
                let mut row = Vec::with_capacity(nx + 1);
                let mut count = 0u32;
                row.push(0);
                for i in 0..nx {
                    if domain.contains([x0 + (i as f64 + 0.5) * hx, y]) {
                        count += 1;
                    }
                    row.push(count);
                }
                row
            })
            .collect();
        let prefix = rows.into_iter().flatten().collect();
        let quad = QuadratureRule::new(
            domain,
            QuadratureSizes { radial: 8, angular: 1024, boundary: 4096 },
        )?;
        Ok(Self {
            origin: [x0, y0],
            hx,
            hy,
            nx,
            ny,
            prefix,
            area: domain.area(),
            perimeter: quad.perimeter(),
        })
    }

    /// Grid estimate of `|Omega ∩ B(center, radius)|`.
    pub fn intersection_area(&self, center: Point, radius: f64) -> f64 {
        let mut cells = 0u64;
        let row_len = self.nx + 1;
        for j in 0..self.ny {
            let y = self.origin[1] + (j as f64 + 0.5) * self.hy;
            let dy = y - center[1];
            if dy.abs() >= radius {
                continue;
            }
            let w = (radius * radius - dy * dy).sqrt();
            // cells whose centers lie strictly inside (cx - w, cx + w)
            let lo = ((center[0] - w - self.origin[0]) / self.hx - 0.5).floor() + 1.0;
            let hi = ((center[0] + w - self.origin[0]) / self.hx - 0.5).ceil() - 1.0;
            let lo = lo.max(0.0) as usize;
            if hi < 0.0 {
                continue;
            }
            let hi = (hi as usize).min(self.nx - 1);
            if lo > hi {
                continue;
            }
            let row = &self.prefix[j * row_len..(j + 1) * row_len];
            cells += (row[hi + 1] - row[lo]) as u64;
        }
        cells as f64 * self.hx * self.hy
    }

    /// `|Omega Δ B(center, rho*)| / |Omega|` with `pi rho*^2 = |Omega|`.
    pub fn symmetric_difference_ratio(&self, center: Point) -> f64 {
        let inter = self.intersection_area(center, self.equal_area_radius());
        (2.0 * (self.area - inter) / self.area).max(0.0)
    }

    pub fn equal_area_radius(&self) -> f64 {
        (self.area / PI).sqrt()
    }

    pub fn cell_size(&self) -> f64 {
        self.hx.max(self.hy)
    }

    /// Bound on the counting error: all cells crossing either boundary.
    pub fn error_estimate(&self) -> f64 {
        let diag = self.hx.hypot(self.hy);
        (self.perimeter + 2.0 * PI * self.equal_area_radius()) * diag / self.area
    }
}

/// Fraenkel asymmetry with the optimal ball.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymmetryEstimate {
    pub value: f64,
    pub error_estimate: f64,
    pub center: Point,
    pub radius: f64,
    pub resolution: usize,
}

/// `|Omega Δ B(center, rho*)| / |Omega|` for a fixed ball center.
pub fn symmetric_difference_ratio(
    domain: &StarDomain,
    center: Point,
    resolution: usize,
) -> Result<f64> {
    Ok(MembershipGrid::new(domain, resolution)?.symmetric_difference_ratio(center))
}

/// Infimum over ball centers of the normalized symmetric difference.
///
/// Coordinate descent on the center from three seeds around the area
/// centroid; the step halves until it drops below half a grid cell.
pub fn fraenkel_asymmetry(domain: &StarDomain, resolution: usize) -> Result<AsymmetryEstimate> {
    let grid = MembershipGrid::new(domain, resolution)?;
    let quad = QuadratureRule::new(domain, QuadratureSizes { radial: 32, angular: 512, boundary: 64 })?;
    let c0 = area_centroid(&quad);
    let rho = grid.equal_area_radius();
    let seeds = [c0, [c0[0] + 0.05 * rho, c0[1] + 0.03 * rho], [c0[0] - 0.03 * rho, c0[1] - 0.05 * rho]];
    let mut best = (f64::INFINITY, c0);
    for seed in seeds.iter().take(RESTARTS) {
        let found = coordinate_descent(&grid, *seed, 0.25 * rho);
        if found.0 < best.0 {
            best = found;
        }
    }
    Ok(AsymmetryEstimate {
        value: best.0,
        error_estimate: grid.error_estimate(),
        center: best.1,
        radius: rho,
        resolution,
    })
}

fn coordinate_descent(grid: &MembershipGrid, start: Point, initial_step: f64) -> (f64, Point) {
    let min_step = 0.5 * grid.cell_size();
    let mut c = start;
    let mut f = grid.symmetric_difference_ratio(c);
    let mut step = initial_step;
    while step >= min_step {
        let mut improved = false;
        for axis in 0..2 {
            for sign in [1.0, -1.0] {
                let mut trial = c;
                trial[axis] += sign * step;
                let ft = grid.symmetric_difference_ratio(trial);
                if ft < f {
                    f = ft;
                    c = trial;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (f, c)
}
