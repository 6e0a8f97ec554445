//! Planar star-shaped domains: parametrization, quadrature, boundary
//! moments, Fraenkel asymmetry and the explicit stability constants.

mod asymmetry;
mod domain;
mod measures;
mod quadrature;

pub use asymmetry::{
    fraenkel_asymmetry, symmetric_difference_ratio, AsymmetryEstimate, MembershipGrid,
    DEFAULT_RESOLUTION,
};
pub use domain::{DomainSpec, Point, Profile, StarDomain};
pub use measures::{
    area_centroid, boundary_moment, boundary_moment_about, centroid_shift, stability_constants,
    QuadratureEstimate, StabilityConstants, REFINEMENT_TOLERANCE,
};
pub use quadrature::{gauss_legendre_unit, QuadratureRule, ShellQuadrature};
