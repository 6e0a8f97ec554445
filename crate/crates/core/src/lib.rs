//! Eigenvalues of the biharmonic Steklov problem
//!
//! `Δ²u - τΔu = 0` in `Ω`, with the natural plate conditions on `∂Ω` and the
//! spectral parameter weighted by a boundary density. Balls are solved in
//! closed form through ultraspherical modified Bessel functions; planar
//! star-shaped domains by a Rayleigh–Ritz discretization of the weak form.

// `!(x > 0.0)` style checks are deliberate: they reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ball_spectrum;
pub mod error;
pub mod geometry;
pub mod special_functions;
pub mod spectrum;
pub mod verification;
pub mod weak_form;

pub use ball_spectrum::{ball_mode, ball_spectrum, BallMode, PlateParams};
pub use error::{Error, Result};
pub use geometry::{DomainSpec, StarDomain};
pub use special_functions::{bessel_i_ultra, BesselEval};
pub use spectrum::{Cluster, QuadratureSizes, Spectrum};
pub use weak_form::{solve_neumann_eps, solve_steklov, SolverConfig};
