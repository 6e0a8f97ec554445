//! Rayleigh–Ritz discretization of the weak eigenvalue problem on planar
//! star domains, for a constant boundary density (Steklov) and for an
//! interior density concentrated near the boundary (Neumann).

mod assemble;
mod basis;
mod solve;

pub use assemble::{assemble, Density, DiscreteOperator, CONDITION_WARNING};
pub use basis::{Jet, RitzBasis};
pub use solve::{
    basis_for, eps_limit, rayleigh_quotient, solve_neumann_eps, solve_pencil, solve_steklov,
    ShellDensity, SolverConfig, MASS_TOLERANCE, MIN_SHELL_NODES, RANK_TOLERANCE,
};
