use log::warn;
use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;

use crate::ball_spectrum::PlateParams;
use crate::error::{Error, Result};
use crate::geometry::{Point, QuadratureRule};
use crate::weak_form::basis::{Jet, RitzBasis};

/// Condition number of the deflated stiffness above which assembly warns.
pub const CONDITION_WARNING: f64 = 1e12;
const CHUNK: usize = 512;

/// Mass density on the right-hand side of the weak form.
#[derive(Debug, Clone, Copy)]
pub enum Density<'a> {
    /// Constant density on the boundary (Steklov problem).
    Boundary(f64),
    /// Density sampled at the interior quadrature nodes (Neumann problem).
    Interior(&'a [f64]),
}

/// Matrix pencil of the weak form in a [`RitzBasis`].
///
/// `stiffness[k][m] = a(phi_k, phi_m)` with
/// `a(u, v) = int (1 - sigma) D2u : D2v + sigma Lap u Lap v + tau grad u . grad v`.
#[derive(Debug, Clone)]
pub struct DiscreteOperator {
    pub stiffness: DMatrix<f64>,
    /// `int_{dOmega} rho phi_k phi_m dS` (unit density for the Neumann variant).
    pub boundary_mass: DMatrix<f64>,
    /// `int_Omega rho phi_k phi_m dx`, only for interior densities.
    pub interior_mass: Option<DMatrix<f64>>,
    pub warnings: Vec<String>,
}

impl DiscreteOperator {
    /// The mass matrix on the right-hand side of the pencil.
    pub fn mass(&self) -> &DMatrix<f64> {
        self.interior_mass.as_ref().unwrap_or(&self.boundary_mass)
    }

    /// Eigenvalues of the Jacobi-scaled stiffness restricted to the
    /// non-constant basis functions, ascending.
    pub fn quotient_stiffness_eigenvalues(&self) -> Vec<f64> {
        let (scaled, _) = jacobi_scaled(&quotient_block(&self.stiffness));
        let mut ev: Vec<f64> = SymmetricEigen::new(scaled).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Whether the energy form is positive definite on the quotient by constants.
    pub fn is_quotient_positive_definite(&self) -> bool {
        self.quotient_stiffness_eigenvalues().first().is_some_and(|&m| m > 0.0)
    }

    /// Condition number of the Jacobi-scaled deflated stiffness.
    pub fn quotient_condition(&self) -> f64 {
        let ev = self.quotient_stiffness_eigenvalues();
        match (ev.first(), ev.last()) {
            (Some(&lo), Some(&hi)) if lo > 0.0 => hi / lo,
            _ => f64::INFINITY,
        }
    }
}

/// Block of `m` without the first (constant) row and column.
pub(crate) fn quotient_block(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    m.view((1, 1), (n - 1, n - 1)).into_owned()
}

/// `D m D` with `D = diag(m)^(-1/2)`, and the diagonal of `D`.
pub(crate) fn jacobi_scaled(m: &DMatrix<f64>) -> (DMatrix<f64>, Vec<f64>) {
    let d: Vec<f64> = (0..m.nrows()).map(|i| 1.0 / m[(i, i)].abs().sqrt()).collect();
    let mut s = m.clone();
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            s[(i, j)] *= d[i] * d[j];
        }
    }
    (s, d)
}

fn mirror_upper(m: &mut DMatrix<f64>) {
    for j in 0..m.ncols() {
        for i in (j + 1)..m.nrows() {
            m[(i, j)] = m[(j, i)];
        }
    }
}

/// Sum in a fixed binary-tree order.
fn pairwise_sum(mut parts: Vec<DMatrix<f64>>) -> Option<DMatrix<f64>> {
    while parts.len() > 1 {
        let mut next = Vec::with_capacity(parts.len().div_ceil(2));
        let mut it = parts.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(a + b),
                None => next.push(a),
            }
        }
        parts = next;
    }
    parts.pop()
}

/// Weighted Gram matrix `sum_q w_q phi(x_q) phi(x_q)^T`.
fn gram(basis: &RitzBasis, points: &[Point], weights: &[f64]) -> DMatrix<f64> {
    let nb = basis.len();
    let parts: Vec<DMatrix<f64>> = points
        .par_chunks(CHUNK)
        .zip(weights.par_chunks(CHUNK))
        .map(|(pts, ws)| {
            let mut v = DMatrix::<f64>::zeros(pts.len(), nb);
            let mut jets = vec![[0.0; 6]; nb];
            for (r, (p, w)) in pts.iter().zip(ws).enumerate() {
                basis.jets_into(*p, &mut jets);
                let sw = w.sqrt();
                for (k, jet) in jets.iter().enumerate() {
                    v[(r, k)] = sw * jet[0];
                }
            }
            v.tr_mul(&v)
        })
        .collect();
    let mut g = pairwise_sum(parts).unwrap_or_else(|| DMatrix::zeros(nb, nb));
    mirror_upper(&mut g);
    g
}

fn energy(basis: &RitzBasis, quad: &QuadratureRule, params: &PlateParams) -> DMatrix<f64> {
    let nb = basis.len();
    let (s, tau) = (params.sigma, params.tau);
    let parts: Vec<DMatrix<f64>> = quad
        .interior_points
        .par_chunks(CHUNK)
        .zip(quad.interior_weights.par_chunks(CHUNK))
        .map(|(pts, ws)| {
            let rows = pts.len();
            let mut dx = DMatrix::<f64>::zeros(rows, nb);
            let mut dy = DMatrix::<f64>::zeros(rows, nb);
            let mut dxx = DMatrix::<f64>::zeros(rows, nb);
            let mut dxy = DMatrix::<f64>::zeros(rows, nb);
            let mut dyy = DMatrix::<f64>::zeros(rows, nb);
            let mut jets: Vec<Jet> = vec![[0.0; 6]; nb];
            for (r, (p, w)) in pts.iter().zip(ws).enumerate() {
                basis.jets_into(*p, &mut jets);
                let sw = w.sqrt();
                for (k, jet) in jets.iter().enumerate() {
                    dx[(r, k)] = sw * jet[1];
                    dy[(r, k)] = sw * jet[2];
                    dxx[(r, k)] = sw * jet[3];
                    dxy[(r, k)] = sw * jet[4];
                    dyy[(r, k)] = sw * jet[5];
                }
            }
            let lap = &dxx + &dyy;
            // D2u : D2v = u_xx v_xx + 2 u_xy v_xy + u_yy v_yy
            let hess = dxx.tr_mul(&dxx) + dxy.tr_mul(&dxy) * 2.0 + dyy.tr_mul(&dyy);
            let grad = dx.tr_mul(&dx) + dy.tr_mul(&dy);
            hess * (1.0 - s) + lap.tr_mul(&lap) * s + grad * tau
        })
        .collect();
    let mut a = pairwise_sum(parts).unwrap_or_else(|| DMatrix::zeros(nb, nb));
    mirror_upper(&mut a);
    a
}

/// Assemble the stiffness and mass matrices by quadrature.
///
/// `params` is not re-validated here so that inadmissible parameters can be
/// probed through [`DiscreteOperator::is_quotient_positive_definite`].
pub fn assemble(
    basis: &RitzBasis,
    quad: &QuadratureRule,
    params: &PlateParams,
    density: Density<'_>,
) -> Result<DiscreteOperator> {
    if params.n != 2 {
        return Err(Error::Domain(format!(
            "the Ritz solver is planar; got n = {}",
            params.n
        )));
    }
    let stiffness = energy(basis, quad, params);
    let (boundary_mass, interior_mass) = match density {
        Density::Boundary(rho) => {
            if !(rho > 0.0) || !rho.is_finite() {
                return Err(Error::Domain(format!("boundary density {rho} must be positive")));
            }
            let w: Vec<f64> = quad.boundary_weights.iter().map(|w| w * rho).collect();
            (gram(basis, &quad.boundary_points, &w), None)
        }
        Density::Interior(rho) => {
            if rho.len() != quad.interior_points.len() {
                return Err(Error::Domain(format!(
                    "density has {} samples for {} interior nodes",
                    rho.len(),
                    quad.interior_points.len()
                )));
            }
            if rho.iter().any(|r| !(*r > 0.0)) {
                return Err(Error::Domain("interior density must be positive".into()));
            }
            let w: Vec<f64> = quad.interior_weights.iter().zip(rho).map(|(w, r)| w * r).collect();
            (
                gram(basis, &quad.boundary_points, &quad.boundary_weights),
                Some(gram(basis, &quad.interior_points, &w)),
            )
        }
    };
    let mut op = DiscreteOperator { stiffness, boundary_mass, interior_mass, warnings: Vec::new() };
    if basis.len() > 1 && params.is_admissible() {
        let cond = op.quotient_condition();
        if cond > CONDITION_WARNING {
            let msg = format!(
                "deflated stiffness condition {cond:.2e} exceeds {CONDITION_WARNING:.0e}; \
                 consider a lower degree (basis is re-orthogonalized in the energy inner product)"
            );
            warn!("{msg}");
            op.warnings.push(msg);
        }
    }
    Ok(op)
}
