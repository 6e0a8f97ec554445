use log::warn;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::ball_spectrum::PlateParams;
use crate::error::{Error, Result};
use crate::geometry::{centroid_shift, QuadratureRule, ShellQuadrature, StarDomain};
use crate::spectrum::{QuadratureSizes, Spectrum};
use crate::weak_form::assemble::{
    assemble, jacobi_scaled, quotient_block, Density, DiscreteOperator, CONDITION_WARNING,
};
use crate::weak_form::basis::RitzBasis;

/// Pencil eigenvalues `mu` below this fraction of the largest are trace-null
/// directions (`lambda = infinity`) and are discarded.
pub const RANK_TOLERANCE: f64 = 1e-10;
/// Relative tolerance on `int rho_eps dx = M`.
pub const MASS_TOLERANCE: f64 = 1e-6;
/// Fewest shell nodes per ray before the shell counts as under-resolved.
pub const MIN_SHELL_NODES: usize = 8;
/// Energy-orthonormalization drops directions below this relative eigenvalue.
const ENERGY_NULL_TOLERANCE: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub degree: usize,
    pub quadrature: QuadratureSizes,
    /// Gauss nodes on the shell panel of each ray (Neumann variant).
    pub shell_radial: usize,
    pub keep_vectors: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            degree: 14,
            quadrature: QuadratureSizes::default(),
            shell_radial: 32,
            keep_vectors: false,
        }
    }
}

impl SolverConfig {
    pub fn with_degree(degree: usize) -> Self {
        Self { degree, ..Self::default() }
    }
}

/// Basis of the given degree about the boundary centroid, scaled by the
/// largest boundary distance from it.
pub fn basis_for(quad: &QuadratureRule, degree: usize) -> RitzBasis {
    let c = centroid_shift(quad);
    let h = quad
        .boundary_points
        .iter()
        .map(|p| (p[0] - c[0]).hypot(p[1] - c[1]))
        .fold(0.0, f64::max);
    RitzBasis::new(degree, c, h)
}

/// Generalized eigenpairs of `A x = lambda M x` with `A` singular on the constants.
///
/// The constant direction is deflated by projecting every other basis
/// function onto the `M`-orthogonal complement of the constants. On that
/// complement `A` is positive definite; after Jacobi scaling it is factored
/// (Cholesky, or an eigen-decomposition with null directions dropped when the
/// condition exceeds [`CONDITION_WARNING`]). The eigenvalues `mu` of `M` in
/// the resulting `A`-orthonormal coordinates give `lambda = 1 / mu`.
pub fn solve_pencil(op: &DiscreteOperator, keep_vectors: bool) -> Result<Spectrum> {
    let a = &op.stiffness;
    let m = op.mass();
    let nb = a.nrows();
    if nb < 2 {
        return Err(Error::Domain("basis must contain non-constant functions".into()));
    }
    let m00 = m[(0, 0)];
    if !(m00 > 0.0) {
        return Err(Error::Numerical("mass of the constant function is not positive".into()));
    }
    let m0: DVector<f64> = m.view((1, 0), (nb - 1, 1)).column(0).into_owned();
    let a_red = quotient_block(a);
    let m_red = quotient_block(m) - &m0 * m0.transpose() / m00;

    let (a_s, d) = jacobi_scaled(&a_red);
    let dmat = DMatrix::from_diagonal(&DVector::from_vec(d));
    let m_s = &dmat * &m_red * &dmat;

    let eig_a = SymmetricEigen::new(a_s.clone());
    let (amin, amax) = eig_a
        .eigenvalues
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let condition = if amin > 0.0 { amax / amin } else { f64::INFINITY };
    if amin < -1e-8 * amax {
        return Err(Error::Factorization {
            reason: "energy form is indefinite on the quotient by constants".into(),
            condition,
        });
    }

    let mut warnings = op.warnings.clone();
    // Columns of `transform` are A_s-orthonormal.
    let transform = match (condition <= CONDITION_WARNING).then(|| a_s.clone().cholesky()).flatten() {
        Some(chol) => {
            let l = chol.l();
            let eye = DMatrix::<f64>::identity(nb - 1, nb - 1);
            l.transpose()
                .solve_upper_triangular(&eye)
                .ok_or_else(|| Error::Factorization {
                    reason: "singular Cholesky factor".into(),
                    condition,
                })?
        }
        None => {
            let floor = ENERGY_NULL_TOLERANCE * amax;
            let keep: Vec<usize> =
                (0..nb - 1).filter(|&i| eig_a.eigenvalues[i] > floor).collect();
            let msg = format!(
                "stiffness condition {condition:.2e}: orthonormalized in the energy inner \
                 product, kept {} of {} directions",
                keep.len(),
                nb - 1
            );
            warn!("{msg}");
            warnings.push(msg);
            let mut t = DMatrix::<f64>::zeros(nb - 1, keep.len());
            for (c, &i) in keep.iter().enumerate() {
                let s = 1.0 / eig_a.eigenvalues[i].sqrt();
                t.set_column(c, &(eig_a.eigenvectors.column(i) * s));
            }
            t
        }
    };

    let mut c = transform.transpose() * &m_s * &transform;
    symmetrize(&mut c);
    let eig = SymmetricEigen::new(c);
    let mu_max = eig.eigenvalues.iter().copied().fold(0.0, f64::max);
    if !(mu_max > 0.0) {
        return Err(Error::Numerical("mass form vanishes on the trial space".into()));
    }

    let mut pairs: Vec<(f64, DVector<f64>)> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &mu)| mu > RANK_TOLERANCE * mu_max)
        .map(|(i, &mu)| {
            let y = eig.eigenvectors.column(i);
            let x_red = &dmat * (&transform * y);
            // undo the deflation: x_0 = -(m0 . x) / m00
            let mut full = DVector::<f64>::zeros(nb);
            full[0] = -m0.dot(&x_red) / m00;
            full.rows_mut(1, nb - 1).copy_from(&x_red);
            (1.0 / mu, full)
        })
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));

    let mut constant = DVector::<f64>::zeros(nb);
    constant[0] = 1.0;
    pairs.insert(0, (0.0, constant));

    let residuals = pairs
        .iter()
        .map(|(lambda, x)| {
            let ax = a * x;
            let mx = m * x * *lambda;
            let denom = ax.norm() + mx.norm();
            if denom > 0.0 {
                (ax - mx).norm() / denom
            } else {
                0.0
            }
        })
        .collect();
    let eigenvalues: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let mut spectrum = Spectrum::from_sorted(eigenvalues);
    spectrum.residuals = residuals;
    spectrum.warnings = warnings;
    if keep_vectors {
        spectrum.ritz_vectors = Some(pairs.into_iter().map(|(_, x)| x.iter().copied().collect()).collect());
    }
    Ok(spectrum)
}

fn symmetrize(m: &mut DMatrix<f64>) {
    for j in 0..m.ncols() {
        for i in (j + 1)..m.nrows() {
            let v = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
}

/// Steklov spectrum with constant boundary density `rho`.
pub fn solve_steklov(
    domain: &StarDomain,
    params: &PlateParams,
    rho: f64,
    config: &SolverConfig,
) -> Result<Spectrum> {
    params.validate()?;
    if config.degree < 2 {
        return Err(Error::Domain(format!("degree {} must be at least 2", config.degree)));
    }
    let quad = QuadratureRule::new(domain, config.quadrature)?;
    let basis = basis_for(&quad, config.degree);
    let op = assemble(&basis, &quad, params, Density::Boundary(rho))?;
    let mut s = solve_pencil(&op, config.keep_vectors)?;
    s.degree = Some(config.degree);
    s.quadrature = Some(config.quadrature);
    Ok(s)
}

/// Interior density concentrating mass `M` near the boundary:
/// `eps` on the core (depth > eps) and uniform on the shell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShellDensity {
    pub eps: f64,
    pub core_value: f64,
    pub shell_value: f64,
    pub core_area: f64,
    pub shell_area: f64,
    pub total_mass: f64,
}

/// Largest admissible `eps` for a domain: half the minimal radius of curvature.
pub fn eps_limit(domain: &StarDomain) -> f64 {
    domain.focal_half_distance()
}

/// Spectrum of the interior-density problem `a(u, v) = lambda int rho_eps u v dx`.
pub fn solve_neumann_eps(
    domain: &StarDomain,
    params: &PlateParams,
    total_mass: f64,
    eps: f64,
    config: &SolverConfig,
) -> Result<(Spectrum, ShellDensity)> {
    params.validate()?;
    if config.degree < 2 {
        return Err(Error::Domain(format!("degree {} must be at least 2", config.degree)));
    }
    let eps0 = eps_limit(domain);
    if !(eps > 0.0 && eps < eps0) {
        return Err(Error::Domain(format!("eps = {eps} must lie in (0, {eps0:.4}) for this domain")));
    }
    // thin shells get twice the nodes
    let shell_radial = if eps < 0.05 * domain.max_radius() {
        2 * config.shell_radial
    } else {
        config.shell_radial
    };
    let sq = ShellQuadrature::new(domain, config.quadrature, shell_radial, eps)?;
    let mut warnings = Vec::new();
    if sq.min_shell_nodes_per_ray < MIN_SHELL_NODES {
        let msg = format!(
            "shell under-resolved: only {} radial nodes in the shell on some ray",
            sq.min_shell_nodes_per_ray
        );
        warn!("{msg}");
        warnings.push(msg);
    }
    let (core_area, shell_area) = (sq.core_area(), sq.shell_area());
    if !(shell_area > 0.0) {
        return Err(Error::Domain("boundary shell is empty".into()));
    }
    let core_mass = eps * core_area;
    if !(total_mass > core_mass) {
        return Err(Error::Domain(format!(
            "mass {total_mass} must exceed eps |Omega_eps| = {core_mass}"
        )));
    }
    let shell_value = (total_mass - core_mass) / shell_area;
    let rho: Vec<f64> = sq.in_core.iter().map(|&c| if c { eps } else { shell_value }).collect();
    let integral: f64 = sq.rule.interior_weights.iter().zip(&rho).map(|(w, r)| w * r).sum();
    if (integral - total_mass).abs() > MASS_TOLERANCE * total_mass {
        return Err(Error::MassNormalization { integral, target: total_mass });
    }
    let basis = basis_for(&sq.rule, config.degree);
    let op = assemble(&basis, &sq.rule, params, Density::Interior(&rho))?;
    let mut s = solve_pencil(&op, config.keep_vectors)?;
    s.degree = Some(config.degree);
    s.quadrature = Some(sq.rule.sizes);
    s.warnings.extend(warnings);
    let density = ShellDensity {
        eps,
        core_value: eps,
        shell_value,
        core_area,
        shell_area,
        total_mass,
    };
    Ok((s, density))
}

/// `a(u, u) / b(u, u)` for `u = sum_k coeffs[k] phi_k`, integrated pointwise.
pub fn rayleigh_quotient(
    basis: &RitzBasis,
    quad: &QuadratureRule,
    params: &PlateParams,
    coeffs: &[f64],
    density: Density<'_>,
) -> Result<f64> {
    if coeffs.len() != basis.len() {
        return Err(Error::Domain(format!(
            "{} coefficients for a basis of size {}",
            coeffs.len(),
            basis.len()
        )));
    }
    let (s, tau) = (params.sigma, params.tau);
    let numer = quad.integrate_interior(|p| {
        let [_, ux, uy, uxx, uxy, uyy] = basis.eval(coeffs, p);
        let hess = uxx * uxx + 2.0 * uxy * uxy + uyy * uyy;
        let lap = uxx + uyy;
        (1.0 - s) * hess + s * lap * lap + tau * (ux * ux + uy * uy)
    });
    let denom = match density {
        Density::Boundary(rho) => rho * quad.integrate_boundary(|p| basis.eval(coeffs, p)[0].powi(2)),
        Density::Interior(rho) => quad
            .interior_points
            .iter()
            .zip(&quad.interior_weights)
            .zip(rho)
            .map(|((p, w), r)| w * r * basis.eval(coeffs, *p)[0].powi(2))
            .sum(),
    };
    let scale = coeffs.iter().map(|c| c * c).sum::<f64>() * quad.perimeter();
    if !(denom > 1e-14 * scale) {
        return Err(Error::ZeroDenominator);
    }
    Ok(numer / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::DomainSpec;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn disk() -> StarDomain {
        DomainSpec::unit_disk().resolve().unwrap()
    }

    fn disk_rule() -> QuadratureRule {
        QuadratureRule::new(&disk(), QuadratureSizes::default()).unwrap()
    }

    /// `int_{unit disk} x^p y^q dx` and `int_{unit circle} x^p y^q dS` from Beta integrals.
    fn disk_moments(p: u32, q: u32) -> (f64, f64) {
        if p % 2 == 1 || q % 2 == 1 {
            return (0.0, 0.0);
        }
        let g = crate::special_functions::gamma;
        let (a, b) = ((p as f64 + 1.0) / 2.0, (q as f64 + 1.0) / 2.0);
        let angular = 2.0 * g(a) * g(b) / g(a + b);
        (angular / (p + q + 2) as f64, angular)
    }

    #[test]
    fn degree_one_matrices_on_the_disk() {
        let quad = disk_rule();
        let basis = RitzBasis::new(1, [0.0, 0.0], 1.0);
        let p = PlateParams::planar(1.0, 0.0).unwrap();
        let op = assemble(&basis, &quad, &p, Density::Boundary(1.0)).unwrap();
        let expect = DMatrix::from_diagonal(&DVector::from_vec(vec![0.0, PI, PI]));
        assert!((&op.stiffness - expect).amax() < 1e-12, "{}", op.stiffness);
        assert_relative_eq!(op.boundary_mass[(1, 1)], PI, max_relative = 1e-13);
        assert_relative_eq!(op.boundary_mass[(0, 0)], 2.0 * PI, max_relative = 1e-13);
    }

    #[test]
    fn energy_of_radial_quadratic() {
        let quad = disk_rule();
        let basis = RitzBasis::new(2, [0.0, 0.0], 1.0);
        let mut coeffs = vec![0.0; basis.len()];
        coeffs[0] = -0.5;
        coeffs[basis.index_of(2, 0).unwrap()] = 1.0;
        coeffs[basis.index_of(0, 2).unwrap()] = 1.0;
        for (tau, sigma) in [(1.0, 0.0), (2.5, 0.4), (0.3, -0.7)] {
            let p = PlateParams::planar(tau, sigma).unwrap();
            let op = assemble(&basis, &quad, &p, Density::Boundary(1.0)).unwrap();
            let c = DVector::from_vec(coeffs.clone());
            let a = (c.transpose() * &op.stiffness * &c)[(0, 0)];
            let exact = 8.0 * PI * (1.0 - sigma) + 16.0 * PI * sigma + 2.0 * PI * tau;
            assert_relative_eq!(a, exact, max_relative = 1e-12);
        }
    }

    #[test]
    fn matrices_are_symmetric() {
        let d = DomainSpec::ellipse(1.3, 0.6).resolve().unwrap();
        let quad = QuadratureRule::new(&d, QuadratureSizes::default()).unwrap();
        let basis = basis_for(&quad, 8);
        let p = PlateParams::planar(2.0, 0.2).unwrap();
        let op = assemble(&basis, &quad, &p, Density::Boundary(1.0)).unwrap();
        assert!((&op.stiffness - op.stiffness.transpose()).amax() <= 1e-12);
        assert!((&op.boundary_mass - op.boundary_mass.transpose()).amax() <= 1e-12);
        assert!(op.stiffness.row(0).amax() < 1e-12);
    }

    #[test]
    fn quotients_against_moment_oracle() {
        let quad = disk_rule();
        let basis = RitzBasis::new(2, [0.0, 0.0], 1.0);
        let ix = basis.index_of(1, 0).unwrap();
        let mut x = vec![0.0; basis.len()];
        x[ix] = 1.0;
        for sigma in [-0.5, 0.0, 0.7] {
            let p = PlateParams::planar(1.0, sigma).unwrap();
            let q = rayleigh_quotient(&basis, &quad, &p, &x, Density::Boundary(1.0)).unwrap();
            assert_relative_eq!(q, 1.0, max_relative = 1e-12);
        }
        // u = x^2 - y^2: |D2u|^2 = 8, Lap u = 0, |grad u|^2 = 4(x^2 + y^2), u^2 = x^4 - 2x^2y^2 + y^4
        let mut u = vec![0.0; basis.len()];
        u[basis.index_of(2, 0).unwrap()] = 1.0;
        u[basis.index_of(0, 2).unwrap()] = -1.0;
        for (tau, sigma) in [(1.0, 0.0), (3.0, 0.5), (0.2, -0.8)] {
            let p = PlateParams::planar(tau, sigma).unwrap();
            let q = rayleigh_quotient(&basis, &quad, &p, &u, Density::Boundary(1.0)).unwrap();
            let area = disk_moments(0, 0).0;
            let grad = 4.0 * (disk_moments(2, 0).0 + disk_moments(0, 2).0);
            let numer = (1.0 - sigma) * 8.0 * area + tau * grad;
            let denom = disk_moments(4, 0).1 - 2.0 * disk_moments(2, 2).1 + disk_moments(0, 4).1;
            assert_relative_eq!(q, numer / denom, max_relative = 1e-10);
            if tau == 1.0 && sigma == 0.0 {
                assert_relative_eq!(q, 10.0, max_relative = 1e-12);
            }
        }
        let mut one = vec![0.0; basis.len()];
        one[0] = 1.0;
        let p = PlateParams::planar(1.0, 0.3).unwrap();
        assert_eq!(rayleigh_quotient(&basis, &quad, &p, &one, Density::Boundary(1.0)).unwrap(), 0.0);
        let zero = vec![0.0; basis.len()];
        assert_eq!(
            rayleigh_quotient(&basis, &quad, &p, &zero, Density::Boundary(1.0)),
            Err(Error::ZeroDenominator)
        );
    }

    #[test]
    fn disk_second_eigenvalue_is_tension() {
        for (tau, sigma, tol) in [(1.0, 0.3, 1e-3), (5.0, -0.4, 5e-3)] {
            let p = PlateParams::planar(tau, sigma).unwrap();
            let s = solve_steklov(&disk(), &p, 1.0, &SolverConfig::with_degree(14)).unwrap();
            assert_eq!(s.eigenvalues[0], 0.0);
            assert_eq!(s.clusters[0].size, 1);
            assert!((s.lambda(2).unwrap() - tau).abs() <= tol && (s.lambda(3).unwrap() - tau).abs() <= tol);
            assert_eq!(s.cluster_of(2).unwrap().size, 2);
            assert!(s.residuals.iter().all(|r| *r < 1e-8));
        }
    }

    #[test]
    fn density_scales_the_spectrum() {
        let p = PlateParams::planar(1.0, 0.0).unwrap();
        let cfg = SolverConfig::with_degree(14);
        let s1 = solve_steklov(&disk(), &p, 1.0, &cfg).unwrap();
        let s2 = solve_steklov(&disk(), &p, 2.0, &cfg).unwrap();
        assert_eq!(s1.len(), s2.len());
        for (a, b) in s1.eigenvalues.iter().zip(&s2.eigenvalues).skip(1).take(20) {
            assert_relative_eq!(*b, a / 2.0, max_relative = 1e-10);
        }
        assert_eq!(
            s1.clusters.iter().map(|c| c.size).collect::<Vec<_>>(),
            s2.clusters.iter().map(|c| c.size).collect::<Vec<_>>()
        );
    }

    #[test]
    fn ritz_values_decrease_with_degree() {
        let d = DomainSpec::ellipse(1.4, 0.7).resolve().unwrap();
        let p = PlateParams::planar(1.0, 0.3).unwrap();
        let mut prev = f64::INFINITY;
        for degree in [2, 4, 6, 8, 10, 12] {
            let s = solve_steklov(&d, &p, 1.0, &SolverConfig::with_degree(degree)).unwrap();
            assert!(s.lambda(2).unwrap() <= prev * (1.0 + 1e-10), "degree {degree}");
            prev = s.lambda(2).unwrap();
        }
        let s = solve_steklov(&disk(), &p, 1.0, &SolverConfig::with_degree(6)).unwrap();
        assert!(s.lambda(2).unwrap() >= 1.0 - 1e-10);
    }

    #[test]
    fn trial_functions_bound_lambda_two() {
        let d = DomainSpec::star(1.0, vec![0.0, 0.15, 0.1], vec![0.0, 0.05]).resolve().unwrap();
        let p = PlateParams::planar(2.0, 0.1).unwrap();
        let cfg = SolverConfig { keep_vectors: true, ..SolverConfig::with_degree(10) };
        let quad = QuadratureRule::new(&d, cfg.quadrature).unwrap();
        let basis = basis_for(&quad, cfg.degree);
        let s = solve_steklov(&d, &p, 1.0, &cfg).unwrap();
        let vecs = s.ritz_vectors.as_ref().unwrap();
        let q2 = rayleigh_quotient(&basis, &quad, &p, &vecs[1], Density::Boundary(1.0)).unwrap();
        assert_relative_eq!(q2, s.lambda(2).unwrap(), max_relative = 1e-8);
        let mut rng_state = 7u64;
        let mut next = || {
            rng_state = rng_state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((rng_state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        for _ in 0..20 {
            let mut c: Vec<f64> = (0..basis.len()).map(|_| next()).collect();
            // remove the boundary mean
            let mean = quad.integrate_boundary(|x| basis.eval(&c, x)[0]) / quad.perimeter();
            c[0] -= mean;
            let q = rayleigh_quotient(&basis, &quad, &p, &c, Density::Boundary(1.0)).unwrap();
            assert!(q >= s.lambda(2).unwrap() * (1.0 - 1e-8));
        }
    }

    #[test]
    fn outside_the_window_the_energy_is_indefinite() {
        let quad = disk_rule();
        let basis = basis_for(&quad, 6);
        for sigma in [1.5, -1.5, 2.0] {
            let p = PlateParams::new_unchecked(2, 1.0, sigma);
            assert!(p.validate().is_err());
            let op = assemble(&basis, &quad, &p, Density::Boundary(1.0)).unwrap();
            assert!(!op.is_quotient_positive_definite(), "sigma {sigma}");
            assert!(solve_steklov(&disk(), &p, 1.0, &SolverConfig::with_degree(6)).is_err());
        }
        let p = PlateParams::planar(1.0, 0.3).unwrap();
        assert!(assemble(&basis, &quad, &p, Density::Boundary(1.0)).unwrap().is_quotient_positive_definite());
    }

    #[test]
    fn neumann_density_near_the_boundary() {
        let p = PlateParams::planar(1.0, 0.0).unwrap();
        let (s, rho) =
            solve_neumann_eps(&disk(), &p, 2.0 * PI, 0.05, &SolverConfig::with_degree(10)).unwrap();
        assert_eq!(s.eigenvalues[0], 0.0);
        assert!(s.lambda(2).unwrap() > 0.0 && (s.lambda(2).unwrap() - 1.0).abs() < 0.1, "{}", s.lambda(2).unwrap());
        assert_relative_eq!(
            rho.core_value * rho.core_area + rho.shell_value * rho.shell_area,
            2.0 * PI,
            max_relative = 1e-6
        );
        assert!(solve_neumann_eps(&disk(), &p, 2.0 * PI, 0.6, &SolverConfig::with_degree(4)).is_err());
        assert!(solve_neumann_eps(&disk(), &p, 0.01, 0.1, &SolverConfig::with_degree(4)).is_err());
    }

    proptest! {
        #[test]
        fn laplacian_bounded_by_hessian(
            coeffs in proptest::collection::vec(-1.0f64..1.0, 28),
            x in -1.0f64..1.0,
            y in -1.0f64..1.0,
        ) {
            let basis = RitzBasis::new(6, [0.1, -0.2], 1.3);
            let [_, _, _, uxx, uxy, uyy] = basis.eval(&coeffs, [x, y]);
            let lap2 = (uxx + uyy).powi(2);
            let hess2 = uxx * uxx + 2.0 * uxy * uxy + uyy * uyy;
            prop_assert!(lap2 <= 2.0 * hess2 * (1.0 + 1e-12) + 1e-300);
        }
    }

    #[test]
    fn laplacian_bound_is_sharp() {
        let basis = RitzBasis::new(2, [0.0, 0.0], 1.0);
        let mut u = vec![0.0; basis.len()];
        u[basis.index_of(2, 0).unwrap()] = 1.0;
        u[basis.index_of(0, 2).unwrap()] = 1.0;
        let [_, _, _, uxx, uxy, uyy] = basis.eval(&u, [0.3, 0.4]);
        assert_relative_eq!((uxx + uyy).powi(2), 2.0 * (uxx * uxx + 2.0 * uxy * uxy + uyy * uyy));
    }
}
