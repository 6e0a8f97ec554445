//! End-to-end checks of the planar eigenvalue inequalities: the reciprocal-sum
//! bound from coordinate trial functions, the scaling law, the quantitative
//! isoperimetric inequality and the limit of boundary-concentrated densities.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ball_spectrum::{ball_spectrum, PlateParams};
use crate::error::{Error, Result};
use crate::geometry::{
    boundary_moment_about, centroid_shift, fraenkel_asymmetry, stability_constants,
    symmetric_difference_ratio, DomainSpec, QuadratureRule, StarDomain,
};
use crate::spectrum::Spectrum;
use crate::weak_form::{assemble, solve_neumann_eps, solve_steklov, Density, RitzBasis, SolverConfig};

/// Relative slack allowed on the numerical side of every inequality.
pub const RELATIVE_TOLERANCE: f64 = 1e-3;
/// Largest relative error accepted by [`ScalingReport::holds`].
pub const SCALING_TOLERANCE: f64 = 1e-6;

fn second(s: &Spectrum) -> Result<f64> {
    s.lambda(2).ok_or_else(|| Error::Numerical("spectrum has fewer than two eigenvalues".into()))
}

fn third(s: &Spectrum) -> Result<f64> {
    s.lambda(3).ok_or_else(|| Error::Numerical("spectrum has fewer than three eigenvalues".into()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReciprocalSumReport {
    /// `int_{dOmega} |x - c|^2 dS / (tau |Omega|)` about the boundary centroid `c`.
    pub bound: f64,
    /// `1/lambda_2 + 1/lambda_3`.
    pub sum: f64,
    pub lambda2: f64,
    pub lambda3: f64,
    /// `(sum - bound) / bound`.
    pub relative_gap: f64,
    /// Largest deviation of the energy Gram matrix of the trial functions
    /// `(tau |Omega|)^(-1/2) (x_i - c_i)` from the identity.
    pub normalization_defect: f64,
    /// Largest boundary mean of the trial functions.
    pub boundary_mean: f64,
}

impl ReciprocalSumReport {
    pub fn holds(&self) -> bool {
        self.sum >= self.bound * (1.0 - RELATIVE_TOLERANCE)
    }
}

/// Compare `1/lambda_2 + 1/lambda_3` with the value of the coordinate trial
/// functions centered at the boundary centroid.
pub fn reciprocal_sum_bound(
    domain: &StarDomain,
    params: &PlateParams,
    config: &SolverConfig,
) -> Result<ReciprocalSumReport> {
    params.validate()?;
    if params.n != 2 {
        return Err(Error::Domain(format!("the numerical path is planar; got n = {}", params.n)));
    }
    let quad = QuadratureRule::new(domain, config.quadrature)?;
    let c = centroid_shift(&quad);
    let area = quad.area();
    let tau = params.tau;
    let moment = boundary_moment_about(domain, &quad, 2.0, c)?;
    let bound = moment.value / (tau * area);

    let scale = 1.0 / (tau * area);
    let linear = RitzBasis::new(1, c, 1.0);
    let op = assemble(&linear, &quad, params, Density::Boundary(1.0))?;
    let mut normalization_defect: f64 = 0.0;
    for i in 1..3 {
        for j in 1..3 {
            let target = if i == j { 1.0 } else { 0.0 };
            normalization_defect = normalization_defect.max((scale * op.stiffness[(i, j)] - target).abs());
        }
    }
    let len = quad.perimeter();
    let boundary_mean = (0..2)
        .map(|i| (quad.integrate_boundary(|p| p[i] - c[i]) * scale.sqrt() / len).abs())
        .fold(0.0, f64::max);

    let s = solve_steklov(domain, params, 1.0, config)?;
    let (lambda2, lambda3) = (second(&s)?, third(&s)?);
    let sum = 1.0 / lambda2 + 1.0 / lambda3;
    Ok(ReciprocalSumReport {
        bound,
        sum,
        lambda2,
        lambda3,
        relative_gap: (sum - bound) / bound,
        normalization_defect,
        boundary_mean,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub s: f64,
    /// `lambda_2(tau, sigma, Omega)`.
    pub original: f64,
    /// `s^3 lambda_2(tau / s^2, sigma, s Omega)`.
    pub rescaled: f64,
    pub relative_error: f64,
}

impl ScalingReport {
    pub fn holds(&self) -> bool {
        self.relative_error <= SCALING_TOLERANCE
    }
}

/// Check `lambda_2(tau, sigma, Omega) = s^3 lambda_2(s^-2 tau, sigma, s Omega)`.
pub fn scaling_check(
    spec: &DomainSpec,
    params: &PlateParams,
    s: f64,
    config: &SolverConfig,
) -> Result<ScalingReport> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::Domain(format!("scale factor s = {s} must be positive")));
    }
    let original = second(&solve_steklov(&spec.resolve()?, params, 1.0, config)?)?;
    let scaled = spec.clone().scaled(s).resolve()?;
    let rescaled = s.powi(3) * second(&solve_steklov(&scaled, &params.with_tau(params.tau / (s * s)), 1.0, config)?)?;
    Ok(ScalingReport { s, original, rescaled, relative_error: (original - rescaled).abs() / original })
}

/// A shape with an identifier, as read from a family file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedDomain {
    pub id: String,
    pub domain: DomainSpec,
}

/// A family of shapes for the isoperimetric sweep.
///
/// ```json
/// {"kind": "ellipses", "eccentricities": [0.0, 0.5, 0.9]}
/// {"kind": "list", "shapes": [{"id": "tri", "domain": {"kind": "star", "base": 1.0, "fourier_cos": [0, 0, 0.25]}}]}
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ShapeFamily {
    Ellipses { eccentricities: Vec<f64> },
    List { shapes: Vec<NamedDomain> },
}

impl ShapeFamily {
    pub fn members(&self) -> Result<Vec<NamedDomain>> {
        match self {
            ShapeFamily::Ellipses { eccentricities } => eccentricities
                .iter()
                .map(|&e| {
                    if !(0.0..1.0).contains(&e) {
                        return Err(Error::Domain(format!("eccentricity {e} must lie in [0, 1)")));
                    }
                    // semi-axes with a b = 1, so the area is pi
                    let q = (1.0 - e * e).powf(0.25);
                    Ok(NamedDomain { id: format!("ellipse-e{e}"), domain: DomainSpec::ellipse(1.0 / q, q) })
                })
                .collect(),
            ShapeFamily::List { shapes } => Ok(shapes.clone()),
        }
    }

    /// Six ellipses and six star shapes.
    pub fn standard() -> Self {
        let mut shapes = ShapeFamily::Ellipses { eccentricities: vec![0.0, 0.3, 0.5, 0.7, 0.8, 0.9] }
            .members()
            .expect("valid eccentricities");
        let stars: [(&str, Vec<f64>, Vec<f64>); 6] = [
            ("star-c3", vec![0.0, 0.0, 0.25], vec![]),
            ("star-c2", vec![0.0, 0.15], vec![]),
            ("star-c1", vec![0.2], vec![]),
            ("star-c4-s1", vec![0.0, 0.0, 0.0, 0.1], vec![0.05]),
            ("star-c5", vec![0.0, 0.0, 0.0, 0.0, 0.06], vec![]),
            ("star-c2-s3", vec![0.0, 0.2], vec![0.0, 0.0, 0.1]),
        ];
        shapes.extend(stars.into_iter().map(|(id, c, s)| NamedDomain {
            id: id.to_string(),
            domain: DomainSpec::star(1.0, c, s),
        }));
        ShapeFamily::List { shapes }
    }
}

/// Settings of an isoperimetric sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub solver: SolverConfig,
    /// Lower degree used to estimate the discretization error of `lambda_2`.
    pub reference_degree: usize,
    /// Grid resolution of the Fraenkel asymmetry.
    pub resolution: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self { solver: SolverConfig::default(), reference_degree: 12, resolution: 1024 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsoperimetricReport {
    pub id: String,
    /// Area after normalization (pi).
    pub area: f64,
    /// Scale factor applied to reach area pi.
    pub scale: f64,
    pub asymmetry: f64,
    pub asymmetry_error: f64,
    pub lambda2: f64,
    /// `lambda_2` of the unit disk.
    pub lambda2_ball: f64,
    /// `lambda2_ball (1 - delta_2 A^2)`.
    pub stability_bound: f64,
    /// `stability_bound - lambda2`.
    pub margin: f64,
    /// `lambda2_ball - lambda2`.
    pub weak_margin: f64,
    pub tolerance: f64,
    pub degree: usize,
    /// `|lambda_2(degree) - lambda_2(reference_degree)|`.
    pub degree_change: f64,
    pub warnings: Vec<String>,
    pub error: Option<String>,
}

impl IsoperimetricReport {
    pub fn holds(&self) -> bool {
        self.error.is_none() && self.margin >= -self.tolerance && self.weak_margin >= -self.tolerance
    }
}

/// Run the quantitative isoperimetric inequality over a family of shapes,
/// each rescaled to area pi so that the comparison ball is the unit disk.
///
/// Shapes are processed concurrently; reports come back in input order.
/// A failing solve is recorded in its report and does not stop the sweep.
pub fn isoperimetric_sweep(
    family: &ShapeFamily,
    params: &PlateParams,
    config: &SweepConfig,
) -> Result<Vec<IsoperimetricReport>> {
    params.validate()?;
    let lambda2_ball = ball_spectrum(params, 2)?.eigenvalues[1];
    let delta = stability_constants(2, 2.0)?.delta_n;
    let members = family.members()?;
    Ok(members
        .par_iter()
        .map(|m| {
            isoperimetric_one(m, params, config, lambda2_ball, delta).unwrap_or_else(|e| {
                IsoperimetricReport {
                    id: m.id.clone(),
                    area: f64::NAN,
                    scale: f64::NAN,
                    asymmetry: f64::NAN,
                    asymmetry_error: f64::NAN,
                    lambda2: f64::NAN,
                    lambda2_ball,
                    stability_bound: f64::NAN,
                    margin: f64::NAN,
                    weak_margin: f64::NAN,
                    tolerance: f64::NAN,
                    degree: config.solver.degree,
                    degree_change: f64::NAN,
                    warnings: Vec::new(),
                    error: Some(e.to_string()),
                }
            })
        })
        .collect())
}

fn isoperimetric_one(
    m: &NamedDomain,
    params: &PlateParams,
    config: &SweepConfig,
    lambda2_ball: f64,
    delta: f64,
) -> Result<IsoperimetricReport> {
    let raw = m.domain.resolve()?;
    let scale = (PI / raw.area()).sqrt();
    let spec = m.domain.clone().scaled(scale);
    let domain = spec.resolve()?;
    let asym = fraenkel_asymmetry(&domain, config.resolution)?;
    let fine = solve_steklov(&domain, params, 1.0, &config.solver)?;
    let coarse_cfg = SolverConfig { degree: config.reference_degree, ..config.solver };
    let coarse = solve_steklov(&domain, params, 1.0, &coarse_cfg)?;
    let lambda2 = second(&fine)?;
    let degree_change = (lambda2 - second(&coarse)?).abs();
    let stability_bound = lambda2_ball * (1.0 - delta * asym.value * asym.value);
    let mut warnings = fine.warnings.clone();
    warnings.extend(coarse.warnings.iter().cloned());
    Ok(IsoperimetricReport {
        id: m.id.clone(),
        area: domain.area(),
        scale,
        asymmetry: asym.value,
        asymmetry_error: asym.error_estimate,
        lambda2,
        lambda2_ball,
        stability_bound,
        margin: stability_bound - lambda2,
        weak_margin: lambda2_ball - lambda2,
        tolerance: (RELATIVE_TOLERANCE * lambda2_ball).max(degree_change),
        degree: config.solver.degree,
        degree_change,
        warnings,
        error: None,
    })
}

/// Fail with [`Error::Assertion`] naming every shape whose margin is violated.
pub fn require_isoperimetric(reports: &[IsoperimetricReport]) -> Result<()> {
    let bad: Vec<String> = reports
        .iter()
        .filter(|r| !r.holds())
        .map(|r| match &r.error {
            Some(e) => format!("{}: {e}", r.id),
            None => format!("{}: margin {:.3e} below -{:.3e}", r.id, r.margin, r.tolerance),
        })
        .collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Error::Assertion(bad.join("; ")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MassConcentrationRow {
    pub eps: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    /// `|lambda2 - reference|`.
    pub gap: f64,
    pub shell_value: f64,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MassConcentrationTable {
    pub total_mass: f64,
    /// Boundary density `M / |dOmega|` of the limiting problem.
    pub rho: f64,
    /// `lambda_2` of the limiting problem.
    pub reference: f64,
    pub rows: Vec<MassConcentrationRow>,
}

impl MassConcentrationTable {
    pub fn gaps_strictly_decrease(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].gap < w[0].gap)
    }
}

/// `lambda_2` for the densities `rho_eps` along a decreasing list of `eps`,
/// against the boundary problem with density `M / |dOmega|`.
pub fn mass_concentration_sweep(
    domain: &StarDomain,
    params: &PlateParams,
    total_mass: f64,
    eps: &[f64],
    config: &SolverConfig,
) -> Result<MassConcentrationTable> {
    if eps.is_empty() {
        return Err(Error::Domain("eps list is empty".into()));
    }
    if eps.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::Domain("eps list must be strictly decreasing".into()));
    }
    let quad = QuadratureRule::new(domain, config.quadrature)?;
    let rho = total_mass / quad.perimeter();
    let reference = second(&solve_steklov(domain, params, rho, config)?)?;
    let rows = eps
        .par_iter()
        .map(|&e| {
            let (s, density) = solve_neumann_eps(domain, params, total_mass, e, config)?;
            let lambda2 = second(&s)?;
            Ok(MassConcentrationRow {
                eps: e,
                lambda1: s.eigenvalues[0],
                lambda2,
                gap: (lambda2 - reference).abs(),
                shell_value: density.shell_value,
                warnings: s.warnings,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MassConcentrationTable { total_mass, rho, reference, rows })
}

/// Both sides of the boundary-moment inequality with `p = 2`, taken about
/// `origin` with the comparison ball centered there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentCheck {
    pub moment: f64,
    /// `int_{dB} |x|^2 dS` for the ball of equal area.
    pub ball_moment: f64,
    /// `|Omega Δ B| / |Omega|`.
    pub ratio: f64,
    pub c_np: f64,
    /// `ball_moment (1 + c_{2,2} ratio^2)`.
    pub lower_bound: f64,
}

impl MomentCheck {
    pub fn holds(&self) -> bool {
        self.moment >= self.lower_bound * (1.0 - 1e-10)
    }
}

/// Evaluate the boundary-moment inequality about the boundary centroid.
pub fn boundary_moment_check(
    domain: &StarDomain,
    config: &SolverConfig,
    resolution: usize,
) -> Result<MomentCheck> {
    let quad = QuadratureRule::new(domain, config.quadrature)?;
    let origin = centroid_shift(&quad);
    let moment = boundary_moment_about(domain, &quad, 2.0, origin)?.value;
    let radius = (domain.area() / PI).sqrt();
    let ball_moment = 2.0 * PI * radius.powi(3);
    let ratio = symmetric_difference_ratio(domain, origin, resolution)?;
    let c_np = stability_constants(2, 2.0)?.c_np;
    Ok(MomentCheck { moment, ball_moment, ratio, c_np, lower_bound: ball_moment * (1.0 + c_np * ratio * ratio) })
}
