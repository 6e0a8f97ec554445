use std::f64::consts::PI;

use approx::assert_relative_eq;
use steklov_core::verification::{
    isoperimetric_sweep, mass_concentration_sweep, reciprocal_sum_bound, require_isoperimetric,
    scaling_check, NamedDomain, ShapeFamily, SweepConfig,
};
use steklov_core::{solve_neumann_eps, solve_steklov, DomainSpec, PlateParams, SolverConfig, Spectrum};

#[test]
fn ellipse_spectrum_is_finite_and_sorted() {
    let d = DomainSpec::ellipse(2.0, 0.5).resolve().unwrap();
    let p = PlateParams::planar(1.0, 0.3).unwrap();
    let s = solve_steklov(&d, &p, 1.0, &SolverConfig::default()).unwrap();
    assert_eq!(s.eigenvalues[0], 0.0);
    assert!(s.eigenvalues[1] > 0.0);
    assert!(s.eigenvalues.iter().all(|v| v.is_finite()));
    assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    assert_eq!(s.degree, Some(14));
}

#[test]
fn spectrum_json_has_the_documented_fields() {
    let d = DomainSpec::unit_disk().resolve().unwrap();
    let p = PlateParams::planar(1.0, 0.0).unwrap();
    let s = solve_steklov(&d, &p, 1.0, &SolverConfig::with_degree(4)).unwrap();
    let v = serde_json::to_value(&s).unwrap();
    for key in ["eigenvalues", "clusters", "degree", "quadrature", "residuals"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    let back: Spectrum = serde_json::from_value(v).unwrap();
    assert_eq!(back, s);
}

#[test]
fn constants_stay_in_the_kernel_for_every_eps() {
    let d = DomainSpec::ellipse(1.2, 0.9).resolve().unwrap();
    let p = PlateParams::planar(2.0, 0.1).unwrap();
    for eps in [0.2, 0.1, 0.05] {
        let (s, _) = solve_neumann_eps(&d, &p, 3.0, eps, &SolverConfig::with_degree(8)).unwrap();
        assert_eq!(s.eigenvalues[0], 0.0);
        assert_eq!(s.clusters[0].size, 1);
        assert!(s.eigenvalues[1] > 0.0);
    }
}

#[test]
fn boundary_concentration_approaches_the_steklov_limit() {
    let d = DomainSpec::unit_disk().resolve().unwrap();
    let p = PlateParams::planar(1.0, 0.0).unwrap();
    let t = mass_concentration_sweep(&d, &p, 2.0 * PI, &[0.2, 0.1, 0.05, 0.025], &SolverConfig::default()).unwrap();
    assert_relative_eq!(t.rho, 1.0, max_relative = 1e-12);
    assert_relative_eq!(t.reference, 1.0, max_relative = 1e-10);
    assert!(t.gaps_strictly_decrease());
    assert!(t.rows[3].gap <= t.rows[0].gap / 4.0);
    assert!(t.rows.iter().all(|r| r.lambda1 == 0.0));
    assert!(mass_concentration_sweep(&d, &p, 2.0 * PI, &[0.1, 0.2], &SolverConfig::default()).is_err());
}

#[test]
fn scaling_law_on_an_ellipse() {
    let p = PlateParams::planar(3.0, 0.4).unwrap();
    let r = scaling_check(&DomainSpec::ellipse(1.5, 0.8), &p, 0.5, &SolverConfig::default()).unwrap();
    assert!(r.relative_error <= 1e-6, "{r:?}");
}

#[test]
fn reciprocal_sum_on_a_translated_star() {
    let spec = DomainSpec::star(1.0, vec![0.2, 0.1], vec![0.0, 0.0, 0.05]).translated([0.7, -0.4]);
    let p = PlateParams::planar(1.5, -0.2).unwrap();
    let r = reciprocal_sum_bound(&spec.resolve().unwrap(), &p, &SolverConfig::with_degree(12)).unwrap();
    assert!(r.holds() && r.sum > r.bound, "{r:?}");
    assert!(r.normalization_defect < 1e-10 && r.boundary_mean < 1e-10);
}

#[test]
fn three_lobed_star_lies_strictly_below_the_disk() {
    let family = ShapeFamily::List {
        shapes: vec![NamedDomain {
            id: "tri".into(),
            domain: DomainSpec::star(1.0, vec![0.0, 0.0, 0.25], vec![]),
        }],
    };
    let p = PlateParams::planar(1.0, 0.0).unwrap();
    let reports = isoperimetric_sweep(&family, &p, &SweepConfig::default()).unwrap();
    let r = &reports[0];
    assert_relative_eq!(r.area, PI, max_relative = 1e-12);
    assert!(r.lambda2 < r.lambda2_ball - r.tolerance, "{r:?}");
    require_isoperimetric(&reports).unwrap();
}

#[test]
fn failed_members_are_recorded_not_fatal() {
    let family = ShapeFamily::List {
        shapes: vec![
            NamedDomain { id: "bad".into(), domain: DomainSpec::ellipse(-1.0, 1.0) },
            NamedDomain { id: "disk".into(), domain: DomainSpec::disk(0.5) },
        ],
    };
    let p = PlateParams::planar(2.0, 0.3).unwrap();
    let cfg = SweepConfig { reference_degree: 6, resolution: 512, ..SweepConfig::default() };
    let reports = isoperimetric_sweep(&family, &p, &cfg).unwrap();
    assert!(reports[0].error.is_some());
    assert!(reports[1].holds());
    assert!(require_isoperimetric(&reports).is_err());
}
