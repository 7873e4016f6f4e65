//! Solver round trips on the unit half-ball against manufactured solutions
//! and the closed-form Poisson integrals.

use singular_bie_core::bvp::{
    energy_diagnostic, evaluate_solution, rim_mismatch, solve, BvpProblem, EnergyOptions, ProblemKind,
};
use singular_bie_core::geometry::build_surface_grid;
use singular_bie_core::hemisphere::HalfBall;
use singular_bie_core::potentials::{PlaneData, SurfaceData};
use singular_bie_core::{Error, HalfSpacePoint, Kernels, SingularityParams};

fn interior_points(n: usize, max_radius: f64) -> Vec<HalfSpacePoint> {
    // Deterministic spread over the inner half-ball.
    let golden = 0.618_033_988_749_894_9;
    (0..n)
        .map(|k| {
            let f = (k as f64 + 0.5) / n as f64;
            let r = max_radius * (0.25 + 0.75 * f.cbrt());
            let mu = 0.1 + 0.85 * ((k as f64 * golden).fract());
            let phi = std::f64::consts::TAU * ((k as f64 * golden * golden).fract());
            let st = (1.0 - mu * mu).sqrt();
            HalfSpacePoint::new(r * mu, r * st * phi.cos(), r * st * phi.sin()).unwrap()
        })
        .collect()
}

fn max_rel_error<F: Fn(&HalfSpacePoint) -> f64>(
    field: &singular_bie_core::bvp::SolutionField,
    pts: &[HalfSpacePoint],
    exact: F,
) -> f64 {
    let scale = pts.iter().map(|p| exact(p).abs()).fold(0.0, f64::max);
    pts.iter().map(|p| (evaluate_solution(field, p).unwrap() - exact(p)).abs() / scale).fold(0.0, f64::max)
}

#[test]
fn dirichlet_manufactured_q2() {
    let sp = SingularityParams::new(0.25).unwrap();
    let k = Kernels::new(sp).unwrap();
    let src = HalfSpacePoint::new(1.2, 1.5, 1.0).unwrap();
    let (k2, s2) = (k.clone(), src);
    let phi = SurfaceData::from_fn(move |p| k2.q2(p, &s2).unwrap());
    let prob = BvpProblem::half_ball(ProblemKind::Dirichlet, sp, 1.0, 24, 24, phi, PlaneData::Zero).unwrap();
    let field = solve(&prob).unwrap();
    let err = max_rel_error(&field, &interior_points(12, 0.8), |p| k.q2(p, &src).unwrap());
    assert!(err < 2e-3, "max relative error {err:e}");
    assert!(field.condition() < 1e3);
}

#[test]
fn holmgren_manufactured_q1() {
    let sp = SingularityParams::new(0.25).unwrap();
    let k = Kernels::new(sp).unwrap();
    let src = HalfSpacePoint::new(0.5, 2.0, 0.8).unwrap();
    let (k2, s2) = (k.clone(), src);
    let phi = SurfaceData::from_fn(move |p| k2.q1(p, &s2).unwrap());
    let prob = BvpProblem::half_ball(ProblemKind::Holmgren, sp, 1.0, 24, 24, phi, PlaneData::Zero).unwrap();
    let field = solve(&prob).unwrap();
    let err = max_rel_error(&field, &interior_points(12, 0.8), |p| k.q1(p, &src).unwrap());
    assert!(err < 2e-3, "max relative error {err:e}");
}

#[test]
fn x_power_solution_with_plane_data() {
    // u = x^(1-2α): zero trace and constant weighted flux (1-2α) on the plane.
    let alpha = 0.2;
    let e = 1.0 - 2.0 * alpha;
    let sp = SingularityParams::new(alpha).unwrap();
    let phi = SurfaceData::from_fn(move |p| p.x.powf(e));
    let exact = |p: &HalfSpacePoint| p.x.powf(e);
    let pts = interior_points(8, 0.7);

    let dir = BvpProblem::half_ball(ProblemKind::Dirichlet, sp, 1.0, 20, 20, phi.clone(), PlaneData::Zero).unwrap();
    let err = max_rel_error(&solve(&dir).unwrap(), &pts, exact);
    assert!(err < 5e-3, "Dirichlet error {err:e}");

    let hol = BvpProblem::half_ball(ProblemKind::Holmgren, sp, 1.0, 20, 20, phi, PlaneData::Constant(e)).unwrap();
    let err = max_rel_error(&solve(&hol).unwrap(), &pts, exact);
    assert!(err < 5e-3, "Holmgren error {err:e}");
}

#[test]
fn linear_solution_with_nonzero_trace() {
    // u = 1 + y solves the equation, has zero weighted flux on the plane.
    let sp = SingularityParams::new(0.3).unwrap();
    let phi = SurfaceData::from_fn(|p| 1.0 + p.y);
    let tau = PlaneData::from_fn(|y, _| 1.0 + y);
    let exact = |p: &HalfSpacePoint| 1.0 + p.y;
    let pts = interior_points(8, 0.7);
    let dir = BvpProblem::half_ball(ProblemKind::Dirichlet, sp, 1.0, 20, 20, phi.clone(), tau).unwrap();
    let err = max_rel_error(&solve(&dir).unwrap(), &pts, exact);
    assert!(err < 5e-3, "Dirichlet error {err:e}");
    let hol = BvpProblem::half_ball(ProblemKind::Holmgren, sp, 1.0, 20, 20, phi, PlaneData::Zero).unwrap();
    let err = max_rel_error(&solve(&hol).unwrap(), &pts, exact);
    assert!(err < 5e-3, "Holmgren error {err:e}");
}

#[test]
fn poisson_formulas_reproduce_manufactured_solutions() {
    let sp = SingularityParams::new(0.25).unwrap();
    let hb = HalfBall::new(1.0, sp).unwrap();
    let grid = build_surface_grid(hb.surface(), 32, 32).unwrap();
    let k = hb.kernels().clone();
    let s1 = HalfSpacePoint::new(0.5, 2.0, 0.8).unwrap();
    let s2 = HalfSpacePoint::new(1.2, 1.5, 1.0).unwrap();
    let (ka, kb) = (k.clone(), k.clone());
    let phi1 = SurfaceData::from_fn(move |p| ka.q1(p, &s1).unwrap());
    let phi2 = SurfaceData::from_fn(move |p| kb.q2(p, &s2).unwrap());
    for p in interior_points(6, 0.8) {
        let h = hb.poisson_holmgren(&grid, &phi1, &PlaneData::Zero, &p).unwrap();
        let want = k.q1(&p, &s1).unwrap();
        assert!((h - want).abs() < 1e-3 * want.abs(), "Holmgren at {p:?}: {h} vs {want}");
        let d = hb.poisson_dirichlet(&grid, &phi2, &PlaneData::Zero, &p).unwrap();
        let want = k.q2(&p, &s2).unwrap();
        assert!((d - want).abs() < 1e-3 * want.abs(), "Dirichlet at {p:?}: {d} vs {want}");
    }
}

#[test]
fn poisson_formulas_with_plane_data() {
    let alpha = 0.25;
    let e = 1.0 - 2.0 * alpha;
    let sp = SingularityParams::new(alpha).unwrap();
    let hb = HalfBall::new(1.0, sp).unwrap();
    let grid = build_surface_grid(hb.surface(), 32, 32).unwrap();
    let xp = SurfaceData::from_fn(move |p| p.x.powf(e));
    let lin = SurfaceData::from_fn(|p| 1.0 + p.z);
    for p in interior_points(5, 0.7) {
        let h = hb.poisson_holmgren(&grid, &xp, &PlaneData::Constant(e), &p).unwrap();
        assert!((h - p.x.powf(e)).abs() < 1e-3, "Holmgren x-power at {p:?}: {h}");
        let d = hb.poisson_dirichlet(&grid, &lin, &PlaneData::from_fn(|_, z| 1.0 + z), &p).unwrap();
        assert!((d - 1.0 - p.z).abs() < 1e-3, "Dirichlet linear at {p:?}: {d}");
    }
}

#[test]
fn closed_surface_kernels_match_conormal_of_green() {
    for alpha in [0.1, 0.25, 0.4] {
        let sp = SingularityParams::new(alpha).unwrap();
        let hb = HalfBall::new(1.3, sp).unwrap();
        let grid = build_surface_grid(hb.surface(), 8, 8).unwrap();
        let p0 = HalfSpacePoint::new(0.3, 0.2, -0.4).unwrap();
        for n in grid.nodes() {
            let d = hb.holmgren_surface_kernel(&n.point, n.normal, &p0).unwrap();
            let c = hb.holmgren_surface_kernel_closed(&n.point, &p0).unwrap();
            assert!((d - c).abs() < 1e-9 * c.abs().max(1e-3), "Holmgren α={alpha}: {d} vs {c}");
            let d = hb.dirichlet_surface_kernel(&n.point, n.normal, &p0).unwrap();
            let c = hb.dirichlet_surface_kernel_closed(&n.point, &p0).unwrap();
            assert!((d - c).abs() < 1e-9 * c.abs().max(1e-3), "Dirichlet α={alpha}: {d} vs {c}");
        }
    }
}

#[test]
fn green_functions_vanish_where_required() {
    let sp = SingularityParams::new(0.35).unwrap();
    let hb = HalfBall::new(2.0, sp).unwrap();
    let p0 = HalfSpacePoint::new(0.7, -0.3, 0.5).unwrap();
    for (s, t) in [(0.3, 0.4), (2.0, 1.2), (5.0, 0.9)] {
        let q = hb.surface().point(s, t);
        let q = HalfSpacePoint::try_from_vec(q).unwrap();
        assert!(hb.green_g01(&q, &p0).unwrap().abs() < 1e-12);
        assert!(hb.green_g02(&q, &p0).unwrap().abs() < 1e-12);
    }
    assert_eq!(hb.green_g02(&HalfSpacePoint::new(0.0, 0.4, 0.1).unwrap(), &p0).unwrap(), 0.0);
    // Weighted x-derivative of G01 vanishes on the plane.
    let g = |x: f64| hb.green_g01(&HalfSpacePoint::new(x, 0.4, 0.1).unwrap(), &p0).unwrap();
    let x: f64 = 1e-6;
    let d = x.powf(0.7) * (g(2.0 * x) - g(x)) / x;
    assert!(d.abs() < 1e-5, "{d}");
}

#[test]
fn plane_kernels_match_green_limits() {
    let sp = SingularityParams::new(0.25).unwrap();
    let hb = HalfBall::new(1.0, sp).unwrap();
    let p0 = HalfSpacePoint::new(0.4, 0.1, 0.2).unwrap();
    let (y, z) = (0.3, -0.5);
    let x: f64 = 1e-7;
    let g = hb.green_g02(&HalfSpacePoint::new(x, y, z).unwrap(), &p0).unwrap();
    let lim = 0.5 * g / x.powf(0.5);
    let k = hb.dirichlet_plane_kernel(y, z, &p0).unwrap();
    assert!((lim - k).abs() < 1e-5 * k.abs(), "{lim} vs {k}");
    let h = hb.holmgren_plane_kernel(y, z, &p0).unwrap();
    let h_near = hb.green_g01(&HalfSpacePoint::new(1e-9, y, z).unwrap(), &p0).unwrap();
    assert!((h - h_near).abs() < 1e-6 * h.abs());
}

#[test]
fn homogeneous_problems_give_zero() {
    let sp = SingularityParams::new(0.25).unwrap();
    for kind in [ProblemKind::Dirichlet, ProblemKind::Holmgren] {
        let prob = BvpProblem::half_ball(kind, sp, 1.0, 16, 16, SurfaceData::Zero, PlaneData::Zero).unwrap();
        let f = solve(&prob).unwrap();
        for p in interior_points(10, 0.8) {
            assert!(evaluate_solution(&f, &p).unwrap().abs() <= 1e-12);
        }
    }
}

#[test]
fn incompatible_dirichlet_data_rejected() {
    let sp = SingularityParams::new(0.25).unwrap();
    let prob =
        BvpProblem::half_ball(ProblemKind::Dirichlet, sp, 1.0, 12, 12, SurfaceData::Constant(1.0), PlaneData::Zero)
            .unwrap();
    assert!(rim_mismatch(&prob) > 0.5);
    assert!(matches!(solve(&prob), Err(Error::Incompatible(_))));
}

#[test]
fn exterior_and_boundary_points_rejected() {
    let sp = SingularityParams::new(0.25).unwrap();
    let prob =
        BvpProblem::half_ball(ProblemKind::Holmgren, sp, 1.0, 12, 12, SurfaceData::Constant(1.0), PlaneData::Zero)
            .unwrap();
    let f = solve(&prob).unwrap();
    for p in [(0.5, 1.0, 0.5), (2.0, 0.0, 0.0), (0.0, 1.5, 0.0)] {
        let p = HalfSpacePoint::new(p.0, p.1, p.2).unwrap();
        assert!(matches!(evaluate_solution(&f, &p), Err(Error::OutOfDomain(..))), "{p:?}");
    }
    let on = HalfSpacePoint::try_from_vec(f.grid().nodes()[40].point.to_vec()).unwrap();
    assert!(matches!(evaluate_solution(&f, &on), Err(Error::OutOfDomain(..))));
    let inside = evaluate_solution(&f, &HalfSpacePoint::new(0.3, 0.1, 0.1).unwrap()).unwrap();
    assert!((inside - 1.0).abs() < 1e-3);
}

#[test]
fn energy_identity_for_exterior_q2() {
    let sp = SingularityParams::new(0.25).unwrap();
    let k = Kernels::new(sp).unwrap();
    let src = HalfSpacePoint::new(1.2, 1.5, 1.0).unwrap();
    let phi = SurfaceData::from_fn(move |p| k.q2(p, &src).unwrap());
    let prob = BvpProblem::half_ball(ProblemKind::Dirichlet, sp, 1.0, 16, 16, phi, PlaneData::Zero).unwrap();
    let f = solve(&prob).unwrap();
    let rep = energy_diagnostic(&f, &EnergyOptions { nodes: 10, ..EnergyOptions::default() }).unwrap();
    assert!(rep.volume > 0.0);
    assert!(rep.discrepancy < 0.05, "{rep:?}");
}
