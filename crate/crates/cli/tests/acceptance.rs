//! Acceptance suite: one PASS/FAIL line per criterion, with the measured
//! values and runtimes. Run with `cargo test --test acceptance -- --nocapture`
//! to see the report.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use singular_bie::builtin::Builtin;
use singular_bie::check::Check;
use singular_bie::suites::{self, spread_points};
use singular_bie_core::bvp::{solve, BvpProblem, ProblemKind, SolutionField};
use singular_bie_core::geometry::{build_surface_grid, make_hemisphere};
use singular_bie_core::hemisphere::HalfBall;
use singular_bie_core::potentials::{
    eval_single_layer, eval_single_layer_conormal, DensityVector, PlaneData, SurfaceData,
};
use singular_bie_core::{HalfSpacePoint, KernelKind, Kernels, SingularityParams, Vec3};

struct Outcome {
    checks: Vec<Check>,
    error: Option<String>,
}

impl Outcome {
    fn from(r: Result<Vec<Check>, String>) -> Self {
        match r {
            Ok(checks) => Outcome { checks, error: None },
            Err(e) => Outcome { checks: Vec::new(), error: Some(e) },
        }
    }
}

/// Runs one criterion, prints its checks and verdict, and returns the verdict.
fn criterion(id: usize, title: &str, max_seconds: f64, body: impl FnOnce() -> Result<Vec<Check>, String>) -> bool {
    let t0 = Instant::now();
    let out = Outcome::from(body());
    let secs = t0.elapsed().as_secs_f64();
    for c in &out.checks {
        println!("    {c}");
    }
    if let Some(e) = &out.error {
        println!("    error: {e}");
    }
    let in_time = secs < max_seconds;
    let pass = out.error.is_none() && !out.checks.is_empty() && out.checks.iter().all(Check::passed) && in_time;
    println!(
        "criterion {id:>2} {title:<44} {} ({secs:.2} s, limit {max_seconds} s{})",
        if pass { "PASS" } else { "FAIL" },
        if in_time { "" } else { ", exceeded" }
    );
    pass
}

fn s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn kernels(alpha: f64) -> Result<Kernels, String> {
    Kernels::new(SingularityParams::new(alpha).map_err(s)?).map_err(s)
}

/// Interior evaluation points with `|p| <= 0.8 a` on the unit half-ball.
fn interior_points() -> Vec<HalfSpacePoint> {
    spread_points(20, 0.1, 0.8, 0.1)
}

// Criterion 4: `E(q)` by central differences relative to the size of its terms.
fn pde_residual() -> Result<Vec<Check>, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let h = 1e-3;
    let mut worst = [0.0f64; 2];
    let mut pairs = 0;
    while pairs < 50 {
        let al: f64 = rng.gen_range(0.05..0.45);
        let p =
            HalfSpacePoint::new(rng.gen_range(0.2..2.0), rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)).unwrap();
        let q =
            HalfSpacePoint::new(rng.gen_range(0.05..2.0), rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)).unwrap();
        if (p.to_vec() - q.to_vec()).norm() <= 0.2 {
            continue;
        }
        pairs += 1;
        let k = kernels(al)?;
        for (slot, kind) in [KernelKind::Q1, KernelKind::Q2].into_iter().enumerate() {
            let f = |d: Vec3| k.q(kind, &HalfSpacePoint::try_from_vec(p.to_vec() + d).unwrap(), &q).unwrap();
            let f0 = f(Vec3::ZERO);
            let second = |e: Vec3| (f(e * h) - 2.0 * f0 + f(e * -h)) / (h * h);
            let (uxx, uyy, uzz) = (second(Vec3::X), second(Vec3::new(0.0, 1.0, 0.0)), second(Vec3::new(0.0, 0.0, 1.0)));
            let drift = 2.0 * al / p.x * (f(Vec3::X * h) - f(Vec3::X * -h)) / (2.0 * h);
            let scale = uxx.abs() + uyy.abs() + uzz.abs() + drift.abs();
            worst[slot] = worst[slot].max((uxx + uyy + uzz + drift).abs() / scale);
        }
    }
    Ok(vec![
        Check::at_most("E(q1) relative residual, 50 pairs (max)", worst[0], 1e-4),
        Check::at_most("E(q2) relative residual, 50 pairs (max)", worst[1], 1e-4),
    ])
}

fn manufactured(kind: ProblemKind, builtin: &str, alpha: f64) -> Result<(SolutionField, Builtin, Kernels), String> {
    let k = kernels(alpha)?;
    let b = Builtin::parse(builtin)?;
    let problem =
        BvpProblem::half_ball(kind, k.params(), 1.0, 32, 32, b.surface_data(&k), b.plane_data(kind, &k)).map_err(s)?;
    Ok((solve(&problem).map_err(s)?, b, k))
}

/// Largest pointwise relative error.
fn max_rel(got: &[f64], want: &[f64]) -> f64 {
    got.iter().zip(want).fold(0.0f64, |m, (g, w)| m.max((g - w).abs() / w.abs()))
}

const DIRICHLET_POLE: &str = "q2-exterior(2.0, 2.0, 1.5)";
const HOLMGREN_POLE: &str = "q1-exterior(1.0, 2.5, 1.5)";

// Criteria 7 and 8.
fn end_to_end(kind: ProblemKind, builtin: &str) -> Result<Vec<Check>, String> {
    let mut checks = Vec::new();
    for al in suites::ALPHAS {
        let (field, b, k) = manufactured(kind, builtin, al)?;
        let pts = interior_points();
        let exact = b.exact(&k);
        let want: Vec<f64> = pts.iter().map(&exact).collect();
        let got: Vec<f64> = field.evaluate_many(&pts).into_iter().collect::<Result<_, _>>().map_err(s)?;
        checks.push(Check::at_most(format!("{b}, 20 points, alpha={al} (max rel err)"), max_rel(&got, &want), 1e-3));
    }
    Ok(checks)
}

// Criterion 9.
fn cross_oracle() -> Result<Vec<Check>, String> {
    let mut checks = Vec::new();
    for al in suites::ALPHAS {
        let ball = HalfBall::new(1.0, SingularityParams::new(al).map_err(s)?).map_err(s)?;
        let grid = build_surface_grid(ball.surface(), 32, 32).map_err(s)?;
        for (kind, builtin) in [(ProblemKind::Dirichlet, DIRICHLET_POLE), (ProblemKind::Holmgren, HOLMGREN_POLE)] {
            let (field, b, k) = manufactured(kind, builtin, al)?;
            let pts = interior_points();
            let exact = b.exact(&k);
            let want: Vec<f64> = pts.iter().map(&exact).collect();
            let bie: Vec<f64> = field.evaluate_many(&pts).into_iter().collect::<Result<_, _>>().map_err(s)?;
            let phi: SurfaceData = b.surface_data(&k);
            let plane: PlaneData = b.plane_data(kind, &k);
            let poisson: Vec<f64> = pts
                .iter()
                .map(|p| match kind {
                    ProblemKind::Dirichlet => ball.poisson_dirichlet(&grid, &phi, &plane, p),
                    ProblemKind::Holmgren => ball.poisson_holmgren(&grid, &phi, &plane, p),
                })
                .collect::<Result<_, _>>()
                .map_err(s)?;
            checks.push(Check::at_most(
                format!("{kind:?}: BIE vs Poisson, 20 points, alpha={al} (max rel)"),
                max_rel(&bie, &poisson),
                1e-3,
            ));
            checks.push(Check::at_most(
                format!("{kind:?}: Poisson vs {b}, alpha={al} (max rel)"),
                max_rel(&poisson, &want),
                1e-3,
            ));
        }
    }
    Ok(checks)
}

/// Far point at fixed height: `x = 1`, `|p| = R`.
fn far_point(r: f64) -> HalfSpacePoint {
    HalfSpacePoint::new(1.0, (r * r - 1.0).sqrt(), 0.0).unwrap()
}

// Criterion 10.
fn decay() -> Result<Vec<Check>, String> {
    let al = 0.25;
    let k = kernels(al)?;
    let grid = build_surface_grid(&make_hemisphere(1.0).map_err(s)?, 24, 24).map_err(s)?;
    let rho = DensityVector::from_fn(&grid, |n| suites::test_charge(&n.point));
    let radii = [10.0, 20.0, 40.0, 80.0];
    let mut value = Vec::new();
    let mut flux = Vec::new();
    for r in radii {
        let p = far_point(r);
        let n = p.to_vec() / r;
        value.push(eval_single_layer(&k, KernelKind::Q1, &grid, &rho, &p).map_err(s)?.abs() * r.powf(1.0 + 2.0 * al));
        flux.push(
            eval_single_layer_conormal(&k, KernelKind::Q1, &grid, &rho, &p, n).map_err(s)?.abs()
                * r.powf(2.0 + 2.0 * al),
        );
    }
    let spread = |v: &[f64]| v.iter().cloned().fold(0.0, f64::max) / v.iter().cloned().fold(f64::INFINITY, f64::min);
    // A spread of exactly 1 means no variation; the bound is a factor of 2.
    Ok(vec![
        Check::new("max/min of |v1| R^(1+2a), R = 10..80", spread(&value), 1.0, 1.0),
        Check::new("max/min of |B v1| R^(2+2a), R = 10..80", spread(&flux), 1.0, 1.0),
    ])
}

// Criterion 11.
fn uniqueness() -> Result<Vec<Check>, String> {
    let mut checks = Vec::new();
    for kind in [ProblemKind::Dirichlet, ProblemKind::Holmgren] {
        let k = kernels(0.25)?;
        let problem =
            BvpProblem::half_ball(kind, k.params(), 1.0, 32, 32, SurfaceData::Zero, PlaneData::Zero).map_err(s)?;
        let field = solve(&problem).map_err(s)?;
        let u: Vec<f64> = field.evaluate_many(&interior_points()).into_iter().collect::<Result<_, _>>().map_err(s)?;
        checks.push(Check::at_most(
            format!("{kind:?}: homogeneous data, max |u|"),
            u.iter().fold(0.0f64, |m, v| m.max(v.abs())),
            1e-6,
        ));
    }
    Ok(checks)
}

fn suite(name: &str) -> Result<Vec<Check>, String> {
    suites::run_suite(name).map_err(s)
}

#[test]
fn acceptance() {
    let results = [
        criterion(1, "special functions: Gauss sum, Euler", 1.0, || {
            Ok(suite("specfun")?.into_iter().take(2).collect())
        }),
        criterion(2, "plane identity 2pi/(1+2a)", 5.0, || suite("plane-identity")),
        criterion(3, "unit-density flux trichotomy (32x32)", 30.0, || {
            Ok(suite("gauss-flux")?.into_iter().filter(|c| c.name.starts_with("q1")).collect())
        }),
        criterion(4, "fundamental solutions satisfy E(q) = 0", 5.0, pde_residual),
        criterion(5, "spectral facts (24x24)", 60.0, || suite("eigen")),
        criterion(6, "jump relations at 20 surface points", 60.0, || suite("jumps")),
        criterion(7, "end-to-end Dirichlet (32x32)", 180.0, || end_to_end(ProblemKind::Dirichlet, DIRICHLET_POLE)),
        criterion(8, "end-to-end Holmgren (32x32)", 180.0, || end_to_end(ProblemKind::Holmgren, HOLMGREN_POLE)),
        criterion(9, "BIE vs Poisson formulas", 180.0, cross_oracle),
        criterion(10, "far-field decay of the single layer", 10.0, decay),
        criterion(11, "uniqueness for homogeneous data", 60.0, uniqueness),
    ];
    let failed: Vec<usize> = results.iter().enumerate().filter(|(_, p)| !**p).map(|(i, _)| i + 1).collect();
    println!("acceptance: {} of {} criteria passed", results.len() - failed.len(), results.len());
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
