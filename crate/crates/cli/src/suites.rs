//! Verification suites run by `verify --suite <name>`.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use singular_bie_core::bie::assemble;
use singular_bie_core::geometry::{build_surface_grid, make_hemisphere, GridNode};
use singular_bie_core::potentials::{
    eval_double_layer, eval_single_layer_conormal, gauss_flux, near_field_grid, one_sided_limit, plane_flux_exact,
    DensityVector, Side, LIMIT_OFFSET_FRACTION,
};
use singular_bie_core::specfun::{gamma_fn, hyp2f1};
use singular_bie_core::{HalfSpacePoint, KernelKind, Kernels, PlanarRegion, QuadratureGrid, SingularityParams};

use crate::check::Check;
use crate::error::{CliError, CliResult};
use crate::oracles;

pub const SUITES: &[&str] = &["specfun", "gauss-flux", "jumps", "eigen", "plane-identity"];

/// Singular coefficients exercised by the suites.
pub const ALPHAS: [f64; 3] = [0.1, 0.25, 0.4];

pub fn run_suite(name: &str) -> CliResult<Vec<Check>> {
    match name {
        "specfun" => specfun(),
        "gauss-flux" => gauss_flux_suite(),
        "jumps" => jumps(),
        "eigen" => eigen(),
        "plane-identity" => plane_identity(),
        other => Err(CliError::config(format!("unknown suite `{other}` (expected one of {})", SUITES.join(", ")))),
    }
}

fn kernels(alpha: f64) -> CliResult<Kernels> {
    Ok(Kernels::new(SingularityParams::new(alpha)?)?)
}

/// The entry of `values` farthest from `target`.
fn worst(values: &[f64], target: f64) -> f64 {
    values.iter().copied().fold(target, |w, v| if (v - target).abs() > (w - target).abs() { v } else { w })
}

/// `n` points at radii spread over `[r0, r1]`, directions on a golden-angle
/// spiral with `x / |p|` in `[mu0, 0.95]`.
pub fn spread_points(n: usize, r0: f64, r1: f64, mu0: f64) -> Vec<HalfSpacePoint> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|k| {
            let f = (k as f64 + 0.5) / n as f64;
            let r = r0 + (r1 - r0) * ((k * 7 % n) as f64 + 0.5) / n as f64;
            let mu = mu0 + (0.95 - mu0) * f;
            let st = (1.0 - mu * mu).sqrt();
            let phi = golden * k as f64;
            HalfSpacePoint::new(r * mu, r * st * phi.cos(), r * st * phi.sin()).expect("x >= 0 by construction")
        })
        .collect()
}

/// `k` nodes of `grid` with `x >= x_min`, evenly spread through the node list.
pub fn sample_nodes(grid: &QuadratureGrid, k: usize, x_min: f64) -> Vec<GridNode> {
    let eligible: Vec<GridNode> = grid.nodes().iter().copied().filter(|n| n.point.x >= x_min).collect();
    (0..k).map(|i| eligible[(2 * i + 1) * eligible.len() / (2 * k)]).collect()
}

// ---------------------------------------------------------------- specfun

pub fn specfun() -> CliResult<Vec<Check>> {
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x05ee_d2f1);

    let mut gauss_err = 0.0f64;
    let mut sets = 0;
    while sets < 50 {
        let a: f64 = rng.gen_range(-1.5..2.5);
        let b: f64 = rng.gen_range(-1.5..2.5);
        let d: f64 = rng.gen_range(0.2..3.0);
        let c = a + b + d;
        // Keep Γ(c), Γ(c-a), Γ(c-b) away from their poles.
        let near_pole = |t: f64| t <= 0.0 && (t - t.round()).abs() < 0.05;
        if near_pole(c) || near_pole(c - a) || near_pole(c - b) || c <= 0.05 {
            continue;
        }
        let got = hyp2f1(a, b, c, 1.0)?;
        let want = oracles::gauss_sum(a, b, c);
        gauss_err = gauss_err.max((got - want).abs() / want.abs().max(1e-300));
        sets += 1;
    }
    checks.push(Check::at_most("gauss sum, 50 random sets (max rel err)", gauss_err, 1e-10));

    let mut euler_err = 0.0f64;
    for _ in 0..50 {
        let a: f64 = rng.gen_range(-2.0..2.5);
        let b: f64 = rng.gen_range(-2.0..2.5);
        let c: f64 = rng.gen_range(0.3..4.0);
        let z: f64 = rng.gen_range(-5.0..0.9);
        let lhs = hyp2f1(a, b, c, z)?;
        let rhs = (1.0 - z).powf(c - a - b) * hyp2f1(c - a, c - b, c, z)?;
        euler_err = euler_err.max((lhs - rhs).abs() / lhs.abs().max(1.0));
    }
    checks.push(Check::at_most("euler transformation, 50 random sets (max err)", euler_err, 1e-9));

    for z in [-3.0, 0.5, 0.9] {
        let want = -(1.0f64 - z).ln() / z;
        checks.push(Check::new(
            format!("2F1(1,1;2;{z}) = -ln(1-z)/z"),
            hyp2f1(1.0, 1.0, 2.0, z)?,
            want,
            1e-12 * want.abs(),
        ));
    }
    for x in [0.3, 0.8] {
        let want = f64::asin(x) / x;
        checks.push(Check::new(
            format!("2F1(1/2,1/2;3/2;{x}^2) = asin(x)/x"),
            hyp2f1(0.5, 0.5, 1.5, x * x)?,
            want,
            1e-12 * want,
        ));
    }
    checks.push(Check::new("gamma(1/2) = sqrt(pi)", gamma_fn(0.5)?, PI.sqrt(), 1e-14));
    for t in [0.37, 3.3, -1.6] {
        let want = oracles::gamma_stirling(t);
        checks.push(Check::new(format!("gamma({t}) vs Stirling series"), gamma_fn(t)?, want, 1e-12 * want.abs()));
    }
    // Frozen reference value (40-digit arithmetic).
    checks.push(Check::new("2F1(0.3,0.7;1.6;0.999)", hyp2f1(0.3, 0.7, 1.6, 0.999)?, 1.374_649_916_156_256_3, 1e-12));
    Ok(checks)
}

// --------------------------------------------------------- plane-identity

pub fn plane_identity() -> CliResult<Vec<Check>> {
    Ok(ALPHAS
        .iter()
        .map(|&al| {
            let got = oracles::plane_identity_integral(al + 1.5, 4.0);
            Check::new(format!("plane integral = 2pi/(1+2a), alpha={al}"), got, TAU / (1.0 + 2.0 * al), 1e-6)
        })
        .collect())
}

// ------------------------------------------------------------- gauss-flux

/// Nodes of the 32×32 grid used as surface points of the flux trichotomy.
const FLUX_SURFACE_POINTS: usize = 5;

pub fn gauss_flux_suite() -> CliResult<Vec<Check>> {
    let surf = make_hemisphere(1.0)?;
    let region = PlanarRegion::disk(1.0)?;
    let grid = build_surface_grid(&surf, 32, 32)?;
    let inside = spread_points(10, 0.1, 0.75, 0.1);
    let outside = spread_points(10, 1.3, 3.0, 0.02);
    let mut checks = Vec::new();
    for al in ALPHAS {
        let k = kernels(al)?;
        let sp = k.params();
        let flux = |kind, p: &HalfSpacePoint| gauss_flux(&k, kind, &grid, p);

        let w: Vec<f64> = inside.iter().map(|p| flux(KernelKind::Q1, p)).collect::<Result<_, _>>()?;
        checks.push(Check::new(format!("q1 flux, 10 interior points, alpha={al}"), worst(&w, -1.0), -1.0, 1e-3));
        let w: Vec<f64> = outside.iter().map(|p| flux(KernelKind::Q1, p)).collect::<Result<_, _>>()?;
        checks.push(Check::new(format!("q1 flux, 10 exterior points, alpha={al}"), worst(&w, 0.0), 0.0, 1e-3));

        let limits: Vec<f64> = sample_nodes(&grid, FLUX_SURFACE_POINTS, 0.2)
            .iter()
            .map(|node| -> CliResult<f64> {
                let h = node.mesh_width * LIMIT_OFFSET_FRACTION;
                let near = near_field_grid(&surf, node.param, h)?;
                let f = |p: &HalfSpacePoint| gauss_flux(&k, KernelKind::Q1, &near, p);
                let wi = one_sided_limit(f, &node.point, node.normal, h, Side::Interior)?;
                let we = one_sided_limit(f, &node.point, node.normal, h, Side::Exterior)?;
                Ok(0.5 * (wi + we))
            })
            .collect::<CliResult<_>>()?;
        checks.push(Check::new(
            format!("q1 flux, {FLUX_SURFACE_POINTS} surface points (extrapolated), alpha={al}"),
            worst(&limits, -0.5),
            -0.5,
            5e-3,
        ));

        let dev = |pts: &[HalfSpacePoint], shift: f64| -> CliResult<f64> {
            let d: Vec<f64> = pts
                .iter()
                .map(|p| Ok(flux(KernelKind::Q2, p)? - (plane_flux_exact(&region, p, sp) + shift)))
                .collect::<CliResult<_>>()?;
            Ok(worst(&d, 0.0))
        };
        checks.push(Check::at_most(
            format!("q2 flux - (i-1), 10 interior points, alpha={al}"),
            dev(&inside, -1.0)?,
            1e-3,
        ));
        checks.push(Check::at_most(format!("q2 flux - i, 10 exterior points, alpha={al}"), dev(&outside, 0.0)?, 1e-3));
    }
    Ok(checks)
}

// ------------------------------------------------------------------ jumps

/// Smooth test densities for the jump relations.
pub fn test_density(p: &HalfSpacePoint) -> f64 {
    1.0 + 0.5 * p.y - 0.3 * p.z + 0.4 * p.x * p.x
}

pub fn test_charge(p: &HalfSpacePoint) -> f64 {
    0.5 + 0.3 * p.y * p.z + 0.2 * p.x
}

/// Jumps at one surface node: `(w_e - w_i)` for both double layers and
/// `(interior - exterior)` conormal derivative of the `Q1` single layer.
pub struct JumpSample {
    pub node: GridNode,
    pub alpha: f64,
    pub double_q1: f64,
    pub double_q2: f64,
    pub single_conormal: f64,
}

/// Number of surface points of the jump suite.
pub const JUMP_POINTS: usize = 20;

/// Jump samples at `JUMP_POINTS` nodes of a 24×24 hemisphere grid, the
/// singular coefficient cycling through [`ALPHAS`].
pub fn jump_samples() -> CliResult<Vec<JumpSample>> {
    let surf = make_hemisphere(1.0)?;
    let grid = build_surface_grid(&surf, 24, 24)?;
    let nodes = sample_nodes(&grid, JUMP_POINTS, 0.2);
    let results = singular_bie_core::par::map_indices(nodes.len(), |i| -> CliResult<JumpSample> {
        let node = nodes[i];
        let alpha = ALPHAS[i % ALPHAS.len()];
        let k = kernels(alpha)?;
        let h = node.mesh_width * LIMIT_OFFSET_FRACTION;
        let near = near_field_grid(&surf, node.param, h)?;
        let mu = DensityVector::from_fn(&near, |n| test_density(&n.point));
        let rho = DensityVector::from_fn(&near, |n| test_charge(&n.point));
        let jump = |f: &dyn Fn(&HalfSpacePoint) -> singular_bie_core::Result<f64>| -> CliResult<f64> {
            let e = one_sided_limit(f, &node.point, node.normal, h, Side::Exterior)?;
            let i = one_sided_limit(f, &node.point, node.normal, h, Side::Interior)?;
            Ok(e - i)
        };
        let double_q1 = jump(&|p| eval_double_layer(&k, KernelKind::Q1, &near, &mu, p))?;
        let double_q2 = jump(&|p| eval_double_layer(&k, KernelKind::Q2, &near, &mu, p))?;
        let single_conormal = -jump(&|p| eval_single_layer_conormal(&k, KernelKind::Q1, &near, &rho, p, node.normal))?;
        Ok(JumpSample { node, alpha, double_q1, double_q2, single_conormal })
    });
    results.into_iter().collect()
}

pub fn jumps() -> CliResult<Vec<Check>> {
    let samples = jump_samples()?;
    let mut e1 = 0.0f64;
    let mut e2 = 0.0f64;
    let mut es = 0.0f64;
    for s in &samples {
        e1 = e1.max((s.double_q1 - test_density(&s.node.point)).abs());
        e2 = e2.max((s.double_q2 - test_density(&s.node.point)).abs());
        es = es.max((s.single_conormal - test_charge(&s.node.point)).abs());
    }
    let n = samples.len();
    Ok(vec![
        Check::at_most(format!("q1 double layer jump - mu, {n} points (max)"), e1, 1e-2),
        Check::at_most(format!("q2 double layer jump - mu, {n} points (max)"), e2, 1e-2),
        Check::at_most(format!("q1 single layer conormal jump - rho, {n} points (max)"), es, 1e-2),
    ])
}

// ------------------------------------------------------------------ eigen

/// Condition estimates below this count as a safe invertibility margin.
pub const CONDITION_LIMIT: f64 = 1e6;

pub fn eigen() -> CliResult<Vec<Check>> {
    let surf = make_hemisphere(1.0)?;
    let region = PlanarRegion::disk(1.0)?;
    let grid = build_surface_grid(&surf, 24, 24)?;
    let mut checks = Vec::new();
    for al in ALPHAS {
        let k = kernels(al)?;
        let sys = assemble(&k, KernelKind::Q1, &grid, &region, -2.0)?;
        let ones = vec![1.0; sys.dim()];
        let residual = sys.matrix().matvec(&ones).iter().fold(0.0f64, |m, v| m.max(v.abs()));
        checks.push(Check::at_most(format!("q1 lambda=-2 |A*1|_inf, alpha={al}"), residual, 5e-3));
        for (kind, lambda) in [(KernelKind::Q1, 2.0), (KernelKind::Q2, 2.0), (KernelKind::Q2, -2.0)] {
            let cond = assemble(&k, kind, &grid, &region, lambda)?.condition_estimate()?;
            checks.push(Check::at_most(
                format!("{} lambda={lambda} condition, alpha={al}", if kind == KernelKind::Q1 { "q1" } else { "q2" }),
                cond,
                CONDITION_LIMIT,
            ));
        }
    }
    Ok(checks)
}
