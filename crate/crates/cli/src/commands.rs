//! The `solve` and `convergence` commands.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use log::{info, warn};
use singular_bie_core::bvp::{self, BvpProblem, ProblemKind, SolutionField};
use singular_bie_core::geometry::{build_region_grid, build_surface_grid, edge_normal_tilt, make_hemisphere};
use singular_bie_core::potentials::{plane_flux_exact, plane_flux_i, PlaneData, SurfaceData};
use singular_bie_core::{HalfSpacePoint, Kernels, ParamSurface, PlanarRegion, SingularityParams};

use crate::builtin::Builtin;
use crate::config::{DataSpec, DomainSpec, EvalSpec, RunConfig};
use crate::error::{CliError, CliResult};
use crate::tables;

/// Edge-curve sample count for regions bounded by a tabulated surface.
const EDGE_SAMPLES: usize = 256;

/// Largest `|n_x|` near the edge curve accepted without a warning.
const EDGE_TILT_WARN: f64 = 0.05;

/// Lattice points farther than this fraction of the radius from the origin
/// are dropped, keeping evaluation away from `Γ`.
const LATTICE_RADIUS_FRACTION: f64 = 0.8;

/// Everything `solve` needs, resolved from a configuration.
pub struct Setup {
    pub kernels: Kernels,
    pub problem: BvpProblem,
    pub points: Vec<HalfSpacePoint>,
    /// Radius of the half-ball domain, `None` for tabulated surfaces.
    pub radius: Option<f64>,
}

fn domain(cfg: &RunConfig) -> CliResult<(ParamSurface, PlanarRegion, Option<f64>)> {
    match &cfg.domain {
        DomainSpec::Hemisphere { radius } => {
            Ok((make_hemisphere(*radius)?, PlanarRegion::disk(*radius)?, Some(*radius)))
        }
        DomainSpec::Table { path } => {
            let surf = ParamSurface::from_table(tables::read_surface_table(path)?)?;
            let region = PlanarRegion::from_surface_edge(&surf, EDGE_SAMPLES)?;
            let probe = build_surface_grid(&surf, cfg.grid.ns, cfg.grid.nt)?;
            let tilt = edge_normal_tilt(&surf, &probe);
            if tilt > EDGE_TILT_WARN {
                warn!("surface normal near the edge curve has |n_x| = {tilt:.3}; the surface should meet x = 0 at a right angle");
            }
            Ok((surf, region, None))
        }
    }
}

fn check_pole(b: &Builtin, radius: Option<f64>) -> CliResult<()> {
    if let (Some(p), Some(a)) = (b.pole(), radius) {
        if p.to_vec().norm() <= a {
            return Err(CliError::config(format!("the pole of `{b}` must lie outside the half-ball of radius {a}")));
        }
    }
    Ok(())
}

fn evaluation_points(cfg: &RunConfig, radius: Option<f64>) -> CliResult<Vec<HalfSpacePoint>> {
    let raw = match &cfg.evaluation {
        EvalSpec::Points(p) => p.clone(),
        EvalSpec::PointsFile(path) => tables::read_points(path)?,
        EvalSpec::Lattice(n) => {
            let a = radius.ok_or_else(|| CliError::config("`eval.lattice` needs a hemisphere domain"))?;
            lattice_points(a, *n)
        }
    };
    if raw.is_empty() {
        return Err(CliError::config("no evaluation points"));
    }
    raw.iter()
        .map(|&[x, y, z]| {
            let strictly_inside = x > 0.0 && radius.map_or(true, |a| (x * x + y * y + z * z).sqrt() < a);
            if !strictly_inside {
                return Err(CliError::config(format!(
                    "evaluation point ({x}, {y}, {z}) is not strictly inside the domain"
                )));
            }
            Ok(HalfSpacePoint::new(x, y, z)?)
        })
        .collect()
}

/// Cell centers of an `n³` lattice over `[0, a] × [-a, a]²` within `0.8 a`.
pub fn lattice_points(a: f64, n: usize) -> Vec<[f64; 3]> {
    let c = |k: usize, lo: f64, hi: f64| lo + (hi - lo) * (k as f64 + 0.5) / n as f64;
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let p = [c(i, 0.0, a), c(j, -a, a), c(k, -a, a)];
                if (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt() <= LATTICE_RADIUS_FRACTION * a {
                    out.push(p);
                }
            }
        }
    }
    out
}

fn surface_data(spec: &DataSpec, k: &Kernels, radius: Option<f64>) -> CliResult<SurfaceData> {
    match spec {
        DataSpec::Builtin(b) => {
            check_pole(b, radius)?;
            Ok(b.surface_data(k))
        }
        DataSpec::Table(path) => Ok(SurfaceData::Table(tables::read_param_table(path)?)),
    }
}

fn plane_data(
    spec: &DataSpec,
    kind: ProblemKind,
    k: &Kernels,
    region: &PlanarRegion,
    radius: Option<f64>,
) -> CliResult<PlaneData> {
    match spec {
        DataSpec::Builtin(b) => {
            check_pole(b, radius)?;
            Ok(b.plane_data(kind, k))
        }
        DataSpec::Table(path) => Ok(PlaneData::Table(tables::read_polar_table(path, region.centroid())?)),
    }
}

impl Setup {
    pub fn from_config(cfg: &RunConfig) -> CliResult<Self> {
        let params = SingularityParams::new(cfg.alpha)?;
        let kernels = Kernels::new(params)?;
        let (surface, region, radius) = domain(cfg)?;
        let surface_data = surface_data(&cfg.surface_data, &kernels, radius)?;
        let plane_data = plane_data(&cfg.plane_data, cfg.kind, &kernels, &region, radius)?;
        let points = evaluation_points(cfg, radius)?;
        let problem = BvpProblem {
            kind: cfg.kind,
            params,
            surface,
            region,
            ns: cfg.grid.ns,
            nt: cfg.grid.nt,
            surface_data,
            plane_data,
        };
        Ok(Setup { kernels, problem, points, radius })
    }
}

/// Values of `u` at the points, in order.
pub fn solve_and_evaluate(problem: &BvpProblem, points: &[HalfSpacePoint]) -> CliResult<(SolutionField, Vec<f64>)> {
    let field = bvp::solve(problem)?;
    info!("density solved on {} nodes, condition estimate {:.3e}", field.grid().len(), field.condition());
    let values = field.evaluate_many(points).into_iter().collect::<Result<Vec<f64>, _>>()?;
    Ok((field, values))
}

/// Compares the adaptive plane flux with a product rule on the planar grid.
fn log_plane_quadrature_check(cfg: &RunConfig, problem: &BvpProblem, points: &[HalfSpacePoint]) {
    if !log::log_enabled!(log::Level::Info) {
        return;
    }
    let Ok(grid) = build_region_grid(&problem.region, cfg.grid.nr, cfg.grid.nphi) else {
        return;
    };
    let diff = points
        .iter()
        .map(|p| (plane_flux_i(p, &grid, problem.params) - plane_flux_exact(&problem.region, p, problem.params)).abs())
        .fold(0.0, f64::max);
    info!(
        "plane flux on the {}x{} planar grid differs from the adaptive value by at most {diff:.2e}",
        cfg.grid.nr, cfg.grid.nphi
    );
}

/// Fixed-width scientific form with 15 significant digits.
pub fn fmt_value(v: f64) -> String {
    format!("{v:.14e}")
}

fn create(path: &Path) -> CliResult<csv::Writer<std::fs::File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    let file = std::fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    Ok(csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(file))
}

fn csv_err(path: &Path, e: csv::Error) -> CliError {
    CliError::io(path, std::io::Error::other(e))
}

/// Write `x,y,z,u` rows.
pub fn write_solution(path: &Path, points: &[HalfSpacePoint], values: &[f64]) -> CliResult<()> {
    let mut w = create(path)?;
    w.write_record(["x", "y", "z", "u"]).map_err(|e| csv_err(path, e))?;
    for (p, u) in points.iter().zip(values) {
        w.write_record([fmt_value(p.x), fmt_value(p.y), fmt_value(p.z), fmt_value(*u)])
            .map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

pub fn cmd_solve(config_path: &Path) -> CliResult<()> {
    let cfg = RunConfig::load(config_path)?;
    let out = cfg.output.clone().ok_or_else(|| CliError::config("missing required key `output.path`"))?;
    let setup = Setup::from_config(&cfg)?;
    log_plane_quadrature_check(&cfg, &setup.problem, &setup.points);
    let (_, values) = solve_and_evaluate(&setup.problem, &setup.points)?;
    write_solution(&out, &setup.points, &values)?;
    info!("wrote {} rows to {}", values.len(), out.display());
    Ok(())
}

/// One row of the convergence table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub level: usize,
    pub ns: usize,
    pub nt: usize,
    pub max_rel_err: f64,
    pub runtime_s: f64,
}

/// Grid size per side at refinement `level` (1-based): 16, 24, 32, ...
pub fn level_size(level: usize) -> usize {
    8 * (level + 1)
}

/// `max |u - u*| / max |u*|` over the points.
pub fn max_rel_error(got: &[f64], want: &[f64]) -> f64 {
    let scale = want.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let err = got.iter().zip(want).fold(0.0f64, |m, (g, w)| m.max((g - w).abs()));
    if scale > 0.0 {
        err / scale
    } else {
        err
    }
}

/// Solve the manufactured problem of `cfg` on grids of increasing size.
pub fn convergence_table(cfg: &RunConfig, levels: usize) -> CliResult<Vec<ConvergenceRow>> {
    if levels < 2 {
        return Err(CliError::config(format!("`--levels` must be at least 2, got {levels}")));
    }
    let builtin = match (&cfg.surface_data, &cfg.plane_data) {
        (DataSpec::Builtin(s), DataSpec::Builtin(p)) if s == p => s.clone(),
        _ => {
            return Err(CliError::config(
                "convergence needs a manufactured solution: `data.surface` must be a builtin and `data.plane` the same builtin",
            ))
        }
    };
    let mut setup = Setup::from_config(cfg)?;
    let exact = builtin.exact(&setup.kernels);
    let want: Vec<f64> = setup.points.iter().map(&exact).collect();
    let mut rows = Vec::with_capacity(levels);
    for level in 1..=levels {
        let n = level_size(level);
        setup.problem.ns = n;
        setup.problem.nt = n;
        let t0 = Instant::now();
        let (_, got) = solve_and_evaluate(&setup.problem, &setup.points)?;
        let runtime_s = t0.elapsed().as_secs_f64();
        let max_rel_err = max_rel_error(&got, &want);
        info!("level {level}: {n}x{n}, max relative error {max_rel_err:.3e}, {runtime_s:.2} s");
        rows.push(ConvergenceRow { level, ns: n, nt: n, max_rel_err, runtime_s });
    }
    Ok(rows)
}

pub fn write_convergence(path: &Path, rows: &[ConvergenceRow]) -> CliResult<()> {
    let mut w = create(path)?;
    w.write_record(["level", "Ns", "Nt", "max_rel_err", "runtime_s"]).map_err(|e| csv_err(path, e))?;
    for r in rows {
        w.write_record([
            r.level.to_string(),
            r.ns.to_string(),
            r.nt.to_string(),
            fmt_value(r.max_rel_err),
            format!("{:.3}", r.runtime_s),
        ])
        .map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

/// Output location: the override, then `output.convergence`, then
/// `convergence.csv` beside `output.path`, then the working directory.
pub fn convergence_path(cfg: &RunConfig, override_path: Option<&Path>) -> PathBuf {
    if let Some(p) = override_path {
        return p.to_path_buf();
    }
    if let Some(p) = &cfg.convergence_output {
        return p.clone();
    }
    match cfg.output.as_ref().and_then(|p| p.parent()) {
        Some(dir) => dir.join("convergence.csv"),
        None => PathBuf::from("convergence.csv"),
    }
}

pub fn cmd_convergence(config_path: &Path, levels: usize, override_path: Option<&Path>) -> CliResult<()> {
    if levels < 2 {
        return Err(CliError::config(format!("`--levels` must be at least 2, got {levels}")));
    }
    let cfg = RunConfig::load(config_path)?;
    let rows = convergence_table(&cfg, levels)?;
    let path = convergence_path(&cfg, override_path);
    write_convergence(&path, &rows)?;
    let mut out = std::io::stdout().lock();
    for r in &rows {
        let _ = writeln!(
            out,
            "level {} ({}x{}): max_rel_err {:.3e}, {:.2} s",
            r.level, r.ns, r.nt, r.max_rel_err, r.runtime_s
        );
    }
    Ok(())
}
