//! Dirichlet and Holmgren problems on a domain bounded by a surface `Γ` and a
//! planar piece `X` of `x = 0`.
//!
//! The plane data is first absorbed by a plane potential `v` (`v1` for the
//! Holmgren problem, `v2` for the Dirichlet problem). The remainder is sought
//! as a double-layer potential `w = ∫_Γ μ B_ν[q]` whose kernel already
//! satisfies the homogeneous plane condition; its interior trace
//! `w = -μ/2 + Kμ` on `Γ` gives the density equation
//!
//! ```text
//! μ - 2 K μ = -2 (φ - v|_Γ).
//! ```

use alloc::format;
use alloc::vec::Vec;

use crate::bie::{assemble, FactorizedSystem};
use crate::error::{Error, Result};
use crate::geometry::{build_surface_grid, HalfSpacePoint, ParamSurface, PlanarRegion, QuadratureGrid, SurfaceShape};
use crate::kernels::{KernelKind, Kernels, SingularityParams};
use crate::math::{cos, sin, sqrt, Vec3, TAU};
use crate::par;
use crate::potentials::{
    eval_double_layer_interior, gauss_flux, plane_potential_dirichlet, plane_potential_holmgren, DensityVector,
    PlaneData, SurfaceData,
};
use crate::quad::gauss_legendre_on;

/// Surface and plane data must agree on the rim to this tolerance (scaled by
/// the data magnitude) for the Dirichlet problem.
pub const RIM_COMPATIBILITY_TOL: f64 = 1e-6;

/// Number of rim samples used for the compatibility check.
const RIM_SAMPLES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProblemKind {
    /// `u = φ` on `Γ`, `u = τ1` on `X`.
    Dirichlet,
    /// `u = φ` on `Γ`, `lim x^(2α) u_x = ν1` on `X`.
    Holmgren,
}

impl ProblemKind {
    pub fn kernel(self) -> KernelKind {
        match self {
            ProblemKind::Dirichlet => KernelKind::Q2,
            ProblemKind::Holmgren => KernelKind::Q1,
        }
    }
}

/// A boundary value problem and its discretization.
#[derive(Clone, Debug)]
pub struct BvpProblem {
    pub kind: ProblemKind,
    pub params: SingularityParams,
    pub surface: ParamSurface,
    pub region: PlanarRegion,
    pub ns: usize,
    pub nt: usize,
    /// `φ` on `Γ`.
    pub surface_data: SurfaceData,
    /// `τ1` (Dirichlet) or `ν1` (Holmgren) on `X`.
    pub plane_data: PlaneData,
}

impl BvpProblem {
    /// Problem on the half-ball of radius `a`.
    pub fn half_ball(
        kind: ProblemKind,
        params: SingularityParams,
        a: f64,
        ns: usize,
        nt: usize,
        surface_data: SurfaceData,
        plane_data: PlaneData,
    ) -> Result<Self> {
        Ok(BvpProblem {
            kind,
            params,
            surface: crate::geometry::make_hemisphere(a)?,
            region: PlanarRegion::disk(a)?,
            ns,
            nt,
            surface_data,
            plane_data,
        })
    }
}

/// A solved problem: density, grid and everything needed to evaluate `u`.
#[derive(Clone, Debug)]
pub struct SolutionField {
    kind: ProblemKind,
    kernels: Kernels,
    surface: ParamSurface,
    grid: QuadratureGrid,
    region: PlanarRegion,
    plane_data: PlaneData,
    density: DensityVector,
    condition: f64,
}

/// Solve either problem.
pub fn solve(problem: &BvpProblem) -> Result<SolutionField> {
    match problem.kind {
        ProblemKind::Dirichlet => solve_dirichlet(problem),
        ProblemKind::Holmgren => solve_holmgren(problem),
    }
}

pub fn solve_holmgren(problem: &BvpProblem) -> Result<SolutionField> {
    expect_kind(problem, ProblemKind::Holmgren)?;
    solve_reduced(problem)
}

/// Solve the Dirichlet problem; rejects data that disagree on the rim.
pub fn solve_dirichlet(problem: &BvpProblem) -> Result<SolutionField> {
    expect_kind(problem, ProblemKind::Dirichlet)?;
    check_rim_compatibility(problem)?;
    solve_reduced(problem)
}

fn expect_kind(problem: &BvpProblem, kind: ProblemKind) -> Result<()> {
    if problem.kind != kind {
        return Err(Error::Domain(format!("expected a {kind:?} problem, got {:?}", problem.kind)));
    }
    Ok(())
}

/// Largest mismatch `|φ - τ1|` over sample points of the rim.
pub fn rim_mismatch(problem: &BvpProblem) -> f64 {
    let (s0, s1) = problem.surface.s_range();
    let t_edge = problem.surface.edge_t();
    let mut worst: f64 = 0.0;
    for k in 0..RIM_SAMPLES {
        let s = s0 + (s1 - s0) * (k as f64 + 0.5) / RIM_SAMPLES as f64;
        let p = problem.surface.edge_point(s);
        let phi = problem.surface_data.eval(&problem.surface, s, t_edge);
        let tau = problem.plane_data.eval(p.y, p.z);
        let scale = phi.abs().max(tau.abs()).max(1.0);
        worst = worst.max((phi - tau).abs() / scale);
    }
    worst
}

fn check_rim_compatibility(problem: &BvpProblem) -> Result<()> {
    let m = rim_mismatch(problem);
    if m > RIM_COMPATIBILITY_TOL {
        return Err(Error::Incompatible(m));
    }
    Ok(())
}

fn plane_potential(
    kind: ProblemKind,
    data: &PlaneData,
    region: &PlanarRegion,
    p: &HalfSpacePoint,
    sp: SingularityParams,
) -> Result<f64> {
    match kind {
        ProblemKind::Dirichlet => plane_potential_dirichlet(data, region, p, sp),
        ProblemKind::Holmgren => plane_potential_holmgren(data, region, p, sp),
    }
}

fn solve_reduced(problem: &BvpProblem) -> Result<SolutionField> {
    let sp = problem.params;
    let kernels = Kernels::new(sp)?;
    let grid = build_surface_grid(&problem.surface, problem.ns, problem.nt)?;
    let near_rim = grid.nodes().iter().filter(|n| n.point.x < 2.0 * n.mesh_width).count();
    if near_rim > 0 {
        log::warn!(
            "{near_rim} surface nodes lie within two mesh widths of the rim, where the kernel weight x^(2α) is small"
        );
    }
    let system = assemble(&kernels, problem.kind.kernel(), &grid, &problem.region, 2.0)?;
    let factors: FactorizedSystem = system.factorize()?;
    log::info!("density system of size {} has condition estimate {:.3e}", grid.len(), factors.condition());

    let phi = problem.surface_data.sample(&problem.surface, &grid);
    let nodes = grid.nodes();
    let v: Vec<Result<f64>> = par::map_indices(nodes.len(), |i| {
        plane_potential(problem.kind, &problem.plane_data, &problem.region, &nodes[i].point, sp)
    });
    let rhs: Vec<f64> =
        v.into_iter().zip(phi.values()).map(|(vi, f)| vi.map(|vi| -2.0 * (f - vi))).collect::<Result<_>>()?;
    let density = factors.solve(&DensityVector::from_raw(rhs))?;
    Ok(SolutionField {
        kind: problem.kind,
        kernels,
        surface: problem.surface.clone(),
        grid,
        region: problem.region.clone(),
        plane_data: problem.plane_data.clone(),
        density,
        condition: factors.condition(),
    })
}

impl SolutionField {
    pub fn kind(&self) -> ProblemKind {
        self.kind
    }

    pub fn grid(&self) -> &QuadratureGrid {
        &self.grid
    }

    pub fn density(&self) -> &DensityVector {
        &self.density
    }

    pub fn region(&self) -> &PlanarRegion {
        &self.region
    }

    pub fn surface(&self) -> &ParamSurface {
        &self.surface
    }

    pub fn kernels(&self) -> &Kernels {
        &self.kernels
    }

    /// 1-norm condition estimate of the density system.
    pub fn condition(&self) -> f64 {
        self.condition
    }

    /// Whether `p` lies in `D ∪ X`, decided by the unit-density `Q1` flux
    /// (`-1` inside, `0` outside).
    pub fn contains(&self, p: &HalfSpacePoint) -> Result<bool> {
        if p.x == 0.0 && !self.region.contains(p.y, p.z) {
            return Ok(false);
        }
        match gauss_flux(&self.kernels, KernelKind::Q1, &self.grid, p) {
            Ok(flux) => Ok(flux < -0.5),
            Err(Error::Singularity(_)) => Ok(false),
            Err(e) => Err(e),
        }
    }

    /// `u(p)`; fails with `OutOfDomain` outside `D ∪ X`. Plain quadrature of
    /// the double layer loses accuracy within about one mesh width of `Γ`.
    pub fn evaluate(&self, p: &HalfSpacePoint) -> Result<f64> {
        if !self.contains(p)? {
            return Err(Error::OutOfDomain(p.x, p.y, p.z));
        }
        self.evaluate_unchecked(p)
    }

    /// `u(p)` without the domain test.
    pub fn evaluate_unchecked(&self, p: &HalfSpacePoint) -> Result<f64> {
        let v = plane_potential(self.kind, &self.plane_data, &self.region, p, self.kernels.params())?;
        let w =
            eval_double_layer_interior(&self.kernels, self.kind.kernel(), &self.grid, &self.density, &self.region, p)?;
        Ok(v + w)
    }

    /// Evaluate at many points in parallel.
    pub fn evaluate_many(&self, points: &[HalfSpacePoint]) -> Vec<Result<f64>> {
        par::map_indices(points.len(), |i| self.evaluate(&points[i]))
    }
}

/// Public entry point matching [`SolutionField::evaluate`].
pub fn evaluate_solution(field: &SolutionField, p: &HalfSpacePoint) -> Result<f64> {
    field.evaluate(p)
}

/// Settings of [`energy_diagnostic`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyOptions {
    /// Radius of the inner half-ball relative to the outer one.
    pub radius_fraction: f64,
    /// Gauss–Legendre nodes per spherical coordinate.
    pub nodes: usize,
    /// Finite-difference step relative to the inner radius.
    pub fd_step: f64,
}

impl Default for EnergyOptions {
    fn default() -> Self {
        EnergyOptions { radius_fraction: 0.8, nodes: 12, fd_step: 1e-4 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyReport {
    /// `∭ x^(2α) |∇u|²` over the inner half-ball.
    pub volume: f64,
    /// `∬ u B_n[u]` over its boundary (outward conormal).
    pub boundary: f64,
    /// `|volume - boundary| / max(|volume|, |boundary|)`, zero if both vanish.
    pub discrepancy: f64,
}

/// Compare the weighted Dirichlet energy of a half-ball solution with its
/// boundary form on an inner half-ball `{|p| < f·a}`.
///
/// Polar angle from the `x` axis is sampled through `cos θ = v^(1/(1-2α))`,
/// which makes the `x^(-2α)` behavior of `x^(2α)|∇u|²` near the plane smooth
/// in `v`.
pub fn energy_diagnostic(field: &SolutionField, opts: &EnergyOptions) -> Result<EnergyReport> {
    let SurfaceShape::Hemisphere { radius } = field.surface.shape() else {
        return Err(Error::Domain("energy diagnostic needs a half-ball domain".into()));
    };
    if !(opts.radius_fraction > 0.0 && opts.radius_fraction < 1.0) || opts.nodes < 2 {
        return Err(Error::Domain(format!("invalid energy options {opts:?}")));
    }
    let al = field.kernels.alpha();
    let rho = opts.radius_fraction * radius;
    let n = opts.nodes;
    let m = 1.0 / (1.0 - 2.0 * al);
    let (r_n, r_w) = gauss_legendre_on(n, 0.0, rho);
    let (v_n, v_w) = gauss_legendre_on(n, 0.0, 1.0);
    let (p_n, p_w) = gauss_legendre_on(n, 0.0, TAU);
    let h0 = opts.fd_step * rho;
    let u = |p: Vec3| -> Result<f64> { field.evaluate_unchecked(&HalfSpacePoint::try_from_vec(p)?) };
    let dir = |mu: f64, phi: f64| {
        let st = sqrt((1.0 - mu * mu).max(0.0));
        Vec3::new(mu, st * cos(phi), st * sin(phi))
    };

    // Volume term.
    let cells = n * n * n;
    let vol_terms: Vec<Result<f64>> = par::map_indices(cells, |idx| {
        let (i, j, k) = (idx / (n * n), (idx / n) % n, idx % n);
        let (v, vw) = (v_n[j], v_w[j]);
        let mu = powm(v, m);
        let dmu = m * powm(v, m - 1.0) * vw;
        let p = dir(mu, p_n[k]) * r_n[i];
        let h = h0.min(0.25 * p.x);
        let mut g2 = 0.0;
        for e in [Vec3::X, Vec3::new(0.0, 1.0, 0.0), Vec3::new(0.0, 0.0, 1.0)] {
            let d = (u(p + e * h)? - u(p - e * h)?) / (2.0 * h);
            g2 += d * d;
        }
        Ok(powm(p.x, 2.0 * al) * g2 * r_n[i] * r_n[i] * r_w[i] * dmu * p_w[k])
    });
    let mut volume = 0.0;
    for t in vol_terms {
        volume += t?;
    }

    // Spherical part of the boundary.
    let sph_terms: Vec<Result<f64>> = par::map_indices(n * n, |idx| {
        let (j, k) = (idx / n, idx % n);
        let (v, vw) = (v_n[j], v_w[j]);
        let mu = powm(v, m);
        let dmu = m * powm(v, m - 1.0) * vw;
        let e = dir(mu, p_n[k]);
        let p = e * rho;
        let h = h0.min(0.25 * p.x);
        let du = (u(p + e * h)? - u(p - e * h)?) / (2.0 * h);
        Ok(u(p)? * powm(p.x, 2.0 * al) * du * rho * rho * dmu * p_w[k])
    });
    let mut boundary = 0.0;
    for t in sph_terms {
        boundary += t?;
    }

    // Planar part: outward conormal is -lim x^(2α) u_x.
    if !field.plane_data.is_zero() {
        let delta = 1e-3 * rho;
        let plane_terms: Vec<Result<f64>> = par::map_indices(n * n, |idx| {
            let (i, k) = (idx / n, idx % n);
            let (y, z) = (r_n[i] * cos(p_n[k]), r_n[i] * sin(p_n[k]));
            let data = field.plane_data.eval(y, z);
            let (trace, flux) = match field.kind {
                ProblemKind::Holmgren => (u(Vec3::new(0.0, y, z))?, data),
                ProblemKind::Dirichlet => {
                    let c = (u(Vec3::new(delta, y, z))? - data) / powm(delta, 1.0 - 2.0 * al);
                    (data, (1.0 - 2.0 * al) * c)
                }
            };
            Ok(-trace * flux * r_n[i] * r_w[i] * p_w[k])
        });
        for t in plane_terms {
            boundary += t?;
        }
    }

    let scale = volume.abs().max(boundary.abs());
    let discrepancy = if scale > 0.0 { (volume - boundary).abs() / scale } else { 0.0 };
    Ok(EnergyReport { volume, boundary, discrepancy })
}

fn powm(x: f64, e: f64) -> f64 {
    crate::math::powf(x, e)
}
