//! Layer potentials over `Γ`, potentials over the planar region `X`, and the
//! unit-density flux integrals.
//!
//! Plane integrals `∬_X f(η,ζ) (x² + ρ²)^(-β) dη dζ`, with `ρ` the distance in
//! the plane from the foot point `P = (y, z)` of the target, are computed in
//! polar coordinates about `P`. The value `f(P)` is subtracted and its share
//! integrated in closed form along each ray, so the remaining radial integrand
//! is bounded even as `x → 0`. Rays are graded geometrically away from `P`;
//! the angle is integrated adaptively.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::{bracket, GridLayout, HalfSpacePoint, ParamSurface, PlanarRegion, QuadratureGrid};
use crate::kernels::{KernelKind, Kernels, SingularityParams};
use crate::math::{atan2, cos, hypot, powf, sin, Vec3, PI, TAU};
use crate::quad::{adaptive_gk, gauss_legendre};

/// Layer density sampled at the nodes of a surface grid.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityVector {
    values: Vec<f64>,
}

impl DensityVector {
    pub fn new(grid: &QuadratureGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Dimension { expected: grid.len(), got: values.len() });
        }
        Ok(DensityVector { values })
    }

    /// Wrap raw values; the caller guarantees they match a grid.
    pub fn from_raw(values: Vec<f64>) -> Self {
        DensityVector { values }
    }

    pub fn constant(grid: &QuadratureGrid, c: f64) -> Self {
        DensityVector { values: alloc::vec![c; grid.len()] }
    }

    pub fn from_fn<F: Fn(&crate::geometry::GridNode) -> f64>(grid: &QuadratureGrid, f: F) -> Self {
        DensityVector { values: grid.nodes().iter().map(f).collect() }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn scaled(&self, c: f64) -> Self {
        DensityVector { values: self.values.iter().map(|v| v * c).collect() }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

fn check_len(grid: &QuadratureGrid, d: &DensityVector) -> Result<()> {
    if grid.len() != d.len() {
        return Err(Error::Dimension { expected: grid.len(), got: d.len() });
    }
    Ok(())
}

/// Double-layer potential `∫_Γ μ B_ν[q](s; target) dS` by plain quadrature.
///
/// Accurate only for targets farther than about one mesh width from `Γ`.
pub fn eval_double_layer(
    k: &Kernels,
    kind: KernelKind,
    grid: &QuadratureGrid,
    mu: &DensityVector,
    target: &HalfSpacePoint,
) -> Result<f64> {
    check_len(grid, mu)?;
    let mut acc = 0.0;
    for (node, m) in grid.nodes().iter().zip(mu.values()) {
        if *m != 0.0 {
            acc += node.weight * m * k.conormal(kind, &node.point, node.normal, target)?;
        }
    }
    Ok(acc)
}

/// Double-layer potential at a point of `D ∪ X` with the density value at the
/// nearest node subtracted and its share restored through the exact
/// unit-density flux. Keeps plain-quadrature accuracy for targets closer to
/// `Γ` than the mesh width.
pub fn eval_double_layer_interior(
    k: &Kernels,
    kind: KernelKind,
    grid: &QuadratureGrid,
    mu: &DensityVector,
    region: &PlanarRegion,
    target: &HalfSpacePoint,
) -> Result<f64> {
    check_len(grid, mu)?;
    let (j, _) = grid.nearest(target.to_vec());
    let m0 = mu.values()[j];
    let mut acc = 0.0;
    for (node, m) in grid.nodes().iter().zip(mu.values()) {
        let dm = m - m0;
        if dm != 0.0 {
            acc += node.weight * dm * k.conormal(kind, &node.point, node.normal, target)?;
        }
    }
    if m0 != 0.0 {
        let flux = match kind {
            KernelKind::Q1 => -1.0,
            KernelKind::Q2 => plane_flux_exact(region, target, k.params()) - 1.0,
        };
        acc += m0 * flux;
    }
    Ok(acc)
}

/// Single-layer potential `∫_Γ ρ q(s; target) dS`.
pub fn eval_single_layer(
    k: &Kernels,
    kind: KernelKind,
    grid: &QuadratureGrid,
    rho: &DensityVector,
    target: &HalfSpacePoint,
) -> Result<f64> {
    check_len(grid, rho)?;
    let mut acc = 0.0;
    for (node, r) in grid.nodes().iter().zip(rho.values()) {
        if *r != 0.0 {
            acc += node.weight * r * k.q(kind, target, &node.point)?;
        }
    }
    Ok(acc)
}

/// Conormal derivative `x^(2α) n·∇` of the single-layer potential at `target`.
pub fn eval_single_layer_conormal(
    k: &Kernels,
    kind: KernelKind,
    grid: &QuadratureGrid,
    rho: &DensityVector,
    target: &HalfSpacePoint,
    normal_at_target: Vec3,
) -> Result<f64> {
    check_len(grid, rho)?;
    let mut acc = 0.0;
    for (node, r) in grid.nodes().iter().zip(rho.values()) {
        if *r != 0.0 {
            acc += node.weight * r * k.conormal_of_field(kind, target, normal_at_target, &node.point)?;
        }
    }
    Ok(acc)
}

/// Double-layer potential of the unit density.
pub fn gauss_flux(k: &Kernels, kind: KernelKind, grid: &QuadratureGrid, target: &HalfSpacePoint) -> Result<f64> {
    let mut acc = 0.0;
    for node in grid.nodes() {
        acc += node.weight * k.conormal(kind, &node.point, node.normal, target)?;
    }
    Ok(acc)
}

/// Position of a point relative to the closed domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Interior,
    Boundary,
    Exterior,
}

/// Exact unit-density double-layer value: `-1, -1/2, 0` for `Q1`;
/// `i - 1, i - 1/2, i` for `Q2`, with `i` the plane flux at the point.
pub fn gauss_flux_expected(kind: KernelKind, location: Location, plane_flux: f64) -> f64 {
    let base = match location {
        Location::Interior => -1.0,
        Location::Boundary => -0.5,
        Location::Exterior => 0.0,
    };
    match kind {
        KernelKind::Q1 => base,
        KernelKind::Q2 => plane_flux + base,
    }
}

/// Plane flux `i = (1-2α)/(2π) x^(1-2α) ∬_X (x² + ρ²)^(α-3/2)`, by quadrature on
/// a planar grid.
pub fn plane_flux_i(target: &HalfSpacePoint, disk_grid: &QuadratureGrid, sp: SingularityParams) -> f64 {
    let a = sp.alpha();
    let x = target.x;
    if x == 0.0 {
        return 0.0;
    }
    let s: f64 = disk_grid
        .nodes()
        .iter()
        .map(|n| {
            let (dy, dz) = (n.point.y - target.y, n.point.z - target.z);
            n.weight * powf(x * x + dy * dy + dz * dz, a - 1.5)
        })
        .sum();
    (1.0 - 2.0 * a) / (2.0 * PI) * powf(x, 1.0 - 2.0 * a) * s
}

/// Plane flux `i` by exact radial integration and adaptive angular quadrature.
/// Accurate for targets arbitrarily close to the plane. Equals `0` at `x = 0`
/// off `X̄`, and `1` at `x = 0` over `X`.
pub fn plane_flux_exact(region: &PlanarRegion, target: &HalfSpacePoint, sp: SingularityParams) -> f64 {
    let a = sp.alpha();
    let x = target.x;
    if x == 0.0 {
        return if region.contains(target.y, target.z) { 1.0 } else { 0.0 };
    }
    let beta = 1.5 - a;
    let s = PlaneIntegrator::default().integrate(region, None, target, beta);
    (1.0 - 2.0 * a) / (2.0 * PI) * powf(x, 1.0 - 2.0 * a) * s
}

pub type PlaneFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Data prescribed on the planar region, as a function of `(y, z)`.
#[derive(Clone)]
pub enum PlaneData {
    Zero,
    Constant(f64),
    Function(PlaneFn),
    Table(PolarTable),
}

impl core::fmt::Debug for PlaneData {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            PlaneData::Zero => f.write_str("Zero"),
            PlaneData::Constant(c) => write!(f, "Constant({c})"),
            PlaneData::Function(_) => f.write_str("Function(..)"),
            PlaneData::Table(t) => write!(f, "Table({}x{})", t.r.len(), t.phi.len()),
        }
    }
}

impl PlaneData {
    pub fn from_fn<F: Fn(f64, f64) -> f64 + Send + Sync + 'static>(f: F) -> Self {
        PlaneData::Function(Arc::new(f))
    }

    pub fn eval(&self, y: f64, z: f64) -> f64 {
        match self {
            PlaneData::Zero => 0.0,
            PlaneData::Constant(c) => *c,
            PlaneData::Function(f) => f(y, z),
            PlaneData::Table(t) => t.eval(y, z),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, PlaneData::Zero) || matches!(self, PlaneData::Constant(c) if *c == 0.0)
    }
}

pub type PointFn = Arc<dyn Fn(&HalfSpacePoint) -> f64 + Send + Sync>;

/// Data prescribed on the surface `Γ`.
#[derive(Clone)]
pub enum SurfaceData {
    Zero,
    Constant(f64),
    /// A function of the surface point.
    Pointwise(PointFn),
    /// Values on an `(s, t)` lattice, interpolated bilinearly.
    Table(ParamTable),
}

impl core::fmt::Debug for SurfaceData {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            SurfaceData::Zero => f.write_str("Zero"),
            SurfaceData::Constant(c) => write!(f, "Constant({c})"),
            SurfaceData::Pointwise(_) => f.write_str("Pointwise(..)"),
            SurfaceData::Table(t) => write!(f, "Table({}x{})", t.s.len(), t.t.len()),
        }
    }
}

impl SurfaceData {
    pub fn from_fn<F: Fn(&HalfSpacePoint) -> f64 + Send + Sync + 'static>(f: F) -> Self {
        SurfaceData::Pointwise(Arc::new(f))
    }

    /// Value at parameter `(s, t)` of `surf`.
    pub fn eval(&self, surf: &ParamSurface, s: f64, t: f64) -> f64 {
        match self {
            SurfaceData::Zero => 0.0,
            SurfaceData::Constant(c) => *c,
            SurfaceData::Pointwise(f) => {
                let p = surf.point(s, t);
                f(&HalfSpacePoint { x: p.x.max(0.0), y: p.y, z: p.z })
            }
            SurfaceData::Table(tab) => tab.eval(s, t),
        }
    }

    /// Values at the nodes of a surface grid built on `surf`.
    pub fn sample(&self, surf: &ParamSurface, grid: &QuadratureGrid) -> DensityVector {
        DensityVector::from_fn(grid, |n| match self {
            SurfaceData::Pointwise(f) => f(&n.point),
            _ => self.eval(surf, n.param.0, n.param.1),
        })
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, SurfaceData::Zero) || matches!(self, SurfaceData::Constant(c) if *c == 0.0)
    }
}

/// Values on a rectangular `(s, t)` lattice, `values[i * t.len() + j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamTable {
    pub s: Vec<f64>,
    pub t: Vec<f64>,
    pub values: Vec<f64>,
}

impl ParamTable {
    pub fn new(s: Vec<f64>, t: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if s.len() < 2 || t.len() < 2 {
            return Err(Error::Domain("parameter table needs at least 2 values per parameter".into()));
        }
        if values.len() != s.len() * t.len() {
            return Err(Error::Dimension { expected: s.len() * t.len(), got: values.len() });
        }
        if !s.windows(2).all(|w| w[0] < w[1]) || !t.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Domain("parameter table coordinates must be strictly increasing".into()));
        }
        Ok(ParamTable { s, t, values })
    }

    pub fn eval(&self, s: f64, t: f64) -> f64 {
        let (i, u) = bracket(&self.s, s);
        let (j, v) = bracket(&self.t, t);
        let nt = self.t.len();
        let at = |i: usize, j: usize| self.values[i * nt + j];
        (1.0 - u) * ((1.0 - v) * at(i, j) + v * at(i, j + 1)) + u * ((1.0 - v) * at(i + 1, j) + v * at(i + 1, j + 1))
    }
}

/// Values on a polar `(r, φ)` lattice about `center`, interpolated bilinearly
/// (periodically in `φ`, clamped in `r`).
#[derive(Clone, Debug, PartialEq)]
pub struct PolarTable {
    pub center: (f64, f64),
    pub r: Vec<f64>,
    pub phi: Vec<f64>,
    /// `values[i * phi.len() + j]` at `(r[i], phi[j])`.
    pub values: Vec<f64>,
}

impl PolarTable {
    pub fn new(center: (f64, f64), r: Vec<f64>, phi: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if r.len() < 2 || phi.len() < 2 {
            return Err(Error::Domain("polar table needs at least 2 values per coordinate".into()));
        }
        if values.len() != r.len() * phi.len() {
            return Err(Error::Dimension { expected: r.len() * phi.len(), got: values.len() });
        }
        if !r.windows(2).all(|w| w[0] < w[1]) || !phi.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Domain("polar table coordinates must be strictly increasing".into()));
        }
        if phi[0] < 0.0 || *phi.last().unwrap() >= TAU + phi[0] {
            return Err(Error::Domain("polar table angles must lie in one period starting at >= 0".into()));
        }
        Ok(PolarTable { center, r, phi, values })
    }

    /// Table from node values on a polar planar grid (`r` fastest).
    pub fn from_grid_values(grid: &QuadratureGrid, center: (f64, f64), values: &[f64]) -> Result<Self> {
        let GridLayout::Planar { nr, nphi } = grid.layout() else {
            return Err(Error::Domain("polar table requires a planar grid".into()));
        };
        if values.len() != nr * nphi {
            return Err(Error::Dimension { expected: nr * nphi, got: values.len() });
        }
        let nodes = grid.nodes();
        let phi: Vec<f64> = (0..nphi).map(|j| nodes[j * nr].param.1).collect();
        let r: Vec<f64> = (0..nr).map(|i| nodes[i].param.0).collect();
        let mut v = alloc::vec![0.0; nr * nphi];
        for j in 0..nphi {
            for i in 0..nr {
                v[i * nphi + j] = values[j * nr + i];
            }
        }
        Self::new(center, r, phi, v)
    }

    pub fn eval(&self, y: f64, z: f64) -> f64 {
        let (dy, dz) = (y - self.center.0, z - self.center.1);
        let rr = hypot(dy, dz);
        let mut ph = atan2(dz, dy);
        let p0 = self.phi[0];
        while ph < p0 {
            ph += TAU;
        }
        while ph >= p0 + TAU {
            ph -= TAU;
        }
        let np = self.phi.len();
        let (j0, j1, v) = match self.phi.iter().position(|&p| p > ph) {
            Some(0) => (np - 1, 0, 0.0),
            Some(j) => (j - 1, j, (ph - self.phi[j - 1]) / (self.phi[j] - self.phi[j - 1])),
            None => {
                let span = self.phi[0] + TAU - self.phi[np - 1];
                (np - 1, 0, (ph - self.phi[np - 1]) / span)
            }
        };
        let (i, u) = bracket(&self.r, rr);
        let at = |i: usize, j: usize| self.values[i * np + j];
        (1.0 - u) * ((1.0 - v) * at(i, j0) + v * at(i, j1)) + u * ((1.0 - v) * at(i + 1, j0) + v * at(i + 1, j1))
    }
}

/// Polar quadrature about the foot point of a target for integrals
/// `∬_region f (x² + ρ²)^(-β) dη dζ`.
#[derive(Clone, Copy, Debug)]
pub struct PlaneIntegrator {
    /// Gauss–Legendre nodes per radial panel.
    pub radial_nodes: usize,
    /// Smallest first radial panel as a fraction of the ray length.
    pub min_first_panel: f64,
    pub angular_rel_tol: f64,
    pub angular_abs_tol: f64,
    pub max_angular_intervals: usize,
}

impl Default for PlaneIntegrator {
    fn default() -> Self {
        PlaneIntegrator {
            radial_nodes: 10,
            min_first_panel: 1e-5,
            angular_rel_tol: 1e-10,
            angular_abs_tol: 1e-13,
            max_angular_intervals: 400,
        }
    }
}

impl PlaneIntegrator {
    /// `∬_region f (x² + ρ²)^(-β)`; `f = None` means `f ≡ 1`.
    pub fn integrate(
        &self,
        region: &PlanarRegion,
        f: Option<&dyn Fn(f64, f64) -> f64>,
        target: &HalfSpacePoint,
        beta: f64,
    ) -> f64 {
        let x2 = target.x * target.x;
        let origin = (target.y, target.z);
        let f0 = match f {
            None => 1.0,
            Some(f) if region.contains(origin.0, origin.1) => f(origin.0, origin.1),
            Some(_) => 0.0,
        };
        // ∫ (x²+ρ²)^(-β) ρ dρ = (x²+ρ²)^(1-β) / (2(1-β))
        let antider = |rho: f64| powf(x2 + rho * rho, 1.0 - beta) / (2.0 * (1.0 - beta));
        let (gl_x, gl_w) = gauss_legendre(self.radial_nodes);
        let x = target.x;
        let mut intervals = Vec::with_capacity(4);
        let ray = |phi: f64, intervals: &mut Vec<(f64, f64)>| -> f64 {
            region.ray_intervals(origin, phi, intervals);
            let (ey, ez) = (cos(phi), sin(phi));
            let mut total = 0.0;
            for &(r0, r1) in intervals.iter() {
                total += f0 * (antider(r1) - antider(r0));
                let Some(f) = f else { continue };
                if r1 <= r0 {
                    continue;
                }
                // Geometric panels away from the foot point.
                let mut lo = r0;
                let mut width = (x.max(self.min_first_panel * r1)).max(r0 * 0.5).min(r1 - r0);
                while lo < r1 {
                    let hi = (lo + width).min(r1);
                    let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
                    for (t, w) in gl_x.iter().zip(&gl_w) {
                        let rho = mid + half * t;
                        let val = f(origin.0 + rho * ey, origin.1 + rho * ez) - f0;
                        total += half * w * val * powf(x2 + rho * rho, -beta) * rho;
                    }
                    lo = hi;
                    width *= 2.0;
                }
            }
            total
        };
        // From a foot point outside the region only a cone of directions
        // meets it; integrating over the cone alone keeps the rule from
        // stepping over it.
        let (a, b) = region.angular_span(origin).unwrap_or((0.0, TAU));
        adaptive_gk(
            |phi| ray(phi, &mut intervals),
            a,
            b,
            self.angular_abs_tol,
            self.angular_rel_tol,
            self.max_angular_intervals,
        )
    }
}

/// `v1(p) = -(1/2π) ∬_X ν1 (x² + ρ²)^(-1/2-α)`, whose weighted normal derivative
/// `x^(2α) ∂v1/∂x` tends to `ν1` on `X`.
pub fn plane_potential_holmgren(
    nu1: &PlaneData,
    region: &PlanarRegion,
    target: &HalfSpacePoint,
    sp: SingularityParams,
) -> Result<f64> {
    if nu1.is_zero() {
        return Ok(0.0);
    }
    let f = |y: f64, z: f64| nu1.eval(y, z);
    let s = PlaneIntegrator::default().integrate(region, Some(&f), target, 0.5 + sp.alpha());
    Ok(-s / (2.0 * PI))
}

/// Radius of the disk carrying the extended Dirichlet plane data, relative to
/// the shadow radius of `X`.
pub const DIRICHLET_EXTENSION_FACTOR: f64 = 1.5;

/// `τ1` continued outside `X` by its value at the boundary point on the ray
/// from the centroid.
pub fn extend_by_radial_clamping(tau1: &PlaneData, region: &PlanarRegion, y: f64, z: f64) -> f64 {
    if region.contains(y, z) {
        return tau1.eval(y, z);
    }
    let c = region.centroid();
    let phi = atan2(z - c.1, y - c.0);
    let rb = region.radial_extent(phi) * (1.0 - 1e-12);
    tau1.eval(c.0 + rb * cos(phi), c.1 + rb * sin(phi))
}

/// The disk on which [`plane_potential_dirichlet`] integrates.
pub fn dirichlet_extension_disk(region: &PlanarRegion) -> PlanarRegion {
    PlanarRegion::Disk { center: region.centroid(), radius: DIRICHLET_EXTENSION_FACTOR * region.shadow_radius() }
}

/// `v2(p) = (1-2α)/(2π) x^(1-2α) ∬ τ1 (x² + ρ²)^(α-3/2)` over the extension
/// disk, with `τ1` extended by radial clamping. Tends to `τ1` as `x → 0` over `X`.
pub fn plane_potential_dirichlet(
    tau1: &PlaneData,
    region: &PlanarRegion,
    target: &HalfSpacePoint,
    sp: SingularityParams,
) -> Result<f64> {
    if tau1.is_zero() {
        return Ok(0.0);
    }
    let a = sp.alpha();
    if target.x == 0.0 {
        let ext = dirichlet_extension_disk(region);
        return Ok(if ext.contains(target.y, target.z) {
            extend_by_radial_clamping(tau1, region, target.y, target.z)
        } else {
            0.0
        });
    }
    let ext = dirichlet_extension_disk(region);
    let f = |y: f64, z: f64| extend_by_radial_clamping(tau1, region, y, z);
    let s = PlaneIntegrator::default().integrate(&ext, Some(&f), target, 1.5 - a);
    Ok((1.0 - 2.0 * a) / (2.0 * PI) * powf(target.x, 1.0 - 2.0 * a) * s)
}

/// Limit at `ε → 0` from samples at `ε = h, 2h, 4h`, eliminating the `ε` and
/// `ε²` terms.
pub fn extrapolate_limit(at_h: f64, at_2h: f64, at_4h: f64) -> f64 {
    (8.0 * at_h - 6.0 * at_2h + at_4h) / 3.0
}

/// Side of `Γ` from which a boundary limit is taken.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Interior,
    Exterior,
}

/// Offset unit for boundary limits relative to the local mesh width of the
/// Nyström grid. Small enough that the offsets `h, 2h, 4h` stay in the range
/// where the one-sided expansion in `ε` is dominated by its low-order terms.
pub const LIMIT_OFFSET_FRACTION: f64 = 0.125;

/// One-sided limit of `f` at `p` along the outward normal `n`: samples at
/// `p ∓ ε n` for `ε ∈ {h, 2h, 4h}` combined by [`extrapolate_limit`].
pub fn one_sided_limit<F>(f: F, p: &HalfSpacePoint, n: Vec3, h: f64, side: Side) -> Result<f64>
where
    F: Fn(&HalfSpacePoint) -> Result<f64>,
{
    let sign = match side {
        Side::Interior => -1.0,
        Side::Exterior => 1.0,
    };
    let at = |e: f64| -> Result<f64> { f(&offset_point(p, n, sign * e)?) };
    Ok(extrapolate_limit(at(h)?, at(2.0 * h)?, at(4.0 * h)?))
}

/// Surface grid resolving targets within a few `h` of the node at parameter
/// `focus`: composite Gauss–Legendre panels graded down to `h/8`.
pub fn near_field_grid(surf: &ParamSurface, focus: (f64, f64), h: f64) -> Result<QuadratureGrid> {
    crate::geometry::build_graded_surface_grid(surf, focus, 16, 8, h / 8.0)
}

/// Offset point `p + t·n`, rejected if it leaves the half-space.
pub fn offset_point(p: &HalfSpacePoint, n: Vec3, t: f64) -> Result<HalfSpacePoint> {
    HalfSpacePoint::try_from_vec(p.to_vec() + n * t)
}
