//! Surfaces `Γ` in the half-space, planar regions `X` in the plane `x = 0`,
//! and the tensor Gauss–Legendre grids used to integrate over them.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{asin, atan2, cos, hypot, round, sin, sqrt, Vec3, PI, TAU};
use crate::quad::gauss_legendre_on;

/// A point of the closed half-space `x ≥ 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfSpacePoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl HalfSpacePoint {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite() && z.is_finite()) || x < 0.0 {
            return Err(Error::Domain(format!("({x}, {y}, {z}) is not in the closed half-space x >= 0")));
        }
        Ok(HalfSpacePoint { x, y, z })
    }

    pub fn try_from_vec(v: Vec3) -> Result<Self> {
        Self::new(v.x, v.y, v.z)
    }

    #[inline]
    pub fn to_vec(self) -> Vec3 {
        Vec3::new(self.x, self.y, self.z)
    }

    /// Same `y, z` with `x` replaced.
    pub fn with_x(self, x: f64) -> Result<Self> {
        Self::new(x, self.y, self.z)
    }
}

pub type SurfaceMap = Arc<dyn Fn(f64, f64) -> Vec3 + Send + Sync>;
pub type SurfacePartials = Arc<dyn Fn(f64, f64) -> (Vec3, Vec3) + Send + Sync>;

/// Which end of the `t` range is the edge curve `γ` (where `x = 0`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeSide {
    TMin,
    TMax,
}

/// Known closed forms, used for exact normals and by the half-ball oracles.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SurfaceShape {
    Hemisphere { radius: f64 },
    General,
}

/// A parametric surface over the box `[s0, s1] × [t0, t1]` that touches the
/// plane `x = 0` along one `t = const` line.
#[derive(Clone)]
pub struct ParamSurface {
    s_range: (f64, f64),
    t_range: (f64, f64),
    map: SurfaceMap,
    partials: Option<SurfacePartials>,
    edge: EdgeSide,
    shape: SurfaceShape,
    /// Declared, not enforced; see [`edge_normal_tilt`].
    pub meets_plane_orthogonally: bool,
}

impl core::fmt::Debug for ParamSurface {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("ParamSurface")
            .field("s_range", &self.s_range)
            .field("t_range", &self.t_range)
            .field("edge", &self.edge)
            .field("shape", &self.shape)
            .finish()
    }
}

/// Upper half-sphere of radius `a` about the origin, `x = a cos t`,
/// `y = a sin t cos s`, `z = a sin t sin s` on `[0, 2π] × [0, π/2]`.
pub fn make_hemisphere(a: f64) -> Result<ParamSurface> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::Domain(format!("hemisphere radius must be positive, got {a}")));
    }
    let map: SurfaceMap = Arc::new(move |s, t| {
        // sin(π/2 - t) rather than cos t puts the rim exactly on x = 0.
        let (st, ct) = (sin(t), sin(PI / 2.0 - t));
        Vec3::new(a * ct, a * st * cos(s), a * st * sin(s))
    });
    let partials: SurfacePartials = Arc::new(move |s, t| {
        let (st, ct, ss, cs) = (sin(t), cos(t), sin(s), cos(s));
        (Vec3::new(0.0, -a * st * ss, a * st * cs), Vec3::new(-a * st, a * ct * cs, a * ct * ss))
    });
    Ok(ParamSurface {
        s_range: (0.0, TAU),
        t_range: (0.0, PI / 2.0),
        map,
        partials: Some(partials),
        edge: EdgeSide::TMax,
        shape: SurfaceShape::Hemisphere { radius: a },
        meets_plane_orthogonally: true,
    })
}

impl ParamSurface {
    /// A user surface given by a closure. Partial derivatives are taken by
    /// central differences when `partials` is `None`.
    pub fn from_fn(
        s_range: (f64, f64),
        t_range: (f64, f64),
        edge: EdgeSide,
        map: SurfaceMap,
        partials: Option<SurfacePartials>,
    ) -> Result<Self> {
        if !(s_range.0 < s_range.1 && t_range.0 < t_range.1) {
            return Err(Error::Domain("parameter box must have positive extent".into()));
        }
        let surf = ParamSurface {
            s_range,
            t_range,
            map,
            partials,
            edge,
            shape: SurfaceShape::General,
            meets_plane_orthogonally: true,
        };
        surf.validate()?;
        Ok(surf)
    }

    /// A surface tabulated on an `(s, t)` lattice and interpolated bilinearly.
    pub fn from_table(table: SurfaceTable) -> Result<Self> {
        let edge = table.edge_side()?;
        let s_range = (table.s[0], *table.s.last().unwrap());
        let t_range = (table.t[0], *table.t.last().unwrap());
        let table = Arc::new(table);
        let map: SurfaceMap = Arc::new(move |s, t| table.interpolate(s, t));
        Self::from_fn(s_range, t_range, edge, map, None)
    }

    fn validate(&self) -> Result<()> {
        let n = 12;
        for i in 0..=n {
            for j in 0..=n {
                let s = self.s_range.0 + (self.s_range.1 - self.s_range.0) * i as f64 / n as f64;
                let t = self.t_range.0 + (self.t_range.1 - self.t_range.0) * j as f64 / n as f64;
                let p = self.point(s, t);
                if !p.is_finite() || p.x < -1e-9 {
                    return Err(Error::Domain(format!(
                        "surface leaves the half-space at (s, t) = ({s}, {t}): x = {}",
                        p.x
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn s_range(&self) -> (f64, f64) {
        self.s_range
    }
    pub fn t_range(&self) -> (f64, f64) {
        self.t_range
    }
    pub fn edge(&self) -> EdgeSide {
        self.edge
    }
    pub fn shape(&self) -> SurfaceShape {
        self.shape
    }

    /// The `t` value of the edge curve.
    pub fn edge_t(&self) -> f64 {
        match self.edge {
            EdgeSide::TMin => self.t_range.0,
            EdgeSide::TMax => self.t_range.1,
        }
    }

    pub fn point(&self, s: f64, t: f64) -> Vec3 {
        (self.map)(s, t)
    }

    /// `(∂p/∂s, ∂p/∂t)`.
    pub fn partials(&self, s: f64, t: f64) -> (Vec3, Vec3) {
        if let Some(p) = &self.partials {
            return p(s, t);
        }
        let hs = 1e-6 * (self.s_range.1 - self.s_range.0);
        let ht = 1e-6 * (self.t_range.1 - self.t_range.0);
        let (s_lo, s_hi) = ((s - hs).max(self.s_range.0), (s + hs).min(self.s_range.1));
        let (t_lo, t_hi) = ((t - ht).max(self.t_range.0), (t + ht).min(self.t_range.1));
        let ps = (self.point(s_hi, t) - self.point(s_lo, t)) / (s_hi - s_lo);
        let pt = (self.point(s, t_hi) - self.point(s, t_lo)) / (t_hi - t_lo);
        (ps, pt)
    }

    /// Point of the edge curve `γ` at parameter `s`.
    pub fn edge_point(&self, s: f64) -> Vec3 {
        self.point(s, self.edge_t())
    }
}

/// Surface points on a rectangular `(s, t)` lattice, `points[i * t.len() + j]`
/// at `(s[i], t[j])`.
#[derive(Clone, Debug)]
pub struct SurfaceTable {
    pub s: Vec<f64>,
    pub t: Vec<f64>,
    pub points: Vec<Vec3>,
}

impl SurfaceTable {
    pub fn new(s: Vec<f64>, t: Vec<f64>, points: Vec<Vec3>) -> Result<Self> {
        if s.len() < 2 || t.len() < 2 {
            return Err(Error::Domain("surface table needs at least 2 values per parameter".into()));
        }
        if points.len() != s.len() * t.len() {
            return Err(Error::Dimension { expected: s.len() * t.len(), got: points.len() });
        }
        if !s.windows(2).all(|w| w[0] < w[1]) || !t.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Domain("surface table parameters must be strictly increasing".into()));
        }
        Ok(SurfaceTable { s, t, points })
    }

    fn edge_side(&self) -> Result<EdgeSide> {
        let nt = self.t.len();
        let row_max = |j: usize| (0..self.s.len()).map(|i| self.points[i * nt + j].x.abs()).fold(0.0, f64::max);
        let scale = self.points.iter().map(|p| p.norm()).fold(0.0, f64::max).max(1e-300);
        if row_max(nt - 1) <= 1e-9 * scale {
            Ok(EdgeSide::TMax)
        } else if row_max(0) <= 1e-9 * scale {
            Ok(EdgeSide::TMin)
        } else {
            Err(Error::Domain("no t = const row of the surface table lies in the plane x = 0".into()))
        }
    }

    fn interpolate(&self, s: f64, t: f64) -> Vec3 {
        let (i, u) = bracket(&self.s, s);
        let (j, v) = bracket(&self.t, t);
        let nt = self.t.len();
        let p00 = self.points[i * nt + j];
        let p10 = self.points[(i + 1) * nt + j];
        let p01 = self.points[i * nt + j + 1];
        let p11 = self.points[(i + 1) * nt + j + 1];
        p00 * ((1.0 - u) * (1.0 - v)) + p10 * (u * (1.0 - v)) + p01 * ((1.0 - u) * v) + p11 * (u * v)
    }
}

/// Cell index and local coordinate in `[0, 1]` of `x` in the sorted `knots`,
/// clamped to the end cells.
pub(crate) fn bracket(knots: &[f64], x: f64) -> (usize, f64) {
    let n = knots.len();
    let i = match knots.iter().position(|&k| k > x) {
        Some(0) => 0,
        Some(p) => p - 1,
        None => n - 2,
    }
    .min(n - 2);
    let u = ((x - knots[i]) / (knots[i + 1] - knots[i])).clamp(0.0, 1.0);
    (i, u)
}

/// The planar part `X` of the boundary, in `(y, z)` coordinates of the plane `x = 0`.
#[derive(Clone, Debug, PartialEq)]
pub enum PlanarRegion {
    Disk {
        center: (f64, f64),
        radius: f64,
    },
    /// A simple polygon, star-shaped with respect to its vertex centroid.
    Polygon {
        vertices: Vec<(f64, f64)>,
    },
}

impl PlanarRegion {
    pub fn disk(radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Domain(format!("disk radius must be positive, got {radius}")));
        }
        Ok(PlanarRegion::Disk { center: (0.0, 0.0), radius })
    }

    /// The region bounded by the edge curve of `surf`, sampled at `n` points
    /// (exact disk for a hemisphere).
    pub fn from_surface_edge(surf: &ParamSurface, n: usize) -> Result<Self> {
        if let SurfaceShape::Hemisphere { radius } = surf.shape() {
            return Self::disk(radius);
        }
        let (s0, s1) = surf.s_range();
        let vertices: Vec<(f64, f64)> = (0..n)
            .map(|k| {
                let p = surf.edge_point(s0 + (s1 - s0) * k as f64 / n as f64);
                (p.y, p.z)
            })
            .collect();
        let region = PlanarRegion::Polygon { vertices };
        if region.area() <= 0.0 {
            return Err(Error::Domain("edge curve does not enclose a region".into()));
        }
        Ok(region)
    }

    pub fn centroid(&self) -> (f64, f64) {
        match self {
            PlanarRegion::Disk { center, .. } => *center,
            PlanarRegion::Polygon { vertices } => {
                let n = vertices.len() as f64;
                let (sy, sz) = vertices.iter().fold((0.0, 0.0), |acc, v| (acc.0 + v.0, acc.1 + v.1));
                (sy / n, sz / n)
            }
        }
    }

    pub fn area(&self) -> f64 {
        match self {
            PlanarRegion::Disk { radius, .. } => PI * radius * radius,
            PlanarRegion::Polygon { vertices } => {
                let n = vertices.len();
                let twice: f64 = (0..n)
                    .map(|i| {
                        let (a, b) = (vertices[i], vertices[(i + 1) % n]);
                        a.0 * b.1 - b.0 * a.1
                    })
                    .sum();
                (0.5 * twice).abs()
            }
        }
    }

    /// Largest distance from the centroid to the boundary.
    pub fn shadow_radius(&self) -> f64 {
        match self {
            PlanarRegion::Disk { radius, .. } => *radius,
            PlanarRegion::Polygon { vertices } => {
                let c = self.centroid();
                vertices.iter().map(|v| hypot(v.0 - c.0, v.1 - c.1)).fold(0.0, f64::max)
            }
        }
    }

    pub fn contains(&self, y: f64, z: f64) -> bool {
        match self {
            PlanarRegion::Disk { center, radius } => {
                let (dy, dz) = (y - center.0, z - center.1);
                dy * dy + dz * dz < radius * radius
            }
            PlanarRegion::Polygon { vertices } => {
                let n = vertices.len();
                let mut inside = false;
                for i in 0..n {
                    let (a, b) = (vertices[i], vertices[(i + 1) % n]);
                    if (a.1 > z) != (b.1 > z) {
                        let yc = a.0 + (z - a.1) * (b.0 - a.0) / (b.1 - a.1);
                        if y < yc {
                            inside = !inside;
                        }
                    }
                }
                inside
            }
        }
    }

    /// Parameter intervals `[ρ0, ρ1]`, `ρ ≥ 0`, where `origin + ρ·(cos φ, sin φ)`
    /// lies in the region.
    pub fn ray_intervals(&self, origin: (f64, f64), phi: f64, out: &mut Vec<(f64, f64)>) {
        out.clear();
        let (dy, dz) = (cos(phi), sin(phi));
        match self {
            PlanarRegion::Disk { center, radius } => {
                let (oy, oz) = (origin.0 - center.0, origin.1 - center.1);
                let b = oy * dy + oz * dz;
                let c = oy * oy + oz * oz - radius * radius;
                let disc = b * b - c;
                if disc <= 0.0 {
                    return;
                }
                let sq = sqrt(disc);
                // Stable roots of ρ² + 2bρ + c = 0.
                let q = -b - b.signum() * sq;
                let (mut r0, mut r1) = if q != 0.0 { (q, c / q) } else { (-sq, sq) };
                if r0 > r1 {
                    core::mem::swap(&mut r0, &mut r1);
                }
                if r1 > 0.0 {
                    out.push((r0.max(0.0), r1));
                }
            }
            PlanarRegion::Polygon { vertices } => {
                let n = vertices.len();
                let mut hits: Vec<f64> = Vec::new();
                for i in 0..n {
                    let (a, b) = (vertices[i], vertices[(i + 1) % n]);
                    let (ey, ez) = (b.0 - a.0, b.1 - a.1);
                    let den = dy * ez - dz * ey;
                    if den == 0.0 {
                        continue;
                    }
                    let (wy, wz) = (a.0 - origin.0, a.1 - origin.1);
                    let rho = (wy * ez - wz * ey) / den;
                    let u = (wy * dz - wz * dy) / den;
                    if rho > 0.0 && (0.0..1.0).contains(&u) {
                        hits.push(rho);
                    }
                }
                hits.sort_by(|a, b| a.total_cmp(b));
                let mut start = if self.contains(origin.0, origin.1) { Some(0.0) } else { None };
                for h in hits {
                    match start {
                        Some(s0) => {
                            out.push((s0, h));
                            start = None;
                        }
                        None => start = Some(h),
                    }
                }
            }
        }
    }

    /// Directions from `origin` that bound the rays meeting the region, when
    /// `origin` lies outside it: the tangent directions of a disk, the
    /// extreme vertex directions of a polygon. Empty when `origin` is inside.
    pub fn angular_span(&self, origin: (f64, f64)) -> Option<(f64, f64)> {
        match self {
            PlanarRegion::Disk { center, radius } => {
                let (dy, dz) = (center.0 - origin.0, center.1 - origin.1);
                let d = hypot(dy, dz);
                if d < *radius {
                    return None;
                }
                let half = asin((radius / d).min(1.0));
                let mid = atan2(dz, dy);
                Some((mid - half, mid + half))
            }
            PlanarRegion::Polygon { vertices } => {
                if self.contains(origin.0, origin.1) {
                    return None;
                }
                let c = self.centroid();
                let mid = atan2(c.1 - origin.1, c.0 - origin.0);
                let (mut lo, mut hi) = (0.0f64, 0.0f64);
                for v in vertices {
                    let mut d = atan2(v.1 - origin.1, v.0 - origin.0) - mid;
                    d -= TAU * round(d / TAU);
                    lo = lo.min(d);
                    hi = hi.max(d);
                }
                Some((mid + lo, mid + hi))
            }
        }
    }

    /// Distance from the centroid to the boundary along direction `φ`.
    pub fn radial_extent(&self, phi: f64) -> f64 {
        let mut iv = Vec::new();
        self.ray_intervals(self.centroid(), phi, &mut iv);
        iv.first().map(|r| r.1).unwrap_or(0.0)
    }
}

/// Node of a quadrature grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridNode {
    /// `(s, t)` for surface grids, `(r, φ)` about the region centroid for planar grids.
    pub param: (f64, f64),
    pub point: HalfSpacePoint,
    /// Unit outward normal of the domain (`-x̂` on planar grids).
    pub normal: Vec3,
    /// Quadrature weight including the area element.
    pub weight: f64,
    /// Local node spacing, `max(|p_s| Δs, |p_t| Δt)`.
    pub mesh_width: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridLayout {
    /// `ns × nt` nodes, `t` varying fastest.
    Surface { ns: usize, nt: usize },
    /// `nr × nphi` nodes, `r` varying fastest.
    Planar { nr: usize, nphi: usize },
}

#[derive(Clone, Debug)]
pub struct QuadratureGrid {
    nodes: Vec<GridNode>,
    layout: GridLayout,
}

impl QuadratureGrid {
    pub fn nodes(&self) -> &[GridNode] {
        &self.nodes
    }
    pub fn len(&self) -> usize {
        self.nodes.len()
    }
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
    pub fn layout(&self) -> GridLayout {
        self.layout
    }
    pub fn total_weight(&self) -> f64 {
        self.nodes.iter().map(|n| n.weight).sum()
    }
    /// Quadrature of `f` over the grid.
    pub fn integrate<F: Fn(&GridNode) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().map(|n| n.weight * f(n)).sum()
    }
    /// Index of the node nearest to `p` and its distance.
    pub fn nearest(&self, p: Vec3) -> (usize, f64) {
        let mut best = (0, f64::INFINITY);
        for (i, n) in self.nodes.iter().enumerate() {
            let d = (n.point.to_vec() - p).norm_sq();
            if d < best.1 {
                best = (i, d);
            }
        }
        (best.0, sqrt(best.1))
    }
}

/// Tensor Gauss–Legendre grid on a surface with outward normals.
///
/// Normals are oriented so that the enclosed volume computed from them,
/// `(1/3)∑ w p·n`, is positive; the planar part contributes nothing to it.
pub fn build_surface_grid(surf: &ParamSurface, ns: usize, nt: usize) -> Result<QuadratureGrid> {
    if ns < 4 || nt < 4 {
        return Err(Error::Domain(format!("surface grid needs Ns, Nt >= 4, got {ns} x {nt}")));
    }
    let s_rule = gauss_legendre_on(ns, surf.s_range.0, surf.s_range.1);
    let t_rule = gauss_legendre_on(nt, surf.t_range.0, surf.t_range.1);
    tensor_grid(surf, &s_rule, &t_rule)
}

/// Composite Gauss–Legendre grid whose panels shrink geometrically toward the
/// parameter point `focus`, down to `min_width`. Used to integrate kernels
/// that are nearly singular at a point close to `Γ`.
pub fn build_graded_surface_grid(
    surf: &ParamSurface,
    focus: (f64, f64),
    base_panels: usize,
    order: usize,
    min_width: f64,
) -> Result<QuadratureGrid> {
    if base_panels < 1 || order < 2 || !(min_width > 0.0) {
        return Err(Error::Domain(format!(
            "graded grid needs panels >= 1, order >= 2, min_width > 0; got {base_panels}, {order}, {min_width}"
        )));
    }
    let s_rule = graded_rule(surf.s_range, focus.0, base_panels, order, min_width);
    let t_rule = graded_rule(surf.t_range, focus.1, base_panels, order, min_width);
    tensor_grid(surf, &s_rule, &t_rule)
}

fn graded_rule(range: (f64, f64), focus: f64, panels: usize, order: usize, min_width: f64) -> (Vec<f64>, Vec<f64>) {
    let (lo, hi) = range;
    let base = (hi - lo) / panels as f64;
    let mut breaks: Vec<f64> =
        (0..=panels).map(|k| lo + base * k as f64).filter(|b| (b - focus).abs() >= base).collect();
    let mut d = base;
    while d >= min_width {
        breaks.push(focus - d);
        breaks.push(focus + d);
        d *= 0.5;
    }
    breaks.push(focus);
    breaks.push(lo);
    breaks.push(hi);
    breaks.retain(|b| *b >= lo && *b <= hi);
    breaks.sort_by(|a, b| a.total_cmp(b));
    breaks.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * (hi - lo));
    let (mut x, mut w) = (Vec::new(), Vec::new());
    for pair in breaks.windows(2) {
        let (px, pw) = gauss_legendre_on(order, pair[0], pair[1]);
        x.extend(px);
        w.extend(pw);
    }
    (x, w)
}

fn tensor_grid(
    surf: &ParamSurface,
    s_rule: &(Vec<f64>, Vec<f64>),
    t_rule: &(Vec<f64>, Vec<f64>),
) -> Result<QuadratureGrid> {
    let ((s_nodes, s_w), (t_nodes, t_w)) = (s_rule, t_rule);
    let (ns, nt) = (s_nodes.len(), t_nodes.len());
    let scale = {
        let (a, b) = (surf.point(s_nodes[0], t_nodes[0]), surf.point(s_nodes[ns / 2], t_nodes[nt / 2]));
        (a.norm() + b.norm() + (a - b).norm()).max(1e-300)
    };
    let mut nodes = Vec::with_capacity(ns * nt);
    let mut volume = 0.0;
    for i in 0..ns {
        for j in 0..nt {
            let (s, t) = (s_nodes[i], t_nodes[j]);
            let p = surf.point(s, t);
            let (ps, pt) = surf.partials(s, t);
            let c = ps.cross(pt);
            let area = c.norm();
            if !(area > 1e-14 * scale * scale) {
                return Err(Error::DegenerateSurface { s, t, area });
            }
            if p.x <= 0.0 {
                return Err(Error::Domain(format!("grid node at (s, t) = ({s}, {t}) has x = {}", p.x)));
            }
            let normal = match surf.shape {
                SurfaceShape::Hemisphere { .. } => p.normalized(),
                SurfaceShape::General => c / area,
            };
            let weight = s_w[i] * t_w[j] * area;
            volume += weight * p.dot(normal);
            nodes.push(GridNode {
                param: (s, t),
                point: HalfSpacePoint::try_from_vec(p)?,
                normal,
                weight,
                mesh_width: (ps.norm() * s_w[i]).max(pt.norm() * t_w[j]),
            });
        }
    }
    if volume < 0.0 {
        for n in &mut nodes {
            n.normal = -n.normal;
        }
    }
    Ok(QuadratureGrid { nodes, layout: GridLayout::Surface { ns, nt } })
}

/// Polar Gauss–Legendre grid on the disk `y² + z² < a²` of the plane `x = 0`.
pub fn build_disk_grid(a: f64, nr: usize, nphi: usize) -> Result<QuadratureGrid> {
    build_region_grid(&PlanarRegion::disk(a)?, nr, nphi)
}

/// Polar Gauss–Legendre grid about the centroid of `region`. For polygons the
/// angular rule is split at the vertex directions.
pub fn build_region_grid(region: &PlanarRegion, nr: usize, nphi: usize) -> Result<QuadratureGrid> {
    if nr < 4 || nphi < 4 {
        return Err(Error::Domain(format!("planar grid needs Nr, Nphi >= 4, got {nr} x {nphi}")));
    }
    let c = region.centroid();
    let mut panels: Vec<f64> = match region {
        PlanarRegion::Disk { .. } => alloc::vec![0.0, TAU],
        PlanarRegion::Polygon { vertices } => {
            let mut a: Vec<f64> = vertices
                .iter()
                .map(|v| {
                    let t = atan2(v.1 - c.1, v.0 - c.0);
                    if t < 0.0 {
                        t + TAU
                    } else {
                        t
                    }
                })
                .collect();
            a.push(0.0);
            a.push(TAU);
            a.sort_by(|x, y| x.total_cmp(y));
            a.dedup_by(|x, y| (*x - *y).abs() < 1e-14);
            a
        }
    };
    if panels.len() < 2 {
        panels = alloc::vec![0.0, TAU];
    }
    let per_panel = if panels.len() == 2 { nphi } else { (nphi / (panels.len() - 1)).max(4) };
    let (u_nodes, u_w) = gauss_legendre_on(nr, 0.0, 1.0);
    let mut nodes = Vec::new();
    let mut total_phi = 0;
    for win in panels.windows(2) {
        let (phi_nodes, phi_w) = gauss_legendre_on(per_panel, win[0], win[1]);
        total_phi += per_panel;
        for (phi, wphi) in phi_nodes.iter().zip(&phi_w) {
            let rmax = region.radial_extent(*phi);
            let (dy, dz) = (cos(*phi), sin(*phi));
            for (k, (u, wu)) in u_nodes.iter().zip(&u_w).enumerate() {
                let r = u * rmax;
                let dr = if k + 1 < nr { u_nodes[k + 1] - u } else { 1.0 - u } * rmax;
                nodes.push(GridNode {
                    param: (r, *phi),
                    point: HalfSpacePoint { x: 0.0, y: c.0 + r * dy, z: c.1 + r * dz },
                    normal: Vec3::new(-1.0, 0.0, 0.0),
                    weight: wu * wphi * r * rmax,
                    mesh_width: dr.max(r * wphi),
                });
            }
        }
    }
    Ok(QuadratureGrid { nodes, layout: GridLayout::Planar { nr, nphi: total_phi } })
}

/// Largest `|n_x|` over the grid row nearest the edge curve. A surface meeting
/// the plane at a right angle has this close to zero.
pub fn edge_normal_tilt(surf: &ParamSurface, grid: &QuadratureGrid) -> f64 {
    let GridLayout::Surface { ns, nt } = grid.layout() else {
        return 0.0;
    };
    let j = match surf.edge() {
        EdgeSide::TMax => nt - 1,
        EdgeSide::TMin => 0,
    };
    (0..ns).map(|i| grid.nodes()[i * nt + j].normal.x.abs()).fold(0.0, f64::max)
}
