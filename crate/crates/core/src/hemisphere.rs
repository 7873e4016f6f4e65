//! Closed-form Green's functions and Poisson integrals on the half-ball
//! `{x > 0, |p| < a}`, used as reference solutions.
//!
//! The image of `p0` under inversion in the sphere is `p̄0 = a² p0 / R²` with
//! `R = |p0|`, and
//!
//! ```text
//! G01(p; p0) = q1(p, p0) - (a/R)^(1+2α) q1(p, p̄0)   (B_ν G01 = 0 on X)
//! G02(p; p0) = q2(p, p0) - (a/R)^(1+2α) q2(p, p̄0)   (G02 = 0 on X)
//! ```
//!
//! both vanish on the hemisphere. The solutions are
//!
//! ```text
//! Holmgren:  u(p0) = -∬_X ν1 G01(0, ·; p0) - ∬_Γ φ B_ν[G01]
//! Dirichlet: u(p0) =  ∬_X τ1 lim x^(2α) ∂_x G02(x, ·; p0) - ∬_Γ φ B_ν[G02]
//! ```

use alloc::format;

use crate::error::{Error, Result};
use crate::geometry::{make_hemisphere, HalfSpacePoint, ParamSurface, PlanarRegion, QuadratureGrid};
use crate::kernels::{Kernels, SingularityParams};
use crate::math::{acos, atan2, powf, sqrt, Vec3, PI, TAU};
use crate::potentials::{PlaneData, PlaneIntegrator, SurfaceData};
use crate::specfun::Hyp2F1;

/// The half-ball of radius `a` with its Green's functions for a fixed `α`.
#[derive(Clone, Debug)]
pub struct HalfBall {
    radius: f64,
    kernels: Kernels,
    surface: ParamSurface,
    region: PlanarRegion,
    /// F(3/2+α, α; 2α; ·)
    holmgren_closed: Hyp2F1,
    /// F(5/2-α, 1-α; 2-2α; ·)
    dirichlet_closed: Hyp2F1,
}

impl HalfBall {
    pub fn new(radius: f64, sp: SingularityParams) -> Result<Self> {
        let a = sp.alpha();
        Ok(HalfBall {
            radius,
            kernels: Kernels::new(sp)?,
            surface: make_hemisphere(radius)?,
            region: PlanarRegion::disk(radius)?,
            holmgren_closed: Hyp2F1::new(1.5 + a, a, 2.0 * a)?,
            dirichlet_closed: Hyp2F1::new(2.5 - a, 1.0 - a, 2.0 - 2.0 * a)?,
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn kernels(&self) -> &Kernels {
        &self.kernels
    }

    pub fn surface(&self) -> &ParamSurface {
        &self.surface
    }

    pub fn region(&self) -> &PlanarRegion {
        &self.region
    }

    /// Strictly inside: `x > 0` and `|p| < a`.
    pub fn contains(&self, p: &HalfSpacePoint) -> bool {
        p.x > 0.0 && p.to_vec().norm() < self.radius
    }

    fn check_pole(&self, p0: &HalfSpacePoint) -> Result<()> {
        if self.contains(p0) {
            Ok(())
        } else {
            Err(Error::OutOfDomain(p0.x, p0.y, p0.z))
        }
    }

    /// Inverse point `p̄0` and the image weight `(a/R)^(1+2α)`.
    pub fn image(&self, p0: &HalfSpacePoint) -> Result<(HalfSpacePoint, f64)> {
        let v = p0.to_vec();
        let r2 = v.dot(v);
        if !(r2 > 0.0) {
            return Err(Error::OutOfDomain(p0.x, p0.y, p0.z));
        }
        let a = self.radius;
        let img = HalfSpacePoint::try_from_vec(v * (a * a / r2))?;
        let w = powf(a / sqrt(r2), 1.0 + 2.0 * self.kernels.alpha());
        Ok((img, w))
    }

    pub fn green_g01(&self, p: &HalfSpacePoint, p0: &HalfSpacePoint) -> Result<f64> {
        self.check_pole(p0)?;
        let (img, w) = self.image(p0)?;
        Ok(self.kernels.q1(p, p0)? - w * self.kernels.q1(p, &img)?)
    }

    pub fn green_g02(&self, p: &HalfSpacePoint, p0: &HalfSpacePoint) -> Result<f64> {
        self.check_pole(p0)?;
        let (img, w) = self.image(p0)?;
        Ok(self.kernels.q2(p, p0)? - w * self.kernels.q2(p, &img)?)
    }

    /// Surface Poisson kernel `-B_ν[G01](ξ; p0)` of the Holmgren problem.
    pub fn holmgren_surface_kernel(&self, xi: &HalfSpacePoint, normal: Vec3, p0: &HalfSpacePoint) -> Result<f64> {
        self.check_pole(p0)?;
        let (img, w) = self.image(p0)?;
        let k = &self.kernels;
        Ok(-(k.conormal_q1(xi, normal, p0)? - w * k.conormal_q1(xi, normal, &img)?))
    }

    /// Surface Poisson kernel `-B_ν[G02](ξ; p0)` of the Dirichlet problem.
    pub fn dirichlet_surface_kernel(&self, xi: &HalfSpacePoint, normal: Vec3, p0: &HalfSpacePoint) -> Result<f64> {
        self.check_pole(p0)?;
        let (img, w) = self.image(p0)?;
        let k = &self.kernels;
        Ok(-(k.conormal_q2(xi, normal, p0)? - w * k.conormal_q2(xi, normal, &img)?))
    }

    /// Hypergeometric closed form of [`Self::holmgren_surface_kernel`] for `ξ`
    /// on the sphere:
    /// `(1+2α)/(2π) ξ^(2α) F(3/2+α, α; 2α; 1 - r1²/r²) (a² - R²) / (a r^(3+2α))`.
    pub fn holmgren_surface_kernel_closed(&self, xi: &HalfSpacePoint, p0: &HalfSpacePoint) -> Result<f64> {
        self.check_pole(p0)?;
        let al = self.kernels.alpha();
        let (r2, sigma, rr) = self.sphere_pair(xi, p0)?;
        let f = self.holmgren_closed.eval(sigma)?;
        let a = self.radius;
        Ok((1.0 + 2.0 * al) / (2.0 * PI) * powf(xi.x, 2.0 * al) * f * (a * a - rr) / (a * powf(r2, 1.5 + al)))
    }

    /// Hypergeometric closed form of [`Self::dirichlet_surface_kernel`] for `ξ`
    /// on the sphere:
    /// `(3-2α)/(2π) x0^(1-2α) ξ F(5/2-α, 1-α; 2-2α; 1 - r1²/r²) (a² - R²) / (a r^(5-2α))`.
    pub fn dirichlet_surface_kernel_closed(&self, xi: &HalfSpacePoint, p0: &HalfSpacePoint) -> Result<f64> {
        self.check_pole(p0)?;
        let al = self.kernels.alpha();
        let (r2, sigma, rr) = self.sphere_pair(xi, p0)?;
        let f = self.dirichlet_closed.eval(sigma)?;
        let a = self.radius;
        Ok((3.0 - 2.0 * al) / (2.0 * PI) * powf(p0.x, 1.0 - 2.0 * al) * xi.x * f * (a * a - rr)
            / (a * powf(r2, 2.5 - al)))
    }

    /// `(r², 1 - r1²/r², R²)` for a surface point and a pole.
    fn sphere_pair(&self, xi: &HalfSpacePoint, p0: &HalfSpacePoint) -> Result<(f64, f64, f64)> {
        let d = xi.to_vec() - p0.to_vec();
        let r2 = d.dot(d);
        if !(r2 > 0.0) {
            return Err(Error::Singularity(0.0));
        }
        let v = p0.to_vec();
        Ok((r2, -4.0 * xi.x * p0.x / r2, v.dot(v)))
    }

    /// Plane Poisson kernel of the Holmgren problem, `G01(0, y, z; p0)`.
    pub fn holmgren_plane_kernel(&self, y: f64, z: f64, p0: &HalfSpacePoint) -> Result<f64> {
        self.green_g01(&HalfSpacePoint { x: 0.0, y, z }, p0)
    }

    /// Plane Poisson kernel of the Dirichlet problem,
    /// `lim x^(2α) ∂_x G02 = (1-2α)/(2π) [x0^(1-2α) r^(2α-3) - (a/R)^(1+2α) x̄0^(1-2α) r̄^(2α-3)]`.
    pub fn dirichlet_plane_kernel(&self, y: f64, z: f64, p0: &HalfSpacePoint) -> Result<f64> {
        self.check_pole(p0)?;
        let (img, w) = self.image(p0)?;
        let al = self.kernels.alpha();
        let term = |p: &HalfSpacePoint| {
            let d2 = p.x * p.x + (p.y - y) * (p.y - y) + (p.z - z) * (p.z - z);
            powf(p.x, 1.0 - 2.0 * al) * powf(d2, al - 1.5)
        };
        Ok((1.0 - 2.0 * al) / (2.0 * PI) * (term(p0) - w * term(&img)))
    }

    /// Holmgren solution at `p0` from surface data `phi` and plane data `nu1`;
    /// the surface integral uses `grid`, which must be built on [`Self::surface`].
    pub fn poisson_holmgren(
        &self,
        grid: &QuadratureGrid,
        phi: &SurfaceData,
        nu1: &PlaneData,
        p0: &HalfSpacePoint,
    ) -> Result<f64> {
        self.check_pole(p0)?;
        let al = self.kernels.alpha();
        // u ≡ 1 is the solution for φ ≡ 1, ν1 ≡ 0.
        let mut u = self.surface_part(grid, phi, p0, 1.0, |xi, n| self.holmgren_surface_kernel(xi, n, p0))?;
        if !nu1.is_zero() {
            let f = |y: f64, z: f64| nu1.eval(y, z);
            u -= self.image_pair_integral(Some(&f), p0, 0.5 + al, 0.0)? / (2.0 * PI);
        }
        Ok(u)
    }

    /// Dirichlet solution at `p0` from surface data `phi` and plane data `tau1`.
    pub fn poisson_dirichlet(
        &self,
        grid: &QuadratureGrid,
        phi: &SurfaceData,
        tau1: &PlaneData,
        p0: &HalfSpacePoint,
    ) -> Result<f64> {
        self.check_pole(p0)?;
        let al = self.kernels.alpha();
        let e = 1.0 - 2.0 * al;
        let beta = 1.5 - al;
        // The surface and plane kernels together integrate to one.
        let plane_mass =
            if phi.is_zero() { 0.0 } else { e / (2.0 * PI) * self.image_pair_integral(None, p0, beta, e)? };
        let mut u =
            self.surface_part(grid, phi, p0, 1.0 - plane_mass, |xi, n| self.dirichlet_surface_kernel(xi, n, p0))?;
        if !tau1.is_zero() {
            let f = |y: f64, z: f64| tau1.eval(y, z);
            u += e / (2.0 * PI) * self.image_pair_integral(Some(&f), p0, beta, e)?;
        }
        Ok(u)
    }

    /// `x0^γ I(p0) - (a/R)^(1+2α) x̄0^γ I(p̄0)` with `I(p) = ∬_X f (x² + ρ²)^(-β)`.
    fn image_pair_integral(
        &self,
        f: Option<&dyn Fn(f64, f64) -> f64>,
        p0: &HalfSpacePoint,
        beta: f64,
        gamma: f64,
    ) -> Result<f64> {
        let (img, w) = self.image(p0)?;
        let integ = PlaneIntegrator::default();
        let direct = powf(p0.x, gamma) * integ.integrate(&self.region, f, p0, beta);
        let reflected = powf(img.x, gamma) * integ.integrate(&self.region, f, &img, beta);
        Ok(direct - w * reflected)
    }

    /// `∬_Γ φ P` for a surface Poisson kernel `P` of known total `mass`; the
    /// value of `φ` at the radial projection of `p0` is subtracted and
    /// restored exactly, which keeps the quadrature accurate near `Γ`.
    fn surface_part<K>(
        &self,
        grid: &QuadratureGrid,
        phi: &SurfaceData,
        p0: &HalfSpacePoint,
        mass: f64,
        kernel: K,
    ) -> Result<f64>
    where
        K: Fn(&HalfSpacePoint, Vec3) -> Result<f64>,
    {
        if phi.is_zero() {
            return Ok(0.0);
        }
        let v = p0.to_vec();
        let t = acos((v.x / v.norm()).clamp(-1.0, 1.0));
        let mut s = atan2(v.z, v.y);
        if s < 0.0 {
            s += TAU;
        }
        let phi0 = phi.eval(&self.surface, s, t);
        let values = phi.sample(&self.surface, grid);
        let mut acc = phi0 * mass;
        for (node, v) in grid.nodes().iter().zip(values.values()) {
            let d = v - phi0;
            if d != 0.0 {
                acc += node.weight * d * kernel(&node.point, node.normal)?;
            }
        }
        if !acc.is_finite() {
            return Err(Error::Domain(format!("surface Poisson integral at {p0:?} is not finite")));
        }
        Ok(acc)
    }
}
