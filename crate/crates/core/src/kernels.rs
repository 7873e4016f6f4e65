//! Fundamental solutions `q1`, `q2` and their conormal derivatives.
//!
//! With field point `p = (x, y, z)`, source point `s = (ξ, η, ζ)`,
//! `r² = |p - s|²` and `r1² = r² + 4xξ` (distance to the mirror image of `s`),
//!
//! ```text
//! q1 = (1/2π) r^(-2α-1) F(α+1/2, α; 2α; σ)
//! q2 = (1/2π) r^(2α-3) (xξ)^(1-2α) F(3/2-α, 1-α; 2-2α; σ),   σ = 1 - r1²/r² ≤ 0.
//! ```
//!
//! Both are evaluated in the equivalent forms with argument
//! `co = 1 - r²/r1² = 4xξ/r1² ∈ [0, 1)`:
//!
//! ```text
//! q1 = (1/2π) r^(-1) r1^(-2α)  F(α-1/2, α; 2α; co)
//! q2 = (1/2π) r^(-1) r1^(2α-2) (xξ)^(1-2α) F(1/2-α, 1-α; 2-2α; co)
//! ```
//!
//! The conormal derivative at a surface point `s` with unit normal `ν` is
//! `B_ν[q] = ξ^(2α) ν·∇_s q`. Its values are the double-layer kernels.

use crate::error::{Error, Result};
use crate::geometry::HalfSpacePoint;
use crate::math::{powf, sqrt, Vec3, PI};
use crate::specfun::Hyp2F1;

/// Ratio `r / r1` below which kernel evaluation is refused as singular.
pub const DIAGONAL_CUTOFF: f64 = 1e-12;

/// The coefficient `α` of the equation, with `0 < 2α < 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingularityParams {
    alpha: f64,
}

impl SingularityParams {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && 2.0 * alpha < 1.0) {
            return Err(Error::InvalidAlpha(2.0 * alpha));
        }
        Ok(SingularityParams { alpha })
    }

    #[inline]
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// Which fundamental solution: `Q1` has vanishing weighted normal derivative on
/// the plane `x = 0`, `Q2` vanishes there.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KernelKind {
    Q1,
    Q2,
}

/// Distances between a field point and a source point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairGeometry {
    pub r: f64,
    pub r1: f64,
    /// `1 - r1²/r² ≤ 0`.
    pub sigma: f64,
    /// `1 - r²/r1² ∈ [0, 1)`.
    pub co_sigma: f64,
    pub r_sq: f64,
    pub r1_sq: f64,
    /// `source - field`.
    pub d: Vec3,
}

impl PairGeometry {
    pub fn new(field: &HalfSpacePoint, source: &HalfSpacePoint) -> Result<Self> {
        if field.x < 0.0 || source.x < 0.0 {
            return Err(Error::Domain("kernel points must satisfy x >= 0".into()));
        }
        let d = source.to_vec() - field.to_vec();
        let r_sq = d.norm_sq();
        let cross = 4.0 * field.x * source.x;
        let r1_sq = r_sq + cross;
        if !(r_sq > DIAGONAL_CUTOFF * DIAGONAL_CUTOFF * r1_sq) {
            return Err(Error::Singularity(sqrt(r_sq)));
        }
        Ok(PairGeometry {
            r: sqrt(r_sq),
            r1: sqrt(r1_sq),
            sigma: -cross / r_sq,
            co_sigma: cross / r1_sq,
            r_sq,
            r1_sq,
            d,
        })
    }

    /// `r²/r1² = 1 - co_sigma`, without cancellation.
    #[inline]
    pub fn one_minus_co(&self) -> f64 {
        self.r_sq / self.r1_sq
    }
}

/// Kernel evaluator for a fixed `α`, holding every hypergeometric function the
/// kernels need with its connection coefficients precomputed.
#[derive(Clone, Debug)]
pub struct Kernels {
    sp: SingularityParams,
    /// F(α-1/2, α; 2α; co)
    q1_reg: Hyp2F1,
    /// F(α-3/2, α; 2α; co)
    k1_radial: Hyp2F1,
    /// F(α-1/2, 1+α; 1+2α; co)
    k1_normal: Hyp2F1,
    /// F(1/2-α, 1-α; 2-2α; co) and its derivative (scale, F(3/2-α, 2-α; 3-2α; co)).
    q2_reg: Hyp2F1,
    q2_reg_d: (f64, Hyp2F1),
    /// σ-form functions used only by the cross-check path.
    q1_sigma: Hyp2F1,
    q1_sigma_a: Hyp2F1,
    q1_sigma_b: Hyp2F1,
    q2_sigma: Hyp2F1,
    q2_sigma_d: (f64, Hyp2F1),
}

impl Kernels {
    pub fn new(sp: SingularityParams) -> Result<Self> {
        let a = sp.alpha;
        let q2_sigma = Hyp2F1::new(1.5 - a, 1.0 - a, 2.0 - 2.0 * a)?;
        let q2_reg = Hyp2F1::new(0.5 - a, 1.0 - a, 2.0 - 2.0 * a)?;
        Ok(Kernels {
            sp,
            q1_reg: Hyp2F1::new(a - 0.5, a, 2.0 * a)?,
            k1_radial: Hyp2F1::new(a - 1.5, a, 2.0 * a)?,
            k1_normal: Hyp2F1::new(a - 0.5, 1.0 + a, 1.0 + 2.0 * a)?,
            q2_reg_d: q2_reg.derivative()?,
            q2_reg,
            q1_sigma: Hyp2F1::new(a + 0.5, a, 2.0 * a)?,
            q1_sigma_a: Hyp2F1::new(a + 1.5, a, 2.0 * a)?,
            q1_sigma_b: Hyp2F1::new(a + 1.5, 1.0 + a, 1.0 + 2.0 * a)?,
            q2_sigma_d: q2_sigma.derivative()?,
            q2_sigma,
        })
    }

    #[inline]
    pub fn params(&self) -> SingularityParams {
        self.sp
    }

    #[inline]
    pub fn alpha(&self) -> f64 {
        self.sp.alpha
    }

    pub fn q(&self, kind: KernelKind, field: &HalfSpacePoint, source: &HalfSpacePoint) -> Result<f64> {
        match kind {
            KernelKind::Q1 => self.q1(field, source),
            KernelKind::Q2 => self.q2(field, source),
        }
    }

    pub fn q1(&self, field: &HalfSpacePoint, source: &HalfSpacePoint) -> Result<f64> {
        let g = PairGeometry::new(field, source)?;
        let a = self.sp.alpha;
        let f = self.q1_reg.eval_with_complement(g.co_sigma, g.one_minus_co())?;
        Ok(f / (2.0 * PI * g.r * powf(g.r1_sq, a)))
    }

    pub fn q2(&self, field: &HalfSpacePoint, source: &HalfSpacePoint) -> Result<f64> {
        let g = PairGeometry::new(field, source)?;
        let xs = field.x * source.x;
        if xs == 0.0 {
            return Ok(0.0);
        }
        let a = self.sp.alpha;
        let h = self.q2_reg.eval_with_complement(g.co_sigma, g.one_minus_co())?;
        Ok(powf(xs, 1.0 - 2.0 * a) * powf(g.r1_sq, a - 1.0) * h / (2.0 * PI * g.r))
    }

    /// Double-layer kernel `B_ν[q](surface_pt; field)`.
    pub fn conormal(
        &self,
        kind: KernelKind,
        surface_pt: &HalfSpacePoint,
        normal: Vec3,
        field: &HalfSpacePoint,
    ) -> Result<f64> {
        match kind {
            KernelKind::Q1 => self.conormal_q1(surface_pt, normal, field),
            KernelKind::Q2 => self.conormal_q2(surface_pt, normal, field),
        }
    }

    /// `B_ν[q1]` in the two-term form
    /// `-(1+2α)/(4π) r1^(-2α) r^(-1) F(α-3/2, α; 2α; co) B_ν[ln r²]
    ///  -(1+2α)/(2π) x ξ^(2α) r^(-1) r1^(-2α-2) F(α-1/2, 1+α; 1+2α; co) ν_x`.
    pub fn conormal_q1(&self, surface_pt: &HalfSpacePoint, normal: Vec3, field: &HalfSpacePoint) -> Result<f64> {
        let g = PairGeometry::new(field, surface_pt)?;
        let a = self.sp.alpha;
        let w = g.one_minus_co();
        let xi_w = powf(surface_pt.x, 2.0 * a);
        let b_ln = xi_w * 2.0 * g.d.dot(normal) / g.r_sq;
        let r1_m2a = powf(g.r1_sq, -a);
        let f_rad = self.k1_radial.eval_with_complement(g.co_sigma, w)?;
        let f_nrm = self.k1_normal.eval_with_complement(g.co_sigma, w)?;
        let c = (1.0 + 2.0 * a) / (2.0 * PI);
        Ok(-0.5 * c * r1_m2a / g.r * f_rad * b_ln - c * field.x * xi_w * r1_m2a / (g.r * g.r1_sq) * f_nrm * normal.x)
    }

    /// `B_ν[q2]`, from the chain rule applied to
    /// `q2 = C (xξ)^(1-2α) f(r², r1²)` with `f = A^(-1/2) B^(α-1) H(1 - A/B)`:
    /// since `∇_s r² = 2d` and `∇_s r1² = 2d + 4x x̂`,
    ///
    /// ```text
    /// B_ν[q2] = C x^(1-2α) [ (1-2α) f ν_x + ξ (2 d·ν (f_A + f_B) + 4x ν_x f_B) ].
    /// ```
    pub fn conormal_q2(&self, surface_pt: &HalfSpacePoint, normal: Vec3, field: &HalfSpacePoint) -> Result<f64> {
        let g = PairGeometry::new(field, surface_pt)?;
        let a = self.sp.alpha;
        let (x, xi) = (field.x, surface_pt.x);
        if x == 0.0 {
            return Ok(0.0);
        }
        let w = g.one_minus_co();
        let h = self.q2_reg.eval_with_complement(g.co_sigma, w)?;
        let hp = self.q2_reg_d.0 * self.q2_reg_d.1.eval_with_complement(g.co_sigma, w)?;
        let (aa, bb) = (g.r_sq, g.r1_sq);
        // f_A + f_B and f_B, each divided by f0 = A^(-1/2) B^(α-1).
        let sum_ab = -h / (2.0 * aa) + ((a - 1.0) * h - g.co_sigma * hp) / bb;
        let only_b = ((a - 1.0) * h + w * hp) / bb;
        let f0 = powf(bb, a - 1.0) / g.r;
        let bracket =
            (1.0 - 2.0 * a) * h * normal.x + xi * (2.0 * g.d.dot(normal) * sum_ab + 4.0 * x * normal.x * only_b);
        Ok(powf(x, 1.0 - 2.0 * a) * f0 * bracket / (2.0 * PI))
    }

    /// Conormal derivative taken at the field point: `x^(2α) n·∇_p q(p; s)`
    /// for `p = surface_pt_as_field`. Equal to [`Kernels::conormal`] with the
    /// two points exchanged, by the symmetry of `q`.
    pub fn conormal_of_field(
        &self,
        kind: KernelKind,
        surface_pt_as_field: &HalfSpacePoint,
        normal: Vec3,
        source: &HalfSpacePoint,
    ) -> Result<f64> {
        self.conormal(kind, surface_pt_as_field, normal, source)
    }

    /// `B_ν[q1]` assembled from the partial derivatives of the `σ`-form:
    /// `∂q1/∂ξ = c (x-ξ) r^(-2α-3) F(α+3/2, α; 2α; σ) - c x r^(-2α-3) F(α+3/2, 1+α; 1+2α; σ)`,
    /// `∂q1/∂η = c (y-η) r^(-2α-3) F(α+3/2, α; 2α; σ)` (same for `ζ`), `c = (1+2α)/(2π)`.
    pub fn conormal_q1_sigma_form(
        &self,
        surface_pt: &HalfSpacePoint,
        normal: Vec3,
        field: &HalfSpacePoint,
    ) -> Result<f64> {
        let g = PairGeometry::new(field, surface_pt)?;
        let a = self.sp.alpha;
        let c = (1.0 + 2.0 * a) / (2.0 * PI) * powf(g.r_sq, -a - 1.5);
        let fa = self.q1_sigma_a.eval(g.sigma)?;
        let fb = self.q1_sigma_b.eval(g.sigma)?;
        // field - source = -d
        let grad = Vec3::new(-g.d.x * fa - field.x * fb, -g.d.y * fa, -g.d.z * fa) * c;
        Ok(powf(surface_pt.x, 2.0 * a) * grad.dot(normal))
    }

    /// `q1` from the `σ`-form series (cross-check path).
    pub fn q1_sigma_form(&self, field: &HalfSpacePoint, source: &HalfSpacePoint) -> Result<f64> {
        let g = PairGeometry::new(field, source)?;
        let a = self.sp.alpha;
        Ok(powf(g.r_sq, -a - 0.5) * self.q1_sigma.eval(g.sigma)? / (2.0 * PI))
    }

    /// `q2` from the `σ`-form series (cross-check path).
    pub fn q2_sigma_form(&self, field: &HalfSpacePoint, source: &HalfSpacePoint) -> Result<f64> {
        let g = PairGeometry::new(field, source)?;
        let a = self.sp.alpha;
        let xs = field.x * source.x;
        if xs == 0.0 {
            return Ok(0.0);
        }
        Ok(powf(g.r_sq, a - 1.5) * powf(xs, 1.0 - 2.0 * a) * self.q2_sigma.eval(g.sigma)? / (2.0 * PI))
    }

    /// `B_ν[q2]` by differentiating the `σ`-form directly:
    /// with `P = F(3/2-α, 1-α; 2-2α; σ)` and `∇_s σ = -4x (x̂/r² - 2ξ d/r⁴)`.
    pub fn conormal_q2_sigma_form(
        &self,
        surface_pt: &HalfSpacePoint,
        normal: Vec3,
        field: &HalfSpacePoint,
    ) -> Result<f64> {
        let g = PairGeometry::new(field, surface_pt)?;
        let a = self.sp.alpha;
        let (x, xi) = (field.x, surface_pt.x);
        if x == 0.0 {
            return Ok(0.0);
        }
        let p = self.q2_sigma.eval(g.sigma)?;
        let pd = self.q2_sigma_d.0 * self.q2_sigma_d.1.eval(g.sigma)?;
        let aa = g.r_sq;
        let dn = g.d.dot(normal);
        let ra = powf(aa, a - 1.5);
        let bracket = (1.0 - 2.0 * a) * normal.x * ra * p
            + xi * ((2.0 * a - 3.0) * ra / aa * dn * p
                + ra * pd * (-4.0 * x) * (normal.x / aa - 2.0 * xi * dn / (aa * aa)));
        Ok(powf(x, 1.0 - 2.0 * a) * bracket / (2.0 * PI))
    }
}

/// `q1(field, source)`; builds a [`Kernels`] per call.
pub fn q1(field: &HalfSpacePoint, source: &HalfSpacePoint, sp: SingularityParams) -> Result<f64> {
    Kernels::new(sp)?.q1(field, source)
}

/// `q2(field, source)`; builds a [`Kernels`] per call.
pub fn q2(field: &HalfSpacePoint, source: &HalfSpacePoint, sp: SingularityParams) -> Result<f64> {
    Kernels::new(sp)?.q2(field, source)
}

pub fn conormal_q1(
    surface_pt: &HalfSpacePoint,
    normal: Vec3,
    field: &HalfSpacePoint,
    sp: SingularityParams,
) -> Result<f64> {
    Kernels::new(sp)?.conormal_q1(surface_pt, normal, field)
}

pub fn conormal_q2(
    surface_pt: &HalfSpacePoint,
    normal: Vec3,
    field: &HalfSpacePoint,
    sp: SingularityParams,
) -> Result<f64> {
    Kernels::new(sp)?.conormal_q2(surface_pt, normal, field)
}

pub fn conormal_of_field(
    kind: KernelKind,
    surface_pt_as_field: &HalfSpacePoint,
    normal: Vec3,
    source: &HalfSpacePoint,
    sp: SingularityParams,
) -> Result<f64> {
    Kernels::new(sp)?.conormal_of_field(kind, surface_pt_as_field, normal, source)
}
