//! Exact solutions selectable by name as boundary data.

use std::fmt;

use singular_bie_core::bvp::ProblemKind;
use singular_bie_core::potentials::{PlaneData, SurfaceData};
use singular_bie_core::{HalfSpacePoint, Kernels};

/// A closed-form solution of the equation; its traces serve as boundary data.
#[derive(Clone, Debug, PartialEq)]
pub enum Builtin {
    Zero,
    One,
    /// `q1(·; p0)` with the pole outside the domain.
    Q1Exterior([f64; 3]),
    /// `q2(·; p0)` with the pole outside the domain, `x0 > 0`.
    Q2Exterior([f64; 3]),
    /// `x^(1-2α)`.
    XPower,
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::Zero => f.write_str("zero"),
            Builtin::One => f.write_str("one"),
            Builtin::Q1Exterior(p) => write!(f, "q1-exterior({},{},{})", p[0], p[1], p[2]),
            Builtin::Q2Exterior(p) => write!(f, "q2-exterior({},{},{})", p[0], p[1], p[2]),
            Builtin::XPower => f.write_str("x-power"),
        }
    }
}

impl Builtin {
    pub fn parse(s: &str) -> Result<Self, String> {
        let s = s.trim();
        match s {
            "zero" => return Ok(Builtin::Zero),
            "one" => return Ok(Builtin::One),
            "x-power" => return Ok(Builtin::XPower),
            _ => {}
        }
        let pole = |rest: &str| -> Result<[f64; 3], String> {
            let inner = rest
                .trim()
                .strip_prefix('(')
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(|| format!("expected `(x0,y0,z0)` after the name in `{s}`"))?;
            let v: Vec<f64> = inner
                .split(',')
                .map(|c| c.trim().parse::<f64>().map_err(|_| format!("bad coordinate `{}` in `{s}`", c.trim())))
                .collect::<Result<_, _>>()?;
            match v[..] {
                [x, y, z] if v.iter().all(|c| c.is_finite()) => Ok([x, y, z]),
                _ => Err(format!("expected three finite coordinates in `{s}`")),
            }
        };
        if let Some(rest) = s.strip_prefix("q1-exterior") {
            let p = pole(rest)?;
            if p[0] < 0.0 {
                return Err(format!("pole of `{s}` must have x0 >= 0"));
            }
            return Ok(Builtin::Q1Exterior(p));
        }
        if let Some(rest) = s.strip_prefix("q2-exterior") {
            let p = pole(rest)?;
            if !(p[0] > 0.0) {
                return Err(format!("pole of `{s}` must have x0 > 0"));
            }
            return Ok(Builtin::Q2Exterior(p));
        }
        Err(format!(
            "unknown builtin `{s}` (expected zero, one, x-power, q1-exterior(x0,y0,z0), q2-exterior(x0,y0,z0))"
        ))
    }

    /// The pole of the fundamental-solution builtins.
    pub fn pole(&self) -> Option<HalfSpacePoint> {
        match self {
            Builtin::Q1Exterior(p) | Builtin::Q2Exterior(p) => Some(HalfSpacePoint { x: p[0], y: p[1], z: p[2] }),
            _ => None,
        }
    }

    /// The solution itself.
    pub fn exact(&self, k: &Kernels) -> impl Fn(&HalfSpacePoint) -> f64 + Send + Sync + 'static {
        let k = k.clone();
        let this = self.clone();
        let e = 1.0 - 2.0 * k.alpha();
        move |p: &HalfSpacePoint| match &this {
            Builtin::Zero => 0.0,
            Builtin::One => 1.0,
            Builtin::XPower => p.x.powf(e),
            Builtin::Q1Exterior(_) => k.q1(p, &this.pole().unwrap()).unwrap_or(f64::NAN),
            Builtin::Q2Exterior(_) => k.q2(p, &this.pole().unwrap()).unwrap_or(f64::NAN),
        }
    }

    /// Trace on `Γ`.
    pub fn surface_data(&self, k: &Kernels) -> SurfaceData {
        match self {
            Builtin::Zero => SurfaceData::Zero,
            Builtin::One => SurfaceData::Constant(1.0),
            _ => SurfaceData::from_fn(self.exact(k)),
        }
    }

    /// Trace on `X` (Dirichlet) or weighted flux `lim x^(2α) u_x` on `X`
    /// (Holmgren).
    pub fn plane_data(&self, kind: ProblemKind, k: &Kernels) -> PlaneData {
        let al = k.alpha();
        let e = 1.0 - 2.0 * al;
        match (kind, self) {
            (_, Builtin::Zero) => PlaneData::Zero,
            (ProblemKind::Dirichlet, Builtin::One) => PlaneData::Constant(1.0),
            (ProblemKind::Holmgren, Builtin::One) => PlaneData::Zero,
            (ProblemKind::Dirichlet, Builtin::XPower) => PlaneData::Zero,
            (ProblemKind::Holmgren, Builtin::XPower) => PlaneData::Constant(e),
            (ProblemKind::Dirichlet, Builtin::Q1Exterior(p)) => {
                let p = *p;
                PlaneData::from_fn(move |y, z| {
                    let d2 = p[0] * p[0] + (y - p[1]).powi(2) + (z - p[2]).powi(2);
                    d2.powf(-0.5 - al) / std::f64::consts::TAU
                })
            }
            (ProblemKind::Holmgren, Builtin::Q1Exterior(_)) => PlaneData::Zero,
            (ProblemKind::Dirichlet, Builtin::Q2Exterior(_)) => PlaneData::Zero,
            (ProblemKind::Holmgren, Builtin::Q2Exterior(p)) => {
                let p = *p;
                PlaneData::from_fn(move |y, z| {
                    let d2 = p[0] * p[0] + (y - p[1]).powi(2) + (z - p[2]).powi(2);
                    e / std::f64::consts::TAU * p[0].powf(e) * d2.powf(al - 1.5)
                })
            }
        }
    }
}
