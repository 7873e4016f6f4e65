//! Real Gamma, digamma, Pochhammer symbol and Gauss hypergeometric `2F1`.
//!
//! `2F1(a, b; c; z)` is evaluated for real parameters on `z ∈ (-∞, 1]`:
//!
//! * `z ∈ [0, 0.5]`: the defining power series;
//! * `z ∈ (0.5, 1)`: the `z → 1 - z` connection formula, with logarithmic
//!   variants when `c - a - b` is an integer and a three-point interpolation
//!   in `c` when it is within `1e-4` of one;
//! * `z < 0`: the Pfaff transformation `(1-z)^(-b) F(c-a, b; c; z/(z-1))`;
//! * `z = 1`: Gauss's summation theorem.
//!
//! Series with a nonpositive-integer numerator parameter are polynomials and
//! are summed directly for every `z`.

use alloc::boxed::Box;

use crate::error::{Error, Result};
use crate::math::{floor, ln, powf, round, sqrt, tan, PI};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

const SERIES_MAX_TERMS: usize = 10_000;
const SERIES_RTOL: f64 = 1e-16;
const Z_SWITCH: f64 = 0.5;
/// Half-width of the band around integer `c - a - b` handled by interpolation.
const NEAR_INTEGER_BAND: f64 = 1e-4;
/// Interpolation step in `c` for the near-integer band.
const NEAR_INTEGER_STEP: f64 = 1e-3;
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

fn is_nonpositive_integer(t: f64) -> bool {
    t <= 0.0 && t == floor(t)
}

/// Γ(t) on `[0.5, ∞)` by the Lanczos approximation.
fn lanczos_gamma(t: f64) -> f64 {
    let x = t - 1.0;
    let mut acc = LANCZOS[0];
    for (k, &p) in LANCZOS.iter().enumerate().skip(1) {
        acc += p / (x + k as f64);
    }
    let base = x + LANCZOS_G + 0.5;
    // Split the power so that t^(t-1/2) e^(-t) does not overflow early.
    let half = powf(base, 0.5 * (x + 0.5));
    sqrt(2.0 * PI) * half * (half * crate::math::exp(-base)) * acc
}

/// Gamma function for real `t`.
///
/// Arguments below `0.5` are shifted up with `Γ(t) = Γ(t+1)/t`.
pub fn gamma_fn(t: f64) -> Result<f64> {
    if t.is_nan() || is_nonpositive_integer(t) {
        return Err(Error::GammaPole(t));
    }
    if t == floor(t) && t <= 171.0 {
        // Integer arguments: (t-1)! by exact products (exact through 22!).
        return Ok((2..t as u32).fold(1.0, |acc, k| acc * k as f64));
    }
    if t >= 0.5 {
        return Ok(lanczos_gamma(t));
    }
    let mut denom = 1.0;
    let mut s = t;
    while s < 0.5 {
        denom *= s;
        s += 1.0;
    }
    Ok(lanczos_gamma(s) / denom)
}

/// `1/Γ(t)`, equal to zero at the poles of Γ.
pub fn rgamma(t: f64) -> f64 {
    match gamma_fn(t) {
        Ok(g) => 1.0 / g,
        Err(_) => 0.0,
    }
}

/// Digamma ψ(t) = Γ'(t)/Γ(t).
pub fn digamma(t: f64) -> Result<f64> {
    if t.is_nan() || is_nonpositive_integer(t) {
        return Err(Error::GammaPole(t));
    }
    if t <= 0.0 {
        return Ok(digamma(1.0 - t)? - PI / tan(PI * t));
    }
    let mut x = t;
    let mut acc = 0.0;
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let r = 1.0 / (x * x);
    let tail = r
        * (1.0 / 12.0
            - r * (1.0 / 120.0
                - r * (1.0 / 252.0 - r * (1.0 / 240.0 - r * (1.0 / 132.0 - r * (691.0 / 32_760.0 - r / 12.0))))));
    Ok(acc + ln(x) - 0.5 / x - tail)
}

/// Rising factorial `(t)_n = t (t+1) ... (t+n-1)`, with `(t)_0 = 1`.
pub fn pochhammer(t: f64, n: u32) -> f64 {
    (0..n).fold(1.0, |acc, k| acc * (t + k as f64))
}

/// Sum of the hypergeometric power series at `z`.
fn power_series(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    let mut sum = 1.0;
    let mut term = 1.0;
    let mut small = 0;
    for k in 0..SERIES_MAX_TERMS {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
        sum += term;
        if term == 0.0 {
            return Ok(sum);
        }
        if term.abs() < SERIES_RTOL * sum.abs() {
            small += 1;
            if small >= 3 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::NoConvergence(SERIES_MAX_TERMS))
}

/// How a parameter triple is continued to `z ∈ (0.5, 1)`.
#[derive(Clone, Debug)]
enum Continuation {
    /// A numerator parameter is a nonpositive integer: the series is a polynomial.
    Polynomial,
    /// `c - a - b` not an integer: two-term connection formula with these weights.
    Connection { w1: f64, w2: f64 },
    /// `c - a - b = m ≥ 0`.
    LogNonnegative { m: u32, w1: f64, w2: f64 },
    /// `c - a - b = -m`, `m ≥ 1`.
    LogNegative { m: u32, w1: f64, w2: f64 },
    /// `c - a - b` within the near-integer band: quadratic interpolation in `c`
    /// through `c0 - h`, `c0` (exactly integer), `c0 + h`.
    NearInteger { nodes: Box<[Plan; 3]>, offset: f64, step: f64 },
}

#[derive(Clone, Debug)]
struct Plan {
    a: f64,
    b: f64,
    c: f64,
    cont: Continuation,
}

impl Plan {
    fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if is_nonpositive_integer(c) {
            return Err(Error::HypergeomParameter(c));
        }
        let cont = if is_nonpositive_integer(a) || is_nonpositive_integer(b) {
            Continuation::Polynomial
        } else {
            let s = c - a - b;
            let m = round(s);
            let off = s - m;
            if off == 0.0 {
                Self::log_continuation(a, b, c, m)?
            } else if off.abs() <= NEAR_INTEGER_BAND {
                let c0 = c - off;
                let h = NEAR_INTEGER_STEP;
                let node = |cc: f64, cont| Plan { a, b, c: cc, cont };
                let nodes = Box::new([
                    node(c0 - h, Self::connection(a, b, c0 - h)?),
                    node(c0, Self::log_continuation(a, b, c0, m)?),
                    node(c0 + h, Self::connection(a, b, c0 + h)?),
                ]);
                Continuation::NearInteger { nodes, offset: off, step: h }
            } else {
                Self::connection(a, b, c)?
            }
        };
        Ok(Plan { a, b, c, cont })
    }

    fn connection(a: f64, b: f64, c: f64) -> Result<Continuation> {
        let s = c - a - b;
        let g_c = gamma_fn(c)?;
        let w1 = g_c * gamma_fn(s)? * rgamma(c - a) * rgamma(c - b);
        let w2 = g_c * gamma_fn(-s)? * rgamma(a) * rgamma(b);
        Ok(Continuation::Connection { w1, w2 })
    }

    /// Weights for `c - a - b = m` with `m` an integer (`c` itself may carry
    /// rounding from `a + b + m`; the weights use `m` exactly).
    fn log_continuation(a: f64, b: f64, c: f64, m: f64) -> Result<Continuation> {
        let g_c = gamma_fn(c)?;
        let mi = m.abs() as u32;
        Ok(if m >= 0.0 {
            let w1 = if mi > 0 { gamma_fn(m)? * g_c * rgamma(a + m) * rgamma(b + m) } else { 0.0 };
            Continuation::LogNonnegative { m: mi, w1, w2: g_c * rgamma(a) * rgamma(b) }
        } else {
            let mf = mi as f64;
            let w1 = gamma_fn(mf)? * g_c * rgamma(a) * rgamma(b);
            Continuation::LogNegative { m: mi, w1, w2: g_c * rgamma(a - mf) * rgamma(b - mf) }
        })
    }

    fn gauss_sum(&self) -> Result<f64> {
        let s = self.c - self.a - self.b;
        if s <= 0.0 {
            return Err(Error::HypergeomDivergent(s));
        }
        Ok(gamma_fn(self.c)? * gamma_fn(s)? * rgamma(self.c - self.a) * rgamma(self.c - self.b))
    }

    /// Value on `[0, 1]`, given `z` and `w = 1 - z` computed by the caller.
    fn eval_unit(&self, z: f64, w: f64) -> Result<f64> {
        let (a, b, c) = (self.a, self.b, self.c);
        if let Continuation::Polynomial = self.cont {
            return power_series(a, b, c, z);
        }
        if w == 0.0 {
            return self.gauss_sum();
        }
        if z <= Z_SWITCH {
            return power_series(a, b, c, z);
        }
        match &self.cont {
            Continuation::Polynomial => unreachable!(),
            Continuation::Connection { w1, w2 } => {
                let s = c - a - b;
                let f1 = if *w1 == 0.0 { 0.0 } else { power_series(a, b, 1.0 - s, w)? };
                let f2 = if *w2 == 0.0 { 0.0 } else { power_series(c - a, c - b, 1.0 + s, w)? * powf(w, s) };
                Ok(w1 * f1 + w2 * f2)
            }
            Continuation::LogNonnegative { m, w1, w2 } => {
                let m = *m;
                let mf = m as f64;
                let mut finite = 0.0;
                let mut t = 1.0;
                for k in 0..m {
                    let kf = k as f64;
                    finite += t;
                    t *= (a + kf) * (b + kf) / ((kf + 1.0) * (1.0 - mf + kf)) * w;
                }
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                let tail = if *w2 == 0.0 { 0.0 } else { log_series(a + mf, b + mf, m, w)? * powf(w, mf) * sign };
                Ok(w1 * finite - w2 * tail)
            }
            Continuation::LogNegative { m, w1, w2 } => {
                let m = *m;
                let mf = m as f64;
                let mut finite = 0.0;
                let mut t = 1.0;
                for k in 0..m {
                    let kf = k as f64;
                    finite += t;
                    t *= (a - mf + kf) * (b - mf + kf) / ((kf + 1.0) * (1.0 - mf + kf)) * w;
                }
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                let tail = if *w2 == 0.0 { 0.0 } else { log_series(a, b, m, w)? * sign };
                Ok(w1 * finite / powf(w, mf) - w2 * tail)
            }
            Continuation::NearInteger { nodes, offset, step } => {
                let f_lo = nodes[0].eval_unit(z, w)?;
                let f_mid = nodes[1].eval_unit(z, w)?;
                let f_hi = nodes[2].eval_unit(z, w)?;
                let u = offset / step;
                Ok(f_mid + 0.5 * u * (f_hi - f_lo) + 0.5 * u * u * (f_hi - 2.0 * f_mid + f_lo))
            }
        }
    }
}

/// `Σ_k (p)_k (q)_k / (k! (k+m)!) w^k [ln w − ψ(k+1) − ψ(k+m+1) + ψ(p+k) + ψ(q+k)]`,
/// the logarithmic tail shared by both integer cases of the connection formula.
fn log_series(p: f64, q: f64, m: u32, w: f64) -> Result<f64> {
    let mf = m as f64;
    let lw = ln(w);
    let mut psi1 = -EULER_GAMMA;
    let mut psi_m = digamma(mf + 1.0)?;
    let mut psi_p = digamma(p)?;
    let mut psi_q = digamma(q)?;
    let mut coef = 1.0 / (1..=m).fold(1.0, |acc, k| acc * k as f64);
    let mut sum = 0.0;
    let mut small = 0;
    for k in 0..SERIES_MAX_TERMS {
        let kf = k as f64;
        let term = coef * (lw - psi1 - psi_m + psi_p + psi_q);
        sum += term;
        if term.abs() < SERIES_RTOL * sum.abs() || coef == 0.0 {
            small += 1;
            if small >= 3 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
        coef *= (p + kf) * (q + kf) / ((kf + 1.0) * (kf + mf + 1.0)) * w;
        psi1 += 1.0 / (kf + 1.0);
        psi_m += 1.0 / (kf + mf + 1.0);
        psi_p += 1.0 / (p + kf);
        psi_q += 1.0 / (q + kf);
    }
    Err(Error::NoConvergence(SERIES_MAX_TERMS))
}

/// `2F1(a, b; c; ·)` for a fixed parameter triple.
///
/// Construction precomputes the Gamma-function weights of the connection
/// formulas, so repeated evaluation (the kernel inner loops) only sums series.
#[derive(Clone, Debug)]
pub struct Hyp2F1 {
    direct: Plan,
    pfaff: Plan,
}

impl Hyp2F1 {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(Error::Domain(alloc::format!("non-finite 2F1 parameters ({a}, {b}, {c})")));
        }
        Ok(Hyp2F1 { direct: Plan::new(a, b, c)?, pfaff: Plan::new(c - a, b, c)? })
    }

    pub fn params(&self) -> (f64, f64, f64) {
        (self.direct.a, self.direct.b, self.direct.c)
    }

    pub fn eval(&self, z: f64) -> Result<f64> {
        if z.is_nan() || z > 1.0 {
            return Err(Error::HypergeomArgument(z));
        }
        if z < 0.0 {
            if let Continuation::Polynomial = self.direct.cont {
                return power_series(self.direct.a, self.direct.b, self.direct.c, z);
            }
            let omz = 1.0 - z;
            let v = z / (z - 1.0);
            let f = self.pfaff.eval_unit(v, 1.0 / omz)?;
            return Ok(powf(omz, -self.direct.b) * f);
        }
        self.direct.eval_unit(z, 1.0 - z)
    }

    /// Evaluation on `[0, 1]` when the caller knows `1 - z` more accurately than
    /// the floating-point subtraction would give it.
    pub fn eval_with_complement(&self, z: f64, one_minus_z: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&z) || !(0.0..=1.0).contains(&one_minus_z) {
            return Err(Error::HypergeomArgument(z));
        }
        self.direct.eval_unit(z, one_minus_z)
    }

    /// `d/dz 2F1 = (ab/c) 2F1(a+1, b+1; c+1; z)` as a new evaluator with its scale.
    pub fn derivative(&self) -> Result<(f64, Hyp2F1)> {
        let (a, b, c) = self.params();
        Ok((a * b / c, Hyp2F1::new(a + 1.0, b + 1.0, c + 1.0)?))
    }
}

/// Parameters and argument of a single `2F1` evaluation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HypergeomParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub z: f64,
}

/// One-shot `2F1(a, b; c; z)`; prefer [`Hyp2F1`] for repeated evaluation.
pub fn gauss_2f1(p: HypergeomParams) -> Result<f64> {
    Hyp2F1::new(p.a, p.b, p.c)?.eval(p.z)
}

/// Shorthand for [`gauss_2f1`] with positional arguments.
pub fn hyp2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    gauss_2f1(HypergeomParams { a, b, c, z })
}
