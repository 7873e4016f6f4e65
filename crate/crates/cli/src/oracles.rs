//! Reference computations that share no code with the solver's special
//! functions or plane integrals.

use std::f64::consts::PI;

use singular_bie_core::quad::adaptive_gk;

/// `ln Γ(x)` for `x >= 10` from the Stirling series (error below 1e-17
/// relative to the leading terms there).
fn ln_gamma_stirling(x: f64) -> f64 {
    let r = 1.0 / (x * x);
    let series = (1.0 / 12.0
        - r * (1.0 / 360.0 - r * (1.0 / 1260.0 - r * (1.0 / 1680.0 - r * (1.0 / 1188.0 - r * 691.0 / 360_360.0)))))
        / x;
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln() + series
}

/// `Γ(x)`: upward shift into the Stirling range for `x >= 0.5`, reflection
/// below.
pub fn gamma_stirling(x: f64) -> f64 {
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma_stirling(1.0 - x));
    }
    let mut shifted = x;
    let mut prod = 1.0;
    while shifted < 15.0 {
        prod *= shifted;
        shifted += 1.0;
    }
    ln_gamma_stirling(shifted).exp() / prod
}

/// `Γ(c)Γ(c-a-b) / (Γ(c-a)Γ(c-b))`.
pub fn gauss_sum(a: f64, b: f64, c: f64) -> f64 {
    gamma_stirling(c) * gamma_stirling(c - a - b) / (gamma_stirling(c - a) * gamma_stirling(c - b))
}

/// `∬_{R²} (1 + t² + s²)^(-β)` for `β > 1`: adaptive quadrature over the
/// square `[-half, half]²` and the exact radial integral outside it.
pub fn plane_identity_integral(beta: f64, half: f64) -> f64 {
    let f = |t: f64, s: f64| (1.0 + t * t + s * s).powf(-beta);
    // The integrand is even in both variables: integrate one quadrant.
    let inner = |t: f64| adaptive_gk(|s| f(t, s), 0.0, half, 1e-15, 1e-13, 200);
    let square = 4.0 * adaptive_gk(inner, 0.0, half, 1e-14, 1e-13, 200);
    // Outside the square along the ray at angle φ the radial integral from
    // R(φ) = half / max(|cos φ|, |sin φ|) is (1 + R²)^(1-β) / (2(β-1)).
    // The eight octants contribute equally.
    let tail_density = |phi: f64| {
        let r = half / phi.cos();
        (1.0 + r * r).powf(1.0 - beta) / (2.0 * (beta - 1.0))
    };
    let tail = 8.0 * adaptive_gk(tail_density, 0.0, PI / 4.0, 1e-15, 1e-13, 200);
    square + tail
}
