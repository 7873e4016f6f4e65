//! Fundamental solutions and double-layer kernels against independent oracles:
//! reference values, a plain-series evaluation of the defining formulas,
//! finite differences, and the PDE itself.

#![allow(clippy::excessive_precision)]

use proptest::prelude::*;
use singular_bie_core::geometry::HalfSpacePoint;
use singular_bie_core::kernels::{KernelKind, Kernels, SingularityParams};
use singular_bie_core::math::Vec3;
use std::f64::consts::PI;

fn p(x: f64, y: f64, z: f64) -> HalfSpacePoint {
    HalfSpacePoint::new(x, y, z).unwrap()
}

fn kernels(alpha: f64) -> Kernels {
    Kernels::new(SingularityParams::new(alpha).unwrap()).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// 200-term power series of 2F1 (valid for |z| < 1).
fn series200(a: f64, b: f64, c: f64, z: f64) -> f64 {
    let (mut s, mut t) = (1.0, 1.0);
    for k in 0..200 {
        let k = k as f64;
        t *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
        s += t;
    }
    s
}

/// q1 straight from its defining σ-form, with the series argument mapped into
/// the unit disk by the Euler transformation.
fn q1_oracle(f: [f64; 3], s: [f64; 3], al: f64) -> f64 {
    let r2 = (f[0] - s[0]).powi(2) + (f[1] - s[1]).powi(2) + (f[2] - s[2]).powi(2);
    let r12 = r2 + 4.0 * f[0] * s[0];
    let sigma = 1.0 - r12 / r2;
    let (a, b, c) = (al + 0.5, al, 2.0 * al);
    let fsig = (1.0 - sigma).powf(-b) * series200(c - a, b, c, sigma / (sigma - 1.0));
    r2.powf(-al - 0.5) * fsig / (2.0 * PI)
}

fn q2_oracle(f: [f64; 3], s: [f64; 3], al: f64) -> f64 {
    let r2 = (f[0] - s[0]).powi(2) + (f[1] - s[1]).powi(2) + (f[2] - s[2]).powi(2);
    let r12 = r2 + 4.0 * f[0] * s[0];
    let sigma = 1.0 - r12 / r2;
    let (a, b, c) = (1.5 - al, 1.0 - al, 2.0 - 2.0 * al);
    let fsig = (1.0 - sigma).powf(-b) * series200(c - a, b, c, sigma / (sigma - 1.0));
    r2.powf(al - 1.5) * (f[0] * s[0]).powf(1.0 - 2.0 * al) * fsig / (2.0 * PI)
}

#[test]
fn q1_on_plane_source_is_elementary() {
    let k = kernels(0.25);
    let v = k.q1(&p(1.0, 0.0, 0.0), &p(0.0, 0.0, 1.0)).unwrap();
    assert!(rel(v, 2f64.powf(-0.75) / (2.0 * PI)) < 1e-14);
}

#[test]
fn q_reference_values() {
    // 40-digit reference values.
    let v1 = kernels(0.3).q1(&p(1.0, 0.0, 0.0), &p(2.0, 1.0, 0.0)).unwrap();
    assert!(rel(v1, 0.049_557_134_779_886_043_434) < 1e-12, "{v1}");
    let v2 = kernels(0.2).q2(&p(1.0, 0.0, 0.0), &p(1.0, 1.0, 1.0)).unwrap();
    assert!(rel(v2, 0.030_948_901_897_100_194_217) < 1e-12, "{v2}");
}

#[test]
fn q_series_oracles() {
    let f = [1.0, 0.0, 0.0];
    let s = [2.0, 1.0, 0.0];
    let v = kernels(0.3).q1(&p(1.0, 0.0, 0.0), &p(2.0, 1.0, 0.0)).unwrap();
    assert!(rel(v, q1_oracle(f, s, 0.3)) < 1e-12);
    let s2 = [1.0, 1.0, 1.0];
    let v2 = kernels(0.2).q2(&p(1.0, 0.0, 0.0), &p(1.0, 1.0, 1.0)).unwrap();
    assert!(rel(v2, q2_oracle(f, s2, 0.2)) < 1e-12);
}

#[test]
fn q2_vanishes_on_plane() {
    let k = kernels(0.25);
    for src in [p(0.5, 0.1, 0.2), p(2.0, -1.0, 0.3), p(0.0, 1.0, 1.0)] {
        assert_eq!(k.q2(&p(0.0, 0.3, 0.2), &src).unwrap(), 0.0);
    }
}

#[test]
fn weighted_normal_derivative_of_q1_decays_at_plane() {
    let k = kernels(0.3);
    let src = p(0.6, 0.2, -0.1);
    let mut prev = f64::INFINITY;
    for x in [1e-2, 1e-3, 1e-4] {
        let h = 1e-3 * x;
        let d = (k.q1(&p(x + h, 0.1, 0.0), &src).unwrap() - k.q1(&p(x - h, 0.1, 0.0), &src).unwrap()) / (2.0 * h);
        let w = x.powf(0.6) * d.abs();
        assert!(w < prev, "x^(2α) q1_x = {w} at x = {x}");
        prev = w;
    }
    assert!(prev < 1e-3);
}

/// Second-order central-difference E(q) in the field variables, relative to
/// the sum of magnitudes of its terms.
fn pde_residual(k: &Kernels, kind: KernelKind, f: Vec3, s: &HalfSpacePoint) -> f64 {
    let h = 1e-3;
    let q = |v: Vec3| k.q(kind, &HalfSpacePoint::try_from_vec(v).unwrap(), s).unwrap();
    let c = q(f);
    let mut lap_terms = 0.0;
    let mut sum = 0.0;
    for e in [Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.0, 1.0, 0.0), Vec3::new(0.0, 0.0, 1.0)] {
        let d2 = (q(f + e * h) - 2.0 * c + q(f - e * h)) / (h * h);
        sum += d2;
        lap_terms += d2.abs();
    }
    let ex = Vec3::new(1.0, 0.0, 0.0);
    let qx = (q(f + ex * h) - q(f - ex * h)) / (2.0 * h);
    let drift = 2.0 * k.alpha() / f.x * qx;
    (sum + drift).abs() / (lap_terms + drift.abs())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn fundamental_solutions_solve_the_equation(
        al in 0.02f64..0.48,
        f in (0.2f64..2.0, -1.0f64..1.0, -1.0f64..1.0),
        s in (0.0f64..2.0, -1.0f64..1.0, -1.0f64..1.0),
    ) {
        let (fv, sp) = (Vec3::new(f.0, f.1, f.2), p(s.0, s.1, s.2));
        prop_assume!((fv - sp.to_vec()).norm() > 0.2);
        let k = kernels(al);
        for kind in [KernelKind::Q1, KernelKind::Q2] {
            let r = pde_residual(&k, kind, fv, &sp);
            prop_assert!(r <= 1e-4, "{:?} residual {}", kind, r);
        }
    }

    #[test]
    fn q_is_symmetric(
        al in 0.02f64..0.48,
        f in (0.0f64..2.0, -1.0f64..1.0, -1.0f64..1.0),
        s in (0.0f64..2.0, -1.0f64..1.0, -1.0f64..1.0),
    ) {
        let (a, b) = (p(f.0, f.1, f.2), p(s.0, s.1, s.2));
        prop_assume!((a.to_vec() - b.to_vec()).norm() > 1e-3);
        let k = kernels(al);
        for kind in [KernelKind::Q1, KernelKind::Q2] {
            let (u, v) = (k.q(kind, &a, &b).unwrap(), k.q(kind, &b, &a).unwrap());
            prop_assert!((u - v).abs() <= 1e-13 * u.abs().max(1e-300));
        }
    }

    #[test]
    fn regularized_and_sigma_forms_agree(
        al in 0.02f64..0.48,
        f in (0.0f64..2.0, -1.0f64..1.0, -1.0f64..1.0),
        s in (0.01f64..2.0, -1.0f64..1.0, -1.0f64..1.0),
        n in (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0),
    ) {
        let (field, surf) = (p(f.0, f.1, f.2), p(s.0, s.1, s.2));
        let nv = Vec3::new(n.0, n.1, n.2);
        prop_assume!(nv.norm() > 0.1 && (field.to_vec() - surf.to_vec()).norm() > 0.05);
        let nv = nv.normalized();
        let k = kernels(al);
        let a = k.conormal_q1(&surf, nv, &field).unwrap();
        let b = k.conormal_q1_sigma_form(&surf, nv, &field).unwrap();
        let scale = k.q1(&field, &surf).unwrap() / (field.to_vec() - surf.to_vec()).norm();
        prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(scale), "K1 {} vs {}", a, b);
        let a = k.conormal_q2(&surf, nv, &field).unwrap();
        let b = k.conormal_q2_sigma_form(&surf, nv, &field).unwrap();
        let scale = k.q2(&field, &surf).unwrap() / (field.to_vec() - surf.to_vec()).norm();
        prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(scale), "K2 {} vs {}", a, b);
        prop_assert!((k.q1(&field, &surf).unwrap() - k.q1_sigma_form(&field, &surf).unwrap()).abs()
            <= 1e-11 * k.q1(&field, &surf).unwrap());
    }

    #[test]
    fn conormal_kernels_match_finite_differences(
        al in 0.02f64..0.48,
        f in (0.05f64..2.0, -1.0f64..1.0, -1.0f64..1.0),
        s in (0.05f64..2.0, -1.0f64..1.0, -1.0f64..1.0),
        n in (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0),
    ) {
        let (field, surf) = (p(f.0, f.1, f.2), p(s.0, s.1, s.2));
        let nv = Vec3::new(n.0, n.1, n.2);
        prop_assume!(nv.norm() > 0.1 && (field.to_vec() - surf.to_vec()).norm() > 0.2);
        let nv = nv.normalized();
        let k = kernels(al);
        let h = 1e-5;
        for kind in [KernelKind::Q1, KernelKind::Q2] {
            let shift = |t: f64| HalfSpacePoint::try_from_vec(surf.to_vec() + nv * t).unwrap();
            let fd = surf.x.powf(2.0 * al)
                * (k.q(kind, &field, &shift(h)).unwrap() - k.q(kind, &field, &shift(-h)).unwrap())
                / (2.0 * h);
            let exact = k.conormal(kind, &surf, nv, &field).unwrap();
            let scale = k.q(kind, &field, &surf).unwrap() * surf.x.powf(2.0 * al)
                / (field.to_vec() - surf.to_vec()).norm();
            prop_assert!((fd - exact).abs() <= 1e-6 * exact.abs().max(scale),
                "{:?}: fd {} exact {}", kind, fd, exact);

            // Conormal at the field point: x^(2α) n·∇_p q(p; s).
            let fshift = |t: f64| HalfSpacePoint::try_from_vec(field.to_vec() + nv * t).unwrap();
            let fd = field.x.powf(2.0 * al)
                * (k.q(kind, &fshift(h), &surf).unwrap() - k.q(kind, &fshift(-h), &surf).unwrap())
                / (2.0 * h);
            let exact = k.conormal_of_field(kind, &field, nv, &surf).unwrap();
            let scale = k.q(kind, &field, &surf).unwrap() * field.x.powf(2.0 * al)
                / (field.to_vec() - surf.to_vec()).norm();
            prop_assert!((fd - exact).abs() <= 1e-6 * exact.abs().max(scale),
                "{:?} at field: fd {} exact {}", kind, fd, exact);
        }
    }
}

/// Random pairs on the unit hemisphere (radial normals).
fn hemisphere_pairs(n: usize) -> Vec<(HalfSpacePoint, Vec3, HalfSpacePoint)> {
    let mut out = Vec::new();
    let mut state = 0x2545_f491_4f6c_dd1du64;
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    while out.len() < n {
        let (s1, t1) = (2.0 * PI * next(), 0.5 * PI * next());
        let pt = |s: f64, t: f64| Vec3::new(t.cos(), t.sin() * s.cos(), t.sin() * s.sin());
        let a = pt(s1, t1);
        // Mix of near and far partners.
        let spread = 10f64.powf(-4.0 * next());
        let (s2, t2) = (s1 + spread * (next() - 0.5), (t1 + spread * (next() - 0.5)).clamp(0.0, 0.5 * PI));
        let b = pt(s2, t2);
        if (a - b).norm() < 1e-6 || a.x <= 0.0 || b.x < 0.0 {
            continue;
        }
        out.push((HalfSpacePoint::try_from_vec(a).unwrap(), a, HalfSpacePoint::try_from_vec(b).unwrap()));
    }
    out
}

#[test]
fn weak_singularity_bounds_on_the_hemisphere() {
    let pairs = hemisphere_pairs(1000);
    for al in [0.1, 0.25, 0.4] {
        let k = kernels(al);
        for kind in [KernelKind::Q1, KernelKind::Q2] {
            // Fit the constant on the far half and check it holds on the near half.
            let ratios: Vec<(f64, f64)> = pairs
                .iter()
                .map(|(s, n, f)| {
                    let v = k.conormal(kind, s, *n, f).unwrap();
                    let d = (s.to_vec() - f.to_vec()).norm();
                    let r1 = (d * d + 4.0 * s.x * f.x).sqrt();
                    (d, v.abs() * r1.powf(2.0 * al) * d)
                })
                .collect();
            let far = ratios.iter().filter(|r| r.0 > 0.05).map(|r| r.1).fold(0.0, f64::max);
            let near = ratios.iter().filter(|r| r.0 <= 0.05).map(|r| r.1).fold(0.0, f64::max);
            assert!(far.is_finite() && far > 0.0);
            assert!(near <= 2.0 * far, "{kind:?} α={al}: near {near} vs fitted {far}");
        }
    }
}

#[test]
fn far_field_decay_rate() {
    for al in [0.1, 0.25, 0.4] {
        let k = kernels(al);
        let s = p(0.6, 0.3, -0.2);
        let n = Vec3::new(0.6, 0.3, -0.2).normalized();
        let dir = Vec3::new(1.0, 1.0, 1.0).normalized();
        let at = |r: f64| k.conormal_q1(&s, n, &HalfSpacePoint::try_from_vec(dir * r).unwrap()).unwrap();
        let slope = (at(2000.0).abs().ln() - at(1000.0).abs().ln()) / 2f64.ln();
        assert!(at(100.0).abs() * 100f64.powf(2.0 + 2.0 * al) < 2.0 * at(2000.0).abs() * 2000f64.powf(2.0 + 2.0 * al));
        assert!((slope + 2.0 + 2.0 * al).abs() < 0.02, "α={al}: slope {slope}");
    }
}

#[test]
fn q2_kernel_vanishes_at_plane_like_flux_integrand() {
    // Near the plane the Q2 kernel behaves like (1-2α)/(2π) x^(1-2α) r^(2α-3) ξ... → 0 with x.
    let k = kernels(0.25);
    let s = p(0.5, 0.2, 0.1);
    let n = Vec3::new(1.0, 0.0, 0.0);
    let mut prev = f64::INFINITY;
    for x in [1e-1, 1e-2, 1e-3, 1e-4] {
        let v = k.conormal_q2(&s, n, &p(x, 0.0, 0.0)).unwrap();
        assert!(v.is_finite() && v != 0.0);
        let scaled = v / x.powf(0.5);
        assert!(v.abs() < prev);
        prev = v.abs();
        assert!(scaled.is_finite());
    }
    assert_eq!(k.conormal_q2(&s, n, &p(0.0, 0.0, 0.0)).unwrap(), 0.0);
}
