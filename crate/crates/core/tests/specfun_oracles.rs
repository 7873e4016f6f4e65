//! Special functions against high-precision reference values and identities.
//!
//! Reference constants were produced with 40-digit arithmetic (mpmath); the
//! Gamma value at 1/2 was obtained by numerically integrating the defining
//! integral, `2F1(1,1;2;z)` from its closed form `-ln(1-z)/z`.

#![allow(clippy::excessive_precision)]

use proptest::prelude::*;
use singular_bie_core::specfun::{digamma, gamma_fn, hyp2f1, pochhammer, Hyp2F1};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn gamma_reference_values() {
    let cases = [
        (0.5, 1.772_453_850_905_516_027_3),
        (-2.5, -0.945_308_720_482_941_881_23),
        (30.3, 2.444_285_029_154_250_433_9e31),
        (-49.5, 7.322_269_689_234_127_035_2e-64),
        (1e-3, 999.423_772_484_595_466_11),
        (5.0, 24.0),
    ];
    for (t, want) in cases {
        let got = gamma_fn(t).unwrap();
        assert!(rel(got, want) < 1e-12, "Γ({t}) = {got}, want {want}");
    }
}

#[test]
fn digamma_reference_values() {
    for (t, want) in
        [(0.3, -3.502_524_222_200_132_989), (-1.7, -1.485_717_499_511_057_358_7), (12.5, 2.485_195_651_274_912_048_2)]
    {
        let got = digamma(t).unwrap();
        assert!(rel(got, want) < 1e-12, "ψ({t}) = {got}, want {want}");
    }
}

#[test]
fn closed_form_log_oracle() {
    // 2F1(1,1;2;z) = -ln(1-z)/z
    for z in [0.5, 0.1, 0.7, 0.95, -0.5, -7.0] {
        let want = -(1.0f64 - z).ln() / z;
        assert!(rel(hyp2f1(1.0, 1.0, 2.0, z).unwrap(), want) < 1e-12, "z={z}");
    }
    assert!(rel(hyp2f1(1.0, 1.0, 2.0, 0.5).unwrap(), 1.386_294_361_119_89) < 1e-13);
}

#[test]
fn hyp2f1_reference_values() {
    let cases: [(f64, f64, f64, f64, f64); 18] = [
        (1.0, 1.0, 2.0, 0.5, 1.386_294_361_119_890_618_8),
        (0.25, 0.25, 1.0, 1.0, 1.180_340_599_016_096_226),
        (0.3, 0.7, 1.6, 0.75, 1.159_186_532_820_430_574_9),
        (0.3, 0.7, 1.6, 0.999, 1.374_649_916_156_256_320_3),
        (-0.2, 1.3, 0.6, 0.9, -0.373_481_649_012_743_824_38),
        (0.5, 1.5, 2.0, 0.8, 1.716_828_884_961_268_066_5),
        (1.0, 2.0, 3.0, 0.95, 4.533_478_722_557_319_315_1),
        (0.5, 1.5, 1.0, 0.7, 2.634_906_781_070_650_076_2),
        (1.2, 0.8, 0.5, 0.85, 23.887_236_426_200_989_19),
        (0.4, 0.6, 2.0, 0.99, 1.247_944_089_018_717_672_3),
        (0.3, 0.7, 1.6, -3.5, 0.787_473_637_682_343_885_28),
        (0.75, 0.25, 1.25, -50.0, 0.466_565_987_325_213_522_83),
        (1.5, -0.5, 2.5, -0.3, 1.085_667_633_466_197_346_5),
        (2.0, 3.0, 4.5, -0.9, 0.407_792_683_868_969_844_4),
        (-3.0, 0.5, 1.5, 0.97, 0.464_158_142_857_142_863_52),
        (0.2, 0.3, 1.499_999_9, 0.9, 1.057_286_833_564_320_838_3),
        (0.2, 0.3, 0.500_000_01, 0.95, 1.373_944_803_649_915_696_9),
        (0.8, 0.55, 2.35, 0.999_999, 1.453_170_706_639_802_825_2),
    ];
    for (a, b, c, z, want) in cases {
        let got = hyp2f1(a, b, c, z).unwrap();
        assert!(rel(got, want) < 1e-10, "F({a},{b};{c};{z}) = {got}, want {want}");
    }
}

#[test]
fn gauss_summation_uses_gamma_ratio() {
    let want = gamma_fn(1.0).unwrap() * gamma_fn(0.5).unwrap() / gamma_fn(0.75).unwrap().powi(2);
    assert!(rel(hyp2f1(0.25, 0.25, 1.0, 1.0).unwrap(), want) < 1e-14);
    assert!(rel(want, 1.180_340_599_016_096) < 1e-13);
}

#[test]
fn pochhammer_matches_gamma_ratio() {
    for (t, n) in [(0.3, 5u32), (2.5, 3), (-1.5, 4)] {
        let want = gamma_fn(t + n as f64).unwrap() / gamma_fn(t).unwrap();
        assert!(rel(pochhammer(t, n), want) < 1e-12);
    }
}

/// Plain power-series oracle, independent of the library's continuation logic.
fn series_oracle(a: f64, b: f64, c: f64, z: f64, terms: usize) -> f64 {
    let (mut s, mut t) = (1.0, 1.0);
    for k in 0..terms {
        let k = k as f64;
        t *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
        s += t;
    }
    s
}

#[test]
fn series_oracle_agreement_small_argument() {
    for (a, b, c, z) in [(0.3, 0.7, 1.6, 0.3), (-1.2, 0.4, 0.9, -0.4), (2.5, 1.5, 3.2, 0.45)] {
        let want = series_oracle(a, b, c, z, 400);
        assert!(rel(hyp2f1(a, b, c, z).unwrap(), want) < 1e-13);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn gamma_recurrence(t in -20.0f64..40.0) {
        prop_assume!((t - t.round()).abs() > 1e-3);
        let r = gamma_fn(t + 1.0).unwrap() / gamma_fn(t).unwrap();
        prop_assert!(rel(r, t) < 1e-12);
    }

    #[test]
    fn derivative_identity(a in -2.0f64..2.5, b in -2.0f64..2.5, c in 0.3f64..4.0, z in -2.0f64..0.9) {
        let f = Hyp2F1::new(a, b, c).unwrap();
        let h = 1e-5;
        let fd = (f.eval(z + h).unwrap() - f.eval(z - h).unwrap()) / (2.0 * h);
        let exact = a * b / c * hyp2f1(a + 1.0, b + 1.0, c + 1.0, z).unwrap();
        prop_assert!((fd - exact).abs() <= 1e-6 * exact.abs().max(1.0), "fd={} exact={}", fd, exact);
    }

    #[test]
    fn contiguous_relation(a in -2.0f64..2.5, b in -2.0f64..2.5, c in 0.3f64..4.0, z in -3.0f64..0.95) {
        let lhs = b / c * z * hyp2f1(a + 1.0, b + 1.0, c + 1.0, z).unwrap();
        let rhs = hyp2f1(a + 1.0, b, c, z).unwrap() - hyp2f1(a, b, c, z).unwrap();
        let scale = hyp2f1(a + 1.0, b, c, z).unwrap().abs().max(hyp2f1(a, b, c, z).unwrap().abs()).max(1.0);
        prop_assert!((lhs - rhs).abs() <= 1e-9 * scale, "lhs={} rhs={}", lhs, rhs);
    }

    #[test]
    fn euler_transformation(a in -2.0f64..2.5, b in -2.0f64..2.5, c in 0.3f64..4.0, z in -5.0f64..0.9) {
        let lhs = hyp2f1(a, b, c, z).unwrap();
        let rhs = (1.0 - z).powf(-b) * hyp2f1(c - a, b, c, z / (z - 1.0)).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-9 * lhs.abs().max(1.0), "lhs={} rhs={}", lhs, rhs);
    }
}
