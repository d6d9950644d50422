use eigeninterval::ensembles::{EnsembleSpec, Interval};
use eigeninterval::exact_psi::psi;
use eigeninterval::hp_math::{
    beta_shift, big, erf_erfc, gamma_shift, inc_beta, inc_beta_lower_upper, reg_gamma_interval, reg_lower_gamma,
    BigReal, Precision,
};
use proptest::prelude::*;

fn prec(bits: u32) -> Precision {
    Precision::new(bits).unwrap()
}

fn rel(a: &BigReal, b: &BigReal) -> f64 {
    let d = (a.clone() - b).abs().to_f64();
    d / b.to_f64().abs().max(f64::MIN_POSITIVE)
}

fn value(spec: &EnsembleSpec, lo: f64, hi: f64) -> f64 {
    psi(spec, Interval::new(lo, hi).unwrap()).unwrap().value
}

fn small_spec() -> impl Strategy<Value = EnsembleSpec> {
    prop_oneof![
        (1usize..6, 0usize..4).prop_map(|(p, extra)| EnsembleSpec::RealWishart { p, m: p + extra }),
        (1usize..7).prop_map(|n| EnsembleSpec::Goe { n }),
        (1usize..5, 0u8..4, 0u8..4).prop_map(|(s, m, n)| EnsembleSpec::RealBeta {
            s,
            m: m as f64 / 2.0,
            n: n as f64 / 2.0
        }),
        (1usize..5, 0usize..3).prop_map(|(p, extra)| EnsembleSpec::ComplexWishartWhite { p, m: p + extra }),
        (1usize..6).prop_map(|n| EnsembleSpec::Gue { n }),
        (1usize..4, 0u8..3, 0u8..3).prop_map(|(s, m, n)| EnsembleSpec::ComplexBeta {
            s,
            m: m as f64,
            n: n as f64
        }),
    ]
}

/// Maps `u` in `[0, 1]` to a point of the support of `spec`.
fn point(spec: &EnsembleSpec, u: f64) -> f64 {
    match spec {
        EnsembleSpec::RealBeta { .. } | EnsembleSpec::ComplexBeta { .. } => u,
        EnsembleSpec::Goe { n } | EnsembleSpec::Gue { n } => (2.0 * u - 1.0) * (2.0 * *n as f64).sqrt() * 1.5,
        _ => u * 4.0 * spec.dim() as f64 + 1.0,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn monotone_in_both_endpoints(spec in small_spec(), u in prop::array::uniform4(0.0f64..1.0)) {
        let mut u = u;
        u.sort_by(f64::total_cmp);
        let [a0, a1, b0, b1] = u.map(|x| point(&spec, x));
        let inner = value(&spec, a1, b0);
        prop_assert!(value(&spec, a0, b0) >= inner - 1e-14);
        prop_assert!(value(&spec, a1, b1) >= inner - 1e-14);
        // nesting: [a1, b0] inside [a0, b1]
        prop_assert!(value(&spec, a0, b1) >= inner - 1e-14);
    }

    #[test]
    fn probabilities_are_probabilities(spec in small_spec(), u in prop::array::uniform2(0.0f64..1.0)) {
        let (lo, hi) = (point(&spec, u[0].min(u[1])), point(&spec, u[0].max(u[1])));
        let v = value(&spec, lo, hi);
        prop_assert!((0.0..=1.0).contains(&v));
    }

    #[test]
    fn goe_is_symmetric(n in 1usize..11, a in -4.0f64..4.0, w in 0.01f64..5.0) {
        let spec = EnsembleSpec::Goe { n };
        let (lo, hi) = (a, a + w);
        let x = value(&spec, lo, hi);
        let y = value(&spec, -hi, -lo);
        prop_assert!((x - y).abs() <= 1e-10 * x.abs().max(1e-300), "{x} vs {y}");
    }

    #[test]
    fn gamma_shift_matches_direct(a in 0.1f64..30.0, n in 0u32..25, x in 0.01f64..60.0) {
        let bits = 160;
        let (ab, xb) = (big(bits, a), big(bits, x));
        let p_ax = reg_lower_gamma(&ab, &xb, prec(bits + 64)).unwrap();
        let shifted = gamma_shift(&ab, n, &xb, &p_ax, prec(bits)).unwrap();
        let direct = reg_lower_gamma(&(ab.clone() + n), &xb, prec(bits)).unwrap();
        // the recursion subtracts, so compare in absolute terms at P's own scale
        let err = (shifted - &direct).abs().to_f64();
        prop_assert!(err <= 1e-30, "a={a} n={n} x={x}: {err:e}");
    }

    #[test]
    fn gamma_interval_splits(a in 0.2f64..20.0, x in 0.0f64..30.0, d1 in 0.0f64..10.0, d2 in 0.0f64..10.0) {
        let p = prec(128);
        let (ab, lo, mid, hi) = (big(128, a), big(128, x), big(128, x + d1), big(128, x + d1 + d2));
        let whole = reg_gamma_interval(&ab, &lo, &hi, p).unwrap();
        let parts = reg_gamma_interval(&ab, &lo, &mid, p).unwrap() + reg_gamma_interval(&ab, &mid, &hi, p).unwrap();
        prop_assert!((whole - parts).abs().to_f64() <= 1e-35);
    }

    #[test]
    fn beta_is_additive(a in 0.2f64..15.0, b in 0.2f64..15.0, u in prop::array::uniform3(0.0f64..1.0)) {
        let mut u = u;
        u.sort_by(f64::total_cmp);
        let p = prec(128);
        let (ab, bb) = (big(128, a), big(128, b));
        let [x, y, z] = u.map(|t| big(128, t));
        let whole = inc_beta(&x, &z, &ab, &bb, p).unwrap();
        let parts = inc_beta(&x, &y, &ab, &bb, p).unwrap() + inc_beta(&y, &z, &ab, &bb, p).unwrap();
        prop_assert!(whole.is_zero() || rel(&parts, &whole) <= 1e-30);
        let (lo, hi) = inc_beta_lower_upper(&y, &ab, &bb, p).unwrap();
        let complete = inc_beta(&big(128, 0.0), &big(128, 1.0), &ab, &bb, p).unwrap();
        prop_assert!(rel(&(lo + hi), &complete) <= 1e-30);
    }

    #[test]
    fn beta_shift_matches_direct(a in 0.2f64..15.0, b in 0.2f64..15.0, x in 0.0f64..1.0) {
        let p = prec(160);
        let (ab, bb, xb) = (big(160, a), big(160, b), big(160, x));
        let lower = inc_beta(&big(160, 0.0), &xb, &ab, &bb, prec(224)).unwrap();
        let shifted = beta_shift(&xb, &ab, &bb, &lower, p).unwrap();
        let direct = inc_beta(&big(160, 0.0), &xb, &(ab.clone() + 1u32), &bb, p).unwrap();
        prop_assert!((shifted - &direct).abs().to_f64() <= 1e-35 * (1.0 + direct.to_f64()));
    }

    #[test]
    fn erf_and_erfc_sum_to_one(x in -30.0f64..30.0) {
        let (e, c) = erf_erfc(&big(192, x), prec(192)).unwrap();
        prop_assert!((e + c - 1u32).abs().to_f64() <= 1e-55);
    }

    #[test]
    fn more_bits_refine_fewer(a in 0.1f64..50.0, x in 0.0f64..80.0) {
        let (ab, xb) = (big(512, a), big(512, x));
        let coarse = reg_lower_gamma(&ab, &xb, prec(96)).unwrap();
        let fine = reg_lower_gamma(&ab, &xb, prec(512)).unwrap();
        prop_assert!(fine.is_zero() && coarse.is_zero() || rel(&coarse, &fine) <= 1e-27);
    }
}
