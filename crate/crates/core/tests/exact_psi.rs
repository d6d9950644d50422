mod common;

use common::{beta_between, p_lower, rel_close};
use eigeninterval::ensembles::{mc_psi, EnsembleSpec, Interval};
use eigeninterval::exact_psi::*;
use eigeninterval::Error;

const INF: f64 = f64::INFINITY;

fn iv(lo: f64, hi: f64) -> Interval {
    Interval::new(lo, hi).unwrap()
}

fn value(spec: &EnsembleSpec, lo: f64, hi: f64) -> f64 {
    let r = psi(spec, iv(lo, hi)).unwrap();
    assert!(r.converged, "{spec:?} on [{lo}, {hi}] did not converge");
    r.value
}

fn erf(x: f64) -> f64 {
    rug::Float::with_val(128, x).erf().to_f64()
}

#[test]
fn goe_negative_closed_forms() {
    for (k, want) in common::goe_negative_closed_forms().iter().enumerate() {
        let got = psi_goe(k + 1, iv(-INF, 0.0)).unwrap().value;
        assert!(rel_close(got, *want, 1e-12), "n={}: {got} vs {want}", k + 1);
    }
}

#[test]
fn single_eigenvalue_laws() {
    for b in [0.3, 1.0, 4.5, 20.0] {
        let got = psi_real_wishart(1, 1, iv(0.0, b)).unwrap().value;
        assert!(rel_close(got, p_lower(0.5, b / 2.0), 1e-13));
    }
    for (a, b) in [(0.0, 1.0), (0.2, 3.0), (1.5, INF)] {
        let got = psi_complex_wishart_white(1, 1, iv(a, b)).unwrap().value;
        assert!(rel_close(got, (-a).exp() - (-b).exp(), 1e-13));

        let got = psi_complex_wishart_correlated(1, 2, &[2.0], iv(a, b)).unwrap().value;
        let want = p_lower(2.0, b / 2.0) - p_lower(2.0, a / 2.0);
        assert!(rel_close(got, want, 1e-13));
    }
    for (m, n, b) in [(0.0, 0.0, 0.4), (1.0, 1.0, 0.7), (2.5, 0.5, 0.9), (0.5, 3.0, 0.2)] {
        let want = beta_between(0.0, b, m + 1.0, n + 1.0) / beta_between(0.0, 1.0, m + 1.0, n + 1.0);
        let real = psi_real_beta(1, m, n, iv(0.0, b)).unwrap().value;
        let cplx = psi_complex_beta(1, m, n, iv(0.0, b)).unwrap().value;
        assert!(rel_close(real, want, 1e-13), "real beta m={m} n={n}");
        assert!(rel_close(cplx, want, 1e-13), "complex beta m={m} n={n}");
    }
    for (a, b) in [(-1.0, 1.0), (-INF, 0.3), (0.5, 2.0), (-2.0, -0.1)] {
        let got = psi_gue(1, iv(a, b)).unwrap().value;
        let ea = if a.is_infinite() { -1.0 } else { erf(a) };
        assert!(rel_close(got, (erf(b) - ea) / 2.0, 1e-13));
    }
}

#[test]
fn published_values() {
    let cases = [
        (EnsembleSpec::RealWishart { p: 2, m: 2 }, 0.0, 2.0, 0.315),
        (EnsembleSpec::RealWishart { p: 5, m: 5 }, 0.0, 5.0, 3.71e-3),
        (EnsembleSpec::RealWishart { p: 10, m: 10 }, 0.0, 10.0, 1.90e-9),
        (EnsembleSpec::Goe { n: 10 }, -INF, 0.0, 2.27e-14),
    ];
    for (spec, lo, hi, want) in cases {
        let got = value(&spec, lo, hi);
        assert!(rel_close(got, want, 3e-3), "{spec:?}: {got:e} vs {want:e}");
    }
    let (p, m) = (10.0f64, 15.0f64);
    let edges = ((m.sqrt() - p.sqrt()).powi(2), (m.sqrt() + p.sqrt()).powi(2));
    let got = value(&EnsembleSpec::RealWishart { p: 10, m: 15 }, edges.0, edges.1);
    assert!((got - 0.7678).abs() < 1e-4, "{got}");
}

#[test]
fn full_support_is_one_up_to_twenty() {
    let mut specs = Vec::new();
    for p in [1usize, 2, 3, 4, 5, 7, 10, 13, 16, 20] {
        specs.push(EnsembleSpec::RealWishart { p, m: p });
        specs.push(EnsembleSpec::RealWishart { p, m: p + 3 });
        specs.push(EnsembleSpec::Goe { n: p });
        specs.push(EnsembleSpec::RealBeta { s: p, m: 0.5, n: 1.0 });
        specs.push(EnsembleSpec::RealBeta { s: p, m: 0.0, n: 0.0 });
        specs.push(EnsembleSpec::ComplexWishartWhite { p, m: p + 1 });
        let sigma: Vec<f64> = (0..p).map(|i| 3.0 / (1.0 + i as f64)).collect();
        specs.push(EnsembleSpec::ComplexWishartCorrelated { m: p + 2, sigma });
        specs.push(EnsembleSpec::ComplexBeta { s: p, m: 1.0, n: 0.5 });
        specs.push(EnsembleSpec::Gue { n: p });
        if p >= 2 {
            specs.push(EnsembleSpec::ComplexWishartSpiked { p, m: p, sigma1: 4.0, sigma2: 1.0 });
            specs.push(EnsembleSpec::ComplexWishartSpiked { p, m: p + 5, sigma1: 1.5, sigma2: 0.7 });
        }
    }
    for spec in specs {
        let got = value(&spec, -INF, INF);
        assert!((got - 1.0).abs() <= 1e-10, "{spec:?}: {got}");
    }
}

#[test]
fn near_degenerate_covariance_limits() {
    let eps = 1e-4;
    let corr = psi_complex_wishart_correlated(2, 2, &[1.0 + eps, 1.0 - eps], iv(0.0, 2.0)).unwrap();
    let white = psi_complex_wishart_white(2, 2, iv(0.0, 2.0)).unwrap();
    assert!(corr.converged);
    assert!(rel_close(corr.value, white.value, 1e-2));

    let s1 = 1.0 + eps;
    let spiked = psi_complex_wishart_spiked(3, 4, s1, 1.0, iv(0.5, 9.0)).unwrap();
    let nearby = psi_complex_wishart_correlated(3, 4, &[s1, 1.0 + 1e-6, 1.0 - 1e-6], iv(0.5, 9.0)).unwrap();
    assert!(spiked.converged && nearby.converged);
    assert!(rel_close(spiked.value, nearby.value, 1e-2));

    // a well separated spike is just a two-point spectrum
    let spiked = psi_complex_wishart_spiked(2, 3, 2.0, 1.0, iv(0.2, 10.0)).unwrap();
    let corr = psi_complex_wishart_correlated(2, 3, &[2.0, 1.0], iv(0.2, 10.0)).unwrap();
    assert!(rel_close(spiked.value, corr.value, 1e-12));
}

#[test]
fn extreme_eigenvalue_cdfs() {
    let goe = EnsembleSpec::Goe { n: 1 };
    assert!(rel_close(cdf_largest(&goe, 0.0).unwrap().value, 0.5, 1e-14));

    let w = EnsembleSpec::RealWishart { p: 10, m: 10 };
    let got = cdf_largest(&w, 10.0).unwrap().value;
    assert!(rel_close(got, 1.90e-9, 3e-3));
    assert_eq!(cdf_largest(&w, INF).unwrap().value, 1.0);
    // one minus a normalization that is exact to working precision
    assert!(cdf_smallest(&w, 0.0).unwrap().value < 1e-60);
    assert_eq!(cdf_smallest(&w, INF).unwrap().value, 1.0);

    let beta = EnsembleSpec::RealBeta { s: 3, m: 1.0, n: 1.0 };
    assert!((cdf_largest(&beta, 1.0).unwrap().value - 1.0).abs() < 1e-12);
    assert!(cdf_smallest(&beta, 0.0).unwrap().value.abs() < 1e-12);

    // the minimum and maximum CDFs of the same law must bracket consistently
    let w = EnsembleSpec::RealWishart { p: 4, m: 9 };
    for x in [1.0, 3.0, 8.0, 20.0] {
        let lo = cdf_smallest(&w, x).unwrap().value;
        let hi = cdf_largest(&w, x).unwrap().value;
        assert!(hi <= lo + 1e-15, "x={x}: max cdf {hi} above min cdf {lo}");
    }
}

#[test]
fn complement_keeps_precision_near_one() {
    let r = psi_goe(2, iv(-12.0, 12.0)).unwrap();
    let c = r.complement();
    assert!(c.value > 0.0 && c.value < 1e-25, "{}", c.value);
}

#[test]
fn log_value_survives_underflow() {
    let r = psi_goe(100, iv(-INF, 0.0)).unwrap();
    assert!(r.converged);
    assert_eq!(r.value, 0.0);
    // independent quadrature oracle: -1209.56336265
    assert!((r.log10() - (-1209.563_362_6)).abs() < 1e-6, "{}", r.log10());
}

#[test]
fn reflection_of_goe() {
    for n in [2usize, 5, 8] {
        let a = psi_goe(n, iv(-1.3, 2.1)).unwrap().value;
        let b = psi_goe(n, iv(-2.1, 1.3)).unwrap().value;
        assert!(rel_close(a, b, 1e-10));
    }
}

#[test]
fn domain_errors() {
    let w = EnsembleSpec::RealWishart { p: 3, m: 4 };
    assert!(matches!(psi(&w, iv(-1.0, 2.0)), Err(Error::Domain(_))));
    let b = EnsembleSpec::RealBeta { s: 2, m: 1.0, n: 1.0 };
    assert!(matches!(psi(&b, iv(0.2, 1.5)), Err(Error::Domain(_))));
    assert!(psi_complex_wishart_correlated(2, 3, &[1.0, 1.0], iv(0.0, 1.0)).is_err());
    assert!(psi_complex_wishart_correlated(2, 3, &[1.0], iv(0.0, 1.0)).is_err());
    assert!(psi_complex_wishart_spiked(3, 3, 1.0, 2.0, iv(0.0, 1.0)).is_err());
    assert!(psi_complex_wishart_spiked(1, 3, 2.0, 1.0, iv(0.0, 1.0)).is_err());
    assert!(psi_real_wishart(4, 3, iv(0.0, 1.0)).is_err());
}

#[test]
fn degenerate_interval_is_zero() {
    let r = psi_gue(3, iv(0.7, 0.7)).unwrap();
    assert_eq!(r.value, 0.0);
    assert!(r.converged);
    assert!(r.log_value.is_infinite());
    assert_eq!(r.complement().value, 1.0);
}

#[test]
fn precision_cap_reports_nonconvergence() {
    let spec = EnsembleSpec::RealWishart { p: 40, m: 400 };
    let opts = PsiOptions {
        initial_bits: Some(64),
        max_bits: 96,
    };
    let r = psi_with(&spec, iv(300.0, 500.0), opts).unwrap();
    assert!(!r.converged);
    assert!(r.precision_bits_used <= 96);
}

#[test]
fn agrees_with_monte_carlo() {
    let cases = [
        (EnsembleSpec::RealBeta { s: 3, m: 1.0, n: 1.0 }, 0.0, 0.8),
        (EnsembleSpec::ComplexWishartWhite { p: 3, m: 4 }, 0.5, 9.0),
        (EnsembleSpec::ComplexWishartCorrelated { m: 3, sigma: vec![2.0, 1.0] }, 0.2, 10.0),
        (EnsembleSpec::ComplexWishartSpiked { p: 2, m: 2, sigma1: 2.0, sigma2: 1.0 }, 0.0, 4.0),
        (EnsembleSpec::ComplexBeta { s: 2, m: 1.0, n: 1.0 }, 0.1, 0.9),
        (EnsembleSpec::Gue { n: 4 }, -3.0, 3.0),
        (EnsembleSpec::Goe { n: 3 }, -1.0, 2.5),
        (EnsembleSpec::RealWishart { p: 3, m: 6 }, 1.0, 15.0),
    ];
    for (seed, (spec, lo, hi)) in cases.into_iter().enumerate() {
        let exact = value(&spec, lo, hi);
        let mc = mc_psi(&spec, iv(lo, hi), 100_000, seed as u64 + 11).unwrap();
        assert!(
            (exact - mc.estimate).abs() <= 4.0 * mc.std_err,
            "{spec:?}: exact {exact} vs mc {} +- {}",
            mc.estimate,
            mc.std_err
        );
    }
}
