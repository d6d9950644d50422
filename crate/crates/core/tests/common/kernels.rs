//! Recursively built kernel entries against quadrature of their defining
//! integrals. Each check panics on the first mismatch.

use super::{beta_between, integrate, ln_gamma, p_lower};
use eigeninterval::ensembles::{EnsembleSpec, Interval};
use eigeninterval::exact_psi::{build_kernel, Kernel};

const TOL: f64 = 1e-9;

fn check(got: f64, want: f64, what: &str) {
    assert!(
        (got - want).abs() <= TOL * want.abs().max(1e-12),
        "{what}: recursion {got:e} vs quadrature {want:e}"
    );
}

fn skew(spec: &EnsembleSpec, lo: f64, hi: f64) -> eigeninterval::exact_psi::SkewKernel {
    match build_kernel(spec, Interval::new(lo, hi).unwrap(), 256).unwrap() {
        Kernel::Skew(k) => k,
        Kernel::Det(_) => panic!("expected a skew kernel"),
    }
}

fn det(spec: &EnsembleSpec, lo: f64, hi: f64) -> eigeninterval::exact_psi::DetKernel {
    match build_kernel(spec, Interval::new(lo, hi).unwrap(), 256).unwrap() {
        Kernel::Det(k) => k,
        Kernel::Skew(_) => panic!("expected a determinant kernel"),
    }
}

fn assert_skew_symmetric(k: &eigeninterval::exact_psi::SkewKernel) {
    for i in 0..k.dim() {
        assert!(k.get(i, i).is_zero());
        for j in 0..k.dim() {
            assert_eq!(k.get(j, i), -k.get(i, j));
        }
    }
}

pub fn real_wishart_entries() {
    for (p, m, a, b) in [(4usize, 6usize, 0.5, 7.0), (5, 5, 0.3, 4.0), (6, 9, 1.0, 12.0)] {
        let spec = EnsembleSpec::RealWishart { p, m };
        let k = skew(&spec, a, b);
        assert_skew_symmetric(&k);
        let alpha = (m as f64 - p as f64 - 1.0) / 2.0;
        let (a2, b2) = (a / 2.0, b / 2.0);
        for i in 1..=p {
            let ai = alpha + i as f64;
            let fint = p_lower(ai, b2) - p_lower(ai, a2);
            for j in i + 1..=p {
                let aj = alpha + j as f64;
                let lg = ln_gamma(ai);
                let f = |x: f64| ((ai - 1.0) * x.ln() - x - lg).exp() * p_lower(aj, x);
                let want = (p_lower(aj, b2) + p_lower(aj, a2)) * fint - 2.0 * integrate(&f, a2, b2, 1e-13);
                check(k.get(i - 1, j - 1).to_f64(), want, &format!("wishart p={p} m={m} a[{i},{j}]"));
            }
            if p % 2 == 1 {
                check(k.get(i - 1, p).to_f64(), fint, "wishart padding column");
            }
        }
    }
}

fn half_f(j: usize, y: f64) -> f64 {
    let s = if y < 0.0 && j % 2 == 1 { -1.0 } else { 1.0 };
    0.5 * s * p_lower(j as f64 / 2.0, y * y)
}

pub fn goe_entries() {
    for (n, a, b) in [(5usize, -1.2, 0.7), (6, -2.0, 1.5), (4, 0.2, 2.5)] {
        let spec = EnsembleSpec::Goe { n };
        let k = skew(&spec, a, b);
        assert_skew_symmetric(&k);
        let r = std::f64::consts::SQRT_2;
        let (a2, b2) = (a / r, b / r);
        for i in 1..=n {
            let fint = half_f(i, b2) - half_f(i, a2);
            for j in i + 1..=n {
                let lg = ln_gamma(i as f64 / 2.0);
                let f = |x: f64| x.powi(i as i32 - 1) * (-x * x - lg).exp() * half_f(j, x);
                let want = (half_f(j, b2) + half_f(j, a2)) * fint - 2.0 * integrate(&f, a2, b2, 1e-13);
                check(k.get(i - 1, j - 1).to_f64(), want, &format!("goe n={n} a[{i},{j}]"));
            }
            if n % 2 == 1 {
                check(k.get(i - 1, n).to_f64(), fint, "goe padding column");
            }
        }
    }
}

pub fn real_beta_entries() {
    for (s, m, nb, a, b) in [(4usize, 0.5, 1.0, 0.1, 0.8), (5, 1.0, 0.0, 0.05, 0.6), (3, 2.0, 1.5, 0.3, 0.95)] {
        let spec = EnsembleSpec::RealBeta { s, m, n: nb };
        let k = skew(&spec, a, b);
        assert_skew_symmetric(&k);
        let kk = |l: usize| (ln_gamma(m + nb + l as f64 + 1.0) - ln_gamma(m + l as f64)).exp();
        for i in 1..=s {
            let bint = beta_between(a, b, m + i as f64, nb + 1.0);
            for j in i + 1..=s {
                let mj = m + j as f64;
                let f = |x: f64| x.powf(m + i as f64 - 1.0) * (1.0 - x).powf(nb) * beta_between(0.0, x, mj, nb + 1.0);
                let outer = beta_between(0.0, a, mj, nb + 1.0) + beta_between(0.0, b, mj, nb + 1.0);
                let want = kk(i) * kk(j) * (outer * bint - 2.0 * integrate(&f, a, b, 1e-13));
                check(k.get(i - 1, j - 1).to_f64(), want, &format!("beta s={s} a[{i},{j}]"));
            }
            if s % 2 == 1 {
                check(k.get(i - 1, s).to_f64(), kk(i) * bint, "beta padding column");
            }
        }
    }
}

fn moment(c: f64, scale: f64, a: f64, b: f64) -> f64 {
    let f = |t: f64| t.powf(c) * (-t / scale).exp();
    integrate(&f, a, b, 1e-13)
}

pub fn complex_entries() {
    let (a, b) = (0.4, 6.0);
    let (p, m) = (4usize, 6usize);
    let k = det(&EnsembleSpec::ComplexWishartWhite { p, m }, a, b);
    for i in 1..=p {
        for j in 1..=p {
            let want = moment((m + p - i - j) as f64, 1.0, a, b);
            check(k.get(i - 1, j - 1).to_f64(), want, "white");
        }
    }
    let sigma = vec![3.0, 1.5, 1.0, 0.5];
    let k = det(&EnsembleSpec::ComplexWishartCorrelated { m, sigma: sigma.clone() }, a, b);
    for i in 1..=p {
        for j in 1..=p {
            let want = moment((m - i) as f64, sigma[j - 1], a, b);
            check(k.get(i - 1, j - 1).to_f64(), want, "correlated");
        }
    }
    let (s1, s2) = (2.5, 0.8);
    let k = det(&EnsembleSpec::ComplexWishartSpiked { p, m, sigma1: s1, sigma2: s2 }, a, b);
    for i in 1..=p {
        check(k.get(i - 1, 0).to_f64(), moment((m - i) as f64, s1, a, b), "spiked first column");
        for j in 2..=p {
            check(k.get(i - 1, j - 1).to_f64(), moment((m + p - i - j) as f64, s2, a, b), "spiked bulk");
        }
    }
    let (s, mb, nb) = (5usize, 1.5, 2.0);
    let k = det(&EnsembleSpec::ComplexBeta { s, m: mb, n: nb }, 0.1, 0.7);
    for i in 1..=s {
        for j in 1..=s {
            let c = mb + (i + j) as f64 - 2.0;
            let f = |x: f64| x.powf(c) * (1.0 - x).powf(nb);
            check(k.get(i - 1, j - 1).to_f64(), integrate(&f, 0.1, 0.7, 1e-13), "complex beta");
        }
    }
    let n = 6;
    let k = det(&EnsembleSpec::Gue { n }, -1.3, 2.2);
    for i in 1..=n {
        for j in 1..=n {
            let f = |t: f64| t.powi((i + j - 2) as i32) * (-t * t).exp();
            check(k.get(i - 1, j - 1).to_f64(), integrate(&f, -1.3, 2.2, 1e-13), "gue");
        }
    }
}
