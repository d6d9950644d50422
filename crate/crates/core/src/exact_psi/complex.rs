//! Determinant kernels for the complex ensembles.

use rug::Float;

use super::linalg::DetKernel;
use super::terms::{half_gamma_ladder, ln_gamma, prec, Limits};
use crate::error::Result;
use crate::hp_math::{gamma_interval_ladder, inc_beta, pi, LogScaled};

fn f(bits: u32, v: f64) -> Float {
    Float::with_val(bits, v)
}

/// `sum ln((k-1)!)` over the given `k`, i.e. `sum ln Gamma(k)`.
fn ln_factorials(ks: impl Iterator<Item = usize>, w: u32) -> Float {
    let mut s = Float::new(w);
    for k in ks {
        s += ln_gamma(&f(w, k as f64), w);
    }
    s
}

/// `sigma^c Gamma(c) P(c; lo/sigma, hi/sigma)` for `c = c0, c0+1, ...,
/// c0+count-1`; equals `int_lo^hi t^{c-1} e^{-t/sigma} dt`.
fn scaled_gamma_column(c0: usize, count: usize, sigma: f64, lim: &Limits, w: u32) -> Result<Vec<Float>> {
    let inv = Float::with_val(w, f(w, sigma).recip_ref());
    let sl = lim.scaled(&inv);
    let ps = gamma_interval_ladder(&f(w, c0 as f64), count, &sl.lo, &sl.hi, prec(w))?;
    let lns = Float::with_val(w, f(w, sigma).ln_ref());
    Ok(ps
        .into_iter()
        .enumerate()
        .map(|(t, p)| {
            let c = (c0 + t) as f64;
            let mut l = ln_gamma(&f(w, c), w);
            l += Float::with_val(w, &lns * c);
            p * l.exp()
        })
        .collect())
}

/// White complex Wishart: `a_ij = Gamma(c) P(c; lo, hi)`, `c = m+p-i-j+1`.
pub(crate) fn white_kernel(p: usize, m: usize, lim: &Limits, bits: u32) -> Result<DetKernel> {
    let w = bits + 32;
    // c ranges over m-p+1 ..= m+p-1
    let vals = scaled_gamma_column(m + 1 - p, 2 * p - 1, 1.0, lim, w)?;
    let log_k = -(ln_factorials((1..=p).map(|i| m - i + 1), w) + ln_factorials((1..=p).map(|i| p - i + 1), w));
    let mut k = DetKernel::zeros(p, bits, LogScaled::from_log(Float::with_val(w, log_k)));
    for i in 1..=p {
        for j in 1..=p {
            let c = m + p + 1 - i - j;
            k.set(i - 1, j - 1, &vals[c - (m + 1 - p)]);
        }
    }
    Ok(k)
}

/// Correlated complex Wishart with distinct covariance eigenvalues:
/// `a_ij = sigma_j^{m-i+1} Gamma(m-i+1) P(m-i+1; lo/sigma_j, hi/sigma_j)`.
pub(crate) fn correlated_kernel(m: usize, sigma: &[f64], lim: &Limits, bits: u32) -> Result<DetKernel> {
    let p = sigma.len();
    let w = bits + 32 + near_degenerate_bits(sigma);
    // 1/K = prod_{i<j} (s_i - s_j) prod s_i^{m-p+1} (m-i)!
    let mut l = Float::new(w);
    for i in 0..p {
        for j in i + 1..p {
            l += Float::with_val(w, f(w, sigma[i]) - f(w, sigma[j])).ln();
        }
        l += Float::with_val(w, f(w, sigma[i]).ln_ref()) * ((m + 1 - p) as f64);
    }
    l += ln_factorials((1..=p).map(|i| m - i + 1), w);
    let mut k = DetKernel::zeros(p, w, LogScaled::from_log(Float::with_val(w, -l)));
    for (j, &s) in sigma.iter().enumerate() {
        // rows i = 1..p use c = m - i + 1, i.e. c from m-p+1 (i = p) to m (i = 1)
        let col = scaled_gamma_column(m + 1 - p, p, s, lim, w)?;
        for i in 1..=p {
            k.set(i - 1, j, &col[m + 1 - i - (m + 1 - p)]);
        }
    }
    Ok(k)
}

/// Extra bits lost to cancellation between close covariance eigenvalues.
pub(crate) fn near_degenerate_bits(sigma: &[f64]) -> u32 {
    let s1 = sigma.iter().cloned().fold(0.0, f64::max);
    let mut bits = 0.0;
    for i in 0..sigma.len() {
        for j in i + 1..sigma.len() {
            let gap = (sigma[i] - sigma[j]).abs() / s1;
            if gap < 1.0 {
                bits += -gap.log2();
            }
        }
    }
    bits.ceil() as u32
}

/// Spiked complex Wishart: column 1 carries `sigma1`, the remaining `p-1`
/// columns `sigma2`.
pub(crate) fn spiked_kernel(p: usize, m: usize, sigma1: f64, sigma2: f64, lim: &Limits, bits: u32) -> Result<DetKernel> {
    let gap = (sigma1 - sigma2) / sigma1;
    let w = bits + 32 + if gap < 1.0 { (-(gap.log2()) * (p - 1) as f64).ceil() as u32 } else { 0 };
    // 1/K1 = s1^{m-p+1} s2^{(m-1)(p-1)} (s1-s2)^{p-1} prod_{i=1}^p (m-i)! prod_{l=2}^{p-2} l!
    let mut l = Float::with_val(w, f(w, sigma1).ln_ref()) * ((m + 1 - p) as f64);
    l += Float::with_val(w, f(w, sigma2).ln_ref()) * (((m - 1) * (p - 1)) as f64);
    l += Float::with_val(w, f(w, sigma1) - f(w, sigma2)).ln() * ((p - 1) as f64);
    l += ln_factorials((1..=p).map(|i| m - i + 1), w);
    if p >= 4 {
        l += ln_factorials((2..=p - 2).map(|ell| ell + 1), w);
    }
    let mut k = DetKernel::zeros(p, w, LogScaled::from_log(Float::with_val(w, -l)));
    let first = scaled_gamma_column(m + 1 - p, p, sigma1, lim, w)?;
    let rest = scaled_gamma_column(m + 1 - p, 2 * p - 1, sigma2, lim, w)?;
    for i in 1..=p {
        k.set(i - 1, 0, &first[m + 1 - i - (m + 1 - p)]);
        for j in 2..=p {
            let c = m + p + 1 - i - j;
            k.set(i - 1, j - 1, &rest[c - (m + 1 - p)]);
        }
    }
    Ok(k)
}

/// Complex multivariate beta: `a_ij = B(lo, hi; m+i+j-1, n+1)`.
pub(crate) fn complex_beta_kernel(s: usize, m: f64, n: f64, lim: &Limits, bits: u32) -> Result<DetKernel> {
    let w = bits + 32;
    let vals: Vec<Float> = (2..=2 * s)
        .map(|t| inc_beta(&lim.lo, &lim.hi, &f(w, m + t as f64 - 1.0), &f(w, n + 1.0), prec(w)))
        .collect::<Result<_>>()?;
    // K = prod Gamma(m+n+s+i) / (Gamma(i) Gamma(i+m) Gamma(i+n))
    let mut l = Float::new(w);
    for i in 1..=s {
        let fi = i as f64;
        l += ln_gamma(&f(w, m + n + s as f64 + fi), w);
        l -= ln_gamma(&f(w, fi), w);
        l -= ln_gamma(&f(w, fi + m), w);
        l -= ln_gamma(&f(w, fi + n), w);
    }
    let mut k = DetKernel::zeros(s, bits, LogScaled::from_log(l));
    for i in 1..=s {
        for j in 1..=s {
            k.set(i - 1, j - 1, &vals[i + j - 2]);
        }
    }
    Ok(k)
}

/// GUE: `a_ij = int_lo^hi t^{i+j-2} e^{-t^2} dt`.
pub(crate) fn gue_kernel(n: usize, lim: &Limits, bits: u32) -> Result<DetKernel> {
    let w = bits + 32;
    let sh = half_gamma_ladder(2 * n - 1, lim, w)?;
    let vals: Vec<Float> = sh
        .into_iter()
        .enumerate()
        .map(|(t, v)| {
            let k = (t + 1) as f64;
            v * Float::with_val(w, f(w, k / 2.0).gamma_ref())
        })
        .collect();
    // K = 2^{n(n-1)/2} / (pi^{n/2} prod Gamma(i))
    let nf = n as f64;
    let ln2 = Float::with_val(w, rug::float::Constant::Log2);
    let mut l = Float::with_val(w, &ln2 * (nf * (nf - 1.0) / 2.0));
    l -= Float::with_val(w, pi(w).ln_ref()) * (nf / 2.0);
    l -= ln_factorials(1..=n, w);
    let mut k = DetKernel::zeros(n, bits, LogScaled::from_log(l));
    for i in 1..=n {
        for j in 1..=n {
            k.set(i - 1, j - 1, &vals[i + j - 2]);
        }
    }
    Ok(k)
}
