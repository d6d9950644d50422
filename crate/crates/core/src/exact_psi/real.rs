//! Skew-symmetric kernels for the real ensembles.
//!
//! Every kernel row is filled by a first-order recursion in the column
//! index, so no entry needs a numerical integral. Odd dimensions get one
//! extra row and column of one-dimensional integrals.

use rug::{Assign, Float};

use super::linalg::SkewKernel;
use super::terms::{half_gamma_ladder, ln_gamma, prec, Limits};
use crate::error::Result;
use crate::hp_math::{gamma_interval_ladder, gamma_term, inc_beta, pi, LogScaled};

fn padded(p: usize) -> usize {
    p + p % 2
}

fn f(bits: u32, v: f64) -> Float {
    Float::with_val(bits, v)
}

/// Real Wishart `p x p` with `m` degrees of freedom, eigenvalues in `lim`
/// (`lo >= 0`, `hi` possibly infinite).
pub(crate) fn real_wishart_kernel(p: usize, m: usize, lim: &Limits, bits: u32) -> Result<SkewKernel> {
    let w = bits + 32;
    let pw = prec(w);
    let alpha = f(w, (m as f64 - p as f64 - 1.0) / 2.0);
    let half = lim.scaled(&f(w, 0.5));

    // fint[i-1] = P(alpha + i; lo/2, hi/2)
    let fint = gamma_interval_ladder(&Float::with_val(w, &alpha + 1u32), p, &half.lo, &half.hi, pw)?;
    // pp[k-2] = P(2 alpha + k; lo, hi)
    let two_alpha = Float::with_val(w, &alpha * 2u32);
    let pp = gamma_interval_ladder(&Float::with_val(w, &two_alpha + 2u32), 2 * p, &lim.lo, &lim.hi, pw)?;

    // tsum[j-1] = t(alpha_j, lo/2) + t(alpha_j, hi/2), t(c, x) = x^c e^-x / Gamma(c+1)
    let mut tsum = Vec::with_capacity(p);
    {
        let a1 = Float::with_val(w, &alpha + 1u32);
        let mut tl = gamma_term(&a1, &half.lo, pw)?;
        let mut th = gamma_term(&a1, &half.hi, pw)?;
        let mut shape = a1;
        for _ in 0..p {
            tsum.push(Float::with_val(w, &tl + &th));
            shape += 1u32;
            tl *= &half.lo;
            tl /= &shape;
            if th.is_zero() {
                continue;
            }
            th *= &half.hi;
            th /= &shape;
        }
    }

    let dim = padded(p);
    let mut kernel = SkewKernel::zeros(dim, bits, real_wishart_log_const(p, m, w))?;
    let ln2 = Float::with_val(w, rug::float::Constant::Log2);
    let mut acc = Float::new(w);
    let mut coef = Float::new(w);
    let mut tmp = Float::new(w);
    for i in 1..=p {
        let ai = Float::with_val(w, &alpha + i as u32);
        // C_{i,i} = Gamma(2 a_i) 2^{1 - 2 a_i} / (Gamma(a_i + 1) Gamma(a_i))
        let two_ai = Float::with_val(w, &ai * 2u32);
        let mut lc = ln_gamma(&two_ai, w);
        lc += Float::with_val(w, 1u32 - &two_ai) * &ln2;
        lc -= ln_gamma(&Float::with_val(w, &ai + 1u32), w);
        lc -= ln_gamma(&ai, w);
        coef.assign(lc.exp_ref());
        acc.assign(0u32);
        for j in i..p {
            // a_{i,j+1} = a_{i,j} + C_{i,j} P(2a+i+j) - (t(a_j, lo/2) + t(a_j, hi/2)) Fint_i
            tmp.assign(&coef * &pp[i + j - 2]);
            acc += &tmp;
            tmp.assign(&tsum[j - 1] * &fint[i - 1]);
            acc -= &tmp;
            kernel.set(i - 1, j, &acc);
            // C_{i,j+1} = C_{i,j} (2a + i + j) / (2 (a_j + 1))
            tmp.assign(&two_alpha + (i + j) as u32);
            coef *= &tmp;
            tmp.assign(&alpha + (j + 1) as u32);
            tmp *= 2u32;
            coef /= &tmp;
        }
        if p % 2 == 1 {
            kernel.set(i - 1, p, &fint[i - 1]);
        }
    }
    Ok(kernel)
}

/// `ln K'` for the real Wishart kernel.
fn real_wishart_log_const(p: usize, m: usize, w: u32) -> LogScaled {
    let pf = p as f64;
    let mf = m as f64;
    let alpha = (mf - pf - 1.0) / 2.0;
    let lnpi = Float::with_val(w, pi(w).ln_ref());
    let ln2 = Float::with_val(w, rug::float::Constant::Log2);
    let ln_multi_gamma = |x: f64| {
        let mut s = Float::with_val(w, &lnpi * (pf * (pf - 1.0) / 4.0));
        for i in 1..=p {
            s += ln_gamma(&f(w, x - (i as f64 - 1.0) / 2.0), w);
        }
        s
    };
    let mut l = Float::with_val(w, &lnpi * (pf * pf / 2.0));
    l -= Float::with_val(w, &ln2 * (pf * mf / 2.0));
    l -= ln_multi_gamma(mf / 2.0);
    l -= ln_multi_gamma(pf / 2.0);
    l += Float::with_val(w, &ln2 * (alpha * pf + pf * (pf + 1.0) / 2.0));
    for ell in 1..=p {
        l += ln_gamma(&f(w, alpha + ell as f64), w);
    }
    LogScaled::from_log(l)
}

/// `x^j e^{-x^2} / (2 Gamma(j/2 + 1))` for `j = 0..=jmax`; zero at
/// infinite `x`.
fn goe_boundary_terms(jmax: usize, x: &Float, w: u32) -> Vec<Float> {
    if x.is_infinite() {
        return vec![Float::new(w); jmax + 1];
    }
    let mut out = Vec::with_capacity(jmax + 1);
    let e = Float::with_val(w, -Float::with_val(w, x.square_ref())).exp();
    // even j: x^j / Gamma(j/2+1) built by ratio; odd j likewise from j = 1.
    let mut even = Float::with_val(w, &e / 2u32); // j = 0, Gamma(1) = 1
    let g32 = Float::with_val(w, 1.5).gamma();
    let mut odd = Float::with_val(w, &e * x) / 2u32 / &g32; // j = 1
    let x2 = Float::with_val(w, x.square_ref());
    for j in 0..=jmax {
        if j % 2 == 0 {
            out.push(even.clone());
            // Gamma(j/2 + 2) = (j/2 + 1) Gamma(j/2 + 1)
            even *= &x2;
            even /= (j / 2 + 1) as u32;
        } else {
            out.push(odd.clone());
            odd *= &x2;
            odd /= Float::with_val(w, (j as f64 + 2.0) / 2.0);
        }
    }
    out
}

/// `D_1(i, j) = Gamma((i+j)/2) 2^{-(i+j)/2} / (Gamma(i/2) Gamma(j/2 + 1))`.
fn goe_d1(i: usize, j: usize, w: u32) -> Float {
    let s = (i + j) as f64 / 2.0;
    let ln2 = Float::with_val(w, rug::float::Constant::Log2);
    let mut l = ln_gamma(&f(w, s), w);
    l -= Float::with_val(w, &ln2 * s);
    l -= ln_gamma(&f(w, i as f64 / 2.0), w);
    l -= ln_gamma(&f(w, j as f64 / 2.0 + 1.0), w);
    l.exp()
}

/// GOE `n x n`, eigenvalues in `lim` (either end may be infinite).
pub(crate) fn goe_kernel(n: usize, lim: &Limits, bits: u32) -> Result<SkewKernel> {
    let w = bits + 32;
    let inv_sqrt2 = Float::with_val(w, 0.5).sqrt();
    let scaled = lim.scaled(&inv_sqrt2);
    // sh_s[k-1] = F_k(hi/sqrt2) - F_k(lo/sqrt2); sh_u[k-1] = F_k(hi) - F_k(lo)
    let sh_s = half_gamma_ladder(n, &scaled, w)?;
    let sh_u = half_gamma_ladder(2 * n, lim, w)?;
    let el = goe_boundary_terms(n, &scaled.lo, w);
    let eh = goe_boundary_terms(n, &scaled.hi, w);

    let dim = padded(n);
    let mut kernel = SkewKernel::zeros(dim, bits, goe_log_const(n, w))?;
    let mut tmp = Float::new(w);
    // Delta(i,j) = D1(i,j) sh_u[i+j] - (E(j, lo') + E(j, hi')) sh_s[i]
    let delta = |i: usize, j: usize, d1: &Float, tmp: &mut Float| -> Float {
        let mut d = Float::with_val(w, d1 * &sh_u[i + j - 1]);
        tmp.assign(&el[j] + &eh[j]);
        *tmp *= &sh_s[i - 1];
        d -= &*tmp;
        d
    };
    // prev_sup holds a_{i-1,i}, which seeds the odd chain of row i.
    let mut prev_sup = Float::new(w);
    for i in 1..=n {
        // odd chain: start from a_{i,i-1} = -a_{i-1,i} (zero for the first row)
        let mut acc = Float::with_val(w, -&prev_sup);
        let mut d1 = goe_d1(i, i - 1, w);
        let mut j = i - 1;
        while j + 2 <= n {
            acc += delta(i, j, &d1, &mut tmp);
            kernel.set(i - 1, j + 1, &acc);
            if j + 2 == i + 1 {
                prev_sup.assign(&acc);
            }
            // D1(i, j+2) = D1(i, j) (i + j) / (2 (j + 2))
            d1 *= (i + j) as u32;
            d1 /= (2 * (j + 2)) as u32;
            j += 2;
        }
        // even chain: start from a_{i,i} = 0
        let mut acc = Float::new(w);
        let mut d1 = goe_d1(i, i, w);
        let mut j = i;
        while j + 2 <= n {
            acc += delta(i, j, &d1, &mut tmp);
            kernel.set(i - 1, j + 1, &acc);
            d1 *= (i + j) as u32;
            d1 /= (2 * (j + 2)) as u32;
            j += 2;
        }
        if n % 2 == 1 {
            kernel.set(i - 1, n, &sh_s[i - 1]);
        }
    }
    Ok(kernel)
}

/// `ln K'` for the GOE kernel: `(n(n+1)/4 - n/2) ln 2`.
fn goe_log_const(n: usize, w: u32) -> LogScaled {
    let nf = n as f64;
    let ln2 = Float::with_val(w, rug::float::Constant::Log2);
    LogScaled::from_log(Float::with_val(w, &ln2 * (nf * (nf + 1.0) / 4.0 - nf / 2.0)))
}

/// `B(lo, hi; a, b)` with `a`, `b` given as doubles.
fn beta_int(lim: &Limits, a: f64, b: f64, w: u32) -> Result<Float> {
    inc_beta(&lim.lo, &lim.hi, &f(w, a), &f(w, b), prec(w))
}

/// Real multivariate beta with `s` eigenvalues and density exponents
/// `m`, `n` (`x^m (1-x)^n`), eigenvalues in `lim` within `[0, 1]`.
pub(crate) fn real_beta_kernel(s: usize, m: f64, n: f64, lim: &Limits, bits: u32) -> Result<SkewKernel> {
    let w = bits + 32;
    // k[l-1] = Gamma(m+n+l+1) / Gamma(m+l)
    let mut k = Vec::with_capacity(s + 1);
    let mut kl = Float::with_val(w, ln_gamma(&f(w, m + n + 2.0), w) - ln_gamma(&f(w, m + 1.0), w)).exp();
    for l in 1..=s + 1 {
        k.push(kl.clone());
        kl *= f(w, m + n + l as f64 + 1.0);
        kl /= f(w, m + l as f64);
    }
    let bint: Vec<Float> = (1..=s)
        .map(|i| beta_int(lim, m + i as f64, n + 1.0, w))
        .collect::<Result<_>>()?;
    // bb[t-2] = B(lo, hi; 2m + t, 2n + 2)
    let bb: Vec<Float> = (2..=2 * s)
        .map(|t| beta_int(lim, 2.0 * m + t as f64, 2.0 * n + 2.0, w))
        .collect::<Result<_>>()?;
    // g_l(x) = x^{m+l-1} (1-x)^{n+1} k_l / (m+n+l), zero at both ends of [0,1]
    let g = |l: usize, x: &Float| -> Float {
        if x.is_zero() || *x == 1 {
            return Float::new(w);
        }
        let mut v = Float::with_val(w, x.ln_ref()) * (m + l as f64 - 1.0);
        v += Float::with_val(w, Float::with_val(w, 1u32 - x).ln_ref()) * (n + 1.0);
        let mut v = v.exp();
        v *= &k[l - 1];
        v /= m + n + l as f64;
        v
    };

    let dim = padded(s);
    let log_const = real_beta_log_const(s, m, n, &k[..s], w);
    let mut kernel = SkewKernel::zeros(dim, bits, log_const)?;
    let mut acc = Float::new(w);
    for i in 1..=s {
        acc.assign(0u32);
        for j in i..s {
            // a_{i,j+1} = a_{i,j} - k_i [g_{j+1}(lo) + g_{j+1}(hi)] Bint_i
            //           + 2 k_i k_{j+1} / (m+n+j+1) B(lo,hi; 2m+i+j, 2n+2)
            let mut bnd = g(j + 1, &lim.lo);
            bnd += g(j + 1, &lim.hi);
            bnd *= &k[i - 1];
            bnd *= &bint[i - 1];
            acc -= &bnd;
            let mut inner = Float::with_val(w, &k[i - 1] * &k[j]);
            inner *= 2u32;
            inner /= m + n + j as f64 + 1.0;
            inner *= &bb[i + j - 2];
            acc += &inner;
            kernel.set(i - 1, j, &acc);
        }
        if s % 2 == 1 {
            kernel.set(i - 1, s, &Float::with_val(w, &k[i - 1] * &bint[i - 1]));
        }
    }
    Ok(kernel)
}

/// `ln K'_MB = ln K_MB - sum ln k_l`.
fn real_beta_log_const(s: usize, m: f64, n: f64, k: &[Float], w: u32) -> LogScaled {
    let sf = s as f64;
    let lnpi = Float::with_val(w, pi(w).ln_ref());
    let mut l = Float::with_val(w, &lnpi * (sf / 2.0));
    for i in 1..=s {
        let fi = i as f64;
        l += ln_gamma(&f(w, (fi + 2.0 * m + 2.0 * n + sf + 2.0) / 2.0), w);
        l -= ln_gamma(&f(w, fi / 2.0), w);
        l -= ln_gamma(&f(w, (fi + 2.0 * m + 1.0) / 2.0), w);
        l -= ln_gamma(&f(w, (fi + 2.0 * n + 1.0) / 2.0), w);
    }
    for kl in k {
        l -= Float::with_val(w, kl.ln_ref());
    }
    LogScaled::from_log(l)
}

