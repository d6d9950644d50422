//! Log-gamma and the regularized incomplete gamma family.
//!
//! `P(a,x)` uses the power series below `x = a + 1` and the Legendre
//! continued fraction for `Q(a,x)` above it; the complementary value is
//! obtained by subtraction only where that subtraction is benign.

use rug::Float;

use super::{magnitude_bits, BigReal, Precision};
use crate::error::{domain, Error, Result};

/// `P(a,x)` and `Q(a,x) = 1 - P(a,x)`, each to full relative accuracy.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaPair {
    pub p: BigReal,
    pub q: BigReal,
}

impl GammaPair {
    fn round(self, bits: u32) -> GammaPair {
        GammaPair {
            p: Float::with_val(bits, &self.p),
            q: Float::with_val(bits, &self.q),
        }
    }
}

fn check_shape(a: &BigReal) -> Result<()> {
    if a.is_nan() || a.cmp0() != Some(std::cmp::Ordering::Greater) || a.is_infinite() {
        return domain(format!("gamma shape must be finite and positive, got {a}"));
    }
    Ok(())
}

fn check_arg(x: &BigReal) -> Result<()> {
    if x.is_nan() || x.is_sign_negative() && !x.is_zero() {
        return domain(format!("incomplete gamma argument must be >= 0, got {x}"));
    }
    Ok(())
}

/// Guard bits covering the loss in `exp(a ln x - x - ln Gamma(a))`.
fn prefactor_guard(a: &BigReal, x: &BigReal) -> u32 {
    let af = a.to_f64().abs();
    let xf = if x.is_infinite() { 0.0 } else { x.to_f64().abs() };
    let e = af * ((xf + 1.0).ln() + (af + 2.0).ln() + 1.0) + xf;
    40 + magnitude_bits(e)
}

/// `ln Gamma(a)` for `a > 0`.
pub fn log_gamma(a: &BigReal, prec: Precision) -> Result<BigReal> {
    check_shape(a)?;
    let w = prec.guarded(16);
    let v = Float::with_val(w, a).ln_gamma();
    Ok(Float::with_val(prec.bits(), &v))
}

/// True when `small` is below `2^-bits` relative to `big`.
fn negligible(small: &Float, big: &Float, bits: u32) -> bool {
    if small.is_zero() {
        return true;
    }
    match (small.get_exp(), big.get_exp()) {
        (Some(s), Some(b)) => (s as i64) < (b as i64) - bits as i64,
        _ => false,
    }
}

fn series_p(a: &Float, x: &Float, w: u32) -> Result<Float> {
    let lg = Float::with_val(w, a + 1u32).ln_gamma();
    let mut lnpref = Float::with_val(w, x.ln_ref());
    lnpref *= a;
    lnpref -= x;
    lnpref -= &lg;
    let mut sum = Float::with_val(w, 1u32);
    let mut term = Float::with_val(w, 1u32);
    let mut denom = Float::with_val(w, a);
    let cap = 64 * w as usize + 16 * a.to_f64().sqrt() as usize + 1000;
    let mut converged = false;
    for _ in 0..cap {
        denom += 1u32;
        term *= x;
        term /= &denom;
        sum += &term;
        if negligible(&term, &sum, w) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence(format!("P({a},{x}) series")));
    }
    Ok(lnpref.exp() * sum)
}

fn continued_fraction_q(a: &Float, x: &Float, w: u32) -> Result<Float> {
    let lg = Float::with_val(w, a).ln_gamma();
    let mut lnpref = Float::with_val(w, x.ln_ref());
    lnpref *= a;
    lnpref -= x;
    lnpref -= &lg;

    let tiny = Float::with_val(w, Float::i_exp(1, -(2 * w as i32 + 64)));
    let mut b = Float::with_val(w, x + 1u32);
    b -= a;
    let mut c = Float::with_val(w, 1u32) / &tiny;
    let mut d = Float::with_val(w, 1u32) / &b;
    let mut h = d.clone();
    let mut an;
    let mut del;
    let cap = 64 * w as usize + 16 * a.to_f64().sqrt() as usize + 1000;
    let mut converged = false;
    for i in 1..cap as u64 {
        // an = -i (i - a)
        an = Float::with_val(w, i) - a;
        an *= i;
        an = -an;
        b += 2u32;
        d *= &an;
        d += &b;
        if d.is_zero() {
            d.clone_from(&tiny);
        }
        let mut t = Float::with_val(w, &an / &c);
        t += &b;
        c = t;
        if c.is_zero() {
            c.clone_from(&tiny);
        }
        d.recip_mut();
        del = Float::with_val(w, &d * &c);
        h *= &del;
        del -= 1u32;
        if del.is_zero() || negligible(&del, &Float::with_val(w, 1u32), w) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence(format!("Q({a},{x}) continued fraction")));
    }
    Ok(lnpref.exp() * h)
}

/// `(P, Q)` at working precision `w`, no rounding to a caller precision.
fn pair_at(a: &Float, x: &Float, w: u32) -> Result<GammaPair> {
    if x.is_zero() {
        return Ok(GammaPair {
            p: Float::new(w),
            q: Float::with_val(w, 1u32),
        });
    }
    if x.is_infinite() {
        return Ok(GammaPair {
            p: Float::with_val(w, 1u32),
            q: Float::new(w),
        });
    }
    let threshold = Float::with_val(w, a + 1u32);
    if *x < threshold {
        let p = series_p(a, x, w)?;
        let q = Float::with_val(w, 1u32 - &p);
        Ok(GammaPair { p, q })
    } else {
        let q = continued_fraction_q(a, x, w)?;
        let p = Float::with_val(w, 1u32 - &q);
        Ok(GammaPair { p, q })
    }
}

/// `P(a,x)` and `Q(a,x)` together; `x` may be `+inf`.
pub fn reg_gamma_pair(a: &BigReal, x: &BigReal, prec: Precision) -> Result<GammaPair> {
    check_shape(a)?;
    check_arg(x)?;
    let w = prec.guarded(prefactor_guard(a, x));
    Ok(pair_at(a, x, w)?.round(prec.bits()))
}

/// Regularized lower incomplete gamma `P(a,x)`.
pub fn reg_lower_gamma(a: &BigReal, x: &BigReal, prec: Precision) -> Result<BigReal> {
    Ok(reg_gamma_pair(a, x, prec)?.p)
}

/// Regularized upper incomplete gamma `Q(a,x) = 1 - P(a,x)`.
pub fn reg_upper_gamma(a: &BigReal, x: &BigReal, prec: Precision) -> Result<BigReal> {
    Ok(reg_gamma_pair(a, x, prec)?.q)
}

/// `x^a e^{-x} / Gamma(a+1)`, the step of the shift recursion. Zero at
/// `x = 0` and `x = +inf`.
pub fn gamma_term(a: &BigReal, x: &BigReal, prec: Precision) -> Result<BigReal> {
    check_shape(a)?;
    check_arg(x)?;
    let bits = prec.bits();
    if x.is_zero() || x.is_infinite() {
        return Ok(Float::new(bits));
    }
    let w = prec.guarded(prefactor_guard(a, x));
    Ok(Float::with_val(bits, &term_at(a, x, w)))
}

fn term_at(a: &Float, x: &Float, w: u32) -> Float {
    if x.is_zero() || x.is_infinite() {
        return Float::new(w);
    }
    let lg = Float::with_val(w, a + 1u32).ln_gamma();
    let mut l = Float::with_val(w, x.ln_ref());
    l *= a;
    l -= x;
    l -= &lg;
    l.exp()
}

/// Difference of two nonnegative quantities, choosing whichever
/// representation (lower or upper tail) has the smaller magnitudes.
fn tail_difference(px: &Float, qx: &Float, py: &Float, qy: &Float, w: u32) -> Float {
    if py <= qx {
        Float::with_val(w, py - px)
    } else {
        Float::with_val(w, qx - qy)
    }
}

/// Bits cancelled when forming `diff` out of terms of size `scale`.
fn lost_bits(diff: &Float, scale: &Float) -> u32 {
    match (diff.get_exp(), scale.get_exp()) {
        (Some(d), Some(s)) if s > d => (s - d) as u32,
        (None, Some(_)) if diff.is_zero() => 0,
        _ => 0,
    }
}

/// `P(a;x,y) = P(a,y) - P(a,x)`, `0 <= x <= y`, `y` may be `+inf`.
///
/// Narrow intervals are integrated term by term from the Taylor expansion of
/// `t^{a-1} e^{-t}` around `x`; otherwise the difference is taken in the tail
/// where it is smaller and recomputed with more bits if it still cancels.
pub fn reg_gamma_interval(
    a: &BigReal,
    x: &BigReal,
    y: &BigReal,
    prec: Precision,
) -> Result<BigReal> {
    check_shape(a)?;
    check_arg(x)?;
    check_arg(y)?;
    if y < x {
        return domain(format!("interval upper limit {y} is below lower limit {x}"));
    }
    let bits = prec.bits();
    if x == y {
        return Ok(Float::new(bits));
    }
    let w = prec.guarded(prefactor_guard(a, y));
    if !y.is_infinite() && !x.is_zero() {
        let h = Float::with_val(w, y - x);
        let hf = h.to_f64();
        let xf = x.to_f64();
        let af = a.to_f64();
        if hf / xf.max(1.0) < 1e-3 && hf < 0.5 * xf && (af + xf) * hf / xf < 0.5 {
            if let Some(v) = narrow_interval(a, x, &h, w) {
                return Ok(Float::with_val(bits, &v));
            }
        }
    }
    let mut wk = w;
    for _ in 0..4 {
        let px = pair_at(a, x, wk)?;
        let py = pair_at(a, y, wk)?;
        let d = tail_difference(&px.p, &px.q, &py.p, &py.q, wk);
        let scale = if py.p <= px.q { py.p.clone() } else { px.q.clone() };
        let lost = lost_bits(&d, &scale);
        if lost + 16 < wk - bits || d.is_zero() {
            return Ok(Float::with_val(bits, &d));
        }
        wk = w + lost + 32;
    }
    Err(Error::NoConvergence(format!(
        "P({a};{x},{y}) cancels beyond available precision"
    )))
}

/// `(1/Gamma(a)) int_x^{x+h} t^{a-1} e^{-t} dt` by Taylor integration.
fn narrow_interval(a: &Float, x: &Float, h: &Float, w: u32) -> Option<Float> {
    // g(x+u) = sum c_k u^k with (x+u) g' = (a-1-x-u) g; e_k = c_k h^k.
    let lg = Float::with_val(w, a.ln_gamma_ref());
    let am1 = Float::with_val(w, a - 1u32);
    let mut l = Float::with_val(w, x.ln_ref());
    l *= &am1;
    l -= x;
    l -= &lg;
    let mut e_prev = Float::new(w);
    let mut e = l.exp();
    let mut sum = e.clone();
    let ratio = Float::with_val(w, h / x);
    let base = Float::with_val(w, &am1 - x);
    let mut quiet = 0;
    for k in 0..(4 * w as u64 + 100) {
        let mut coef = Float::with_val(w, &base - k);
        coef *= &e;
        let mut back = Float::with_val(w, &e_prev * h);
        back = coef - back;
        back *= &ratio;
        back /= k + 1;
        e_prev = std::mem::replace(&mut e, back);
        let contrib = Float::with_val(w, &e / (k + 2));
        sum += &contrib;
        if negligible(&contrib, &sum, w) {
            quiet += 1;
            if quiet >= 2 {
                return Some(sum * h);
            }
        } else {
            quiet = 0;
        }
    }
    None
}

/// `P(a+n, x)` from `P(a, x)` through
/// `P(a+n,x) = P(a,x) - e^{-x} sum_{k<n} x^{a+k} / Gamma(a+k+1)`.
///
/// The sum is formed at the precision of `p_ax` (or `prec`, whichever is
/// larger) plus guard bits; the subtraction cancels when `P(a+n,x)` is much
/// smaller than `P(a,x)`, so callers wanting full accuracy in that regime
/// should supply `p_ax` with correspondingly more bits.
pub fn gamma_shift(
    a: &BigReal,
    n: u32,
    x: &BigReal,
    p_ax: &BigReal,
    prec: Precision,
) -> Result<BigReal> {
    check_shape(a)?;
    check_arg(x)?;
    let bits = prec.bits();
    if n == 0 {
        return Ok(Float::with_val(bits, p_ax));
    }
    let w = bits.max(p_ax.prec()) + prefactor_guard(a, x) + magnitude_bits(n as f64);
    let mut term = term_at(a, x, w);
    let mut sum = Float::new(w);
    let mut shape = Float::with_val(w, a);
    for _ in 0..n {
        sum += &term;
        shape += 1u32;
        term *= x;
        term /= &shape;
    }
    Ok(Float::with_val(bits, Float::with_val(w, p_ax) - sum))
}

/// `(P, Q)` at `a0, a0+1, ..., a0+count-1` for one argument `x`.
///
/// `P` is evaluated directly at the top shape and carried downward,
/// `Q` directly at the bottom shape and carried upward; both directions add
/// nonnegative terms, so no step cancels.
pub fn gamma_ladder(
    a0: &BigReal,
    count: usize,
    x: &BigReal,
    prec: Precision,
) -> Result<Vec<GammaPair>> {
    check_shape(a0)?;
    check_arg(x)?;
    if count == 0 {
        return Ok(Vec::new());
    }
    let bits = prec.bits();
    if x.is_zero() || x.is_infinite() {
        let pair = pair_at(a0, x, bits)?;
        return Ok(vec![pair; count]);
    }
    let top = Float::with_val(a0.prec().max(64), a0 + (count as u32 - 1));
    let w = prec.guarded(prefactor_guard(&top, x) + magnitude_bits(count as f64));
    let a_lo = Float::with_val(w, a0);
    let a_hi = Float::with_val(w, &top);

    // terms[k] = x^(a0+k) e^-x / Gamma(a0+k+1)
    let mut terms = Vec::with_capacity(count);
    let mut t = term_at(&a_lo, x, w);
    let mut shape = a_lo.clone();
    for _ in 0..count.saturating_sub(1) {
        terms.push(t.clone());
        shape += 1u32;
        t *= x;
        t /= &shape;
    }

    let p_top = pair_at(&a_hi, x, w)?.p;
    let q_bottom = pair_at(&a_lo, x, w)?.q;

    let mut ps = vec![Float::new(w); count];
    ps[count - 1] = p_top;
    for k in (0..count - 1).rev() {
        ps[k] = Float::with_val(w, &ps[k + 1] + &terms[k]);
    }
    let mut out = Vec::with_capacity(count);
    let mut q = q_bottom;
    for (k, p) in ps.into_iter().enumerate() {
        if k > 0 {
            q += &terms[k - 1];
        }
        out.push(GammaPair {
            p: Float::with_val(bits, &p),
            q: Float::with_val(bits, &q),
        });
    }
    Ok(out)
}

/// `P(a0+k; x, y)` for `k = 0..count`.
pub fn gamma_interval_ladder(
    a0: &BigReal,
    count: usize,
    x: &BigReal,
    y: &BigReal,
    prec: Precision,
) -> Result<Vec<BigReal>> {
    if y < x {
        return domain(format!("interval upper limit {y} is below lower limit {x}"));
    }
    let bits = prec.bits();
    if x == y {
        return Ok(vec![Float::new(bits); count]);
    }
    let w = prec.guarded(24);
    let wp = Precision::new(w)?;
    let lx = gamma_ladder(a0, count, x, wp)?;
    let ly = gamma_ladder(a0, count, y, wp)?;
    Ok(lx
        .iter()
        .zip(&ly)
        .map(|(gx, gy)| {
            let d = tail_difference(&gx.p, &gx.q, &gy.p, &gy.q, w);
            Float::with_val(bits, &d)
        })
        .collect())
}

#[cfg(test)]
fn pos_infinity(bits: u32) -> Float {
    Float::with_val(bits, rug::float::Special::Infinity)
}
