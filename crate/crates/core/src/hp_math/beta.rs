//! Unregularized incomplete beta `B(x,y;a,b) = int_x^y t^{a-1} (1-t)^{b-1} dt`.

use std::cmp::Ordering;

use rug::Float;

use super::{magnitude_bits, BigReal, Precision};
use crate::error::{domain, Error, Result};

fn check_params(a: &BigReal, b: &BigReal) -> Result<()> {
    for (name, v) in [("a", a), ("b", b)] {
        if v.is_nan() || v.is_infinite() || v.cmp0() != Some(Ordering::Greater) {
            return domain(format!("beta parameter {name} must be positive, got {v}"));
        }
    }
    Ok(())
}

fn check_unit(x: &BigReal) -> Result<()> {
    if x.is_nan() || *x < 0 || *x > 1 {
        return domain(format!("beta limit must lie in [0,1], got {x}"));
    }
    Ok(())
}

fn guard(a: &BigReal, b: &BigReal) -> u32 {
    let s = a.to_f64() + b.to_f64();
    40 + magnitude_bits(s * (s + 2.0).ln())
}

/// `ln B(a,b)`.
pub fn log_beta(a: &BigReal, b: &BigReal, prec: Precision) -> Result<BigReal> {
    check_params(a, b)?;
    let w = prec.guarded(guard(a, b));
    Ok(Float::with_val(prec.bits(), &log_beta_at(a, b, w)))
}

fn log_beta_at(a: &Float, b: &Float, w: u32) -> Float {
    let la = Float::with_val(w, a.ln_gamma_ref());
    let lb = Float::with_val(w, b.ln_gamma_ref());
    let lab = Float::with_val(w, Float::with_val(w, a + b).ln_gamma_ref());
    la + lb - lab
}

fn negligible(small: &Float, bits: u32) -> bool {
    small.is_zero() || small.get_exp().is_some_and(|e| (e as i64) < -(bits as i64))
}

/// Continued fraction for `B(0,x;a,b)`, valid for `x < (a+1)/(a+b+2)`.
fn lower_by_fraction(x: &Float, a: &Float, b: &Float, w: u32) -> Result<Float> {
    let one_minus = Float::with_val(w, 1u32 - x);
    let mut front = Float::with_val(w, x.ln_ref()) * a;
    front += Float::with_val(w, one_minus.ln_ref()) * b;
    let front = front.exp();

    let tiny = Float::with_val(w, Float::i_exp(1, -(2 * w as i32 + 64)));
    let qab = Float::with_val(w, a + b);
    let qap = Float::with_val(w, a + 1u32);
    let qam = Float::with_val(w, a - 1u32);
    let mut c = Float::with_val(w, 1u32);
    let mut d = Float::with_val(w, &qab * x);
    d /= &qap;
    d = 1u32 - d;
    if d.is_zero() {
        d.clone_from(&tiny);
    }
    d.recip_mut();
    let mut h = d.clone();
    let cap = 64 * w as u64 + 16 * (a.to_f64() + b.to_f64()).sqrt() as u64 + 1000;
    for m in 1..cap {
        let m2 = 2 * m;
        // even step: m (b - m) x / ((a - 1 + 2m)(a + 2m))
        let mut aa = Float::with_val(w, b - m);
        aa *= m;
        aa *= x;
        aa /= Float::with_val(w, &qam + m2);
        aa /= Float::with_val(w, a + m2);
        d = Float::with_val(w, &aa * &d) + 1u32;
        if d.is_zero() {
            d.clone_from(&tiny);
        }
        c = Float::with_val(w, &aa / &c) + 1u32;
        if c.is_zero() {
            c.clone_from(&tiny);
        }
        d.recip_mut();
        h *= Float::with_val(w, &d * &c);
        // odd step: -(a + m)(a + b + m) x / ((a + 2m)(a + 1 + 2m))
        let mut aa = Float::with_val(w, a + m);
        aa *= Float::with_val(w, &qab + m);
        aa *= x;
        aa /= Float::with_val(w, a + m2);
        aa /= Float::with_val(w, &qap + m2);
        aa = -aa;
        d = Float::with_val(w, &aa * &d) + 1u32;
        if d.is_zero() {
            d.clone_from(&tiny);
        }
        c = Float::with_val(w, &aa / &c) + 1u32;
        if c.is_zero() {
            c.clone_from(&tiny);
        }
        d.recip_mut();
        let del = Float::with_val(w, &d * &c);
        h *= &del;
        if negligible(&Float::with_val(w, &del - 1u32), w) {
            return Ok(front * h / a);
        }
    }
    Err(Error::NoConvergence(format!("incomplete beta fraction at x={x}, a={a}, b={b}")))
}

/// `(B(0,x;a,b), B(x,1;a,b))` at working precision `w`.
fn lower_upper_at(x: &Float, a: &Float, b: &Float, w: u32) -> Result<(Float, Float)> {
    if x.is_zero() {
        return Ok((Float::new(w), log_beta_at(a, b, w).exp()));
    }
    if *x == 1 {
        return Ok((log_beta_at(a, b, w).exp(), Float::new(w)));
    }
    let complete = log_beta_at(a, b, w).exp();
    let split = Float::with_val(w, a + 1u32) / Float::with_val(w, Float::with_val(w, a + b) + 2u32);
    if *x < split {
        let lo = lower_by_fraction(x, a, b, w)?;
        let hi = Float::with_val(w, &complete - &lo);
        Ok((lo, hi))
    } else {
        let y = Float::with_val(w, 1u32 - x);
        let hi = lower_by_fraction(&y, b, a, w)?;
        let lo = Float::with_val(w, &complete - &hi);
        Ok((lo, hi))
    }
}

/// `(B(0,x;a,b), B(x,1;a,b))`, each with full relative accuracy.
pub fn inc_beta_lower_upper(
    x: &BigReal,
    a: &BigReal,
    b: &BigReal,
    prec: Precision,
) -> Result<(BigReal, BigReal)> {
    check_params(a, b)?;
    check_unit(x)?;
    let w = prec.guarded(guard(a, b));
    let (lo, hi) = lower_upper_at(x, a, b, w)?;
    Ok((Float::with_val(prec.bits(), &lo), Float::with_val(prec.bits(), &hi)))
}

/// `B(x,y;a,b)` for `0 <= x <= y <= 1`.
pub fn inc_beta(
    x: &BigReal,
    y: &BigReal,
    a: &BigReal,
    b: &BigReal,
    prec: Precision,
) -> Result<BigReal> {
    check_params(a, b)?;
    check_unit(x)?;
    check_unit(y)?;
    if y < x {
        return domain(format!("beta interval upper limit {y} is below lower limit {x}"));
    }
    let bits = prec.bits();
    if x == y {
        return Ok(Float::new(bits));
    }
    let base = prec.guarded(guard(a, b));
    let mut w = base;
    for _ in 0..4 {
        let (lx, ux) = lower_upper_at(x, a, b, w)?;
        let (ly, uy) = lower_upper_at(y, a, b, w)?;
        let (d, scale) = if ly <= ux {
            (Float::with_val(w, &ly - &lx), ly)
        } else {
            (Float::with_val(w, &ux - &uy), ux)
        };
        let lost = match (d.get_exp(), scale.get_exp()) {
            (Some(de), Some(se)) if se > de => (se - de) as u32,
            _ => 0,
        };
        if d.is_zero() || lost + 16 < w - bits {
            return Ok(Float::with_val(bits, &d));
        }
        w = base + lost + 32;
    }
    Err(Error::NoConvergence(format!("B({x},{y};{a},{b}) cancels beyond available precision")))
}

/// `B(0,x;a+1,b)` from `B(0,x;a,b)` via
/// `B(0,x;a+1,b) = a/(a+b) B(0,x;a,b) - x^a (1-x)^b / (a+b)`.
pub fn beta_shift(
    x: &BigReal,
    a: &BigReal,
    b: &BigReal,
    b_ax: &BigReal,
    prec: Precision,
) -> Result<BigReal> {
    check_params(a, b)?;
    check_unit(x)?;
    let bits = prec.bits();
    let w = bits.max(b_ax.prec()) + guard(a, b);
    let ab = Float::with_val(w, a + b);
    let mut scaled = Float::with_val(w, b_ax) * a;
    scaled /= &ab;
    if x.is_zero() {
        return Ok(Float::new(bits));
    }
    let boundary = if *x == 1 {
        Float::new(w)
    } else {
        let one_minus = Float::with_val(w, 1u32 - x);
        let mut l = Float::with_val(w, x.ln_ref()) * a;
        l += Float::with_val(w, one_minus.ln_ref()) * b;
        l.exp() / &ab
    };
    Ok(Float::with_val(bits, scaled - boundary))
}
