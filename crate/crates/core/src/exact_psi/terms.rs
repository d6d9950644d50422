//! Building blocks shared by several kernels.

use rug::Float;

use crate::error::Result;
use crate::hp_math::{gamma_interval_ladder, gamma_ladder, BigReal, Precision};

/// Interval endpoints at working precision; `lo` may be `-inf` and `hi`
/// may be `+inf`.
#[derive(Clone, Debug)]
pub(crate) struct Limits {
    pub lo: BigReal,
    pub hi: BigReal,
}

impl Limits {
    pub fn new(lo: f64, hi: f64, bits: u32) -> Limits {
        Limits {
            lo: Float::with_val(bits, lo),
            hi: Float::with_val(bits, hi),
        }
    }

    /// Both endpoints multiplied by `factor` (infinities stay infinite).
    pub fn scaled(&self, factor: &Float) -> Limits {
        let bits = self.lo.prec();
        Limits {
            lo: Float::with_val(bits, &self.lo * factor),
            hi: Float::with_val(bits, &self.hi * factor),
        }
    }
}

pub(crate) fn prec(bits: u32) -> Precision {
    Precision::new(bits).expect("working precision is above the floor")
}

fn square(x: &Float) -> Float {
    Float::with_val(x.prec(), x.square_ref())
}

/// `F_k(hi) - F_k(lo)` for `k = 1..=kmax` (index `k - 1`), where
/// `F_k(y) = sgn(y)^k P(k/2, y^2) / 2`, so that
/// `Gamma(k/2) (F_k(hi) - F_k(lo)) = int_lo^hi t^{k-1} e^{-t^2} dt`.
pub(crate) fn half_gamma_ladder(kmax: usize, lim: &Limits, bits: u32) -> Result<Vec<Float>> {
    let w = prec(bits + 8);
    let (lo, hi) = (&lim.lo, &lim.hi);
    let lo2 = square(lo);
    let hi2 = square(hi);
    let mut out = vec![Float::new(bits); kmax];
    for parity in [1usize, 2] {
        let count = (kmax + 2 - parity) / 2;
        if count == 0 {
            continue;
        }
        let a0 = Float::with_val(64, parity as f64 / 2.0);
        let odd = parity == 1;
        let vals: Vec<Float> = if !lo.is_sign_negative() || lo.is_zero() {
            gamma_interval_ladder(&a0, count, &lo2, &hi2, w)?
        } else if hi.is_sign_negative() || hi.is_zero() {
            let v = gamma_interval_ladder(&a0, count, &hi2, &lo2, w)?;
            if odd {
                v
            } else {
                v.into_iter().map(|x| -x).collect()
            }
        } else if odd {
            let ph = gamma_ladder(&a0, count, &hi2, w)?;
            let pl = gamma_ladder(&a0, count, &lo2, w)?;
            ph.iter()
                .zip(&pl)
                .map(|(h, l)| Float::with_val(bits + 8, &h.p + &l.p))
                .collect()
        } else if hi2 >= lo2 {
            gamma_interval_ladder(&a0, count, &lo2, &hi2, w)?
        } else {
            gamma_interval_ladder(&a0, count, &hi2, &lo2, w)?
                .into_iter()
                .map(|x| -x)
                .collect()
        };
        for (t, v) in vals.into_iter().enumerate() {
            let k = parity + 2 * t;
            out[k - 1] = Float::with_val(bits, v / 2u32);
        }
    }
    Ok(out)
}

/// `ln Gamma(x)` at `bits`.
pub(crate) fn ln_gamma(x: &Float, bits: u32) -> Float {
    Float::with_val(bits, Float::with_val(bits + 16, x).ln_gamma())
}
