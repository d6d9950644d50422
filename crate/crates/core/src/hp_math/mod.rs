//! Arbitrary-precision scalars and the special functions the exact
//! eigenvalue-interval formulas are assembled from.
//!
//! Scalars are MPFR floats ([`rug::Float`]) with round-to-nearest and a
//! binary exponent range of roughly ±2^30, which comfortably covers
//! probabilities such as 1e-29904. Every function takes an explicit
//! [`Precision`] and returns a value rounded to that many mantissa bits;
//! internal evaluation uses extra guard bits.

mod beta;
mod gamma;

pub use beta::{beta_shift, inc_beta, inc_beta_lower_upper, log_beta};
pub use gamma::{
    gamma_interval_ladder, gamma_ladder, gamma_shift, gamma_term, log_gamma, reg_gamma_interval,
    reg_gamma_pair, reg_lower_gamma, reg_upper_gamma, GammaPair,
};

use std::cmp::Ordering;
use std::fmt;

use rug::float::Constant;
use rug::Float;

use crate::error::{Error, Result};

/// Arbitrary-precision real. The mantissa size travels with the value.
pub type BigReal = Float;

/// Working mantissa size in bits; always at least [`Precision::MIN_BITS`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Precision(u32);

impl Precision {
    pub const MIN_BITS: u32 = 64;
    pub const DEFAULT_BITS: u32 = 256;
    pub const DEFAULT: Precision = Precision(Self::DEFAULT_BITS);

    pub fn new(bits: u32) -> Result<Self> {
        if bits < Self::MIN_BITS {
            return Err(Error::Domain(format!(
                "precision must be at least {} bits, got {bits}",
                Self::MIN_BITS
            )));
        }
        Ok(Precision(bits))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// `self` plus `extra` guard bits.
    pub fn guarded(self, extra: u32) -> u32 {
        self.0.saturating_add(extra)
    }

    pub fn doubled(self) -> Precision {
        Precision(self.0.saturating_mul(2))
    }
}

impl Default for Precision {
    fn default() -> Self {
        Self::DEFAULT
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} bits", self.0)
    }
}

/// `value` rounded to `bits` of mantissa.
pub fn big<T>(bits: u32, value: T) -> BigReal
where
    Float: rug::Assign<T>,
{
    Float::with_val(bits, value)
}

pub fn pi(bits: u32) -> BigReal {
    Float::with_val(bits, Constant::Pi)
}

pub fn ln2(bits: u32) -> BigReal {
    Float::with_val(bits, Constant::Log2)
}

/// Returns `(erf x, erfc x)`. `erfc` is evaluated directly, so it keeps full
/// relative accuracy deep in the right tail.
pub fn erf_erfc(x: &BigReal, prec: Precision) -> Result<(BigReal, BigReal)> {
    if x.is_nan() {
        return Err(Error::Domain("erf of NaN".into()));
    }
    let bits = prec.bits();
    Ok((
        Float::with_val(bits, x.erf_ref()),
        Float::with_val(bits, x.erfc_ref()),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(x: &BigReal) -> Sign {
        match x.cmp0() {
            Some(Ordering::Less) => Sign::Negative,
            Some(Ordering::Greater) => Sign::Positive,
            _ => Sign::Zero,
        }
    }

    pub fn times(self, other: Sign) -> Sign {
        match (self, other) {
            (Sign::Zero, _) | (_, Sign::Zero) => Sign::Zero,
            (a, b) if a == b => Sign::Positive,
            _ => Sign::Negative,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Positive => Sign::Negative,
            Sign::Zero => Sign::Zero,
        }
    }
}

/// A real stored as `sign * exp(log_magnitude)`.
///
/// Used for normalizing constants and determinants whose magnitude would
/// leave any fixed exponent range. When `sign` is zero the magnitude is
/// meaningless and kept at `-inf`.
#[derive(Clone, Debug, PartialEq)]
pub struct LogScaled {
    log_magnitude: BigReal,
    sign: Sign,
}

impl LogScaled {
    pub fn zero(bits: u32) -> Self {
        LogScaled {
            log_magnitude: Float::with_val(bits, rug::float::Special::NegInfinity),
            sign: Sign::Zero,
        }
    }

    pub fn one(bits: u32) -> Self {
        LogScaled {
            log_magnitude: Float::new(bits),
            sign: Sign::Positive,
        }
    }

    /// The positive number `exp(log_magnitude)`.
    pub fn from_log(log_magnitude: BigReal) -> Self {
        if log_magnitude.is_infinite() && log_magnitude.is_sign_negative() {
            return Self::zero(log_magnitude.prec());
        }
        LogScaled {
            log_magnitude,
            sign: Sign::Positive,
        }
    }

    pub fn from_value(x: &BigReal) -> Self {
        let sign = Sign::of(x);
        if sign == Sign::Zero {
            return Self::zero(x.prec());
        }
        let mag = Float::with_val(x.prec(), x.abs_ref());
        LogScaled {
            log_magnitude: mag.ln(),
            sign,
        }
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn log_magnitude(&self) -> &BigReal {
        &self.log_magnitude
    }

    pub fn is_zero(&self) -> bool {
        self.sign == Sign::Zero
    }

    pub fn mul(&self, other: &LogScaled) -> LogScaled {
        let sign = self.sign.times(other.sign);
        if sign == Sign::Zero {
            return Self::zero(self.log_magnitude.prec());
        }
        LogScaled {
            log_magnitude: Float::with_val(
                self.log_magnitude.prec().max(other.log_magnitude.prec()),
                &self.log_magnitude + &other.log_magnitude,
            ),
            sign,
        }
    }

    pub fn recip(&self) -> Result<LogScaled> {
        if self.is_zero() {
            return Err(Error::Domain("reciprocal of zero".into()));
        }
        Ok(LogScaled {
            log_magnitude: Float::with_val(self.log_magnitude.prec(), -&self.log_magnitude),
            sign: self.sign,
        })
    }

    pub fn abs(&self) -> LogScaled {
        let mut out = self.clone();
        if out.sign == Sign::Negative {
            out.sign = Sign::Positive;
        }
        out
    }

    pub fn negated(&self) -> LogScaled {
        let mut out = self.clone();
        out.sign = out.sign.flip();
        out
    }

    /// Square root of the magnitude; sign is dropped.
    pub fn sqrt_abs(&self) -> LogScaled {
        if self.is_zero() {
            return self.clone();
        }
        LogScaled {
            log_magnitude: Float::with_val(self.log_magnitude.prec(), &self.log_magnitude / 2u32),
            sign: Sign::Positive,
        }
    }

    /// The represented value as a `BigReal` (exponent range permitting).
    pub fn to_big(&self) -> BigReal {
        let bits = self.log_magnitude.prec();
        match self.sign {
            Sign::Zero => Float::new(bits),
            Sign::Positive => Float::with_val(bits, self.log_magnitude.exp_ref()),
            Sign::Negative => -Float::with_val(bits, self.log_magnitude.exp_ref()),
        }
    }

    /// Nearest double; underflows to zero and overflows to infinity.
    pub fn to_f64(&self) -> f64 {
        match self.sign {
            Sign::Zero => 0.0,
            _ => {
                let l = self.log_magnitude.to_f64();
                let v = if l < -746.0 {
                    0.0
                } else if l > 710.0 {
                    f64::INFINITY
                } else {
                    self.log_magnitude.clone().exp().to_f64()
                };
                if self.sign == Sign::Negative {
                    -v
                } else {
                    v
                }
            }
        }
    }

    /// Base-10 logarithm of the magnitude as a double (`-inf` for zero).
    pub fn log10_f64(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let bits = self.log_magnitude.prec();
        let ln10 = Float::with_val(bits, 10u32).ln();
        Float::with_val(bits, &self.log_magnitude / &ln10).to_f64()
    }
}

/// Cheap upper estimate of `log2(1 + |x|)` used to size guard bits.
pub(crate) fn magnitude_bits(x: f64) -> u32 {
    let v = x.abs();
    if !v.is_finite() {
        return 0;
    }
    (1.0 + v).log2().ceil() as u32
}
