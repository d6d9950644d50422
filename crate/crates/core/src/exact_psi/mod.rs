//! Exact probability `psi(a, b)` that every eigenvalue lies in `[a, b]`.
//!
//! Real ensembles reduce to `K' |Pf A|` for a skew-symmetric kernel `A`,
//! complex ones to `K det A`. Kernels are built at a working precision and
//! the whole evaluation is repeated at a higher precision until the two
//! logarithms agree.

mod complex;
mod linalg;
mod real;
mod terms;

pub use linalg::{determinant, log_sqrt_det_skew, pfaffian, DetKernel, SkewKernel};

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::ensembles::{EnsembleSpec, Interval};
use crate::error::{Error, Result};
use crate::hp_math::{BigReal, LogScaled, Precision, Sign};
use terms::Limits;

/// Outcome of an exact evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct PsiResult {
    /// Nearest double; underflows to zero below about `1e-308`.
    pub value: f64,
    /// Natural logarithm, `-inf` when the probability is zero.
    pub log_value: BigReal,
    pub precision_bits_used: u32,
    /// Two successive working precisions agreed.
    pub converged: bool,
}

impl PsiResult {
    fn exact_zero(bits: u32) -> PsiResult {
        PsiResult {
            value: 0.0,
            log_value: Float::with_val(bits, rug::float::Special::NegInfinity),
            precision_bits_used: bits,
            converged: true,
        }
    }

    pub fn log10(&self) -> f64 {
        if self.log_value.is_infinite() {
            return f64::NEG_INFINITY;
        }
        let bits = self.log_value.prec();
        let ln10 = Float::with_val(bits, 10u32).ln();
        Float::with_val(bits, &self.log_value / &ln10).to_f64()
    }

    /// `1 - psi`, accurate also when `psi` is close to one.
    pub fn complement(&self) -> PsiResult {
        let bits = self.log_value.prec();
        let comp = if self.log_value.is_infinite() {
            Float::with_val(bits, 1u32)
        } else {
            // 1 - e^l = -expm1(l)
            -Float::with_val(bits, self.log_value.exp_m1_ref())
        };
        let log_value = if comp.is_zero() || comp.is_sign_negative() {
            Float::with_val(bits, rug::float::Special::NegInfinity)
        } else {
            Float::with_val(bits, comp.ln_ref())
        };
        PsiResult {
            value: from_log(&log_value),
            log_value,
            precision_bits_used: self.precision_bits_used,
            converged: self.converged,
        }
    }
}

fn from_log(l: &Float) -> f64 {
    if l.is_infinite() {
        return 0.0;
    }
    LogScaled::from_log(l.clone()).to_f64().min(1.0)
}

/// Precision controls for the adaptive loop.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsiOptions {
    /// First working precision; `None` picks one from the dimension.
    pub initial_bits: Option<u32>,
    /// No evaluation runs above this many bits.
    pub max_bits: u32,
}

impl Default for PsiOptions {
    fn default() -> Self {
        PsiOptions {
            initial_bits: None,
            max_bits: MAX_BITS,
        }
    }
}

pub const MAX_BITS: u32 = 8192;
const AGREEMENT: f64 = 1e-12;

/// Starting precision for `spec`.
///
/// Elimination on these kernels loses roughly `4.5` bits per dimension,
/// plus `log2(m/p)` per dimension for Wishart kinds; the estimate keeps a
/// margin above the losses measured up to dimension 500.
pub fn default_bits(spec: &EnsembleSpec) -> u32 {
    let d = spec.dim() as f64;
    let per_dim = match spec {
        EnsembleSpec::RealWishart { p, m }
        | EnsembleSpec::ComplexWishartWhite { p, m }
        | EnsembleSpec::ComplexWishartSpiked { p, m, .. } => 4.5 + (*m as f64 / *p as f64).log2(),
        EnsembleSpec::ComplexWishartCorrelated { m, sigma } => 4.5 + (*m as f64 / sigma.len() as f64).log2(),
        EnsembleSpec::RealBeta { .. } | EnsembleSpec::ComplexBeta { .. } => 6.0,
        EnsembleSpec::Goe { .. } | EnsembleSpec::Gue { .. } => 4.5,
    };
    ((64.0 + d * per_dim).ceil() as u32).max(Precision::DEFAULT_BITS)
}

/// Precision of the confirming evaluation after one at `bits`.
fn confirm_bits(bits: u32) -> u32 {
    bits + (bits / 8).max(64)
}

/// A kernel of either shape, ready for reduction.
#[derive(Clone, Debug)]
pub enum Kernel {
    Skew(SkewKernel),
    Det(DetKernel),
}

impl Kernel {
    /// `K' |Pf A|` or `K det A`.
    pub fn evaluate(&self) -> LogScaled {
        match self {
            Kernel::Skew(k) => k.log_const().mul(&log_sqrt_det_skew(k)),
            Kernel::Det(k) => k.log_const().mul(&determinant(k)),
        }
    }
}

/// Builds the kernel for `spec` on `iv` (already resolved against the
/// support) with entries rounded to `bits`.
pub fn build_kernel(spec: &EnsembleSpec, iv: Interval, bits: u32) -> Result<Kernel> {
    let lim = Limits::new(iv.lo, iv.hi, bits + 32);
    Ok(match spec {
        EnsembleSpec::RealWishart { p, m } => Kernel::Skew(real::real_wishart_kernel(*p, *m, &lim, bits)?),
        EnsembleSpec::Goe { n } => Kernel::Skew(real::goe_kernel(*n, &lim, bits)?),
        EnsembleSpec::RealBeta { s, m, n } => Kernel::Skew(real::real_beta_kernel(*s, *m, *n, &lim, bits)?),
        EnsembleSpec::ComplexWishartWhite { p, m } => Kernel::Det(complex::white_kernel(*p, *m, &lim, bits)?),
        EnsembleSpec::ComplexWishartCorrelated { m, sigma } => {
            Kernel::Det(complex::correlated_kernel(*m, sigma, &lim, bits)?)
        }
        EnsembleSpec::ComplexWishartSpiked {
            p,
            m,
            sigma1,
            sigma2,
        } => Kernel::Det(complex::spiked_kernel(*p, *m, *sigma1, *sigma2, &lim, bits)?),
        EnsembleSpec::ComplexBeta { s, m, n } => Kernel::Det(complex::complex_beta_kernel(*s, *m, *n, &lim, bits)?),
        EnsembleSpec::Gue { n } => Kernel::Det(complex::gue_kernel(*n, &lim, bits)?),
    })
}

/// One evaluation of `psi` at `bits`, without any convergence check.
/// `iv` must already be resolved against the support.
pub fn psi_at_precision(spec: &EnsembleSpec, iv: Interval, bits: u32) -> Result<LogScaled> {
    Ok(build_kernel(spec, iv, bits)?.evaluate())
}

fn agree(a: &LogScaled, b: &LogScaled) -> bool {
    match (a.sign(), b.sign()) {
        (Sign::Zero, Sign::Zero) => true,
        (Sign::Positive, Sign::Positive) => {
            let la = a.log_magnitude().to_f64();
            let lb = b.log_magnitude().to_f64();
            (la - lb).abs() <= AGREEMENT * lb.abs().max(1.0)
        }
        _ => false,
    }
}

fn to_result(v: &LogScaled, bits: u32, converged: bool) -> PsiResult {
    match v.sign() {
        Sign::Positive => {
            // Rounding can push a probability of one a hair above it.
            let l = v.log_magnitude();
            let log_value = if l.is_sign_positive() {
                Float::new(bits)
            } else {
                Float::with_val(bits, l)
            };
            PsiResult {
                value: from_log(&log_value),
                log_value,
                precision_bits_used: bits,
                converged,
            }
        }
        _ => PsiResult {
            converged: converged && v.is_zero(),
            ..PsiResult::exact_zero(bits)
        },
    }
}

/// `psi(iv)` for any ensemble with explicit precision controls.
pub fn psi_with(spec: &EnsembleSpec, iv: Interval, opts: PsiOptions) -> Result<PsiResult> {
    spec.validate()?;
    let iv = spec.resolve(iv)?;
    let first = opts.initial_bits.unwrap_or_else(|| default_bits(spec));
    let first = Precision::new(first)?.bits().min(opts.max_bits.max(Precision::MIN_BITS));
    if iv.is_degenerate() {
        return Ok(PsiResult::exact_zero(first));
    }
    let mut bits = first;
    let mut prev = psi_at_precision(spec, iv, bits)?;
    let mut next_bits = confirm_bits(bits);
    loop {
        if bits >= opts.max_bits {
            return Ok(to_result(&prev, bits, false));
        }
        next_bits = next_bits.min(opts.max_bits);
        let next = psi_at_precision(spec, iv, next_bits)?;
        if agree(&prev, &next) {
            return Ok(to_result(&next, next_bits, true));
        }
        bits = next_bits;
        prev = next;
        next_bits = bits.saturating_add(bits / 2);
    }
}

/// `psi(iv)` with default precision controls.
pub fn psi(spec: &EnsembleSpec, iv: Interval) -> Result<PsiResult> {
    psi_with(spec, iv, PsiOptions::default())
}

pub fn psi_real_wishart(p: usize, m: usize, iv: Interval) -> Result<PsiResult> {
    psi(&EnsembleSpec::RealWishart { p, m }, iv)
}

pub fn psi_goe(n: usize, iv: Interval) -> Result<PsiResult> {
    psi(&EnsembleSpec::Goe { n }, iv)
}

pub fn psi_real_beta(s: usize, m: f64, n_beta: f64, iv: Interval) -> Result<PsiResult> {
    psi(&EnsembleSpec::RealBeta { s, m, n: n_beta }, iv)
}

pub fn psi_complex_wishart_white(p: usize, m: usize, iv: Interval) -> Result<PsiResult> {
    psi(&EnsembleSpec::ComplexWishartWhite { p, m }, iv)
}

pub fn psi_complex_wishart_correlated(p: usize, m: usize, sigma: &[f64], iv: Interval) -> Result<PsiResult> {
    if sigma.len() != p {
        return Err(Error::Domain(format!(
            "expected {p} covariance eigenvalues, got {}",
            sigma.len()
        )));
    }
    psi(
        &EnsembleSpec::ComplexWishartCorrelated {
            m,
            sigma: sigma.to_vec(),
        },
        iv,
    )
}

pub fn psi_complex_wishart_spiked(p: usize, m: usize, sigma1: f64, sigma2: f64, iv: Interval) -> Result<PsiResult> {
    psi(
        &EnsembleSpec::ComplexWishartSpiked {
            p,
            m,
            sigma1,
            sigma2,
        },
        iv,
    )
}

pub fn psi_complex_beta(s: usize, m: f64, n_beta: f64, iv: Interval) -> Result<PsiResult> {
    psi(&EnsembleSpec::ComplexBeta { s, m, n: n_beta }, iv)
}

pub fn psi_gue(n: usize, iv: Interval) -> Result<PsiResult> {
    psi(&EnsembleSpec::Gue { n }, iv)
}

/// `Pr(lambda_max <= b) = psi(support.lo, b)`.
pub fn cdf_largest(spec: &EnsembleSpec, b: f64) -> Result<PsiResult> {
    cdf_largest_with(spec, b, PsiOptions::default())
}

pub fn cdf_largest_with(spec: &EnsembleSpec, b: f64, opts: PsiOptions) -> Result<PsiResult> {
    let sup = spec.support();
    if b == f64::NEG_INFINITY {
        spec.validate()?;
        return Ok(PsiResult::exact_zero(opts.initial_bits.unwrap_or_else(|| default_bits(spec))));
    }
    psi_with(spec, Interval::new(sup.lo, b)?, opts)
}

/// `Pr(lambda_min <= a) = 1 - psi(a, support.hi)`.
pub fn cdf_smallest(spec: &EnsembleSpec, a: f64) -> Result<PsiResult> {
    cdf_smallest_with(spec, a, PsiOptions::default())
}

pub fn cdf_smallest_with(spec: &EnsembleSpec, a: f64, opts: PsiOptions) -> Result<PsiResult> {
    let sup = spec.support();
    if a == f64::INFINITY {
        spec.validate()?;
        return Ok(PsiResult::exact_zero(opts.initial_bits.unwrap_or_else(|| default_bits(spec))).complement());
    }
    Ok(psi_with(spec, Interval::new(a, sup.hi)?, opts)?.complement())
}
