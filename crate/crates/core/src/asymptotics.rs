//! Large-matrix approximations.
//!
//! Extreme eigenvalues of white Wishart, GOE and GUE matrices are centred
//! and scaled onto a Tracy-Widom law, which in turn is replaced by a shifted
//! gamma variate, `TW_beta ~ Gamma(k, theta) - alpha`. Treating the largest
//! and smallest eigenvalue as independent then gives `psi` in closed form.

use serde::{Deserialize, Serialize};

use crate::ensembles::{EnsembleSpec, Interval};
use crate::error::{domain, Error, Result};
use crate::exact_psi::{cdf_largest, cdf_smallest};
use crate::hp_math::{big, reg_lower_gamma, Precision};

/// Tracy-Widom order; serializes as the number 1, 2 or 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum TwBeta {
    One,
    Two,
    Four,
}

impl TwBeta {
    pub const ALL: [TwBeta; 3] = [TwBeta::One, TwBeta::Two, TwBeta::Four];

    pub fn value(self) -> u8 {
        match self {
            TwBeta::One => 1,
            TwBeta::Two => 2,
            TwBeta::Four => 4,
        }
    }

    pub fn from_value(beta: u8) -> Option<TwBeta> {
        match beta {
            1 => Some(TwBeta::One),
            2 => Some(TwBeta::Two),
            4 => Some(TwBeta::Four),
            _ => None,
        }
    }

    /// Order governing the edges of `spec`: 1 for real, 2 for complex.
    pub fn of(spec: &EnsembleSpec) -> TwBeta {
        if spec.kind().is_complex() {
            TwBeta::Two
        } else {
            TwBeta::One
        }
    }
}

impl From<TwBeta> for u8 {
    fn from(b: TwBeta) -> u8 {
        b.value()
    }
}

impl TryFrom<u8> for TwBeta {
    type Error = String;

    fn try_from(v: u8) -> std::result::Result<TwBeta, String> {
        TwBeta::from_value(v).ok_or_else(|| format!("Tracy-Widom order must be 1, 2 or 4, got {v}"))
    }
}

/// Shape `k`, scale `theta` and shift `alpha` of the gamma surrogate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TWGammaParams {
    pub beta: TwBeta,
    pub k: f64,
    pub theta: f64,
    pub alpha: f64,
}

const TW_TABLE: [TWGammaParams; 3] = [
    TWGammaParams {
        beta: TwBeta::One,
        k: 46.446,
        theta: 0.186054,
        alpha: 9.84801,
    },
    TWGammaParams {
        beta: TwBeta::Two,
        k: 79.6595,
        theta: 0.101037,
        alpha: 9.81961,
    },
    TWGammaParams {
        beta: TwBeta::Four,
        k: 146.021,
        theta: 0.0595445,
        alpha: 11.0016,
    },
];

pub fn tw_params(beta: TwBeta) -> TWGammaParams {
    TW_TABLE[match beta {
        TwBeta::One => 0,
        TwBeta::Two => 1,
        TwBeta::Four => 2,
    }]
}

fn reg_p(a: f64, x: f64) -> f64 {
    const BITS: u32 = 96;
    if x <= 0.0 {
        return 0.0;
    }
    if x.is_infinite() {
        return 1.0;
    }
    reg_lower_gamma(&big(BITS, a), &big(BITS, x), Precision::new(BITS).expect("valid precision"))
        .map(|v| v.to_f64())
        .unwrap_or(f64::NAN)
}

/// Gamma surrogate of the Tracy-Widom CDF, `P(k, (x + alpha)^+ / theta)`.
pub fn tw_cdf(beta: TwBeta, x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let t = tw_params(beta);
    reg_p(t.k, (x + t.alpha).max(0.0) / t.theta)
}

/// Centres and scales of the largest (`plus`) and smallest (`minus`)
/// eigenvalue.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeScaling {
    pub mu_plus: f64,
    pub sigma_plus: f64,
    pub mu_minus: f64,
    pub sigma_minus: f64,
}

/// Scale of the Gaussian ensembles: entries `N(0, 1)` on the diagonal put
/// the semicircle edge at `sqrt(2n) = 2 sigma0 sqrt(n)`.
pub const SIGMA0: f64 = std::f64::consts::FRAC_1_SQRT_2;

pub fn edge_scaling(spec: &EnsembleSpec) -> Result<EdgeScaling> {
    spec.validate()?;
    match *spec {
        EnsembleSpec::RealWishart { p, m } | EnsembleSpec::ComplexWishartWhite { p, m } => {
            if m <= p {
                return domain(format!("edge scaling needs m > p, got p={p}, m={m}"));
            }
            let (rp, rm) = ((p as f64).sqrt(), (m as f64).sqrt());
            let mu_plus = (rm + rp).powi(2);
            let mu_minus = (rm - rp).powi(2);
            Ok(EdgeScaling {
                mu_plus,
                sigma_plus: mu_plus.sqrt() * (1.0 / rp + 1.0 / rm).cbrt(),
                mu_minus,
                sigma_minus: mu_minus.sqrt() * (1.0 / rp - 1.0 / rm).cbrt(),
            })
        }
        EnsembleSpec::Goe { n } | EnsembleSpec::Gue { n } => {
            let nf = n as f64;
            let mu = 2.0 * SIGMA0 * nf.sqrt();
            let sigma = SIGMA0 * nf.powf(-1.0 / 6.0);
            Ok(EdgeScaling {
                mu_plus: mu,
                sigma_plus: sigma,
                mu_minus: -mu,
                sigma_minus: sigma,
            })
        }
        _ => Err(Error::Unsupported(format!(
            "no edge scaling for {}",
            spec.kind().name()
        ))),
    }
}

/// Approximate `Pr(lambda_max <= b)`.
pub fn largest_cdf_approx(spec: &EnsembleSpec, b: f64) -> Result<f64> {
    let e = edge_scaling(spec)?;
    if b >= spec.support().hi {
        return Ok(1.0);
    }
    Ok(tw_cdf(TwBeta::of(spec), (b - e.mu_plus) / e.sigma_plus))
}

/// Approximate `Pr(lambda_min >= a)`.
pub fn smallest_survival_approx(spec: &EnsembleSpec, a: f64) -> Result<f64> {
    let e = edge_scaling(spec)?;
    if a <= spec.support().lo {
        return Ok(1.0);
    }
    Ok(tw_cdf(TwBeta::of(spec), -(a - e.mu_minus) / e.sigma_minus))
}

/// `psi(a, b)` as the product of the two edge factors. Endpoints at or
/// beyond the support contribute a factor of one.
pub fn psi_approx(spec: &EnsembleSpec, iv: Interval) -> Result<f64> {
    let iv = spec.resolve(iv)?;
    if iv.is_degenerate() {
        return Ok(0.0);
    }
    Ok(largest_cdf_approx(spec, iv.hi)? * smallest_survival_approx(spec, iv.lo)?)
}

pub fn mp_support(p: usize, m: usize) -> Result<Interval> {
    if m < p {
        return domain(format!("need m >= p, got p={p}, m={m}"));
    }
    let (rp, rm) = ((p as f64).sqrt(), (m as f64).sqrt());
    Interval::new((rm - rp).powi(2), (rm + rp).powi(2))
}

pub fn semicircle_support(n: usize) -> Interval {
    let r = (2.0 * n as f64).sqrt();
    Interval { lo: -r, hi: r }
}

/// Exact limits `F_1(0)^2` and `F_2(0)^2` of the probability that every
/// eigenvalue stays inside the limiting support.
pub const EDGE_LIMIT_REAL: f64 = 0.6921;
pub const EDGE_LIMIT_COMPLEX: f64 = 0.9397;

/// The same limit through the gamma surrogate, `tw_cdf(beta, 0)^2`.
pub fn edge_prob_limit(beta: TwBeta) -> f64 {
    tw_cdf(beta, 0.0).powi(2)
}

/// Limit of `psi(mu_- - t sigma_-, mu_+ + t sigma_+)`, `F(t)^2`.
pub fn deviation_containment(beta: TwBeta, t: f64) -> f64 {
    tw_cdf(beta, t).powi(2)
}

/// `(1 - F(t))^2`: both extremes beyond their shifted edge, under the same
/// independence argument.
pub fn deviation_exceedance(beta: TwBeta, t: f64) -> f64 {
    (1.0 - tw_cdf(beta, t)).powi(2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GoeNegativity {
    /// `-n^2 ln 3 / 4`
    Basic,
    /// `-n^2 ln 3 / 4 - n ln 10 / 6`
    Corrected,
}

/// Natural log of the approximate probability that an `n x n` GOE matrix
/// is negative definite.
pub fn goe_negativity_approx(n: usize, variant: GoeNegativity) -> f64 {
    let nf = n as f64;
    let basic = -nf * nf * 3f64.ln() / 4.0;
    match variant {
        GoeNegativity::Basic => basic,
        GoeNegativity::Corrected => basic - nf * 10f64.ln() / 6.0,
    }
}

/// One grid point of the compressed-sensing comparison for
/// `M ~ W_s(m, I)`. Tails are `Pr(lambda_max > upper_threshold)` and
/// `Pr(lambda_min < lower_threshold)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CsRecord {
    pub t: f64,
    pub upper_threshold: f64,
    pub lower_threshold: f64,
    /// `e^{-m t^2 / 2}`, shared by both tails.
    pub upper_tail_bound: f64,
    pub lower_tail_bound: f64,
    pub exact_upper: f64,
    pub exact_lower: f64,
    pub approx_upper: f64,
    pub approx_lower: f64,
}

/// Concentration bounds at thresholds `(sqrt m +- sqrt s +- t sqrt m)^2`
/// against exact and approximate tails.
pub fn cs_concentration_bounds(s: usize, m: usize, t_grid: &[f64]) -> Result<Vec<CsRecord>> {
    if s == 0 || m < s {
        return domain(format!("need 1 <= s <= m, got s={s}, m={m}"));
    }
    if let Some(t) = t_grid.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
        return domain(format!("grid points must be finite and nonnegative, got {t}"));
    }
    let spec = EnsembleSpec::RealWishart { p: s, m };
    let (rs, rm) = ((s as f64).sqrt(), (m as f64).sqrt());
    t_grid
        .iter()
        .map(|&t| {
            let upper_threshold = (rm + rs + t * rm).powi(2);
            let lower_base = rm - rs - t * rm;
            let bound = (-(m as f64) * t * t / 2.0).exp();
            let exact_upper = cdf_largest(&spec, upper_threshold)?.complement().value;
            let approx_upper = 1.0 - largest_cdf_approx(&spec, upper_threshold)?;
            // below zero the lower event is empty
            let (lower_threshold, exact_lower, approx_lower) = if lower_base > 0.0 {
                let a = lower_base * lower_base;
                let exact = cdf_smallest(&spec, a)?.value;
                let approx = if m > s { 1.0 - smallest_survival_approx(&spec, a)? } else { f64::NAN };
                (a, exact, approx)
            } else {
                (0.0, 0.0, 0.0)
            };
            Ok(CsRecord {
                t,
                upper_threshold,
                lower_threshold,
                upper_tail_bound: bound,
                lower_tail_bound: bound,
                exact_upper,
                exact_lower,
                approx_upper,
                approx_lower,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surrogate_at_zero() {
        assert!((tw_cdf(TwBeta::One, 0.0) - 0.8312).abs() < 5e-4);
        assert!((tw_cdf(TwBeta::Two, 0.0) - 0.96945).abs() < 5e-5);
        assert_eq!(tw_cdf(TwBeta::One, -tw_params(TwBeta::One).alpha - 1.0), 0.0);
    }

    #[test]
    fn supports() {
        let s = mp_support(10, 15).unwrap();
        assert!((s.lo - (15f64.sqrt() - 10f64.sqrt()).powi(2)).abs() < 1e-12);
        assert_eq!(mp_support(1, 1).unwrap(), Interval { lo: 0.0, hi: 4.0 });
        assert!((semicircle_support(50).hi - 10.0).abs() < 1e-12);
        assert!(mp_support(3, 2).is_err());
    }

    #[test]
    fn gaussian_edges_sit_on_the_semicircle() {
        let e = edge_scaling(&EnsembleSpec::Goe { n: 50 }).unwrap();
        assert!((e.mu_plus - 10.0).abs() < 1e-12);
        assert_eq!(e.mu_minus, -e.mu_plus);
        assert!(edge_scaling(&EnsembleSpec::RealWishart { p: 4, m: 4 }).is_err());
        assert!(matches!(
            edge_scaling(&EnsembleSpec::ComplexBeta { s: 2, m: 1.0, n: 1.0 }),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn negativity_table() {
        let b = goe_negativity_approx(10, GoeNegativity::Basic).exp();
        let c = goe_negativity_approx(10, GoeNegativity::Corrected).exp();
        assert!((b / 1.18e-12 - 1.0).abs() < 5e-3);
        assert!((c / 2.54e-14 - 1.0).abs() < 5e-3);
    }
}
