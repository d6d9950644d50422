//! The eight supported random-matrix ensembles, their eigenvalue supports,
//! and double-precision samplers used as a Monte Carlo oracle.
//!
//! Conventions: `p` (or `n` for the Gaussian ensembles, `s` for the beta
//! ensembles) is the matrix dimension and `m` the degrees of freedom. For the
//! real Wishart case the density exponent is `alpha = (m - p - 1) / 2`.
//! The beta ensembles are parameterized directly by the exponents of the
//! joint density `prod x^m (1-x)^n`; [`beta_params_from_dims`] converts from
//! the matrix dimensions of the underlying pair of Wisharts.

mod sampling;

pub use sampling::{mc_psi, sample, McEstimate, SampleBatch};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnsembleKind {
    RealWishart,
    Goe,
    RealBeta,
    ComplexWishartWhite,
    ComplexWishartCorrelated,
    ComplexWishartSpiked,
    ComplexBeta,
    Gue,
}

impl EnsembleKind {
    pub const ALL: [EnsembleKind; 8] = [
        EnsembleKind::RealWishart,
        EnsembleKind::Goe,
        EnsembleKind::RealBeta,
        EnsembleKind::ComplexWishartWhite,
        EnsembleKind::ComplexWishartCorrelated,
        EnsembleKind::ComplexWishartSpiked,
        EnsembleKind::ComplexBeta,
        EnsembleKind::Gue,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EnsembleKind::RealWishart => "real-wishart",
            EnsembleKind::Goe => "goe",
            EnsembleKind::RealBeta => "real-beta",
            EnsembleKind::ComplexWishartWhite => "complex-wishart",
            EnsembleKind::ComplexWishartCorrelated => "complex-wishart-correlated",
            EnsembleKind::ComplexWishartSpiked => "complex-wishart-spiked",
            EnsembleKind::ComplexBeta => "complex-beta",
            EnsembleKind::Gue => "gue",
        }
    }

    pub fn is_complex(self) -> bool {
        matches!(
            self,
            EnsembleKind::ComplexWishartWhite
                | EnsembleKind::ComplexWishartCorrelated
                | EnsembleKind::ComplexWishartSpiked
                | EnsembleKind::ComplexBeta
                | EnsembleKind::Gue
        )
    }
}

impl fmt::Display for EnsembleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One ensemble together with its shape parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EnsembleSpec {
    /// `M = X X^T`, `X` is `p x m` with i.i.d. standard normal entries.
    RealWishart { p: usize, m: usize },
    /// Real symmetric, diagonal `N(0,1)`, off-diagonal `N(0,1/2)`.
    Goe { n: usize },
    /// Eigenvalues of `(A+B)^{-1} B`; density `prod x^m (1-x)^n` times a
    /// single Vandermonde factor.
    RealBeta { s: usize, m: f64, n: f64 },
    /// `M = X X^H`, columns circularly symmetric with identity covariance.
    #[serde(rename = "complex-wishart")]
    ComplexWishartWhite { p: usize, m: usize },
    /// Complex Wishart with covariance spectrum `sigma` (distinct,
    /// decreasing); the dimension is `sigma.len()`.
    ComplexWishartCorrelated { m: usize, sigma: Vec<f64> },
    /// Complex Wishart whose covariance has one eigenvalue `sigma1` and
    /// `p - 1` eigenvalues `sigma2 < sigma1`.
    ComplexWishartSpiked {
        p: usize,
        m: usize,
        sigma1: f64,
        sigma2: f64,
    },
    /// Complex double Wishart; density `prod x^m (1-x)^n` times a squared
    /// Vandermonde factor.
    ComplexBeta { s: usize, m: f64, n: f64 },
    /// Hermitian, diagonal `N(0,1/2)`, off-diagonal `CN(0,1/2)`.
    Gue { n: usize },
}

fn is_half_integer(x: f64) -> bool {
    x.is_finite() && (2.0 * x).fract() == 0.0
}

impl EnsembleSpec {
    pub fn kind(&self) -> EnsembleKind {
        match self {
            EnsembleSpec::RealWishart { .. } => EnsembleKind::RealWishart,
            EnsembleSpec::Goe { .. } => EnsembleKind::Goe,
            EnsembleSpec::RealBeta { .. } => EnsembleKind::RealBeta,
            EnsembleSpec::ComplexWishartWhite { .. } => EnsembleKind::ComplexWishartWhite,
            EnsembleSpec::ComplexWishartCorrelated { .. } => EnsembleKind::ComplexWishartCorrelated,
            EnsembleSpec::ComplexWishartSpiked { .. } => EnsembleKind::ComplexWishartSpiked,
            EnsembleSpec::ComplexBeta { .. } => EnsembleKind::ComplexBeta,
            EnsembleSpec::Gue { .. } => EnsembleKind::Gue,
        }
    }

    /// Matrix dimension (number of eigenvalues).
    pub fn dim(&self) -> usize {
        match self {
            EnsembleSpec::RealWishart { p, .. }
            | EnsembleSpec::ComplexWishartWhite { p, .. }
            | EnsembleSpec::ComplexWishartSpiked { p, .. } => *p,
            EnsembleSpec::Goe { n } | EnsembleSpec::Gue { n } => *n,
            EnsembleSpec::RealBeta { s, .. } | EnsembleSpec::ComplexBeta { s, .. } => *s,
            EnsembleSpec::ComplexWishartCorrelated { sigma, .. } => sigma.len(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let dim = self.dim();
        if dim == 0 {
            return domain("matrix dimension must be at least 1");
        }
        match self {
            EnsembleSpec::RealWishart { p, m } | EnsembleSpec::ComplexWishartWhite { p, m } => {
                if m < p {
                    return domain(format!("Wishart requires m >= p, got p={p}, m={m}"));
                }
            }
            EnsembleSpec::Goe { .. } | EnsembleSpec::Gue { .. } => {}
            EnsembleSpec::RealBeta { m, n, .. } | EnsembleSpec::ComplexBeta { m, n, .. } => {
                for (name, v) in [("m", *m), ("n", *n)] {
                    if !(v >= 0.0) || !is_half_integer(v) {
                        return domain(format!(
                            "beta exponent {name} must be a nonnegative half-integer, got {v}"
                        ));
                    }
                }
            }
            EnsembleSpec::ComplexWishartCorrelated { m, sigma } => {
                if *m < sigma.len() {
                    return domain(format!(
                        "Wishart requires m >= p, got p={}, m={m}",
                        sigma.len()
                    ));
                }
                if sigma.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
                    return domain("covariance eigenvalues must be positive and finite");
                }
                for w in sigma.windows(2) {
                    if w[0] == w[1] {
                        return domain(format!(
                            "repeated covariance eigenvalue {}; use the spiked or white ensemble",
                            w[0]
                        ));
                    }
                    if w[0] < w[1] {
                        return domain("covariance eigenvalues must be strictly decreasing");
                    }
                }
            }
            EnsembleSpec::ComplexWishartSpiked {
                p,
                m,
                sigma1,
                sigma2,
            } => {
                if *p < 2 {
                    return domain(
                        "spiked covariance needs p >= 2; use the correlated or white ensemble for p = 1",
                    );
                }
                if m < p {
                    return domain(format!("Wishart requires m >= p, got p={p}, m={m}"));
                }
                if !(sigma2.is_finite() && *sigma2 > 0.0 && sigma1.is_finite()) {
                    return domain("spike parameters must be positive and finite");
                }
                if sigma1 <= sigma2 {
                    return domain(format!(
                        "spike requires sigma1 > sigma2, got {sigma1} <= {sigma2}"
                    ));
                }
            }
        }
        Ok(())
    }

    /// Interval containing every eigenvalue with probability one.
    pub fn support(&self) -> Interval {
        match self.kind() {
            EnsembleKind::Goe | EnsembleKind::Gue => Interval {
                lo: f64::NEG_INFINITY,
                hi: f64::INFINITY,
            },
            EnsembleKind::RealBeta | EnsembleKind::ComplexBeta => Interval { lo: 0.0, hi: 1.0 },
            _ => Interval {
                lo: 0.0,
                hi: f64::INFINITY,
            },
        }
    }

    /// Maps infinite endpoints onto the support edges and rejects finite
    /// endpoints outside the support.
    pub fn resolve(&self, iv: Interval) -> Result<Interval> {
        let sup = self.support();
        let lo = if iv.lo == f64::NEG_INFINITY {
            sup.lo
        } else {
            iv.lo
        };
        let hi = if iv.hi == f64::INFINITY { sup.hi } else { iv.hi };
        if lo < sup.lo || hi > sup.hi || lo > sup.hi || hi < sup.lo {
            return domain(format!(
                "interval {iv} is not contained in the {} support {sup}",
                self.kind()
            ));
        }
        Interval::new(lo, hi)
    }
}

/// Returns the support of `spec`.
pub fn support(spec: &EnsembleSpec) -> Interval {
    spec.support()
}

/// Beta exponents `(s, m, n)` for `(A+B)^{-1} B` where `A` and `B` are real
/// Wisharts of dimension `p_hat` with `m_hat` and `n_hat` degrees of freedom.
pub fn beta_params_from_dims(p_hat: usize, m_hat: usize, n_hat: usize) -> Result<(usize, f64, f64)> {
    if p_hat == 0 || m_hat < p_hat || n_hat < p_hat {
        return domain(format!(
            "double Wishart needs m_hat, n_hat >= p_hat >= 1, got p_hat={p_hat}, m_hat={m_hat}, n_hat={n_hat}"
        ));
    }
    let p = p_hat as f64;
    Ok((
        p_hat,
        (n_hat as f64 - p - 1.0) / 2.0,
        (m_hat as f64 - p - 1.0) / 2.0,
    ))
}

/// Closed interval with possibly infinite endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    #[serde(with = "endpoint")]
    pub lo: f64,
    #[serde(with = "endpoint")]
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Interval> {
        if lo.is_nan() || hi.is_nan() {
            return domain("interval endpoints must not be NaN");
        }
        if lo > hi {
            return domain(format!("interval lower end {lo} exceeds upper end {hi}"));
        }
        if lo == f64::INFINITY || hi == f64::NEG_INFINITY {
            return domain("interval is empty at infinity");
        }
        Ok(Interval { lo, hi })
    }

    pub fn full() -> Interval {
        Interval {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Finite endpoints as JSON numbers, infinite ones as `"inf"` / `"-inf"`.
mod endpoint {
    use serde::de::{self, Visitor};
    use serde::{Deserializer, Serializer};
    use std::fmt;

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if *v == f64::INFINITY {
            s.serialize_str("inf")
        } else if *v == f64::NEG_INFINITY {
            s.serialize_str("-inf")
        } else {
            s.serialize_f64(*v)
        }
    }

    struct EndpointVisitor;

    impl Visitor<'_> for EndpointVisitor {
        type Value = f64;

        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("a number or \"inf\" / \"-inf\"")
        }

        fn visit_f64<E: de::Error>(self, v: f64) -> Result<f64, E> {
            Ok(v)
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> Result<f64, E> {
            Ok(v as f64)
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> Result<f64, E> {
            Ok(v as f64)
        }

        fn visit_str<E: de::Error>(self, v: &str) -> Result<f64, E> {
            super::parse_endpoint(v).ok_or_else(|| E::custom(format!("bad endpoint {v:?}")))
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        d.deserialize_any(EndpointVisitor)
    }
}

/// Parses a number or a case-insensitive `inf`, `+inf`, `-inf`.
pub fn parse_endpoint(token: &str) -> Option<f64> {
    let t = token.trim();
    match t.to_ascii_lowercase().as_str() {
        "inf" | "+inf" | "infinity" | "+infinity" => Some(f64::INFINITY),
        "-inf" | "-infinity" => Some(f64::NEG_INFINITY),
        _ => t.parse::<f64>().ok().filter(|v| !v.is_nan()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn supports() {
        let w = EnsembleSpec::RealWishart { p: 3, m: 4 };
        assert_eq!(w.support(), Interval { lo: 0.0, hi: f64::INFINITY });
        let b = EnsembleSpec::RealBeta { s: 2, m: 1.0, n: 1.0 };
        assert_eq!(support(&b), Interval { lo: 0.0, hi: 1.0 });
        let g = EnsembleSpec::Goe { n: 4 };
        assert_eq!(g.support(), Interval::full());
    }

    #[test]
    fn beta_dims() {
        assert_eq!(beta_params_from_dims(2, 5, 5).unwrap(), (2, 1.0, 1.0));
        assert_eq!(beta_params_from_dims(3, 4, 6).unwrap(), (3, 1.0, 0.0));
        assert_eq!(beta_params_from_dims(1, 3, 3).unwrap(), (1, 0.5, 0.5));
        assert!(beta_params_from_dims(3, 2, 6).is_err());
        assert!(beta_params_from_dims(0, 2, 6).is_err());
    }

    #[test]
    fn validation() {
        assert!(EnsembleSpec::RealWishart { p: 3, m: 2 }.validate().is_err());
        assert!(EnsembleSpec::RealWishart { p: 3, m: 3 }.validate().is_ok());
        assert!(EnsembleSpec::Goe { n: 0 }.validate().is_err());
        assert!(EnsembleSpec::RealBeta { s: 2, m: 0.3, n: 1.0 }.validate().is_err());
        assert!(EnsembleSpec::RealBeta { s: 2, m: -0.5, n: 1.0 }.validate().is_err());
        assert!(EnsembleSpec::ComplexBeta { s: 2, m: 0.5, n: 0.0 }.validate().is_ok());
        let rep = EnsembleSpec::ComplexWishartCorrelated { m: 3, sigma: vec![2.0, 2.0] };
        let msg = rep.validate().unwrap_err().to_string();
        assert!(msg.contains("spiked"), "{msg}");
        let inc = EnsembleSpec::ComplexWishartCorrelated { m: 3, sigma: vec![1.0, 2.0] };
        assert!(inc.validate().is_err());
        let sp = |s1, s2, p| EnsembleSpec::ComplexWishartSpiked { p, m: 3, sigma1: s1, sigma2: s2 };
        assert!(sp(1.0, 2.0, 2).validate().is_err());
        assert!(sp(2.0, 2.0, 2).validate().is_err());
        assert!(sp(2.0, 1.0, 1).validate().is_err());
        assert!(sp(2.0, 1.0, 3).validate().is_ok());
    }

    #[test]
    fn resolve_maps_infinities() {
        let w = EnsembleSpec::RealWishart { p: 2, m: 2 };
        let r = w.resolve(Interval::new(f64::NEG_INFINITY, 3.0).unwrap()).unwrap();
        assert_eq!(r, Interval { lo: 0.0, hi: 3.0 });
        assert!(w.resolve(Interval::new(-1.0, 3.0).unwrap()).is_err());
        let b = EnsembleSpec::ComplexBeta { s: 2, m: 0.0, n: 0.0 };
        assert_eq!(b.resolve(Interval::full()).unwrap(), Interval { lo: 0.0, hi: 1.0 });
        assert!(b.resolve(Interval::new(0.2, 1.5).unwrap()).is_err());
    }

    #[test]
    fn interval_checks_and_tokens() {
        assert!(Interval::new(2.0, 1.0).is_err());
        assert!(Interval::new(f64::NAN, 1.0).is_err());
        assert!(Interval::new(1.0, 1.0).unwrap().is_degenerate());
        assert_eq!(parse_endpoint("INF"), Some(f64::INFINITY));
        assert_eq!(parse_endpoint("-Inf"), Some(f64::NEG_INFINITY));
        assert_eq!(parse_endpoint("2.5"), Some(2.5));
        assert_eq!(parse_endpoint("nan"), None);
        assert_eq!(parse_endpoint("x"), None);
    }
}
