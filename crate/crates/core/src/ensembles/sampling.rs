//! Double-precision matrix draws.
//!
//! Draws are split into fixed-size shards. Shard `k` uses a ChaCha8 stream
//! seeded with `seed` and stream number `k`, and normals come from the
//! ziggurat sampler in `rand_distr`. Shards run in parallel and are merged in
//! shard order, so results do not depend on the thread count.

use nalgebra::{ComplexField, DMatrix};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{EnsembleSpec, Interval};
use crate::error::{domain, Error, Result};

const SHARD: usize = 4096;

/// Sorted eigenvalues of `count` independent draws.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleBatch {
    pub eigenvalue_sets: Vec<Vec<f64>>,
    pub seed: u64,
    pub count: usize,
}

/// Fraction of draws with every eigenvalue in the interval, with its
/// binomial standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_err: f64,
    pub hits: u64,
    pub count: u64,
}

trait Entry: ComplexField<RealField = f64> + Copy + Default {
    /// Circularly symmetric Gaussian with `E|z|^2 = variance`.
    fn gaussian(rng: &mut ChaCha8Rng, variance: f64) -> Self;
}

impl Entry for f64 {
    fn gaussian(rng: &mut ChaCha8Rng, variance: f64) -> f64 {
        variance.sqrt() * rng.sample::<f64, _>(StandardNormal)
    }
}

impl Entry for Complex64 {
    fn gaussian(rng: &mut ChaCha8Rng, variance: f64) -> Complex64 {
        let sd = (variance / 2.0).sqrt();
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(sd * re, sd * im)
    }
}

/// A draw is either a single hermitian matrix or a pencil `(total, b)` whose
/// generalized eigenvalues are those of `total^{-1} b`. Only the lower
/// triangle (row-major) is filled.
enum Draw<T> {
    Single(Vec<T>),
    Pencil { total: Vec<T>, b: Vec<T> },
}

/// Shape of the draw for one spec, with every parameter already checked.
#[derive(Clone, Debug)]
enum Recipe {
    Wishart { row_var: Vec<f64>, m: usize },
    Wigner { n: usize, diag_var: f64 },
    Beta { s: usize, m_hat: usize, n_hat: usize },
}

enum Field {
    Real,
    Complex,
}

fn recipe(spec: &EnsembleSpec) -> Result<(Field, Recipe)> {
    spec.validate()?;
    Ok(match spec {
        EnsembleSpec::RealWishart { p, m } => (
            Field::Real,
            Recipe::Wishart {
                row_var: vec![1.0; *p],
                m: *m,
            },
        ),
        EnsembleSpec::ComplexWishartWhite { p, m } => (
            Field::Complex,
            Recipe::Wishart {
                row_var: vec![1.0; *p],
                m: *m,
            },
        ),
        EnsembleSpec::ComplexWishartCorrelated { m, sigma } => (
            Field::Complex,
            Recipe::Wishart {
                row_var: sigma.clone(),
                m: *m,
            },
        ),
        EnsembleSpec::ComplexWishartSpiked {
            p,
            m,
            sigma1,
            sigma2,
        } => {
            let mut row_var = vec![*sigma2; *p];
            row_var[0] = *sigma1;
            (Field::Complex, Recipe::Wishart { row_var, m: *m })
        }
        EnsembleSpec::Goe { n } => (Field::Real, Recipe::Wigner { n: *n, diag_var: 1.0 }),
        EnsembleSpec::Gue { n } => (Field::Complex, Recipe::Wigner { n: *n, diag_var: 0.5 }),
        EnsembleSpec::RealBeta { s, m, n } => {
            // Half-integer exponents always invert to integer dimensions.
            let m_hat = (2.0 * n) as usize + s + 1;
            let n_hat = (2.0 * m) as usize + s + 1;
            (Field::Real, Recipe::Beta { s: *s, m_hat, n_hat })
        }
        EnsembleSpec::ComplexBeta { s, m, n } => {
            if m.fract() != 0.0 || n.fract() != 0.0 {
                return Err(Error::UnsupportedSampling(format!(
                    "complex beta exponents m={m}, n={n} admit no integer Wishart dimensions"
                )));
            }
            let m_hat = *n as usize + s;
            let n_hat = *m as usize + s;
            (Field::Complex, Recipe::Beta { s: *s, m_hat, n_hat })
        }
    })
}

/// Lower triangle of `X X^H` for a `p x m` Gaussian `X` with row variances.
fn gram<T: Entry>(rng: &mut ChaCha8Rng, row_var: &[f64], m: usize, x: &mut Vec<T>) -> Vec<T> {
    let p = row_var.len();
    x.clear();
    for &v in row_var {
        for _ in 0..m {
            x.push(T::gaussian(rng, v));
        }
    }
    let mut out = vec![T::default(); p * p];
    for i in 0..p {
        let xi = &x[i * m..(i + 1) * m];
        for j in 0..=i {
            let xj = &x[j * m..(j + 1) * m];
            let mut acc = T::default();
            for k in 0..m {
                acc += xi[k] * xj[k].conjugate();
            }
            out[i * p + j] = acc;
        }
    }
    out
}

fn draw<T: Entry>(rng: &mut ChaCha8Rng, recipe: &Recipe, scratch: &mut Vec<T>) -> Draw<T> {
    match recipe {
        Recipe::Wishart { row_var, m } => Draw::Single(gram(rng, row_var, *m, scratch)),
        Recipe::Wigner { n, diag_var } => {
            let n = *n;
            let mut out = vec![T::default(); n * n];
            for i in 0..n {
                for j in 0..i {
                    out[i * n + j] = T::gaussian(rng, 0.5);
                }
                out[i * n + i] = T::from_real(f64::gaussian(rng, *diag_var));
            }
            Draw::Single(out)
        }
        Recipe::Beta { s, m_hat, n_hat } => {
            let ones = vec![1.0; *s];
            let a = gram::<T>(rng, &ones, *m_hat, scratch);
            let b = gram::<T>(rng, &ones, *n_hat, scratch);
            let total = a.iter().zip(&b).map(|(x, y)| *x + *y).collect();
            Draw::Pencil { total, b }
        }
    }
}

/// In-place Cholesky on the lower triangle; `true` when positive definite.
fn is_positive_definite<T: Entry>(a: &mut [T], n: usize) -> bool {
    for j in 0..n {
        let mut d = a[j * n + j].real();
        for k in 0..j {
            d -= a[j * n + k].modulus_squared();
        }
        if !(d > 0.0) {
            return false;
        }
        let d = d.sqrt();
        a[j * n + j] = T::from_real(d);
        for i in j + 1..n {
            let mut v = a[i * n + j];
            for k in 0..j {
                v -= a[i * n + k] * a[j * n + k].conjugate();
            }
            a[i * n + j] = v.unscale(d);
        }
    }
    true
}

/// Lower triangle of `c_b * b + c_t * t`, where `t` defaults to the identity.
fn combine<T: Entry>(b: &[T], t: Option<&[T]>, c_b: f64, c_t: f64, n: usize, out: &mut Vec<T>) {
    out.clear();
    out.extend(b.iter().map(|x| x.scale(c_b)));
    match t {
        Some(t) => {
            for (o, x) in out.iter_mut().zip(t) {
                *o += x.scale(c_t);
            }
        }
        None => {
            for i in 0..n {
                out[i * n + i] += T::from_real(c_t);
            }
        }
    }
}

/// Which interval ends need an explicit check; ends at or beyond the support
/// edges hold with probability one.
struct Bounds {
    lo: Option<f64>,
    hi: Option<f64>,
}

fn all_inside<T: Entry>(d: &Draw<T>, n: usize, bounds: &Bounds, buf: &mut Vec<T>) -> bool {
    let (b, t) = match d {
        Draw::Single(m) => (m.as_slice(), None),
        Draw::Pencil { total, b } => (b.as_slice(), Some(total.as_slice())),
    };
    if let Some(lo) = bounds.lo {
        combine(b, t, 1.0, -lo, n, buf);
        if !is_positive_definite(buf, n) {
            return false;
        }
    }
    if let Some(hi) = bounds.hi {
        combine(b, t, -1.0, hi, n, buf);
        if !is_positive_definite(buf, n) {
            return false;
        }
    }
    true
}

fn full_matrix<T: Entry>(lower: &[T], n: usize) -> DMatrix<T> {
    DMatrix::from_fn(n, n, |i, j| {
        if i >= j {
            lower[i * n + j]
        } else {
            lower[j * n + i].conjugate()
        }
    })
}

fn eigenvalues<T: Entry>(d: &Draw<T>, n: usize) -> Vec<f64> {
    let mut ev: Vec<f64> = match d {
        Draw::Single(m) => full_matrix(m, n).symmetric_eigenvalues().iter().copied().collect(),
        Draw::Pencil { total, b } => {
            // total = L L^H; the pencil eigenvalues are those of L^{-1} b L^{-H}.
            let l = full_matrix(total, n)
                .cholesky()
                .expect("sum of two Wisharts with full rank is positive definite")
                .l();
            let y = l
                .solve_lower_triangular(&full_matrix(b, n))
                .expect("nonsingular triangle");
            let c = l
                .solve_lower_triangular(&y.adjoint())
                .expect("nonsingular triangle")
                .adjoint();
            let c = (&c + c.adjoint()).unscale(2.0);
            c.symmetric_eigenvalues().iter().copied().collect()
        }
    };
    ev.sort_by(f64::total_cmp);
    ev
}

fn shard_rng(seed: u64, shard: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shard as u64);
    rng
}

fn shard_sizes(count: usize) -> Vec<usize> {
    (0..count.div_ceil(SHARD))
        .map(|k| SHARD.min(count - k * SHARD))
        .collect()
}

fn sample_typed<T: Entry>(recipe: &Recipe, n: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let shards: Vec<Vec<Vec<f64>>> = shard_sizes(count)
        .into_par_iter()
        .enumerate()
        .map(|(k, size)| {
            let mut rng = shard_rng(seed, k);
            let mut scratch = Vec::new();
            (0..size)
                .map(|_| eigenvalues(&draw::<T>(&mut rng, recipe, &mut scratch), n))
                .collect()
        })
        .collect();
    shards.into_iter().flatten().collect()
}

fn count_typed<T: Entry>(recipe: &Recipe, n: usize, bounds: &Bounds, count: usize, seed: u64) -> u64 {
    shard_sizes(count)
        .into_par_iter()
        .enumerate()
        .map(|(k, size)| {
            let mut rng = shard_rng(seed, k);
            let mut scratch = Vec::new();
            let mut buf = Vec::new();
            let mut hits = 0u64;
            for _ in 0..size {
                let d = draw::<T>(&mut rng, recipe, &mut scratch);
                if all_inside(&d, n, bounds, &mut buf) {
                    hits += 1;
                }
            }
            hits
        })
        .sum()
}

/// Draws `count` matrices and returns their sorted eigenvalues.
pub fn sample(spec: &EnsembleSpec, count: usize, seed: u64) -> Result<SampleBatch> {
    if count == 0 {
        return domain("sample count must be at least 1");
    }
    let (field, recipe) = recipe(spec)?;
    let n = spec.dim();
    let eigenvalue_sets = match field {
        Field::Real => sample_typed::<f64>(&recipe, n, count, seed),
        Field::Complex => sample_typed::<Complex64>(&recipe, n, count, seed),
    };
    Ok(SampleBatch {
        eigenvalue_sets,
        seed,
        count,
    })
}

/// Monte Carlo estimate of the probability that all eigenvalues lie in `iv`.
///
/// Membership is decided with two Cholesky tests per draw rather than an
/// eigensolve: every eigenvalue is at least `lo` iff `M - lo I` is positive
/// definite, and likewise for `hi I - M` (with `I` replaced by `A + B` for the
/// beta pencils).
pub fn mc_psi(spec: &EnsembleSpec, iv: Interval, count: usize, seed: u64) -> Result<McEstimate> {
    if count < 100 {
        return domain(format!("Monte Carlo needs at least 100 draws, got {count}"));
    }
    let (field, recipe) = recipe(spec)?;
    let iv = spec.resolve(iv)?;
    let sup = spec.support();
    let bounds = Bounds {
        lo: (iv.lo > sup.lo).then_some(iv.lo),
        hi: (iv.hi < sup.hi).then_some(iv.hi),
    };
    let n = spec.dim();
    let hits = if bounds.lo.is_none() && bounds.hi.is_none() {
        count as u64
    } else {
        match field {
            Field::Real => count_typed::<f64>(&recipe, n, &bounds, count, seed),
            Field::Complex => count_typed::<Complex64>(&recipe, n, &bounds, count, seed),
        }
    };
    let estimate = hits as f64 / count as f64;
    Ok(McEstimate {
        estimate,
        std_err: (estimate * (1.0 - estimate) / count as f64).sqrt(),
        hits,
        count: count as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cholesky_test_matches_definiteness() {
        let mut a = vec![2.0, 0.0, 1.0, 2.0];
        assert!(is_positive_definite(&mut a, 2));
        let mut b = vec![1.0, 0.0, 2.0, 1.0];
        assert!(!is_positive_definite(&mut b, 2));
        let i = Complex64::i();
        let mut c = vec![Complex64::new(2.0, 0.0), Complex64::default(), i, Complex64::new(2.0, 0.0)];
        assert!(is_positive_definite(&mut c, 2));
        let mut d = vec![Complex64::new(1.0, 0.0), Complex64::default(), 2.0 * i, Complex64::new(1.0, 0.0)];
        assert!(!is_positive_definite(&mut d, 2));
    }

    #[test]
    fn shards_cover_count() {
        assert_eq!(shard_sizes(1), vec![1]);
        assert_eq!(shard_sizes(SHARD), vec![SHARD]);
        assert_eq!(shard_sizes(SHARD + 3), vec![SHARD, 3]);
    }

    #[test]
    fn pencil_eigenvalues_match_membership() {
        let spec = EnsembleSpec::RealBeta { s: 3, m: 1.0, n: 0.5 };
        let (_, r) = recipe(&spec).unwrap();
        let mut rng = shard_rng(7, 0);
        let mut scratch = Vec::new();
        for _ in 0..200 {
            let d = draw::<f64>(&mut rng, &r, &mut scratch);
            let ev = eigenvalues(&d, 3);
            assert!(ev[0] > 0.0 && ev[2] < 1.0);
            let bounds = Bounds { lo: Some(0.2), hi: Some(0.8) };
            let mut buf = Vec::new();
            let inside = ev[0] >= 0.2 && ev[2] <= 0.8;
            assert_eq!(all_inside(&d, 3, &bounds, &mut buf), inside);
        }
    }

    #[test]
    fn complex_beta_needs_integer_exponents() {
        let spec = EnsembleSpec::ComplexBeta { s: 2, m: 0.5, n: 1.0 };
        assert!(matches!(sample(&spec, 10, 1), Err(Error::UnsupportedSampling(_))));
        assert!(matches!(
            mc_psi(&spec, Interval { lo: 0.1, hi: 0.9 }, 100, 1),
            Err(Error::UnsupportedSampling(_))
        ));
    }
}
