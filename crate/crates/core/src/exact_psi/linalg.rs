//! Kernel matrices and the two reductions applied to them: a pivoted
//! Pfaffian for skew-symmetric kernels and a pivoted LU determinant for
//! general ones. Both return sign and log-magnitude.

use rug::ops::NegAssign;
use rug::{Assign, Float};

use crate::error::{Error, Result};
use crate::hp_math::{BigReal, LogScaled, Sign};

/// Even-dimensional skew-symmetric kernel with its constant prefactor.
///
/// Only the strict upper triangle is stored; `get(j, i) = -get(i, j)` and
/// the diagonal is zero by construction. Indices are zero-based.
#[derive(Clone, Debug)]
pub struct SkewKernel {
    dim: usize,
    rows: Vec<Vec<BigReal>>,
    log_const: LogScaled,
}

impl SkewKernel {
    /// Zero kernel; `dim` must be even.
    pub fn zeros(dim: usize, bits: u32, log_const: LogScaled) -> Result<SkewKernel> {
        if dim == 0 || dim % 2 != 0 {
            return Err(Error::InternalConsistency(format!(
                "skew kernel dimension must be even and positive, got {dim}"
            )));
        }
        let rows = (0..dim)
            .map(|i| vec![Float::new(bits); dim - i - 1])
            .collect();
        Ok(SkewKernel {
            dim,
            rows,
            log_const,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn log_const(&self) -> &LogScaled {
        &self.log_const
    }

    /// Sets entry `(i, j)` for `i < j`; entry `(j, i)` follows.
    pub fn set(&mut self, i: usize, j: usize, value: &BigReal) {
        assert!(i < j && j < self.dim, "skew kernel set({i}, {j}) out of range");
        self.rows[i][j - i - 1].assign(value);
    }

    pub fn get(&self, i: usize, j: usize) -> BigReal {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.rows[i][j - i - 1].clone(),
            std::cmp::Ordering::Greater => -self.rows[j][i - j - 1].clone(),
            std::cmp::Ordering::Equal => Float::new(self.rows[0][0].prec()),
        }
    }
}

/// Square kernel evaluated through its determinant.
#[derive(Clone, Debug)]
pub struct DetKernel {
    dim: usize,
    entries: Vec<BigReal>,
    log_const: LogScaled,
}

impl DetKernel {
    pub fn zeros(dim: usize, bits: u32, log_const: LogScaled) -> DetKernel {
        DetKernel {
            dim,
            entries: vec![Float::new(bits); dim * dim],
            log_const,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn log_const(&self) -> &LogScaled {
        &self.log_const
    }

    pub fn set(&mut self, i: usize, j: usize, value: &BigReal) {
        self.entries[i * self.dim + j].assign(value);
    }

    pub fn get(&self, i: usize, j: usize) -> &BigReal {
        &self.entries[i * self.dim + j]
    }
}

/// Swaps indices `r < s` of the trailing block (indices `>= from`) of a skew
/// matrix stored as strict upper rows.
fn swap_indices(rows: &mut [Vec<Float>], from: usize, r: usize, s: usize) {
    let n = rows.len();
    for t in from..r {
        rows[t].swap(r - t - 1, s - t - 1);
    }
    for t in r + 1..s {
        let (head, tail) = rows.split_at_mut(t);
        let rt = &mut head[r][t - r - 1];
        let ts = &mut tail[0][s - t - 1];
        std::mem::swap(rt, ts);
        rt.neg_assign();
        ts.neg_assign();
    }
    {
        let (head, tail) = rows.split_at_mut(s);
        let row_r = &mut head[r];
        let row_s = &mut tail[0];
        for t in s + 1..n {
            std::mem::swap(&mut row_r[t - r - 1], &mut row_s[t - s - 1]);
        }
    }
    rows[r][s - r - 1].neg_assign();
}

/// Signed Pfaffian by elimination in 2x2 blocks.
///
/// At step `k` the largest entry of row `k` is moved to `(k, k+1)`, which
/// becomes the block pivot `a`; the trailing block then receives the rank-2
/// update `A_ij -= (A_ki A_{k+1,j} - A_{k+1,i} A_kj) / a`.
pub fn pfaffian(kernel: &SkewKernel) -> LogScaled {
    let n = kernel.dim;
    let bits = kernel.rows[0][0].prec();
    let mut rows = kernel.rows.clone();
    let mut sign = Sign::Positive;
    let mut log = Float::new(bits);
    let mut tmp = Float::new(bits);
    for k in (0..n).step_by(2) {
        let mut piv = 0;
        for (off, v) in rows[k].iter().enumerate().skip(1) {
            if v.cmp_abs(&rows[k][piv]) == Some(std::cmp::Ordering::Greater) {
                piv = off;
            }
        }
        if rows[k][piv].is_zero() {
            return LogScaled::zero(bits);
        }
        if piv != 0 {
            swap_indices(&mut rows, k, k + 1, k + 1 + piv);
            sign = sign.flip();
        }
        let a = rows[k][0].clone();
        sign = sign.times(Sign::of(&a));
        log += Float::with_val(bits, a.abs_ref()).ln();
        if k + 2 == n {
            break;
        }
        let xs: Vec<Float> = rows[k][1..]
            .iter()
            .map(|x| Float::with_val(bits, x / &a))
            .collect();
        let (head, tail) = rows.split_at_mut(k + 2);
        let ys = &head[k + 1];
        for (ti, row) in tail.iter_mut().enumerate() {
            let (xi, yi) = (&xs[ti], &ys[ti]);
            for (off, entry) in row.iter_mut().enumerate() {
                let idx = ti + 1 + off;
                tmp.assign(xi * &ys[idx] - yi * &xs[idx]);
                *entry -= &tmp;
            }
        }
    }
    let mag = LogScaled::from_log(log);
    match sign {
        Sign::Negative => mag.negated(),
        _ => mag,
    }
}

/// `(1/2) ln det K`, i.e. the log of `|Pf K|`.
///
/// The Pfaffian is computed directly, so the determinant it squares is
/// nonnegative by construction.
pub fn log_sqrt_det_skew(kernel: &SkewKernel) -> LogScaled {
    pfaffian(kernel).abs()
}

/// Signed determinant by LU with partial pivoting.
pub fn determinant(kernel: &DetKernel) -> LogScaled {
    let n = kernel.dim;
    if n == 0 {
        return LogScaled::one(64);
    }
    let bits = kernel.entries[0].prec();
    let mut a = kernel.entries.clone();
    let mut sign = Sign::Positive;
    let mut log = Float::new(bits);
    let mut factor = Float::new(bits);
    let mut tmp = Float::new(bits);
    for k in 0..n {
        let mut piv = k;
        for r in k + 1..n {
            if a[r * n + k].cmp_abs(&a[piv * n + k]) == Some(std::cmp::Ordering::Greater) {
                piv = r;
            }
        }
        if a[piv * n + k].is_zero() {
            return LogScaled::zero(bits);
        }
        if piv != k {
            for c in 0..n {
                a.swap(k * n + c, piv * n + c);
            }
            sign = sign.flip();
        }
        let (head, tail) = a.split_at_mut((k + 1) * n);
        let pivot_row = &head[k * n..];
        let d = &pivot_row[k];
        sign = sign.times(Sign::of(d));
        log += Float::with_val(bits, d.abs_ref()).ln();
        for row in tail.chunks_mut(n) {
            factor.assign(&row[k] / d);
            for c in k + 1..n {
                tmp.assign(&factor * &pivot_row[c]);
                row[c] -= &tmp;
            }
        }
    }
    let mag = LogScaled::from_log(log);
    match sign {
        Sign::Negative => mag.negated(),
        _ => mag,
    }
}
