//! Fincke-Pohst enumeration of integer points in an ellipsoid
//! `(x - c)^T A (x - c) <= R` for a positive definite real form `A`.
//!
//! The search runs on the Cholesky factor coordinate by coordinate, from the
//! last to the first. `R` is padded by a relative `1e-9` so that points on the
//! boundary are never lost to floating point rounding; callers filter the
//! output exactly.

use crate::error::{Error, Result};
use nalgebra::DMatrix;

/// Enumeration cap; exceeding it is reported rather than silently truncated.
pub const DEFAULT_LIMIT: usize = 5_000_000;

pub fn enumerate(a: &DMatrix<f64>, center: &[f64], radius_sq: f64) -> Result<Vec<Vec<i64>>> {
    enumerate_with_limit(a, center, radius_sq, DEFAULT_LIMIT)
}

pub fn enumerate_with_limit(a: &DMatrix<f64>, center: &[f64], radius_sq: f64, limit: usize) -> Result<Vec<Vec<i64>>> {
    let n = a.nrows();
    if n == 0 {
        return Ok(vec![Vec::new()]);
    }
    if !radius_sq.is_finite() || radius_sq < 0.0 {
        return Ok(Vec::new());
    }
    let chol = a
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Invalid("majorant is not positive definite".into()))?;
    let l = chol.l();
    // A = L L^T = R^T R with R = L^T upper triangular
    let mut q_diag = vec![0.0; n];
    let mut mu = vec![vec![0.0; n]; n];
    for i in 0..n {
        let rii = l[(i, i)];
        q_diag[i] = rii * rii;
        for j in (i + 1)..n {
            mu[i][j] = l[(j, i)] / rii;
        }
    }
    let bound = radius_sq * (1.0 + 1e-9) + 1e-9;
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    let mut state = Search {
        n,
        q_diag: &q_diag,
        mu: &mu,
        center,
        bound,
        limit,
    };
    state.recurse(n - 1, 0.0, &mut x, &mut out)?;
    out.sort();
    Ok(out)
}

struct Search<'a> {
    n: usize,
    q_diag: &'a [f64],
    mu: &'a [Vec<f64>],
    center: &'a [f64],
    bound: f64,
    limit: usize,
}

impl Search<'_> {
    fn recurse(&mut self, i: usize, partial: f64, x: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) -> Result<()> {
        let mut shift = self.center[i];
        for j in (i + 1)..self.n {
            shift -= self.mu[i][j] * (x[j] as f64 - self.center[j]);
        }
        let room = (self.bound - partial) / self.q_diag[i];
        if room < 0.0 {
            return Ok(());
        }
        let w = room.sqrt();
        let lo = (shift - w).ceil() as i64;
        let hi = (shift + w).floor() as i64;
        for v in lo..=hi {
            let d = v as f64 - shift;
            let p = partial + self.q_diag[i] * d * d;
            if p > self.bound {
                continue;
            }
            x[i] = v;
            if i == 0 {
                out.push(x.clone());
                if out.len() > self.limit {
                    return Err(Error::Invalid(format!(
                        "short-vector enumeration exceeded {} points",
                        self.limit
                    )));
                }
            } else {
                self.recurse(i - 1, p, x, out)?;
            }
        }
        x[i] = 0;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(a: &DMatrix<f64>, c: &[f64], r: f64, b: i64) -> Vec<Vec<i64>> {
        let n = a.nrows();
        let mut out = Vec::new();
        let total = (2 * b + 1).pow(n as u32);
        for idx in 0..total {
            let mut k = idx;
            let x: Vec<i64> = (0..n)
                .map(|_| {
                    let d = k % (2 * b + 1);
                    k /= 2 * b + 1;
                    d - b
                })
                .collect();
            let mut q = 0.0;
            for i in 0..n {
                for j in 0..n {
                    q += (x[i] as f64 - c[i]) * a[(i, j)] * (x[j] as f64 - c[j]);
                }
            }
            if q <= r + 1e-9 {
                out.push(x);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn matches_brute_force_on_skewed_form() {
        let a = DMatrix::from_row_slice(3, 3, &[2.0, 0.9, 0.3, 0.9, 1.5, -0.4, 0.3, -0.4, 1.1]);
        let c = [0.3, -0.7, 0.2];
        for r in [0.5, 2.0, 6.5] {
            assert_eq!(enumerate(&a, &c, r).unwrap(), brute(&a, &c, r, 6));
        }
    }

    #[test]
    fn identity_form_counts_lattice_points() {
        let a = DMatrix::<f64>::identity(2, 2);
        let pts = enumerate(&a, &[0.0, 0.0], 1.0).unwrap();
        assert_eq!(pts.len(), 5);
    }

    #[test]
    fn limit_is_reported() {
        let a = DMatrix::<f64>::identity(3, 3);
        assert!(enumerate_with_limit(&a, &[0.0; 3], 100.0, 10).is_err());
    }
}
