//! Exact integer matrix routines: Hermite and Smith normal forms, integer
//! kernels, Bareiss determinants and rational congruence diagonalization.
//!
//! Matrices are dense `Vec<Vec<BigInt>>` in row-major order. Everything in
//! here is exact; callers convert back to machine integers with checks.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type BigMat = Vec<Vec<BigInt>>;

pub fn to_big(m: &[Vec<i64>]) -> BigMat {
    m.iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

pub fn to_i64(m: &BigMat) -> Option<Vec<Vec<i64>>> {
    m.iter().map(|row| row.iter().map(|x| x.to_i64()).collect()).collect()
}

pub fn identity(n: usize) -> BigMat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

pub fn transpose(m: &BigMat) -> BigMat {
    if m.is_empty() {
        return Vec::new();
    }
    let (r, c) = (m.len(), m[0].len());
    (0..c).map(|j| (0..r).map(|i| m[i][j].clone()).collect()).collect()
}

pub fn mul(a: &BigMat, b: &BigMat) -> BigMat {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = BigInt::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            acc += &row[k] * &b[k][j];
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Extended gcd with `g >= 0` and `a*x + b*y = g`.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

fn combine_rows(m: &mut BigMat, i: usize, j: usize, a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) {
    // (row_i, row_j) <- (a*row_i + b*row_j, c*row_i + d*row_j)
    let cols = m[i].len();
    for k in 0..cols {
        let ri = m[i][k].clone();
        let rj = m[j][k].clone();
        m[i][k] = a * &ri + b * &rj;
        m[j][k] = c * &ri + d * &rj;
    }
}

/// Row-style Hermite normal form. Returns `(H, U)` with `U` unimodular and
/// `U * A = H`. Pivots are positive and entries above a pivot are reduced
/// into `[0, pivot)`. Zero rows collect at the bottom.
pub fn hnf_with_transform(a: &BigMat) -> (BigMat, BigMat) {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut h = a.clone();
    let mut u = identity(rows);
    let mut pivot_row = 0;
    for col in 0..cols {
        if pivot_row == rows {
            break;
        }
        for r in (pivot_row + 1)..rows {
            if h[r][col].is_zero() {
                continue;
            }
            let x = h[pivot_row][col].clone();
            let y = h[r][col].clone();
            let (g, s, t) = ext_gcd(&x, &y);
            let (xg, yg) = (&x / &g, &y / &g);
            let neg_yg = -yg;
            combine_rows(&mut h, pivot_row, r, &s, &t, &neg_yg, &xg);
            combine_rows(&mut u, pivot_row, r, &s, &t, &neg_yg, &xg);
        }
        if h[pivot_row][col].is_zero() {
            continue;
        }
        if h[pivot_row][col].is_negative() {
            for k in 0..cols {
                h[pivot_row][k] = -h[pivot_row][k].clone();
            }
            for k in 0..rows {
                u[pivot_row][k] = -u[pivot_row][k].clone();
            }
        }
        let p = h[pivot_row][col].clone();
        for r in 0..pivot_row {
            let q = h[r][col].div_floor(&p);
            if q.is_zero() {
                continue;
            }
            for k in 0..cols {
                let t = &q * &h[pivot_row][k];
                h[r][k] -= t;
            }
            for k in 0..rows {
                let t = &q * &u[pivot_row][k];
                u[r][k] -= t;
            }
        }
        pivot_row += 1;
    }
    (h, u)
}

pub fn hnf(a: &BigMat) -> BigMat {
    hnf_with_transform(a).0
}

/// Basis of `{x in Z^n : A x = 0}` in Hermite normal form (rows).
pub fn integer_kernel(a: &BigMat, n: usize) -> BigMat {
    if a.is_empty() {
        return identity(n);
    }
    let (h, u) = hnf_with_transform(&transpose(a));
    let mut kernel: BigMat = h
        .iter()
        .zip(u.iter())
        .filter(|(row, _)| row.iter().all(|x| x.is_zero()))
        .map(|(_, urow)| urow.clone())
        .collect();
    if kernel.is_empty() {
        return kernel;
    }
    kernel = hnf(&kernel);
    kernel.retain(|row| row.iter().any(|x| !x.is_zero()));
    kernel
}

/// Unimodular matrix whose first row is the primitive vector `c`.
pub fn complete_to_unimodular(c: &[BigInt]) -> Option<BigMat> {
    let n = c.len();
    let column: BigMat = c.iter().map(|x| vec![x.clone()]).collect();
    let (h, u) = hnf_with_transform(&column);
    if !h[0][0].is_one() {
        return None;
    }
    // u * c = e1, so c is the first column of u^{-1}; its transpose has c first.
    let inv = inverse_unimodular(&u)?;
    let t = transpose(&inv);
    debug_assert_eq!(t[0], c.to_vec());
    let _ = n;
    Some(t)
}

/// Inverse of a unimodular integer matrix.
pub fn inverse_unimodular(u: &BigMat) -> Option<BigMat> {
    let n = u.len();
    let mut aug: BigMat = u
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            r
        })
        .collect();
    let (h, _) = hnf_with_transform(&aug);
    aug = h;
    for (i, row) in aug.iter().enumerate() {
        for (j, x) in row.iter().take(n).enumerate() {
            let want = if i == j { BigInt::one() } else { BigInt::zero() };
            if *x != want {
                return None;
            }
        }
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Fraction-free (Bareiss) determinant.
pub fn determinant(a: &BigMat) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match ((k + 1)..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// Invariant factors `d_1 | d_2 | ...` of an integer matrix (non-negative,
/// zeros last for rank-deficient input).
pub fn smith_invariants(a: &BigMat) -> Vec<BigInt> {
    let rows = a.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = a[0].len();
    let mut m = a.clone();
    let k_max = rows.min(cols);
    let mut diag = Vec::with_capacity(k_max);
    for t in 0..k_max {
        // pick the smallest non-zero entry in the remaining block as pivot
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !m[i][j].is_zero() && best.map_or(true, |(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                diag.extend((t..k_max).map(|_| BigInt::zero()));
                return finish_smith(diag);
            };
            m.swap(t, pi);
            for row in m.iter_mut() {
                row.swap(t, pj);
            }
            let p = m[t][t].clone();
            let mut clean = true;
            for i in (t + 1)..rows {
                let q = m[i][t].div_floor(&p);
                if !q.is_zero() {
                    for j in t..cols {
                        let v = &q * &m[t][j];
                        m[i][j] -= v;
                    }
                }
                if !m[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in (t + 1)..cols {
                let q = m[t][j].div_floor(&p);
                if !q.is_zero() {
                    for i in t..rows {
                        let v = &q * &m[i][t];
                        m[i][j] -= v;
                    }
                }
                if !m[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // enforce divisibility of the remaining block by the pivot
            let mut bad = None;
            'scan: for i in (t + 1)..rows {
                for j in (t + 1)..cols {
                    if !(&m[i][j] % &p).is_zero() {
                        bad = Some(i);
                        break 'scan;
                    }
                }
            }
            match bad {
                Some(i) => {
                    for j in t..cols {
                        let v = m[i][j].clone();
                        m[t][j] += v;
                    }
                }
                None => break,
            }
        }
        diag.push(m[t][t].abs());
    }
    finish_smith(diag)
}

fn finish_smith(mut diag: Vec<BigInt>) -> Vec<BigInt> {
    let nonzero = diag.iter().take_while(|x| !x.is_zero()).count();
    diag[..nonzero].sort();
    diag
}

/// Numbers of positive, negative and zero squares after exact rational
/// congruence diagonalization of a symmetric matrix.
pub fn signature(a: &BigMat) -> (usize, usize, usize) {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .map(|row| row.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let (mut pos, mut neg, mut zero) = (0, 0, 0);
    let mut active: Vec<usize> = (0..n).collect();
    while let Some(&first) = active.first() {
        let pivot = active.iter().copied().find(|&i| !m[i][i].is_zero());
        let p = match pivot {
            Some(p) => p,
            None => {
                let pair = active.iter().copied().find_map(|i| {
                    active
                        .iter()
                        .copied()
                        .find(|&j| j != i && !m[i][j].is_zero())
                        .map(|j| (i, j))
                });
                match pair {
                    Some((i, j)) => {
                        // congruence e_i <- e_i + e_j makes the diagonal entry 2 a_ij
                        for k in 0..n {
                            let v = m[j][k].clone();
                            m[i][k] += v;
                        }
                        for k in 0..n {
                            let v = m[k][j].clone();
                            m[k][i] += v;
                        }
                        i
                    }
                    None => {
                        zero += active.len();
                        let _ = first;
                        break;
                    }
                }
            }
        };
        let d = m[p][p].clone();
        if d.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        active.retain(|&i| i != p);
        for &i in &active {
            if m[i][p].is_zero() {
                continue;
            }
            let f = &m[i][p] / &d;
            for &j in &active {
                let v = &f * &m[p][j];
                m[i][j] -= v;
            }
        }
    }
    (pos, neg, zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(m: &[&[i64]]) -> BigMat {
        m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn hnf_transform_reproduces_input() {
        let a = big(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let (h, u) = hnf_with_transform(&a);
        assert_eq!(mul(&u, &a), h);
        assert!(determinant(&u).abs().is_one());
        assert_eq!(h[0][0], BigInt::from(2));
    }

    #[test]
    fn smith_of_known_matrix() {
        let a = big(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let d = smith_invariants(&a);
        assert_eq!(d, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
    }

    #[test]
    fn kernel_of_row_vector() {
        let a = big(&[&[0, 1, 0]]);
        let k = integer_kernel(&a, 3);
        assert_eq!(k, big(&[&[1, 0, 0], &[0, 0, 1]]));
    }

    #[test]
    fn signature_of_hyperbolic_plane() {
        assert_eq!(signature(&big(&[&[0, 1], &[1, 0]])), (1, 1, 0));
        assert_eq!(signature(&big(&[&[0, 0, -1], &[0, 2, 0], &[-1, 0, 0]])), (2, 1, 0));
        assert_eq!(signature(&big(&[&[1, 1], &[1, 1]])), (1, 0, 1));
    }

    #[test]
    fn unimodular_completion_has_given_first_row() {
        let c: Vec<BigInt> = [6, 10, 15].iter().map(|&x| BigInt::from(x)).collect();
        let m = complete_to_unimodular(&c).unwrap();
        assert_eq!(m[0], c);
        assert!(determinant(&m).abs().is_one());
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let a = big(&[&[0, 2, 1], &[3, 0, 4], &[1, 5, 0]]);
        // 0*(0-20) - 2*(0-4) + 1*(15-0)
        assert_eq!(determinant(&a), BigInt::from(23));
    }
}
