//! Closed rational intervals with the natural interval extension of sums,
//! products and quadratic forms. Endpoints are exact, so every enclosure is
//! rigorous.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

pub type Q = BigRational;

#[derive(Debug, Clone, PartialEq)]
pub struct Iv {
    pub lo: Q,
    pub hi: Q,
}

impl Iv {
    pub fn new(lo: Q, hi: Q) -> Self {
        debug_assert!(lo <= hi);
        Iv { lo, hi }
    }

    pub fn point(q: Q) -> Self {
        Iv { lo: q.clone(), hi: q }
    }

    pub fn from_f64(lo: f64, hi: f64) -> Option<Self> {
        Some(Iv::new(Q::from_float(lo)?, Q::from_float(hi)?))
    }

    pub fn mid(&self) -> Q {
        (&self.lo + &self.hi) / Q::from_integer(2.into())
    }

    pub fn width(&self) -> Q {
        &self.hi - &self.lo
    }

    pub fn contains(&self, q: &Q) -> bool {
        &self.lo <= q && q <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn add(&self, o: &Iv) -> Iv {
        Iv::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    pub fn sub(&self, o: &Iv) -> Iv {
        Iv::new(&self.lo - &o.hi, &self.hi - &o.lo)
    }

    pub fn shift(&self, q: &Q) -> Iv {
        Iv::new(&self.lo + q, &self.hi + q)
    }

    pub fn scale(&self, q: &Q) -> Iv {
        let (a, b) = (&self.lo * q, &self.hi * q);
        if a <= b {
            Iv::new(a, b)
        } else {
            Iv::new(b, a)
        }
    }

    pub fn mul(&self, o: &Iv) -> Iv {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().expect("four products").clone();
        let hi = c.iter().max().expect("four products").clone();
        Iv::new(lo, hi)
    }

    pub fn square(&self) -> Iv {
        let (a, b) = (&self.lo * &self.lo, &self.hi * &self.hi);
        let hi = if a > b { a.clone() } else { b.clone() };
        let lo = if self.contains_zero() {
            Q::zero()
        } else if a < b {
            a
        } else {
            b
        };
        Iv::new(lo, hi)
    }

    pub fn split(&self) -> (Iv, Iv) {
        let m = self.mid();
        (Iv::new(self.lo.clone(), m.clone()), Iv::new(m, self.hi.clone()))
    }
}

/// Enclosure of `x^T G x` over a box.
pub fn quadratic(gram: &[Vec<i64>], x: &[Iv]) -> Iv {
    let n = x.len();
    let mut acc = Iv::point(Q::zero());
    for i in 0..n {
        if gram[i][i] != 0 {
            acc = acc.add(&x[i].square().scale(&Q::from_integer(gram[i][i].into())));
        }
        for j in (i + 1)..n {
            if gram[i][j] != 0 {
                acc = acc.add(&x[i].mul(&x[j]).scale(&Q::from_integer((2 * gram[i][j]).into())));
            }
        }
    }
    acc
}

/// Enclosure of `x^T G y` over a box.
pub fn bilinear(gram: &[Vec<i64>], x: &[Iv], y: &[Iv]) -> Iv {
    let mut acc = Iv::point(Q::zero());
    for (i, xi) in x.iter().enumerate() {
        for (j, yj) in y.iter().enumerate() {
            if gram[i][j] != 0 {
                acc = acc.add(&xi.mul(yj).scale(&Q::from_integer(gram[i][j].into())));
            }
        }
    }
    acc
}

/// Exact `a^T G b`.
pub fn form(gram: &[Vec<i64>], a: &[Q], b: &[Q]) -> Q {
    let mut acc = Q::zero();
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if gram[i][j] != 0 && !bj.is_zero() {
                acc += ai * bj * Q::from_integer(gram[i][j].into());
            }
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> Q {
        Q::new(a.into(), b.into())
    }

    #[test]
    fn square_straddling_zero_starts_at_zero() {
        let s = Iv::new(q(-1, 2), q(3, 1)).square();
        assert_eq!(s, Iv::new(q(0, 1), q(9, 1)));
    }

    #[test]
    fn quadratic_enclosure_contains_samples() {
        let g = vec![vec![0, 1], vec![1, -2]];
        let x = vec![Iv::new(q(1, 1), q(2, 1)), Iv::new(q(-1, 1), q(1, 2))];
        let e = quadratic(&g, &x);
        for a in [q(1, 1), q(3, 2), q(2, 1)] {
            for b in [q(-1, 1), q(0, 1), q(1, 2)] {
                let v = form(&g, &[a.clone(), b.clone()], &[a.clone(), b.clone()]);
                assert!(e.contains(&v));
            }
        }
    }
}
