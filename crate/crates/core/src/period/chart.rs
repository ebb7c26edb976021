//! Coordinates on the tube over a standard isotropic vector.
//!
//! From the splitting `N = Z f + K + Z v` with `f^2 = 0`, `v.f = -1`, a
//! lattice vector is written `(r, l, s) = r f + l + s v` where
//! `r = -δ.v`, `s = -δ.f` and `l ∈ K`. Tube points are parametrized by their
//! `K`-coordinates `(x_L, y_L)`; on a Mukai lattice with `v = (0,0,1)` these are
//! the usual Néron-Severi coordinates.

use super::interval::{self, Iv, Q};
use super::TubePoint;
use crate::error::{Error, Result};
use crate::lattice::{HyperbolicSplitting, LatVec, Lattice};
use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone)]
pub struct TubeChart {
    pub splitting: HyperbolicSplitting,
    kgram: Vec<Vec<i64>>,
    kgram_inv: DMatrix<f64>,
}

/// Product of closed intervals in tube coordinates `(x_L, y_L)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TubeBox {
    pub x: Vec<(f64, f64)>,
    pub y: Vec<(f64, f64)>,
}

impl TubeBox {
    pub fn new(x: Vec<(f64, f64)>, y: Vec<(f64, f64)>) -> Self {
        TubeBox { x, y }
    }

    pub fn point(x: &[f64], y: &[f64]) -> Self {
        TubeBox {
            x: x.iter().map(|&a| (a, a)).collect(),
            y: y.iter().map(|&a| (a, a)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub fn validate(&self, m: usize) -> Result<()> {
        if self.x.len() != m || self.y.len() != m {
            return Err(Error::Invalid(format!(
                "box has dimension ({}, {}), tube has dimension {m}",
                self.x.len(),
                self.y.len()
            )));
        }
        for &(lo, hi) in self.x.iter().chain(&self.y) {
            if !lo.is_finite() || !hi.is_finite() || lo > hi {
                return Err(Error::UnboundedBox);
            }
        }
        Ok(())
    }

    pub fn center(&self) -> (Vec<f64>, Vec<f64>) {
        (
            self.x.iter().map(|(a, b)| 0.5 * (a + b)).collect(),
            self.y.iter().map(|(a, b)| 0.5 * (a + b)).collect(),
        )
    }

    pub(crate) fn to_rational(&self) -> Result<RatBox> {
        let conv = |v: &[(f64, f64)]| -> Result<Vec<Iv>> {
            v.iter()
                .map(|&(a, b)| Iv::from_f64(a, b).ok_or(Error::UnboundedBox))
                .collect()
        };
        Ok(RatBox {
            x: conv(&self.x)?,
            y: conv(&self.y)?,
        })
    }
}

/// Box with exact rational endpoints.
#[derive(Debug, Clone)]
pub(crate) struct RatBox {
    pub x: Vec<Iv>,
    pub y: Vec<Iv>,
}

impl RatBox {
    pub fn split_widest(&self, reference: &RatBox) -> (RatBox, RatBox) {
        let m = self.x.len();
        let mut best = (0usize, Q::zero());
        for k in 0..2 * m {
            let (cur, refw) = if k < m {
                (self.x[k].width(), reference.x[k].width())
            } else {
                (self.y[k - m].width(), reference.y[k - m].width())
            };
            if refw.is_zero() {
                continue;
            }
            let rel = cur / refw;
            if rel > best.1 {
                best = (k, rel);
            }
        }
        let (k, _) = best;
        let (mut a, mut b) = (self.clone(), self.clone());
        if k < m {
            let (l, r) = self.x[k].split();
            a.x[k] = l;
            b.x[k] = r;
        } else {
            let (l, r) = self.y[k - m].split();
            a.y[k - m] = l;
            b.y[k - m] = r;
        }
        (a, b)
    }

    pub fn is_point(&self) -> bool {
        self.x.iter().chain(&self.y).all(|iv| iv.lo == iv.hi)
    }
}

/// Coordinates `(r, l, s)` of a lattice vector in a tube chart.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ChartCoords {
    pub r: i64,
    pub l: Vec<i64>,
    pub s: i64,
}

impl TubeChart {
    pub fn new(v: &LatVec) -> Result<Self> {
        let splitting = v.lattice().standard_to_hyperbolic(v)?;
        Ok(Self::from_splitting(splitting))
    }

    pub fn from_splitting(splitting: HyperbolicSplitting) -> Self {
        let kgram = splitting.complement_lattice.gram().to_vec();
        let m = kgram.len();
        let kg = DMatrix::from_fn(m, m, |i, j| kgram[i][j] as f64);
        let kgram_inv = kg.try_inverse().unwrap_or_else(|| DMatrix::zeros(m, m));
        TubeChart {
            splitting,
            kgram,
            kgram_inv,
        }
    }

    pub fn v(&self) -> &LatVec {
        &self.splitting.v
    }

    pub fn f(&self) -> &LatVec {
        &self.splitting.f
    }

    pub fn lattice(&self) -> &Lattice {
        self.splitting.v.lattice()
    }

    /// Gram matrix of `K ≅ L(v)` in the chart basis.
    pub fn kgram(&self) -> &[Vec<i64>] {
        &self.kgram
    }

    pub fn k_lattice(&self) -> &Lattice {
        &self.splitting.complement_lattice
    }

    pub fn dim(&self) -> usize {
        self.kgram.len()
    }

    pub fn k_pair(&self, a: &[f64], b: &[f64]) -> f64 {
        self.splitting.complement_lattice.pair_f64(a, b)
    }

    fn embed_k(&self, l: &[f64]) -> Vec<f64> {
        let n = self.lattice().rank();
        let mut out = vec![0.0; n];
        for (c, basis) in l.iter().zip(&self.splitting.complement) {
            for (o, &b) in out.iter_mut().zip(basis.coords()) {
                *o += c * b as f64;
            }
        }
        out
    }

    /// Canonical tube point with chart coordinates `(x_L, y_L)`.
    pub fn point(&self, xl: &[f64], yl: &[f64]) -> Result<TubePoint> {
        let m = self.dim();
        if xl.len() != m || yl.len() != m {
            return Err(Error::WrongLength {
                got: xl.len().max(yl.len()),
                rank: m,
            });
        }
        let x2 = self.k_pair(xl, xl);
        let xy = self.k_pair(xl, yl);
        let f = self.f().to_f64();
        let v = self.v().to_f64();
        let kx = self.embed_k(xl);
        let ky = self.embed_k(yl);
        let x: Vec<f64> = (0..f.len()).map(|i| f[i] + kx[i] + 0.5 * x2 * v[i]).collect();
        let y: Vec<f64> = (0..f.len()).map(|i| ky[i] + xy * v[i]).collect();
        let pt = TubePoint {
            v: self.v().clone(),
            x,
            y,
        };
        if pt.y_square() <= 0.0 {
            return Err(Error::NotPositive);
        }
        Ok(pt)
    }

    /// `K`-coordinates of a real vector (its component in `K`).
    pub fn k_coords(&self, w: &[f64]) -> Vec<f64> {
        let lat = self.lattice();
        let rhs = DVector::from_iterator(
            self.dim(),
            self.splitting.complement.iter().map(|b| lat.pair_f64(&b.to_f64(), w)),
        );
        (&self.kgram_inv * rhs).iter().copied().collect()
    }

    /// Chart coordinates `(x_L, y_L)` of a tube point over the chart's `v`.
    pub fn coords_of(&self, pt: &TubePoint) -> Result<(Vec<f64>, Vec<f64>)> {
        if pt.v != *self.v() {
            return Err(Error::Invalid("tube point is over a different cusp".into()));
        }
        Ok((self.k_coords(&pt.x), self.k_coords(&pt.y)))
    }

    pub fn chart_coords(&self, delta: &LatVec) -> Result<ChartCoords> {
        let r = -delta.pair(self.v())?;
        let s = -delta.pair(self.f())?;
        let rest: Vec<BigInt> = delta
            .coords()
            .iter()
            .zip(self.f().coords())
            .zip(self.v().coords())
            .map(|((&d, &f), &v)| BigInt::from(d - r * f - s * v))
            .collect();
        let basis: Vec<Vec<BigInt>> = self
            .splitting
            .complement
            .iter()
            .map(|b| b.coords().iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let l =
            echelon_solve(&basis, &rest).ok_or_else(|| Error::Invalid("vector is not integral in the chart".into()))?;
        Ok(ChartCoords { r, l, s })
    }

    pub fn from_chart(&self, c: &ChartCoords) -> LatVec {
        let n = self.lattice().rank();
        let mut out = vec![0i64; n];
        for i in 0..n {
            out[i] = c.r * self.f().coords()[i] + c.s * self.v().coords()[i];
        }
        for (k, basis) in c.l.iter().zip(&self.splitting.complement) {
            for (o, &b) in out.iter_mut().zip(basis.coords()) {
                *o += k * b;
            }
        }
        self.lattice().vector(out).expect("chart rank matches")
    }

    /// Exact `y^2` enclosure over the `y`-part of a box.
    pub(crate) fn y_square_enclosure(&self, b: &RatBox) -> Iv {
        interval::quadratic(&self.kgram, &b.y)
    }
}

fn echelon_solve(basis: &[Vec<BigInt>], v: &[BigInt]) -> Option<Vec<i64>> {
    use num_traits::ToPrimitive;
    let mut residual = v.to_vec();
    let mut coeffs = Vec::with_capacity(basis.len());
    for row in basis {
        let p = row.iter().position(|x| !x.is_zero())?;
        let (q, r) = residual[p].div_rem(&row[p]);
        if !r.is_zero() {
            return None;
        }
        for (x, y) in residual.iter_mut().zip(row) {
            *x -= &q * y;
        }
        coeffs.push(q.to_i64()?);
    }
    if residual.iter().all(|x| x.is_zero()) {
        Some(coeffs)
    } else {
        None
    }
}

/// Whether `y^2 > 0` on the whole box, refining the interval enclosure by
/// bisection when it is too coarse.
pub(crate) fn box_in_cone(chart: &TubeChart, b: &RatBox, depth: usize) -> bool {
    let e = chart.y_square_enclosure(b);
    if e.lo.is_positive() {
        return true;
    }
    if !e.hi.is_positive() || depth == 0 {
        return false;
    }
    let only_y = RatBox {
        x: b.x.iter().map(|iv| Iv::point(iv.lo.clone())).collect(),
        y: b.y.clone(),
    };
    let (l, r) = only_y.split_widest(&only_y);
    box_in_cone(chart, &l, depth - 1) && box_in_cone(chart, &r, depth - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mukai_chart_is_neron_severi() {
        let n = Lattice::preset("mukai(<2>+<-2>)").unwrap();
        let v0 = n.point_class().unwrap();
        let chart = TubeChart::new(&v0).unwrap();
        assert_eq!(chart.f().coords(), &[1, 0, 0, 0]);
        assert_eq!(chart.kgram(), &[vec![2, 0], vec![0, -2]]);
        let delta = n.vector(vec![2, 1, -1, 3]).unwrap();
        let c = chart.chart_coords(&delta).unwrap();
        assert_eq!(
            c,
            ChartCoords {
                r: 2,
                l: vec![1, -1],
                s: 3
            }
        );
        assert_eq!(chart.from_chart(&c), delta);
    }

    #[test]
    fn chart_point_has_canonical_lifts() {
        let n = Lattice::preset("U+U").unwrap();
        let v = n.vector(vec![1, 0, 0, 0]).unwrap();
        let chart = TubeChart::new(&v).unwrap();
        let pt = chart.point(&[0.3, -0.2], &[1.0, 2.0]).unwrap();
        let vf = v.to_f64();
        assert!(n.pair_f64(&pt.x, &pt.x).abs() < 1e-12);
        assert!((n.pair_f64(&pt.x, &vf) + 1.0).abs() < 1e-12);
        assert!(n.pair_f64(&pt.y, &vf).abs() < 1e-12);
        assert!(n.pair_f64(&pt.y, &pt.x).abs() < 1e-12);
        let (x, y) = chart.coords_of(&pt).unwrap();
        assert!((x[0] - 0.3).abs() < 1e-12 && (y[1] - 2.0).abs() < 1e-12);
    }
}
