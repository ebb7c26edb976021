//! Period domain of a lattice of signature `(2, ρ)`.
//!
//! Points of the domain are oriented positive 2-planes, represented by
//! isotropic complex vectors `z = a + ib` with `a^2 = b^2 > 0` and `a.b = 0`.
//! Around a standard isotropic `v` the domain is modelled by the tube
//! `x + iy` with `x.v = -1`, `y.v = 0`, and `exp_v(x + iy) = w + w^2/2 v`.

pub mod chart;
pub mod export;
pub mod interval;
pub mod regions;
pub mod walls;

use crate::error::{Error, Result};
use crate::lattice::{Isometry, LatVec, Lattice};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use chart::{TubeBox, TubeChart};
pub use regions::{in_l_region, in_p0, region_gt2, P0Certificate};
pub use walls::{
    enumerate_walls_region, wall_membership, wall_membership_exact, walls_of_root, Meets, WallKind, WallMembership,
    WallRecord,
};

/// Element of `N ⊗ C`, stored as real and imaginary coordinate vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexVec {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl ComplexVec {
    pub fn new(re: Vec<f64>, im: Vec<f64>) -> Self {
        debug_assert_eq!(re.len(), im.len());
        ComplexVec { re, im }
    }

    pub fn dim(&self) -> usize {
        self.re.len()
    }

    /// Bilinear (not Hermitian) pairing `z.w`.
    pub fn pair(&self, lat: &Lattice, w: &ComplexVec) -> Complex64 {
        Complex64::new(
            lat.pair_f64(&self.re, &w.re) - lat.pair_f64(&self.im, &w.im),
            lat.pair_f64(&self.re, &w.im) + lat.pair_f64(&self.im, &w.re),
        )
    }

    /// `z.v` for a lattice vector `v`.
    pub fn pair_lattice(&self, v: &LatVec) -> Complex64 {
        let lat = v.lattice();
        let vf = v.to_f64();
        Complex64::new(lat.pair_f64(&self.re, &vf), lat.pair_f64(&self.im, &vf))
    }

    /// `z.z̄ = a^2 + b^2`.
    pub fn hermitian_norm(&self, lat: &Lattice) -> f64 {
        lat.pair_f64(&self.re, &self.re) + lat.pair_f64(&self.im, &self.im)
    }

    pub fn scale(&self, c: Complex64) -> ComplexVec {
        ComplexVec {
            re: self.re.iter().zip(&self.im).map(|(a, b)| c.re * a - c.im * b).collect(),
            im: self.re.iter().zip(&self.im).map(|(a, b)| c.im * a + c.re * b).collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &ComplexVec) -> f64 {
        self.re
            .iter()
            .zip(&other.re)
            .chain(self.im.iter().zip(&other.im))
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.re.iter().chain(&self.im).map(|a| a.abs()).fold(0.0, f64::max)
    }

    pub fn apply(&self, g: &Isometry) -> ComplexVec {
        ComplexVec {
            re: g.apply_f64(&self.re),
            im: g.apply_f64(&self.im),
        }
    }
}

/// Point of the tube over a standard isotropic `v`: canonical lifts with
/// `x^2 = 0`, `x.v = -1`, `y.v = 0`, `y.x = 0` and `y^2 > 0`.
#[derive(Debug, Clone)]
pub struct TubePoint {
    pub v: LatVec,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl TubePoint {
    /// Builds the canonical tube point from arbitrary representatives
    /// `x.v = -1` and `y.v = 0`.
    pub fn from_lifts(v: &LatVec, x: &[f64], y: &[f64]) -> Result<Self> {
        let lat = v.lattice();
        let vf = v.to_f64();
        let xv = lat.pair_f64(x, &vf);
        let yv = lat.pair_f64(y, &vf);
        let scale = 1.0 + x.iter().chain(y).map(|a| a.abs()).fold(0.0, f64::max);
        if (xv + 1.0).abs() > 1e-9 * scale || yv.abs() > 1e-9 * scale {
            return Err(Error::Invalid(format!(
                "lifts violate x.v = -1 or y.v = 0 ({xv}, {yv})"
            )));
        }
        let x2 = lat.pair_f64(x, x);
        let x0: Vec<f64> = x.iter().zip(&vf).map(|(a, b)| a + 0.5 * x2 * b).collect();
        let yx = lat.pair_f64(y, &x0);
        let y0: Vec<f64> = y.iter().zip(&vf).map(|(a, b)| a + yx * b).collect();
        let pt = TubePoint {
            v: v.clone(),
            x: x0,
            y: y0,
        };
        if pt.y_square() <= 0.0 {
            return Err(Error::NotPositive);
        }
        Ok(pt)
    }

    pub fn lattice(&self) -> &Lattice {
        self.v.lattice()
    }

    pub fn y_square(&self) -> f64 {
        self.lattice().pair_f64(&self.y, &self.y)
    }

    /// Image under an isometry, as a tube point over `g v`.
    pub fn apply(&self, g: &Isometry) -> Result<TubePoint> {
        let v = g.apply(&self.v)?;
        Ok(TubePoint {
            v,
            x: g.apply_f64(&self.x),
            y: g.apply_f64(&self.y),
        })
    }
}

/// `exp_v(x + iy) = x + iy - y^2/2 v` for canonical lifts.
pub fn exp_v(pt: &TubePoint) -> Result<ComplexVec> {
    let y2 = pt.y_square();
    if y2 <= 0.0 {
        return Err(Error::NotPositive);
    }
    let vf = pt.v.to_f64();
    Ok(ComplexVec {
        re: pt.x.iter().zip(&vf).map(|(a, b)| a - 0.5 * y2 * b).collect(),
        im: pt.y.clone(),
    })
}

/// Point of the period domain: an oriented positive plane, stored as the
/// isotropic representative `a + ib` with `a^2 = b^2 = 1` and the phase
/// fixed so that the coordinate of largest modulus is real and positive.
#[derive(Debug, Clone)]
pub struct PeriodPoint {
    lattice: Lattice,
    z: ComplexVec,
}

impl PeriodPoint {
    pub fn z(&self) -> &ComplexVec {
        &self.z
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    /// Sup-norm distance between normalized representatives relative to their
    /// size; zero iff the points agree.
    pub fn distance(&self, other: &PeriodPoint) -> f64 {
        self.z.max_abs_diff(&other.z) / self.z.max_abs().max(other.z.max_abs()).max(1.0)
    }

    pub fn apply(&self, g: &Isometry) -> Result<PeriodPoint> {
        theta(&self.lattice, &self.z.apply(g))
    }
}

/// Orthogonal frame `(a, b)` of the oriented plane spanned by `Re z, Im z`,
/// with `a^2 = b^2 = 1`.
pub fn orthonormal_plane(lat: &Lattice, z: &ComplexVec) -> Result<(Vec<f64>, Vec<f64>)> {
    let a0 = &z.re;
    let b0 = &z.im;
    let aa = lat.pair_f64(a0, a0);
    if aa <= 0.0 {
        return Err(Error::NotPositive);
    }
    let ab = lat.pair_f64(a0, b0);
    let b1: Vec<f64> = b0.iter().zip(a0).map(|(b, a)| b - ab / aa * a).collect();
    let bb = lat.pair_f64(&b1, &b1);
    let scale = aa.max(lat.pair_f64(b0, b0).abs()).max(1.0);
    if bb <= 1e-14 * scale {
        return Err(Error::NotPositive);
    }
    let (sa, sb) = (aa.sqrt(), bb.sqrt());
    let a: Vec<f64> = a0.iter().map(|x| x / sa).collect();
    let b: Vec<f64> = b1.iter().map(|x| x / sb).collect();
    // one more pass removes the cancellation error of the first
    let ab = lat.pair_f64(&a, &b);
    let b: Vec<f64> = b.iter().zip(&a).map(|(y, x)| y - ab * x).collect();
    let (na, nb) = (lat.pair_f64(&a, &a).sqrt(), lat.pair_f64(&b, &b).sqrt());
    Ok((a.iter().map(|x| x / na).collect(), b.iter().map(|x| x / nb).collect()))
}

/// Projection of a frame onto the period domain, which forgets the
/// `GL_2^+` part of the frame.
pub fn theta(lat: &Lattice, z: &ComplexVec) -> Result<PeriodPoint> {
    let (a, b) = orthonormal_plane(lat, z)?;
    let w = ComplexVec { re: a, im: b };
    let (idx, _) =
        w.re.iter()
            .zip(&w.im)
            .map(|(x, y)| x * x + y * y)
            .enumerate()
            .fold(
                (0, -1.0),
                |(bi, bm), (i, m)| {
                    if m > bm * (1.0 + 1e-12) {
                        (i, m)
                    } else {
                        (bi, bm)
                    }
                },
            );
    let c = Complex64::new(w.re[idx], w.im[idx]);
    let phase = c.conj() / c.norm();
    Ok(PeriodPoint {
        lattice: lat.clone(),
        z: w.scale(phase),
    })
}

/// Representative of `p` normalized by `z.v = -1`.
pub fn q_v(p: &ComplexVec, v: &LatVec) -> Result<ComplexVec> {
    let zv = p.pair_lattice(v);
    let scale = p.max_abs().max(1e-300) * (1.0 + v.height() as f64);
    if zv.norm() <= 1e-12 * scale {
        return Err(Error::DegenerateAtV);
    }
    Ok(p.scale(Complex64::new(-1.0, 0.0) / zv))
}

/// Inverse of [`exp_v`] on the period domain.
pub fn log_v(p: &ComplexVec, v: &LatVec) -> Result<TubePoint> {
    let z = q_v(p, v)?;
    TubePoint::from_lifts(v, &z.re, &z.im)
}

/// `(Re z', Im z') = (Re z, Im z) · T`, the row-vector action of a real
/// 2x2 matrix on frames.
pub fn gl2_act(z: &ComplexVec, t: &[[f64; 2]; 2]) -> Result<ComplexVec> {
    let det = t[0][0] * t[1][1] - t[0][1] * t[1][0];
    if !(det > 0.0) {
        return Err(Error::NonPositiveDet(det));
    }
    Ok(gl2_act_unchecked(z, t))
}

pub(crate) fn gl2_act_unchecked(z: &ComplexVec, t: &[[f64; 2]; 2]) -> ComplexVec {
    ComplexVec {
        re: z.re.iter().zip(&z.im).map(|(a, b)| a * t[0][0] + b * t[1][0]).collect(),
        im: z.re.iter().zip(&z.im).map(|(a, b)| a * t[0][1] + b * t[1][1]).collect(),
    }
}

/// Splits a frame as `z = gl2_act(exp_v(pt), T)` by pairing `z` against the
/// frame of `exp_v(pt)`.
pub fn gl2_factor(z: &ComplexVec, v: &LatVec) -> Result<(TubePoint, [[f64; 2]; 2])> {
    let lat = v.lattice();
    let pp = theta(lat, z)?;
    let pt = log_v(pp.z(), v)?;
    let e = exp_v(&pt)?;
    let m = [
        [lat.pair_f64(&e.re, &e.re), lat.pair_f64(&e.re, &e.im)],
        [lat.pair_f64(&e.im, &e.re), lat.pair_f64(&e.im, &e.im)],
    ];
    let rhs = [
        [lat.pair_f64(&e.re, &z.re), lat.pair_f64(&e.re, &z.im)],
        [lat.pair_f64(&e.im, &z.re), lat.pair_f64(&e.im, &z.im)],
    ];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if det.abs() < 1e-300 {
        return Err(Error::NotPositive);
    }
    let inv = [[m[1][1] / det, -m[0][1] / det], [-m[1][0] / det, m[0][0] / det]];
    let mut t = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            t[i][j] = inv[i][0] * rhs[0][j] + inv[i][1] * rhs[1][j];
        }
    }
    let d = t[0][0] * t[1][1] - t[0][1] * t[1][0];
    if d <= 0.0 {
        return Err(Error::NonPositiveDet(d));
    }
    Ok((pt, t))
}

/// Whether `g` maps the oriented plane of `reference` to a plane of the same
/// orientation class. Positive planes project isomorphically onto each
/// other, so the sign of the cross Gram determinant is well defined.
pub fn preserves_orientation(g: &Isometry, reference: &ComplexVec) -> Result<bool> {
    let lat = g.lattice();
    let (a, b) = orthonormal_plane(lat, reference)?;
    let ga = g.apply_f64(&a);
    let gb = g.apply_f64(&b);
    let m00 = lat.pair_f64(&a, &ga);
    let m01 = lat.pair_f64(&a, &gb);
    let m10 = lat.pair_f64(&b, &ga);
    let m11 = lat.pair_f64(&b, &gb);
    Ok(m00 * m11 - m01 * m10 > 0.0)
}

/// Returns a copy of `g` with its orientation flag computed against
/// `reference`.
pub fn with_plus_flag(g: &Isometry, reference: &ComplexVec) -> Result<Isometry> {
    let mut out = g.clone();
    out.plus_flag = Some(preserves_orientation(g, reference)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mukai1() -> (Lattice, LatVec) {
        let n = Lattice::preset("mukai_rank1(1)").unwrap();
        let v0 = n.point_class().unwrap();
        (n, v0)
    }

    #[test]
    fn exp_of_h_plus_ih() {
        let (n, v0) = mukai1();
        let chart = TubeChart::new(&v0).unwrap();
        let pt = chart.point(&[1.0], &[1.0]).unwrap();
        let z = exp_v(&pt).unwrap();
        assert_eq!(z.re, vec![1.0, 1.0, 0.0]);
        assert_eq!(z.im, vec![0.0, 1.0, 2.0]);
        assert!(z.pair(&n, &z).norm() < 1e-12);
        assert!((z.pair_lattice(&v0) + 1.0).norm() < 1e-12);
    }

    #[test]
    fn q_v_rejects_points_with_vanishing_pairing() {
        let (n, v0) = mukai1();
        let z = ComplexVec::new(vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]);
        let _ = n;
        assert_eq!(q_v(&z, &v0).unwrap_err(), Error::DegenerateAtV);
    }

    #[test]
    fn gl2_rejects_orientation_reversal() {
        let z = ComplexVec::new(vec![1.0], vec![0.0]);
        assert!(matches!(
            gl2_act(&z, &[[1.0, 0.0], [0.0, -1.0]]),
            Err(Error::NonPositiveDet(_))
        ));
    }

    #[test]
    fn theta_forgets_gl2_factor() {
        let (n, v0) = mukai1();
        let chart = TubeChart::new(&v0).unwrap();
        let z = exp_v(&chart.point(&[0.3], &[0.8]).unwrap()).unwrap();
        let t = [[2.0, 0.5], [-0.3, 1.2]];
        let zt = gl2_act(&z, &t).unwrap();
        let d = theta(&n, &z).unwrap().distance(&theta(&n, &zt).unwrap());
        assert!(d < 1e-12, "{d}");
        let (pt, t2) = gl2_factor(&zt, &v0).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((t[i][j] - t2[i][j]).abs() < 1e-12, "{t:?} {t2:?}");
            }
        }
        assert!((pt.x[1] - 0.3).abs() < 1e-12 && (pt.y[1] - 0.8).abs() < 1e-12);
    }

    #[test]
    fn minus_identity_preserves_orientation_in_signature_two() {
        let (n, v0) = mukai1();
        let chart = TubeChart::new(&v0).unwrap();
        let z = exp_v(&chart.point(&[0.1], &[1.3]).unwrap()).unwrap();
        assert!(preserves_orientation(&n.minus_identity(), &z).unwrap());
        let delta = n.vector(vec![1, 0, 1]).unwrap();
        let s = n.reflection(&delta).unwrap();
        // a reflection in a negative vector fixes the positive part pointwise
        // up to deformation, so it preserves the orientation
        assert!(preserves_orientation(&s, &z).unwrap());
    }
}
