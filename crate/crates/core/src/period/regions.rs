//! Membership tests for the open regions of the period domain: the
//! complement of all `D`-walls, the distinguished component `ℒ` cut out by the
//! ample chamber and the absence of `A`-walls, and the region `y^2 > 2`.

use super::chart::{RatBox, TubeBox, TubeChart};
use super::interval::{Iv, Q};
use super::walls::{make_cell, pairing_exact, sign_of, wall_candidates};
use super::{orthonormal_plane, ComplexVec, TubePoint};
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::short_vectors;
use nalgebra::DMatrix;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// For a point with frame `a + ib`, `a^2 = b^2 = 1`, every root satisfies
/// `|z.δ| = |δ_P|`. Roots with `|δ_P| <= radius` are enumerated from the
/// majorant `2|δ_P|^2 - δ^2 <= 2 radius^2 + 2`; all others pair to more than
/// `radius` in modulus.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct P0Certificate {
    pub candidates: usize,
    pub nearest_root: Option<Vec<i64>>,
    pub min_abs_candidate: f64,
    pub exclusion_radius: f64,
    /// `min(min_abs_candidate, exclusion_radius)`, a lower bound of `|z.δ|`
    /// over all roots.
    pub lower_bound: f64,
}

pub const P0_RADIUS: f64 = 1.0;
pub const P0_TOL: f64 = 1e-9;

/// Positive definite majorant `2 Π_P - G` of a positive plane.
pub fn plane_majorant(lat: &Lattice, a: &[f64], b: &[f64]) -> DMatrix<f64> {
    let g = lat.gram_f64();
    let n = lat.rank();
    let ga: Vec<f64> = (0..n).map(|i| (0..n).map(|j| g[(i, j)] * a[j]).sum()).collect();
    let gb: Vec<f64> = (0..n).map(|i| (0..n).map(|j| g[(i, j)] * b[j]).sum()).collect();
    DMatrix::from_fn(n, n, |i, j| 2.0 * (ga[i] * ga[j] + gb[i] * gb[j]) - g[(i, j)])
}

/// Whether no root is orthogonal to `z`, with a certificate.
pub fn in_p0(lat: &Lattice, z: &ComplexVec) -> Result<(bool, P0Certificate)> {
    if lat.signature().0 != 2 {
        return Err(Error::Invalid(format!(
            "period domain needs signature (2, ρ), got {:?}",
            lat.signature()
        )));
    }
    let (a, b) = orthonormal_plane(lat, z)?;
    let m = plane_majorant(lat, &a, &b);
    let bound = 2.0 * P0_RADIUS * P0_RADIUS + 2.0;
    let mut best: Option<(f64, Vec<i64>)> = None;
    let mut count = 0;
    for c in short_vectors::enumerate(&m, &vec![0.0; lat.rank()], bound)? {
        if lat.pair_raw(&c, &c) != -2 {
            continue;
        }
        count += 1;
        let cf: Vec<f64> = c.iter().map(|&x| x as f64).collect();
        let val = lat.pair_f64(&a, &cf).hypot(lat.pair_f64(&b, &cf));
        if best.as_ref().map_or(true, |(bv, _)| val < *bv) {
            best = Some((val, c));
        }
    }
    let min_abs = best.as_ref().map_or(f64::INFINITY, |(v, _)| *v);
    let cert = P0Certificate {
        candidates: count,
        nearest_root: best.map(|(_, c)| c),
        min_abs_candidate: min_abs,
        exclusion_radius: P0_RADIUS,
        lower_bound: min_abs.min(P0_RADIUS),
    };
    Ok((min_abs > P0_TOL, cert))
}

/// `y^2 > 2`, the region where no `A`-wall passes.
pub fn region_gt2(pt: &TubePoint) -> bool {
    pt.y_square() > 2.0
}

fn exact(v: &[f64]) -> Result<Vec<Q>> {
    v.iter()
        .map(|&a| Q::from_float(a).ok_or_else(|| Error::Invalid("non-finite coordinate".into())))
        .collect()
}

/// Roots `l` of `L(v)` whose wall `y.l = 0` meets the segment `[y0, y1]`
/// (both in the positive cone), up to sign.
pub fn roots_crossing_segment(chart: &TubeChart, y0: &[f64], y1: &[f64]) -> Result<Vec<Vec<i64>>> {
    let m = chart.dim();
    let a = exact(y0)?;
    let b = exact(y1)?;
    let k_lat = chart.k_lattice();
    let mut found = BTreeSet::new();
    let mut stack = vec![(Q::zero(), Q::from_integer(1.into()), 0usize)];
    while let Some((t0, t1, depth)) = stack.pop() {
        let p0: Vec<Q> = a.iter().zip(&b).map(|(u, w)| u + (w - u) * &t0).collect();
        let p1: Vec<Q> = a.iter().zip(&b).map(|(u, w)| u + (w - u) * &t1).collect();
        let y: Vec<Iv> = p0
            .iter()
            .zip(&p1)
            .map(|(u, w)| {
                if u <= w {
                    Iv::new(u.clone(), w.clone())
                } else {
                    Iv::new(w.clone(), u.clone())
                }
            })
            .collect();
        let rb = RatBox {
            x: vec![Iv::point(Q::zero()); m],
            y,
        };
        match make_cell(chart, &rb) {
            Some(cell) if cell.kappa <= 4.0 || t0 == t1 => {
                for l in short_vectors::enumerate(&cell.majorant, &vec![0.0; m], 2.0 * cell.kappa)? {
                    if k_lat.pair_raw(&l, &l) == -2 {
                        let first = l.iter().copied().find(|&x| x != 0).unwrap_or(0);
                        let l = if first < 0 { l.iter().map(|x| -x).collect() } else { l };
                        found.insert(l);
                    }
                }
            }
            _ => {
                if depth > 48 {
                    return Err(Error::BoxLeavesCone);
                }
                let mid = (&t0 + &t1) / Q::from_integer(2.into());
                stack.push((mid.clone(), t1, depth + 1));
                stack.push((t0, mid, depth + 1));
            }
        }
    }
    Ok(found.into_iter().collect())
}

/// Whether `exp_v(x + iy)` lies in the component `ℒ` determined by the ample
/// class `y_amp`: `y` lies in the open chamber of `y_amp` and no `A`-wall
/// passes through the point.
pub fn in_l_region(chart: &TubeChart, pt: &TubePoint, y_amp: &[f64]) -> Result<bool> {
    let kg = chart.kgram();
    let (x, y) = chart.coords_of(pt)?;
    if y_amp.len() != chart.dim() {
        return Err(Error::WrongLength {
            got: y_amp.len(),
            rank: chart.dim(),
        });
    }
    if chart.k_pair(y_amp, y_amp) <= 0.0 {
        return Err(Error::AmpNotInPositiveCone);
    }
    if chart.k_pair(&y, &y) <= 0.0 || chart.k_pair(&y, y_amp) <= 0.0 {
        return Ok(false);
    }
    let ya = exact(y_amp)?;
    let yq = exact(&y)?;
    let xq = exact(&x)?;
    for l in roots_crossing_segment(chart, y_amp, &y)? {
        let lq: Vec<Q> = l.iter().map(|&a| Q::from_integer(a.into())).collect();
        let s_amp = sign_of(&super::interval::form(kg, &lq, &ya));
        let s_pt = sign_of(&super::interval::form(kg, &lq, &yq));
        if s_pt == 0 || s_amp != s_pt {
            return Ok(false);
        }
    }
    let point = TubeBox::point(&x, &y);
    for c in wall_candidates(chart, &point)? {
        if c.r <= 0 {
            continue;
        }
        let (re, im) = pairing_exact(kg, &c, &xq, &yq);
        if im.is_zero() && !re.is_positive() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Convenience: `in_p0` for a tube point.
pub fn tube_point_in_p0(pt: &TubePoint) -> Result<(bool, P0Certificate)> {
    let z = super::exp_v(pt)?;
    in_p0(pt.lattice(), &z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::period::exp_v;

    fn chart(preset: &str) -> TubeChart {
        let n = Lattice::preset(preset).unwrap();
        TubeChart::new(&n.point_class().unwrap()).unwrap()
    }

    #[test]
    fn d_wall_point_is_not_in_p0() {
        // δ = (1, 0, 1) in U+<2> Mukai form: D-point at x = 0, y = 1
        let ch = chart("mukai_rank1(1)");
        let pt = ch.point(&[0.0], &[1.0]).unwrap();
        let (ok, cert) = tube_point_in_p0(&pt).unwrap();
        assert!(!ok);
        assert!(cert.min_abs_candidate < 1e-12);
        let pt = ch.point(&[0.37], &[0.71]).unwrap();
        let (ok, cert) = tube_point_in_p0(&pt).unwrap();
        assert!(ok && cert.lower_bound > 1e-6);
    }

    #[test]
    fn p0_certificate_survives_small_perturbation() {
        let ch = chart("mukai(<2>+<-2>)");
        let pt = ch.point(&[0.21, -0.13], &[1.1, 0.3]).unwrap();
        let z = exp_v(&pt).unwrap();
        let (ok, cert) = in_p0(ch.lattice(), &z).unwrap();
        assert!(ok);
        let eps = cert.lower_bound * 1e-3;
        let pert = ch.point(&[0.21 + eps, -0.13], &[1.1, 0.3 - eps]).unwrap();
        let (ok2, _) = in_p0(ch.lattice(), &exp_v(&pert).unwrap()).unwrap();
        assert!(ok2);
    }

    #[test]
    fn l_region_requires_ample_chamber() {
        // NS = <2>+<-2>: C = (0, 1) separates y_2 > 0 from y_2 < 0
        let ch = chart("mukai(<2>+<-2>)");
        let amp = [2.0, 0.5];
        let inside = ch.point(&[0.1, 0.1], &[2.0, 0.3]).unwrap();
        let across = ch.point(&[0.1, 0.1], &[2.0, -0.3]).unwrap();
        let on_wall = ch.point(&[0.1, 0.1], &[2.0, 0.0]).unwrap();
        assert!(in_l_region(&ch, &inside, &amp).unwrap());
        assert!(!in_l_region(&ch, &across, &amp).unwrap());
        assert!(!in_l_region(&ch, &on_wall, &amp).unwrap());
        assert_eq!(
            in_l_region(&ch, &inside, &[0.0, 1.0]).unwrap_err(),
            Error::AmpNotInPositiveCone
        );
    }

    #[test]
    fn l_region_excludes_a_walls() {
        let ch = chart("mukai_rank1(1)");
        // on the A-wall of (1, 0, 1): x = 0, y < 1
        let pt = ch.point(&[0.0], &[0.5]).unwrap();
        assert!(!in_l_region(&ch, &pt, &[1.0]).unwrap());
        let pt = ch.point(&[0.25], &[0.5]).unwrap();
        assert!(in_l_region(&ch, &pt, &[1.0]).unwrap());
        assert!(region_gt2(&ch.point(&[0.0], &[1.01]).unwrap()));
        assert!(!region_gt2(&ch.point(&[0.0], &[1.0]).unwrap()));
    }
}
