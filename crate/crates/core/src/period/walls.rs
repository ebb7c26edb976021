//! Walls of the period domain cut out by `(-2)`-vectors, seen in a tube
//! chart over a standard `v`.
//!
//! For a root `δ = (r, l, s)` and `w = x + iy` the pairing is
//! `z.δ = -(r/2) ((w - l/r)^2 + 2/r^2)` when `r != 0` and
//! `z.δ = x.l - s + i y.l` when `r = 0`. Hence
//!
//! * `D(δ)`: `z.δ = 0`,
//! * `A(δ)`, `r > 0`: `z.δ` real and `<= 0`, i.e. `(rx - l).y = 0` and
//!   `(rx - l)^2 - r^2 y^2 + 2 >= 0`,
//! * `C(δ)`, `r = 0`: `y.l = 0`; it depends on `l` only.
//!
//! Whether a wall meets a box is decided with exact rational interval
//! enclosures (to exclude) and exact witness points (to include), refining by
//! bisection. Candidate roots come from Fincke-Pohst on `L(v)` with a
//! majorant centred in each sub-box and inflated by the hyperbolic distance
//! across it, so that no wall meeting the box is missed.

use super::chart::{box_in_cone, ChartCoords, RatBox, TubeBox, TubeChart};
use super::interval::{self, Iv, Q};
use super::{exp_v, TubePoint};
use crate::error::{Error, Result};
use crate::lattice::LatVec;
use crate::short_vectors;
use nalgebra::DMatrix;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum WallKind {
    D,
    A,
    C,
}

/// A wall meeting a region. `root` is in lattice coordinates; for `C` walls
/// it is the representative `(0, l, 0)` of the family sharing the wall.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WallRecord {
    pub kind: WallKind,
    pub root: Vec<i64>,
    pub chart: ChartCoords,
    /// False when bisection hit its depth limit without a decision; such
    /// walls are kept so that the list is never missing a wall.
    pub certified: bool,
}

impl WallRecord {
    pub fn key(&self) -> (WallKind, Vec<i64>) {
        (self.kind, self.root.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Meets {
    Yes,
    No,
    Undecided,
}

impl Meets {
    fn or(self, other: impl FnOnce() -> Meets) -> Meets {
        match self {
            Meets::Yes => Meets::Yes,
            Meets::No => other(),
            Meets::Undecided => match other() {
                Meets::Yes => Meets::Yes,
                _ => Meets::Undecided,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct WallMembership {
    pub on_d: bool,
    pub on_a: bool,
    pub on_c: bool,
}

/// Relative tolerance of the floating classification.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// Classifies `q = -z.δ / z.v` for `z = exp_v(pt)`.
pub fn wall_membership(pt: &TubePoint, delta: &LatVec) -> Result<WallMembership> {
    let sq = delta.square();
    if sq != -2 {
        return Err(Error::NotARoot(sq));
    }
    let z = exp_v(pt)?;
    let zv = z.pair_lattice(&pt.v);
    let zd = z.pair_lattice(delta);
    let q = -zd / zv;
    let tol = MEMBERSHIP_TOL * zv.norm().max(1.0);
    let dv = delta.pair(&pt.v)?;
    let real = q.im.abs() <= tol;
    Ok(WallMembership {
        on_d: q.norm() <= tol,
        on_a: -dv > 0 && real && q.re <= tol,
        on_c: dv == 0 && real,
    })
}

/// Exact classification for a tube point with rational chart coordinates.
pub fn wall_membership_exact(chart: &TubeChart, x: &[Q], y: &[Q], delta: &LatVec) -> Result<WallMembership> {
    let sq = delta.square();
    if sq != -2 {
        return Err(Error::NotARoot(sq));
    }
    if interval::form(chart.kgram(), y, y) <= Q::zero() {
        return Err(Error::NotPositive);
    }
    let c = chart.chart_coords(delta)?;
    let (re, im) = pairing_exact(chart.kgram(), &c, x, y);
    Ok(WallMembership {
        on_d: re.is_zero() && im.is_zero(),
        on_a: c.r > 0 && im.is_zero() && !re.is_positive(),
        on_c: c.r == 0 && im.is_zero(),
    })
}

/// Exact `z.δ` at `x + iy` for `z` normalized by `z.v = -1`.
pub fn pairing_exact(kg: &[Vec<i64>], c: &ChartCoords, x: &[Q], y: &[Q]) -> (Q, Q) {
    let l: Vec<Q> = c.l.iter().map(|&a| Q::from_integer(a.into())).collect();
    let r = Q::from_integer(c.r.into());
    let s = Q::from_integer(c.s.into());
    let half = Q::new(1.into(), 2.into());
    let re = interval::form(kg, x, &l) - s - half * &r * (interval::form(kg, x, x) - interval::form(kg, y, y));
    let im = interval::form(kg, y, &l) - r * interval::form(kg, x, y);
    (re, im)
}

/// Maximal bisection depth of the wall/box predicate.
pub const MAX_DEPTH: usize = 14;

struct RootData {
    r: Q,
    r2: Q,
    l: Vec<Q>,
}

impl RootData {
    fn new(c: &ChartCoords) -> Self {
        let l: Vec<Q> = c.l.iter().map(|&a| Q::from_integer(a.into())).collect();
        let r = Q::from_integer(c.r.into());
        RootData { r2: &r * &r, r, l }
    }

    fn shifted(&self, x: &[Q]) -> Vec<Q> {
        x.iter().zip(&self.l).map(|(a, b)| &self.r * a - b).collect()
    }

    /// `(rx - l).y`
    fn g(&self, kg: &[Vec<i64>], x: &[Q], y: &[Q]) -> Q {
        interval::form(kg, &self.shifted(x), y)
    }

    /// `(rx - l)^2 - r^2 y^2 + 2`
    fn h(&self, kg: &[Vec<i64>], x: &[Q], y: &[Q]) -> Q {
        let d = self.shifted(x);
        interval::form(kg, &d, &d) - &self.r2 * interval::form(kg, y, y) + Q::from_integer(2.into())
    }

    fn shifted_iv(&self, b: &RatBox) -> Vec<Iv> {
        b.x.iter()
            .zip(&self.l)
            .map(|(iv, l)| iv.scale(&self.r).shift(&-l))
            .collect()
    }

    fn g_iv(&self, kg: &[Vec<i64>], b: &RatBox) -> Iv {
        interval::bilinear(kg, &self.shifted_iv(b), &b.y)
    }

    fn h_iv(&self, kg: &[Vec<i64>], b: &RatBox) -> Iv {
        let d = self.shifted_iv(b);
        interval::quadratic(kg, &d)
            .sub(&interval::quadratic(kg, &b.y).scale(&self.r2))
            .shift(&Q::from_integer(2.into()))
    }

    /// `l/r`, the centre of the wall in `x`.
    fn centre(&self) -> Vec<Q> {
        self.l.iter().map(|a| a / &self.r).collect()
    }
}

fn corners(ivs: &[Iv]) -> Vec<Vec<Q>> {
    let m = ivs.len();
    let mut out = Vec::with_capacity(1 << m);
    for mask in 0..(1usize << m) {
        out.push(
            (0..m)
                .map(|i| {
                    if mask >> i & 1 == 1 {
                        ivs[i].hi.clone()
                    } else {
                        ivs[i].lo.clone()
                    }
                })
                .collect(),
        );
    }
    out
}

fn sample_points(ivs: &[Iv]) -> Vec<Vec<Q>> {
    let mut pts = vec![ivs.iter().map(|iv| iv.mid()).collect::<Vec<_>>()];
    if ivs.len() <= 3 {
        pts.extend(corners(ivs));
    } else {
        for i in 0..ivs.len() {
            for end in [&ivs[i].lo, &ivs[i].hi] {
                let mut p = pts[0].clone();
                p[i] = end.clone();
                pts.push(p);
            }
        }
    }
    pts
}

fn in_box(ivs: &[Iv], p: &[Q]) -> bool {
    ivs.iter().zip(p).all(|(iv, q)| iv.contains(q))
}

/// Points of `{x in B_x : (rx - l).y = 0}` for fixed `y`: projections of
/// sample points along coordinate axes and, in low dimension, intersections
/// with the edges of `B_x`.
fn hyperplane_points(kg: &[Vec<i64>], rd: &RootData, bx: &[Iv], y: &[Q]) -> Vec<Vec<Q>> {
    let m = bx.len();
    // the hyperplane is a.x = beta with a = r G y, beta = l.G y
    let gy: Vec<Q> = (0..m)
        .map(|i| (0..m).map(|j| Q::from_integer(kg[i][j].into()) * &y[j]).sum())
        .collect();
    let a: Vec<Q> = gy.iter().map(|g| &rd.r * g).collect();
    let beta: Q = rd.l.iter().zip(&gy).map(|(l, g)| l * g).sum();
    let mut out = Vec::new();
    let c = rd.centre();
    if in_box(bx, &c) {
        out.push(c);
    }
    let mut bases = vec![bx.iter().map(|iv| iv.mid()).collect::<Vec<_>>()];
    if m <= 3 {
        bases.extend(corners(bx));
    }
    for base in &bases {
        let ax: Q = a.iter().zip(base).map(|(p, q)| p * q).sum();
        for j in 0..m {
            if a[j].is_zero() {
                continue;
            }
            let mut p = base.clone();
            p[j] = &p[j] + (&beta - &ax) / &a[j];
            if bx[j].contains(&p[j]) {
                out.push(p);
            }
        }
    }
    out
}

fn meets_a(kg: &[Vec<i64>], rd: &RootData, b: &RatBox, reference: &RatBox, depth: usize) -> Meets {
    if !rd.g_iv(kg, b).contains_zero() {
        return Meets::No;
    }
    if rd.h_iv(kg, b).hi.is_negative() {
        return Meets::No;
    }
    for y in sample_points(&b.y) {
        for x in hyperplane_points(kg, rd, &b.x, &y) {
            debug_assert!(rd.g(kg, &x, &y).is_zero());
            if !rd.h(kg, &x, &y).is_negative() {
                return Meets::Yes;
            }
        }
    }
    if depth == 0 || b.is_point() {
        return if b.is_point() { Meets::No } else { Meets::Undecided };
    }
    let (l, r) = b.split_widest(reference);
    meets_a(kg, rd, &l, reference, depth - 1).or(|| meets_a(kg, rd, &r, reference, depth - 1))
}

fn meets_d(kg: &[Vec<i64>], rd: &RootData, b: &RatBox, reference: &RatBox, depth: usize) -> Meets {
    if !rd.g_iv(kg, b).contains_zero() || !rd.h_iv(kg, b).contains_zero() {
        return Meets::No;
    }
    let ys = sample_points(&b.y);
    let c = rd.centre();
    if in_box(&b.x, &c) {
        // x = l/r lies on the hyperplane for every y; h varies continuously
        // along any segment of y's inside the box
        let hs: Vec<Q> = ys.iter().map(|y| rd.h(kg, &c, y)).collect();
        if hs.iter().any(|h| !h.is_positive()) && hs.iter().any(|h| !h.is_negative()) {
            return Meets::Yes;
        }
    }
    for y in &ys {
        let hs: Vec<Q> = hyperplane_points(kg, rd, &b.x, y)
            .iter()
            .map(|x| rd.h(kg, x, y))
            .collect();
        if hs.iter().any(|h| !h.is_positive()) && hs.iter().any(|h| !h.is_negative()) {
            return Meets::Yes;
        }
    }
    if depth == 0 || b.is_point() {
        return if b.is_point() { Meets::No } else { Meets::Undecided };
    }
    let (l, r) = b.split_widest(reference);
    meets_d(kg, rd, &l, reference, depth - 1).or(|| meets_d(kg, rd, &r, reference, depth - 1))
}

fn canonical_sign(c: &ChartCoords) -> ChartCoords {
    let first = if c.r != 0 {
        c.r
    } else {
        c.l.iter().copied().find(|&a| a != 0).unwrap_or(c.s)
    };
    if first < 0 {
        ChartCoords {
            r: -c.r,
            l: c.l.iter().map(|a| -a).collect(),
            s: -c.s,
        }
    } else {
        c.clone()
    }
}

fn record(chart: &TubeChart, kind: WallKind, c: ChartCoords, certified: bool) -> WallRecord {
    WallRecord {
        kind,
        root: chart.from_chart(&c).into_coords(),
        chart: c,
        certified,
    }
}

/// Walls of one root that meet the box. This is the single predicate shared
/// by every candidate generator.
pub fn walls_of_root(chart: &TubeChart, bx: &TubeBox, delta: &LatVec) -> Result<Vec<WallRecord>> {
    bx.validate(chart.dim())?;
    let rb = bx.to_rational()?;
    let c = chart.chart_coords(delta)?;
    let sq = delta.square();
    if sq != -2 {
        return Err(Error::NotARoot(sq));
    }
    Ok(walls_of_chart_root(chart, &rb, &c))
}

fn walls_of_chart_root(chart: &TubeChart, rb: &RatBox, c: &ChartCoords) -> Vec<WallRecord> {
    let kg = chart.kgram();
    let mut out = Vec::new();
    if c.r != 0 {
        let canon = canonical_sign(c);
        let rd = RootData::new(&canon);
        if c.r > 0 {
            match meets_a(kg, &rd, rb, rb, MAX_DEPTH) {
                Meets::Yes => out.push(record(chart, WallKind::A, c.clone(), true)),
                Meets::Undecided => out.push(record(chart, WallKind::A, c.clone(), false)),
                Meets::No => {}
            }
        }
        match meets_d(kg, &rd, rb, rb, MAX_DEPTH) {
            Meets::Yes => out.push(record(chart, WallKind::D, canon, true)),
            Meets::Undecided => out.push(record(chart, WallKind::D, canon, false)),
            Meets::No => {}
        }
    } else {
        let l: Vec<Iv> = c.l.iter().map(|&a| Iv::point(Q::from_integer(a.into()))).collect();
        if interval::bilinear(kg, &l, &rb.y).contains_zero() {
            let mut rep = canonical_sign(&ChartCoords {
                r: 0,
                l: c.l.clone(),
                s: 0,
            });
            rep.s = 0;
            out.push(record(chart, WallKind::C, rep, true));
            if interval::bilinear(kg, &l, &rb.x).contains(&Q::from_integer(c.s.into())) {
                out.push(record(chart, WallKind::D, canonical_sign(c), true));
            }
        }
    }
    out
}

/// Sub-box data for the majorant bound.
pub(crate) struct Cell {
    pub xc: Vec<f64>,
    pub majorant: DMatrix<f64>,
    pub kappa: f64,
    pub rho_x: f64,
    pub y2_min: f64,
}

fn to_f64(q: &Q) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn make_cell(chart: &TubeChart, b: &RatBox) -> Option<Cell> {
    let kg = chart.kgram();
    let m = kg.len();
    let y2 = interval::quadratic(kg, &b.y);
    if !y2.lo.is_positive() {
        return None;
    }
    let y2_min = to_f64(&y2.lo) * (1.0 - 1e-12);
    let yc: Vec<Q> = b.y.iter().map(|iv| iv.mid()).collect();
    let yc2 = interval::form(kg, &yc, &yc);
    let ycp: Vec<Iv> = yc.iter().map(|q| Iv::point(q.clone())).collect();
    let cross = interval::bilinear(kg, &b.y, &ycp);
    let denom = (y2_min * to_f64(&yc2)).sqrt();
    let cosh = (to_f64(&cross.hi) * (1.0 + 1e-12) / denom).max(1.0);
    let kappa = (cosh + (cosh * cosh - 1.0).max(0.0).sqrt()).powi(2) * (1.0 + 1e-12);
    let ycf: Vec<f64> = yc.iter().map(to_f64).collect();
    let gyc: Vec<f64> = (0..m).map(|i| (0..m).map(|j| kg[i][j] as f64 * ycf[j]).sum()).collect();
    let yc2f = to_f64(&yc2);
    let majorant = DMatrix::from_fn(m, m, |i, j| 2.0 * gyc[i] * gyc[j] / yc2f - kg[i][j] as f64);
    let half: Vec<f64> = b.x.iter().map(|iv| to_f64(&iv.width()) * 0.5).collect();
    let mut rho2 = 0.0;
    for i in 0..m {
        for j in 0..m {
            rho2 += majorant[(i, j)].abs() * half[i] * half[j];
        }
    }
    Some(Cell {
        xc: b.x.iter().map(|iv| to_f64(&iv.mid())).collect(),
        majorant,
        kappa,
        rho_x: rho2.sqrt() * (1.0 + 1e-12),
        y2_min,
    })
}

const MAX_CELLS: usize = 1 << 14;

fn cover_cells(chart: &TubeChart, b: &RatBox) -> Result<Vec<Cell>> {
    let mut stack = vec![(b.clone(), 0usize)];
    let mut cells = Vec::new();
    while let Some((cur, depth)) = stack.pop() {
        match make_cell(chart, &cur) {
            Some(cell) if cell.kappa <= 4.0 || cur.is_point() => cells.push(cell),
            other => {
                if depth > 40 || cells.len() + stack.len() > MAX_CELLS {
                    return Err(if other.is_none() {
                        Error::BoxLeavesCone
                    } else {
                        Error::Invalid("box too large for the majorant cover".into())
                    });
                }
                let only_y = RatBox {
                    x: cur.x.clone(),
                    y: cur.y.clone(),
                };
                // κ and the cone condition depend on y only
                let (l, r) = split_y(&only_y);
                stack.push((r, depth + 1));
                stack.push((l, depth + 1));
            }
        }
    }
    Ok(cells)
}

fn split_y(b: &RatBox) -> (RatBox, RatBox) {
    let mut best = 0;
    for k in 1..b.y.len() {
        if b.y[k].width() > b.y[best].width() {
            best = k;
        }
    }
    let (l, r) = b.y[best].split();
    let (mut a, mut c) = (b.clone(), b.clone());
    a.y[best] = l;
    c.y[best] = r;
    (a, c)
}

/// Every root whose `D`, `A` or `C` wall can meet the box; `C` families are
/// listed once per `±l` with `s = 0` plus one entry per integral `s` that
/// could give a `D` wall.
pub fn wall_candidates(chart: &TubeChart, bx: &TubeBox) -> Result<Vec<ChartCoords>> {
    let m = chart.dim();
    if m == 0 {
        return Ok(Vec::new());
    }
    bx.validate(m)?;
    let rb = bx.to_rational()?;
    if !box_in_cone(chart, &rb, 12) {
        return Err(Error::BoxLeavesCone);
    }
    let kg = chart.kgram();
    let cells = cover_cells(chart, &rb)?;
    let mut found = BTreeSet::new();
    let x_range = |l: &[i64]| -> (i64, i64) {
        let li: Vec<Iv> = l.iter().map(|&a| Iv::point(Q::from_integer(a.into()))).collect();
        let e = interval::bilinear(kg, &li, &rb.x);
        (
            e.lo.ceil().to_integer().to_i64().unwrap_or(i64::MIN),
            e.hi.floor().to_integer().to_i64().unwrap_or(i64::MAX),
        )
    };
    let k_lat = chart.k_lattice();
    for cell in &cells {
        let r_max = (2.0 / cell.y2_min).sqrt().floor() as i64;
        for r in 1..=r_max {
            let center: Vec<f64> = cell.xc.iter().map(|a| r as f64 * a).collect();
            let rad = (2.0 * cell.kappa).sqrt() + r as f64 * cell.rho_x;
            for l in short_vectors::enumerate(&cell.majorant, &center, rad * rad)? {
                let num = k_lat.pair_raw(&l, &l) + 2;
                if num % (2 * r) == 0 {
                    found.insert(ChartCoords { r, l, s: num / (2 * r) });
                }
            }
        }
        let zero = vec![0.0; m];
        for l in short_vectors::enumerate(&cell.majorant, &zero, 2.0 * cell.kappa)? {
            if k_lat.pair_raw(&l, &l) != -2 {
                continue;
            }
            let l = canonical_sign(&ChartCoords { r: 0, l, s: 0 }).l;
            found.insert(ChartCoords {
                r: 0,
                l: l.clone(),
                s: 0,
            });
            let (lo, hi) = x_range(&l);
            for s in lo..=hi {
                found.insert(ChartCoords { r: 0, l: l.clone(), s });
            }
        }
    }
    Ok(found.into_iter().collect())
}

/// All walls meeting a compact box of the tube, sorted by kind and root.
pub fn enumerate_walls_region(chart: &TubeChart, bx: &TubeBox) -> Result<Vec<WallRecord>> {
    let candidates = wall_candidates(chart, bx)?;
    let rb = bx.to_rational()?;
    let mut out: Vec<WallRecord> = candidates
        .par_iter()
        .flat_map_iter(|c| walls_of_chart_root(chart, &rb, c))
        .collect();
    out.sort();
    out.dedup_by(|a, b| a.key() == b.key());
    Ok(out)
}

/// Sign of `y.l` style linear functions, used by chamber tests.
pub(crate) fn sign_of(q: &Q) -> i32 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Lattice;

    fn chart(preset: &str) -> TubeChart {
        let n = Lattice::preset(preset).unwrap();
        TubeChart::new(&n.point_class().unwrap()).unwrap()
    }

    fn q(a: i64, b: i64) -> Q {
        Q::new(a.into(), b.into())
    }

    #[test]
    fn rank_three_a_wall_is_a_vertical_segment() {
        // U+<2> Mukai form: δ = (1, 0, 1) has A-wall x = 0, 0 < y <= 1
        let ch = chart("mukai_rank1(1)");
        let d = ch.lattice().vector(vec![1, 0, 1]).unwrap();
        let hit = TubeBox::new(vec![(-0.1, 0.1)], vec![(0.5, 0.9)]);
        let miss = TubeBox::new(vec![(-0.1, 0.1)], vec![(1.01, 1.5)]);
        let kinds: Vec<WallKind> = walls_of_root(&ch, &hit, &d).unwrap().iter().map(|w| w.kind).collect();
        assert_eq!(kinds, vec![WallKind::A]);
        assert!(walls_of_root(&ch, &miss, &d).unwrap().is_empty());
        let endpoint = TubeBox::new(vec![(-0.1, 0.1)], vec![(0.9, 1.1)]);
        let kinds: Vec<WallKind> = walls_of_root(&ch, &endpoint, &d)
            .unwrap()
            .iter()
            .map(|w| w.kind)
            .collect();
        assert_eq!(kinds, vec![WallKind::A, WallKind::D]);
    }

    #[test]
    fn exact_membership_at_wall_points() {
        let ch = chart("mukai_rank1(1)");
        let d = ch.lattice().vector(vec![1, 0, 1]).unwrap();
        let m = wall_membership_exact(&ch, &[q(0, 1)], &[q(1, 2)], &d).unwrap();
        assert!(m.on_a && !m.on_d && !m.on_c);
        let m = wall_membership_exact(&ch, &[q(0, 1)], &[q(1, 1)], &d).unwrap();
        assert!(m.on_a && m.on_d);
        let m = wall_membership_exact(&ch, &[q(1, 1)], &[q(1, 1)], &d).unwrap();
        assert_eq!(m, WallMembership::default());
    }

    #[test]
    fn float_membership_matches_exact_on_sample() {
        let ch = chart("mukai_rank1(1)");
        let d = ch.lattice().vector(vec![1, 0, 1]).unwrap();
        let pt = ch.point(&[0.0], &[0.5]).unwrap();
        let m = wall_membership(&pt, &d).unwrap();
        assert!(m.on_a && !m.on_d);
        let pt = ch.point(&[1.0], &[1.0]).unwrap();
        assert_eq!(wall_membership(&pt, &d).unwrap(), WallMembership::default());
        let not_root = ch.lattice().vector(vec![1, 0, 0]).unwrap();
        assert_eq!(wall_membership(&pt, &not_root).unwrap_err(), Error::NotARoot(0));
    }

    #[test]
    fn c_wall_in_rank_four() {
        // NS = <2> + <-2>, C = (0, 1): the C-wall is y_2 = 0
        let ch = chart("mukai(<2>+<-2>)");
        let bx = TubeBox::new(vec![(-0.2, 0.2), (-0.3, 0.3)], vec![(1.5, 1.6), (-0.05, 0.05)]);
        let walls = enumerate_walls_region(&ch, &bx).unwrap();
        let c: Vec<&WallRecord> = walls.iter().filter(|w| w.kind == WallKind::C).collect();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].chart.l, vec![0, 1]);
        // x.C = -2 x_2 ranges over [-0.6, 0.6], so only s = 0 gives a D-wall
        let d: Vec<&WallRecord> = walls.iter().filter(|w| w.kind == WallKind::D).collect();
        assert_eq!(d.len(), 1);
        assert!(walls.iter().all(|w| w.kind != WallKind::A));
    }

    #[test]
    fn unbounded_box_is_rejected() {
        let ch = chart("mukai_rank1(1)");
        let bx = TubeBox::new(vec![(0.0, f64::INFINITY)], vec![(1.0, 2.0)]);
        assert_eq!(enumerate_walls_region(&ch, &bx).unwrap_err(), Error::UnboundedBox);
        let bx = TubeBox::new(vec![(0.0, 1.0)], vec![(-1.0, 2.0)]);
        assert_eq!(enumerate_walls_region(&ch, &bx).unwrap_err(), Error::BoxLeavesCone);
    }
}
