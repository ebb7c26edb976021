//! Wall exports: JSON records, crossings of a segment with exact parameter
//! enclosures, and rasterized 2D slices of the tube (CSV chamber ids, SVG
//! line art).
//!
//! Along a segment `t ↦ (x0 + t dx, y0 + t dy)` both parts of `z.δ` are
//! quadratics in `t` with rational coefficients, so crossings are located
//! exactly: rational roots are returned as points, irrational ones as
//! isolating intervals of width at most `2^-60`.

use super::chart::{ChartCoords, TubeBox, TubeChart};
use super::interval::Q;
use super::walls::{pairing_exact, wall_candidates, WallKind, WallRecord};
use crate::error::{Error, Result};
use crate::exact_json::{rational_to_f64, rational_to_string, ExactInt};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

const ISOLATION_STEPS: usize = 60;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallJson {
    pub kind: WallKind,
    pub root_coords: Vec<ExactInt>,
    /// Enclosure of the crossing parameter, when the record comes from a path.
    pub t_interval: Option<[String; 2]>,
    pub certified: bool,
}

impl From<&WallRecord> for WallJson {
    fn from(w: &WallRecord) -> Self {
        WallJson {
            kind: w.kind,
            root_coords: w.root.iter().map(|&a| ExactInt(a)).collect(),
            t_interval: None,
            certified: w.certified,
        }
    }
}

impl From<&SegmentCrossing> for WallJson {
    fn from(c: &SegmentCrossing) -> Self {
        WallJson {
            kind: c.kind,
            root_coords: c.root.iter().map(|&a| ExactInt(a)).collect(),
            t_interval: Some([rational_to_string(&c.t_lo), rational_to_string(&c.t_hi)]),
            certified: true,
        }
    }
}

/// A wall met by a segment for `t` in `[t_lo, t_hi]`. The interval is a
/// single point for a transversal crossing at a rational parameter, a tiny
/// isolating interval for an irrational one, and a genuine interval when the
/// segment runs inside the wall.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SegmentCrossing {
    pub t_lo: Q,
    pub t_hi: Q,
    pub kind: WallKind,
    pub root: Vec<i64>,
    pub chart: ChartCoords,
}

impl SegmentCrossing {
    pub fn t_mid(&self) -> f64 {
        0.5 * (rational_to_f64(&self.t_lo) + rational_to_f64(&self.t_hi))
    }
}

/// Polynomial in `t`, coefficients from low to high degree, trimmed.
#[derive(Debug, Clone, PartialEq)]
struct Poly(Vec<Q>);

impl Poly {
    fn new(mut c: Vec<Q>) -> Self {
        while c.last().map_or(false, |q| q.is_zero()) {
            c.pop();
        }
        Poly(c)
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn deg(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn eval(&self, t: &Q) -> Q {
        self.0.iter().rev().fold(Q::zero(), |acc, c| acc * t + c)
    }

    fn sign(&self, t: &Q) -> i32 {
        let v = self.eval(t);
        if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        }
    }

    fn rem(&self, d: &Poly) -> Poly {
        let mut r = self.0.clone();
        let lead = d.0.last().expect("nonzero divisor").clone();
        while r.len() >= d.0.len() && !r.is_empty() {
            let k = r.len() - d.0.len();
            let q = r.last().expect("nonempty").clone() / &lead;
            for (i, c) in d.0.iter().enumerate() {
                r[k + i] -= &q * c;
            }
            r.pop();
            while r.last().map_or(false, |q| q.is_zero()) {
                r.pop();
            }
        }
        Poly::new(r)
    }

    fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a
    }
}

#[derive(Debug, Clone)]
struct Root {
    lo: Q,
    hi: Q,
}

impl Root {
    fn exact(t: Q) -> Self {
        Root { lo: t.clone(), hi: t }
    }
}

enum Zeros {
    All,
    Roots(Vec<Root>),
}

fn rational_sqrt(q: &Q) -> Option<Q> {
    if q.is_negative() {
        return None;
    }
    let n: BigInt = q.numer().sqrt();
    let d: BigInt = q.denom().sqrt();
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| Q::new(n, d))
}

fn unit(t: &Q) -> bool {
    !t.is_negative() && *t <= Q::one()
}

/// Isolates the root of `p` in `[a, b]` where `p` changes sign strictly.
fn isolate(p: &Poly, a: Q, b: Q) -> Root {
    let (mut lo, mut hi) = (a, b);
    let s_lo = p.sign(&lo);
    for _ in 0..ISOLATION_STEPS {
        let mid = (&lo + &hi) / Q::from_integer(2.into());
        match p.sign(&mid) {
            0 => return Root::exact(mid),
            s if s == s_lo => lo = mid,
            _ => hi = mid,
        }
    }
    Root { lo, hi }
}

fn zeros_in_unit(p: &Poly) -> Zeros {
    if p.is_zero() {
        return Zeros::All;
    }
    let c = &p.0;
    let roots = match p.deg() {
        0 => Vec::new(),
        1 => {
            let t = -&c[0] / &c[1];
            if unit(&t) {
                vec![Root::exact(t)]
            } else {
                Vec::new()
            }
        }
        2 => {
            let disc = &c[1] * &c[1] - Q::from_integer(4.into()) * &c[0] * &c[2];
            if disc.is_negative() {
                Vec::new()
            } else if let Some(s) = rational_sqrt(&disc) {
                let two_a = Q::from_integer(2.into()) * &c[2];
                let mut ts: Vec<Q> = vec![(-&c[1] - &s) / &two_a, (-&c[1] + &s) / &two_a];
                ts.sort();
                ts.dedup();
                ts.into_iter().filter(unit).map(Root::exact).collect()
            } else {
                // irrational roots, separated by the vertex
                let tv = -&c[1] / (Q::from_integer(2.into()) * &c[2]);
                let mut cuts = vec![Q::zero()];
                if tv.is_positive() && tv < Q::one() {
                    cuts.push(tv);
                }
                cuts.push(Q::one());
                cuts.windows(2)
                    .filter(|w| p.sign(&w[0]) * p.sign(&w[1]) < 0)
                    .map(|w| isolate(p, w[0].clone(), w[1].clone()))
                    .collect()
            }
        }
        _ => unreachable!("pairings along a segment are at most quadratic"),
    };
    Zeros::Roots(roots)
}

/// Sign of `q` at the root isolated in `root`, refining against `p`.
fn sign_at_root(q: &Poly, p: &Poly, root: &Root) -> i32 {
    if root.lo == root.hi {
        return q.sign(&root.lo);
    }
    let q = q.rem(p);
    if q.is_zero() {
        return 0;
    }
    if q.deg() == 0 {
        return q.sign(&Q::zero());
    }
    // q is linear with a rational root; the isolated root is irrational
    let tq = -&q.0[0] / &q.0[1];
    let (mut lo, mut hi) = (root.lo.clone(), root.hi.clone());
    let s_lo = p.sign(&lo);
    for _ in 0..512 {
        if tq < lo || tq > hi {
            break;
        }
        let mid = (&lo + &hi) / Q::from_integer(2.into());
        if p.sign(&mid) == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    q.sign(&((&lo + &hi) / Q::from_integer(2.into())))
}

/// Components of `{t in [0, 1] : p(t) <= 0}` as enclosing intervals.
fn nonpositive_set(p: &Poly) -> Vec<(Q, Q)> {
    let roots = match zeros_in_unit(p) {
        Zeros::All => return vec![(Q::zero(), Q::one())],
        Zeros::Roots(r) => r,
    };
    let mut pieces: Vec<(Q, Q)> = roots.iter().map(|r| (r.lo.clone(), r.hi.clone())).collect();
    let mut cuts = vec![(Q::zero(), Q::zero())];
    cuts.extend(roots.iter().map(|r| (r.lo.clone(), r.hi.clone())));
    cuts.push((Q::one(), Q::one()));
    for w in cuts.windows(2) {
        let (a, b) = (&w[0].1, &w[1].0);
        if a < b {
            let mid = (a + b) / Q::from_integer(2.into());
            if p.sign(&mid) < 0 {
                pieces.push((w[0].0.clone(), w[1].1.clone()));
            }
        }
    }
    if p.sign(&Q::zero()) <= 0 {
        pieces.push((Q::zero(), Q::zero()));
    }
    if p.sign(&Q::one()) <= 0 {
        pieces.push((Q::one(), Q::one()));
    }
    merge(pieces)
}

fn merge(mut v: Vec<(Q, Q)>) -> Vec<(Q, Q)> {
    v.sort();
    let mut out: Vec<(Q, Q)> = Vec::new();
    for (a, b) in v {
        match out.last_mut() {
            Some(last) if a <= last.1 => {
                if b > last.1 {
                    last.1 = b;
                }
            }
            _ => out.push((a, b)),
        }
    }
    out
}

fn along(x0: &[Q], dx: &[Q], t: &Q) -> Vec<Q> {
    x0.iter().zip(dx).map(|(a, d)| a + d * t).collect()
}

/// `Re` and `Im` of `z.δ` along the segment as polynomials in `t`.
fn pairing_polys(kg: &[Vec<i64>], c: &ChartCoords, p0: &(Vec<Q>, Vec<Q>), d: &(Vec<Q>, Vec<Q>)) -> (Poly, Poly) {
    let at = |t: &Q| pairing_exact(kg, c, &along(&p0.0, &d.0, t), &along(&p0.1, &d.1, t));
    let (r0, i0) = at(&Q::zero());
    let (r1, i1) = at(&Q::one());
    let (rm, im) = at(&-Q::one());
    let half = Q::new(1.into(), 2.into());
    let quad = |f0: Q, f1: Q, fm: Q| {
        let a1 = (&f1 - &fm) * &half;
        let a2 = (&f1 + &fm) * &half - &f0;
        Poly::new(vec![f0, a1, a2])
    };
    (quad(r0.clone(), r1, rm), quad(i0, i1, im))
}

fn crossings_of(
    chart: &TubeChart,
    c: &ChartCoords,
    p0: &(Vec<Q>, Vec<Q>),
    d: &(Vec<Q>, Vec<Q>),
) -> Vec<SegmentCrossing> {
    let kg = chart.kgram();
    let (re, im) = pairing_polys(kg, c, p0, d);
    let mut out = Vec::new();
    let mut push = |kind: WallKind, cc: &ChartCoords, iv: Vec<(Q, Q)>| {
        let root = chart.from_chart(cc).into_coords();
        for (t_lo, t_hi) in iv {
            out.push(SegmentCrossing {
                t_lo,
                t_hi,
                kind,
                root: root.clone(),
                chart: cc.clone(),
            });
        }
    };
    // D: common zeros of both parts
    let d_set = match (re.is_zero(), im.is_zero()) {
        (true, true) => vec![(Q::zero(), Q::one())],
        (true, false) => roots_as_intervals(&im),
        (false, true) => roots_as_intervals(&re),
        (false, false) => {
            let g = Poly::gcd(&re, &im);
            if g.deg() == 0 {
                Vec::new()
            } else {
                roots_as_intervals(&g)
            }
        }
    };
    push(WallKind::D, c, d_set);
    if c.r > 0 {
        let a_set = match zeros_in_unit(&im) {
            Zeros::All => nonpositive_set(&re),
            Zeros::Roots(rs) => rs
                .iter()
                .filter(|r| sign_at_root(&re, &im, r) <= 0)
                .map(|r| (r.lo.clone(), r.hi.clone()))
                .collect(),
        };
        push(WallKind::A, c, a_set);
    } else if c.s == 0 {
        // the C wall depends on l only; the s = 0 candidate stands for it
        push(WallKind::C, c, roots_as_intervals(&im));
    }
    out
}

fn roots_as_intervals(p: &Poly) -> Vec<(Q, Q)> {
    match zeros_in_unit(p) {
        Zeros::All => vec![(Q::zero(), Q::one())],
        Zeros::Roots(rs) => rs.into_iter().map(|r| (r.lo, r.hi)).collect(),
    }
}

fn exact_vec(v: &[f64]) -> Result<Vec<Q>> {
    v.iter().map(|&a| Q::from_float(a).ok_or(Error::UnboundedBox)).collect()
}

fn crossings_with(
    chart: &TubeChart,
    candidates: &[ChartCoords],
    p0: &(Vec<Q>, Vec<Q>),
    p1: &(Vec<Q>, Vec<Q>),
) -> Vec<SegmentCrossing> {
    let d = (
        p1.0.iter().zip(&p0.0).map(|(a, b)| a - b).collect::<Vec<_>>(),
        p1.1.iter().zip(&p0.1).map(|(a, b)| a - b).collect::<Vec<_>>(),
    );
    let mut out: Vec<SegmentCrossing> = candidates.iter().flat_map(|c| crossings_of(chart, c, p0, &d)).collect();
    out.sort();
    out.dedup();
    out
}

/// Walls crossed by the chart segment from `(x0, y0)` to `(x1, y1)`, ordered
/// by crossing parameter.
pub fn walls_along_segment(
    chart: &TubeChart,
    x0: &[f64],
    y0: &[f64],
    x1: &[f64],
    y1: &[f64],
) -> Result<Vec<SegmentCrossing>> {
    let bound =
        |a: &[f64], b: &[f64]| -> Vec<(f64, f64)> { a.iter().zip(b).map(|(&u, &w)| (u.min(w), u.max(w))).collect() };
    let bx = TubeBox::new(bound(x0, x1), bound(y0, y1));
    let candidates = wall_candidates(chart, &bx)?;
    let p0 = (exact_vec(x0)?, exact_vec(y0)?);
    let p1 = (exact_vec(x1)?, exact_vec(y1)?);
    Ok(crossings_with(chart, &candidates, &p0, &p1))
}

/// A 2D slice of the tube: all chart coordinates `(x_1..x_m, y_1..y_m)` are
/// fixed at the base point except the two `axes`, which run over `ranges`
/// with `samples` grid points each.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Slice {
    pub base_x: Vec<f64>,
    pub base_y: Vec<f64>,
    pub axes: [usize; 2],
    pub ranges: [(f64, f64); 2],
    pub samples: [usize; 2],
}

impl Slice {
    fn validate(&self, m: usize) -> Result<()> {
        if self.base_x.len() != m || self.base_y.len() != m {
            return Err(Error::WrongLength {
                got: self.base_x.len().max(self.base_y.len()),
                rank: m,
            });
        }
        if self.axes[0] == self.axes[1] || self.axes.iter().any(|&a| a >= 2 * m) {
            return Err(Error::Invalid(format!("bad slice axes {:?}", self.axes)));
        }
        if self.samples.iter().any(|&n| n < 2) {
            return Err(Error::Invalid("a slice needs at least two samples per axis".into()));
        }
        if self
            .ranges
            .iter()
            .any(|&(a, b)| !(a < b) || !a.is_finite() || !b.is_finite())
        {
            return Err(Error::UnboundedBox);
        }
        Ok(())
    }

    fn bounding_box(&self) -> TubeBox {
        let m = self.base_x.len();
        let mut x: Vec<(f64, f64)> = self.base_x.iter().map(|&a| (a, a)).collect();
        let mut y: Vec<(f64, f64)> = self.base_y.iter().map(|&a| (a, a)).collect();
        for (k, &axis) in self.axes.iter().enumerate() {
            if axis < m {
                x[axis] = self.ranges[k];
            } else {
                y[axis - m] = self.ranges[k];
            }
        }
        TubeBox::new(x, y)
    }

    fn grid_value(&self, k: usize, i: usize) -> Result<Q> {
        let (a, b) = self.ranges[k];
        let (a, b) = (exact_vec(&[a])?.remove(0), exact_vec(&[b])?.remove(0));
        let n = Q::from_integer((self.samples[k] - 1).into());
        Ok(&a + (&b - &a) * Q::from_integer(i.into()) / n)
    }

    fn grid_point(&self, i: usize, j: usize) -> Result<(Vec<Q>, Vec<Q>)> {
        let m = self.base_x.len();
        let mut x = exact_vec(&self.base_x)?;
        let mut y = exact_vec(&self.base_y)?;
        for (k, (&axis, idx)) in self.axes.iter().zip([i, j]).enumerate() {
            let v = self.grid_value(k, idx)?;
            if axis < m {
                x[axis] = v;
            } else {
                y[axis - m] = v;
            }
        }
        Ok((x, y))
    }
}

/// Crossings on the grid edges of a slice and the induced chamber labelling.
#[derive(Debug, Clone)]
pub struct SliceRaster {
    pub slice: Slice,
    /// `chamber_ids[j][i]` for the grid point with indices `(i, j)`; ids are
    /// assigned in raster order starting at 0.
    pub chamber_ids: Vec<Vec<usize>>,
    /// `h_edges[j][i]`: crossings on the edge from `(i, j)` to `(i + 1, j)`.
    h_edges: Vec<Vec<Vec<SegmentCrossing>>>,
    /// `v_edges[j][i]`: crossings on the edge from `(i, j)` to `(i, j + 1)`.
    v_edges: Vec<Vec<Vec<SegmentCrossing>>>,
}

fn separates(cs: &[SegmentCrossing]) -> bool {
    cs.iter().any(|c| c.kind != WallKind::D)
}

fn find(parent: &mut [usize], mut a: usize) -> usize {
    while parent[a] != a {
        parent[a] = parent[parent[a]];
        a = parent[a];
    }
    a
}

/// Rasterizes the arrangement of `A` and `C` walls on a slice. Two adjacent
/// grid points share a chamber id when the edge between them crosses no
/// such wall, so chambers are connected components at grid resolution.
pub fn rasterize(chart: &TubeChart, slice: &Slice) -> Result<SliceRaster> {
    slice.validate(chart.dim())?;
    let candidates = wall_candidates(chart, &slice.bounding_box())?;
    let [nx, ny] = slice.samples;
    let mut points = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            points.push(slice.grid_point(i, j)?);
        }
    }
    let idx = |i: usize, j: usize| j * nx + i;
    let edge = |a: usize, b: usize| crossings_with(chart, &candidates, &points[a], &points[b]);
    let h_edges: Vec<Vec<Vec<SegmentCrossing>>> = (0..ny)
        .into_par_iter()
        .map(|j| (0..nx - 1).map(|i| edge(idx(i, j), idx(i + 1, j))).collect())
        .collect();
    let v_edges: Vec<Vec<Vec<SegmentCrossing>>> = (0..ny - 1)
        .into_par_iter()
        .map(|j| (0..nx).map(|i| edge(idx(i, j), idx(i, j + 1))).collect())
        .collect();
    let mut parent: Vec<usize> = (0..nx * ny).collect();
    let union = |a: usize, b: usize, parent: &mut Vec<usize>| {
        let (ra, rb) = (find(parent, a), find(parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    };
    for j in 0..ny {
        for i in 0..nx {
            if i + 1 < nx && !separates(&h_edges[j][i]) {
                union(idx(i, j), idx(i + 1, j), &mut parent);
            }
            if j + 1 < ny && !separates(&v_edges[j][i]) {
                union(idx(i, j), idx(i, j + 1), &mut parent);
            }
        }
    }
    let mut ids = BTreeMap::new();
    let mut chamber_ids = vec![vec![0; nx]; ny];
    for j in 0..ny {
        for i in 0..nx {
            let root = find(&mut parent, idx(i, j));
            let next = ids.len();
            chamber_ids[j][i] = *ids.entry(root).or_insert(next);
        }
    }
    Ok(SliceRaster {
        slice: slice.clone(),
        chamber_ids,
        h_edges,
        v_edges,
    })
}

impl SliceRaster {
    pub fn chamber_count(&self) -> usize {
        self.chamber_ids.iter().flatten().max().map_or(0, |&m| m + 1)
    }

    /// Distinct walls met by the grid edges.
    pub fn walls(&self) -> Vec<(WallKind, Vec<i64>)> {
        let set: BTreeSet<(WallKind, Vec<i64>)> = self
            .h_edges
            .iter()
            .chain(&self.v_edges)
            .flatten()
            .flatten()
            .map(|c| (c.kind, c.root.clone()))
            .collect();
        set.into_iter().collect()
    }

    /// One row per sample of the second axis, lowest first.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for row in &self.chamber_ids {
            let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    /// Line art of the `A` and `C` walls, joining crossing points on the
    /// edges of each grid cell.
    pub fn to_svg(&self) -> String {
        const SIZE: f64 = 600.0;
        const MARGIN: f64 = 20.0;
        let [nx, ny] = self.slice.samples;
        let px = |u: f64| MARGIN + u * SIZE;
        let py = |w: f64| MARGIN + (1.0 - w) * SIZE;
        let (fx, fy) = ((nx - 1) as f64, (ny - 1) as f64);
        let mut lines = BTreeSet::new();
        for j in 0..ny - 1 {
            for i in 0..nx - 1 {
                let mut pts: BTreeMap<(WallKind, Vec<i64>), Vec<(f64, f64)>> = BTreeMap::new();
                let sides = [
                    (&self.h_edges[j][i], (i as f64, j as f64), (1.0, 0.0)),
                    (&self.v_edges[j][i + 1], ((i + 1) as f64, j as f64), (0.0, 1.0)),
                    (&self.h_edges[j + 1][i], (i as f64, (j + 1) as f64), (1.0, 0.0)),
                    (&self.v_edges[j][i], (i as f64, j as f64), (0.0, 1.0)),
                ];
                for (cs, (ox, oy), (dx, dy)) in sides {
                    for c in cs.iter().filter(|c| c.kind != WallKind::D) {
                        let (lo, hi) = (rational_to_f64(&c.t_lo), rational_to_f64(&c.t_hi));
                        let a = ((ox + lo * dx) / fx, (oy + lo * dy) / fy);
                        if hi - lo > 1e-9 {
                            let b = ((ox + hi * dx) / fx, (oy + hi * dy) / fy);
                            lines.insert((c.kind, segment(px(a.0), py(a.1), px(b.0), py(b.1))));
                        } else {
                            pts.entry((c.kind, c.root.clone())).or_default().push(a);
                        }
                    }
                }
                for ((kind, _), p) in pts {
                    for pair in p.chunks_exact(2) {
                        let (a, b) = (pair[0], pair[1]);
                        lines.insert((kind, segment(px(a.0), py(a.1), px(b.0), py(b.1))));
                    }
                }
            }
        }
        let total = SIZE + 2.0 * MARGIN;
        let mut s = String::new();
        let _ = writeln!(
            s,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{total}\" height=\"{total}\" viewBox=\"0 0 {total} {total}\">"
        );
        let _ = writeln!(
            s,
            "<rect x=\"{MARGIN}\" y=\"{MARGIN}\" width=\"{SIZE}\" height=\"{SIZE}\" fill=\"none\" stroke=\"#999\"/>"
        );
        for (kind, seg) in lines {
            let colour = match kind {
                WallKind::A => "#b03a2e",
                WallKind::C => "#1f5fa8",
                WallKind::D => "#000",
            };
            let _ = writeln!(s, "<line {seg} stroke=\"{colour}\" stroke-width=\"1.5\"/>");
        }
        s.push_str("</svg>\n");
        s
    }
}

fn segment(x1: f64, y1: f64, x2: f64, y2: f64) -> String {
    let ((x1, y1), (x2, y2)) = if (x1, y1) <= (x2, y2) {
        ((x1, y1), (x2, y2))
    } else {
        ((x2, y2), (x1, y1))
    };
    format!("x1=\"{x1:.3}\" y1=\"{y1:.3}\" x2=\"{x2:.3}\" y2=\"{y2:.3}\"")
}

/// JSON array of wall records.
pub fn walls_json(records: &[WallJson]) -> String {
    serde_json::to_string_pretty(records).expect("wall records serialize")
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
    fn polynomial_roots_are_exact_or_isolated() {
        // t^2 - 1/4, rational roots
        let p = Poly::new(vec![q(-1, 4), q(0, 1), q(1, 1)]);
        match zeros_in_unit(&p) {
            Zeros::Roots(r) => {
                assert_eq!(r.len(), 1);
                assert_eq!(r[0].lo, q(1, 2));
                assert_eq!(r[0].hi, q(1, 2));
            }
            Zeros::All => panic!(),
        }
        // t^2 - 1/2, irrational root 0.7071...
        let p = Poly::new(vec![q(-1, 2), q(0, 1), q(1, 1)]);
        match zeros_in_unit(&p) {
            Zeros::Roots(r) => {
                assert_eq!(r.len(), 1);
                let s = std::f64::consts::FRAC_1_SQRT_2;
                assert!(rational_to_f64(&r[0].lo) <= s && s <= rational_to_f64(&r[0].hi));
                assert!(rational_to_f64(&r[0].width_for_test()) < 1e-17);
            }
            Zeros::All => panic!(),
        }
    }

    impl Root {
        fn width_for_test(&self) -> Q {
            &self.hi - &self.lo
        }
    }

    #[test]
    fn gcd_finds_common_root() {
        let a = Poly::new(vec![q(-1, 2), q(1, 1)]);
        let b = Poly::new(vec![q(1, 1), q(1, 1)]);
        let pa = Poly::new(vec![q(-1, 2), q(1, 2), q(1, 1)]); // (t - 1/2)(t + 1)
        let g = Poly::gcd(&pa, &a);
        assert_eq!(g.deg(), 1);
        assert_eq!(Poly::gcd(&a, &b).deg(), 0);
    }

    #[test]
    fn vertical_segment_meets_a_then_d() {
        // root (1, 0, 1) in U+<2>: A-wall is x = 0, 0 < y <= 1, D-point y = 1
        let ch = chart("mukai_rank1(1)");
        let cs = walls_along_segment(&ch, &[-0.5], &[0.5], &[0.5], &[0.5]).unwrap();
        let a: Vec<&SegmentCrossing> = cs.iter().filter(|c| c.kind == WallKind::A).collect();
        assert!(a.iter().any(|c| c.t_lo == q(1, 2) && c.t_hi == q(1, 2)));
        let cs = walls_along_segment(&ch, &[0.0], &[0.5], &[0.0], &[1.5]).unwrap();
        let d: Vec<&SegmentCrossing> = cs
            .iter()
            .filter(|c| c.kind == WallKind::D && c.chart.r == 1 && c.chart.l == vec![0])
            .collect();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].t_lo, q(1, 2));
        let a_in: Vec<&SegmentCrossing> = cs
            .iter()
            .filter(|c| c.kind == WallKind::A && c.chart.r == 1 && c.chart.l == vec![0])
            .collect();
        assert_eq!(a_in.len(), 1);
        assert_eq!((a_in[0].t_lo.clone(), a_in[0].t_hi.clone()), (q(0, 1), q(1, 2)));
    }

    #[test]
    fn c_wall_slice_has_two_chambers() {
        // NS = <2>+<-2>, y_1 = 2 fixed, large enough that no A-walls appear
        let ch = chart("mukai(<2>+<-2>)");
        let slice = Slice {
            base_x: vec![0.0, 0.0],
            base_y: vec![2.0, 0.0],
            axes: [0, 3],
            ranges: [(-0.5, 0.5), (-0.5, 0.5)],
            samples: [8, 8],
        };
        let r = rasterize(&ch, &slice).unwrap();
        assert_eq!(r.chamber_count(), 2);
        assert_eq!(r.chamber_ids[0][0], 0);
        assert_eq!(r.chamber_ids[7][7], 1);
        let csv = r.to_csv();
        assert_eq!(csv.lines().count(), 8);
        let svg = r.to_svg();
        assert!(svg.contains("<line"));
        assert_eq!(svg, rasterize(&ch, &slice).unwrap().to_svg());
    }

    #[test]
    fn json_records_carry_kind_and_interval() {
        let ch = chart("mukai_rank1(1)");
        let cs = walls_along_segment(&ch, &[0.0], &[0.5], &[0.0], &[1.5]).unwrap();
        let js: Vec<WallJson> = cs.iter().map(WallJson::from).collect();
        let text = walls_json(&js);
        assert!(text.contains("\"kind\": \"D\""));
        assert!(text.contains("\"t_interval\""));
        assert!(text.contains("\"1/2\""));
    }
}
