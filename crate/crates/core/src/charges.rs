//! Central charges of Bridgeland stability at the level of Mukai vectors:
//! `Exp`-classes, phases, the universal cover of `GL_2^+(R)`, factorization
//! of charge paths through the tube, wall events along paths, the
//! large-volume threshold and boundary points of type `C_k`.

use crate::error::{Error, Result};
use crate::exact_json::{rational, rational_to_f64};
use crate::geodesic::{PathKind, PathSpec};
use crate::lattice::{Isometry, LatVec, Lattice};
use crate::period::export::walls_along_segment;
use crate::period::{exp_v, gl2_act, gl2_factor, log_v, TubeBox, TubeChart, WallKind};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

type Q = BigRational;

fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

fn ns_of(lat: &Lattice) -> Result<&Lattice> {
    lat.mukai_ns().ok_or(Error::NotMukai)
}

fn ns_pair_q(ns: &Lattice, a: &[Q], b: &[Q]) -> Q {
    let g = ns.gram();
    let mut acc = Q::zero();
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            if g[i][j] != 0 {
                acc += ai * bj * q(g[i][j]);
            }
        }
    }
    acc
}

/// Central charge covector `z`; the charge of a class `v` is `v.z`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChargeVec {
    pub z: crate::period::ComplexVec,
}

impl ChargeVec {
    pub fn charge(&self, v: &LatVec) -> Result<Complex64> {
        central_charge(self, v)
    }
}

/// `Exp(β + iω) = (1, β + iω, (β + iω)^2 / 2)` in Mukai coordinates.
pub fn exp_class(lat: &Lattice, beta: &[f64], omega: &[f64]) -> Result<ChargeVec> {
    let ns = ns_of(lat)?;
    let m = ns.rank();
    for v in [beta, omega] {
        if v.len() != m {
            return Err(Error::WrongLength { got: v.len(), rank: m });
        }
    }
    let w2 = ns.pair_f64(omega, omega);
    if !(w2 > 0.0) {
        return Err(Error::NonPositiveOmega(format!("ω^2 = {w2}")));
    }
    let b2 = ns.pair_f64(beta, beta);
    let mut re = vec![1.0];
    re.extend_from_slice(beta);
    re.push(0.5 * (b2 - w2));
    let mut im = vec![0.0];
    im.extend_from_slice(omega);
    im.push(ns.pair_f64(beta, omega));
    Ok(ChargeVec {
        z: crate::period::ComplexVec::new(re, im),
    })
}

/// `Exp(β + iω)` over the rationals.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactCharge {
    pub re: Vec<Q>,
    pub im: Vec<Q>,
    lattice: Lattice,
}

impl ExactCharge {
    pub fn exp_class(lat: &Lattice, beta: &[Q], omega: &[Q]) -> Result<Self> {
        let ns = ns_of(lat)?;
        let m = ns.rank();
        for v in [beta, omega] {
            if v.len() != m {
                return Err(Error::WrongLength { got: v.len(), rank: m });
            }
        }
        let w2 = ns_pair_q(ns, omega, omega);
        if !w2.is_positive() {
            return Err(Error::NonPositiveOmega(format!("ω^2 = {w2}")));
        }
        let half = Q::new(1.into(), 2.into());
        let mut re = vec![Q::one()];
        re.extend_from_slice(beta);
        re.push((ns_pair_q(ns, beta, beta) - w2) * &half);
        let mut im = vec![Q::zero()];
        im.extend_from_slice(omega);
        im.push(ns_pair_q(ns, beta, omega));
        Ok(ExactCharge {
            re,
            im,
            lattice: lat.clone(),
        })
    }

    /// `v.z` as `(Re, Im)`, for integral or rational `v`.
    pub fn charge_q(&self, v: &[Q]) -> (Q, Q) {
        let g = self.lattice.gram();
        let mut re = Q::zero();
        let mut im = Q::zero();
        for (i, vi) in v.iter().enumerate() {
            for (j, gij) in g[i].iter().enumerate() {
                if *gij != 0 {
                    let c = vi * q(*gij);
                    re += &c * &self.re[j];
                    im += &c * &self.im[j];
                }
            }
        }
        (re, im)
    }

    pub fn charge(&self, v: &LatVec) -> Result<(Q, Q)> {
        if v.lattice() != &self.lattice {
            return Err(Error::LatticeMismatch);
        }
        let vq: Vec<Q> = v.coords().iter().map(|&a| q(a)).collect();
        Ok(self.charge_q(&vq))
    }

    pub fn to_f64(&self) -> ChargeVec {
        let f = |v: &[Q]| v.iter().map(rational_to_f64).collect();
        ChargeVec {
            z: crate::period::ComplexVec::new(f(&self.re), f(&self.im)),
        }
    }
}

pub fn central_charge(z: &ChargeVec, v: &LatVec) -> Result<Complex64> {
    if z.z.dim() != v.lattice().rank() {
        return Err(Error::WrongLength {
            got: z.z.dim(),
            rank: v.lattice().rank(),
        });
    }
    Ok(z.z.pair_lattice(v))
}

/// The phase `φ ∈ [0, 2)` with `Z = |Z| exp(iπφ)`.
pub fn phase(z: Complex64) -> Result<f64> {
    if z.re == 0.0 && z.im == 0.0 {
        return Err(Error::ZeroCharge);
    }
    let p = z.im.atan2(z.re) / PI;
    Ok(if p < 0.0 { p + 2.0 } else { p })
}

/// The phase in `(0, 1] ∪ {...}` view of the heart: `Z ∈ H ∪ R_{<0}`.
pub fn in_heart_half_plane(z: Complex64) -> bool {
    z.im > 0.0 || (z.im == 0.0 && z.re < 0.0)
}

const LIFT_TOL: f64 = 1e-9;

/// An element `(T, f)` of the universal cover of `GL_2^+(R)`. `T` acts on
/// `C = R^2` by column vectors; `f` is determined by `phi0 = f(0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LiftedGL2 {
    pub matrix: [[f64; 2]; 2],
    pub phi0: f64,
}

fn angle(x: f64, y: f64) -> f64 {
    (y.atan2(x) / PI).rem_euclid(2.0)
}

fn rotation(lambda: f64) -> [[f64; 2]; 2] {
    let (s, c) = (PI * lambda).sin_cos();
    [[c, -s], [s, c]]
}

fn mul2(a: &[[f64; 2]; 2], b: &[[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn det2(a: &[[f64; 2]; 2]) -> f64 {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

fn transpose2(a: &[[f64; 2]; 2]) -> [[f64; 2]; 2] {
    [[a[0][0], a[1][0]], [a[0][1], a[1][1]]]
}

/// Signed distance from `a` to the nearest point of `b + 2Z`.
fn mod2_offset(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0);
    if d > 1.0 {
        d - 2.0
    } else {
        d
    }
}

impl LiftedGL2 {
    pub fn new(matrix: [[f64; 2]; 2], phi0: f64) -> Result<Self> {
        let det = det2(&matrix);
        if !(det > 0.0) {
            return Err(Error::NonPositiveDet(det));
        }
        let base = angle(matrix[0][0], matrix[1][0]);
        if mod2_offset(phi0, base).abs() > LIFT_TOL {
            return Err(Error::InconsistentLift);
        }
        Ok(LiftedGL2 { matrix, phi0 })
    }

    pub fn identity() -> Self {
        LiftedGL2 {
            matrix: [[1.0, 0.0], [0.0, 1.0]],
            phi0: 0.0,
        }
    }

    /// `f(φ)`: on `[m, m + 1)` it is `phi0 + m` plus the angle swept by
    /// `T exp(iπ r)` from `T (1, 0)`, which stays in `[0, 1)` since `T`
    /// preserves orientation.
    pub fn lift_phase(&self, phi: f64) -> f64 {
        let m = phi.floor();
        let r = phi - m;
        let t = &self.matrix;
        let (s, c) = (PI * r).sin_cos();
        let base = angle(t[0][0], t[1][0]);
        let end = angle(t[0][0] * c + t[0][1] * s, t[1][0] * c + t[1][1] * s);
        let mut d = (end - base).rem_euclid(2.0);
        if d > 1.5 {
            d -= 2.0;
        }
        self.phi0 + m + d.max(0.0)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LiftedGL2) -> LiftedGL2 {
        LiftedGL2 {
            matrix: mul2(&self.matrix, &other.matrix),
            phi0: self.lift_phase(other.phi0),
        }
    }

    pub fn inverse(&self) -> LiftedGL2 {
        let t = &self.matrix;
        let d = det2(t);
        let inv = [[t[1][1] / d, -t[0][1] / d], [-t[1][0] / d, t[0][0] / d]];
        let psi0 = angle(inv[0][0], inv[1][0]);
        // f(psi0) lies in 2Z; shift so that f(psi) = 0
        let shift = self.lift_phase(psi0);
        LiftedGL2 {
            matrix: inv,
            phi0: psi0 - 2.0 * (shift / 2.0).round(),
        }
    }

    /// The charge `z·g`, with charges transformed by `T`.
    pub fn act(&self, z: &ChargeVec) -> Result<ChargeVec> {
        Ok(ChargeVec {
            z: gl2_act(&z.z, &transpose2(&self.matrix))?,
        })
    }

    /// `k` with `self = Σ_{2k} ∘ other`, if the two differ by an even shift.
    pub fn even_shift_from(&self, other: &LiftedGL2, tol: f64) -> Option<i64> {
        let scale = 1.0 + other.matrix.iter().flatten().map(|a| a.abs()).fold(0.0, f64::max);
        for i in 0..2 {
            for j in 0..2 {
                if (self.matrix[i][j] - other.matrix[i][j]).abs() > tol * scale {
                    return None;
                }
            }
        }
        let d = (self.phi0 - other.phi0) / 2.0;
        let k = d.round();
        ((d - k).abs() * 2.0 <= tol).then_some(k as i64)
    }
}

/// `Σ_λ = (exp(iπλ), φ ↦ φ + λ)`.
pub fn sigma_shift(lambda: f64) -> LiftedGL2 {
    LiftedGL2 {
        matrix: rotation(lambda),
        phi0: lambda,
    }
}

pub fn lifted_compose(g1: &LiftedGL2, g2: &LiftedGL2) -> LiftedGL2 {
    g1.compose(g2)
}

pub fn lifted_act(z: &ChargeVec, g: &LiftedGL2) -> Result<ChargeVec> {
    g.act(z)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FactorSample {
    pub t: f64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub g: LiftedGL2,
    /// `|Exp_v(x + iy)·g - z| / (1 + |z|)` at this sample.
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Factorization {
    pub v: Vec<i64>,
    pub samples: Vec<FactorSample>,
    pub max_residual: f64,
}

impl Factorization {
    /// The same factorization with `g(t)` replaced by `Σ_{2k} ∘ g(t)`.
    pub fn shifted(&self, k: i64) -> Factorization {
        let mut out = self.clone();
        for s in &mut out.samples {
            s.g.phi0 += 2.0 * k as f64;
        }
        out
    }
}

/// Maximal phase jump between consecutive samples before the choice of
/// lift is considered ambiguous.
pub const MAX_PHASE_STEP: f64 = 0.5;

/// Writes each sample as `z(t) = Exp_v(x(t) + iy(t))·g(t)` with `g` continuous
/// in `t`. `start_winding` fixes the global even shift: the first lift is
/// taken in `[2k, 2k + 2)`.
pub fn factor_path(samples: &[(f64, ChargeVec)], v: &LatVec, start_winding: i64) -> Result<Factorization> {
    let chart = TubeChart::new(v)?;
    let mut out = Vec::with_capacity(samples.len());
    let mut prev: Option<f64> = None;
    let mut max_residual: f64 = 0.0;
    for (t, z) in samples {
        let zv = z.z.pair_lattice(v);
        if zv.norm() <= 1e-12 * (1.0 + z.z.max_abs()) {
            return Err(Error::DegenerateAtV);
        }
        let (pt, t_row) = gl2_factor(&z.z, v)?;
        let matrix = transpose2(&t_row);
        let principal = angle(matrix[0][0], matrix[1][0]);
        let phi0 = match prev {
            None => principal + 2.0 * start_winding as f64,
            Some(p) => {
                let step = mod2_offset(principal, p);
                if step.abs() >= MAX_PHASE_STEP {
                    return Err(Error::SamplingTooCoarse(step));
                }
                p + step
            }
        };
        prev = Some(phi0);
        let g = LiftedGL2 { matrix, phi0 };
        let rebuilt = gl2_act(&exp_v(&pt)?, &t_row)?;
        let residual = rebuilt.max_abs_diff(&z.z) / (1.0 + z.z.max_abs());
        max_residual = max_residual.max(residual);
        let (x, y) = chart.coords_of(&pt)?;
        out.push(FactorSample {
            t: *t,
            x,
            y,
            g,
            residual,
        });
    }
    Ok(Factorization {
        v: v.coords().to_vec(),
        samples: out,
        max_residual,
    })
}

/// A wall met by a path at `t ∈ [t_lo, t_hi]`. `side_change` records the
/// sign of `Im(z.δ)` just before and just after.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WallEvent {
    pub t: f64,
    pub t_lo: f64,
    pub t_hi: f64,
    pub kind: WallKind,
    pub root: Vec<i64>,
    pub side_change: (i8, i8),
}

fn sign_tol(x: f64) -> i8 {
    if x.abs() < 1e-13 {
        0
    } else if x > 0.0 {
        1
    } else {
        -1
    }
}

/// All `A`, `C` and `D` events of a tube path over `t ∈ [t0, t1]`, ordered by
/// `t`. Each linear piece is handled by exact segment crossing against the
/// majorant-complete candidate set of its bounding box.
pub fn wall_crossings(chart: &TubeChart, path: &PathSpec, t0: f64, t1: f64) -> Result<Vec<WallEvent>> {
    if !(t1 > t0) {
        return Err(Error::EmptyBox);
    }
    if path.v != chart.v().coords() {
        return Err(Error::Invalid("path is over a different cusp".into()));
    }
    let mut knots = vec![t0];
    if path.kind == PathKind::PiecewiseTube {
        knots.extend(path.breakpoints.iter().map(|b| b.0).filter(|&s| s > t0 && s < t1));
    }
    knots.push(t1);
    let mut events: Vec<WallEvent> = Vec::new();
    for w in knots.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (xa, ya) = path.coords_at(a)?;
        let (xb, yb) = path.coords_at(b)?;
        let h = 1e-6 * (b - a);
        for c in walls_along_segment(chart, &xa, &ya, &xb, &yb)? {
            let lo = a + (b - a) * rational_to_f64(&c.t_lo);
            let hi = a + (b - a) * rational_to_f64(&c.t_hi);
            let delta = chart.from_chart(&c.chart);
            let im_at = |t: f64| -> Result<f64> {
                let (x, y) = path.coords_at(t.clamp(t0, t1))?;
                Ok(exp_v(&chart.point(&x, &y)?)?.pair_lattice(&delta).im)
            };
            let event = WallEvent {
                t: 0.5 * (lo + hi),
                t_lo: lo,
                t_hi: hi,
                kind: c.kind,
                root: delta.coords().to_vec(),
                side_change: (sign_tol(im_at(lo - h)?), sign_tol(im_at(hi + h)?)),
            };
            let duplicate = events
                .iter()
                .any(|e| e.kind == event.kind && e.root == event.root && (e.t - event.t).abs() < 1e-12);
            if !duplicate {
                events.push(event);
            }
        }
    }
    events.sort_by(|p, q| {
        p.t.total_cmp(&q.t)
            .then_with(|| p.kind.cmp(&q.kind))
            .then_with(|| p.root.cmp(&q.root))
    });
    Ok(events)
}

/// How a candidate sub-object contributes to the large-volume threshold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "branch", rename_all = "snake_case")]
pub enum ThresholdBranch {
    /// `μ(A) < μ(E)`: (#) holds iff `n^2 > bound`.
    Constraining {
        #[serde(with = "rational")]
        bound: Q,
        n_min: u64,
    },
    /// `μ(A) = μ(E)`: `Δ_n ∈ R_{<0}` and the phase inequality always holds.
    EqualSlope,
    /// `μ(A) > μ(E)`: not a destabilizing slope; no constraint.
    SlopeAbove,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateCertificate {
    pub candidate: Vec<i64>,
    #[serde(with = "rational")]
    pub mu: Q,
    #[serde(with = "rational")]
    pub nu: Q,
    #[serde(flatten)]
    pub branch: ThresholdBranch,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdCertificate {
    pub n0: u64,
    #[serde(with = "rational")]
    pub mu_e: Q,
    #[serde(with = "rational")]
    pub nu_e: Q,
    pub candidates: Vec<CandidateCertificate>,
}

/// `(μ_h, ν) = (h.l / r, s / r)` of a Mukai vector with `r > 0`.
pub fn slopes(v: &LatVec, h: &[Q]) -> Result<(Q, Q)> {
    let ns = ns_of(v.lattice())?;
    let c = v.coords();
    let r = c[0];
    if r <= 0 {
        return Err(Error::NonPositiveRank);
    }
    let l: Vec<Q> = c[1..c.len() - 1].iter().map(|&a| q(a)).collect();
    let r = q(r);
    Ok((ns_pair_q(ns, h, &l) / &r, q(c[c.len() - 1]) / r))
}

/// Smallest integer `n >= 1` with `n^2 > bound`.
fn n_min(bound: &Q) -> u64 {
    if bound < &Q::one() {
        return 1;
    }
    let fl = bound.floor().to_integer();
    let mut n = fl.sqrt();
    while Q::from_integer(&n * &n) <= *bound {
        n += 1;
    }
    n.to_u64().expect("threshold fits in u64")
}

/// Minimal `n0` such that every candidate `A` with `μ(A) < μ(E)` satisfies
/// (#) at `σ(0, nh)` for all `n >= n0`. With `Z_n(A) = r n^2 h^2/2 - s +
/// i n h.l`, (#) reads
/// `(n^2 h^2/2 - ν_E) / (n μ_E) > -(ν_E - ν_A) / (n (μ_E - μ_A))`;
/// multiplying by `n μ_E (μ_E - μ_A) > 0` gives
/// `n^2 > (2/h^2) (ν_E - (ν_E - ν_A) μ_E / (μ_E - μ_A))`.
pub fn large_volume_threshold(v_e: &LatVec, candidates: &[LatVec], h: &[Q]) -> Result<ThresholdCertificate> {
    let ns = ns_of(v_e.lattice())?;
    if h.len() != ns.rank() {
        return Err(Error::WrongLength {
            got: h.len(),
            rank: ns.rank(),
        });
    }
    let h2 = ns_pair_q(ns, h, h);
    if !h2.is_positive() {
        return Err(Error::Invalid(format!("h^2 = {h2} must be positive")));
    }
    let (mu_e, nu_e) = slopes(v_e, h)?;
    if !mu_e.is_positive() {
        return Err(Error::NonPositiveSlope);
    }
    let mut n0 = 1;
    let mut certs = Vec::with_capacity(candidates.len());
    for a in candidates {
        if a.lattice() != v_e.lattice() {
            return Err(Error::LatticeMismatch);
        }
        let (mu_a, nu_a) = slopes(a, h)?;
        let branch = if mu_a < mu_e {
            let bound = (q(2) / &h2) * (&nu_e - (&nu_e - &nu_a) * &mu_e / (&mu_e - &mu_a));
            let n = n_min(&bound);
            n0 = n0.max(n);
            ThresholdBranch::Constraining { bound, n_min: n }
        } else if mu_a == mu_e {
            ThresholdBranch::EqualSlope
        } else {
            ThresholdBranch::SlopeAbove
        };
        certs.push(CandidateCertificate {
            candidate: a.coords().to_vec(),
            mu: mu_a,
            nu: nu_a,
            branch,
        });
    }
    Ok(ThresholdCertificate {
        n0,
        mu_e,
        nu_e,
        candidates: certs,
    })
}

/// Direct evaluation of (#) from the exact charges at `σ(0, nh)`: `None`
/// when `Δ_n` is not in the upper half plane, otherwise whether
/// `Re Z_n(E) / Im Z_n(E) > Re Δ_n / Im Δ_n`.
pub fn inequality_holds(v_e: &LatVec, a: &LatVec, h: &[Q], n: u64) -> Result<Option<bool>> {
    let ns = ns_of(v_e.lattice())?;
    let omega: Vec<Q> = h.iter().map(|x| x * q(n as i64)).collect();
    let z = ExactCharge::exp_class(v_e.lattice(), &vec![Q::zero(); ns.rank()], &omega)?;
    let (ze_re, ze_im) = z.charge(v_e)?;
    let (za_re, za_im) = z.charge(a)?;
    let re = q(v_e.coords()[0]);
    let ra = q(a.coords()[0]);
    if !re.is_positive() || !ra.is_positive() {
        return Err(Error::NonPositiveRank);
    }
    let d_re = &ze_re / &re - &za_re / &ra;
    let d_im = &ze_im / &re - &za_im / &ra;
    if !d_im.is_positive() || !ze_im.is_positive() {
        return Ok(None);
    }
    Ok(Some(ze_re / ze_im > d_re / d_im))
}

/// A rational `β` making `exp(iη + β)` a general point of the boundary
/// component of type `C_k`, verified against every root that could violate
/// the conditions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BetaCertificate {
    #[serde(with = "rational_vec")]
    pub beta: Vec<Q>,
    /// `β.C + k`, in `(-1, 0)`.
    #[serde(with = "rational")]
    pub window: Q,
    /// Candidate roots checked, Mukai coordinates, with `r >= 0`.
    pub candidates: Vec<Vec<i64>>,
    /// Number of trial points rejected before `beta`.
    pub rejected: usize,
}

mod rational_vec {
    use super::Q;
    use crate::exact_json::{rational_from_str, rational_to_string};
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Q], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(rational_to_string))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| rational_from_str(s).ok_or_else(|| de::Error::custom(format!("bad rational `{s}`"))))
            .collect()
    }
}

/// Checks of the three conditions at `β` over `candidates`: `z.δ ≠ 0`,
/// `z.δ ∉ R_{<=0}` for `r > 0`, and the open window.
fn beta_conditions(z: &ExactCharge, candidates: &[Vec<i64>], window: &Q) -> bool {
    if !(window > &-Q::one() && window < &Q::zero()) {
        return false;
    }
    candidates.iter().all(|c| {
        let cq: Vec<Q> = c.iter().map(|&a| q(a)).collect();
        let (re, im) = z.charge_q(&cq);
        let vanishes = re.is_zero() && im.is_zero();
        let negative_real = c[0] > 0 && im.is_zero() && !re.is_positive();
        !vanishes && !negative_real
    })
}

fn candidate_roots(chart: &TubeChart, z: &ExactCharge) -> Result<Vec<Vec<i64>>> {
    let zf = z.to_f64();
    let pt = log_v(&zf.z, chart.v())?;
    let (x, y) = chart.coords_of(&pt)?;
    let pad = |a: &f64| (a - 1e-7 * (1.0 + a.abs()), a + 1e-7 * (1.0 + a.abs()));
    let bx = TubeBox::new(x.iter().map(pad).collect(), y.iter().map(pad).collect());
    let mut out: Vec<Vec<i64>> = crate::period::walls::wall_candidates(chart, &bx)?
        .iter()
        .map(|c| {
            let d = chart.from_chart(c).into_coords();
            if d[0] < 0 {
                d.iter().map(|a| -a).collect()
            } else {
                d
            }
        })
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// Searches `β = (2k + 1)/4 · C + Σ_i (p_i / q_i) w_i` over directions `w_i`
/// orthogonal to `C` (so that `β.C + k = -1/2`), numerators in
/// `[-bound, bound]` and denominators in `[1, bound]`.
pub fn boundary_beta_search(lat: &Lattice, c_root: &[i64], k: i64, eta: &[Q], bound: i64) -> Result<BetaCertificate> {
    let ns = ns_of(lat)?;
    let m = ns.rank();
    for len in [c_root.len(), eta.len()] {
        if len != m {
            return Err(Error::WrongLength { got: len, rank: m });
        }
    }
    let c2 = ns.pair_raw(c_root, c_root);
    if c2 != -2 {
        return Err(Error::NotARoot(c2));
    }
    let cq: Vec<Q> = c_root.iter().map(|&a| q(a)).collect();
    if !ns_pair_q(ns, eta, &cq).is_zero() {
        return Err(Error::Invalid("η.C must vanish".into()));
    }
    let eta2 = ns_pair_q(ns, eta, eta);
    if eta2 <= q(2) {
        return Err(Error::Invalid(format!("η^2 = {eta2} must exceed 2")));
    }
    if bound < 1 {
        return Err(Error::Invalid("search bound must be at least 1".into()));
    }
    let v0 = lat.point_class()?;
    let chart = TubeChart::new(&v0)?;
    let base: Vec<Q> = cq
        .iter()
        .map(|c| c * Q::new(BigInt::from(2 * k + 1), 4.into()))
        .collect();
    // directions w with w.C = 0: e_i - (e_i.C / C^2) C scaled to be integral
    let dirs: Vec<Vec<Q>> = (0..m)
        .map(|i| {
            let ec = q(ns.gram()[i].iter().zip(c_root).map(|(g, c)| g * c).sum());
            (0..m).map(|j| q(i64::from(i == j)) + &ec / q(2) * &cq[j]).collect()
        })
        .filter(|w: &Vec<Q>| w.iter().any(|a| !a.is_zero()))
        .collect();
    let mut steps: Vec<Q> = vec![Q::zero()];
    for den in 1..=bound {
        for num in 1..=bound {
            let s = Q::new(num.into(), den.into());
            if !steps.contains(&s) {
                steps.push(s.clone());
                steps.push(-s);
            }
        }
    }
    let mut rejected = 0;
    for s in &steps {
        for (di, w) in dirs.iter().enumerate() {
            // second direction perturbed by a fixed small multiple to break symmetric coincidences
            let other = &dirs[(di + 1) % dirs.len()];
            let beta: Vec<Q> = base
                .iter()
                .zip(w)
                .zip(other)
                .map(|((b, wi), oi)| b + s * wi + s * s * oi / q(7))
                .collect();
            let window = ns_pair_q(ns, &beta, &cq) + q(k);
            let z = ExactCharge::exp_class(lat, &beta, eta)?;
            let candidates = candidate_roots(&chart, &z)?;
            if beta_conditions(&z, &candidates, &window) {
                return Ok(BetaCertificate {
                    beta,
                    window,
                    candidates,
                    rejected,
                });
            }
            rejected += 1;
        }
    }
    Err(Error::NoSolutionInBound(format!("no admissible β with bound {bound}")))
}

/// Re-checks a certificate from scratch.
pub fn verify_beta(lat: &Lattice, c_root: &[i64], k: i64, eta: &[Q], cert: &BetaCertificate) -> Result<bool> {
    let ns = ns_of(lat)?;
    let cq: Vec<Q> = c_root.iter().map(|&a| q(a)).collect();
    let window = ns_pair_q(ns, &cert.beta, &cq) + q(k);
    let z = ExactCharge::exp_class(lat, &cert.beta, eta)?;
    let chart = TubeChart::new(&lat.point_class()?)?;
    let candidates = candidate_roots(&chart, &z)?;
    Ok(window == cert.window && beta_conditions(&z, &candidates, &window))
}

/// Cohomological actions of auto-equivalences.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "snake_case")]
pub enum CohAction {
    Shift,
    SphericalTwist(Vec<i64>),
    LineTwist(Vec<i64>),
}

pub fn coh_action(lat: &Lattice, action: &CohAction) -> Result<Isometry> {
    match action {
        CohAction::Shift => Ok(lat.minus_identity()),
        CohAction::SphericalTwist(delta) => {
            let d = lat.vector(delta.clone())?;
            lat.reflection(&d)
        }
        CohAction::LineTwist(l) => {
            let ns = ns_of(lat)?;
            let m = ns.rank();
            if l.len() != m {
                return Err(Error::WrongLength { got: l.len(), rank: m });
            }
            let n = m + 2;
            // columns: (1,0,0) ↦ (1, l, l^2/2), (0,e_i,0) ↦ (0, e_i, e_i.l), (0,0,1) ↦ (0,0,1)
            let mut g = vec![vec![0i64; n]; n];
            g[0][0] = 1;
            for i in 0..m {
                g[1 + i][0] = l[i];
                g[1 + i][1 + i] = 1;
                g[n - 1][1 + i] = ns.gram()[i].iter().zip(l).map(|(a, b)| a * b).sum();
            }
            g[n - 1][0] = ns.pair_raw(l, l) / 2;
            g[n - 1][n - 1] = 1;
            Isometry::new(lat, g)
        }
    }
}
