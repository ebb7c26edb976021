//! Riemannian structure of the period domain: the Killing form, the Cartan
//! decomposition at a positive plane, the one-parameter subgroups generated by
//! `𝔞(v0, x)`, geodesics through linear degenerations and an independent
//! integrator used to check them.

use crate::error::{Error, Result};
use crate::lattice::{Isometry, LatVec, Lattice};
use crate::period::{exp_v, log_v, orthonormal_plane, theta, ComplexVec, PeriodPoint, TubeChart, TubePoint};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// Relative tolerance for `X^T G + G X = 0`.
pub const LIE_TOL: f64 = 1e-8;

/// Element of `𝔤 = 𝔬(N_ℝ)` in lattice-basis coordinates.
#[derive(Debug, Clone)]
pub struct LieElem {
    lattice: Lattice,
    matrix: DMatrix<f64>,
}

impl LieElem {
    pub fn new(lattice: &Lattice, matrix: DMatrix<f64>) -> Result<Self> {
        let n = lattice.rank();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::WrongLength {
                got: matrix.nrows().max(matrix.ncols()),
                rank: n,
            });
        }
        let res = lie_residual(lattice, &matrix);
        if res > LIE_TOL {
            return Err(Error::NotInLieAlgebra(res));
        }
        Ok(LieElem {
            lattice: lattice.clone(),
            matrix,
        })
    }

    fn unchecked(lattice: &Lattice, matrix: DMatrix<f64>) -> Self {
        LieElem {
            lattice: lattice.clone(),
            matrix,
        }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn norm(&self) -> f64 {
        self.matrix.norm()
    }

    pub fn add(&self, other: &LieElem) -> LieElem {
        LieElem::unchecked(&self.lattice, &self.matrix + &other.matrix)
    }

    pub fn scale(&self, c: f64) -> LieElem {
        LieElem::unchecked(&self.lattice, &self.matrix * c)
    }

    pub fn apply(&self, w: &[f64]) -> Vec<f64> {
        (&self.matrix * DVector::from_column_slice(w)).iter().copied().collect()
    }
}

/// `|X^T G + G X| / (1 + |G X|)`.
pub fn lie_residual(lat: &Lattice, x: &DMatrix<f64>) -> f64 {
    let g = lat.gram_f64();
    let gx = &g * x;
    (gx.transpose() + &gx).norm() / (1.0 + gx.norm())
}

/// `ρ = rank - 2` read from the signature `(2, ρ)`.
pub fn rho(lat: &Lattice) -> f64 {
    lat.signature().1 as f64
}

/// `B(X, Y) = ρ Tr(X Y)`.
pub fn killing_form(x: &LieElem, y: &LieElem) -> Result<f64> {
    for e in [x, y] {
        let res = lie_residual(&e.lattice, &e.matrix);
        if res > LIE_TOL {
            return Err(Error::NotInLieAlgebra(res));
        }
    }
    if x.lattice != y.lattice {
        return Err(Error::LatticeMismatch);
    }
    Ok(rho(&x.lattice) * (&x.matrix * &y.matrix).trace())
}

/// Positive 2-plane with an orthonormal frame, `p_i . p_j = δ_ij`.
#[derive(Debug, Clone)]
pub struct PlaneFrame {
    lattice: Lattice,
    pub p1: Vec<f64>,
    pub p2: Vec<f64>,
}

impl PlaneFrame {
    pub fn new(lattice: &Lattice, p1: &[f64], p2: &[f64]) -> Result<Self> {
        let z = ComplexVec::new(p1.to_vec(), p2.to_vec());
        let (a, b) = orthonormal_plane(lattice, &z).map_err(|_| Error::DegeneratePlane)?;
        Ok(PlaneFrame {
            lattice: lattice.clone(),
            p1: a,
            p2: b,
        })
    }

    pub fn of_point(p: &PeriodPoint) -> Result<Self> {
        PlaneFrame::new(p.lattice(), &p.z().re, &p.z().im)
    }

    pub fn of_frame(lat: &Lattice, z: &ComplexVec) -> Result<Self> {
        PlaneFrame::new(lat, &z.re, &z.im)
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    /// Orthogonal projection onto `P`, `Π = p1 p1^T G + p2 p2^T G`.
    pub fn projection(&self) -> DMatrix<f64> {
        let g = self.lattice.gram_f64();
        let a = DVector::from_column_slice(&self.p1);
        let b = DVector::from_column_slice(&self.p2);
        let ga = &g * &a;
        let gb = &g * &b;
        &a * ga.transpose() + &b * gb.transpose()
    }

    /// Orthonormal basis `q_j`, `q_j . q_k = -δ_jk`, of `P^⊥`.
    pub fn complement_basis(&self) -> Result<Vec<Vec<f64>>> {
        let lat = &self.lattice;
        let n = lat.rank();
        let perp = DMatrix::identity(n, n) - self.projection();
        let mut cands: Vec<Vec<f64>> = (0..n).map(|j| perp.column(j).iter().copied().collect()).collect();
        let mut basis: Vec<Vec<f64>> = Vec::new();
        for _ in 0..n - 2 {
            for c in cands.iter_mut() {
                for q in &basis {
                    let k = -lat.pair_f64(c, q);
                    for (ci, qi) in c.iter_mut().zip(q) {
                        *ci -= k * qi;
                    }
                }
            }
            let (best, norm) = cands
                .iter()
                .enumerate()
                .map(|(i, c)| (i, -lat.pair_f64(c, c)))
                .fold((0, f64::MIN), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
            if norm <= 1e-12 {
                return Err(Error::DegeneratePlane);
            }
            let s = norm.sqrt();
            let q: Vec<f64> = cands[best].iter().map(|a| a / s).collect();
            cands.remove(best);
            basis.push(q);
        }
        Ok(basis)
    }

    /// Basis `X_kj = q_j p_k^T G - p_k q_j^T G` of `𝔪_P`, with `X_kj p_k = q_j`.
    pub fn m_basis(&self) -> Result<Vec<LieElem>> {
        let g = self.lattice.gram_f64();
        let qs = self.complement_basis()?;
        let mut out = Vec::with_capacity(2 * qs.len());
        for p in [&self.p1, &self.p2] {
            let p = DVector::from_column_slice(p);
            let gp = &g * &p;
            for q in &qs {
                let q = DVector::from_column_slice(q);
                let gq = &g * &q;
                out.push(LieElem::unchecked(
                    &self.lattice,
                    &q * gp.transpose() - &p * gq.transpose(),
                ));
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone)]
pub struct CartanParts {
    pub k_part: LieElem,
    pub m_part: LieElem,
}

/// `X = k + m` with `k` preserving `P` and `P^⊥` and `m` exchanging them.
pub fn cartan_project(x: &LieElem, p: &PlaneFrame) -> Result<CartanParts> {
    if x.lattice != p.lattice {
        return Err(Error::LatticeMismatch);
    }
    let res = lie_residual(&x.lattice, &x.matrix);
    if res > LIE_TOL {
        return Err(Error::NotInLieAlgebra(res));
    }
    let n = x.lattice.rank();
    let pi = p.projection();
    if (&pi * &pi - &pi).norm() > 1e-8 * (1.0 + pi.norm()) {
        return Err(Error::DegeneratePlane);
    }
    let perp = DMatrix::identity(n, n) - &pi;
    let k = &pi * &x.matrix * &pi + &perp * &x.matrix * &perp;
    let m = &x.matrix - &k;
    Ok(CartanParts {
        k_part: LieElem::unchecked(&x.lattice, k),
        m_part: LieElem::unchecked(&x.lattice, m),
    })
}

fn outer(lat: &Lattice, a: &[f64], b: &[f64]) -> DMatrix<f64> {
    let g = lat.gram_f64();
    let a = DVector::from_column_slice(a);
    let gb = &g * DVector::from_column_slice(b);
    &a * gb.transpose()
}

/// The generator `A_1` of `𝔞(v0, x)`: `+1` on `v0`, `-1` on `x1 = -x0`, `0`
/// on `⟨v0, x1⟩^⊥`, where `x0` is the isotropic lift of `x`.
pub fn a_generator(v0: &LatVec, pt: &TubePoint) -> Result<LieElem> {
    if pt.v != *v0 {
        return Err(Error::Invalid("tube point is over a different cusp".into()));
    }
    let lat = v0.lattice();
    let vf = v0.to_f64();
    let x2 = lat.pair_f64(&pt.x, &pt.x);
    let x1: Vec<f64> = pt.x.iter().zip(&vf).map(|(a, b)| -(a + 0.5 * x2 * b)).collect();
    // A = v0 x1^T G - x1 v0^T G, using v0.x1 = 1
    let a = outer(lat, &vf, &x1) - outer(lat, &x1, &vf);
    Ok(LieElem::unchecked(lat, a))
}

fn is_hyperbolic_projection(a: &DMatrix<f64>) -> bool {
    // A^3 = A: then exp(λA) = 1 + sinh(λ) A + (cosh(λ) - 1) A^2
    let a2 = a * a;
    (&a2 * a - a).norm() <= 1e-12 * (1.0 + a.norm())
}

/// `exp(λA)`, in closed form for generators with `A^3 = A` (every `𝔞(v0, x)`
/// generator) and by scaling and squaring otherwise.
pub fn one_param(a: &LieElem, lambda: f64) -> DMatrix<f64> {
    let n = a.matrix.nrows();
    if is_hyperbolic_projection(&a.matrix) {
        let a2 = &a.matrix * &a.matrix;
        DMatrix::identity(n, n) + &a.matrix * lambda.sinh() + a2 * (lambda.cosh() - 1.0)
    } else {
        (&a.matrix * lambda).exp()
    }
}

/// `|M^T G M - G| / |G|`.
pub fn isometry_defect(lat: &Lattice, m: &DMatrix<f64>) -> f64 {
    let g = lat.gram_f64();
    (m.transpose() * &g * m - &g).norm() / g.norm()
}

pub fn act(m: &DMatrix<f64>, z: &ComplexVec) -> ComplexVec {
    let re = m * DVector::from_column_slice(&z.re);
    let im = m * DVector::from_column_slice(&z.im);
    ComplexVec::new(re.iter().copied().collect(), im.iter().copied().collect())
}

/// Tube point `x + i e^t y`.
pub fn geodesic_tube_point(pt: &TubePoint, t: f64) -> TubePoint {
    TubePoint {
        v: pt.v.clone(),
        x: pt.x.clone(),
        y: pt.y.iter().map(|a| a * t.exp()).collect(),
    }
}

/// `exp_{v0}(x + i e^t y)`.
pub fn geodesic_point(pt: &TubePoint, t: f64) -> Result<PeriodPoint> {
    let z = exp_v(&geodesic_tube_point(pt, t))?;
    theta(pt.lattice(), &z)
}

const SPEED_H: f64 = 1e-5;

fn frame_derivative(pt: &TubePoint, t: f64, h: f64) -> Result<DMatrix<f64>> {
    let zp = exp_v(&geodesic_tube_point(pt, t + h))?;
    let zm = exp_v(&geodesic_tube_point(pt, t - h))?;
    let n = zp.dim();
    Ok(DMatrix::from_fn(n, 2, |i, j| {
        let (p, m) = if j == 0 {
            (zp.re[i], zm.re[i])
        } else {
            (zp.im[i], zm.im[i])
        };
        (p - m) / (2.0 * h)
    }))
}

/// `𝔪_P`-component of the velocity of a moving frame `F` with derivative `F'`.
pub fn velocity_m_part(lat: &Lattice, z: &ComplexVec, dz: &DMatrix<f64>) -> Result<LieElem> {
    let g = lat.gram_f64();
    let n = lat.rank();
    let f = DMatrix::from_fn(n, 2, |i, j| if j == 0 { z.re[i] } else { z.im[i] });
    let m = (f.transpose() * &g * &f).try_inverse().ok_or(Error::DegeneratePlane)?;
    let y = dz * m * f.transpose() * &g;
    let ginv = g.clone().try_inverse().ok_or(Error::Degenerate)?;
    let x = &y - &ginv * y.transpose() * &g;
    let plane = PlaneFrame::of_frame(lat, z)?;
    Ok(cartan_project(&LieElem::unchecked(lat, x), &plane)?.m_part)
}

fn speed_scaled(pt: &TubePoint, t: f64, b_scale: f64) -> Result<f64> {
    let lat = pt.lattice();
    let z = exp_v(&geodesic_tube_point(pt, t))?;
    let d1 = frame_derivative(pt, t, SPEED_H)?;
    let d2 = frame_derivative(pt, t, SPEED_H / 2.0)?;
    // Richardson: removes the h^2 term of the central difference
    let dz = (d2 * 4.0 - d1) / 3.0;
    let xm = velocity_m_part(lat, &z, &dz)?;
    let b = b_scale * killing_form(&xm, &xm)?;
    Ok(b.max(0.0).sqrt())
}

/// Killing-norm speed of `t ↦ exp_{v0}(x + i e^t y)` at time `t`.
pub fn speed(pt: &TubePoint, t: f64) -> Result<f64> {
    speed_scaled(pt, t, 1.0)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeodesicSample {
    pub t: f64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub speed: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub max_dev: f64,
    pub tol: f64,
    pub steps: usize,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.max_dev <= self.tol
    }
}

pub const MIN_STEPS: usize = 100;
pub const ENERGY_DRIFT_MAX: f64 = 1e-4;

/// Integrates the geodesic through `exp_{v0}(pt)` with initial velocity
/// `A_1`: each step applies the second-order truncation of `exp(h X)` to the
/// frame, renormalizes the frame and projects `X` back onto `𝔪_P` of the new
/// plane. Returns `steps + 1` samples in chart coordinates over `[0, t_max]`
/// (one sample when `t_max = 0`).
pub fn geodesic_oracle(chart: &TubeChart, pt: &TubePoint, t_max: f64, steps: usize) -> Result<Vec<GeodesicSample>> {
    if steps < MIN_STEPS {
        return Err(Error::TooFewSteps {
            got: steps,
            min: MIN_STEPS,
        });
    }
    let lat = pt.lattice().clone();
    let v = pt.v.clone();
    let n = lat.rank();
    let mut z = exp_v(pt)?;
    let sample = |z: &ComplexVec, t: f64, energy: f64| -> Result<GeodesicSample> {
        let tp = log_v(z, &v)?;
        let (x, y) = chart.coords_of(&tp)?;
        Ok(GeodesicSample {
            t,
            x,
            y,
            speed: energy.max(0.0).sqrt(),
        })
    };
    let a = a_generator(&v, pt)?;
    let mut x = cartan_project(&a, &PlaneFrame::of_frame(&lat, &z)?)?.m_part;
    let e0 = killing_form(&x, &x)?;
    if t_max == 0.0 {
        return Ok(vec![sample(&z, 0.0, e0)?]);
    }
    let h = t_max / steps as f64;
    let mut out = Vec::with_capacity(steps + 1);
    out.push(sample(&z, 0.0, e0)?);
    let id = DMatrix::<f64>::identity(n, n);
    for k in 1..=steps {
        let hx = x.matrix() * h;
        let step = &id + &hx + &hx * &hx * 0.5;
        let moved = act(&step, &z);
        let plane = PlaneFrame::of_frame(&lat, &moved)?;
        z = ComplexVec::new(plane.p1.clone(), plane.p2.clone());
        x = cartan_project(&x, &plane)?.m_part;
        let e = killing_form(&x, &x)?;
        let drift = (e - e0).abs() / e0.abs().max(1e-300);
        if drift > ENERGY_DRIFT_MAX {
            return Err(Error::StepTooLarge(drift));
        }
        out.push(sample(&z, k as f64 * h, e)?);
    }
    Ok(out)
}

/// Relative sup-norm deviation of oracle samples from `x + i e^t y`.
pub fn oracle_deviation(chart: &TubeChart, pt: &TubePoint, samples: &[GeodesicSample]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for s in samples {
        let (x, y) = chart.coords_of(&geodesic_tube_point(pt, s.t))?;
        let scale = x.iter().chain(&y).fold(1.0f64, |m, a| m.max(a.abs()));
        for (a, b) in x.iter().zip(&s.x).chain(y.iter().zip(&s.y)) {
            worst = worst.max((a - b).abs() / scale);
        }
    }
    Ok(worst)
}

/// Samples of the geodesic `x + i e^t y` for export, with Killing speed.
pub fn sample_geodesic(chart: &TubeChart, pt: &TubePoint, t_max: f64, count: usize) -> Result<Vec<GeodesicSample>> {
    let count = count.max(1);
    (0..count)
        .map(|k| {
            let t = if count == 1 {
                0.0
            } else {
                t_max * k as f64 / (count - 1) as f64
            };
            let (x, y) = chart.coords_of(&geodesic_tube_point(pt, t))?;
            Ok(GeodesicSample {
                t,
                x,
                y,
                speed: speed(pt, t)?,
            })
        })
        .collect()
}

pub fn samples_csv(samples: &[GeodesicSample]) -> String {
    let mut s = String::new();
    if let Some(first) = samples.first() {
        let mut head = vec!["t".to_string()];
        head.extend((0..first.x.len()).map(|i| format!("x{i}")));
        head.extend((0..first.y.len()).map(|i| format!("y{i}")));
        head.push("speed".into());
        s.push_str(&head.join(","));
        s.push('\n');
    }
    for smp in samples {
        let mut row = vec![format!("{:.12e}", smp.t)];
        row.extend(smp.x.iter().chain(&smp.y).map(|a| format!("{a:.12e}")));
        row.push(format!("{:.12e}", smp.speed));
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathKind {
    LinearDegeneration,
    PiecewiseTube,
}

/// A path in tube coordinates over `v`: either `t ↦ x0 + i t y0`, or the
/// piecewise linear interpolation of `breakpoints (t, x, y)` in chart
/// coordinates.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PathSpec {
    pub kind: PathKind,
    pub v: Vec<i64>,
    pub x0: Vec<f64>,
    pub y0: Vec<f64>,
    #[serde(default)]
    pub breakpoints: Vec<(f64, Vec<f64>, Vec<f64>)>,
}

/// `α(t) = exp_v(x0 + i t y0)` with chart coordinates `x0`, `y0`.
pub fn linear_degeneration(chart: &TubeChart, x0: &[f64], y0: &[f64]) -> Result<PathSpec> {
    chart.point(x0, y0)?;
    Ok(PathSpec {
        kind: PathKind::LinearDegeneration,
        v: chart.v().coords().to_vec(),
        x0: x0.to_vec(),
        y0: y0.to_vec(),
        breakpoints: Vec::new(),
    })
}

impl PathSpec {
    /// Chart coordinates at time `t`.
    pub fn coords_at(&self, t: f64) -> Result<(Vec<f64>, Vec<f64>)> {
        match self.kind {
            PathKind::LinearDegeneration => Ok((self.x0.clone(), self.y0.iter().map(|a| a * t).collect())),
            PathKind::PiecewiseTube => {
                let b = &self.breakpoints;
                if b.is_empty() {
                    return Err(Error::Invalid("piecewise path without breakpoints".into()));
                }
                let k = b.iter().rposition(|(s, _, _)| *s <= t).unwrap_or(0);
                if k + 1 >= b.len() {
                    let (_, x, y) = &b[b.len() - 1];
                    return Ok((x.clone(), y.clone()));
                }
                let (t0, x0, y0) = &b[k];
                let (t1, x1, y1) = &b[k + 1];
                let s = ((t - t0) / (t1 - t0)).clamp(0.0, 1.0);
                let lerp = |a: &[f64], c: &[f64]| a.iter().zip(c).map(|(u, w)| u + s * (w - u)).collect();
                Ok((lerp(x0, x1), lerp(y0, y1)))
            }
        }
    }

    pub fn point_at(&self, chart: &TubeChart, t: f64) -> Result<TubePoint> {
        let (x, y) = self.coords_at(t)?;
        chart.point(&x, &y)
    }
}

/// How much of `Γ_v` was used in a membership test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Closure {
    /// Translations only.
    None,
    /// Words of length at most the given bound in the supplied generators.
    Partial(usize),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LooijengaResult {
    pub member: bool,
    /// `c` with `y - c ∈ K_y` and `c ∈ C^+`, when found.
    pub witness_shift: Option<Vec<f64>>,
    /// Null future `u` with `u.(y - k) <= 0` on all of `K_y`, proving
    /// non-membership of the tested translate.
    pub separator: Option<Vec<f64>>,
    pub closure: Closure,
    /// Word (generator indices) of the element that brought the point into
    /// reach, empty for the identity.
    pub word: Vec<usize>,
}

/// Timelike unit vector and the function `ψ(w) = w.h - |w_⊥|`, positive
/// exactly on the open cone component containing `h`.
struct ConeTest<'a> {
    chart: &'a TubeChart,
    h: Vec<f64>,
}

impl<'a> ConeTest<'a> {
    fn new(chart: &'a TubeChart, h: &[f64]) -> Result<Self> {
        let hh = chart.k_pair(h, h);
        if hh <= 0.0 {
            return Err(Error::NotPositive);
        }
        let s = hh.sqrt();
        Ok(ConeTest {
            chart,
            h: h.iter().map(|a| a / s).collect(),
        })
    }

    /// `(ψ(w), the null vector u = h + n̂ with ψ(w) = u.w)`.
    fn psi(&self, w: &[f64]) -> (f64, Vec<f64>) {
        let wh = self.chart.k_pair(w, &self.h);
        let perp: Vec<f64> = w.iter().zip(&self.h).map(|(a, b)| a - wh * b).collect();
        let pn = (-self.chart.k_pair(&perp, &perp)).max(0.0).sqrt();
        let u: Vec<f64> = if pn > 1e-300 {
            self.h.iter().zip(&perp).map(|(a, b)| a + b / pn).collect()
        } else {
            self.h.clone()
        };
        (wh - pn, u)
    }
}

fn dual(chart: &TubeChart, u: &[f64]) -> Vec<f64> {
    chart
        .kgram()
        .iter()
        .map(|row| row.iter().zip(u).map(|(&g, a)| g as f64 * a).sum())
        .collect()
}

/// Translation part of the Looijenga test: is there `k ∈ K_y` with
/// `y - k ∈ C^+`? `ψ(y - k)` is concave in `k`, so projected supergradient
/// ascent finds a witness when one exists; otherwise the null covector at the
/// optimum certifies emptiness through an exact linear bound over the box.
fn translate_member(chart: &TubeChart, y: &[f64], ky: &[(f64, f64)]) -> Result<(Option<Vec<f64>>, Option<Vec<f64>>)> {
    let centre: Vec<f64> = ky.iter().map(|(a, b)| 0.5 * (a + b)).collect();
    let cone = ConeTest::new(chart, &centre)?;
    let clamp = |k: &mut Vec<f64>| {
        for (c, (a, b)) in k.iter_mut().zip(ky) {
            *c = c.clamp(*a, *b);
        }
    };
    let diam = ky.iter().map(|(a, b)| b - a).fold(0.0f64, f64::max).max(1e-12);
    let mut k = centre.clone();
    for it in 0..4000 {
        let w: Vec<f64> = y.iter().zip(&k).map(|(a, b)| a - b).collect();
        let (psi, u) = cone.psi(&w);
        if psi > 0.0 {
            return Ok((Some(w), None));
        }
        // sup over the box of u.(y - k) = u.y - min_k (G u).k
        let gu = dual(chart, &u);
        let min_uk: f64 = gu.iter().zip(ky).map(|(g, (a, b))| (g * a).min(g * b)).sum();
        let uy: f64 = gu.iter().zip(y).map(|(g, a)| g * a).sum();
        if uy - min_uk <= 0.0 {
            return Ok((None, Some(u)));
        }
        // supergradient of ψ(y - k) in k is -G u in coordinates
        let step = diam / (1.0 + it as f64).sqrt();
        let norm = gu.iter().map(|a| a * a).sum::<f64>().sqrt().max(1e-300);
        for (c, g) in k.iter_mut().zip(&gu) {
            *c -= step * g / norm;
        }
        clamp(&mut k);
    }
    Ok((None, None))
}

/// Membership of `p` in `U(K, v)`: a translate `p - (a + ic)` with
/// `a ∈ L(v)_ℝ` arbitrary and `c ∈ C^+` must land in the tube box `K`.
/// With `generators` (elements of `Γ_v`) the translation test is repeated on
/// `g p` for all words of length at most `word_length`; the result is then
/// reported as a partial closure.
pub fn looijenga_member(
    chart: &TubeChart,
    p: &PeriodPoint,
    k: &crate::period::TubeBox,
    generators: &[Isometry],
    word_length: usize,
) -> Result<LooijengaResult> {
    let m = chart.dim();
    if k.x.len() != m || k.y.len() != m {
        return Err(Error::WrongLength {
            got: k.x.len().max(k.y.len()),
            rank: m,
        });
    }
    if k.x.iter().chain(&k.y).any(|(a, b)| !(a <= b)) {
        return Err(Error::EmptyBox);
    }
    let closure = if generators.is_empty() || word_length == 0 {
        Closure::None
    } else {
        Closure::Partial(word_length)
    };
    for g in generators {
        if g.apply(chart.v())? != *chart.v() {
            return Err(Error::Invalid("generator does not fix v".into()));
        }
    }
    let mut frontier: Vec<(Vec<usize>, ComplexVec)> = vec![(Vec::new(), p.z().clone())];
    let mut first_separator = None;
    for depth in 0..=word_length {
        let mut next = Vec::new();
        for (word, z) in &frontier {
            let tp = match log_v(z, chart.v()) {
                Ok(tp) => tp,
                Err(_) => continue,
            };
            let (_, y) = chart.coords_of(&tp)?;
            let (wit, sep) = translate_member(chart, &y, &k.y)?;
            if let Some(c) = wit {
                return Ok(LooijengaResult {
                    member: true,
                    witness_shift: Some(c),
                    separator: None,
                    closure,
                    word: word.clone(),
                });
            }
            if word.is_empty() {
                first_separator = sep;
            }
            if depth < word_length {
                for (i, g) in generators.iter().enumerate() {
                    let mut w = word.clone();
                    w.push(i);
                    next.push((w, z.apply(g)));
                }
            }
        }
        frontier = next;
    }
    Ok(LooijengaResult {
        member: false,
        witness_shift: None,
        separator: first_separator,
        closure,
        word: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::period::TubeBox;

    fn chart(preset: &str) -> TubeChart {
        let n = Lattice::preset(preset).unwrap();
        TubeChart::new(&n.point_class().unwrap()).unwrap()
    }

    #[test]
    fn a_generator_is_in_m_p_with_defining_action() {
        let ch = chart("mukai_rank1(1)");
        let pt = ch.point(&[0.4], &[0.9]).unwrap();
        let a = a_generator(ch.v(), &pt).unwrap();
        assert!(lie_residual(ch.lattice(), a.matrix()) < 1e-12);
        let v = ch.v().to_f64();
        let av = a.apply(&v);
        assert!(av.iter().zip(&v).all(|(p, q)| (p - q).abs() < 1e-12));
        let x1: Vec<f64> = pt.x.iter().map(|c| -c).collect();
        let ax = a.apply(&x1);
        assert!(ax.iter().zip(&x1).all(|(p, q)| (p + q).abs() < 1e-12));
        let plane = PlaneFrame::of_frame(ch.lattice(), &exp_v(&pt).unwrap()).unwrap();
        let parts = cartan_project(&a, &plane).unwrap();
        assert!(parts.k_part.norm() < 1e-10);
    }

    #[test]
    fn m_basis_has_dimension_two_rho_and_positive_killing_form() {
        let ch = chart("mukai(<2>+<-2>)");
        let z = exp_v(&ch.point(&[0.2, 0.1], &[1.0, 0.3]).unwrap()).unwrap();
        let plane = PlaneFrame::of_frame(ch.lattice(), &z).unwrap();
        let basis = plane.m_basis().unwrap();
        assert_eq!(basis.len(), 4);
        let gram = DMatrix::from_fn(4, 4, |i, j| killing_form(&basis[i], &basis[j]).unwrap());
        let eig = gram.symmetric_eigen().eigenvalues;
        assert!(eig.iter().all(|&e| e > 0.0), "{eig}");
        for b in &basis {
            let parts = cartan_project(b, &plane).unwrap();
            assert!(parts.k_part.norm() < 1e-10);
        }
    }

    #[test]
    fn killing_form_separates_k_and_m() {
        let ch = chart("mukai_rank1(2)");
        let z = exp_v(&ch.point(&[0.1], &[0.7]).unwrap()).unwrap();
        let plane = PlaneFrame::of_frame(ch.lattice(), &z).unwrap();
        let g = ch.lattice().gram_f64();
        let ginv = g.clone().try_inverse().unwrap();
        let raw = DMatrix::from_row_slice(3, 3, &[0.3, -1.0, 0.2, 0.5, 0.1, 0.7, -0.4, 0.9, 0.0]);
        let x = LieElem::new(ch.lattice(), &raw - &ginv * raw.transpose() * &g).unwrap();
        let parts = cartan_project(&x, &plane).unwrap();
        let b = killing_form(&parts.k_part, &parts.m_part).unwrap();
        assert!(b.abs() < 1e-10);
        let sum = parts.k_part.add(&parts.m_part);
        assert!((sum.matrix() - x.matrix()).norm() < 1e-12);
        assert!((killing_form(&x, &parts.m_part).unwrap() - killing_form(&parts.m_part, &x).unwrap()).abs() < 1e-12);
        assert!(matches!(
            LieElem::new(ch.lattice(), DMatrix::identity(3, 3)),
            Err(Error::NotInLieAlgebra(_))
        ));
    }

    #[test]
    fn one_param_eigen_action_and_group_law() {
        let ch = chart("mukai_rank1(1)");
        let pt = ch.point(&[0.4], &[0.9]).unwrap();
        let a = a_generator(ch.v(), &pt).unwrap();
        let e = one_param(&a, 2f64.ln());
        let v = ch.v().to_f64();
        let ev = &e * DVector::from_column_slice(&v);
        assert!(ev.iter().zip(&v).all(|(p, q)| (p - 2.0 * q).abs() < 1e-12));
        let x1: Vec<f64> = pt.x.iter().map(|c| -c).collect();
        let ex = &e * DVector::from_column_slice(&x1);
        assert!(ex.iter().zip(&x1).all(|(p, q)| (p - 0.5 * q).abs() < 1e-12));
        assert!((one_param(&a, 0.0) - DMatrix::identity(3, 3)).norm() < 1e-15);
        let lhs = one_param(&a, 0.7) * one_param(&a, -0.2);
        assert!((lhs - one_param(&a, 0.5)).norm() < 1e-10);
        assert!(isometry_defect(ch.lattice(), &e) < 1e-12);
        // generic elements go through the Padé route
        let g = ch.lattice().gram_f64();
        let ginv = g.clone().try_inverse().unwrap();
        let raw = DMatrix::from_row_slice(3, 3, &[0.0, 0.3, 0.1, -0.2, 0.0, 0.4, 0.5, 0.6, 0.0]);
        let c = LieElem::new(ch.lattice(), &raw - &ginv * raw.transpose() * &g).unwrap();
        assert!(isometry_defect(ch.lattice(), &one_param(&c, 1.3)) < 1e-10);
    }

    #[test]
    fn geodesic_matches_one_parameter_action() {
        let ch = chart("mukai_rank1(1)");
        let pt = ch.point(&[0.4], &[0.9]).unwrap();
        let a = a_generator(ch.v(), &pt).unwrap();
        let z = exp_v(&pt).unwrap();
        for lambda in [-2.0, -0.3, 0.0, 1.1, 3.0] {
            let moved = theta(ch.lattice(), &act(&one_param(&a, lambda), &z)).unwrap();
            let direct = geodesic_point(&pt, lambda).unwrap();
            assert!(moved.distance(&direct) < 1e-9);
        }
        let y2 = |t: f64| {
            let y = geodesic_tube_point(&pt, t).y;
            ch.lattice().pair_f64(&y, &y)
        };
        assert!((y2(1.0) / y2(0.0) - 2f64.exp()).abs() < 1e-12);
    }

    #[test]
    fn speed_is_constant_and_scales_with_the_metric() {
        let ch = chart("mukai(<2>+<-2>)");
        let pt = ch.point(&[0.3, -0.2], &[1.2, 0.4]).unwrap();
        let s0 = speed(&pt, 0.0).unwrap();
        let expected = (2.0 * rho(ch.lattice())).sqrt();
        assert!((s0 - expected).abs() / expected < 1e-6, "{s0}");
        for t in [-1.0, 0.5, 2.0] {
            assert!((speed(&pt, t).unwrap() - s0).abs() / s0 < 1e-6);
        }
        let scaled = speed_scaled(&pt, 0.3, 4.0).unwrap();
        assert!((scaled - 2.0 * s0).abs() / s0 < 1e-6);
    }

    #[test]
    fn oracle_follows_the_geodesic_with_second_order_error() {
        let ch = chart("mukai_rank1(1)");
        let pt = ch.point(&[0.4], &[0.9]).unwrap();
        let only = geodesic_oracle(&ch, &pt, 0.0, 100).unwrap();
        assert_eq!(only.len(), 1);
        assert!(oracle_deviation(&ch, &pt, &only).unwrap() < 1e-12);
        let coarse = oracle_deviation(&ch, &pt, &geodesic_oracle(&ch, &pt, 2.0, 500).unwrap()).unwrap();
        let fine = oracle_deviation(&ch, &pt, &geodesic_oracle(&ch, &pt, 2.0, 1000).unwrap()).unwrap();
        assert!(fine * 2.0 <= coarse, "{coarse} {fine}");
        assert!(matches!(
            geodesic_oracle(&ch, &pt, 1.0, 10),
            Err(Error::TooFewSteps { .. })
        ));
    }

    #[test]
    fn looijenga_membership() {
        let ch = chart("mukai(<2>+<-2>)");
        let k = TubeBox::new(vec![(-0.5, 0.5), (-0.5, 0.5)], vec![(0.9, 1.1), (-0.1, 0.1)]);
        let inside = theta(
            ch.lattice(),
            &exp_v(&ch.point(&[0.1, 0.2], &[1.0, 0.0]).unwrap()).unwrap(),
        )
        .unwrap();
        let r = looijenga_member(&ch, &inside, &k, &[], 0).unwrap();
        assert!(r.member);
        assert!(r.witness_shift.unwrap().iter().all(|c| c.abs() < 0.2));
        // the opposite cone component
        let opposite = theta(
            ch.lattice(),
            &exp_v(&ch.point(&[0.1, 0.2], &[-1.0, 0.0]).unwrap()).unwrap(),
        )
        .unwrap();
        let r = looijenga_member(&ch, &opposite, &k, &[], 0).unwrap();
        assert!(!r.member);
        assert!(r.separator.is_some());
        let path = linear_degeneration(&ch, &[3.0, -7.0], &[1.0, 0.6]).unwrap();
        let mut entered = None;
        for step in 0..60 {
            let t = 0.25 * step as f64 + 0.5;
            let p = theta(ch.lattice(), &exp_v(&path.point_at(&ch, t).unwrap()).unwrap()).unwrap();
            let m = looijenga_member(&ch, &p, &k, &[], 0).unwrap().member;
            if let Some(t0) = entered {
                assert!(m, "left the neighbourhood at {t} after entering at {t0}");
            } else if m {
                entered = Some(t);
            }
        }
        assert!(entered.is_some());
        let bad = TubeBox::new(vec![(1.0, 0.0), (0.0, 0.0)], vec![(1.0, 1.0), (0.0, 0.0)]);
        assert_eq!(
            looijenga_member(&ch, &inside, &bad, &[], 0).unwrap_err(),
            Error::EmptyBox
        );
    }
}
