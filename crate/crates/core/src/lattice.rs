//! Even integral lattices, their vectors and integral isometries.
//!
//! A [`Lattice`] is a cheap handle around an immutable Gram matrix. Vectors are
//! integer coordinate rows in the lattice basis and pairings are exact: inner
//! products accumulate in `i128` and overflow is a hard failure rather than a
//! silent wrap. Normal-form computations go through [`crate::intmat`].

use crate::error::{Error, Result};
use crate::exact_json::ExactInt;
use crate::intmat::{self, BigMat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

#[derive(Debug)]
struct LatticeData {
    label: String,
    gram: Vec<Vec<i64>>,
    signature: (usize, usize),
    det: BigInt,
    even: bool,
    mukai_ns: Option<Lattice>,
}

/// Finitely generated free abelian group with a non-degenerate symmetric
/// bilinear form.
#[derive(Clone)]
pub struct Lattice(Arc<LatticeData>);

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "Lattice({}, sig {:?})", self.0.label, self.0.signature)
    }
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.gram == other.0.gram
    }
}

/// Serialized form `{label, gram}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct LatticeFile {
    pub label: String,
    pub gram: Vec<Vec<ExactInt>>,
}

impl Lattice {
    /// Validates symmetry and non-degeneracy and computes the signature by
    /// exact rational diagonalization.
    pub fn new(label: impl Into<String>, gram: Vec<Vec<i64>>) -> Result<Self> {
        Self::build(label.into(), gram, None)
    }

    fn build(label: String, gram: Vec<Vec<i64>>, mukai_ns: Option<Lattice>) -> Result<Self> {
        let n = gram.len();
        for (i, row) in gram.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotSquare(i, row.len(), n));
            }
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::NonSymmetric(i, j));
                }
            }
        }
        let big = intmat::to_big(&gram);
        let det = intmat::determinant(&big);
        if det.is_zero() {
            return Err(Error::Degenerate);
        }
        let (p, q, _) = intmat::signature(&big);
        let even = (0..n).all(|i| gram[i][i] % 2 == 0);
        Ok(Lattice(Arc::new(LatticeData {
            label,
            gram,
            signature: (p, q),
            det,
            even,
            mukai_ns,
        })))
    }

    pub fn from_file(file: &LatticeFile) -> Result<Self> {
        let gram = file.gram.iter().map(|row| row.iter().map(|x| x.0).collect()).collect();
        Self::new(file.label.clone(), gram)
    }

    pub fn to_file(&self) -> LatticeFile {
        LatticeFile {
            label: self.label().to_string(),
            gram: self
                .gram()
                .iter()
                .map(|row| row.iter().map(|&x| ExactInt(x)).collect())
                .collect(),
        }
    }

    /// The hyperbolic plane with Gram `[[0,1],[1,0]]`.
    pub fn hyperbolic_plane() -> Self {
        Self::new("U", vec![vec![0, 1], vec![1, 0]]).expect("U is unimodular")
    }

    /// Rank one lattice `<k>`.
    pub fn rank_one(k: i64) -> Result<Self> {
        Self::new(format!("<{k}>"), vec![vec![k]])
    }

    /// The negative definite E8 lattice.
    pub fn e8_minus() -> Self {
        let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 7)];
        let mut g = vec![vec![0i64; 8]; 8];
        for (i, row) in g.iter_mut().enumerate() {
            row[i] = -2;
        }
        for (a, b) in edges {
            g[a][b] = 1;
            g[b][a] = 1;
        }
        Self::new("E8(-1)", g).expect("E8 is unimodular")
    }

    /// Orthogonal direct sum in basis order `self, other`.
    pub fn direct_sum(&self, other: &Lattice) -> Self {
        let (n, m) = (self.rank(), other.rank());
        let mut g = vec![vec![0i64; n + m]; n + m];
        for i in 0..n {
            for j in 0..n {
                g[i][j] = self.gram()[i][j];
            }
        }
        for i in 0..m {
            for j in 0..m {
                g[n + i][n + j] = other.gram()[i][j];
            }
        }
        Self::new(format!("{}+{}", self.label(), other.label()), g)
            .expect("sum of non-degenerate lattices is non-degenerate")
    }

    /// Mukai lattice `H^0 + NS + H^4` in coordinates `(r, l, s)` with pairing
    /// `l.l' - r s' - r' s`.
    pub fn mukai(ns: &Lattice) -> Self {
        let m = ns.rank();
        let n = m + 2;
        let mut g = vec![vec![0i64; n]; n];
        g[0][n - 1] = -1;
        g[n - 1][0] = -1;
        for i in 0..m {
            for j in 0..m {
                g[1 + i][1 + j] = ns.gram()[i][j];
            }
        }
        Self::build(format!("mukai({})", ns.label()), g, Some(ns.clone()))
            .expect("Mukai lattice of a non-degenerate lattice is non-degenerate")
    }

    /// Named presets: `U`, `E8_minus`, `bracket(k)` or `<k>`, `mukai_rank1(n)`,
    /// `full_mukai`, `mukai(EXPR)` and `+`-separated direct sums of these.
    pub fn preset(name: &str) -> Result<Self> {
        let cleaned: String = name
            .replace('⊕', "+")
            .replace('⟨', "<")
            .replace('⟩', ">")
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect();
        let parts = split_top_level(&cleaned);
        let mut iter = parts.into_iter();
        let first = iter.next().ok_or_else(|| Error::UnknownPreset(name.to_string()))?;
        let mut acc = Self::preset_atom(&first, name)?;
        for part in iter {
            acc = acc.direct_sum(&Self::preset_atom(&part, name)?);
        }
        Ok(acc)
    }

    fn preset_atom(atom: &str, full: &str) -> Result<Self> {
        let unknown = || Error::UnknownPreset(full.to_string());
        let int_arg = |s: &str| s.parse::<i64>().map_err(|_| unknown());
        match atom {
            "U" => return Ok(Self::hyperbolic_plane()),
            "E8_minus" | "E8(-1)" | "E8-" => return Ok(Self::e8_minus()),
            "full_mukai" => {
                let u = Self::hyperbolic_plane();
                let e8 = Self::e8_minus();
                let ns = u.direct_sum(&u).direct_sum(&u).direct_sum(&e8).direct_sum(&e8);
                let ns = Self::new("U^3+E8(-1)^2", ns.gram().to_vec()).expect("K3 lattice");
                return Ok(Self::mukai(&ns));
            }
            _ => {}
        }
        if let Some(inner) = atom.strip_prefix('<').and_then(|s| s.strip_suffix('>')) {
            return Self::rank_one(int_arg(inner)?);
        }
        if let Some(inner) = atom.strip_prefix("bracket(").and_then(|s| s.strip_suffix(')')) {
            return Self::rank_one(int_arg(inner)?);
        }
        if let Some(inner) = atom.strip_prefix("mukai_rank1(").and_then(|s| s.strip_suffix(')')) {
            let n = int_arg(inner)?;
            if n <= 0 {
                return Err(unknown());
            }
            return Ok(Self::mukai(&Self::rank_one(2 * n)?));
        }
        if let Some(inner) = atom.strip_prefix("mukai(").and_then(|s| s.strip_suffix(')')) {
            return Ok(Self::mukai(&Self::preset(inner)?));
        }
        Err(unknown())
    }

    pub fn label(&self) -> &str {
        &self.0.label
    }

    pub fn rank(&self) -> usize {
        self.0.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.0.gram
    }

    pub fn gram_big(&self) -> BigMat {
        intmat::to_big(&self.0.gram)
    }

    /// `(positive, negative)` counts.
    pub fn signature(&self) -> (usize, usize) {
        self.0.signature
    }

    pub fn det(&self) -> &BigInt {
        &self.0.det
    }

    pub fn is_even(&self) -> bool {
        self.0.even
    }

    /// The Néron-Severi part when the lattice was built by [`Lattice::mukai`].
    pub fn mukai_ns(&self) -> Option<&Lattice> {
        self.0.mukai_ns.as_ref()
    }

    pub fn gram_f64(&self) -> nalgebra::DMatrix<f64> {
        let n = self.rank();
        nalgebra::DMatrix::from_fn(n, n, |i, j| self.0.gram[i][j] as f64)
    }

    pub fn pair_raw(&self, a: &[i64], b: &[i64]) -> i64 {
        let g = &self.0.gram;
        let mut acc: i128 = 0;
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            let row = &g[i];
            let mut inner: i128 = 0;
            for (j, &bj) in b.iter().enumerate() {
                inner += row[j] as i128 * bj as i128;
            }
            acc += ai as i128 * inner;
        }
        i64::try_from(acc).expect("lattice pairing overflowed i64")
    }

    pub fn pair_f64(&self, a: &[f64], b: &[f64]) -> f64 {
        let g = &self.0.gram;
        let mut acc = 0.0;
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0.0 {
                continue;
            }
            let mut inner = 0.0;
            for (j, &bj) in b.iter().enumerate() {
                inner += g[i][j] as f64 * bj;
            }
            acc += ai * inner;
        }
        acc
    }

    /// `G v`, the functional `w -> v.w` in coordinates.
    pub fn dual_raw(&self, v: &[i64]) -> Vec<i64> {
        self.0
            .gram
            .iter()
            .map(|row| {
                let s: i128 = row.iter().zip(v).map(|(&g, &x)| g as i128 * x as i128).sum();
                i64::try_from(s).expect("lattice pairing overflowed i64")
            })
            .collect()
    }

    pub fn vector(&self, coords: Vec<i64>) -> Result<LatVec> {
        if coords.len() != self.rank() {
            return Err(Error::WrongLength {
                got: coords.len(),
                rank: self.rank(),
            });
        }
        Ok(LatVec {
            lattice: self.clone(),
            coords,
        })
    }

    pub fn zero(&self) -> LatVec {
        LatVec {
            lattice: self.clone(),
            coords: vec![0; self.rank()],
        }
    }

    pub fn basis_vector(&self, i: usize) -> LatVec {
        let mut c = vec![0; self.rank()];
        c[i] = 1;
        LatVec {
            lattice: self.clone(),
            coords: c,
        }
    }

    /// Mukai vector `(r, c1, c1^2/2 - c2 + r)` of a sheaf with the given
    /// rank and Chern classes.
    pub fn mukai_vector(&self, rank: i64, c1: &[i64], c2: i64) -> Result<LatVec> {
        let ns = self.mukai_ns().ok_or(Error::NotMukai)?;
        if c1.len() != ns.rank() {
            return Err(Error::WrongLength {
                got: c1.len(),
                rank: ns.rank(),
            });
        }
        let c1sq = ns.pair_raw(c1, c1);
        if c1sq % 2 != 0 {
            return Err(Error::OddSquare(format!("c1^2 = {c1sq}")));
        }
        let mut coords = vec![rank];
        coords.extend_from_slice(c1);
        coords.push(c1sq / 2 - c2 + rank);
        self.vector(coords)
    }

    /// `v0 = (0, 0, 1)`, the class of a point, on a Mukai lattice.
    pub fn point_class(&self) -> Result<LatVec> {
        self.mukai_ns().ok_or(Error::NotMukai)?;
        let mut c = vec![0; self.rank()];
        *c.last_mut().expect("rank >= 2") = 1;
        self.vector(c)
    }

    /// Discriminant group `N^*/N` as invariant factors `> 1`.
    pub fn discriminant_group(&self) -> Vec<BigInt> {
        discriminant_of_gram(&self.gram_big())
    }

    /// All `(-2)`-vectors with every coordinate in `[-bound, bound]`, in
    /// lexicographic order of coordinates.
    pub fn roots_in_box(&self, bound: i64) -> Vec<LatVec> {
        let n = self.rank();
        let mut out = Vec::new();
        let mut c = vec![-bound; n];
        if bound < 0 || n == 0 {
            return out;
        }
        loop {
            if self.pair_raw(&c, &c) == -2 {
                out.push(LatVec {
                    lattice: self.clone(),
                    coords: c.clone(),
                });
            }
            let mut k = n;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                if c[k] < bound {
                    c[k] += 1;
                    for x in c.iter_mut().skip(k + 1) {
                        *x = -bound;
                    }
                    break;
                }
            }
        }
    }

    pub fn identity(&self) -> Isometry {
        Isometry {
            lattice: self.clone(),
            matrix: (0..self.rank())
                .map(|i| (0..self.rank()).map(|j| i64::from(i == j)).collect())
                .collect(),
            plus_flag: Some(true),
        }
    }

    pub fn minus_identity(&self) -> Isometry {
        Isometry {
            lattice: self.clone(),
            matrix: (0..self.rank())
                .map(|i| (0..self.rank()).map(|j| -i64::from(i == j)).collect())
                .collect(),
            plus_flag: None,
        }
    }

    /// The lattice `v^perp / Z v` of a primitive isotropic vector.
    pub fn quotient_lattice(&self, v: &LatVec) -> Result<QuotientLattice> {
        self.check_same(v)?;
        let sq = v.square();
        if sq != 0 {
            return Err(Error::NotIsotropic(sq));
        }
        if !v.is_primitive() {
            return Err(if v.is_zero() {
                Error::ZeroVector
            } else {
                Error::NotPrimitive
            });
        }
        let n = self.rank();
        let dual = intmat::to_big(&[self.dual_raw(&v.coords)]);
        let kernel = intmat::integer_kernel(&dual, n);
        let vb: Vec<BigInt> = v.coords.iter().map(|&x| BigInt::from(x)).collect();
        let c = echelon_coordinates(&kernel, &vb).ok_or(Error::NotPrimitive)?;
        let u = intmat::complete_to_unimodular(&c).ok_or(Error::NotPrimitive)?;
        let full = intmat::mul(&u, &kernel);
        debug_assert_eq!(full[0], vb);
        let rest: BigMat = full[1..].to_vec();
        let mut rest = if rest.is_empty() { rest } else { intmat::hnf(&rest) };
        rest.retain(|row| row.iter().any(|x| !x.is_zero()));
        // reduce lifts against v at its first non-zero coordinate
        let j = v.coords.iter().position(|&x| x != 0).expect("v is non-zero");
        let vj = BigInt::from(v.coords[j]);
        for row in rest.iter_mut() {
            let q = row[j].div_floor(&vj);
            if !q.is_zero() {
                for (x, y) in row.iter_mut().zip(&vb) {
                    *x -= &q * y;
                }
            }
        }
        let lifts: Vec<Vec<i64>> = intmat::to_i64(&rest).ok_or(Error::Invalid("lift overflow".into()))?;
        let gram: Vec<Vec<i64>> = lifts
            .iter()
            .map(|a| lifts.iter().map(|b| self.pair_raw(a, b)).collect())
            .collect();
        let lattice = Lattice::new(format!("L({})", v), gram)?;
        Ok(QuotientLattice {
            lattice,
            lifts: lifts
                .into_iter()
                .map(|coords| LatVec {
                    lattice: self.clone(),
                    coords,
                })
                .collect(),
            v: v.clone(),
        })
    }

    /// For a standard `v` (isotropic, divisibility one) returns `f` with
    /// `f^2 = 0`, `v.f = -1` and an HNF basis of `<v, f>^perp`, so that
    /// `N = Z f + complement + Z v`.
    pub fn standard_to_hyperbolic(&self, v: &LatVec) -> Result<HyperbolicSplitting> {
        self.check_same(v)?;
        let sq = v.square();
        if sq != 0 {
            return Err(Error::NotIsotropic(sq));
        }
        let d = v.divisibility();
        if d == 0 {
            return Err(Error::ZeroVector);
        }
        if d != 1 {
            return Err(Error::NotStandard(d));
        }
        let dual = self.dual_raw(&v.coords);
        // w with dual . w = -1 from an iterated extended gcd
        let mut g = BigInt::zero();
        let mut x = vec![BigInt::zero(); dual.len()];
        for (i, &a) in dual.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let (g2, s, t) = intmat::ext_gcd(&g, &BigInt::from(a));
            for xi in x.iter_mut() {
                *xi *= &s;
            }
            x[i] += t;
            g = g2;
        }
        debug_assert!(g.is_one());
        let w: Vec<i64> = x.iter().map(|c| (-c).to_i64().expect("small coefficients")).collect();
        let w2 = self.pair_raw(&w, &w);
        if w2 % 2 != 0 {
            return Err(Error::OddSquare(format!("w^2 = {w2}")));
        }
        let f: Vec<i64> = w.iter().zip(&v.coords).map(|(&wi, &vi)| wi + (w2 / 2) * vi).collect();
        debug_assert_eq!(self.pair_raw(&f, &f), 0);
        debug_assert_eq!(self.pair_raw(&f, &v.coords), -1);
        let constraints = intmat::to_big(&[dual, self.dual_raw(&f)]);
        let kernel = intmat::integer_kernel(&constraints, self.rank());
        let complement: Vec<Vec<i64>> = intmat::to_i64(&kernel).ok_or(Error::Invalid("complement overflow".into()))?;
        let gram = complement
            .iter()
            .map(|a| complement.iter().map(|b| self.pair_raw(a, b)).collect())
            .collect();
        let complement_lattice = Lattice::new(format!("L({})", v), gram)?;
        Ok(HyperbolicSplitting {
            v: v.clone(),
            f: LatVec {
                lattice: self.clone(),
                coords: f,
            },
            complement: complement
                .into_iter()
                .map(|coords| LatVec {
                    lattice: self.clone(),
                    coords,
                })
                .collect(),
            complement_lattice,
        })
    }

    pub fn reflection(&self, delta: &LatVec) -> Result<Isometry> {
        self.check_same(delta)?;
        let sq = delta.square();
        if sq != -2 {
            return Err(Error::NotARoot(sq));
        }
        let dual = self.dual_raw(&delta.coords);
        let n = self.rank();
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j) + delta.coords[i] * dual[j]).collect())
            .collect();
        Ok(Isometry {
            lattice: self.clone(),
            matrix,
            plus_flag: None,
        })
    }

    fn check_same(&self, v: &LatVec) -> Result<()> {
        if v.lattice != *self {
            Err(Error::LatticeMismatch)
        } else {
            Ok(())
        }
    }
}

fn split_top_level(s: &str) -> Vec<String> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let chars: Vec<char> = s.chars().collect();
    for (i, &ch) in chars.iter().enumerate() {
        match ch {
            '(' | '<' => depth += 1,
            ')' | '>' => depth -= 1,
            _ => {}
        }
        // a '+' directly after '<' or '(' is a sign, not a separator
        let after_open = i > 0 && matches!(chars[i - 1], '<' | '(');
        if ch == '+' && depth == 0 && !after_open {
            parts.push(std::mem::take(&mut cur));
        } else {
            cur.push(ch);
        }
    }
    parts.push(cur);
    parts.retain(|p| !p.is_empty());
    parts
}

/// Coordinates of `v` in an echelon (row HNF) basis, if integral.
fn echelon_coordinates(basis: &BigMat, v: &[BigInt]) -> Option<Vec<BigInt>> {
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
        coeffs.push(q);
    }
    if residual.iter().all(|x| x.is_zero()) {
        Some(coeffs)
    } else {
        None
    }
}

pub fn discriminant_of_gram(gram: &BigMat) -> Vec<BigInt> {
    intmat::smith_invariants(gram)
        .into_iter()
        .filter(|d| !d.is_one())
        .collect()
}

/// Element of a lattice, stored as integer coordinates.
#[derive(Clone, PartialEq)]
pub struct LatVec {
    lattice: Lattice,
    coords: Vec<i64>,
}

impl fmt::Debug for LatVec {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "{:?}", self.coords)
    }
}

impl fmt::Display for LatVec {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl LatVec {
    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<i64> {
        self.coords
    }

    pub fn pair(&self, other: &LatVec) -> Result<i64> {
        if self.lattice != other.lattice {
            return Err(Error::LatticeMismatch);
        }
        Ok(self.lattice.pair_raw(&self.coords, &other.coords))
    }

    pub fn square(&self) -> i64 {
        self.lattice.pair_raw(&self.coords, &self.coords)
    }

    /// Euler pairing `chi(v, w) = -v.w`.
    pub fn euler_pairing(&self, other: &LatVec) -> Result<i64> {
        self.pair(other).map(|x| -x)
    }

    /// Positive generator of `v.N`; zero for the zero vector.
    pub fn divisibility(&self) -> i64 {
        self.lattice
            .dual_raw(&self.coords)
            .into_iter()
            .fold(0i64, |g, x| g.gcd(&x))
    }

    pub fn content(&self) -> i64 {
        self.coords.iter().fold(0i64, |g, x| g.gcd(x))
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&x| x == 0)
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == 1
    }

    /// Largest absolute coordinate.
    pub fn height(&self) -> i64 {
        self.coords.iter().map(|x| x.abs()).max().unwrap_or(0)
    }

    pub fn neg(&self) -> LatVec {
        LatVec {
            lattice: self.lattice.clone(),
            coords: self.coords.iter().map(|x| -x).collect(),
        }
    }

    pub fn add(&self, other: &LatVec) -> Result<LatVec> {
        if self.lattice != other.lattice {
            return Err(Error::LatticeMismatch);
        }
        Ok(LatVec {
            lattice: self.lattice.clone(),
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn scale(&self, k: i64) -> LatVec {
        LatVec {
            lattice: self.lattice.clone(),
            coords: self.coords.iter().map(|x| k * x).collect(),
        }
    }

    /// Representative of `{v, -v}` whose first non-zero coordinate is positive.
    pub fn sign_normalized(&self) -> LatVec {
        match self.coords.iter().find(|&&x| x != 0) {
            Some(&x) if x < 0 => self.neg(),
            _ => self.clone(),
        }
    }

    /// Reflection `w + (delta.w) delta` in a `(-2)`-vector.
    pub fn reflect(&self, delta: &LatVec) -> Result<LatVec> {
        let sq = delta.square();
        if sq != -2 {
            return Err(Error::NotARoot(sq));
        }
        let k = delta.pair(self)?;
        Ok(LatVec {
            lattice: self.lattice.clone(),
            coords: self.coords.iter().zip(&delta.coords).map(|(w, d)| w + k * d).collect(),
        })
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(|&x| x as f64).collect()
    }
}

/// `v^perp / Z v` with a Gram matrix and lifts of its basis to `N`.
#[derive(Debug, Clone)]
pub struct QuotientLattice {
    pub lattice: Lattice,
    pub lifts: Vec<LatVec>,
    pub v: LatVec,
}

/// Decomposition `N = <v, f> + complement` with `<v, f>` a hyperbolic plane.
#[derive(Debug, Clone)]
pub struct HyperbolicSplitting {
    pub v: LatVec,
    pub f: LatVec,
    pub complement: Vec<LatVec>,
    pub complement_lattice: Lattice,
}

/// Integral isometry `w -> M w` acting on coordinate columns.
#[derive(Clone, PartialEq)]
pub struct Isometry {
    lattice: Lattice,
    matrix: Vec<Vec<i64>>,
    /// Whether the isometry preserves the orientation of positive 2-planes.
    /// Computed by the period-domain layer, `None` when unknown.
    pub plus_flag: Option<bool>,
}

impl fmt::Debug for Isometry {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "Isometry({:?})", self.matrix)
    }
}

impl Isometry {
    pub fn new(lattice: &Lattice, matrix: Vec<Vec<i64>>) -> Result<Self> {
        let n = lattice.rank();
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(Error::NotIsometry);
        }
        let iso = Isometry {
            lattice: lattice.clone(),
            matrix,
            plus_flag: None,
        };
        // M^T G M = G, column by column
        for i in 0..n {
            let ci = iso.column(i);
            for j in i..n {
                let cj = iso.column(j);
                if lattice.pair_raw(&ci, &cj) != lattice.gram()[i][j] {
                    return Err(Error::NotIsometry);
                }
            }
        }
        Ok(iso)
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        self.matrix.iter().map(|row| row[j]).collect()
    }

    pub fn apply_raw(&self, v: &[i64]) -> Vec<i64> {
        self.matrix
            .iter()
            .map(|row| {
                let s: i128 = row.iter().zip(v).map(|(&a, &b)| a as i128 * b as i128).sum();
                i64::try_from(s).expect("isometry image overflowed i64")
            })
            .collect()
    }

    pub fn apply(&self, v: &LatVec) -> Result<LatVec> {
        if v.lattice != self.lattice {
            return Err(Error::LatticeMismatch);
        }
        Ok(LatVec {
            lattice: self.lattice.clone(),
            coords: self.apply_raw(&v.coords),
        })
    }

    pub fn apply_f64(&self, v: &[f64]) -> Vec<f64> {
        self.matrix
            .iter()
            .map(|row| row.iter().zip(v).map(|(&a, &b)| a as f64 * b).sum())
            .collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Isometry) -> Result<Isometry> {
        if self.lattice != other.lattice {
            return Err(Error::LatticeMismatch);
        }
        let n = self.lattice.rank();
        let matrix = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let s: i128 = (0..n)
                            .map(|k| self.matrix[i][k] as i128 * other.matrix[k][j] as i128)
                            .sum();
                        i64::try_from(s).expect("isometry product overflowed i64")
                    })
                    .collect()
            })
            .collect();
        let plus_flag = match (self.plus_flag, other.plus_flag) {
            (Some(a), Some(b)) => Some(a == b),
            _ => None,
        };
        Ok(Isometry {
            lattice: self.lattice.clone(),
            matrix,
            plus_flag,
        })
    }

    /// `M^{-1} = G^{-1} M^T G`, computed exactly.
    pub fn inverse(&self) -> Isometry {
        let inv = intmat::inverse_unimodular(&intmat::to_big(&self.matrix))
            .and_then(|m| intmat::to_i64(&m))
            .expect("isometries are unimodular");
        Isometry {
            lattice: self.lattice.clone(),
            matrix: inv,
            plus_flag: self.plus_flag,
        }
    }

    /// True when the induced map on `N^*/N` is the identity, i.e.
    /// `(M - I) G^{-1}` is integral.
    pub fn acts_trivially_on_discriminant(&self) -> bool {
        self.discriminant_action_is(1)
    }

    /// True when the induced map on `N^*/N` is `sign * id`.
    pub fn discriminant_action_is(&self, sign: i64) -> bool {
        let n = self.lattice.rank();
        let ginv = rational_inverse(&self.lattice.gram_big()).expect("non-degenerate");
        for i in 0..n {
            for j in 0..n {
                let mut acc = BigRational::zero();
                for k in 0..n {
                    let m = self.matrix[i][k] - if i == k { sign } else { 0 };
                    if m != 0 {
                        acc += BigRational::from_integer(m.into()) * &ginv[k][j];
                    }
                }
                if !acc.is_integer() {
                    return false;
                }
            }
        }
        true
    }

    pub fn determinant_sign(&self) -> i64 {
        let d = intmat::determinant(&intmat::to_big(&self.matrix));
        if d.is_positive() {
            1
        } else {
            -1
        }
    }
}

/// Exact inverse of a square integer matrix over the rationals.
pub fn rational_inverse(a: &BigMat) -> Option<Vec<Vec<BigRational>>> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<BigRational> = row.iter().map(|x| BigRational::from_integer(x.clone())).collect();
            r.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, p);
        let piv = m[col][col].clone();
        for x in m[col].iter_mut() {
            *x /= &piv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for k in 0..2 * n {
                    let v = &f * &m[col][k];
                    m[r][k] -= v;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_errors() {
        assert_eq!(
            Lattice::new("x", vec![vec![0, 1], vec![2, 0]]).unwrap_err(),
            Error::NonSymmetric(1, 0)
        );
        assert_eq!(
            Lattice::new("x", vec![vec![1, 1], vec![1, 1]]).unwrap_err(),
            Error::Degenerate
        );
        assert!(matches!(Lattice::preset("nope"), Err(Error::UnknownPreset(_))));
    }

    #[test]
    fn preset_signatures() {
        assert_eq!(Lattice::preset("U").unwrap().signature(), (1, 1));
        assert_eq!(Lattice::preset("E8_minus").unwrap().signature(), (0, 8));
        assert_eq!(Lattice::preset("mukai_rank1(3)").unwrap().signature(), (2, 1));
        let full = Lattice::preset("full_mukai").unwrap();
        assert_eq!(full.rank(), 24);
        assert_eq!(full.signature(), (4, 20));
        assert!(full.discriminant_group().is_empty());
        assert_eq!(Lattice::preset("U+<2>").unwrap().gram()[2][2], 2);
        assert_eq!(Lattice::preset("U⊕⟨-2⟩").unwrap().signature(), (1, 2));
        assert_eq!(Lattice::preset("mukai(<2>+<-2>)").unwrap().signature(), (2, 2));
    }

    #[test]
    fn mukai_pairing_example() {
        let n = Lattice::preset("U+<2>").unwrap();
        let a = n.vector(vec![1, 0, 0]).unwrap();
        let b = n.vector(vec![0, 1, 0]).unwrap();
        assert_eq!(a.pair(&b).unwrap(), 1);
        assert_eq!(a.square(), 0);
    }

    #[test]
    fn roots_of_hyperbolic_plane() {
        let u = Lattice::hyperbolic_plane();
        let r: Vec<Vec<i64>> = u.roots_in_box(3).into_iter().map(|v| v.into_coords()).collect();
        assert_eq!(r, vec![vec![-1, 1], vec![1, -1]]);
    }

    #[test]
    fn reflection_is_isometric_involution() {
        let n = Lattice::preset("U+<2>+<-2>").unwrap();
        let d = n.vector(vec![0, 0, 0, 1]).unwrap();
        let s = n.reflection(&d).unwrap();
        let w = n.vector(vec![3, -1, 2, 5]).unwrap();
        let sw = s.apply(&w).unwrap();
        assert_eq!(sw, w.reflect(&d).unwrap());
        assert_eq!(s.apply(&sw).unwrap(), w);
        assert_eq!(sw.square(), w.square());
        assert!(s.acts_trivially_on_discriminant());
    }

    #[test]
    fn quotient_of_point_class_is_neron_severi() {
        let n = Lattice::preset("mukai_rank1(3)").unwrap();
        let v0 = n.point_class().unwrap();
        let q = n.quotient_lattice(&v0).unwrap();
        assert_eq!(q.lattice.gram(), &[vec![6]]);
        assert_eq!(q.lifts[0].coords(), &[0, 1, 0]);
        assert_eq!(q.lattice.discriminant_group(), vec![BigInt::from(6)]);
    }

    #[test]
    fn hyperbolic_splitting_example() {
        let n = Lattice::preset("U+<2>").unwrap();
        let v = n.vector(vec![1, 0, 0]).unwrap();
        let s = n.standard_to_hyperbolic(&v).unwrap();
        assert_eq!(s.f.coords(), &[0, -1, 0]);
        assert_eq!(s.complement_lattice.gram(), &[vec![2]]);
    }

    #[test]
    fn non_standard_vector_is_rejected() {
        let n = Lattice::preset("U+<8>").unwrap();
        let v = n.vector(vec![2, -2, 1]).unwrap();
        assert_eq!(v.square(), 0);
        assert_eq!(v.divisibility(), 2);
        assert_eq!(n.standard_to_hyperbolic(&v).unwrap_err(), Error::NotStandard(2));
        let q = n.quotient_lattice(&v).unwrap();
        assert_eq!(q.lattice.signature(), (1, 0));
        assert_eq!(q.lattice.gram(), &[vec![2]]);
    }

    #[test]
    fn mukai_vector_of_ideal_sheaf() {
        let n = Lattice::preset("mukai_rank1(1)").unwrap();
        // structure sheaf: (1, 0, 1); ideal sheaf of n points: (1, 0, 1 - n)
        assert_eq!(n.mukai_vector(1, &[0], 0).unwrap().coords(), &[1, 0, 1]);
        assert_eq!(n.mukai_vector(1, &[0], 3).unwrap().coords(), &[1, 0, -2]);
        let o = n.mukai_vector(1, &[0], 0).unwrap();
        // chi(O, O) = 2 on a K3 surface
        assert_eq!(o.euler_pairing(&o).unwrap(), 2);
    }
}
