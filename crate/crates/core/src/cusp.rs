//! Zero-dimensional cusps at lattice level: primitive isotropic vectors up to
//! sign, divisibility buckets, orbit refinements under a finite generator
//! set, and the classical cusp count of the Fricke group `Γ_0^+(n)`.

use crate::error::{Error, Result};
use crate::lattice::{Isometry, LatVec, Lattice};
use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

fn gcd_all(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// Canonical representative of `±v`: first non-zero coordinate positive.
pub fn sign_canonical(v: &[i64]) -> Vec<i64> {
    match v.iter().find(|&&x| x != 0) {
        Some(&x) if x < 0 => v.iter().map(|a| -a).collect(),
        _ => v.to_vec(),
    }
}

/// All primitive isotropic `v` with `0 < max |v_i| <= height`, one per `±`
/// pair, in lexicographic order.
pub fn enumerate_isotropic(lat: &Lattice, height: i64) -> Vec<LatVec> {
    let n = lat.rank();
    if n == 0 || height < 1 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut c = vec![-height; n];
    c[0] = 0;
    loop {
        if c.iter().any(|&x| x != 0) && sign_canonical(&c) == c && lat.pair_raw(&c, &c) == 0 && gcd_all(&c) == 1 {
            out.push(lat.vector(c.clone()).expect("length matches"));
        }
        let mut k = n;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if c[k] < height {
                c[k] += 1;
                for x in c.iter_mut().skip(k + 1) {
                    *x = -height;
                }
                break;
            }
        }
    }
}

/// Buckets keyed by divisibility; bucket `1` holds the standard vectors.
pub fn classify_divisibility(vectors: &[LatVec]) -> BTreeMap<i64, Vec<LatVec>> {
    let mut out: BTreeMap<i64, Vec<LatVec>> = BTreeMap::new();
    for v in vectors {
        out.entry(v.divisibility()).or_default().push(v.clone());
    }
    out
}

/// Orbit refinement found by bounded search. Two window vectors are joined
/// when a word of length at most `word_depth` in the generators maps one to
/// the other (up to sign) with every intermediate image of height at most
/// twice the window height. True `Γ`-orbits may merge these further.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrbitPartition {
    pub orbits: Vec<Vec<Vec<i64>>>,
    /// Nodes outside the height window reached during the search.
    pub frontier_size: usize,
    pub label: String,
}

pub const REFINEMENT_LABEL: &str = "refinement — true Γ-orbits may merge these";

fn height(v: &[i64]) -> i64 {
    v.iter().map(|a| a.abs()).max().unwrap_or(0)
}

fn find(parent: &mut [usize], mut a: usize) -> usize {
    while parent[a] != a {
        parent[a] = parent[parent[a]];
        a = parent[a];
    }
    a
}

/// Partitions `vectors` (one per `±` pair, all of height at most `window`)
/// into orbits under words of length `<= word_depth`.
pub fn orbit_partition(
    vectors: &[LatVec],
    generators: &[Isometry],
    word_depth: usize,
    window: i64,
) -> Result<OrbitPartition> {
    let cap = 2 * window;
    let mut index: HashMap<Vec<i64>, usize> = HashMap::new();
    let mut nodes: Vec<Vec<i64>> = Vec::new();
    let mut divs: Vec<i64> = Vec::new();
    for v in vectors {
        if v.lattice().rank() != generators.first().map_or(v.lattice().rank(), |g| g.lattice().rank()) {
            return Err(Error::LatticeMismatch);
        }
        let c = sign_canonical(v.coords());
        if height(&c) > window {
            return Err(Error::Invalid(format!("{v} lies outside the height window {window}")));
        }
        if !index.contains_key(&c) {
            index.insert(c.clone(), nodes.len());
            divs.push(v.divisibility());
            nodes.push(c);
        }
    }
    let sources = nodes.len();
    let lat = match vectors.first() {
        Some(v) => v.lattice().clone(),
        None => {
            return Ok(OrbitPartition {
                orbits: Vec::new(),
                frontier_size: 0,
                label: REFINEMENT_LABEL.into(),
            })
        }
    };
    // multi-source BFS discovers every node within `word_depth` of a source
    let mut depth: Vec<usize> = vec![0; sources];
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); sources];
    let mut queue: VecDeque<usize> = (0..sources).collect();
    while let Some(u) = queue.pop_front() {
        if depth[u] >= word_depth {
            continue;
        }
        let mut nb = Vec::with_capacity(generators.len());
        for g in generators {
            let w = sign_canonical(&g.apply_raw(&nodes[u]));
            if height(&w) > cap {
                continue;
            }
            let j = match index.get(&w) {
                Some(&j) => j,
                None => {
                    let j = nodes.len();
                    let d = lat.dual_raw(&w);
                    divs.push(gcd_all(&d));
                    index.insert(w.clone(), j);
                    nodes.push(w);
                    depth.push(depth[u] + 1);
                    adj.push(Vec::new());
                    queue.push_back(j);
                    j
                }
            };
            if divs[j] != divs[u] {
                return Err(Error::NotIsometry);
            }
            nb.push(j);
        }
        adj[u] = nb;
    }
    let reached: Vec<Vec<usize>> = (0..sources)
        .into_par_iter()
        .map(|s| {
            let mut seen = vec![false; nodes.len()];
            seen[s] = true;
            let mut frontier = vec![s];
            let mut hits = Vec::new();
            for _ in 0..word_depth {
                let mut next = Vec::new();
                for &u in &frontier {
                    for &w in &adj[u] {
                        if !seen[w] {
                            seen[w] = true;
                            if w < sources {
                                hits.push(w);
                            }
                            next.push(w);
                        }
                    }
                }
                frontier = next;
            }
            hits
        })
        .collect();
    let mut parent: Vec<usize> = (0..sources).collect();
    for (s, hits) in reached.iter().enumerate() {
        for &h in hits {
            let (a, b) = (find(&mut parent, s), find(&mut parent, h));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<Vec<i64>>> = BTreeMap::new();
    for s in 0..sources {
        let r = find(&mut parent, s);
        groups.entry(r).or_default().push(nodes[s].clone());
    }
    let mut orbits: Vec<Vec<Vec<i64>>> = groups
        .into_values()
        .map(|mut g| {
            g.sort();
            g
        })
        .collect();
    orbits.sort();
    Ok(OrbitPartition {
        orbits,
        frontier_size: nodes.len() - sources,
        label: REFINEMENT_LABEL.into(),
    })
}

/// One orbit of primitive isotropic vectors with the lattice data of
/// `L(v) = v^⊥ / v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuspRecord {
    pub rep: Vec<i64>,
    pub div: i64,
    pub orbit_size_found: usize,
    pub lv_gram: Vec<Vec<i64>>,
    pub disc_group: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Census {
    pub lattice: String,
    pub height: i64,
    pub word_depth: usize,
    pub generator_count: usize,
    pub standard_only: bool,
    pub records: Vec<CuspRecord>,
    pub frontier_size: usize,
    pub label: String,
}

impl Census {
    pub fn count(&self) -> usize {
        self.records.len()
    }
}

fn lv_data(v: &LatVec) -> Result<(Vec<Vec<i64>>, Vec<BigInt>)> {
    let q = v.lattice().quotient_lattice(v)?;
    let gram = q.lattice.gram().to_vec();
    let disc = q.lattice.discriminant_group();
    Ok((gram, disc))
}

/// Census of primitive isotropic vectors of height `<= height` (only the
/// standard ones when `standard_only`), up to the orbit refinement of
/// [`orbit_partition`]. The record count bounds the number of cusps of the
/// generated group from above at this height.
pub fn cusp_census(
    lat: &Lattice,
    height_bound: i64,
    generators: &[Isometry],
    word_depth: usize,
    standard_only: bool,
) -> Result<Census> {
    for g in generators {
        if g.lattice() != lat {
            return Err(Error::LatticeMismatch);
        }
    }
    let all = enumerate_isotropic(lat, height_bound);
    let vectors: Vec<LatVec> = if standard_only {
        all.into_iter().filter(|v| v.divisibility() == 1).collect()
    } else {
        all
    };
    let part = orbit_partition(&vectors, generators, word_depth, height_bound)?;
    let records: Vec<CuspRecord> = part
        .orbits
        .par_iter()
        .map(|orbit| -> Result<CuspRecord> {
            let rep = lat.vector(orbit[0].clone())?;
            let (gram, disc) = lv_data(&rep)?;
            // the discriminant form of L(v) is an isometry invariant
            for member in orbit.iter().skip(1) {
                let (_, d) = lv_data(&lat.vector(member.clone())?)?;
                if d != disc {
                    return Err(Error::NotIsometry);
                }
            }
            Ok(CuspRecord {
                rep: orbit[0].clone(),
                div: rep.divisibility(),
                orbit_size_found: orbit.len(),
                lv_gram: gram,
                disc_group: disc.iter().map(|d| d.to_string()).collect(),
            })
        })
        .collect::<Result<_>>()?;
    Ok(Census {
        lattice: lat.label().to_string(),
        height: height_bound,
        word_depth,
        generator_count: generators.len(),
        standard_only,
        records,
        frontier_size: part.frontier_size,
        label: part.label,
    })
}

/// Census of the standard vectors (divisibility one).
pub fn standard_cusp_census(lat: &Lattice, height: i64, generators: &[Isometry], word_depth: usize) -> Result<Census> {
    cusp_census(lat, height, generators, word_depth, true)
}

/// Reflections in all roots with coordinates in `[-bound, bound]` (one per
/// `±` pair) together with `-id`.
pub fn reflection_generators(lat: &Lattice, bound: i64) -> Result<Vec<Isometry>> {
    let mut out: Vec<Isometry> = Vec::new();
    for r in lat.roots_in_box(bound) {
        if sign_canonical(r.coords()) == r.coords() {
            out.push(lat.reflection(&r)?);
        }
    }
    out.push(lat.minus_identity());
    Ok(out)
}

/// Explicit primitive rank-two isotropic sublattices with a basis of height
/// at most `height`, as HNF bases. Listed without orbit analysis.
pub fn enumerate_isotropic_planes(lat: &Lattice, height: i64) -> Vec<[Vec<i64>; 2]> {
    let iso = enumerate_isotropic(lat, height);
    let n = lat.rank();
    let mut out = BTreeSet::new();
    for (i, a) in iso.iter().enumerate() {
        for b in &iso[i + 1..] {
            if lat.pair_raw(a.coords(), b.coords()) != 0 {
                continue;
            }
            let m = crate::intmat::to_big(&[a.coords().to_vec(), b.coords().to_vec()]);
            let h = crate::intmat::hnf(&m);
            let Some(h) = crate::intmat::to_i64(&h) else {
                continue;
            };
            if h.len() < 2 || h[1].iter().all(|&x| x == 0) {
                continue;
            }
            // saturation: the 2x2 minors of a primitive plane have gcd one
            let mut g = 0i64;
            for p in 0..n {
                for q in p + 1..n {
                    g = g.gcd(&(h[0][p] * h[1][q] - h[0][q] * h[1][p]));
                }
            }
            if g == 1 {
                out.insert([h[0].clone(), h[1].clone()]);
            }
        }
    }
    out.into_iter().collect()
}

/// `(a, c)` cusp of `Γ_0(n)` in lowest terms, `∞ = (1, 0)`.
type Cusp = (i64, i64);

fn reduce(a: i64, c: i64) -> Cusp {
    if c == 0 {
        return (1, 0);
    }
    let g = a.gcd(&c);
    let (a, c) = (a / g, c / g);
    if c < 0 {
        (-a, -c)
    } else {
        (a, c)
    }
}

fn inverse_mod(a: i64, m: i64) -> i64 {
    if m == 1 {
        return 0;
    }
    let e = a.extended_gcd(&m);
    e.x.rem_euclid(m)
}

/// Equivalence of cusps under `Γ_0(n)`: `a1/c1 ~ a2/c2` iff
/// `s1 c2 ≡ s2 c1 mod gcd(c1 c2, n)` with `a_j s_j ≡ 1 mod c_j`, subject to
/// `gcd(c1, n) = gcd(c2, n)`.
fn gamma0_equivalent(n: i64, p: Cusp, q: Cusp) -> bool {
    let (a1, c1) = p;
    let (a2, c2) = q;
    if c1.gcd(&n) != c2.gcd(&n) {
        return false;
    }
    let s1 = if c1 == 0 { a1 } else { inverse_mod(a1, c1) };
    let s2 = if c2 == 0 { a2 } else { inverse_mod(a2, c2) };
    let m = (c1 * c2).gcd(&n);
    (s1 * c2 - s2 * c1).rem_euclid(m) == 0
}

/// Representatives of the cusps of `Γ_0(n)`.
pub fn gamma0_cusps(n: i64) -> Vec<Cusp> {
    let mut reps: Vec<Cusp> = Vec::new();
    let mut cands = vec![(1, 0)];
    for c in 1..=n {
        if n % c != 0 {
            continue;
        }
        for a in 0..n.max(1) * c {
            if a.gcd(&c) == 1 {
                cands.push(reduce(a, c));
            }
        }
    }
    for p in cands {
        if !reps.iter().any(|&q| gamma0_equivalent(n, p, q)) {
            reps.push(p);
        }
    }
    reps
}

/// `Σ_{d | n} φ(gcd(d, n/d))`, the classical count of cusps of `Γ_0(n)`.
pub fn gamma0_cusp_count_formula(n: i64) -> usize {
    let phi = |m: i64| (1..=m).filter(|k| k.gcd(&m) == 1).count();
    (1..=n).filter(|d| n % d == 0).map(|d| phi(d.gcd(&(n / d)))).sum()
}

/// Number of cusps of `Γ_0^+(n)`: cusps of `Γ_0(n)` folded by the Fricke
/// involution `τ ↦ -1/(nτ)`.
pub fn fricke_cusp_count(n: i64) -> Result<usize> {
    if n < 1 {
        return Err(Error::Invalid(format!("level must be positive, got {n}")));
    }
    let reps = gamma0_cusps(n);
    let class = |p: Cusp| {
        reps.iter()
            .position(|&q| gamma0_equivalent(n, p, q))
            .expect("complete list")
    };
    let mut parent: Vec<usize> = (0..reps.len()).collect();
    for (i, &(a, c)) in reps.iter().enumerate() {
        // a/c ↦ -c/(n a)
        let image = if a == 0 { (1, 0) } else { reduce(-c, n * a) };
        let j = class(image);
        let (x, y) = (find(&mut parent, i), find(&mut parent, j));
        if x != y {
            parent[x.max(y)] = x.min(y);
        }
    }
    Ok((0..reps.len()).filter(|&i| find(&mut parent, i) == i).count())
}

/// For `N = U ⊕ <2n>` in a basis where `q = 2xy + 2n z^2` after the
/// coordinate change `basis`, the images of `Γ_0(n)` (entries bounded by
/// `bound`) and of the Fricke involution, acting by conjugation on
/// `X = [[z, y/n], [x, -z]]`.
pub fn fricke_generators(lat: &Lattice, bound: i64) -> Result<Vec<Isometry>> {
    let (n, to_xyz) = rank_one_coordinates(lat)?;
    // to_xyz maps lattice coords to (x, y, z); its inverse is itself up to sign
    let from_xyz = invert3(&to_xyz).ok_or(Error::NotMukai)?;
    let conj = |p: i64, q: i64, r: i64, s: i64| -> Option<Vec<Vec<i64>>> {
        let det = p * s - q * r;
        let mut cols = Vec::new();
        for e in [(1i64, 0i64, 0i64), (0, 1, 0), (0, 0, 1)] {
            let (x, y, z) = e;
            // g X g^{-1} with X = [[z, y/n], [x, -z]], scaled by n det
            let xm = [[z * n, y], [x * n, -z * n]];
            let a = [[p, q], [r, s]];
            let ainv = [[s, -q], [-r, p]];
            let mut t = [[0i64; 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    t[i][j] = (0..2)
                        .map(|k| (0..2).map(|l| a[i][k] * xm[k][l] * ainv[l][j]).sum::<i64>())
                        .sum();
                }
            }
            let scale = n * det;
            let (z2, y2, x2) = (t[0][0], t[0][1] * n, t[1][0]);
            if z2 % scale != 0 || y2 % scale != 0 || x2 % scale != 0 {
                return None;
            }
            cols.push([x2 / scale, y2 / scale, z2 / scale]);
        }
        Some((0..3).map(|i| (0..3).map(|j| cols[j][i]).collect()).collect())
    };
    let mut mats = Vec::new();
    for p in -bound..=bound {
        for q in -bound..=bound {
            for c in -bound..=bound {
                for s in -bound..=bound {
                    let r = n * c;
                    if p * s - q * r == 1 {
                        if let Some(m) = conj(p, q, r, s) {
                            mats.push(m);
                        }
                    }
                }
            }
        }
    }
    // Fricke involution [[0, -1], [n, 0]]: (x, y, z) ↦ (-y, -x, -z)
    mats.push(vec![vec![0, -1, 0], vec![-1, 0, 0], vec![0, 0, -1]]);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for m in mats {
        let lm = mul3(&from_xyz, &mul3(&m, &to_xyz));
        if seen.insert(lm.clone()) {
            out.push(Isometry::new(lat, lm)?);
        }
    }
    out.push(lat.minus_identity());
    Ok(out)
}

fn mul3(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    (0..3)
        .map(|i| (0..3).map(|j| (0..3).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

fn invert3(a: &[Vec<i64>]) -> Option<Vec<Vec<i64>>> {
    let big = crate::intmat::to_big(a);
    crate::intmat::to_i64(&crate::intmat::inverse_unimodular(&big)?)
}

/// `n` and the coordinate change to `(x, y, z)` with `q = 2xy + 2n z^2`, for
/// `U ⊕ <2n>` presets and the Mukai lattice of `<2n>`.
pub fn rank_one_coordinates(lat: &Lattice) -> Result<(i64, Vec<Vec<i64>>)> {
    let g = lat.gram();
    if lat.rank() != 3 {
        return Err(Error::NotMukai);
    }
    if g[0][0] == 0 && g[0][1] == 1 && g[1][1] == 0 && g[0][2] == 0 && g[1][2] == 0 && g[2][2] > 0 && g[2][2] % 2 == 0 {
        return Ok((g[2][2] / 2, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]));
    }
    // Mukai (r, l, s): l.l - 2rs with x = r, y = -s, z = l
    if g[0][0] == 0 && g[0][2] == -1 && g[2][2] == 0 && g[0][1] == 0 && g[1][2] == 0 && g[1][1] > 0 && g[1][1] % 2 == 0
    {
        return Ok((g[1][1] / 2, vec![vec![1, 0, 0], vec![0, 0, -1], vec![0, 1, 0]]));
    }
    Err(Error::NotMukai)
}

/// Number of distinct primes dividing `n`.
pub fn omega(n: i64) -> u32 {
    let mut m = n;
    let mut count = 0;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            count += 1;
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    count + u32::from(m > 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isotropic_vectors_of_small_lattices() {
        let u = Lattice::hyperbolic_plane();
        let iso: Vec<Vec<i64>> = enumerate_isotropic(&u, 1)
            .into_iter()
            .map(|v| v.into_coords())
            .collect();
        assert_eq!(iso, vec![vec![0, 1], vec![1, 0]]);
        assert!(enumerate_isotropic(&Lattice::rank_one(2).unwrap(), 5).is_empty());
        let n = Lattice::preset("U+<2>").unwrap();
        let fast = enumerate_isotropic(&n, 2).len();
        let mut brute = 0;
        for a in -2i64..=2 {
            for b in -2i64..=2 {
                for c in -2i64..=2 {
                    let v = [a, b, c];
                    if v != [0, 0, 0] && sign_canonical(&v) == v && 2 * a * b + 2 * c * c == 0 && gcd_all(&v) == 1 {
                        brute += 1;
                    }
                }
            }
        }
        assert_eq!(fast, brute);
    }

    #[test]
    fn divisibility_buckets() {
        let u2 = Lattice::new("U(2)+<2>", vec![vec![0, 2, 0], vec![2, 0, 0], vec![0, 0, 2]]).unwrap();
        let e = u2.vector(vec![1, 0, 0]).unwrap();
        assert_eq!(classify_divisibility(&[e]).keys().copied().collect::<Vec<_>>(), vec![2]);
        let u = Lattice::hyperbolic_plane();
        let b = classify_divisibility(&enumerate_isotropic(&u, 4));
        assert_eq!(b.keys().copied().collect::<Vec<_>>(), vec![1]);
        let m = Lattice::preset("mukai_rank1(3)").unwrap();
        let v0 = m.point_class().unwrap();
        assert!(classify_divisibility(&[v0]).contains_key(&1));
    }

    #[test]
    fn orbits_without_generators_are_singletons() {
        let n = Lattice::preset("U+<2>").unwrap();
        let iso = enumerate_isotropic(&n, 3);
        let p = orbit_partition(&iso, &[], 4, 3).unwrap();
        assert_eq!(p.orbits.len(), iso.len());
    }

    #[test]
    fn reflections_merge_e_and_f() {
        let n = Lattice::preset("U+<2>").unwrap();
        let gens = reflection_generators(&n, 2).unwrap();
        let e = n.vector(vec![1, 0, 0]).unwrap();
        let f = n.vector(vec![0, 1, 0]).unwrap();
        let p = orbit_partition(&[e.clone(), f.clone()], &gens, 3, 4).unwrap();
        assert_eq!(p.orbits.len(), 1);
        // closure: generators keep members in their orbit
        let iso = enumerate_isotropic(&n, 4);
        let p = orbit_partition(&iso, &gens, 3, 4).unwrap();
        let orbit_of = |v: &[i64]| p.orbits.iter().position(|o| o.iter().any(|w| w == v));
        for o in &p.orbits {
            for g in &gens {
                let w = sign_canonical(&g.apply_raw(&o[0]));
                if height(&w) <= 4 {
                    assert_eq!(orbit_of(&w), orbit_of(&o[0]));
                }
            }
        }
    }

    #[test]
    fn census_records_carry_quotient_data() {
        let uu = Lattice::preset("U+U").unwrap();
        let gens = reflection_generators(&uu, 1).unwrap();
        let c = standard_cusp_census(&uu, 2, &gens, 3).unwrap();
        for r in &c.records {
            let q = Lattice::new("q", r.lv_gram.clone()).unwrap();
            assert_eq!(q.signature(), (1, 1));
            assert_eq!(q.det().clone(), BigInt::from(-1));
        }
        for r in &c.records {
            assert_ne!(sign_canonical(&r.rep), r.rep.iter().map(|a| -a).collect::<Vec<_>>());
        }
    }

    #[test]
    fn gamma0_cusps_match_the_divisor_formula() {
        for n in 1..=36 {
            assert_eq!(gamma0_cusps(n).len(), gamma0_cusp_count_formula(n), "n = {n}");
        }
        assert_eq!(gamma0_cusps(6).len(), 4);
        assert_eq!(gamma0_cusps(4).len(), 3);
    }

    #[test]
    fn fricke_counts() {
        let got: Vec<usize> = (1..=6).map(|n| fricke_cusp_count(n).unwrap()).collect();
        assert_eq!(got, vec![1, 1, 1, 2, 1, 2]);
        assert!(fricke_cusp_count(0).is_err());
    }

    #[test]
    fn fricke_generators_are_isometries_of_both_models() {
        for preset in ["U+<4>", "mukai_rank1(2)"] {
            let lat = Lattice::preset(preset).unwrap();
            let gens = fricke_generators(&lat, 1).unwrap();
            assert!(gens.len() > 3);
        }
    }

    #[test]
    fn omega_counts_prime_divisors() {
        assert_eq!([1, 2, 4, 6, 12, 30].map(omega), [0, 1, 1, 2, 2, 3]);
    }
}
