//! Subcommand implementations: thin wrappers over `mukai_core`.

use crate::config::{parse_box, parse_list, parse_pair, parse_range, JobConfig};
use crate::output::{sha256_hex, Artifact};
use crate::CliError;
use anyhow::anyhow;
use mukai_core::charges::{
    boundary_beta_search, factor_path, inequality_holds, large_volume_threshold, sigma_shift, verify_beta,
    wall_crossings, ChargeVec, ThresholdBranch,
};
use mukai_core::cusp::{
    cusp_census, fricke_cusp_count, fricke_generators, rank_one_coordinates, reflection_generators,
};
use mukai_core::exact_json::{rational_from_str, rational_to_string};
use mukai_core::geodesic::{geodesic_oracle, linear_degeneration, oracle_deviation, sample_geodesic, samples_csv};
use mukai_core::period::export::{rasterize, walls_json, Slice, WallJson};
use mukai_core::period::regions::tube_point_in_p0;
use mukai_core::period::{enumerate_walls_region, exp_v, TubeBox, TubeChart};
use mukai_core::{LatVec, Lattice};
use serde::Serialize;
use serde_json::json;
use std::fmt::Write;

pub struct Outcome {
    pub artifact: Artifact,
    pub summary: String,
    /// `false` when a built-in verification failed.
    pub verified: bool,
}

fn ok(artifact: Artifact, summary: String) -> Result<Outcome, CliError> {
    Ok(Outcome {
        artifact,
        summary,
        verified: true,
    })
}

fn bad(msg: String) -> CliError {
    CliError::BadInput(anyhow!(msg))
}

fn vector(lat: &Lattice, s: &str, what: &str) -> Result<LatVec, CliError> {
    lat.vector(parse_list(s, what)?).map_err(CliError::core)
}

fn cusp_vector(cfg: &JobConfig, lat: &Lattice) -> Result<LatVec, CliError> {
    match &cfg.v {
        Some(s) => vector(lat, s, "--v"),
        None => lat.point_class().map_err(CliError::core),
    }
}

fn chart(cfg: &JobConfig, lat: &Lattice) -> Result<TubeChart, CliError> {
    TubeChart::new(&cusp_vector(cfg, lat)?).map_err(CliError::core)
}

fn point(cfg: &JobConfig, ch: &TubeChart) -> Result<(Vec<f64>, Vec<f64>), CliError> {
    match &cfg.point {
        Some(p) => parse_pair(p, "--point"),
        None => Ok(default_point(ch)),
    }
}

/// `x = 0` and a `y` inside the positive cone of `K`.
fn default_point(ch: &TubeChart) -> (Vec<f64>, Vec<f64>) {
    let m = ch.dim();
    let kg = ch.kgram();
    let mut y = vec![0.0; m];
    if let Some(i) = (0..m).find(|&i| kg[i][i] > 0) {
        y[i] = 1.5;
    } else if m >= 2 {
        y[0] = 1.5;
        y[1] = 1.5f64.copysign(kg[0][1] as f64);
    }
    (vec![0.0; m], y)
}

fn rationals(s: &str, what: &str) -> Result<Vec<mukai_core::period::interval::Q>, CliError> {
    s.split(',')
        .map(|t| rational_from_str(t).ok_or_else(|| bad(format!("{what}: cannot parse `{t}`"))))
        .collect()
}

pub fn lattice(cfg: &JobConfig) -> Result<Outcome, CliError> {
    let lat = cfg.lattice()?;
    let (p, n) = lat.signature();
    let disc: Vec<String> = lat.discriminant_group().iter().map(|d| d.to_string()).collect();
    let disc_text = if disc.is_empty() {
        "trivial".to_string()
    } else {
        disc.iter().map(|d| format!("ℤ/{d}")).collect::<Vec<_>>().join(" ⊕ ")
    };
    let summary = format!("signature ({p},{n}), det {}, disc {disc_text}", lat.det());
    let result = json!({
        "label": lat.label(),
        "rank": lat.rank(),
        "gram": lat.gram(),
        "signature": [p, n],
        "det": lat.det().to_string(),
        "disc_group": disc,
        "even": lat.is_even(),
        "summary": summary,
    });
    let mut csv = String::from("key,value\n");
    let _ = writeln!(csv, "rank,{}\nsignature,\"({p},{n})\"\ndet,{}", lat.rank(), lat.det());
    let _ = writeln!(csv, "disc_group,\"{}\"", disc.join(" "));
    let mut art = Artifact::json_only(&result);
    art.csv = Some(csv);
    ok(art, summary)
}

pub fn roots(cfg: &JobConfig) -> Result<Outcome, CliError> {
    let lat = cfg.lattice()?;
    let b = cfg.root_bound.unwrap_or(2);
    let roots: Vec<Vec<i64>> = lat
        .roots_in_box(b)
        .into_iter()
        .map(|r| r.sign_normalized().into_coords())
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut csv = String::new();
    for r in &roots {
        csv.push_str(&r.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(","));
        csv.push('\n');
    }
    let summary = format!("{} roots up to sign with |coords| <= {b}", roots.len());
    let mut art = Artifact::json_only(&json!({ "root_bound": b, "count": roots.len(), "roots": roots }));
    art.csv = Some(csv);
    ok(art, summary)
}

pub fn walls(cfg: &JobConfig) -> Result<Outcome, CliError> {
    let lat = cfg.lattice()?;
    let ch = chart(cfg, &lat)?;
    let (x, y) = match &cfg.region {
        Some(b) => parse_box(b)?,
        None => return Err(bad("walls needs --box".into())),
    };
    let bx = TubeBox::new(x.clone(), y.clone());
    let records = enumerate_walls_region(&ch, &bx).map_err(CliError::core)?;
    let walls: Vec<WallJson> = records.iter().map(WallJson::from).collect();
    let mut csv = String::from("kind,root,certified\n");
    for w in &walls {
        let coords: Vec<String> = w.root_coords.iter().map(|c| c.0.to_string()).collect();
        let _ = writeln!(csv, "{:?},\"{}\",{}", w.kind, coords.join(","), w.certified);
    }
    let m = ch.dim();
    let axes: Vec<usize> = match &cfg.axes {
        Some(a) => parse_list(a, "--axes")?,
        None => vec![0, if m >= 2 { 1 } else { m }],
    };
    if axes.len() != 2 || axes.iter().any(|&a| a >= 2 * m) || axes[0] == axes[1] {
        return Err(bad(format!("--axes: need two distinct indices below {}", 2 * m)));
    }
    let range_of = |a: usize| if a < m { x[a] } else { y[a - m] };
    let grid = cfg.grid.unwrap_or(64).max(2);
    let (cx, cy) = bx.center();
    let slice = Slice {
        base_x: cx,
        base_y: cy,
        axes: [axes[0], axes[1]],
        ranges: [range_of(axes[0]), range_of(axes[1])],
        samples: [grid, grid],
    };
    let svg = if matches!(cfg.format, Some(crate::config::Format::Svg)) {
        Some(rasterize(&ch, &slice).map_err(CliError::core)?.to_svg())
    } else {
        None
    };
    let summary = format!("{} walls meet the box", walls.len());
    let value: serde_json::Value = serde_json::from_str(&walls_json(&walls)).expect("walls json");
    let mut art = Artifact::json_only(&json!({ "v": ch.v().coords(), "walls": value }));
    art.csv = Some(csv);
    art.svg = svg;
    ok(art, summary)
}

#[derive(Serialize)]
struct GeneratorInfo {
    reflections: usize,
    fricke: usize,
    hashes: Vec<String>,
}

pub fn cusps(cfg: &JobConfig) -> Result<Outcome, CliError> {
    let lat = cfg.lattice()?;
    let h = cfg.height.unwrap_or(10);
    let b = cfg.root_bound.unwrap_or(4);
    let w = cfg.word_depth.unwrap_or(4);
    let mut gens = reflection_generators(&lat, b).map_err(CliError::core)?;
    let reflections = gens.len();
    let level = rank_one_coordinates(&lat).ok().map(|(n, _)| n);
    let mut fricke = 0;
    if let (Some(_), true) = (level, cfg.fricke.unwrap_or(true)) {
        let extra = fricke_generators(&lat, 2).map_err(CliError::core)?;
        fricke = extra.len();
        gens.extend(extra);
    }
    let hashes = gens
        .iter()
        .map(|g| sha256_hex(serde_json::to_string(g.matrix()).expect("json").as_bytes()))
        .collect();
    let standard_only = !cfg.all_div.unwrap_or(false);
    let census = cusp_census(&lat, h, &gens, w, standard_only).map_err(CliError::core)?;
    let oracle = match level {
        Some(n) => Some(fricke_cusp_count(n).map_err(CliError::core)?),
        None => None,
    };
    let mut csv = String::from("rep,div,orbit_size_found,disc_group\n");
    for r in &census.records {
        let rep: Vec<String> = r.rep.iter().map(|a| a.to_string()).collect();
        let _ = writeln!(
            csv,
            "\"{}\",{},{},\"{}\"",
            rep.join(","),
            r.div,
            r.orbit_size_found,
            r.disc_group.join(" ")
        );
    }
    let mut summary = format!(
        "{} cusp classes (height {h}, root bound {b}, word depth {w}; {})",
        census.count(),
        census.label
    );
    if let Some(o) = oracle {
        let _ = write!(summary, "; Fricke oracle {o}");
    }
    let result = json!({
        "parameters": { "height": h, "root_bound": b, "word_depth": w, "standard_only": standard_only },
        "generators": GeneratorInfo { reflections, fricke, hashes },
        "count": census.count(),
        "fricke_oracle": oracle,
        "census": census,
    });
    let mut art = Artifact::json_only(&result);
    art.csv = Some(csv);
    ok(art, summary)
}

pub fn geodesic(cfg: &JobConfig) -> Result<Outcome, CliError> {
    let lat = cfg.lattice()?;
    let ch = chart(cfg, &lat)?;
    let (x, y) = point(cfg, &ch)?;
    let pt = ch.point(&x, &y).map_err(CliError::core)?;
    let t_max = cfg.t_max.unwrap_or(1.0);
    let steps = cfg.steps.unwrap_or(10_000);
    let tol = cfg.tol.unwrap_or(1e-6);
    let oracle = geodesic_oracle(&ch, &pt, t_max, steps).map_err(CliError::core)?;
    let dev = oracle_deviation(&ch, &pt, &oracle).map_err(CliError::core)?;
    let report = mukai_core::geodesic::VerificationReport {
        max_dev: dev,
        tol,
        steps,
    };
    let samples = sample_geodesic(&ch, &pt, t_max, cfg.samples.unwrap_or(101)).map_err(CliError::core)?;
    let summary = format!(
        "oracle deviation {dev:.3e} (tol {tol:.1e}, {steps} steps): {}",
        if report.passed() { "ok" } else { "FAILED" }
    );
    let mut art = Artifact::json_only(&json!({ "report": report, "passed": report.passed(), "samples": samples }));
    art.csv = Some(samples_csv(&samples));
    Ok(Outcome {
        artifact: art,
        summary,
        verified: report.passed(),
    })
}

pub fn factor(cfg: &JobConfig) -> Result<Outcome, CliError> {
    let lat = cfg.lattice()?;
    let ch = chart(cfg, &lat)?;
    let (x, y) = point(cfg, &ch)?;
    let (t0, t1) = match &cfg.t_range {
        Some(r) => parse_range(r, "--t-range")?,
        None => (1.0, 3.0),
    };
    if t0 <= 0.0 {
        return Err(bad("--t-range must lie in t > 0".into()));
    }
    let winding = cfg.winding.unwrap_or(3);
    let n = cfg.samples.unwrap_or(400).max(2);
    let tol = cfg.tol.unwrap_or(1e-9);
    // z(t) = Exp_v(x + i t y) · Σ_{winding (t - t0)/(t1 - t0)}
    let mut samples = Vec::with_capacity(n);
    for i in 0..n {
        let t = t0 + (t1 - t0) * i as f64 / (n - 1) as f64;
        let yt: Vec<f64> = y.iter().map(|a| a * t).collect();
        let z = ChargeVec {
            z: exp_v(&ch.point(&x, &yt).map_err(CliError::core)?).map_err(CliError::core)?,
        };
        let g = sigma_shift(winding as f64 * (t - t0) / (t1 - t0));
        samples.push((t, g.act(&z).map_err(CliError::core)?));
    }
    let f = factor_path(&samples, ch.v(), 0).map_err(CliError::core)?;
    let first = f.samples.first().map(|s| s.g.phi0).unwrap_or(0.0);
    let last = f.samples.last().map(|s| s.g.phi0).unwrap_or(0.0);
    let recovered = last - first;
    let verified = f.max_residual <= tol && (recovered - winding as f64).abs() <= 1e-6;
    let summary = format!(
        "winding {recovered:.9} recovered (expected {winding}), max residual {:.3e}: {}",
        f.max_residual,
        if verified { "ok" } else { "FAILED" }
    );
    let mut csv = String::from("t,phi0,t00,t01,t10,t11,residual\n");
    for s in &f.samples {
        let m = s.g.matrix;
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            s.t, s.g.phi0, m[0][0], m[0][1], m[1][0], m[1][1], s.residual
        );
    }
    let mut art = Artifact::json_only(&json!({
        "winding_expected": winding,
        "winding_recovered": recovered,
        "passed": verified,
        "factorization": f,
    }));
    art.csv = Some(csv);
    Ok(Outcome {
        artifact: art,
        summary,
        verified,
    })
}

/// All `(r, l, s)` with `0 < r <= r(E)` and other coordinates in `[-B, B]`.
fn box_candidates(lat: &Lattice, r_max: i64, b: i64) -> Vec<LatVec> {
    let n = lat.rank();
    let mut out = Vec::new();
    let mut c = vec![-b; n];
    c[0] = 1;
    loop {
        out.push(lat.vector(c.clone()).expect("rank matches"));
        let mut k = n;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            let hi = if k == 0 { r_max } else { b };
            if c[k] < hi {
                c[k] += 1;
                for j in k + 1..n {
                    c[j] = -b;
                }
                break;
            }
        }
    }
}

pub fn threshold(cfg: &JobConfig) -> Result<Outcome, CliError> {
    let lat = cfg.lattice()?;
    let ns_rank = lat
        .mukai_ns()
        .ok_or_else(|| CliError::core(mukai_core::Error::NotMukai))?
        .rank();
    let v_e = match &cfg.ve {
        Some(s) => vector(&lat, s, "--ve")?,
        None => return Err(bad("threshold needs --ve".into())),
    };
    let h = match &cfg.h {
        Some(s) => rationals(s, "--h")?,
        None => {
            let mut h = vec![rational_from_str("0").expect("zero"); ns_rank];
            if let Some(first) = h.first_mut() {
                *first = rational_from_str("1").expect("one");
            }
            h
        }
    };
    let cands = match &cfg.cands {
        Some(s) => s
            .split(';')
            .filter(|t| !t.trim().is_empty())
            .map(|t| vector(&lat, t, "--cands"))
            .collect::<Result<Vec<_>, _>>()?,
        None => box_candidates(&lat, v_e.coords()[0].max(1), cfg.root_bound.unwrap_or(3)),
    };
    let cert = large_volume_threshold(&v_e, &cands, &h).map_err(CliError::core)?;
    // confirm at the boundary by direct evaluation of the inequality
    let mut verified = true;
    for (c, cc) in cands.iter().zip(&cert.candidates) {
        if let ThresholdBranch::Constraining { .. } = cc.branch {
            for n in cert.n0..=cert.n0 + 100 {
                if inequality_holds(&v_e, c, &h, n).map_err(CliError::core)? != Some(true) {
                    verified = false;
                }
            }
        }
    }
    if cert.n0 > 1 {
        let mut fails = false;
        for c in &cands {
            if inequality_holds(&v_e, c, &h, cert.n0 - 1).map_err(CliError::core)? == Some(false) {
                fails = true;
            }
        }
        verified &= fails;
    }
    let summary = format!(
        "n0 = {} over {} candidates: {}",
        cert.n0,
        cands.len(),
        if verified { "confirmed" } else { "NOT confirmed" }
    );
    let mut csv = String::from("candidate,mu,nu,branch,bound,n_min\n");
    for c in &cert.candidates {
        let coords: Vec<String> = c.candidate.iter().map(|a| a.to_string()).collect();
        let (branch, bound, n) = match &c.branch {
            ThresholdBranch::Constraining { bound, n_min } => {
                ("constraining", rational_to_string(bound), n_min.to_string())
            }
            ThresholdBranch::EqualSlope => ("equal_slope", String::new(), String::new()),
            ThresholdBranch::SlopeAbove => ("slope_above", String::new(), String::new()),
        };
        let _ = writeln!(
            csv,
            "\"{}\",{},{},{branch},{bound},{n}",
            coords.join(","),
            rational_to_string(&c.mu),
            rational_to_string(&c.nu)
        );
    }
    let mut art = Artifact::json_only(&json!({ "certificate": cert, "confirmed": verified }));
    art.csv = Some(csv);
    Ok(Outcome {
        artifact: art,
        summary,
        verified,
    })
}

pub fn degenerate(cfg: &JobConfig) -> Result<Outcome, CliError> {
    let lat = cfg.lattice()?;
    let ch = chart(cfg, &lat)?;
    let (x, y) = point(cfg, &ch)?;
    let (t0, t1) = match &cfg.t_range {
        Some(r) => parse_range(r, "--t-range")?,
        None => (1.0, 4.0),
    };
    if t0 <= 0.0 {
        return Err(bad("--t-range must lie in t > 0".into()));
    }
    let path = linear_degeneration(&ch, &x, &y).map_err(CliError::core)?;
    let n = cfg.samples.unwrap_or(31).max(2);
    let mut rows = Vec::with_capacity(n);
    let mut csv = String::from("t,y_square,in_p0,lower_bound\n");
    for i in 0..n {
        let t = t0 + (t1 - t0) * i as f64 / (n - 1) as f64;
        let pt = path.point_at(&ch, t).map_err(CliError::core)?;
        let (inside, cert) = tube_point_in_p0(&pt).map_err(CliError::core)?;
        let _ = writeln!(csv, "{t},{},{inside},{}", pt.y_square(), cert.lower_bound);
        rows.push(json!({ "t": t, "y_square": pt.y_square(), "in_p0": inside, "lower_bound": cert.lower_bound }));
    }
    let events = wall_crossings(&ch, &path, t0, t1).map_err(CliError::core)?;
    let summary = format!("{n} samples on t ∈ [{t0}, {t1}], {} wall events", events.len());
    let mut art = Artifact::json_only(&json!({ "path": path, "samples": rows, "events": events }));
    art.csv = Some(csv);
    ok(art, summary)
}

pub fn beta_search(cfg: &JobConfig) -> Result<Outcome, CliError> {
    let lat = cfg.lattice()?;
    let c = match &cfg.c_root {
        Some(s) => parse_list::<i64>(s, "--c-root")?,
        None => return Err(bad("beta-search needs --c-root".into())),
    };
    let eta = match &cfg.eta {
        Some(s) => rationals(s, "--eta")?,
        None => return Err(bad("beta-search needs --eta".into())),
    };
    let k = cfg.k.unwrap_or(0);
    let b = cfg.root_bound.unwrap_or(4);
    let cert = boundary_beta_search(&lat, &c, k, &eta, b).map_err(CliError::core)?;
    let verified = verify_beta(&lat, &c, k, &eta, &cert).map_err(CliError::core)?;
    let beta: Vec<String> = cert.beta.iter().map(rational_to_string).collect();
    let summary = format!(
        "β = ({}) with β.C + k = {} over {} candidate roots: {}",
        beta.join(", "),
        rational_to_string(&cert.window),
        cert.candidates.len(),
        if verified { "verified" } else { "NOT verified" }
    );
    let mut csv = String::from("candidate\n");
    for c in &cert.candidates {
        let s: Vec<String> = c.iter().map(|a| a.to_string()).collect();
        let _ = writeln!(csv, "\"{}\"", s.join(","));
    }
    let mut art = Artifact::json_only(&json!({ "certificate": cert, "verified": verified }));
    art.csv = Some(csv);
    Ok(Outcome {
        artifact: art,
        summary,
        verified,
    })
}
