//! Job configuration: a JSON file merged with command-line flags (flags win).

use crate::CliError;
use anyhow::{anyhow, Context};
use clap::{Args, ValueEnum};
use mukai_core::lattice::LatticeFile;
use mukai_core::Lattice;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Svg,
}

/// Every parameter any subcommand reads. Unset fields fall back to the
/// config file, then to per-command defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    /// Inline Gram matrix as JSON (`[[0,1],[1,0]]`) or a path to a lattice file.
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lattice: Option<String>,
    /// Named lattice, e.g. `U+<2>`, `mukai_rank1(3)`, `mukai(U)`.
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    /// Height window for isotropic vectors.
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub height: Option<i64>,
    /// Coordinate bound for roots and search boxes.
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub root_bound: Option<i64>,
    /// Maximal word length in the generators.
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub word_depth: Option<usize>,
    /// Tube box `x_lo:x_hi,...;y_lo:y_hi,...` in chart coordinates.
    #[arg(long = "box", global = true)]
    #[serde(rename = "box", skip_serializing_if = "Option::is_none")]
    pub region: Option<String>,
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    /// Isotropic vector of the cusp (defaults to the point class).
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v: Option<String>,
    /// Tube point `x_1,...;y_1,...` in chart coordinates.
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<String>,
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    /// Parameter range `a:b`.
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_range: Option<String>,
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub winding: Option<i64>,
    /// Mukai vector of the family, `r,l_1,...,s`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ve: Option<String>,
    /// Candidate sub-object vectors separated by `;`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cands: Option<String>,
    /// Polarization, rational coordinates separated by `,`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_root: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<i64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<String>,
    /// Add the `Γ_0^+(n)` generators on `U+<2n>` lattices (default true).
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fricke: Option<bool>,
    /// Census over all divisibilities instead of standard vectors only.
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub all_div: Option<bool>,
    /// Slice axes for SVG output, indices into `(x_1..x_m, y_1..y_m)`.
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axes: Option<String>,
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
}

impl JobConfig {
    /// Config file values overridden by every flag that was given.
    pub fn merged(file: Option<&Path>, flags: &JobConfig) -> Result<JobConfig, CliError> {
        let mut base = match file {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .with_context(|| format!("reading config {}", p.display()))
                    .map_err(CliError::BadInput)?;
                let v: Value = serde_json::from_str(&text).map_err(|e| {
                    CliError::BadInput(anyhow!(
                        "{}: line {}, column {}: {e}",
                        p.display(),
                        e.line(),
                        e.column()
                    ))
                })?;
                match v {
                    Value::Object(m) => m,
                    _ => {
                        return Err(CliError::BadInput(anyhow!(
                            "{}: config must be a JSON object",
                            p.display()
                        )))
                    }
                }
            }
            None => Map::new(),
        };
        if let Value::Object(over) = serde_json::to_value(flags).expect("config serializes") {
            base.extend(over);
        }
        let cfg: JobConfig =
            serde_json::from_value(Value::Object(base)).map_err(|e| CliError::BadInput(anyhow!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::BadInput(anyhow!(m)));
        if let Some(t) = self.tol {
            if !(t > 0.0) || !t.is_finite() {
                return bad(format!("--tol must be positive, got {t}"));
            }
        }
        for (name, v) in [("height", self.height), ("root-bound", self.root_bound)] {
            if let Some(v) = v {
                if v < 1 {
                    return bad(format!("--{name} must be at least 1, got {v}"));
                }
            }
        }
        for (name, v) in [
            ("word-depth", self.word_depth),
            ("steps", self.steps),
            ("samples", self.samples),
            ("grid", self.grid),
        ] {
            if v == Some(0) {
                return bad(format!("--{name} must be at least 1"));
            }
        }
        if self.lattice.is_some() && self.preset.is_some() {
            return bad("give either --lattice or --preset, not both".into());
        }
        Ok(())
    }

    pub fn lattice(&self) -> Result<Lattice, CliError> {
        match (&self.lattice, &self.preset) {
            (Some(source), None) => {
                let source = source.trim();
                if source.starts_with('[') {
                    let gram: Vec<Vec<i64>> =
                        serde_json::from_str(source).map_err(|e| CliError::BadInput(anyhow!("--lattice: {e}")))?;
                    Lattice::new("inline", gram).map_err(CliError::core)
                } else {
                    let text = std::fs::read_to_string(source)
                        .with_context(|| format!("reading lattice file {source}"))
                        .map_err(CliError::BadInput)?;
                    let file: LatticeFile = serde_json::from_str(&text).map_err(|e| {
                        CliError::BadInput(anyhow!("{source}: line {}, column {}: {e}", e.line(), e.column()))
                    })?;
                    Lattice::from_file(&file).map_err(CliError::core)
                }
            }
            (None, Some(p)) => Lattice::preset(p).map_err(CliError::core),
            (None, None) => Err(CliError::BadInput(anyhow!(
                "no lattice given (use --lattice or --preset)"
            ))),
            (Some(_), Some(_)) => unreachable!("validated"),
        }
    }

    /// Canonical JSON of the merged configuration, minus the output path.
    pub fn canonical(&self, command: &str) -> Value {
        let mut c = self.clone();
        c.out = None;
        let mut m = Map::new();
        m.insert("command".into(), Value::String(command.into()));
        m.insert("config".into(), serde_json::to_value(&c).expect("config serializes"));
        Value::Object(m)
    }
}

pub fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<T>()
                .map_err(|_| CliError::BadInput(anyhow!("{what}: cannot parse `{t}`")))
        })
        .collect()
}

/// `a,b,...;c,d,...` as two lists.
pub fn parse_pair(s: &str, what: &str) -> Result<(Vec<f64>, Vec<f64>), CliError> {
    let (a, b) = s
        .split_once(';')
        .ok_or_else(|| CliError::BadInput(anyhow!("{what}: expected `x...;y...`")))?;
    Ok((parse_list(a, what)?, parse_list(b, what)?))
}

pub fn parse_range(s: &str, what: &str) -> Result<(f64, f64), CliError> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| CliError::BadInput(anyhow!("{what}: expected `lo:hi`, got `{s}`")))?;
    let p = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| CliError::BadInput(anyhow!("{what}: cannot parse `{t}`")))
    };
    let (lo, hi) = (p(a)?, p(b)?);
    if !(lo < hi) {
        return Err(CliError::BadInput(anyhow!("{what}: need lo < hi, got `{s}`")));
    }
    Ok((lo, hi))
}

/// `x_lo:x_hi,...;y_lo:y_hi,...`.
pub fn parse_box(s: &str) -> Result<(Vec<(f64, f64)>, Vec<(f64, f64)>), CliError> {
    let (a, b) = s
        .split_once(';')
        .ok_or_else(|| CliError::BadInput(anyhow!("--box: expected `x ranges;y ranges`")))?;
    let ranges =
        |t: &str| -> Result<Vec<(f64, f64)>, CliError> { t.split(',').map(|r| parse_range(r, "--box")).collect() };
    Ok((ranges(a)?, ranges(b)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_round_trips() {
        let cfg = JobConfig {
            preset: Some("U+<2>".into()),
            height: Some(20),
            tol: Some(1e-6),
            format: Some(Format::Csv),
            region: Some("0:1;1:2".into()),
            ..Default::default()
        };
        let text = serde_json::to_string(&cfg).unwrap();
        let back: JobConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(cfg, back);
    }

    #[test]
    fn flags_override_file_values() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("job.json");
        std::fs::write(&path, r#"{"preset": "U", "height": 3, "tol": 0.5}"#).unwrap();
        let flags = JobConfig {
            height: Some(7),
            ..Default::default()
        };
        let cfg = JobConfig::merged(Some(&path), &flags).unwrap();
        assert_eq!(cfg.preset.as_deref(), Some("U"));
        assert_eq!(cfg.height, Some(7));
        assert_eq!(cfg.tol, Some(0.5));
    }

    #[test]
    fn invalid_values_are_rejected() {
        let bad = JobConfig {
            tol: Some(-1.0),
            ..Default::default()
        };
        assert!(JobConfig::merged(None, &bad).is_err());
        let bad = JobConfig {
            root_bound: Some(0),
            ..Default::default()
        };
        assert!(JobConfig::merged(None, &bad).is_err());
        assert!(parse_box("0:1").is_err());
        assert_eq!(parse_box("0:1,2:3;1:2,0:1").unwrap().1, vec![(1.0, 2.0), (0.0, 1.0)]);
    }
}
