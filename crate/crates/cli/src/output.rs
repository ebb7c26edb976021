//! Output envelopes and atomic file writes.

use crate::config::Format;
use crate::CliError;
use anyhow::{anyhow, Context};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::Path;

pub const TOOL: &str = "mukai-kit";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

pub fn config_hash(canonical: &Value) -> String {
    sha256_hex(serde_json::to_string(canonical).expect("json").as_bytes())
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    tool: &'static str,
    version: &'static str,
    config_hash: &'a str,
    #[serde(flatten)]
    canonical: &'a Value,
    result: &'a T,
}

/// What a command produced, ready to be rendered in one of the formats.
pub struct Artifact {
    pub json: Value,
    pub csv: Option<String>,
    pub svg: Option<String>,
}

impl Artifact {
    pub fn json_only<T: Serialize>(result: &T) -> Self {
        Artifact {
            json: serde_json::to_value(result).expect("result serializes"),
            csv: None,
            svg: None,
        }
    }

    pub fn render(&self, format: Format, canonical: &Value, command: &str) -> Result<String, CliError> {
        let hash = config_hash(canonical);
        let banner = format!("{TOOL} {VERSION} config_hash={hash}");
        match format {
            Format::Json => {
                let env = Envelope {
                    tool: TOOL,
                    version: VERSION,
                    config_hash: &hash,
                    canonical,
                    result: &self.json,
                };
                let mut s = serde_json::to_string_pretty(&env).expect("json");
                s.push('\n');
                Ok(s)
            }
            Format::Csv => {
                let body = self
                    .csv
                    .as_ref()
                    .ok_or_else(|| CliError::BadInput(anyhow!("`{command}` has no CSV output")))?;
                Ok(format!("# {banner}\n{body}"))
            }
            Format::Svg => {
                let body = self
                    .svg
                    .as_ref()
                    .ok_or_else(|| CliError::BadInput(anyhow!("`{command}` has no SVG output")))?;
                // the comment goes after the XML prolog if there is one
                match body.strip_prefix("<?xml") {
                    Some(rest) => {
                        let end = rest.find("?>").map(|i| i + 2).unwrap_or(0);
                        Ok(format!("<?xml{}\n<!-- {banner} -->{}", &rest[..end], &rest[end..]))
                    }
                    None => Ok(format!("<!-- {banner} -->\n{body}")),
                }
            }
        }
    }
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory, so readers never observe a partial file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let io = |e: anyhow::Error| CliError::Io(e);
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating temporary file in {}", dir.display()))
        .map_err(io)?;
    tmp.write_all(contents.as_bytes())
        .context("writing output")
        .map_err(io)?;
    tmp.as_file().sync_all().context("syncing output").map_err(io)?;
    tmp.persist(path)
        .map_err(|e| anyhow!("renaming into {}: {}", path.display(), e.error))
        .map_err(io)?;
    Ok(())
}
