//! Versioned JSON files for states and pipelines.
//!
//! Numbers are written with 17 significant digits so every `f64` survives a
//! write/read cycle bit for bit.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::gates::{ControlledOp, Pipeline};
use crate::tensor::{PureState, UnitaryMatrix};

pub const STATE_FORMAT_VERSION: u64 = 1;
pub const PIPELINE_FORMAT_VERSION: u64 = 1;

/// Norm tolerance applied when loading a state file.
pub const FILE_NORM_TOL: f64 = 1e-9;

/// Unitarity tolerance applied to branches loaded from a pipeline file.
pub const FILE_UNITARITY_TOL: f64 = 1e-9;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    #[allow(dead_code)]
    version: u64,
    n: usize,
    d: usize,
    amplitudes: Vec<[f64; 2]>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PipelineFile {
    #[allow(dead_code)]
    version: u64,
    ops: Vec<OpEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct OpEntry {
    control: usize,
    target: usize,
    branches: Vec<Vec<Vec<[f64; 2]>>>,
}

fn number(x: f64) -> String {
    format!("{x:.16e}")
}

fn pair(z: Complex64) -> String {
    format!("[{}, {}]", number(z.re), number(z.im))
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Parses `text`, checks the `version` field, then decodes into `T`.
fn decode<T: DeserializeOwned>(text: &str, path: &Path, expected: u64) -> Result<T> {
    let parse_err = |message: String| Error::Parse {
        path: path.to_path_buf(),
        message,
    };
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))?;
    let version = value
        .get("version")
        .ok_or_else(|| parse_err("missing 'version' field".into()))?
        .as_u64()
        .ok_or_else(|| parse_err("'version' must be a non-negative integer".into()))?;
    if version != expected {
        return Err(Error::UnsupportedVersion {
            found: version,
            expected,
        });
    }
    serde_json::from_value(value).map_err(|e| parse_err(e.to_string()))
}

/// Serializes a state in the on-disk format.
pub fn format_state(state: &PureState) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{{");
    let _ = writeln!(out, "  \"version\": {STATE_FORMAT_VERSION},");
    let _ = writeln!(out, "  \"n\": {},", state.n());
    let _ = writeln!(out, "  \"d\": {},", state.d());
    let _ = writeln!(out, "  \"amplitudes\": [");
    let amps = state.amplitudes();
    for (i, z) in amps.iter().enumerate() {
        let sep = if i + 1 < amps.len() { "," } else { "" };
        let _ = writeln!(out, "    {}{sep}", pair(*z));
    }
    let _ = writeln!(out, "  ]");
    let _ = writeln!(out, "}}");
    out
}

/// Decodes a state document; `path` only labels diagnostics.
pub fn parse_state(text: &str, path: &Path, norm_tolerance: f64) -> Result<PureState> {
    let file: StateFile = decode(text, path, STATE_FORMAT_VERSION)?;
    let amplitudes = file
        .amplitudes
        .iter()
        .map(|&[re, im]| Complex64::new(re, im))
        .collect();
    PureState::with_norm_tolerance(file.n, file.d, amplitudes, norm_tolerance)
}

pub fn write_state(state: &PureState, path: impl AsRef<Path>) -> Result<()> {
    write_text(path.as_ref(), &format_state(state))
}

pub fn read_state(path: impl AsRef<Path>) -> Result<PureState> {
    read_state_with_tolerance(path, FILE_NORM_TOL)
}

pub fn read_state_with_tolerance(path: impl AsRef<Path>, norm_tolerance: f64) -> Result<PureState> {
    let path = path.as_ref();
    parse_state(&read_text(path)?, path, norm_tolerance)
}

/// Serializes a pipeline, listing ops in application order.
pub fn format_pipeline(pipeline: &Pipeline) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{{");
    let _ = writeln!(out, "  \"version\": {PIPELINE_FORMAT_VERSION},");
    let _ = writeln!(out, "  \"ops\": [");
    let ops = pipeline.ops();
    for (oi, op) in ops.iter().enumerate() {
        let _ = writeln!(out, "    {{");
        let _ = writeln!(out, "      \"control\": {},", op.control());
        let _ = writeln!(out, "      \"target\": {},", op.target());
        let _ = writeln!(out, "      \"branches\": [");
        let branches = op.branches();
        for (bi, u) in branches.iter().enumerate() {
            let dim = u.dim();
            let rows: Vec<String> = (0..dim)
                .map(|r| {
                    let cells: Vec<String> = (0..dim).map(|c| pair(u.get(r, c))).collect();
                    format!("          [{}]", cells.join(", "))
                })
                .collect();
            let sep = if bi + 1 < branches.len() { "," } else { "" };
            let _ = writeln!(out, "        [\n{}\n        ]{sep}", rows.join(",\n"));
        }
        let _ = writeln!(out, "      ]");
        let sep = if oi + 1 < ops.len() { "," } else { "" };
        let _ = writeln!(out, "    }}{sep}");
    }
    let _ = writeln!(out, "  ]");
    let _ = writeln!(out, "}}");
    out
}

pub fn parse_pipeline(text: &str, path: &Path) -> Result<Pipeline> {
    let file: PipelineFile = decode(text, path, PIPELINE_FORMAT_VERSION)?;
    let mut ops = Vec::with_capacity(file.ops.len());
    for entry in file.ops {
        let mut branches = Vec::with_capacity(entry.branches.len());
        for rows in entry.branches {
            let dim = rows.len();
            if rows.iter().any(|r| r.len() != dim) {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    message: format!("branch matrix with {dim} rows is not square"),
                });
            }
            let entries = rows
                .iter()
                .flatten()
                .map(|&[re, im]| Complex64::new(re, im))
                .collect();
            branches.push(UnitaryMatrix::with_tolerance(dim, entries, FILE_UNITARITY_TOL)?);
        }
        ops.push(ControlledOp::new(entry.control, entry.target, branches)?);
    }
    Ok(Pipeline::new(ops))
}

pub fn write_pipeline(pipeline: &Pipeline, path: impl AsRef<Path>) -> Result<()> {
    write_text(path.as_ref(), &format_pipeline(pipeline))
}

pub fn read_pipeline(path: impl AsRef<Path>) -> Result<Pipeline> {
    let path = path.as_ref();
    parse_pipeline(&read_text(path)?, path)
}
