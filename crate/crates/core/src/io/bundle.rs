//! Interchange bundle: a JSON manifest plus sidecar binary files.
//!
//! Binary files start with one JSON header line terminated by `\n`, followed
//! by little-endian `f32` values.
//!
//! Score file header: `{"version","frame_period","origin","count"}`, then
//! `count` values.
//!
//! Logits file header: `{"version","frame_period","origin","T","K","labels","blank_index"}`,
//! then `T * K` values, row-major (one row per frame).

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::FormatError;
use crate::types::{LogitsMatrix, ScoreTrack, SpeechSegment};

pub const FORMAT_VERSION: &str = "1.0";
const SUPPORTED_MAJOR: &str = "1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChunkEntry {
    /// `[start, end]` in seconds.
    pub span: [f64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transcript: Option<String>,
    /// Logits file, relative to the manifest's directory.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub logits: Option<String>,
}

impl ChunkEntry {
    pub fn segment(&self) -> SpeechSegment {
        SpeechSegment {
            start: self.span[0],
            end: self.span[1],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub version: String,
    pub recording_id: String,
    pub audio_duration_s: f64,
    /// Score file, relative to the manifest's directory.
    pub vad: String,
    #[serde(default)]
    pub chunks: Vec<ChunkEntry>,
}

/// A manifest with every referenced file loaded and validated.
#[derive(Debug, Clone, PartialEq)]
pub struct InterchangeBundle {
    pub manifest: Manifest,
    pub scores: ScoreTrack,
    /// Parallel to `manifest.chunks`.
    pub logits: Vec<Option<LogitsMatrix>>,
}

impl InterchangeBundle {
    /// Logits of the chunk whose span matches `span` to the microsecond.
    pub fn logits_for(&self, span: &SpeechSegment) -> Option<&LogitsMatrix> {
        let key = |a: f64| (a * 1e6).round() as i64;
        self.manifest
            .chunks
            .iter()
            .position(|c| key(c.span[0]) == key(span.start) && key(c.span[1]) == key(span.end))
            .and_then(|i| self.logits[i].as_ref())
    }
}

fn check_version(path: &Path, version: &str) -> Result<(), FormatError> {
    if version.split('.').next() == Some(SUPPORTED_MAJOR) {
        Ok(())
    } else {
        Err(FormatError::UnsupportedVersion {
            path: path.to_owned(),
            version: version.to_owned(),
        })
    }
}

pub fn read_bundle(path: impl AsRef<Path>) -> Result<InterchangeBundle, FormatError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| FormatError::io(path, e))?;
    let manifest: Manifest = serde_json::from_str(&text).map_err(|e| FormatError::Json {
        path: path.to_owned(),
        source: e,
    })?;
    check_version(path, &manifest.version)?;
    for (i, c) in manifest.chunks.iter().enumerate() {
        if !(c.span[0] < c.span[1]) {
            return Err(FormatError::malformed(
                path,
                format!("chunks[{i}].span"),
                "start must be before end",
            ));
        }
    }
    let base = path.parent().unwrap_or(Path::new("."));
    let scores = read_score_file(base.join(&manifest.vad))?;
    let logits = manifest
        .chunks
        .iter()
        .map(|c| c.logits.as_ref().map(|f| read_logits_file(base.join(f))).transpose())
        .collect::<Result<_, _>>()?;
    Ok(InterchangeBundle {
        manifest,
        scores,
        logits,
    })
}

/// Splits a sidecar file into its parsed header and payload bytes.
fn split_header(path: &Path, bytes: &[u8]) -> Result<(Value, Vec<f32>), FormatError> {
    let nl = bytes
        .iter()
        .position(|&b| b == b'\n')
        .ok_or_else(|| FormatError::malformed(path, "header", "no newline-terminated header line"))?;
    let header: Value = serde_json::from_slice(&bytes[..nl])
        .map_err(|e| FormatError::malformed(path, "header", e.to_string()))?;
    if !header.is_object() {
        return Err(FormatError::malformed(path, "header", "not a JSON object"));
    }
    let version = header
        .get("version")
        .and_then(Value::as_str)
        .ok_or_else(|| FormatError::malformed(path, "version", "missing or not a string"))?;
    check_version(path, version)?;
    let payload = &bytes[nl + 1..];
    if payload.len() % 4 != 0 {
        return Err(FormatError::PayloadLengthMismatch {
            path: path.to_owned(),
            expected: None,
            actual: payload.len(),
        });
    }
    let values = payload
        .chunks_exact(4)
        .map(|b| f32::from_le_bytes([b[0], b[1], b[2], b[3]]))
        .collect();
    Ok((header, values))
}

fn field_f64(path: &Path, h: &Value, name: &str) -> Result<f64, FormatError> {
    h.get(name)
        .and_then(Value::as_f64)
        .ok_or_else(|| FormatError::malformed(path, name, "missing or not a number"))
}

fn field_usize(path: &Path, h: &Value, name: &str) -> Result<usize, FormatError> {
    h.get(name)
        .and_then(Value::as_u64)
        .map(|v| v as usize)
        .ok_or_else(|| FormatError::malformed(path, name, "missing or not a non-negative integer"))
}

fn check_len(path: &Path, expected: usize, values: &[f32]) -> Result<(), FormatError> {
    if values.len() == expected {
        Ok(())
    } else {
        Err(FormatError::PayloadLengthMismatch {
            path: path.to_owned(),
            expected: Some(expected * 4),
            actual: values.len() * 4,
        })
    }
}

pub fn read_score_file(path: impl AsRef<Path>) -> Result<ScoreTrack, FormatError> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| FormatError::io(path, e))?;
    let (h, values) = split_header(path, &bytes)?;
    let frame_period = field_f64(path, &h, "frame_period")?;
    let origin = field_f64(path, &h, "origin")?;
    let count = field_usize(path, &h, "count")?;
    check_len(path, count, &values)?;
    ScoreTrack::new(values.into_iter().map(f64::from).collect(), frame_period, origin)
        .map_err(|e| FormatError::Invalid { path: path.to_owned(), source: e })
}

pub fn read_logits_file(path: impl AsRef<Path>) -> Result<LogitsMatrix, FormatError> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| FormatError::io(path, e))?;
    let (h, values) = split_header(path, &bytes)?;
    let frame_period = field_f64(path, &h, "frame_period")?;
    let origin = field_f64(path, &h, "origin")?;
    let frames = field_usize(path, &h, "T")?;
    let classes = field_usize(path, &h, "K")?;
    let labels: Vec<String> = h
        .get("labels")
        .and_then(Value::as_array)
        .and_then(|a| a.iter().map(|v| v.as_str().map(str::to_owned)).collect())
        .ok_or_else(|| FormatError::malformed(path, "labels", "missing or not an array of strings"))?;
    if labels.len() != classes {
        return Err(FormatError::malformed(
            path,
            "labels",
            format!("{} labels for K = {classes}", labels.len()),
        ));
    }
    let blank = field_usize(path, &h, "blank_index")?;
    if blank >= classes {
        return Err(FormatError::malformed(
            path,
            "blank_index",
            format!("{blank} is not below K = {classes}"),
        ));
    }
    check_len(path, frames * classes, &values)?;
    LogitsMatrix::new(values, frames, labels, blank, frame_period, origin)
        .map_err(|e| FormatError::Invalid { path: path.to_owned(), source: e })
}

#[derive(Serialize)]
struct ScoreHeader<'a> {
    version: &'a str,
    frame_period: f64,
    origin: f64,
    count: usize,
}

#[derive(Serialize)]
struct LogitsHeader<'a> {
    version: &'a str,
    frame_period: f64,
    origin: f64,
    #[serde(rename = "T")]
    frames: usize,
    #[serde(rename = "K")]
    classes: usize,
    labels: &'a [String],
    blank_index: usize,
}

fn encode<H: Serialize>(header: &H, values: impl Iterator<Item = f32>) -> Vec<u8> {
    let mut out = serde_json::to_vec(header).expect("header serializes");
    out.push(b'\n');
    for v in values {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

/// Scores are stored as `f32`.
pub fn write_score_file(path: impl AsRef<Path>, track: &ScoreTrack) -> Result<(), FormatError> {
    let header = ScoreHeader {
        version: FORMAT_VERSION,
        frame_period: track.frame_period(),
        origin: track.origin(),
        count: track.len(),
    };
    let bytes = encode(&header, track.scores().iter().map(|&s| s as f32));
    let path = path.as_ref();
    fs::write(path, bytes).map_err(|e| FormatError::io(path, e))
}

pub fn write_logits_file(path: impl AsRef<Path>, logits: &LogitsMatrix) -> Result<(), FormatError> {
    let header = LogitsHeader {
        version: FORMAT_VERSION,
        frame_period: logits.frame_period(),
        origin: logits.origin(),
        frames: logits.frames(),
        classes: logits.classes(),
        labels: logits.labels(),
        blank_index: logits.blank(),
    };
    let bytes = encode(&header, logits.values().iter().copied());
    let path = path.as_ref();
    fs::write(path, bytes).map_err(|e| FormatError::io(path, e))
}

pub fn write_manifest(path: impl AsRef<Path>, manifest: &Manifest) -> Result<(), FormatError> {
    let path = path.as_ref();
    let mut text = serde_json::to_string_pretty(manifest).expect("manifest serializes");
    text.push('\n');
    fs::write(path, text).map_err(|e| FormatError::io(path, e))
}

/// Path of a manifest-relative file.
pub fn resolve(manifest_path: &Path, relative: &str) -> PathBuf {
    manifest_path.parent().unwrap_or(Path::new(".")).join(relative)
}
