//! Word-level output writers. One subtitle cue per word.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::FormatError;
use crate::types::AlignedSegment;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Srt,
    Vtt,
    Json,
    Tsv,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "srt" => Ok(Self::Srt),
            "vtt" => Ok(Self::Vtt),
            "json" => Ok(Self::Json),
            "tsv" => Ok(Self::Tsv),
            other => Err(format!("unknown output format {other:?} (expected srt, vtt, json or tsv)")),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct JsonDoc {
    segments: Vec<AlignedSegment>,
}

fn millis(seconds: f64) -> u64 {
    (seconds.max(0.0) * 1000.0).round() as u64
}

/// `HH:MM:SS` followed by `sep` and milliseconds.
fn timestamp(seconds: f64, sep: char) -> String {
    let ms = millis(seconds);
    format!(
        "{:02}:{:02}:{:02}{sep}{:03}",
        ms / 3_600_000,
        ms / 60_000 % 60,
        ms / 1000 % 60,
        ms % 1000
    )
}

pub fn render(segments: &[AlignedSegment], format: OutputFormat) -> String {
    let words = segments.iter().flat_map(|s| s.words.iter());
    let mut out = String::new();
    match format {
        OutputFormat::Srt => {
            for (i, w) in words.enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                let _ = writeln!(
                    out,
                    "{}\n{} --> {}\n{}",
                    i + 1,
                    timestamp(w.start, ','),
                    timestamp(w.end, ','),
                    w.word
                );
            }
        }
        OutputFormat::Vtt => {
            out.push_str("WEBVTT\n");
            for w in words {
                let _ = write!(
                    out,
                    "\n{} --> {}\n{}\n",
                    timestamp(w.start, '.'),
                    timestamp(w.end, '.'),
                    w.word
                );
            }
        }
        OutputFormat::Tsv => {
            out.push_str("start\tend\tword\tscore\tinferred\n");
            for w in words {
                let _ = writeln!(
                    out,
                    "{:.3}\t{:.3}\t{}\t{:.3}\t{}",
                    w.start, w.end, w.word, w.score, w.inferred
                );
            }
        }
        OutputFormat::Json => {
            let doc = JsonDoc {
                segments: segments.to_vec(),
            };
            out = serde_json::to_string_pretty(&doc).expect("output serializes");
            out.push('\n');
        }
    }
    out
}

pub fn write_outputs(
    path: impl AsRef<Path>,
    segments: &[AlignedSegment],
    format: OutputFormat,
) -> Result<(), FormatError> {
    let path = path.as_ref();
    std::fs::write(path, render(segments, format)).map_err(|e| FormatError::io(path, e))
}

/// Parses the JSON output format back into segments.
pub fn parse_json_output(text: &str) -> Result<Vec<AlignedSegment>, serde_json::Error> {
    serde_json::from_str::<JsonDoc>(text).map(|d| d.segments)
}

pub fn read_json_output(path: impl AsRef<Path>) -> Result<Vec<AlignedSegment>, FormatError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| FormatError::io(path, e))?;
    parse_json_output(&text).map_err(|e| FormatError::Json {
        path: path.to_owned(),
        source: e,
    })
}
