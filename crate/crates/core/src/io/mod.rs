//! File formats: the interchange bundle, reference alignments and outputs.

mod bundle;
mod ctm;
mod output;

pub use bundle::{
    read_bundle, read_logits_file, read_score_file, resolve, write_logits_file, write_manifest,
    write_score_file, ChunkEntry, InterchangeBundle, Manifest, FORMAT_VERSION,
};
pub use ctm::{parse_ctm, read_ctm};
pub use output::{parse_json_output, read_json_output, render, write_outputs, OutputFormat};

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::types::InvariantError;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: invalid JSON: {source}", path.display())]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("{}: malformed header field `{field}`: {detail}", path.display())]
    MalformedHeader {
        path: PathBuf,
        field: String,
        detail: String,
    },
    #[error("{}: payload is {actual} bytes, expected {}", path.display(), expected.map_or("a multiple of 4".to_string(), |e| e.to_string()))]
    PayloadLengthMismatch {
        path: PathBuf,
        expected: Option<usize>,
        actual: usize,
    },
    #[error("{}: unsupported format version {version:?}", path.display())]
    UnsupportedVersion { path: PathBuf, version: String },
    #[error("{}: {source}", path.display())]
    Invalid {
        path: PathBuf,
        #[source]
        source: InvariantError,
    },
    #[error("{}:{line}: {detail}", path.display())]
    Reference {
        path: PathBuf,
        line: usize,
        detail: String,
    },
}

impl FormatError {
    fn io(path: &Path, source: std::io::Error) -> Self {
        FormatError::Io {
            path: path.to_owned(),
            source,
        }
    }

    fn malformed(path: &Path, field: impl Into<String>, detail: impl Into<String>) -> Self {
        FormatError::MalformedHeader {
            path: path.to_owned(),
            field: field.into(),
            detail: detail.into(),
        }
    }
}
