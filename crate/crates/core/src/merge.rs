//! Greedy merge of neighbouring speech segments into ASR-sized chunks.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::types::{validate_segments, SegmentError, SpeechSegment};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MergeError {
    #[error("invalid segment list: {0}")]
    InvalidSegments(#[from] SegmentError),
    #[error("merge threshold must be finite and > 0, got {0}")]
    InvalidThreshold(f64),
}

/// Consecutive segments transcribed as one contiguous audio window.
///
/// The window includes the silence between constituents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MergedChunk {
    pub span: SpeechSegment,
    pub segments: Vec<SpeechSegment>,
}

impl MergedChunk {
    fn open(first: SpeechSegment) -> Self {
        Self {
            span: first,
            segments: vec![first],
        }
    }
}

/// Left-to-right greedy grouping: a segment joins the open chunk while
/// `segment.end - chunk.start <= tau`, otherwise it opens a new chunk.
///
/// A lone segment longer than `tau` becomes its own chunk unchanged.
pub fn merge_segments(segs: &[SpeechSegment], tau: f64) -> Result<Vec<MergedChunk>, MergeError> {
    validate_segments(segs)?;
    if !(tau.is_finite() && tau > 0.0) {
        return Err(MergeError::InvalidThreshold(tau));
    }
    let mut chunks: Vec<MergedChunk> = Vec::new();
    for &s in segs {
        match chunks.last_mut() {
            Some(c) if s.end - c.span.start <= tau => {
                c.span.end = s.end;
                c.segments.push(s);
            }
            _ => chunks.push(MergedChunk::open(s)),
        }
    }
    Ok(chunks)
}
