//! Forced alignment of chunk transcripts to phoneme-recognizer emissions.
//!
//! For each chunk: map the transcript onto the model's labels, restrict the
//! per-frame softmax to the classes the transcript actually uses (plus
//! blank), find the best monotone path, and read word boundaries off it.
//! Character-level CTC models are handled the same way as phoneme models;
//! their labels are simply characters.

mod tokenize;
mod trellis;
mod words;

pub use tokenize::{tokenize_transcript, TokenizedTranscript, TokenizedWord, Vocabulary, WordSpan};
pub use trellis::{align, min_frames, restricted_log_softmax, AlignmentPath, PathStep};
pub use words::words_from_path;

use rayon::prelude::*;
use thiserror::Error;

use crate::types::{AlignedSegment, LogitsMatrix, TranscriptSegment};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlignError {
    #[error("transcript has no alignable tokens")]
    EmptyTranscript,
    #[error("transcript needs at least {required} frames, logits have {frames}")]
    Unalignable { required: usize, frames: usize },
    #[error("non-finite logit at frame {frame}")]
    DegenerateLogits { frame: usize },
    #[error("transcript token maps to the blank class")]
    BlankInTranscript,
}

/// Result of aligning one chunk.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentAlignment {
    pub segment: AlignedSegment,
    /// Set when the chunk produced no words although it had text, or had no text.
    pub warning: Option<String>,
}

/// Aligns one transcript against its logits.
///
/// Transcripts that are empty or entirely out of vocabulary produce no words
/// and a warning rather than an error.
pub fn align_segment(
    transcript: &TranscriptSegment,
    logits: &LogitsMatrix,
) -> Result<SegmentAlignment, AlignError> {
    let vocab = Vocabulary::from_logits(logits);
    let tok = tokenize_transcript(transcript, &vocab);
    let mut segment = AlignedSegment {
        start: transcript.segment.start,
        end: transcript.segment.end,
        text: transcript.text.clone(),
        words: Vec::new(),
    };
    if tok.is_empty() {
        let warning = if transcript.words.is_empty() {
            "empty transcript".to_string()
        } else {
            format!(
                "no characters of {:?} exist in the alignment model's labels",
                transcript.text
            )
        };
        return Ok(SegmentAlignment {
            segment,
            warning: Some(warning),
        });
    }
    let path = align(&tok, logits)?;
    segment.words = words_from_path(&tok, &path, logits, &transcript.segment);
    Ok(SegmentAlignment {
        segment,
        warning: None,
    })
}

/// Aligns every pair on up to `parallelism` threads.
///
/// Output order matches input order and each result is identical to calling
/// [`align_segment`] on that pair; one pair failing does not affect others.
pub fn align_segments_batched(
    pairs: &[(TranscriptSegment, LogitsMatrix)],
    parallelism: usize,
) -> Vec<Result<SegmentAlignment, AlignError>> {
    let run = |(t, l): &(TranscriptSegment, LogitsMatrix)| align_segment(t, l);
    if parallelism <= 1 || pairs.len() <= 1 {
        return pairs.iter().map(run).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(parallelism).build() {
        Ok(pool) => pool.install(|| pairs.par_iter().map(run).collect()),
        Err(e) => {
            log::warn!("align: falling back to sequential alignment: {e}");
            pairs.iter().map(run).collect()
        }
    }
}
