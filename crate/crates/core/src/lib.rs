//! Long-form transcription with word-level timestamps, independent of any
//! particular model.
//!
//! The pipeline works on model outputs rather than audio:
//!
//! 1. [`vad`] turns per-frame voice activity scores into speech segments,
//!    cutting runs longer than the ASR input window at their quietest frame.
//! 2. [`merge`] groups neighbouring segments into chunks close to that window.
//! 3. [`asr`] transcribes chunks in independent batches through a pluggable
//!    [`asr::AsrBackend`], preserving chunk order.
//! 4. [`align`] force-aligns each chunk transcript to phoneme (or character)
//!    recognizer logits and reads off word start and end times.
//!
//! [`metrics`] implements WER/IER, n-gram duplicate counts and collar-based
//! word segmentation precision/recall, and [`io`] the interchange bundle,
//! reference and subtitle formats. [`pipeline`] wires everything together.

pub mod align;
pub mod asr;
pub mod config;
pub mod io;
pub mod merge;
pub mod metrics;
pub mod pipeline;
pub mod types;
pub mod vad;

pub use config::PipelineConfig;
pub use types::{
    validate_segments, AlignedSegment, AlignedWord, LogitsMatrix, ScoreTrack, SpeechSegment,
    TranscriptSegment,
};
