//! Shared domain types.
//!
//! All times are `f64` seconds relative to the start of the recording. Frame
//! indices are always derived from `origin + index * frame_period` and never
//! stored, so models with different frame rates never drift against each other.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Violations of a type invariant at construction time.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum InvariantError {
    #[error("frame period must be finite and > 0, got {0}")]
    FramePeriod(f64),
    #[error("origin must be finite, got {0}")]
    Origin(f64),
    #[error("score at frame {index} is {value}, expected a value in [0, 1]")]
    ScoreOutOfRange { index: usize, value: f64 },
    #[error("score track is empty")]
    EmptyTrack,
    #[error("logits matrix must have at least one frame, got T = 0")]
    NoFrames,
    #[error("logits matrix needs at least 2 classes (blank + one emission), got K = {0}")]
    TooFewClasses(usize),
    #[error("logits payload has {actual} values, expected T*K = {expected}")]
    ShapeMismatch { expected: usize, actual: usize },
    #[error("{labels} labels given for K = {classes} classes")]
    LabelCount { labels: usize, classes: usize },
    #[error("duplicate class label {0:?}")]
    DuplicateLabel(String),
    #[error("blank index {blank} out of range for K = {classes}")]
    BlankIndex { blank: usize, classes: usize },
    #[error("segment start {start} is not before end {end}")]
    EmptySegment { start: f64, end: f64 },
}

/// Per-frame VAD activations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawScoreTrack", into = "RawScoreTrack")]
pub struct ScoreTrack {
    scores: Vec<f64>,
    frame_period: f64,
    origin: f64,
}

#[derive(Serialize, Deserialize)]
struct RawScoreTrack {
    scores: Vec<f64>,
    frame_period: f64,
    origin: f64,
}

impl TryFrom<RawScoreTrack> for ScoreTrack {
    type Error = InvariantError;

    fn try_from(raw: RawScoreTrack) -> Result<Self, Self::Error> {
        ScoreTrack::new(raw.scores, raw.frame_period, raw.origin)
    }
}

impl From<ScoreTrack> for RawScoreTrack {
    fn from(t: ScoreTrack) -> Self {
        RawScoreTrack {
            scores: t.scores,
            frame_period: t.frame_period,
            origin: t.origin,
        }
    }
}

impl ScoreTrack {
    /// Builds a track, rejecting out-of-range scores and non-positive frame periods.
    ///
    /// An empty track is allowed here; binarization rejects it.
    pub fn new(scores: Vec<f64>, frame_period: f64, origin: f64) -> Result<Self, InvariantError> {
        check_time_base(frame_period, origin)?;
        if let Some((index, &value)) = scores
            .iter()
            .enumerate()
            .find(|(_, s)| !(0.0..=1.0).contains(*s))
        {
            return Err(InvariantError::ScoreOutOfRange { index, value });
        }
        Ok(Self {
            scores,
            frame_period,
            origin,
        })
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn frame_period(&self) -> f64 {
        self.frame_period
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    /// Absolute time of frame boundary `index`.
    pub fn time_at(&self, index: usize) -> f64 {
        self.origin + index as f64 * self.frame_period
    }
}

fn check_time_base(frame_period: f64, origin: f64) -> Result<(), InvariantError> {
    if !(frame_period.is_finite() && frame_period > 0.0) {
        return Err(InvariantError::FramePeriod(frame_period));
    }
    if !origin.is_finite() {
        return Err(InvariantError::Origin(origin));
    }
    Ok(())
}

/// A half-open interval of active speech, `[start, end)` in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpeechSegment {
    pub start: f64,
    pub end: f64,
}

impl SpeechSegment {
    pub fn new(start: f64, end: f64) -> Result<Self, InvariantError> {
        if start < end {
            Ok(Self { start, end })
        } else {
            Err(InvariantError::EmptySegment { start, end })
        }
    }

    pub fn duration(&self) -> f64 {
        self.end - self.start
    }
}

/// Reasons a segment list fails [`validate_segments`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SegmentError {
    #[error("segments {0} and {1} overlap")]
    Overlap(usize, usize),
    #[error("segment {1} starts before segment {0}")]
    Order(usize, usize),
    #[error("segment {0} has start >= end")]
    Empty(usize),
}

/// Checks that segments are non-empty, sorted by start and pairwise non-overlapping.
///
/// Touching segments (`a.end == b.start`) are legal; min-cut produces them.
pub fn validate_segments(segs: &[SpeechSegment]) -> Result<(), SegmentError> {
    for (i, s) in segs.iter().enumerate() {
        // NaN fails this too.
        if !(s.start < s.end) {
            return Err(SegmentError::Empty(i));
        }
    }
    for (i, pair) in segs.windows(2).enumerate() {
        let (a, b) = (pair[0], pair[1]);
        if b.start < a.start {
            return Err(SegmentError::Order(i, i + 1));
        }
        if b.start < a.end {
            return Err(SegmentError::Overlap(i, i + 1));
        }
    }
    Ok(())
}

/// Transcript of one chunk, with its whitespace-split word list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranscriptSegment {
    pub segment: SpeechSegment,
    pub text: String,
    pub words: Vec<String>,
}

impl TranscriptSegment {
    /// Punctuation stays attached to its word; alignment only looks at the
    /// characters the phoneme model knows.
    pub fn new(segment: SpeechSegment, text: impl Into<String>) -> Self {
        let text = text.into();
        let words = split_words(&text);
        Self {
            segment,
            text,
            words,
        }
    }
}

pub fn split_words(text: &str) -> Vec<String> {
    text.split_whitespace().map(str::to_owned).collect()
}

/// Time-major emission scores: `values[t * k + c]` is class `c` at frame `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawLogits", into = "RawLogits")]
pub struct LogitsMatrix {
    values: Vec<f32>,
    frames: usize,
    labels: Vec<String>,
    blank: usize,
    frame_period: f64,
    origin: f64,
}

#[derive(Serialize, Deserialize)]
struct RawLogits {
    values: Vec<f32>,
    frames: usize,
    labels: Vec<String>,
    blank: usize,
    frame_period: f64,
    origin: f64,
}

impl TryFrom<RawLogits> for LogitsMatrix {
    type Error = InvariantError;

    fn try_from(r: RawLogits) -> Result<Self, Self::Error> {
        LogitsMatrix::new(r.values, r.frames, r.labels, r.blank, r.frame_period, r.origin)
    }
}

impl From<LogitsMatrix> for RawLogits {
    fn from(m: LogitsMatrix) -> Self {
        RawLogits {
            values: m.values,
            frames: m.frames,
            labels: m.labels,
            blank: m.blank,
            frame_period: m.frame_period,
            origin: m.origin,
        }
    }
}

impl LogitsMatrix {
    pub fn new(
        values: Vec<f32>,
        frames: usize,
        labels: Vec<String>,
        blank: usize,
        frame_period: f64,
        origin: f64,
    ) -> Result<Self, InvariantError> {
        check_time_base(frame_period, origin)?;
        let classes = labels.len();
        if frames == 0 {
            return Err(InvariantError::NoFrames);
        }
        if classes < 2 {
            return Err(InvariantError::TooFewClasses(classes));
        }
        if values.len() != frames * classes {
            return Err(InvariantError::ShapeMismatch {
                expected: frames * classes,
                actual: values.len(),
            });
        }
        if blank >= classes {
            return Err(InvariantError::BlankIndex { blank, classes });
        }
        let mut seen = std::collections::HashSet::with_capacity(classes);
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(InvariantError::DuplicateLabel(l.clone()));
            }
        }
        Ok(Self {
            values,
            frames,
            labels,
            blank,
            frame_period,
            origin,
        })
    }

    pub fn frames(&self) -> usize {
        self.frames
    }

    pub fn classes(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn blank(&self) -> usize {
        self.blank
    }

    pub fn frame_period(&self) -> f64 {
        self.frame_period
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn values(&self) -> &[f32] {
        &self.values
    }

    pub fn row(&self, frame: usize) -> &[f32] {
        let k = self.classes();
        &self.values[frame * k..(frame + 1) * k]
    }

    pub fn time_at(&self, frame: usize) -> f64 {
        self.origin + frame as f64 * self.frame_period
    }
}

/// A transcript word with its aligned time span.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlignedWord {
    pub word: String,
    pub start: f64,
    pub end: f64,
    /// Mean emission probability over the word's aligned frames.
    pub score: f64,
    /// Set when the span was borrowed from neighbouring words because the
    /// phoneme model could not align any character of this word.
    #[serde(default)]
    pub inferred: bool,
}

/// Words aligned within one transcribed chunk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlignedSegment {
    pub start: f64,
    pub end: f64,
    pub text: String,
    pub words: Vec<AlignedWord>,
}
