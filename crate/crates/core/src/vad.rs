//! VAD score post-processing: hysteresis binarization with min-cut, then
//! minimum-duration rules.
//!
//! Min-cut bounds every active run by `max_duration`. When a run grows past
//! `max_len = round(max_duration / frame_period)` frames without an offset
//! crossing, it is split at the lowest-scoring frame in
//! `[run_start + max_len / 2, run_start + max_len)`, so the emitted piece is
//! at least half and at most the full window. The cut frame starts the next
//! piece.

use std::ops::Range;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::types::{ScoreTrack, SpeechSegment};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VadError {
    #[error("invalid binarize parameters: {0}")]
    InvalidParams(String),
    #[error("score track is empty")]
    EmptyTrack,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinarizeParams {
    pub onset: f64,
    pub offset: f64,
    pub max_duration: f64,
    pub min_duration_on: f64,
    pub min_duration_off: f64,
}

impl BinarizeParams {
    pub fn validate(&self) -> Result<(), VadError> {
        let bad = |msg: String| Err(VadError::InvalidParams(msg));
        if !(self.offset <= self.onset) {
            return bad(format!(
                "offset {} must not exceed onset {}",
                self.offset, self.onset
            ));
        }
        if !(self.max_duration.is_finite() && self.max_duration > 0.0) {
            return bad(format!("max_duration {} must be > 0", self.max_duration));
        }
        if !(self.min_duration_on >= 0.0 && self.min_duration_off >= 0.0) {
            return bad("minimum durations must be >= 0".into());
        }
        if !(self.min_duration_on < self.max_duration / 2.0) {
            return bad(format!(
                "min_duration_on {} must be below max_duration / 2",
                self.min_duration_on
            ));
        }
        Ok(())
    }

    /// Run-length cap in frames for a track sampled every `frame_period` seconds.
    pub fn max_len(&self, frame_period: f64) -> usize {
        (self.max_duration / frame_period).round() as usize
    }
}

/// How an emitted run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunEnd {
    /// Score dropped below the offset threshold.
    Offset,
    /// Split by min-cut; the next run starts at this run's end frame.
    Cut,
    /// Track ended while still active.
    EndOfTrack,
}

/// An active run in frame units, half-open.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameRun {
    pub frames: Range<usize>,
    pub end: RunEnd,
}

/// Frame-level binarization. See [`binarize_cut`].
pub fn binarize_cut_frames(
    track: &ScoreTrack,
    p: &BinarizeParams,
) -> Result<Vec<FrameRun>, VadError> {
    p.validate()?;
    if track.is_empty() {
        return Err(VadError::EmptyTrack);
    }
    let max_len = p.max_len(track.frame_period());
    if max_len < 2 {
        return Err(VadError::InvalidParams(format!(
            "max_duration {} spans fewer than 2 frames of {} s",
            p.max_duration,
            track.frame_period()
        )));
    }

    let scores = track.scores();
    let mut runs = Vec::new();
    let mut active = scores[0] > p.onset;
    let mut start = 0usize;

    for (i, &score) in scores.iter().enumerate().skip(1) {
        if active {
            if score < p.offset {
                runs.push(FrameRun {
                    frames: start..i,
                    end: RunEnd::Offset,
                });
                active = false;
            } else if i - start >= max_len {
                let cut = min_cut(scores, start + max_len / 2, start + max_len);
                runs.push(FrameRun {
                    frames: start..cut,
                    end: RunEnd::Cut,
                });
                start = cut;
            }
        } else if score > p.onset {
            start = i;
            active = true;
        }
    }
    if active {
        runs.push(FrameRun {
            frames: start..scores.len(),
            end: RunEnd::EndOfTrack,
        });
    }
    Ok(runs)
}

/// Index of the minimum score in `scores[from..to]`; earliest wins ties.
fn min_cut(scores: &[f64], from: usize, to: usize) -> usize {
    let mut best = from;
    for i in from + 1..to {
        if scores[i] < scores[best] {
            best = i;
        }
    }
    best
}

/// Hysteresis binarization with min-cut.
///
/// Inactive becomes active when a score exceeds `onset`; active becomes
/// inactive when a score drops below `offset`. Every returned segment lasts at
/// most `max_len` frames, and pieces produced by a cut last at least
/// `max_len / 2` frames.
pub fn binarize_cut(track: &ScoreTrack, p: &BinarizeParams) -> Result<Vec<SpeechSegment>, VadError> {
    let runs = binarize_cut_frames(track, p)?;
    Ok(runs
        .iter()
        .map(|r| SpeechSegment {
            start: track.time_at(r.frames.start),
            end: track.time_at(r.frames.end),
        })
        .collect())
}

/// Bridges gaps shorter than `min_off`, then drops segments shorter than `min_on`.
pub fn apply_min_durations(segs: &[SpeechSegment], min_on: f64, min_off: f64) -> Vec<SpeechSegment> {
    apply_min_durations_bounded(segs, min_on, min_off, f64::INFINITY)
}

/// Like [`apply_min_durations`], but never bridges a gap when the fused
/// segment would last longer than `max_span`. The pipeline uses this so that
/// gap-filling cannot undo min-cut (cut pieces touch, i.e. have a zero gap).
pub fn apply_min_durations_bounded(
    segs: &[SpeechSegment],
    min_on: f64,
    min_off: f64,
    max_span: f64,
) -> Vec<SpeechSegment> {
    let mut bridged: Vec<SpeechSegment> = Vec::with_capacity(segs.len());
    for &s in segs {
        match bridged.last_mut() {
            Some(cur) if s.start - cur.end < min_off && s.end - cur.start <= max_span => {
                cur.end = s.end;
            }
            _ => bridged.push(s),
        }
    }
    bridged.retain(|s| s.duration() >= min_on);
    bridged
}
