use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::vad::BinarizeParams;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("thresholds must satisfy 0 <= offset ({offset}) <= onset ({onset}) <= 1")]
    Thresholds { onset: f64, offset: f64 },
    #[error("merge threshold {tau} must satisfy 0 < tau <= max chunk ({max_chunk})")]
    MergeThreshold { tau: f64, max_chunk: f64 },
    #[error("max chunk must be finite and > 0, got {0}")]
    MaxChunk(f64),
    #[error("minimum durations must be finite and >= 0 (on = {on}, off = {off})")]
    MinDurations { on: f64, off: f64 },
    #[error("min duration on ({on}) must be below half the max chunk ({max_chunk})")]
    MinOnTooLong { on: f64, max_chunk: f64 },
    #[error("batch size must be >= 1")]
    BatchSize,
    #[error("collar must be finite and >= 0, got {0}")]
    Collar(f64),
}

/// Pipeline knobs. `Default` carries the reference configuration:
/// pyannote-style hysteresis thresholds, a 30 s ASR input window and a merge
/// threshold equal to it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub onset_threshold: f64,
    pub offset_threshold: f64,
    pub min_duration_on: f64,
    pub min_duration_off: f64,
    /// Longest audio window the ASR model accepts, in seconds.
    pub max_chunk: f64,
    /// Merge threshold, seconds. Must not exceed `max_chunk`.
    pub merge_threshold: f64,
    pub batch_size: usize,
    pub collar: f64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            onset_threshold: 0.767,
            offset_threshold: 0.377,
            min_duration_on: 0.136,
            min_duration_off: 0.067,
            max_chunk: 30.0,
            merge_threshold: 30.0,
            batch_size: 32,
            collar: 0.2,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let (on, off) = (self.onset_threshold, self.offset_threshold);
        if !(0.0 <= off && off <= on && on <= 1.0) {
            return Err(ConfigError::Thresholds {
                onset: on,
                offset: off,
            });
        }
        if !(self.max_chunk.is_finite() && self.max_chunk > 0.0) {
            return Err(ConfigError::MaxChunk(self.max_chunk));
        }
        if !(self.merge_threshold > 0.0 && self.merge_threshold <= self.max_chunk) {
            return Err(ConfigError::MergeThreshold {
                tau: self.merge_threshold,
                max_chunk: self.max_chunk,
            });
        }
        let (min_on, min_off) = (self.min_duration_on, self.min_duration_off);
        if !(min_on.is_finite() && min_on >= 0.0 && min_off.is_finite() && min_off >= 0.0) {
            return Err(ConfigError::MinDurations {
                on: min_on,
                off: min_off,
            });
        }
        if min_on >= self.max_chunk / 2.0 {
            return Err(ConfigError::MinOnTooLong {
                on: min_on,
                max_chunk: self.max_chunk,
            });
        }
        if self.batch_size == 0 {
            return Err(ConfigError::BatchSize);
        }
        if !(self.collar.is_finite() && self.collar >= 0.0) {
            return Err(ConfigError::Collar(self.collar));
        }
        Ok(())
    }

    pub fn binarize_params(&self) -> BinarizeParams {
        BinarizeParams {
            onset: self.onset_threshold,
            offset: self.offset_threshold,
            max_duration: self.max_chunk,
            min_duration_on: self.min_duration_on,
            min_duration_off: self.min_duration_off,
        }
    }
}

/// One `key value` line per field, floats printed with their shortest
/// round-tripping representation (`30.0`, not `30`).
impl fmt::Display for PipelineConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "onset {:?}", self.onset_threshold)?;
        writeln!(f, "offset {:?}", self.offset_threshold)?;
        writeln!(f, "min-on {:?}", self.min_duration_on)?;
        writeln!(f, "min-off {:?}", self.min_duration_off)?;
        writeln!(f, "max-chunk {:?}", self.max_chunk)?;
        writeln!(f, "merge-threshold {:?}", self.merge_threshold)?;
        writeln!(f, "batch-size {}", self.batch_size)?;
        writeln!(f, "collar {:?}", self.collar)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        PipelineConfig::default().validate().unwrap();
    }

    #[test]
    fn display_prints_reference_defaults() {
        let s = PipelineConfig::default().to_string();
        for line in [
            "onset 0.767",
            "offset 0.377",
            "min-on 0.136",
            "min-off 0.067",
            "max-chunk 30.0",
            "merge-threshold 30.0",
            "collar 0.2",
        ] {
            assert!(s.lines().any(|l| l == line), "missing {line:?} in\n{s}");
        }
    }

    #[test]
    fn merge_threshold_cannot_exceed_max_chunk() {
        let cfg = PipelineConfig {
            merge_threshold: 31.0,
            ..Default::default()
        };
        assert!(matches!(
            cfg.validate(),
            Err(ConfigError::MergeThreshold { .. })
        ));
    }

    #[test]
    fn offset_above_onset_rejected() {
        let cfg = PipelineConfig {
            onset_threshold: 0.3,
            offset_threshold: 0.5,
            ..Default::default()
        };
        assert!(matches!(cfg.validate(), Err(ConfigError::Thresholds { .. })));
    }
}
