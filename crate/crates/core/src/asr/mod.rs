//! Batched, order-preserving transcription of merged chunks.
//!
//! Chunks are transcribed independently of each other: no previous-text
//! conditioning and no timestamp tokens. That independence is what makes a
//! batch of chunks equivalent to the same chunks one at a time.

mod fixture;

pub use fixture::FixtureBackend;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::merge::MergedChunk;
use crate::types::{SpeechSegment, TranscriptSegment};

/// A time range of a recording. Sample extraction is the backend's job.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AudioWindow {
    pub recording_id: String,
    pub span: SpeechSegment,
}

/// Decoding switches every backend call receives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodeOptions {
    pub condition_on_previous_text: bool,
    pub timestamps: bool,
}

impl DecodeOptions {
    /// The only mode the orchestrator uses.
    pub const INDEPENDENT: DecodeOptions = DecodeOptions {
        condition_on_previous_text: false,
        timestamps: false,
    };
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BackendError {
    #[error("no fixture entry for span ({start}, {end})")]
    MissingFixtureEntry { start: f64, end: f64 },
    /// `position` is the failing window's index within the batch, if known.
    #[error("backend failure: {message}")]
    Failed {
        position: Option<usize>,
        message: String,
    },
}

/// A speech recognizer that maps audio windows to text.
///
/// Implementations must be stateless across calls: the text for a window may
/// not depend on the other windows in the batch or on earlier calls.
pub trait AsrBackend: Send + Sync {
    /// Returns one string per window, in the same order.
    fn transcribe_batch(
        &self,
        windows: &[AudioWindow],
        options: &DecodeOptions,
    ) -> Result<Vec<String>, BackendError>;

    /// Whether `transcribe_batch` may be called from several threads at once.
    fn supports_concurrent_calls(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AsrError {
    #[error("chunk {chunk}: {source}")]
    Backend {
        chunk: usize,
        #[source]
        source: BackendError,
    },
    #[error("chunk {index} spans {duration:.3} s, longer than the {max:.3} s model window")]
    ChunkTooLong {
        index: usize,
        duration: f64,
        max: f64,
    },
    #[error("backend returned {got} texts for a batch of {expected}")]
    BatchLength { expected: usize, got: usize },
    #[error("batch size must be >= 1")]
    InvalidBatchSize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Orchestrator {
    pub recording_id: String,
    pub batch_size: usize,
    pub max_chunk: f64,
    /// Emit empty transcripts for chunks the backend fails on instead of
    /// aborting the run.
    pub skip_failed: bool,
    /// Number of batches in flight at once; only honoured for backends that
    /// support concurrent calls.
    pub parallelism: usize,
}

impl Orchestrator {
    pub fn new(recording_id: impl Into<String>, batch_size: usize, max_chunk: f64) -> Self {
        Self {
            recording_id: recording_id.into(),
            batch_size,
            max_chunk,
            skip_failed: false,
            parallelism: 1,
        }
    }

    /// Transcribes `chunks` in batches of `batch_size`, calling the backend
    /// exactly `ceil(N / batch_size)` times when every call succeeds.
    /// Output order always matches input order.
    pub fn transcribe_chunks(
        &self,
        chunks: &[MergedChunk],
        backend: &dyn AsrBackend,
    ) -> Result<Vec<TranscriptSegment>, AsrError> {
        if self.batch_size == 0 {
            return Err(AsrError::InvalidBatchSize);
        }
        for (index, c) in chunks.iter().enumerate() {
            if c.span.duration() > self.max_chunk {
                return Err(AsrError::ChunkTooLong {
                    index,
                    duration: c.span.duration(),
                    max: self.max_chunk,
                });
            }
        }
        let windows: Vec<AudioWindow> = chunks
            .iter()
            .map(|c| AudioWindow {
                recording_id: self.recording_id.clone(),
                span: c.span,
            })
            .collect();
        let batches: Vec<(usize, &[AudioWindow])> = windows
            .chunks(self.batch_size)
            .enumerate()
            .map(|(i, b)| (i * self.batch_size, b))
            .collect();

        let run = |&(offset, batch): &(usize, &[AudioWindow])| self.run_batch(offset, batch, backend);
        let texts: Vec<Vec<String>> = if self.parallelism > 1 && backend.supports_concurrent_calls() {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(self.parallelism)
                .build()
                .expect("thread pool");
            pool.install(|| batches.par_iter().map(run).collect::<Result<_, _>>())?
        } else {
            batches.iter().map(run).collect::<Result<_, _>>()?
        };

        Ok(chunks
            .iter()
            .zip(texts.into_iter().flatten())
            .map(|(c, text)| TranscriptSegment::new(c.span, text))
            .collect())
    }

    fn run_batch(
        &self,
        offset: usize,
        batch: &[AudioWindow],
        backend: &dyn AsrBackend,
    ) -> Result<Vec<String>, AsrError> {
        match call(backend, batch) {
            Ok(texts) => Ok(texts),
            Err(AsrError::Backend { chunk, source }) if !self.skip_failed => Err(AsrError::Backend {
                chunk: offset + chunk,
                source,
            }),
            Err(AsrError::Backend { .. }) => {
                // Retry one by one so only the chunks that really fail go blank.
                Ok(batch
                    .iter()
                    .enumerate()
                    .map(|(i, w)| match call(backend, std::slice::from_ref(w)) {
                        Ok(mut t) => t.pop().unwrap_or_default(),
                        Err(e) => {
                            log::warn!("asr: skipping chunk {}: {e}", offset + i);
                            String::new()
                        }
                    })
                    .collect())
            }
            Err(e) => Err(e),
        }
    }
}

fn call(backend: &dyn AsrBackend, batch: &[AudioWindow]) -> Result<Vec<String>, AsrError> {
    let texts = backend
        .transcribe_batch(batch, &DecodeOptions::INDEPENDENT)
        .map_err(|source| AsrError::Backend {
            chunk: match &source {
                BackendError::Failed {
                    position: Some(p), ..
                } => *p,
                _ => 0,
            },
            source,
        })?;
    if texts.len() != batch.len() {
        return Err(AsrError::BatchLength {
            expected: batch.len(),
            got: texts.len(),
        });
    }
    Ok(texts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::atomic::{AtomicUsize, Ordering};

    struct Echo {
        calls: AtomicUsize,
        fail_at: Option<f64>,
    }

    impl AsrBackend for Echo {
        fn transcribe_batch(
            &self,
            windows: &[AudioWindow],
            options: &DecodeOptions,
        ) -> Result<Vec<String>, BackendError> {
            assert_eq!(*options, DecodeOptions::INDEPENDENT);
            self.calls.fetch_add(1, Ordering::SeqCst);
            windows
                .iter()
                .enumerate()
                .map(|(i, w)| {
                    if Some(w.span.start) == self.fail_at {
                        Err(BackendError::Failed {
                            position: Some(i),
                            message: "boom".into(),
                        })
                    } else {
                        Ok(format!("w{}", w.span.start))
                    }
                })
                .collect()
        }
    }

    fn chunks(n: usize) -> Vec<MergedChunk> {
        (0..n)
            .map(|i| {
                let s = SpeechSegment {
                    start: i as f64 * 10.0,
                    end: i as f64 * 10.0 + 5.0,
                };
                MergedChunk {
                    span: s,
                    segments: vec![s],
                }
            })
            .collect()
    }

    fn echo(fail_at: Option<f64>) -> Echo {
        Echo {
            calls: AtomicUsize::new(0),
            fail_at,
        }
    }

    #[test]
    fn no_chunks_no_calls() {
        let b = echo(None);
        let out = Orchestrator::new("r", 4, 30.0).transcribe_chunks(&[], &b).unwrap();
        assert!(out.is_empty());
        assert_eq!(b.calls.load(Ordering::SeqCst), 0);
    }

    #[test]
    fn seven_chunks_one_call_at_batch_32() {
        let b = echo(None);
        let out = Orchestrator::new("r", 32, 30.0)
            .transcribe_chunks(&chunks(7), &b)
            .unwrap();
        assert_eq!(out.len(), 7);
        assert_eq!(b.calls.load(Ordering::SeqCst), 1);
        assert_eq!(out[6].text, "w60");
    }

    #[test]
    fn failure_reports_global_chunk_index() {
        let b = echo(Some(50.0));
        let err = Orchestrator::new("r", 2, 30.0)
            .transcribe_chunks(&chunks(7), &b)
            .unwrap_err();
        assert!(matches!(err, AsrError::Backend { chunk: 5, .. }));
    }

    #[test]
    fn skip_failed_blanks_only_failing_chunk() {
        let b = echo(Some(50.0));
        let mut o = Orchestrator::new("r", 4, 30.0);
        o.skip_failed = true;
        let out = o.transcribe_chunks(&chunks(7), &b).unwrap();
        let texts: Vec<_> = out.iter().map(|t| t.text.as_str()).collect();
        assert_eq!(texts, ["w0", "w10", "w20", "w30", "w40", "", "w60"]);
        assert!(out[5].words.is_empty());
    }

    #[test]
    fn rejects_long_chunks() {
        let b = echo(None);
        let err = Orchestrator::new("r", 4, 4.0)
            .transcribe_chunks(&chunks(2), &b)
            .unwrap_err();
        assert!(matches!(err, AsrError::ChunkTooLong { index: 0, .. }));
        assert_eq!(b.calls.load(Ordering::SeqCst), 0);
    }
}
