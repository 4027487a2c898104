use std::collections::HashMap;

use super::{AsrBackend, AudioWindow, BackendError, DecodeOptions};
use crate::types::SpeechSegment;

/// Deterministic backend that looks transcripts up by chunk span.
///
/// Spans are matched at microsecond resolution, so a span recomputed from
/// the same score track matches the one stored in a manifest even if the two
/// went through different float formatting.
#[derive(Debug, Clone, Default)]
pub struct FixtureBackend {
    entries: HashMap<(i64, i64), String>,
}

fn key(span: &SpeechSegment) -> (i64, i64) {
    ((span.start * 1e6).round() as i64, (span.end * 1e6).round() as i64)
}

impl FixtureBackend {
    pub fn new<I, S>(entries: I) -> Self
    where
        I: IntoIterator<Item = (SpeechSegment, S)>,
        S: Into<String>,
    {
        Self {
            entries: entries
                .into_iter()
                .map(|(span, text)| (key(&span), text.into()))
                .collect(),
        }
    }

    pub fn lookup(&self, span: &SpeechSegment) -> Result<&str, BackendError> {
        self.entries
            .get(&key(span))
            .map(String::as_str)
            .ok_or(BackendError::MissingFixtureEntry {
                start: span.start,
                end: span.end,
            })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl AsrBackend for FixtureBackend {
    fn transcribe_batch(
        &self,
        windows: &[AudioWindow],
        _options: &DecodeOptions,
    ) -> Result<Vec<String>, BackendError> {
        windows
            .iter()
            .map(|w| self.lookup(&w.span).map(str::to_owned))
            .collect()
    }

    fn supports_concurrent_calls(&self) -> bool {
        true
    }
}
