//! End-to-end composition: VAD post-processing, merge, batched transcription,
//! alignment, and optional evaluation.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::align::{align_segments_batched, AlignError};
use crate::asr::{AsrBackend, AsrError, FixtureBackend, Orchestrator};
use crate::config::{ConfigError, PipelineConfig};
use crate::io::{FormatError, InterchangeBundle};
use crate::merge::{merge_segments, MergeError, MergedChunk};
use crate::metrics::{
    ngram_duplicates, normalize_text, segmentation_pr, word_error_rate, MetricsError, SegmentationReport,
    WerReport,
};
use crate::types::{AlignedSegment, AlignedWord, ScoreTrack, TranscriptSegment};
use crate::vad::{apply_min_durations_bounded, binarize_cut, VadError};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("config: {0}")]
    Config(#[from] ConfigError),
    #[error("input: {0}")]
    Input(#[from] FormatError),
    #[error("vad: {0}")]
    Vad(#[from] VadError),
    #[error("merge: {0}")]
    Merge(#[from] MergeError),
    #[error("asr: {0}")]
    Asr(#[from] AsrError),
    #[error("align: no logits for chunk {index} ({start:.3}-{end:.3} s)")]
    MissingLogits { index: usize, start: f64, end: f64 },
    #[error("align: chunk {index}: {source}")]
    Align {
        index: usize,
        #[source]
        source: AlignError,
    },
    #[error("metrics: {0}")]
    Metrics(#[from] MetricsError),
}

impl PipelineError {
    /// Process exit code: 2 config, 3 input, 4 backend, 5 alignment.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Config(_) | PipelineError::Vad(VadError::InvalidParams(_)) => 2,
            PipelineError::Asr(AsrError::Backend { .. }) => 4,
            PipelineError::Align { .. } => 5,
            _ => 3,
        }
    }
}

/// Speech chunks for a VAD score track: min-cut binarization, min-duration
/// rules that never undo a cut, then greedy merge.
pub fn segment_scores(track: &ScoreTrack, config: &PipelineConfig) -> Result<Vec<MergedChunk>, PipelineError> {
    config.validate()?;
    let raw = binarize_cut(track, &config.binarize_params())?;
    let segs = apply_min_durations_bounded(
        &raw,
        config.min_duration_on,
        config.min_duration_off,
        config.max_chunk,
    );
    Ok(merge_segments(&segs, config.merge_threshold)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub parallelism: usize,
    /// Keep going past chunks the backend or the aligner fails on.
    pub skip_failed: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            parallelism: 1,
            skip_failed: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOutput {
    pub chunks: Vec<MergedChunk>,
    pub transcripts: Vec<TranscriptSegment>,
    pub segments: Vec<AlignedSegment>,
    pub warnings: Vec<String>,
}

impl PipelineOutput {
    pub fn words(&self) -> impl Iterator<Item = &AlignedWord> {
        self.segments.iter().flat_map(|s| s.words.iter())
    }
}

/// Runs the whole pipeline over a bundle, transcribing with `backend`.
pub fn run_bundle(
    bundle: &InterchangeBundle,
    backend: &dyn AsrBackend,
    config: &PipelineConfig,
    options: &RunOptions,
) -> Result<PipelineOutput, PipelineError> {
    let chunks = segment_scores(&bundle.scores, config)?;
    log::info!("vad: {} chunks", chunks.len());

    let mut orchestrator = Orchestrator::new(
        bundle.manifest.recording_id.clone(),
        config.batch_size,
        config.max_chunk,
    );
    orchestrator.skip_failed = options.skip_failed;
    orchestrator.parallelism = options.parallelism;
    let transcripts = orchestrator.transcribe_chunks(&chunks, backend)?;

    let mut warnings = Vec::new();
    let mut segments: Vec<Option<AlignedSegment>> = vec![None; transcripts.len()];
    let mut pairs = Vec::new();
    let mut pair_index = Vec::new();
    for (i, t) in transcripts.iter().enumerate() {
        if t.words.is_empty() {
            warnings.push(format!("chunk {i}: empty transcript"));
            segments[i] = Some(unaligned(t));
            continue;
        }
        match bundle.logits_for(&t.segment) {
            Some(l) => {
                pairs.push((t.clone(), l.clone()));
                pair_index.push(i);
            }
            None if options.skip_failed => {
                warnings.push(format!("chunk {i}: no logits, words left unaligned"));
                segments[i] = Some(unaligned(t));
            }
            None => {
                return Err(PipelineError::MissingLogits {
                    index: i,
                    start: t.segment.start,
                    end: t.segment.end,
                })
            }
        }
    }

    for (result, i) in align_segments_batched(&pairs, options.parallelism)
        .into_iter()
        .zip(pair_index)
    {
        match result {
            Ok(a) => {
                if let Some(w) = a.warning {
                    warnings.push(format!("chunk {i}: {w}"));
                }
                segments[i] = Some(a.segment);
            }
            Err(source) if options.skip_failed => {
                warnings.push(format!("chunk {i}: {source}"));
                segments[i] = Some(unaligned(&transcripts[i]));
            }
            Err(source) => return Err(PipelineError::Align { index: i, source }),
        }
    }
    for w in &warnings {
        log::warn!("{w}");
    }

    Ok(PipelineOutput {
        chunks,
        transcripts,
        segments: segments.into_iter().map(|s| s.expect("every chunk handled")).collect(),
        warnings,
    })
}

fn unaligned(t: &TranscriptSegment) -> AlignedSegment {
    AlignedSegment {
        start: t.segment.start,
        end: t.segment.end,
        text: t.text.clone(),
        words: Vec::new(),
    }
}

/// Backend answering from the transcripts stored in the bundle manifest.
pub fn fixture_backend(bundle: &InterchangeBundle) -> FixtureBackend {
    FixtureBackend::new(
        bundle
            .manifest
            .chunks
            .iter()
            .filter_map(|c| c.transcript.clone().map(|t| (c.segment(), t))),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub wer: WerReport,
    pub five_gram_duplicates: usize,
    pub segmentation: SegmentationReport,
    pub collar: f64,
    pub normalized: bool,
}

/// Transcript metrics against reference word alignments.
///
/// WER and 5-gram duplicates use the normalized word sequence when
/// `normalize` is set; segmentation matching always compares words verbatim.
pub fn evaluate(
    reference: &[AlignedWord],
    hypothesis: &[AlignedWord],
    collar: f64,
    normalize: bool,
) -> Result<EvaluationReport, PipelineError> {
    let seq = |words: &[AlignedWord]| -> Vec<String> {
        if normalize {
            words
                .iter()
                .flat_map(|w| {
                    normalize_text(&w.word)
                        .split(' ')
                        .filter(|s| !s.is_empty())
                        .map(str::to_owned)
                        .collect::<Vec<_>>()
                })
                .collect()
        } else {
            words.iter().map(|w| w.word.clone()).collect()
        }
    };
    let (r, h) = (seq(reference), seq(hypothesis));
    Ok(EvaluationReport {
        wer: word_error_rate(&r, &h)?,
        five_gram_duplicates: ngram_duplicates(&h, 5),
        segmentation: segmentation_pr(reference, hypothesis, collar),
        collar,
        normalized: normalize,
    })
}

impl EvaluationReport {
    pub fn table(&self) -> String {
        format!(
            "metric      value\n\
             WER         {:.2}%\n\
             IER         {:.2}%\n\
             S/I/D       {}/{}/{}\n\
             5-Dup       {}\n\
             Precision   {:.2}%\n\
             Recall      {:.2}%\n\
             collar      {:.3} s\n",
            self.wer.wer * 100.0,
            self.wer.ier * 100.0,
            self.wer.substitutions,
            self.wer.insertions,
            self.wer.deletions,
            self.five_gram_duplicates,
            self.segmentation.precision * 100.0,
            self.segmentation.recall * 100.0,
            self.collar,
        )
    }
}
