//! Batched, order-preserving transcription through a custom backend.
//!
//! The backend here just reports which call and slot produced each
//! transcript; a real one would run an ASR model on the audio windows.
//!
//! ```bash
//! cargo run -p timealign --example batched_transcription
//! ```

use std::sync::atomic::{AtomicUsize, Ordering};

use timealign::asr::{AsrBackend, AudioWindow, BackendError, DecodeOptions, Orchestrator};
use timealign::merge::merge_segments;
use timealign::SpeechSegment;

struct Labeller {
    calls: AtomicUsize,
}

impl AsrBackend for Labeller {
    fn transcribe_batch(&self, windows: &[AudioWindow], opts: &DecodeOptions) -> Result<Vec<String>, BackendError> {
        // Chunks are decoded independently: no previous-text conditioning.
        assert!(!opts.condition_on_previous_text);
        let call = self.calls.fetch_add(1, Ordering::SeqCst);
        Ok(windows
            .iter()
            .enumerate()
            .map(|(slot, w)| format!("call {call} slot {slot} [{:.1}-{:.1}]", w.span.start, w.span.end))
            .collect())
    }

    fn supports_concurrent_calls(&self) -> bool {
        true
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let segs: Vec<SpeechSegment> = (0..7)
        .map(|i| SpeechSegment::new(i as f64 * 40.0, i as f64 * 40.0 + 25.0))
        .collect::<Result<_, _>>()?;
    let chunks = merge_segments(&segs, 30.0)?;

    let mut orchestrator = Orchestrator::new("demo", 3, 30.0);
    orchestrator.parallelism = 2;
    let backend = Labeller { calls: AtomicUsize::new(0) };
    for t in orchestrator.transcribe_chunks(&chunks, &backend)? {
        println!("{:6.1} - {:6.1}  {}", t.segment.start, t.segment.end, t.text);
    }
    println!("{} chunks, {} backend calls", chunks.len(), backend.calls.load(Ordering::SeqCst));
    Ok(())
}
