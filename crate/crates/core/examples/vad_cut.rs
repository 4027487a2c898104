//! Min-cut binarization of a voice activity score track.
//!
//! A 3 s stretch of speech is longer than the 1 s window, so it is cut at
//! its quietest frames; a short blip is then removed by the minimum-duration
//! rule.
//!
//! ```bash
//! cargo run -p timealign --example vad_cut
//! ```

use timealign::vad::{apply_min_durations_bounded, binarize_cut_frames, BinarizeParams};
use timealign::ScoreTrack;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut scores = vec![0.1; 250];
    for (i, s) in scores[20..170].iter_mut().enumerate() {
        // Speech with dips every 0.6 s.
        *s = if i % 30 == 29 { 0.55 } else { 0.95 };
    }
    scores[200..203].fill(0.9);
    let track = ScoreTrack::new(scores, 0.02, 0.0)?;

    let params = BinarizeParams {
        onset: 0.767,
        offset: 0.377,
        max_duration: 1.0,
        min_duration_on: 0.136,
        min_duration_off: 0.067,
    };
    for run in binarize_cut_frames(&track, &params)? {
        println!("frames {:>3}..{:<3} ended by {:?}", run.frames.start, run.frames.end, run.end);
    }

    let raw = timealign::vad::binarize_cut(&track, &params)?;
    let kept = apply_min_durations_bounded(&raw, params.min_duration_on, params.min_duration_off, params.max_duration);
    println!("\nafter min-duration rules:");
    for s in kept {
        println!("{:6.2} - {:6.2}  ({:.2} s)", s.start, s.end, s.duration());
    }
    Ok(())
}
