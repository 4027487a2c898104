//! Writes a small hand-constructed interchange bundle and runs the pipeline on it.
//!
//! The recording is 41.5 s long with two stretches of speech, 0.5-1.5 s
//! ("Hello world") and 40.0-41.0 s ("Bye."), plus a 0.1 s blip at 2.0 s that
//! the minimum-duration rule removes. The two stretches are more than 30 s
//! apart, so they become two chunks. Logits put a clear peak on one class
//! per frame, so the alignment is exactly the per-frame argmax:
//!
//! ```text
//! chunk 1 (origin 0.5): H 3-4  E 5-6  L 7-8  _ 9  L 10-11  O 12-13  | 14-16
//!                       W 17-18  O 19-20  R 21-22  L 23-24  D 25-26
//! chunk 2 (origin 40.0): B 10-12  Y 13-15  E 16-19
//! ```
//!
//! ```bash
//! cargo run -p timealign --example synthetic_bundle -- /tmp/golden
//! ```

use std::path::PathBuf;

use timealign::io::{self, ChunkEntry, Manifest, OutputFormat, FORMAT_VERSION};
use timealign::pipeline::{self, RunOptions};
use timealign::{LogitsMatrix, PipelineConfig, ScoreTrack};

const FRAME: f64 = 0.02;
const LABELS: [&str; 11] = ["<pad>", "|", "E", "L", "H", "O", "W", "R", "D", "B", "Y"];

/// One-hot-ish logits: `plan` lists (label, first frame, last frame); every
/// other frame peaks on blank.
fn logits(frames: usize, origin: f64, plan: &[(&str, usize, usize)]) -> LogitsMatrix {
    let k = LABELS.len();
    let mut values = vec![0.0f32; frames * k];
    for t in 0..frames {
        let class = plan
            .iter()
            .find(|(_, a, b)| (*a..=*b).contains(&t))
            .map(|(l, _, _)| LABELS.iter().position(|x| x == l).unwrap())
            .unwrap_or(0);
        values[t * k + class] = 6.0;
    }
    let labels = LABELS.iter().map(|s| s.to_string()).collect();
    LogitsMatrix::new(values, frames, labels, 0, FRAME, origin).unwrap()
}

fn scores() -> ScoreTrack {
    let mut s = vec![0.1; 2075];
    s[25..75].fill(0.9);
    s[100..105].fill(0.9);
    s[2000..2050].fill(0.9);
    ScoreTrack::new(s, FRAME, 0.0).unwrap()
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "synthetic_bundle".into()));
    std::fs::create_dir_all(&dir)?;

    let hello = logits(
        50,
        0.5,
        &[
            ("H", 3, 4),
            ("E", 5, 6),
            ("L", 7, 8),
            ("L", 10, 11),
            ("O", 12, 13),
            ("|", 14, 16),
            ("W", 17, 18),
            ("O", 19, 20),
            ("R", 21, 22),
            ("L", 23, 24),
            ("D", 25, 26),
        ],
    );
    let bye = logits(50, 40.0, &[("B", 10, 12), ("Y", 13, 15), ("E", 16, 19)]);

    io::write_score_file(dir.join("vad.bin"), &scores())?;
    io::write_logits_file(dir.join("chunk0.bin"), &hello)?;
    io::write_logits_file(dir.join("chunk1.bin"), &bye)?;
    let manifest = Manifest {
        version: FORMAT_VERSION.into(),
        recording_id: "synthetic".into(),
        audio_duration_s: 41.5,
        vad: "vad.bin".into(),
        chunks: vec![
            ChunkEntry {
                span: [0.5, 1.5],
                transcript: Some("Hello world".into()),
                logits: Some("chunk0.bin".into()),
            },
            ChunkEntry {
                span: [40.0, 41.0],
                transcript: Some("Bye.".into()),
                logits: Some("chunk1.bin".into()),
            },
        ],
    };
    let manifest_path = dir.join("bundle.json");
    io::write_manifest(&manifest_path, &manifest)?;
    std::fs::write(
        dir.join("ref.ctm"),
        ";; word start end\nHello 0.55 0.75\nworld 0.85 1.05\nbye 40.2 40.45\n",
    )?;

    let bundle = io::read_bundle(&manifest_path)?;
    let out = pipeline::run_bundle(
        &bundle,
        &pipeline::fixture_backend(&bundle),
        &PipelineConfig::default(),
        &RunOptions::default(),
    )?;
    print!("{}", io::render(&out.segments, OutputFormat::Srt));
    eprintln!("wrote {}", manifest_path.display());
    Ok(())
}
