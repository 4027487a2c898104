//! Renders aligned segments as SRT, WebVTT, JSON and TSV.
//!
//! ```bash
//! cargo run -p timealign --example subtitles
//! ```

use timealign::io::{render, OutputFormat};
use timealign::{AlignedSegment, AlignedWord};

fn main() {
    let words = [("Good", 3599.5, 3599.8), ("morning", 3599.9, 3600.4)]
        .map(|(w, start, end)| AlignedWord {
            word: w.into(),
            start,
            end,
            score: 0.9,
            inferred: false,
        })
        .to_vec();
    let segs = [AlignedSegment {
        start: 3599.4,
        end: 3600.5,
        text: "Good morning".into(),
        words,
    }];
    for format in [OutputFormat::Srt, OutputFormat::Vtt, OutputFormat::Json, OutputFormat::Tsv] {
        println!("--- {format:?}");
        print!("{}", render(&segs, format));
    }
}
