//! Greedy merge of speech segments into ASR-sized chunks.
//!
//! ```bash
//! cargo run -p timealign --example merge_chunks
//! ```

use timealign::merge::merge_segments;
use timealign::SpeechSegment;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let segs = [(0.0, 9.5), (10.0, 21.0), (21.2, 29.8), (31.0, 45.0), (47.0, 50.0), (90.0, 91.0)]
        .into_iter()
        .map(|(a, b)| SpeechSegment::new(a, b))
        .collect::<Result<Vec<_>, _>>()?;

    for tau in [10.0, 30.0] {
        println!("tau = {tau} s");
        for c in merge_segments(&segs, tau)? {
            println!(
                "  chunk {:5.1} - {:5.1} ({:4.1} s) from {} segment(s)",
                c.span.start,
                c.span.end,
                c.span.duration(),
                c.segments.len()
            );
        }
    }
    Ok(())
}
