//! Forced alignment of a transcript to character logits.
//!
//! ```bash
//! cargo run -p timealign --example forced_alignment
//! ```

use timealign::align::{align, align_segment, tokenize_transcript, Vocabulary};
use timealign::{LogitsMatrix, SpeechSegment, TranscriptSegment};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let labels: Vec<String> = ["<pad>", "|", "c", "a", "t", "s"].map(String::from).to_vec();
    // Argmax per frame; `_` is blank. "cats 2 sat" where "2" has no label.
    let plan = "__cc_aa_t_|||_ss_a_tt__";
    let k = labels.len();
    let mut values = vec![0.0f32; plan.len() * k];
    for (t, ch) in plan.chars().enumerate() {
        let class = match ch {
            '_' => 0,
            c => labels.iter().position(|l| l == &c.to_string()).unwrap(),
        };
        values[t * k + class] = 4.0;
    }
    let logits = LogitsMatrix::new(values, plan.len(), labels, 0, 0.02, 12.0)?;

    let segment = SpeechSegment::new(12.0, 12.0 + plan.len() as f64 * 0.02)?;
    let transcript = TranscriptSegment::new(segment, "cat 2 sat");

    let tok = tokenize_transcript(&transcript, &Vocabulary::from_logits(&logits));
    let path = align(&tok, &logits)?;
    println!("path score {:.3}", path.score);
    let frames: String = path
        .steps
        .iter()
        .map(|s| if s.emitting { char::from(b'0' + s.token as u8) } else { '.' })
        .collect();
    println!("token per frame: {frames}");

    let aligned = align_segment(&transcript, &logits)?;
    for w in &aligned.segment.words {
        println!(
            "{:>4} {:6.2} - {:6.2}  score {:.2}{}",
            w.word,
            w.start,
            w.end,
            w.score,
            if w.inferred { "  (inferred)" } else { "" }
        );
    }
    Ok(())
}
