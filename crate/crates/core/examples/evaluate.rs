//! WER/IER, 5-gram duplicates and collar-based segmentation precision/recall.
//!
//! ```bash
//! cargo run -p timealign --example evaluate
//! ```

use timealign::metrics::{ngram_duplicates, normalize_text, segmentation_pr, word_error_rate};
use timealign::AlignedWord;

fn word(w: &str, start: f64, end: f64) -> AlignedWord {
    AlignedWord {
        word: w.into(),
        start,
        end,
        score: 1.0,
        inferred: false,
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let reference = "The cat sat on the mat.";
    let hypothesis = "the cat sat sat on mat";
    let r: Vec<String> = normalize_text(reference).split(' ').map(String::from).collect();
    let h: Vec<String> = normalize_text(hypothesis).split(' ').map(String::from).collect();
    let wer = word_error_rate(&r, &h)?;
    println!(
        "WER {:.3}  IER {:.3}  (S={} I={} D={}, N={})",
        wer.wer, wer.ier, wer.substitutions, wer.insertions, wer.deletions, wer.reference_words
    );

    let looping: Vec<&str> = "thank you so much thank you so much thank you so much".split(' ').collect();
    println!("5-gram duplicates in a looping transcript: {}", ngram_duplicates(&looping, 5));

    let ref_words = [word("the", 0.0, 0.2), word("cat", 0.3, 0.6), word("sat", 0.7, 1.0)];
    let hyp_words = [word("the", 0.05, 0.25), word("cat", 0.75, 0.9), word("sat", 1.1, 1.3)];
    for collar in [0.0, 0.1, 0.2] {
        let s = segmentation_pr(&ref_words, &hyp_words, collar);
        println!("collar {collar:.1}: P {:.2} R {:.2}", s.precision, s.recall);
    }
    Ok(())
}
