use super::tokenize::{TokenizedTranscript, WordSpan};
use super::trellis::AlignmentPath;
use crate::types::{AlignedWord, LogitsMatrix, SpeechSegment};

/// Word timings from an alignment path.
///
/// A word starts at the first frame emitting its first token and ends one
/// frame after the last frame emitting its last token. Times are clamped to
/// `segment`. Words with no aligned token take the gap between their aligned
/// neighbours (or the segment edges), split evenly when several unaligned
/// words are adjacent, and are marked `inferred`.
pub fn words_from_path(
    tok: &TokenizedTranscript,
    path: &AlignmentPath,
    logits: &LogitsMatrix,
    segment: &SpeechSegment,
) -> Vec<AlignedWord> {
    let clamp = |t: f64| t.clamp(segment.start, segment.end);

    let aligned: Vec<Option<(f64, f64, f64)>> = tok
        .words
        .iter()
        .map(|w| match w.span {
            WordSpan::Oov => None,
            WordSpan::Aligned { first, last } => {
                let first_frame = path.emitting_frames(first).map(|s| s.frame).min()?;
                let last_frame = path.emitting_frames(last).map(|s| s.frame).max()?;
                let probs: Vec<f64> = (first..=last)
                    .flat_map(|tk| path.emitting_frames(tk))
                    .map(|s| s.log_prob.exp())
                    .collect();
                let score = probs.iter().sum::<f64>() / probs.len() as f64;
                Some((
                    clamp(logits.time_at(first_frame)),
                    clamp(logits.time_at(last_frame + 1)),
                    score,
                ))
            }
        })
        .collect();

    tok.words
        .iter()
        .enumerate()
        .map(|(i, w)| match aligned[i] {
            Some((start, end, score)) => AlignedWord {
                word: w.text.clone(),
                start,
                end,
                score,
                inferred: false,
            },
            None => {
                // Consecutive unaligned words share their gap evenly.
                let first = (0..i).rev().find(|&j| aligned[j].is_some()).map_or(0, |j| j + 1);
                let last = (i..aligned.len()).find(|&j| aligned[j].is_some()).unwrap_or(aligned.len());
                let gap_start = first.checked_sub(1).map_or(segment.start, |j| aligned[j].unwrap().1);
                let gap_end = aligned.get(last).map_or(segment.end, |a| a.unwrap().0);
                let k = (last - first) as f64;
                let at = |j: usize| {
                    if j == last {
                        gap_end
                    } else {
                        gap_start + (gap_end - gap_start) * (j - first) as f64 / k
                    }
                };
                AlignedWord {
                    word: w.text.clone(),
                    start: at(i),
                    end: at(i + 1),
                    score: 0.0,
                    inferred: true,
                }
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::align::tokenize::TokenizedWord;
    use crate::align::trellis::PathStep;

    fn logits(frames: usize, origin: f64) -> LogitsMatrix {
        LogitsMatrix::new(
            vec![0.0; frames * 3],
            frames,
            vec!["-".into(), "a".into(), "b".into()],
            0,
            0.02,
            origin,
        )
        .unwrap()
    }

    fn path(assign: &[(usize, bool)]) -> AlignmentPath {
        AlignmentPath {
            steps: assign
                .iter()
                .enumerate()
                .map(|(frame, &(token, emitting))| PathStep {
                    frame,
                    token,
                    emitting,
                    log_prob: (0.5f64).ln(),
                })
                .collect(),
            score: 0.0,
        }
    }

    fn word(text: &str, span: WordSpan) -> TokenizedWord {
        TokenizedWord {
            text: text.into(),
            span,
            oov_chars: vec![],
        }
    }

    #[test]
    fn single_word_arithmetic() {
        let tok = TokenizedTranscript {
            tokens: vec![1],
            words: vec![word("a", WordSpan::Aligned { first: 0, last: 0 })],
        };
        let p = path(&[(0, true); 10]);
        let seg = SpeechSegment { start: 3.0, end: 4.0 };
        let w = words_from_path(&tok, &p, &logits(10, 3.0), &seg);
        assert_eq!(w[0].start, 3.0);
        assert!((w[0].end - 3.2).abs() < 1e-12);
        assert!((w[0].score - 0.5).abs() < 1e-12);
        assert!(!w[0].inferred);
    }

    #[test]
    fn oov_word_fills_gap_between_neighbours() {
        // frames 0..4 emit "a" (ends at 0.1), frames 5..9 blank, 10.. emit "b".
        let tok = TokenizedTranscript {
            tokens: vec![1, 2],
            words: vec![
                word("a", WordSpan::Aligned { first: 0, last: 0 }),
                word("42", WordSpan::Oov),
                word("b", WordSpan::Aligned { first: 1, last: 1 }),
            ],
        };
        let mut assign = vec![(0, true); 5];
        assign.extend([(0, false); 5]);
        assign.extend([(1, true); 5]);
        let seg = SpeechSegment { start: 0.0, end: 1.0 };
        let w = words_from_path(&tok, &path(&assign), &logits(15, 0.0), &seg);
        assert!(w[1].inferred);
        assert_eq!(w[1].start, w[0].end);
        assert_eq!(w[1].end, w[2].start);
        assert!((w[1].start - 0.1).abs() < 1e-12 && (w[1].end - 0.2).abs() < 1e-12);
    }

    #[test]
    fn edge_oov_words_use_segment_bounds() {
        let tok = TokenizedTranscript {
            tokens: vec![1],
            words: vec![
                word("¿", WordSpan::Oov),
                word("a", WordSpan::Aligned { first: 0, last: 0 }),
                word("?", WordSpan::Oov),
            ],
        };
        let mut assign = vec![(0, false); 3];
        assign.extend([(0, true); 2]);
        assign.extend([(0, false); 3]);
        let seg = SpeechSegment { start: 7.0, end: 7.16 };
        let w = words_from_path(&tok, &path(&assign), &logits(8, 7.0), &seg);
        assert_eq!(w[0].start, 7.0);
        assert_eq!(w[0].end, w[1].start);
        assert_eq!(w[2].start, w[1].end);
        assert_eq!(w[2].end, 7.16);
    }

    #[test]
    fn adjacent_oov_words_split_the_gap() {
        let tok = TokenizedTranscript {
            tokens: vec![1],
            words: vec![
                word("1", WordSpan::Oov),
                word("2", WordSpan::Oov),
                word("a", WordSpan::Aligned { first: 0, last: 0 }),
            ],
        };
        let mut assign = vec![(0, false); 4];
        assign.extend([(0, true); 2]);
        let seg = SpeechSegment { start: 0.0, end: 0.12 };
        let w = words_from_path(&tok, &path(&assign), &logits(6, 0.0), &seg);
        assert_eq!(w[0].start, 0.0);
        assert!((w[0].end - 0.04).abs() < 1e-12);
        assert_eq!(w[0].end, w[1].start);
        assert_eq!(w[1].end, w[2].start);
    }

    #[test]
    fn times_clamped_to_segment() {
        let tok = TokenizedTranscript {
            tokens: vec![1],
            words: vec![word("a", WordSpan::Aligned { first: 0, last: 0 })],
        };
        let seg = SpeechSegment { start: 0.0, end: 0.05 };
        let w = words_from_path(&tok, &path(&[(0, true); 5]), &logits(5, 0.0), &seg);
        assert_eq!(w[0].end, 0.05);
    }
}
