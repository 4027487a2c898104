//! Transcription and word-segmentation metrics: WER with its insertion
//! component, n-gram duplicate counts, and collar-based precision/recall.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::types::AlignedWord;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("reference is empty but hypothesis has {0} words")]
    EmptyReference(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WerReport {
    pub wer: f64,
    /// Insertion error rate, `insertions / |ref|`.
    pub ier: f64,
    pub substitutions: usize,
    pub insertions: usize,
    pub deletions: usize,
    pub reference_words: usize,
}

/// Word-level Levenshtein alignment with unit costs.
///
/// When several alignments share the minimum cost, the backtrace prefers
/// match/substitution, then deletion, then insertion.
pub fn word_error_rate<S: AsRef<str>>(reference: &[S], hypothesis: &[S]) -> Result<WerReport, MetricsError> {
    let (n, m) = (reference.len(), hypothesis.len());
    if n == 0 {
        return if m == 0 {
            Ok(WerReport {
                wer: 0.0,
                ier: 0.0,
                substitutions: 0,
                insertions: 0,
                deletions: 0,
                reference_words: 0,
            })
        } else {
            Err(MetricsError::EmptyReference(m))
        };
    }

    let w = m + 1;
    let mut d = vec![0usize; (n + 1) * w];
    for i in 0..=n {
        d[i * w] = i;
    }
    for j in 0..=m {
        d[j] = j;
    }
    for i in 1..=n {
        for j in 1..=m {
            let sub = d[(i - 1) * w + j - 1] + usize::from(reference[i - 1].as_ref() != hypothesis[j - 1].as_ref());
            let del = d[(i - 1) * w + j] + 1;
            let ins = d[i * w + j - 1] + 1;
            d[i * w + j] = sub.min(del).min(ins);
        }
    }

    let (mut s, mut ins, mut del) = (0, 0, 0);
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        let here = d[i * w + j];
        if i > 0 && j > 0 {
            let same = reference[i - 1].as_ref() == hypothesis[j - 1].as_ref();
            if d[(i - 1) * w + j - 1] + usize::from(!same) == here {
                s += usize::from(!same);
                i -= 1;
                j -= 1;
                continue;
            }
        }
        if i > 0 && d[(i - 1) * w + j] + 1 == here {
            del += 1;
            i -= 1;
        } else {
            ins += 1;
            j -= 1;
        }
    }

    let nf = n as f64;
    Ok(WerReport {
        wer: (s + ins + del) as f64 / nf,
        ier: ins as f64 / nf,
        substitutions: s,
        insertions: ins,
        deletions: del,
        reference_words: n,
    })
}

/// Lowercases, replaces punctuation with spaces and collapses whitespace.
/// Apostrophes inside words are kept (`don't`).
pub fn normalize_text(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for token in text.split_whitespace() {
        let mut word = String::new();
        for c in token.chars() {
            if c.is_alphanumeric() || c == '\'' {
                word.extend(c.to_lowercase());
            } else if !word.is_empty() {
                push_word(&mut out, &word);
                word.clear();
            }
        }
        push_word(&mut out, &word);
    }
    out
}

fn push_word(out: &mut String, word: &str) {
    let word = word.trim_matches('\'');
    if word.is_empty() {
        return;
    }
    if !out.is_empty() {
        out.push(' ');
    }
    out.push_str(word);
}

/// Number of n-gram occurrences beyond the first occurrence of each n-gram.
/// A transcript without repetition scores 0.
pub fn ngram_duplicates<S: AsRef<str>>(words: &[S], n: usize) -> usize {
    if n == 0 || words.len() < n {
        return 0;
    }
    let grams: Vec<Vec<&str>> = words
        .windows(n)
        .map(|w| w.iter().map(AsRef::as_ref).collect())
        .collect();
    let distinct: HashSet<&Vec<&str>> = grams.iter().collect();
    grams.len() - distinct.len()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegmentationReport {
    pub precision: f64,
    pub recall: f64,
    pub matches: usize,
}

/// Collar-based word segmentation precision and recall.
///
/// A hypothesis word can match a reference word when the strings are equal
/// and `[hyp.start, hyp.end]` intersects `[ref.start - collar, ref.end + collar]`.
/// Each word matches at most once; the matching has maximum cardinality, and
/// candidates closer in start time are tried first.
pub fn segmentation_pr(reference: &[AlignedWord], hypothesis: &[AlignedWord], collar: f64) -> SegmentationReport {
    let matches = match_words(reference, hypothesis, collar).len();
    let ratio = |den: usize| if den == 0 { 1.0 } else { matches as f64 / den as f64 };
    SegmentationReport {
        precision: ratio(hypothesis.len()),
        recall: ratio(reference.len()),
        matches,
    }
}

fn overlaps(r: &AlignedWord, h: &AlignedWord, collar: f64) -> bool {
    h.start <= r.end + collar && h.end >= r.start - collar
}

/// Matched `(reference index, hypothesis index)` pairs.
pub fn match_words(reference: &[AlignedWord], hypothesis: &[AlignedWord], collar: f64) -> Vec<(usize, usize)> {
    let mut by_word: HashMap<&str, Vec<usize>> = HashMap::new();
    for (i, r) in reference.iter().enumerate() {
        by_word.entry(r.word.as_str()).or_default().push(i);
    }
    // Candidate reference words per hypothesis word, nearest start first.
    let candidates: Vec<Vec<usize>> = hypothesis
        .iter()
        .map(|h| {
            let mut c: Vec<usize> = by_word
                .get(h.word.as_str())
                .into_iter()
                .flatten()
                .copied()
                .filter(|&r| overlaps(&reference[r], h, collar))
                .collect();
            c.sort_by(|&a, &b| {
                let da = (h.start - reference[a].start).abs();
                let db = (h.start - reference[b].start).abs();
                da.total_cmp(&db).then(a.cmp(&b))
            });
            c
        })
        .collect();

    let mut owner: Vec<Option<usize>> = vec![None; reference.len()];
    for h in 0..hypothesis.len() {
        let mut seen = vec![false; reference.len()];
        augment(h, &candidates, &mut owner, &mut seen);
    }
    let mut pairs: Vec<(usize, usize)> = owner
        .iter()
        .enumerate()
        .filter_map(|(r, h)| h.map(|h| (r, h)))
        .collect();
    pairs.sort_unstable();
    pairs
}

// Kuhn's augmenting path step.
fn augment(h: usize, candidates: &[Vec<usize>], owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
    for &r in &candidates[h] {
        if seen[r] {
            continue;
        }
        seen[r] = true;
        if owner[r].map_or(true, |other| augment(other, candidates, owner, seen)) {
            owner[r] = Some(h);
            return true;
        }
    }
    false
}
