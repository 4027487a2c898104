//! Independent reference implementations and random generators shared by
//! the integration tests. Nothing here calls the code path it checks.

#![allow(dead_code)]

use std::collections::HashMap;

use rand::Rng;
use timealign::align::{restricted_log_softmax, PathStep};
use timealign::{AlignedWord, LogitsMatrix, SpeechSegment};

// ---------------------------------------------------------------------------
// Min-cut binarization
// ---------------------------------------------------------------------------

/// `(start_frame, end_frame, produced_by_cut)`.
pub type RefRun = (usize, usize, bool);

/// Two-pass reference: find hysteresis runs first, then split every run
/// longer than `max_len` frames at the window minimum.
pub fn binarize_reference(scores: &[f64], onset: f64, offset: f64, max_len: usize) -> Vec<RefRun> {
    let mut runs = Vec::new();
    let mut active = scores[0] > onset;
    let mut start = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if active && s < offset {
            runs.push((start, i));
            active = false;
        } else if !active && s > onset {
            start = i;
            active = true;
        }
    }
    if active {
        runs.push((start, scores.len()));
    }

    let mut out = Vec::new();
    for (a, b) in runs {
        let mut s = a;
        while b - s > max_len {
            let window = (s + max_len / 2)..(s + max_len);
            let lowest = window.clone().map(|i| scores[i]).fold(f64::INFINITY, f64::min);
            let cut = window.into_iter().find(|&i| scores[i] == lowest).unwrap();
            out.push((s, cut, true));
            s = cut;
        }
        out.push((s, b, false));
    }
    out
}

/// Piecewise track of quiet, ambiguous and loud stretches with per-frame noise.
pub fn random_track<R: Rng>(rng: &mut R, len: usize) -> Vec<f64> {
    let mut scores = Vec::with_capacity(len);
    while scores.len() < len {
        let run = rng.gen_range(1..=900).min(len - scores.len());
        let (lo, hi) = match rng.gen_range(0..3) {
            0 => (0.0, 0.4),
            1 => (0.3, 0.85),
            _ => (0.75, 1.0),
        };
        scores.extend((0..run).map(|_| rng.gen_range(lo..=hi)));
    }
    scores
}

// ---------------------------------------------------------------------------
// Forced alignment
// ---------------------------------------------------------------------------

pub struct ExhaustiveBest {
    pub score: f64,
    /// CTC state per frame (even = blank, odd = token `state / 2`).
    pub states: Vec<usize>,
}

/// Enumerates every blank-expanded monotone path and keeps the best one.
///
/// Scores are accumulated in frame order. Exact ties go to the path that,
/// compared from the last frame backwards, has the smaller key per frame,
/// where token states rank before blank states and then by state index.
pub fn exhaustive_align(tokens: &[usize], logits: &LogitsMatrix) -> Option<ExhaustiveBest> {
    let mut classes: Vec<usize> = tokens.to_vec();
    classes.sort_unstable();
    classes.dedup();
    classes.push(logits.blank());
    let lp = restricted_log_softmax(logits, &classes).unwrap();
    let width = classes.len();
    let col = |state: usize| {
        if state % 2 == 0 {
            width - 1
        } else {
            classes.iter().position(|&c| c == tokens[state / 2]).unwrap()
        }
    };
    let states = 2 * tokens.len() + 1;
    let frames = logits.frames();

    let mut best: Option<ExhaustiveBest> = None;
    let mut path = Vec::with_capacity(frames);
    fn key(s: usize) -> (bool, usize) {
        (s % 2 == 0, s)
    }
    fn better(a: &[usize], b: &[usize]) -> bool {
        for (x, y) in a.iter().rev().zip(b.iter().rev()) {
            if key(*x) != key(*y) {
                return key(*x) < key(*y);
            }
        }
        false
    }
    #[allow(clippy::too_many_arguments)]
    fn dfs(
        t: usize,
        score: f64,
        path: &mut Vec<usize>,
        frames: usize,
        states: usize,
        tokens: &[usize],
        emit: &dyn Fn(usize, usize) -> f64,
        best: &mut Option<ExhaustiveBest>,
    ) {
        if t == frames {
            let last = *path.last().unwrap();
            if last + 2 < states {
                return;
            }
            let replace = match best {
                None => true,
                Some(b) => score > b.score || (score == b.score && better(path, &b.states)),
            };
            if replace {
                *best = Some(ExhaustiveBest {
                    score,
                    states: path.clone(),
                });
            }
            return;
        }
        let nexts: Vec<usize> = match path.last() {
            None => vec![0, 1],
            Some(&s) => {
                let mut v = vec![s];
                if s + 1 < states {
                    v.push(s + 1);
                }
                if s + 2 < states && (s + 2) % 2 == 1 && tokens[(s + 2) / 2] != tokens[s / 2] {
                    v.push(s + 2);
                }
                v
            }
        };
        for n in nexts {
            path.push(n);
            dfs(t + 1, score + emit(t, n), path, frames, states, tokens, emit, best);
            path.pop();
        }
    }
    let emit = |t: usize, s: usize| lp[t * width + col(s)];
    dfs(0, 0.0, &mut path, frames, states, tokens, &emit, &mut best);
    best
}

/// `(token position, emitting)` per frame, the projection used by `PathStep`.
pub fn project(states: &[usize]) -> Vec<(usize, bool)> {
    states
        .iter()
        .map(|&s| {
            if s % 2 == 1 {
                (s / 2, true)
            } else {
                ((s / 2).saturating_sub(1), false)
            }
        })
        .collect()
}

pub fn step_projection(steps: &[PathStep]) -> Vec<(usize, bool)> {
    steps.iter().map(|s| (s.token, s.emitting)).collect()
}

pub fn logits_from(values: Vec<f32>, frames: usize, classes: usize) -> LogitsMatrix {
    let labels = std::iter::once("<pad>".to_string())
        .chain((1..classes).map(|i| char::from(b'a' + (i - 1) as u8).to_string()))
        .collect();
    LogitsMatrix::new(values, frames, labels, 0, 0.02, 0.0).unwrap()
}

pub fn random_logits<R: Rng>(rng: &mut R, frames: usize, classes: usize) -> LogitsMatrix {
    let values = (0..frames * classes).map(|_| rng.gen_range(-6.0f32..6.0)).collect();
    logits_from(values, frames, classes)
}

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

/// Memoized recursive edit distance over suffixes.
pub fn edit_distance_reference(a: &[String], b: &[String]) -> usize {
    fn go(i: usize, j: usize, a: &[String], b: &[String], memo: &mut HashMap<(usize, usize), usize>) -> usize {
        if i == a.len() {
            return b.len() - j;
        }
        if j == b.len() {
            return a.len() - i;
        }
        if let Some(&v) = memo.get(&(i, j)) {
            return v;
        }
        let v = if a[i] == b[j] {
            go(i + 1, j + 1, a, b, memo)
        } else {
            1 + go(i + 1, j + 1, a, b, memo)
                .min(go(i + 1, j, a, b, memo))
                .min(go(i, j + 1, a, b, memo))
        };
        memo.insert((i, j), v);
        v
    }
    go(0, 0, a, b, &mut HashMap::new())
}

/// Counts n-gram repeats by comparing every window with every earlier window.
pub fn ngram_duplicates_reference(words: &[&str], n: usize) -> usize {
    if words.len() < n {
        return 0;
    }
    let windows: Vec<&[&str]> = words.windows(n).collect();
    (0..windows.len())
        .filter(|&i| (0..i).any(|j| windows[j] == windows[i]))
        .count()
}

pub fn random_words<R: Rng>(rng: &mut R, min: usize, max: usize) -> Vec<String> {
    const VOCAB: [&str; 5] = ["a", "b", "c", "d", "e"];
    let n = rng.gen_range(min..=max);
    (0..n).map(|_| VOCAB[rng.gen_range(0..VOCAB.len())].to_string()).collect()
}

/// Time-sorted, non-overlapping words from a small vocabulary.
pub fn random_alignment<R: Rng>(rng: &mut R, n: usize) -> Vec<AlignedWord> {
    const VOCAB: [&str; 4] = ["the", "cat", "sat", "mat"];
    let mut t = 0.0;
    (0..n)
        .map(|_| {
            t += rng.gen_range(0.0..0.4);
            let start = t;
            t += rng.gen_range(0.05..0.8);
            AlignedWord {
                word: VOCAB[rng.gen_range(0..VOCAB.len())].to_string(),
                start,
                end: t,
                score: 1.0,
                inferred: false,
            }
        })
        .collect()
}

/// A noisy copy of `reference`: jittered times, some words replaced or dropped.
pub fn perturb<R: Rng>(rng: &mut R, reference: &[AlignedWord]) -> Vec<AlignedWord> {
    let mut out = Vec::new();
    for w in reference {
        if !rng.gen_bool(0.9) {
            continue;
        }
        let shift = rng.gen_range(-0.5..0.5);
        let mut w = w.clone();
        w.start = (w.start + shift).max(0.0);
        w.end = (w.end + shift + rng.gen_range(-0.05..0.05)).max(w.start);
        if rng.gen_bool(0.1) {
            w.word = "mat".into();
        }
        out.push(w);
    }
    out.sort_by(|a, b| a.start.total_cmp(&b.start));
    out
}

// ---------------------------------------------------------------------------
// Segments
// ---------------------------------------------------------------------------

/// Sorted, non-overlapping segments; durations up to `max_dur`, gaps up to
/// `max_gap` (zero gaps included).
pub fn random_segments<R: Rng>(rng: &mut R, n: usize, max_dur: f64, max_gap: f64) -> Vec<SpeechSegment> {
    let mut t = rng.gen_range(0.0..5.0);
    (0..n)
        .map(|_| {
            if rng.gen_bool(0.8) {
                t += rng.gen_range(0.0..max_gap);
            }
            let start = t;
            t += rng.gen_range(0.01..max_dur);
            SpeechSegment { start, end: t }
        })
        .collect()
}
