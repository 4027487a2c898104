//! Blank-aware Viterbi over a restricted class set.
//!
//! The transcript tokens `t_0..t_{M-1}` are expanded to `2M + 1` states,
//! `blank t_0 blank t_1 ... t_{M-1} blank`; odd states emit tokens, even
//! states emit blank. A path visits one state per frame, starts in state 0
//! or 1, ends in state `2M - 1` or `2M`, and moves by 0 or 1 state per frame,
//! or by 2 when jumping from one token directly to a different next token.
//! Emissions are log-softmax scores taken over the transcript's own classes
//! plus blank only.
//!
//! Ties between equally scoring paths are broken deterministically: walking
//! back from the last frame, token states win over blank states and lower
//! states win over higher ones. Tokens therefore hold their frames and hand
//! over to the next token as late as possible.

use serde::{Deserialize, Serialize};

use super::tokenize::TokenizedTranscript;
use super::AlignError;
use crate::types::LogitsMatrix;

/// Log-softmax of each frame over `classes` only. Row-major, `T x classes.len()`.
pub fn restricted_log_softmax(logits: &LogitsMatrix, classes: &[usize]) -> Result<Vec<f64>, AlignError> {
    let n = classes.len();
    let mut out = Vec::with_capacity(logits.frames() * n);
    for t in 0..logits.frames() {
        let row = logits.row(t);
        let start = out.len();
        let mut max = f64::NEG_INFINITY;
        for &c in classes {
            let v = f64::from(row[c]);
            if !v.is_finite() {
                return Err(AlignError::DegenerateLogits { frame: t });
            }
            max = max.max(v);
            out.push(v);
        }
        let sum: f64 = out[start..].iter().map(|v| (v - max).exp()).sum();
        let norm = max + sum.ln();
        for v in &mut out[start..] {
            *v -= norm;
        }
    }
    Ok(out)
}

/// One frame of an alignment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathStep {
    pub frame: usize,
    /// Token position this frame belongs to. Blank frames count toward the
    /// preceding token (or token 0 before the first emission).
    pub token: usize,
    /// False for blank frames.
    pub emitting: bool,
    /// Restricted log-probability of the emitted class at this frame.
    pub log_prob: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlignmentPath {
    pub steps: Vec<PathStep>,
    /// Sum of `log_prob` over all steps, accumulated in frame order.
    pub score: f64,
}

impl AlignmentPath {
    /// Frames in which `token` is emitted.
    pub fn emitting_frames(&self, token: usize) -> impl Iterator<Item = &PathStep> + '_ {
        self.steps
            .iter()
            .filter(move |s| s.emitting && s.token == token)
    }
}

/// Minimum number of frames needed to emit `tokens`: one per token plus a
/// blank between each pair of equal neighbours.
pub fn min_frames(tokens: &[usize]) -> usize {
    tokens.len() + tokens.windows(2).filter(|w| w[0] == w[1]).count()
}

/// Tie-break rank of a state; smaller wins.
fn rank(state: usize) -> (bool, usize) {
    (state % 2 == 0, state)
}

/// Best monotone path of `tok` through `logits`.
pub fn align(tok: &TokenizedTranscript, logits: &LogitsMatrix) -> Result<AlignmentPath, AlignError> {
    let tokens = &tok.tokens;
    if tokens.is_empty() {
        return Err(AlignError::EmptyTranscript);
    }
    let frames = logits.frames();
    let required = min_frames(tokens);
    if required > frames {
        return Err(AlignError::Unalignable { required, frames });
    }

    let mut classes = tok.classes();
    let blank = logits.blank();
    if tokens.contains(&blank) {
        return Err(AlignError::BlankInTranscript);
    }
    classes.push(blank);
    let width = classes.len();
    let emissions = restricted_log_softmax(logits, &classes)?;
    let blank_col = width - 1;
    let col_of = |class: usize| classes.iter().position(|&c| c == class).unwrap();
    let token_cols: Vec<usize> = tokens.iter().map(|&c| col_of(c)).collect();

    let states = 2 * tokens.len() + 1;
    let state_col = |s: usize| if s % 2 == 0 { blank_col } else { token_cols[s / 2] };
    let skip_allowed = |s: usize| s % 2 == 1 && s >= 3 && tokens[s / 2] != tokens[s / 2 - 1];
    let emit = |t: usize, s: usize| emissions[t * width + state_col(s)];

    let mut prev = vec![f64::NEG_INFINITY; states];
    let mut cur = vec![f64::NEG_INFINITY; states];
    // Backpointer: how many states back the predecessor was (0, 1 or 2).
    let mut back = vec![0u8; frames * states];
    prev[0] = emit(0, 0);
    prev[1] = emit(0, 1);

    for t in 1..frames {
        for s in 0..states {
            let mut cands = [(s, 0u8), (usize::MAX, 1), (usize::MAX, 2)];
            if s >= 1 {
                cands[1].0 = s - 1;
            }
            if skip_allowed(s) {
                cands[2].0 = s - 2;
            }
            let mut best: Option<(f64, usize, u8)> = None;
            for &(p, d) in cands.iter().filter(|(p, _)| *p != usize::MAX) {
                let v = prev[p];
                if v == f64::NEG_INFINITY {
                    continue;
                }
                best = match best {
                    None => Some((v, p, d)),
                    Some((bv, bp, _)) if v > bv || (v == bv && rank(p) < rank(bp)) => Some((v, p, d)),
                    keep => keep,
                };
            }
            cur[s] = match best {
                Some((v, _, d)) => {
                    back[t * states + s] = d;
                    v + emit(t, s)
                }
                None => f64::NEG_INFINITY,
            };
        }
        std::mem::swap(&mut prev, &mut cur);
    }

    let (last_token, last_blank) = (states - 2, states - 1);
    let mut state = if prev[last_blank] > prev[last_token] {
        last_blank
    } else {
        last_token
    };
    let score = prev[state];
    debug_assert!(score.is_finite());

    let mut path = vec![0usize; frames];
    for t in (0..frames).rev() {
        path[t] = state;
        if t > 0 {
            state -= back[t * states + state] as usize;
        }
    }
    debug_assert!(path[0] <= 1);

    let steps = path
        .iter()
        .enumerate()
        .map(|(frame, &s)| PathStep {
            frame,
            token: if s % 2 == 1 { s / 2 } else { (s / 2).saturating_sub(1) },
            emitting: s % 2 == 1,
            log_prob: emit(frame, s),
        })
        .collect();
    Ok(AlignmentPath { steps, score })
}
