use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::types::{LogitsMatrix, TranscriptSegment};

/// Labels that may separate words in character-level CTC vocabularies.
const DELIMITER_LABELS: [&str; 2] = ["|", " "];

/// Character view of a model's label set.
///
/// Only single-character labels take part in tokenization; multi-character
/// specials such as `<pad>` or `<unk>` are never produced from text.
#[derive(Debug, Clone)]
pub struct Vocabulary {
    chars: HashMap<char, usize>,
    blank: usize,
    delimiter: Option<usize>,
}

impl Vocabulary {
    pub fn new(labels: &[String], blank: usize) -> Self {
        let delimiter = labels
            .iter()
            .position(|l| DELIMITER_LABELS.contains(&l.as_str()))
            .filter(|&i| i != blank);
        let chars = labels
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != blank && Some(i) != delimiter)
            .filter_map(|(i, l)| {
                let mut cs = l.chars();
                match (cs.next(), cs.next()) {
                    (Some(c), None) => Some((c, i)),
                    _ => None,
                }
            })
            .collect();
        Self {
            chars,
            blank,
            delimiter,
        }
    }

    pub fn from_logits(logits: &LogitsMatrix) -> Self {
        Self::new(logits.labels(), logits.blank())
    }

    pub fn blank(&self) -> usize {
        self.blank
    }

    pub fn delimiter(&self) -> Option<usize> {
        self.delimiter
    }

    /// Class for `c`, trying the character as written, then its upper and
    /// lower case forms.
    pub fn class_of(&self, c: char) -> Option<usize> {
        if let Some(&i) = self.chars.get(&c) {
            return Some(i);
        }
        [single(c.to_uppercase()), single(c.to_lowercase())]
            .into_iter()
            .flatten()
            .find_map(|alt| self.chars.get(&alt).copied())
    }
}

fn single(mut it: impl Iterator<Item = char>) -> Option<char> {
    match (it.next(), it.next()) {
        (Some(c), None) => Some(c),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WordSpan {
    /// Inclusive token index range in [`TokenizedTranscript::tokens`].
    Aligned { first: usize, last: usize },
    /// None of the word's characters exist in the label set.
    Oov,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenizedWord {
    pub text: String,
    pub span: WordSpan,
    /// Character offsets (in `chars()` order) that have no label.
    pub oov_chars: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenizedTranscript {
    /// Class indices into the logits labels. Never the blank class.
    pub tokens: Vec<usize>,
    pub words: Vec<TokenizedWord>,
}

impl TokenizedTranscript {
    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Distinct token classes, ascending.
    pub fn classes(&self) -> Vec<usize> {
        let mut c = self.tokens.clone();
        c.sort_unstable();
        c.dedup();
        c
    }
}

/// Maps transcript words to label classes.
///
/// Characters with no label are recorded per word and skipped. A delimiter
/// token, when the model has one, is placed between consecutive words that
/// produced tokens and belongs to no word.
pub fn tokenize_transcript(t: &TranscriptSegment, vocab: &Vocabulary) -> TokenizedTranscript {
    let mut tokens = Vec::new();
    let mut words = Vec::with_capacity(t.words.len());
    for w in &t.words {
        let mut classes = Vec::new();
        let mut oov_chars = Vec::new();
        for (offset, c) in w.chars().enumerate() {
            match vocab.class_of(c) {
                Some(class) => classes.push(class),
                None => oov_chars.push(offset),
            }
        }
        let span = if classes.is_empty() {
            WordSpan::Oov
        } else {
            if let (Some(d), false) = (vocab.delimiter, tokens.is_empty()) {
                tokens.push(d);
            }
            let first = tokens.len();
            tokens.extend_from_slice(&classes);
            WordSpan::Aligned {
                first,
                last: tokens.len() - 1,
            }
        };
        words.push(TokenizedWord {
            text: w.clone(),
            span,
            oov_chars,
        });
    }
    TokenizedTranscript { tokens, words }
}
