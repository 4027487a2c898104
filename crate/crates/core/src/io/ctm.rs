use std::path::Path;

use super::FormatError;
use crate::types::AlignedWord;

/// Reads reference word alignments.
///
/// Each non-empty line is either `word start end` (seconds), or a NIST CTM
/// record `file channel start duration word [confidence]`. Lines starting with
/// `;;` or `#` are comments.
pub fn parse_ctm(text: &str, path: &Path) -> Result<Vec<AlignedWord>, FormatError> {
    let mut words = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with(";;") || line.starts_with('#') {
            continue;
        }
        let err = |detail: String| FormatError::Reference {
            path: path.to_owned(),
            line: n + 1,
            detail,
        };
        let num = |s: &str| {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| err(format!("not a number: {s:?}")))
        };
        let f: Vec<&str> = line.split_whitespace().collect();
        let (word, start, end) = match f.len() {
            3 => (f[0], num(f[1])?, num(f[2])?),
            5 | 6 => {
                let start = num(f[2])?;
                (f[4], start, start + num(f[3])?)
            }
            k => return Err(err(format!("expected 3 or 5-6 fields, got {k}"))),
        };
        if end < start {
            return Err(err(format!("end {end} before start {start}")));
        }
        words.push(AlignedWord {
            word: word.to_owned(),
            start,
            end,
            score: 1.0,
            inferred: false,
        });
    }
    Ok(words)
}

pub fn read_ctm(path: impl AsRef<Path>) -> Result<Vec<AlignedWord>, FormatError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| FormatError::io(path, e))?;
    parse_ctm(&text, path)
}
