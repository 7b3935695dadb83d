//! Per-hand size statistics, counted the way `wc` counts.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorpusStats {
    pub files: usize,
    pub newlines: f64,
    pub words: f64,
    pub bytes: f64,
}

impl CorpusStats {
    pub fn to_text(&self) -> String {
        format!(
            "files: {}\nnewlines/hand: {:.3}\nwords/hand: {:.3}\nbytes/hand: {:.3}\n",
            self.files, self.newlines, self.words, self.bytes
        )
    }
}

/// Newline count, whitespace-delimited word count and byte count of one
/// file. Whitespace is the six ASCII characters of the C locale.
pub fn counts(bytes: &[u8]) -> (u64, u64, u64) {
    let newlines = bytes.iter().filter(|&&b| b == b'\n').count() as u64;
    let words = bytes
        .split(|b| b.is_ascii_whitespace() || *b == 0x0b)
        .filter(|w| !w.is_empty())
        .count() as u64;
    (newlines, words, bytes.len() as u64)
}

/// Averages over every file; all zero for an empty corpus.
pub fn corpus_stats(files: &[&[u8]]) -> CorpusStats {
    let (mut n, mut w, mut b) = (0u64, 0u64, 0u64);
    for f in files {
        let (fn_, fw, fb) = counts(f);
        n += fn_;
        w += fw;
        b += fb;
    }
    let per = |total: u64| {
        if files.is_empty() {
            0.0
        } else {
            total as f64 / files.len() as f64
        }
    };
    CorpusStats {
        files: files.len(),
        newlines: per(n),
        words: per(w),
        bytes: per(b),
    }
}
