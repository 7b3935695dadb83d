//! Newline, word and byte counts computed the way `wc` does in the C locale.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Counts {
    pub newlines: u64,
    pub words: u64,
    pub bytes: u64,
}

fn is_space(b: u8) -> bool {
    matches!(b, b' ' | b'\t' | b'\n' | b'\r' | 0x0b | 0x0c)
}

pub fn count(bytes: &[u8]) -> Counts {
    let mut counts = Counts {
        bytes: bytes.len() as u64,
        ..Counts::default()
    };
    let mut in_word = false;
    for &b in bytes {
        if b == b'\n' {
            counts.newlines += 1;
        }
        if is_space(b) {
            in_word = false;
        } else if !in_word {
            in_word = true;
            counts.words += 1;
        }
    }
    counts
}
