//! Parser throughput over a corpus already loaded into memory.

use std::fmt;
use std::time::{Duration, Instant};

use serde::Serialize;

use phh_core::action::ParsePolicy;
use phh_core::conformance::{check_file, validate_positions, CheckOptions, Verdict};
use phh_core::diagnostic::has_errors;
use phh_core::document::parse_document_bytes;
use phh_core::engine::{replay, EngineConfig, Strictness};

use crate::par_map;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchOptions {
    pub repeat: u32,
    pub with_replay: bool,
    pub parallel: bool,
}

impl Default for BenchOptions {
    fn default() -> Self {
        BenchOptions {
            repeat: 1,
            with_replay: false,
            parallel: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchResult {
    /// Hands parsed, counting every repeat.
    pub hands: usize,
    pub seconds: f64,
    pub hands_per_second: f64,
    pub ms_per_hand: f64,
    /// Extra time spent replaying, when asked for.
    pub replay_seconds: Option<f64>,
}

impl BenchResult {
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "hands: {}\nseconds: {:.6}\nhands/s: {:.2}\nms/hand: {:.6}\n",
            self.hands, self.seconds, self.hands_per_second, self.ms_per_hand
        );
        if let Some(r) = self.replay_seconds {
            s.push_str(&format!("replay seconds: {r:.6}\n"));
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BenchError {
    Empty,
    /// A file that does not pass conformance; the corpus is refused.
    Invalid(String),
    /// A file passed up front but failed during timing.
    Failed(String),
}

impl fmt::Display for BenchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BenchError::Empty => f.write_str("nothing to benchmark"),
            BenchError::Invalid(name) => {
                write!(f, "{name} does not pass validation; refusing to benchmark")
            }
            BenchError::Failed(name) => write!(f, "{name} failed during the timed run"),
        }
    }
}

impl std::error::Error for BenchError {}

/// Parse and validation work for one hand. Returns false on any error.
fn parse_and_validate(bytes: &[u8]) -> bool {
    match parse_document_bytes(bytes, ParsePolicy::Strict) {
        Ok(parsed) => {
            !has_errors(&parsed.diagnostics) && !has_errors(&validate_positions(&parsed.document))
        }
        Err(_) => false,
    }
}

fn replay_one(bytes: &[u8]) -> bool {
    let config = EngineConfig {
        strictness: Strictness::Silent,
        raise_cap: None,
    };
    parse_document_bytes(bytes, ParsePolicy::Strict)
        .is_ok_and(|p| replay(&p.document, &config).is_ok())
}

fn timed(
    corpus: &[(String, Vec<u8>)],
    options: &BenchOptions,
    work: fn(&[u8]) -> bool,
) -> Result<Duration, BenchError> {
    let start = Instant::now();
    for _ in 0..options.repeat {
        let ok: Vec<bool> = if options.parallel {
            par_map(corpus, |(_, b)| work(b))
        } else {
            corpus.iter().map(|(_, b)| work(b)).collect()
        };
        if let Some(i) = ok.iter().position(|&x| !x) {
            return Err(BenchError::Failed(corpus[i].0.clone()));
        }
    }
    Ok(start.elapsed())
}

/// Times parsing plus validation of every file, `repeat` times over.
///
/// Every distinct file is checked for conformance first and the whole run is
/// refused if any fails, so the timing only ever covers valid input.
pub fn bench(
    corpus: &[(String, Vec<u8>)],
    options: &BenchOptions,
) -> Result<BenchResult, BenchError> {
    if corpus.is_empty() || options.repeat == 0 {
        return Err(BenchError::Empty);
    }
    let mut seen = std::collections::HashSet::new();
    for (name, bytes) in corpus {
        if seen.insert(bytes.as_slice())
            && check_file(name, bytes, &CheckOptions::default()).verdict == Verdict::Fail
        {
            return Err(BenchError::Invalid(name.clone()));
        }
    }
    let elapsed = timed(corpus, options, parse_and_validate)?.as_secs_f64();
    let replay_seconds = if options.with_replay {
        Some(timed(corpus, options, replay_one)?.as_secs_f64())
    } else {
        None
    };
    let hands = corpus.len() * options.repeat as usize;
    Ok(BenchResult {
        hands,
        seconds: elapsed,
        hands_per_second: hands as f64 / elapsed.max(f64::MIN_POSITIVE),
        ms_per_hand: elapsed * 1000.0 / hands as f64,
        replay_seconds,
    })
}
