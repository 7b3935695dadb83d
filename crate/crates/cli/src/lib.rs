//! The `phh` command-line tool.
//!
//! Each subcommand is a plain function that writes to the given output
//! streams and returns the process exit code, so tests can drive the tool
//! without spawning it.

pub mod bench;
pub mod stats;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use phh_core::action::ParsePolicy;
use phh_core::conformance::{check_file, round_trip, CheckOptions, ConformanceReport, Verdict};
use phh_core::engine::{replay, EngineConfig, Strictness};
use phh_core::money::Money;

pub use bench::{bench, BenchError, BenchOptions, BenchResult};
pub use stats::{corpus_stats, CorpusStats};

/// Every file passed.
pub const EXIT_PASS: i32 = 0;
/// At least one file failed conformance.
pub const EXIT_FAIL: i32 = 1;
/// Bad usage or an I/O error.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "phh",
    version,
    about = "Validate, replay and measure poker hand history files"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check files for conformance and report a verdict per file.
    Validate(ValidateArgs),
    /// Replay one hand and print its snapshots or finishing stacks.
    Replay(ReplayArgs),
    /// Average newline, word and byte counts per hand.
    Stats(StatsArgs),
    /// Time parsing and validation of files held in memory.
    Bench(BenchArgs),
    /// Print a file in canonical form.
    Canon(CanonArgs),
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Files or directories of `.phh` files.
    #[arg(required = true)]
    pub paths: Vec<PathBuf>,
    /// Treat warnings as failures and reject unknown fields (the default).
    #[arg(long, conflicts_with = "lenient")]
    pub strict: bool,
    /// Accept warnings and tolerate unknown fields.
    #[arg(long)]
    pub lenient: bool,
    /// Print reports as a JSON array.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    pub path: PathBuf,
    /// Print one JSON record per step.
    #[arg(long)]
    pub snapshots: bool,
    /// Print the finishing stacks (the default when no other output is asked for).
    #[arg(long = "final")]
    pub final_stacks: bool,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(required = true)]
    pub paths: Vec<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(required = true)]
    pub paths: Vec<PathBuf>,
    /// Passes over the corpus.
    #[arg(long, default_value_t = 1)]
    pub repeat: u32,
    /// Copies of each file to hold in memory.
    #[arg(long, default_value_t = 1)]
    pub copies: usize,
    /// Also time a full replay of every hand, reported separately.
    #[arg(long)]
    pub with_replay: bool,
    /// Split the corpus across all available cores.
    #[arg(long)]
    pub parallel: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct CanonArgs {
    pub path: PathBuf,
    /// Rewrite the file instead of printing.
    #[arg(long)]
    pub in_place: bool,
}

/// Runs a parsed command line.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Validate(a) => validate(&a, out, err),
        Command::Replay(a) => replay_cmd(&a, out, err),
        Command::Stats(a) => stats_cmd(&a, out),
        Command::Bench(a) => bench_cmd(&a, out, err),
        Command::Canon(a) => canon(&a, out, err),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "phh: {e}");
            EXIT_USAGE
        }
    }
}

/// Expands directories into the `.phh` files beneath them, sorted.
pub fn collect_files(paths: &[PathBuf]) -> io::Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for path in paths {
        if path.is_dir() {
            let mut found = Vec::new();
            walk(path, &mut found)?;
            found.sort();
            files.extend(found);
        } else {
            fs::metadata(path)
                .map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", path.display())))?;
            files.push(path.clone());
        }
    }
    Ok(files)
}

fn walk(dir: &Path, found: &mut Vec<PathBuf>) -> io::Result<()> {
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        if path.is_dir() {
            walk(&path, found)?;
        } else if path.extension().is_some_and(|x| x == "phh") {
            found.push(path);
        }
    }
    Ok(())
}

fn read(path: &Path) -> io::Result<Vec<u8>> {
    fs::read(path).map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", path.display())))
}

fn load(paths: &[PathBuf]) -> io::Result<Vec<(String, Vec<u8>)>> {
    collect_files(paths)?
        .into_iter()
        .map(|p| Ok((p.display().to_string(), read(&p)?)))
        .collect()
}

/// Maps `f` over `items` on every available core, keeping order.
pub fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    if threads < 2 || items.len() < 2 {
        return items.iter().map(f).collect();
    }
    let chunk = items.len().div_ceil(threads);
    std::thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| scope.spawn(|| part.iter().map(&f).collect::<Vec<R>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker thread"))
            .collect()
    })
}

fn validate(args: &ValidateArgs, out: &mut dyn Write, _err: &mut dyn Write) -> io::Result<i32> {
    let files = load(&args.paths)?;
    let options = CheckOptions {
        policy: if args.lenient {
            ParsePolicy::Lenient
        } else {
            ParsePolicy::Strict
        },
        engine: EngineConfig::default(),
    };
    let reports: Vec<ConformanceReport> =
        par_map(&files, |(name, bytes)| check_file(name, bytes, &options));
    if args.json {
        serde_json::to_writer_pretty(&mut *out, &reports)?;
        writeln!(out)?;
    } else {
        for r in &reports {
            out.write_all(r.to_text().as_bytes())?;
        }
    }
    let accepted =
        |v: Verdict| v == Verdict::Pass || (args.lenient && v == Verdict::PassWithWarnings);
    Ok(if reports.iter().all(|r| accepted(r.verdict)) {
        EXIT_PASS
    } else {
        EXIT_FAIL
    })
}

fn replay_cmd(args: &ReplayArgs, out: &mut dyn Write, err: &mut dyn Write) -> io::Result<i32> {
    let bytes = read(&args.path)?;
    let name = args.path.display().to_string();
    let report = check_file(&name, &bytes, &CheckOptions::default());
    if report.verdict == Verdict::Fail {
        err.write_all(report.to_text().as_bytes())?;
        return Ok(EXIT_FAIL);
    }
    let doc = phh_core::document::parse_document_bytes(&bytes, ParsePolicy::Strict)
        .map_err(|e| io::Error::other(e.to_string()))?
        .document;
    let config = EngineConfig {
        strictness: Strictness::Silent,
        raise_cap: None,
    };
    let r = replay(&doc, &config).map_err(|e| io::Error::other(e.to_string()))?;
    if args.snapshots {
        for s in &r.snapshots {
            serde_json::to_writer(&mut *out, s)?;
            writeln!(out)?;
        }
    }
    if args.final_stacks || !args.snapshots {
        let Some(stacks) = r.finishing_stacks() else {
            writeln!(err, "{name}: NonTerminalState: the hand has not finished, so there are no finishing stacks")?;
            return Ok(EXIT_FAIL);
        };
        writeln!(out, "{}", format_stacks(stacks))?;
    }
    Ok(EXIT_PASS)
}

/// Space-separated stacks, `?` for any that cannot be determined.
pub fn format_stacks(stacks: &[Option<Money>]) -> String {
    stacks
        .iter()
        .map(|s| s.map_or_else(|| "?".to_owned(), |m| m.to_string()))
        .collect::<Vec<_>>()
        .join(" ")
}

fn stats_cmd(args: &StatsArgs, out: &mut dyn Write) -> io::Result<i32> {
    let files = load(&args.paths)?;
    let bytes: Vec<&[u8]> = files.iter().map(|(_, b)| b.as_slice()).collect();
    let stats = corpus_stats(&bytes);
    if args.json {
        serde_json::to_writer_pretty(&mut *out, &stats)?;
        writeln!(out)?;
    } else {
        out.write_all(stats.to_text().as_bytes())?;
    }
    Ok(EXIT_PASS)
}

fn bench_cmd(args: &BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> io::Result<i32> {
    let files = load(&args.paths)?;
    let mut corpus = Vec::with_capacity(files.len() * args.copies);
    for _ in 0..args.copies {
        corpus.extend(files.iter().cloned());
    }
    let options = BenchOptions {
        repeat: args.repeat,
        with_replay: args.with_replay,
        parallel: args.parallel,
    };
    match bench(&corpus, &options) {
        Ok(result) => {
            if args.json {
                serde_json::to_writer_pretty(&mut *out, &result)?;
                writeln!(out)?;
            } else {
                out.write_all(result.to_text().as_bytes())?;
            }
            Ok(EXIT_PASS)
        }
        Err(e) => {
            writeln!(err, "phh: {e}")?;
            Ok(EXIT_FAIL)
        }
    }
}

fn canon(args: &CanonArgs, out: &mut dyn Write, err: &mut dyn Write) -> io::Result<i32> {
    let bytes = read(&args.path)?;
    let name = args.path.display().to_string();
    let report = check_file(&name, &bytes, &CheckOptions::default());
    let canonical = match (report.verdict, round_trip(&bytes).canonical) {
        (Verdict::Pass | Verdict::PassWithWarnings, Some(text)) => text,
        _ => {
            err.write_all(report.to_text().as_bytes())?;
            return Ok(EXIT_FAIL);
        }
    };
    if args.in_place {
        if canonical.as_bytes() != bytes {
            fs::write(&args.path, canonical)?;
        }
    } else {
        out.write_all(canonical.as_bytes())?;
    }
    Ok(EXIT_PASS)
}
