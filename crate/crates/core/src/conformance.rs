//! Validation verdicts and round-trip testing for whole files.
//!
//! A file passes when it parses, replays without rule errors and survives
//! the round trip: replay to snapshots, rebuild the action list from the
//! snapshots, emit canonically, parse again and compare.

use std::fmt::{self, Write as _};

use serde::Serialize;

use crate::action::{parse_action, ParsePolicy};
use crate::diagnostic::{Code, Diagnostic, Location, Severity};
use crate::document::{
    parse_document_bytes, serialize_document, ActionEntry, HandDocument, SerializeStyle,
};
use crate::engine::{replay, EngineConfig, Strictness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Pass,
    PassWithWarnings,
    Fail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::PassWithWarnings => "pass-with-warnings",
            Verdict::Fail => "fail",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FinishingStackCheck {
    NotApplicable,
    Match,
    Mismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConformanceReport {
    pub file: String,
    pub verdict: Verdict,
    pub diagnostics: Vec<Diagnostic>,
    pub round_trip_ok: bool,
    pub finishing_stack_check: FinishingStackCheck,
}

impl ConformanceReport {
    fn new(
        file: &str,
        diagnostics: Vec<Diagnostic>,
        round_trip_ok: bool,
        check: FinishingStackCheck,
    ) -> Self {
        let verdict = if !round_trip_ok || diagnostics.iter().any(Diagnostic::is_error) {
            Verdict::Fail
        } else if diagnostics.is_empty() {
            Verdict::Pass
        } else {
            Verdict::PassWithWarnings
        };
        ConformanceReport {
            file: file.to_owned(),
            verdict,
            diagnostics,
            round_trip_ok,
            finishing_stack_check: check,
        }
    }

    /// One summary line, then one indented line per diagnostic.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{}: {} (round trip {}, finishing stacks {:?})\n",
            self.file,
            self.verdict,
            if self.round_trip_ok { "ok" } else { "failed" },
            self.finishing_stack_check,
        );
        for d in &self.diagnostics {
            let _ = writeln!(out, "  {d}");
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    pub policy: ParsePolicy,
    pub engine: EngineConfig,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            policy: ParsePolicy::Strict,
            engine: EngineConfig::default(),
        }
    }
}

/// Full conformance check of one file.
pub fn check_file(file: &str, bytes: &[u8], options: &CheckOptions) -> ConformanceReport {
    let parsed = match parse_document_bytes(bytes, options.policy) {
        Ok(p) => p,
        Err(e) => {
            return ConformanceReport::new(
                file,
                e.diagnostics,
                false,
                FinishingStackCheck::NotApplicable,
            )
        }
    };
    let doc = parsed.document;
    let mut diagnostics = parsed.diagnostics;
    diagnostics.extend(validate_positions(&doc));

    let mut check = FinishingStackCheck::NotApplicable;
    if doc.variant.code().is_some() {
        let config = EngineConfig {
            strictness: match options.engine.strictness {
                Strictness::Strict => Strictness::Warn,
                other => other,
            },
            ..options.engine
        };
        match replay(&doc, &config) {
            Ok(r) => {
                if let (Some(_), Some(_)) = (&doc.optional.finishing_stacks, &r.settlement) {
                    check = if r
                        .diagnostics
                        .iter()
                        .any(|d| d.code == Code::FinishingStackMismatch)
                    {
                        FinishingStackCheck::Mismatch
                    } else {
                        FinishingStackCheck::Match
                    };
                }
                diagnostics.extend(r.diagnostics);
            }
            Err(e) => diagnostics.extend(e.diagnostics),
        }
    }

    let trip = round_trip_document(&doc, bytes, &options.engine);
    if !trip.ok {
        diagnostics.push(Diagnostic::new(
            Severity::Error,
            Code::RoundTripMismatch,
            Location::Document,
            trip.differences.join("; "),
        ));
    }
    ConformanceReport::new(file, diagnostics, trip.ok, check)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoundTrip {
    pub ok: bool,
    pub differences: Vec<String>,
    /// The regenerated canonical text, if one was produced.
    #[serde(skip)]
    pub canonical: Option<String>,
}

/// Round-trips raw file bytes.
pub fn round_trip(bytes: &[u8]) -> RoundTrip {
    match parse_document_bytes(bytes, ParsePolicy::Lenient) {
        Ok(parsed) => round_trip_document(&parsed.document, bytes, &EngineConfig::default()),
        Err(e) => RoundTrip {
            ok: false,
            differences: vec![format!("does not parse: {e}")],
            canonical: None,
        },
    }
}

/// Replays `doc`, rebuilds its actions from the snapshot stream, emits the
/// result canonically and parses it back.
pub fn round_trip_document(
    doc: &HandDocument,
    original: &[u8],
    config: &EngineConfig,
) -> RoundTrip {
    let mut differences = Vec::new();
    let fail = |differences: Vec<String>| RoundTrip {
        ok: false,
        differences,
        canonical: None,
    };
    let rebuilt = match regenerate(doc, config) {
        Ok(d) => d,
        Err(why) => return fail(vec![why]),
    };
    let canonical = match serialize_document(&rebuilt, SerializeStyle::Canonical) {
        Ok(text) => text,
        Err(e) => return fail(vec![e.to_string()]),
    };
    let reparsed = match parse_document_bytes(canonical.as_bytes(), ParsePolicy::Lenient) {
        Ok(p) => p.document,
        Err(e) => return fail(vec![format!("canonical output does not parse: {e}")]),
    };
    differences.extend(describe_differences(doc, &reparsed));
    match serialize_document(&reparsed, SerializeStyle::Canonical) {
        Ok(again) if again == canonical => {}
        Ok(_) => differences.push("canonical form is not a fixed point".to_owned()),
        Err(e) => differences.push(e.to_string()),
    }
    if let Ok(direct) = serialize_document(doc, SerializeStyle::Canonical) {
        if direct.as_bytes() == original && canonical.as_bytes() != original {
            differences.push("canonical input was not reproduced byte for byte".to_owned());
        }
    }
    RoundTrip {
        ok: differences.is_empty(),
        differences,
        canonical: Some(canonical),
    }
}

/// Rebuilds the action list from the text each snapshot exports. Entries
/// that never reached the engine are carried over as written.
fn regenerate(doc: &HandDocument, config: &EngineConfig) -> Result<HandDocument, String> {
    let mut rebuilt = doc.clone();
    rebuilt.touch();
    if doc.variant.code().is_none() {
        return Ok(rebuilt);
    }
    let config = EngineConfig {
        strictness: Strictness::Silent,
        ..*config
    };
    let replayed = replay(doc, &config).map_err(|e| format!("replay failed: {e}"))?;
    for snapshot in replayed.snapshots.iter().skip(1) {
        let (Some(index), Some(text)) = (snapshot.action_index, &snapshot.action) else {
            return Err(format!("snapshot {} carries no action", snapshot.step));
        };
        let record = parse_action(text).map_err(|e| format!("snapshot action {text:?}: {e}"))?;
        let original = &doc.actions[index];
        rebuilt.actions[index] = ActionEntry {
            text: text.clone(),
            record: Some(record),
            leading_comments: original.leading_comments.clone(),
            trailing_comment: original.trailing_comment.clone(),
        };
    }
    Ok(rebuilt)
}

fn describe_differences(a: &HandDocument, b: &HandDocument) -> Vec<String> {
    if a == b {
        return Vec::new();
    }
    let mut out = Vec::new();
    if a.actions.len() != b.actions.len() {
        out.push(format!(
            "{} actions became {}",
            a.actions.len(),
            b.actions.len()
        ));
    } else {
        for (i, (x, y)) in a.actions.iter().zip(&b.actions).enumerate() {
            if x != y {
                out.push(format!("action {i}: {:?} became {:?}", x.text, y.text));
            }
        }
    }
    if out.is_empty() {
        out.push("fields differ after the round trip".to_owned());
    }
    out
}

/// Positional checks: per-player array lengths, and in button games a
/// blind layout where the forced bets start at the first seat, optionally
/// followed by straddles, with an optional button straddle.
pub fn validate_positions(doc: &HandDocument) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let n = doc.player_count();
    for (field, len) in doc.per_player_lengths() {
        if len != n {
            out.push(Diagnostic::field(
                Severity::Error,
                Code::LengthMismatch,
                field,
                format!("{len} entries for {n} players"),
            ));
        }
    }
    let button = doc.variant.code().is_some_and(|v| v.is_button_game());
    if let (true, Some(blinds)) = (button, &doc.blinds_or_straddles) {
        if !standard_blinds(blinds.iter().map(|b| b.is_positive()).collect()) {
            let shown: Vec<String> = blinds.iter().map(ToString::to_string).collect();
            out.push(Diagnostic::field(
                Severity::Warning,
                Code::NonstandardBlindPlacement,
                "blinds_or_straddles",
                format!(
                    "[{}] does not start the forced bets at the first player",
                    shown.join(", ")
                ),
            ));
        }
    }
    out
}

fn standard_blinds(mut posted: Vec<bool>) -> bool {
    let n = posted.len();
    if n > 2 && posted[n - 1] {
        posted[n - 1] = false;
    }
    let prefix = posted.iter().take_while(|&&p| p).count();
    posted[prefix..].iter().all(|&p| !p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::money::Money;

    const GOLDEN: &str = include_str!("../tests/fixtures/arieh_yockey_2019.phh");

    fn blinds_doc(blinds: &str) -> HandDocument {
        let n = blinds.split(',').count();
        let zeros = vec!["0"; n].join(", ");
        let stacks = vec!["100"; n].join(", ");
        let src = format!(
            "variant = \"NT\"\nantes = [{zeros}]\nblinds_or_straddles = [{blinds}]\n\
             min_bet = 2\nstarting_stacks = [{stacks}]\nactions = []\n"
        );
        crate::document::parse_document(&src, ParsePolicy::Strict)
            .unwrap()
            .document
    }

    #[test]
    fn golden_file_passes() {
        let report = check_file("golden", GOLDEN.as_bytes(), &CheckOptions::default());
        assert_eq!(report.verdict, Verdict::Pass, "{}", report.to_text());
        assert!(report.round_trip_ok);
        assert_eq!(
            report.finishing_stack_check,
            FinishingStackCheck::NotApplicable
        );
    }

    #[test]
    fn golden_round_trip_keeps_comments() {
        let trip = round_trip(GOLDEN.as_bytes());
        assert!(trip.ok, "{:?}", trip.differences);
        let canon = trip.canonical.unwrap();
        assert!(canon.contains("\"p3 f\",  # Esposito"));
        assert!(canon.starts_with("# A bad beat between Yockey and Arieh.\n"));
        let again = round_trip(canon.as_bytes());
        assert!(again.ok);
        assert_eq!(again.canonical.unwrap(), canon);
    }

    #[test]
    fn finishing_stacks_are_checked() {
        let with = |stacks: &str| {
            GOLDEN.replace(
                "players = [",
                &format!("finishing_stacks = [{stacks}]\nplayers = ["),
            )
        };
        let ok = check_file(
            "x",
            with("0, 4190000, 5910000, 12095000").as_bytes(),
            &CheckOptions::default(),
        );
        assert_eq!(ok.finishing_stack_check, FinishingStackCheck::Match);
        assert_eq!(ok.verdict, Verdict::Pass);
        let bad = check_file(
            "x",
            with("0, 4190000, 5910000, 1").as_bytes(),
            &CheckOptions::default(),
        );
        assert_eq!(bad.finishing_stack_check, FinishingStackCheck::Mismatch);
        assert_eq!(bad.verdict, Verdict::Fail);
    }

    #[test]
    fn corrupted_action_fails() {
        let src = GOLDEN.replace("\"p3 f\"", "\"p3 fx\"");
        let report = check_file("x", src.as_bytes(), &CheckOptions::default());
        assert_eq!(report.verdict, Verdict::Fail);
        assert!(report
            .diagnostics
            .iter()
            .any(|d| d.code == Code::UnknownVerb));
    }

    #[test]
    fn garbage_fails_cleanly() {
        for bytes in [&b"\xff\xfe"[..], b"[[[", b"variant = 1", b""] {
            let report = check_file("x", bytes, &CheckOptions::default());
            assert_eq!(report.verdict, Verdict::Fail);
            assert!(!report.round_trip_ok);
        }
    }

    #[test]
    fn blind_placement() {
        let warned = |b: &str| {
            validate_positions(&blinds_doc(b))
                .iter()
                .any(|d| d.code == Code::NonstandardBlindPlacement)
        };
        assert!(!warned("1, 2, 0, 0, 0, 0"));
        assert!(!warned("1, 2"));
        assert!(!warned("1, 2, 4, 0"));
        assert!(!warned("1, 2, 4, 8, 0, 0"));
        assert!(!warned("1, 2, 0, 0, 0, 4"));
        assert!(warned("0, 0, 1, 2"));
        assert!(warned("1, 0, 2, 0"));
    }

    #[test]
    fn lengths_are_rechecked_for_built_documents() {
        let mut doc = blinds_doc("1, 2");
        doc.antes.push(Money::ZERO);
        let diags = validate_positions(&doc);
        assert!(diags.iter().any(|d| d.code == Code::LengthMismatch));
    }

    #[test]
    fn report_renders_as_text_and_json() {
        let report = check_file("golden.phh", GOLDEN.as_bytes(), &CheckOptions::default());
        assert_eq!(
            report.to_text(),
            "golden.phh: pass (round trip ok, finishing stacks NotApplicable)\n"
        );
        let json = serde_json::to_string(&report).unwrap();
        assert!(json.contains("\"verdict\":\"Pass\""), "{json}");
    }
}
