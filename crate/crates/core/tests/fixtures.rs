use std::path::PathBuf;

use phh_core::action::ParsePolicy;
use phh_core::conformance::{check_file, round_trip, CheckOptions, FinishingStackCheck, Verdict};
use phh_core::document::{parse_document_bytes, serialize_document, SerializeStyle};
use phh_core::engine::{replay, EngineConfig};

fn fixtures() -> Vec<(String, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let mut out: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "phh"))
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                std::fs::read(&p).unwrap(),
            )
        })
        .collect();
    out.sort();
    out
}

#[test]
fn every_fixture_passes() {
    let all = fixtures();
    assert_eq!(all.len(), 12);
    for (name, bytes) in &all {
        let report = check_file(name, bytes, &CheckOptions::default());
        assert_eq!(report.verdict, Verdict::Pass, "{}", report.to_text());
        assert!(report.round_trip_ok);
        if name.starts_with("generated_") {
            assert_eq!(
                report.finishing_stack_check,
                FinishingStackCheck::Match,
                "{name}"
            );
        }
    }
}

#[test]
fn generated_fixtures_are_already_canonical() {
    for (name, bytes) in fixtures() {
        let doc = parse_document_bytes(&bytes, ParsePolicy::Strict)
            .unwrap()
            .document;
        let text = serialize_document(&doc, SerializeStyle::Canonical).unwrap();
        if name.starts_with("generated_") {
            assert_eq!(text.as_bytes(), &bytes[..], "{name}");
        }
        let trip = round_trip(&bytes);
        assert_eq!(trip.canonical.as_deref(), Some(text.as_str()), "{name}");
    }
}

#[test]
fn every_fixture_replays_strictly_to_its_end() {
    for (name, bytes) in fixtures() {
        let doc = parse_document_bytes(&bytes, ParsePolicy::Strict)
            .unwrap()
            .document;
        let r = replay(&doc, &EngineConfig::strict()).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(r.state.is_terminal(), "{name}");
        assert_eq!(r.snapshots.len(), doc.actions.len() + 1, "{name}");
    }
}
