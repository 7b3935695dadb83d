use phh_core::action::{parse_action, ParsePolicy};
use phh_core::conformance::{check_file, CheckOptions, Verdict};
use phh_core::document::parse_document_bytes;
use proptest::prelude::*;

const GOLDEN: &[u8] = include_bytes!("fixtures/arieh_yockey_2019.phh");

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn arbitrary_bytes_never_panic(bytes in proptest::collection::vec(any::<u8>(), 0..400)) {
        let _ = parse_document_bytes(&bytes, ParsePolicy::Strict);
        let report = check_file("x", &bytes, &CheckOptions::default());
        prop_assert!(report.verdict == Verdict::Fail || !report.diagnostics.iter().any(|d| d.is_error()));
    }

    #[test]
    fn arbitrary_action_text_never_panics(text in "\\PC{0,40}") {
        let _ = parse_action(&text);
    }

    #[test]
    fn action_like_text_never_panics(text in "(d|p[0-9]{1,2}) ?(dh|db|sd|pb|f|cc|cbr|sm)? ?[0-9A-Za-z?.\\- #]{0,20}") {
        if let Ok(record) = parse_action(&text) {
            prop_assert_eq!(parse_action(&record.to_string()).unwrap(), record);
        }
    }

    #[test]
    fn mutated_golden_file_never_panics(edits in proptest::collection::vec((any::<prop::sample::Index>(), any::<u8>()), 1..6)) {
        let mut bytes = GOLDEN.to_vec();
        for (at, b) in edits {
            let i = at.index(bytes.len());
            bytes[i] = b;
        }
        let report = check_file("x", &bytes, &CheckOptions::default());
        if report.verdict != Verdict::Fail {
            prop_assert!(report.round_trip_ok);
        }
    }
}
