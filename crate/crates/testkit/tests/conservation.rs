use phh_core::variant::VariantCode;
use phh_testkit::conservation::check;
use phh_testkit::gen::{generate, GenOptions};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn chips_are_conserved(pick in 0..VariantCode::ALL.len(), seed in any::<u64>()) {
        let hand = generate(VariantCode::ALL[pick], seed, &GenOptions::default());
        let checked = check(&hand.document).map_err(TestCaseError::fail)?;
        prop_assert_eq!(checked.snapshots, hand.document.actions.len() + 1);
    }
}

#[test]
fn fixtures_conserve_chips() {
    for (name, bytes) in phh_testkit::fixtures() {
        let doc =
            phh_core::document::parse_document_bytes(&bytes, phh_core::action::ParsePolicy::Strict)
                .unwrap()
                .document;
        let checked = check(&doc).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(checked.settled, "{name}");
    }
}
