use phh_core::card::parse_cards;
use phh_core::eval::{EvaluationOrder, Selection};
use phh_testkit::oracle::{agreement, best};

fn key(order: EvaluationOrder, cards: &str) -> phh_testkit::oracle::OracleKey {
    best(
        order,
        &parse_cards(cards).unwrap(),
        &[],
        Selection::HoleOnly,
    )
    .unwrap()
}

#[test]
fn oracle_agrees_with_evaluator_on_every_order() {
    for order in EvaluationOrder::ALL {
        let report = agreement(order, 1500, 42);
        assert!(
            report.comparisons > 100,
            "{order:?}: {} comparisons",
            report.comparisons
        );
        assert!(
            report.disagreements.is_empty(),
            "{order:?}: {:#?}",
            &report.disagreements[..report.disagreements.len().min(5)]
        );
    }
}

#[test]
fn oracle_reproduces_reference_orderings() {
    use EvaluationOrder::*;
    assert!(key(DeuceToSevenLow, "2h4d7c5c3c") > key(DeuceToSevenLow, "7h6c4c3d2c"));
    assert!(key(StandardHigh, "AsKsQsJsTs") > key(StandardHigh, "KsQsJsTs9s"));
    assert!(key(StandardHigh, "5s4s3s2sAs") > key(StandardHigh, "AhAdAcAsKs"));
    assert!(key(ShortDeckHigh, "Ks9s8s7s6s") > key(ShortDeckHigh, "AhAdAcKsKd"));
    assert!(key(AceToFiveLow, "Ah2c3d4s5h") > key(AceToFiveLow, "Ah2c3d4s6h"));
    assert!(best(
        EightOrBetterLow,
        &parse_cards("9s7h5d3c2s").unwrap(),
        &[],
        Selection::HoleOnly
    )
    .is_none());
    assert!(key(Badugi, "As2c3d4h") > key(Badugi, "As2c3d5h"));
}
