//! Brute-force hand ranking from first principles.
//!
//! Every allowed subset of cards is scored with a plain lexicographic key and
//! the maximum wins. Nothing here shares code with the library evaluator.

use itertools::Itertools;
use phh_core::card::{Card, Suit};
use phh_core::eval::{EvaluationOrder, Selection};

/// Larger is better. Keys are only comparable within one evaluation order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct OracleKey(pub Vec<i32>);

fn value(card: &Card, ace_low: bool) -> i32 {
    let high = card.rank.high_value().expect("known card") as i32;
    if ace_low && high == 14 {
        1
    } else {
        high
    }
}

fn suit(card: &Card) -> Suit {
    card.suit
}

/// Ranks grouped by multiplicity: largest group first, then highest rank.
fn grouped(values: &[i32]) -> Vec<(usize, i32)> {
    let counts = values.iter().counts();
    let mut groups: Vec<(usize, i32)> = counts.into_iter().map(|(&v, n)| (n, v)).collect();
    groups.sort_by(|a, b| b.cmp(a));
    groups
}

fn expanded(groups: &[(usize, i32)]) -> Vec<i32> {
    groups
        .iter()
        .flat_map(|&(n, v)| std::iter::repeat_n(v, n))
        .collect()
}

/// Five-card high hand. `wheel_top` is the top card of the lowest straight
/// (5 normally, 9 in short deck), or `None` when aces only play high.
fn high_five(cards: &[Card], wheel_top: Option<i32>, flush_beats_full_house: bool) -> Vec<i32> {
    let values: Vec<i32> = cards.iter().map(|c| value(c, false)).collect();
    let flush = cards.iter().map(suit).all_equal();
    let groups = grouped(&values);
    let distinct = groups.len() == 5;
    let max = *values.iter().max().expect("five cards");
    let min = *values.iter().min().expect("five cards");
    let straight_top = if !distinct {
        None
    } else if max - min == 4 {
        Some(max)
    } else {
        wheel_top.filter(|&top| {
            let mut rest: Vec<i32> = values.iter().copied().filter(|&v| v != 14).collect();
            rest.sort_unstable();
            max == 14 && rest.len() == 4 && rest[3] == top && rest[3] - rest[0] == 3
        })
    };
    let shape: Vec<usize> = groups.iter().map(|g| g.0).collect();
    let (flush_cat, full_cat) = if flush_beats_full_house {
        (6, 5)
    } else {
        (5, 6)
    };
    let category = match (straight_top, flush, shape.as_slice()) {
        (Some(_), true, _) => 8,
        (_, _, [4, 1]) => 7,
        (_, _, [3, 2]) => full_cat,
        (_, true, _) => flush_cat,
        (Some(_), false, _) => 4,
        (_, _, [3, 1, 1]) => 3,
        (_, _, [2, 2, 1]) => 2,
        (_, _, [2, 1, 1, 1]) => 1,
        _ => 0,
    };
    let mut key = vec![category];
    match straight_top {
        Some(top) => key.push(top),
        None => key.extend(expanded(&groups)),
    }
    key
}

/// Ace-to-five low: pairs are bad, straights and flushes do not count.
fn ace_to_five(cards: &[Card]) -> Vec<i32> {
    let values: Vec<i32> = cards.iter().map(|c| value(c, true)).collect();
    let groups = grouped(&values);
    let shape: Vec<usize> = groups.iter().map(|g| g.0).collect();
    let badness = match shape.as_slice() {
        [1, 1, 1, 1, 1] => 0,
        [2, 1, 1, 1] => 1,
        [2, 2, 1] => 2,
        [3, 1, 1] => 3,
        [3, 2] => 4,
        _ => 5,
    };
    let mut key = vec![badness];
    key.extend(expanded(&groups));
    key.into_iter().map(|v| -v).collect()
}

fn eight_or_better(cards: &[Card]) -> Option<Vec<i32>> {
    let mut values: Vec<i32> = cards.iter().map(|c| value(c, true)).collect();
    values.sort_unstable_by(|a, b| b.cmp(a));
    let distinct = values.iter().all_unique();
    (distinct && values[0] <= 8).then(|| values.into_iter().map(|v| -v).collect())
}

fn badugi(cards: &[Card]) -> Option<Vec<i32>> {
    let ranks_unique = cards.iter().map(|c| value(c, true)).all_unique();
    let suits_unique = cards.iter().map(suit).all_unique();
    if !(ranks_unique && suits_unique) {
        return None;
    }
    let mut values: Vec<i32> = cards.iter().map(|c| value(c, true)).collect();
    values.sort_unstable_by(|a, b| b.cmp(a));
    let mut key = vec![cards.len() as i32];
    key.extend(values.into_iter().map(|v| -v));
    Some(key)
}

fn score(order: EvaluationOrder, five: &[Card]) -> Option<Vec<i32>> {
    use EvaluationOrder::*;
    match order {
        StandardHigh => Some(high_five(five, Some(5), false)),
        ShortDeckHigh => Some(high_five(five, Some(9), true)),
        DeuceToSevenLow => Some(
            high_five(five, None, false)
                .into_iter()
                .map(|v| -v)
                .collect(),
        ),
        AceToFiveLow => Some(ace_to_five(five)),
        EightOrBetterLow => eight_or_better(five),
        Badugi => badugi(five),
    }
}

/// The candidate hands a selection rule allows.
fn candidates(
    order: EvaluationOrder,
    hole: &[Card],
    board: &[Card],
    selection: Selection,
) -> Vec<Vec<Card>> {
    if order == EvaluationOrder::Badugi {
        return (1..=hole.len().min(4))
            .flat_map(|k| hole.iter().copied().combinations(k))
            .collect();
    }
    match selection {
        Selection::BestFive => hole.iter().chain(board).copied().combinations(5).collect(),
        Selection::HoleOnly => hole.iter().copied().combinations(5).collect(),
        Selection::TwoPlusThree => hole
            .iter()
            .copied()
            .combinations(2)
            .cartesian_product(board.iter().copied().combinations(3).collect::<Vec<_>>())
            .map(|(h, b)| h.into_iter().chain(b).collect())
            .collect(),
    }
}

/// Best key over every allowed subset; `None` when nothing qualifies.
pub fn best(
    order: EvaluationOrder,
    hole: &[Card],
    board: &[Card],
    selection: Selection,
) -> Option<OracleKey> {
    candidates(order, hole, board, selection)
        .iter()
        .filter_map(|hand| score(order, hand))
        .max()
        .map(OracleKey)
}

/// Cards and selection rule of a typical deal for `order`.
pub fn deal_shape(order: EvaluationOrder, variant_pick: usize) -> (usize, usize, Selection) {
    use EvaluationOrder::*;
    match order {
        StandardHigh | ShortDeckHigh => match variant_pick % 3 {
            0 => (2, 5, Selection::BestFive),
            1 if order == StandardHigh => (4, 5, Selection::TwoPlusThree),
            1 => (2, 3, Selection::BestFive),
            _ if order == StandardHigh => (7, 0, Selection::HoleOnly),
            _ => (2, 4, Selection::BestFive),
        },
        EightOrBetterLow => {
            if variant_pick.is_multiple_of(2) {
                (4, 5, Selection::TwoPlusThree)
            } else {
                (7, 0, Selection::HoleOnly)
            }
        }
        AceToFiveLow => (7 - variant_pick % 3, 0, Selection::HoleOnly),
        DeuceToSevenLow => (5, 0, Selection::HoleOnly),
        Badugi => (4, 0, Selection::HoleOnly),
    }
}

/// The deck an order is played with.
pub fn deck_for(order: EvaluationOrder) -> Vec<Card> {
    Card::deck()
        .filter(|c| {
            order != EvaluationOrder::ShortDeckHigh || c.rank.high_value().is_some_and(|v| v >= 6)
        })
        .collect()
}

#[derive(Debug, Clone, Default)]
pub struct Agreement {
    pub deals: usize,
    pub comparisons: usize,
    pub disagreements: Vec<String>,
}

/// Deals `deals` random hands for `order` and checks that the library
/// evaluator orders every consecutive pair, and each hand against one
/// earlier hand, exactly as the oracle does.
pub fn agreement(order: EvaluationOrder, deals: usize, seed: u64) -> Agreement {
    use phh_core::eval::{compare, evaluate};
    use rand::rngs::StdRng;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use std::cmp::Ordering;

    let mut rng = StdRng::seed_from_u64(seed);
    let mut deck = deck_for(order);
    let mut seen: Vec<(
        String,
        Option<phh_core::eval::EvaluatedStrength>,
        Option<OracleKey>,
    )> = Vec::with_capacity(deals);
    let mut report = Agreement {
        deals,
        ..Agreement::default()
    };
    for i in 0..deals {
        let (h, b, selection) = deal_shape(order, i);
        deck.shuffle(&mut rng);
        let hole = &deck[..h];
        let board = &deck[h..h + b];
        let label = format!(
            "{}|{}",
            phh_core::card::serialize_cards(hole),
            phh_core::card::serialize_cards(board)
        );
        let ours = match evaluate(order, hole, board, selection) {
            Ok(s) => s,
            Err(e) => {
                report
                    .disagreements
                    .push(format!("{label}: evaluator error {e}"));
                continue;
            }
        };
        let theirs = best(order, hole, board, selection);
        if ours.is_some() != theirs.is_some() {
            report.disagreements.push(format!(
                "{label}: qualification differs ({ours:?} vs {theirs:?})"
            ));
        }
        let partners = if seen.is_empty() {
            Vec::new()
        } else {
            vec![seen.len() - 1, rng.gen_range(0..seen.len())]
        };
        for j in partners {
            let (other_label, other_ours, other_theirs) = &seen[j];
            let (Some(a), Some(b)) = (&ours, other_ours) else {
                continue;
            };
            let (Some(x), Some(y)) = (&theirs, other_theirs) else {
                continue;
            };
            report.comparisons += 1;
            let lib = compare(a, b).expect("same order");
            let oracle: Ordering = x.cmp(y);
            if lib != oracle {
                report.disagreements.push(format!(
                    "{label} vs {other_label}: evaluator {lib:?}, oracle {oracle:?}"
                ));
            }
        }
        seen.push((label, ours, theirs));
    }
    report
}
