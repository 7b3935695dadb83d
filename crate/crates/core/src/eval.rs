//! Showdown hand strength for the six evaluation orders.
//!
//! Every strength carries a packed score where larger is better, so
//! comparison within one order is a single integer compare.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::card::{Card, Rank};
use crate::variant::{Family, VariantCode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum EvaluationOrder {
    StandardHigh,
    ShortDeckHigh,
    EightOrBetterLow,
    AceToFiveLow,
    DeuceToSevenLow,
    Badugi,
}

impl EvaluationOrder {
    pub const ALL: [EvaluationOrder; 6] = [
        EvaluationOrder::StandardHigh,
        EvaluationOrder::ShortDeckHigh,
        EvaluationOrder::EightOrBetterLow,
        EvaluationOrder::AceToFiveLow,
        EvaluationOrder::DeuceToSevenLow,
        EvaluationOrder::Badugi,
    ];

    fn is_low(self) -> bool {
        matches!(
            self,
            EvaluationOrder::EightOrBetterLow
                | EvaluationOrder::AceToFiveLow
                | EvaluationOrder::DeuceToSevenLow
        )
    }

    fn aces_low(self) -> bool {
        matches!(
            self,
            EvaluationOrder::EightOrBetterLow
                | EvaluationOrder::AceToFiveLow
                | EvaluationOrder::Badugi
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Category {
    HighCard,
    OnePair,
    TwoPair,
    ThreeOfAKind,
    Straight,
    Flush,
    FullHouse,
    FourOfAKind,
    StraightFlush,
    /// A badugi hand of the given size (1 to 4 cards).
    Badugi(u8),
}

impl Category {
    /// Position in the high-hand ladder.
    fn ladder(self, order: EvaluationOrder) -> u32 {
        match self {
            Category::HighCard => 0,
            Category::OnePair => 1,
            Category::TwoPair => 2,
            Category::ThreeOfAKind => 3,
            Category::Straight => 4,
            Category::Flush if order == EvaluationOrder::ShortDeckHigh => 6,
            Category::Flush => 5,
            Category::FullHouse if order == EvaluationOrder::ShortDeckHigh => 5,
            Category::FullHouse => 6,
            Category::FourOfAKind => 7,
            Category::StraightFlush => 8,
            Category::Badugi(n) => n as u32,
        }
    }
}

/// Tiebreak ranks use 2..=14 with aces high, or 1..=13 in the ace-low
/// orders. Straights record only their top card, so the wheel is 5 (9 in
/// short deck).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct EvaluatedStrength {
    pub order: EvaluationOrder,
    pub category: Category,
    pub ranks: Vec<u8>,
    #[serde(skip)]
    score: u32,
}

impl EvaluatedStrength {
    fn new(order: EvaluationOrder, category: Category, ranks: Vec<u8>) -> Self {
        let mut score = category.ladder(order);
        for i in 0..5 {
            score = score << 4 | ranks.get(i).copied().unwrap_or(0) as u32;
        }
        if order.is_low() {
            score = u32::MAX - score;
        } else if order == EvaluationOrder::Badugi {
            let mut s = category.ladder(order);
            for i in 0..4 {
                s = s << 4 | ranks.get(i).map_or(0, |&r| 15 - r as u32);
            }
            score = s;
        }
        EvaluatedStrength {
            order,
            category,
            ranks,
            score,
        }
    }
}

impl PartialOrd for EvaluatedStrength {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        compare(self, other).ok()
    }
}

impl fmt::Display for EvaluatedStrength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} {:?}", self.category, self.ranks)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unknown card {0} cannot be ranked")]
    UnknownCardInShowdown(Card),
    #[error("card {0} appears more than once")]
    DuplicateCard(Card),
    #[error("card {0} is not in a short deck")]
    CardOutsideDeck(Card),
    #[error("{found} cards cannot form a hand: {needed}")]
    WrongCardCount { found: usize, needed: &'static str },
    #[error("cannot compare {0:?} with {1:?}")]
    OrderMismatch(EvaluationOrder, EvaluationOrder),
}

/// Which cards a hand may be built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Selection {
    /// Best five of hole and board together.
    BestFive,
    /// Exactly two hole cards and three board cards.
    TwoPlusThree,
    /// Hole cards only, all of them for draw games.
    HoleOnly,
}

/// Evaluation orders and card selection for one variant's showdown.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ShowdownRules {
    pub high: EvaluationOrder,
    /// Second order for split-pot games; its pot half may go unclaimed.
    pub low: Option<EvaluationOrder>,
    pub selection: Selection,
}

impl ShowdownRules {
    pub fn for_variant(variant: VariantCode) -> ShowdownRules {
        use EvaluationOrder::*;
        use VariantCode::*;
        let (high, low) = match variant {
            FixedLimitTexasHoldem
            | NoLimitTexasHoldem
            | PotLimitOmahaHoldem
            | FixedLimitSevenCardStud => (StandardHigh, None),
            NoLimitShortDeckHoldem => (ShortDeckHigh, None),
            FixedLimitOmahaHoldemHiLo | FixedLimitSevenCardStudHiLo => {
                (StandardHigh, Some(EightOrBetterLow))
            }
            FixedLimitRazz => (AceToFiveLow, None),
            NoLimitDeuceToSevenSingleDraw | FixedLimitDeuceToSevenTripleDraw => {
                (DeuceToSevenLow, None)
            }
            FixedLimitBadugi => (Badugi, None),
        };
        let selection = match variant.family() {
            Family::Holdem => Selection::BestFive,
            Family::Omaha => Selection::TwoPlusThree,
            Family::Stud | Family::Draw => Selection::HoleOnly,
        };
        ShowdownRules {
            high,
            low,
            selection,
        }
    }
}

pub fn compare(a: &EvaluatedStrength, b: &EvaluatedStrength) -> Result<Ordering, EvalError> {
    if a.order != b.order {
        return Err(EvalError::OrderMismatch(a.order, b.order));
    }
    Ok(a.score.cmp(&b.score))
}

/// Strength of the best hand available, or `Ok(None)` when an
/// eight-or-better low does not qualify.
pub fn evaluate(
    order: EvaluationOrder,
    hole: &[Card],
    board: &[Card],
    selection: Selection,
) -> Result<Option<EvaluatedStrength>, EvalError> {
    check_cards(order, hole, board)?;
    match selection {
        Selection::TwoPlusThree => {
            if hole.len() < 2 || board.len() < 3 {
                return Err(EvalError::WrongCardCount {
                    found: hole.len() + board.len(),
                    needed: "two hole cards and three board cards",
                });
            }
            let mut best: Option<EvaluatedStrength> = None;
            for h in combinations(hole.len(), 2) {
                for b in combinations(board.len(), 3) {
                    let five: Vec<Card> = h
                        .iter()
                        .map(|&i| hole[i])
                        .chain(b.iter().map(|&i| board[i]))
                        .collect();
                    if let Some(s) = best_of(order, &five) {
                        if best.as_ref().is_none_or(|cur| s.score > cur.score) {
                            best = Some(s);
                        }
                    }
                }
            }
            Ok(best)
        }
        Selection::BestFive | Selection::HoleOnly => {
            let cards: Vec<Card> = if selection == Selection::BestFive {
                hole.iter().chain(board).copied().collect()
            } else {
                hole.to_vec()
            };
            let needed = if order == EvaluationOrder::Badugi {
                1
            } else {
                5
            };
            if cards.len() < needed {
                return Err(EvalError::WrongCardCount {
                    found: cards.len(),
                    needed: if needed == 1 {
                        "at least one card"
                    } else {
                        "at least five cards"
                    },
                });
            }
            Ok(best_of(order, &cards))
        }
    }
}

fn check_cards(order: EvaluationOrder, hole: &[Card], board: &[Card]) -> Result<(), EvalError> {
    let mut seen = 0u64;
    for &card in hole.iter().chain(board) {
        if !card.is_known() {
            return Err(EvalError::UnknownCardInShowdown(card));
        }
        if order == EvaluationOrder::ShortDeckHigh && hi(card.rank) < 6 {
            return Err(EvalError::CardOutsideDeck(card));
        }
        let bit = 1u64 << card_index(card);
        if seen & bit != 0 {
            return Err(EvalError::DuplicateCard(card));
        }
        seen |= bit;
    }
    Ok(())
}

fn card_index(card: Card) -> u32 {
    (hi(card.rank) as u32 - 2) * 4 + card.suit as u32
}

// Callers have already rejected unknown cards.
fn hi(rank: Rank) -> u8 {
    rank.high_value().expect("known rank")
}

fn lo(rank: Rank) -> u8 {
    rank.low_value().expect("known rank")
}

fn value(order: EvaluationOrder, rank: Rank) -> u8 {
    if order.aces_low() {
        lo(rank)
    } else {
        hi(rank)
    }
}

fn best_of(order: EvaluationOrder, cards: &[Card]) -> Option<EvaluatedStrength> {
    match order {
        EvaluationOrder::StandardHigh | EvaluationOrder::ShortDeckHigh => {
            Some(best_high(order, cards))
        }
        EvaluationOrder::EightOrBetterLow => eight_or_better(cards),
        EvaluationOrder::Badugi => Some(badugi(cards)),
        EvaluationOrder::AceToFiveLow | EvaluationOrder::DeuceToSevenLow => {
            let mut best: Option<EvaluatedStrength> = None;
            for pick in combinations(cards.len(), 5) {
                let five: Vec<Card> = pick.iter().map(|&i| cards[i]).collect();
                let s = five_card_low(order, &five);
                if best.as_ref().is_none_or(|cur| s.score > cur.score) {
                    best = Some(s);
                }
            }
            best
        }
    }
}

/// Top card of the highest straight in a rank bitmask (bit `v` set for
/// rank value `v`).
fn straight_top(mask: u16, order: EvaluationOrder) -> Option<u8> {
    let lowest_top = if order == EvaluationOrder::ShortDeckHigh {
        10
    } else {
        6
    };
    for top in (lowest_top..=14u8).rev() {
        let run = 0b11111u16 << (top - 4);
        if mask & run == run {
            return Some(top);
        }
    }
    let ace = 1u16 << 14;
    match order {
        EvaluationOrder::StandardHigh if mask & (ace | 0b111100) == ace | 0b111100 => Some(5),
        EvaluationOrder::ShortDeckHigh if mask & (ace | 0b1111000000) == ace | 0b1111000000 => {
            Some(9)
        }
        _ => None,
    }
}

fn top_ranks(mask: u16, n: usize) -> Vec<u8> {
    (2..=14u8)
        .rev()
        .filter(|&v| mask & (1 << v) != 0)
        .take(n)
        .collect()
}

/// Direct best-five evaluation from a rank histogram and suit masks.
fn best_high(order: EvaluationOrder, cards: &[Card]) -> EvaluatedStrength {
    let mut counts = [0u8; 15];
    let mut suit_masks = [0u16; 4];
    let mut all = 0u16;
    for c in cards {
        let v = hi(c.rank);
        counts[v as usize] += 1;
        suit_masks[c.suit as usize] |= 1 << v;
        all |= 1 << v;
    }
    let make = |cat, ranks| EvaluatedStrength::new(order, cat, ranks);
    let flush_mask = suit_masks.into_iter().find(|m| m.count_ones() >= 5);
    if let Some(top) = flush_mask.and_then(|m| straight_top(m, order)) {
        return make(Category::StraightFlush, vec![top]);
    }
    let with_count = |n: u8| -> Vec<u8> {
        (2..=14u8)
            .rev()
            .filter(|&v| counts[v as usize] >= n)
            .collect()
    };
    let kickers = |exclude: &[u8], n: usize| -> Vec<u8> {
        let mut mask = all;
        for &v in exclude {
            mask &= !(1 << v);
        }
        top_ranks(mask, n)
    };
    if let Some(&q) = with_count(4).first() {
        let mut ranks = vec![q];
        ranks.extend(kickers(&[q], 1));
        return make(Category::FourOfAKind, ranks);
    }
    let trips = with_count(3);
    let full_house = trips.first().and_then(|&t| {
        with_count(2)
            .into_iter()
            .find(|&p| p != t)
            .map(|p| vec![t, p])
    });
    let flush = flush_mask.map(|m| top_ranks(m, 5));
    if order == EvaluationOrder::ShortDeckHigh {
        if let Some(ranks) = flush.clone() {
            return make(Category::Flush, ranks);
        }
    }
    if let Some(ranks) = full_house {
        return make(Category::FullHouse, ranks);
    }
    if let Some(ranks) = flush {
        return make(Category::Flush, ranks);
    }
    if let Some(top) = straight_top(all, order) {
        return make(Category::Straight, vec![top]);
    }
    if let Some(&t) = trips.first() {
        let mut ranks = vec![t];
        ranks.extend(kickers(&[t], 2));
        return make(Category::ThreeOfAKind, ranks);
    }
    let pairs = with_count(2);
    if pairs.len() >= 2 {
        let mut ranks = vec![pairs[0], pairs[1]];
        ranks.extend(kickers(&pairs[..2], 1));
        return make(Category::TwoPair, ranks);
    }
    if let Some(&p) = pairs.first() {
        let mut ranks = vec![p];
        ranks.extend(kickers(&[p], 3));
        return make(Category::OnePair, ranks);
    }
    make(Category::HighCard, top_ranks(all, 5))
}

/// Groups rank values by multiplicity, most copies first, then by rank.
fn grouped(values: &[u8]) -> Vec<(u8, u8)> {
    let mut counts: Vec<(u8, u8)> = Vec::with_capacity(5);
    for &v in values {
        match counts.iter_mut().find(|(r, _)| *r == v) {
            Some((_, n)) => *n += 1,
            None => counts.push((v, 1)),
        }
    }
    counts.sort_by(|a, b| b.1.cmp(&a.1).then(b.0.cmp(&a.0)));
    counts
}

fn five_card_low(order: EvaluationOrder, five: &[Card]) -> EvaluatedStrength {
    let values: Vec<u8> = five.iter().map(|c| value(order, c.rank)).collect();
    let groups = grouped(&values);
    let ranks: Vec<u8> = groups.iter().map(|&(v, _)| v).collect();
    let shape: Vec<u8> = groups.iter().map(|&(_, n)| n).collect();
    let mut category = match shape.as_slice() {
        [4, 1] => Category::FourOfAKind,
        [3, 2] => Category::FullHouse,
        [3, 1, 1] => Category::ThreeOfAKind,
        [2, 2, 1] => Category::TwoPair,
        [2, 1, 1, 1] => Category::OnePair,
        _ => Category::HighCard,
    };
    let mut ranks = ranks;
    if order == EvaluationOrder::DeuceToSevenLow && category == Category::HighCard {
        let flush = five.iter().all(|c| c.suit == five[0].suit);
        let straight = ranks[0] - ranks[4] == 4;
        category = match (straight, flush) {
            (true, true) => Category::StraightFlush,
            (true, false) => Category::Straight,
            (false, true) => Category::Flush,
            (false, false) => Category::HighCard,
        };
        if straight {
            ranks.truncate(1);
        }
    }
    EvaluatedStrength::new(order, category, ranks)
}

fn eight_or_better(cards: &[Card]) -> Option<EvaluatedStrength> {
    let mut mask = 0u16;
    for c in cards {
        let v = lo(c.rank);
        if v <= 8 {
            mask |= 1 << v;
        }
    }
    if mask.count_ones() < 5 {
        return None;
    }
    let mut ranks: Vec<u8> = (1..=8u8)
        .filter(|&v| mask & (1 << v) != 0)
        .take(5)
        .collect();
    ranks.reverse();
    Some(EvaluatedStrength::new(
        EvaluationOrder::EightOrBetterLow,
        Category::HighCard,
        ranks,
    ))
}

fn badugi(cards: &[Card]) -> EvaluatedStrength {
    let mut best: Option<EvaluatedStrength> = None;
    for size in (1..=cards.len().min(4)).rev() {
        for pick in combinations(cards.len(), size) {
            let (mut ranks, mut suits) = (0u16, 0u8);
            let mut ok = true;
            for &i in &pick {
                let (r, s) = (1u16 << lo(cards[i].rank), 1u8 << cards[i].suit as u8);
                ok &= ranks & r == 0 && suits & s == 0;
                ranks |= r;
                suits |= s;
            }
            if !ok {
                continue;
            }
            let values: Vec<u8> = (1..=13u8)
                .rev()
                .filter(|&v| ranks & (1 << v) != 0)
                .collect();
            let s = EvaluatedStrength::new(
                EvaluationOrder::Badugi,
                Category::Badugi(size as u8),
                values,
            );
            if best.as_ref().is_none_or(|cur| s.score > cur.score) {
                best = Some(s);
            }
        }
        if best.is_some() {
            break;
        }
    }
    best.expect("any single card is a badugi")
}

/// Index sets of size `k` from `0..n`, in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::card::parse_cards;

    fn eval(order: EvaluationOrder, cards: &str) -> Option<EvaluatedStrength> {
        evaluate(
            order,
            &parse_cards(cards).unwrap(),
            &[],
            Selection::HoleOnly,
        )
        .unwrap()
    }

    fn beats(order: EvaluationOrder, a: &str, b: &str) -> bool {
        compare(&eval(order, a).unwrap(), &eval(order, b).unwrap()).unwrap() == Ordering::Greater
    }

    #[test]
    fn deuce_to_seven_golden_showdown() {
        use EvaluationOrder::DeuceToSevenLow as D;
        assert!(beats(D, "2h4d7c5c3c", "7h6c4c3d2c"));
        let a = eval(D, "7h5c4c3d2c").unwrap();
        assert_eq!(
            compare(&a, &eval(D, "2h4d7c5c3c").unwrap()),
            Ok(Ordering::Equal)
        );
        assert!(
            beats(D, "7h5c4c3d2c", "7c5c4c3c2c"),
            "flushes count against"
        );
        assert!(
            beats(D, "Ah5c4c3d2c", "2c3d4h5s6c"),
            "ace-high no pair beats a straight"
        );
        assert_eq!(eval(D, "Ah5c4c3d2c").unwrap().category, Category::HighCard);
    }

    #[test]
    fn eight_or_better() {
        use EvaluationOrder::EightOrBetterLow as E;
        assert_eq!(eval(E, "9s7h5d3c2s"), None);
        assert_eq!(eval(E, "8s8h5d3c2s"), None);
        assert!(beats(E, "As2s3s4s5s", "2c3d4h5s6c"));
        assert!(beats(E, "8c5d4h3s2c", "8c6d4h3s2c"));
        assert_eq!(
            eval(E, "Kh8c7d6h5s4c3d").unwrap().ranks,
            vec![7, 6, 5, 4, 3]
        );
    }

    #[test]
    fn badugi_maximum() {
        use EvaluationOrder::Badugi as B;
        let top = eval(B, "As2c3d4h").unwrap();
        assert_eq!(top.category, Category::Badugi(4));
        assert!(beats(
            B,
            "Kc Qd Jh Ts".replace(' ', "").as_str(),
            "As2s3s4s"
        ));
        assert!(beats(B, "As2c3d4h", "As2c3d5h"));
        assert_eq!(eval(B, "AsAc2s2c").unwrap().category, Category::Badugi(2));
    }

    #[test]
    fn high_orders() {
        use EvaluationOrder::{ShortDeckHigh as S, StandardHigh as H};
        assert!(beats(H, "AsKsQsJsTs", "9s8s7s6s5s"));
        assert!(beats(H, "AhAc2d3s4h", "KhKcAd3s4h"));
        let a = eval(H, "AhKc7d5s2h").unwrap();
        let b = eval(H, "AcKd7h5c2s").unwrap();
        assert_eq!(compare(&a, &b), Ok(Ordering::Equal));
        assert_eq!(eval(H, "Ah2c3d4s5h").unwrap().ranks, vec![5]);
        assert!(beats(H, "KhKcKd2s2h", "AhJh9h5h2h"));
        assert!(beats(S, "AhJh9h7h6h", "KhKcKdTsTh"));
        assert_eq!(eval(S, "Ah6c7d8s9h").unwrap().category, Category::Straight);
        assert!(matches!(
            evaluate(
                S,
                &parse_cards("Ah2c7d8s9h").unwrap(),
                &[],
                Selection::HoleOnly
            ),
            Err(EvalError::CardOutsideDeck(_))
        ));
    }

    #[test]
    fn ace_to_five() {
        use EvaluationOrder::AceToFiveLow as A;
        assert!(beats(A, "Ah2c3d4s5h", "Ah2c3d4s6h"));
        assert!(
            beats(A, "Ah2h3h4h5h", "Ah2c3d4s6h"),
            "flushes and straights are ignored"
        );
        assert!(beats(A, "KhQcJdTs9h", "AhAc2d3s4h"));
        assert_eq!(
            eval(A, "Ah2h3h4h5hKcKd").unwrap().ranks,
            vec![5, 4, 3, 2, 1]
        );
    }

    #[test]
    fn omaha_uses_exactly_two_hole_cards() {
        let hole = parse_cards("AhKhQcJc").unwrap();
        let board = parse_cards("2h3h4h9s9d").unwrap();
        let s = evaluate(
            EvaluationOrder::StandardHigh,
            &hole,
            &board,
            Selection::TwoPlusThree,
        )
        .unwrap()
        .unwrap();
        assert_eq!(s.category, Category::Flush);
        let board = parse_cards("2h3h4h5h9d").unwrap();
        let s = evaluate(
            EvaluationOrder::StandardHigh,
            &hole,
            &board,
            Selection::TwoPlusThree,
        )
        .unwrap()
        .unwrap();
        assert_eq!(
            s.category,
            Category::Flush,
            "four-flush board needs two hole hearts"
        );
        assert_eq!(s.ranks, vec![14, 13, 5, 4, 3]);
    }

    #[test]
    fn errors() {
        let cards = parse_cards("AhAh2c3d4s").unwrap();
        assert_eq!(
            evaluate(
                EvaluationOrder::StandardHigh,
                &cards,
                &[],
                Selection::HoleOnly
            ),
            Err(EvalError::DuplicateCard("Ah".parse().unwrap()))
        );
        let cards = parse_cards("??2c3d4s5s").unwrap();
        assert!(matches!(
            evaluate(
                EvaluationOrder::StandardHigh,
                &cards,
                &[],
                Selection::HoleOnly
            ),
            Err(EvalError::UnknownCardInShowdown(_))
        ));
        let a = eval(EvaluationOrder::StandardHigh, "AhKc7d5s2h").unwrap();
        let b = eval(EvaluationOrder::AceToFiveLow, "AhKc7d5s2h").unwrap();
        assert!(compare(&a, &b).is_err());
        assert_eq!(a.partial_cmp(&b), None);
    }

    #[test]
    fn combination_counts() {
        assert_eq!(combinations(7, 5).len(), 21);
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(3, 0).len(), 1);
        assert!(combinations(2, 3).is_empty());
    }
}
