//! Cards, ranks and suits in the two-character notation.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CardError {
    #[error("unknown rank character {0:?}")]
    UnknownRankChar(char),
    #[error("unknown suit character {0:?}")]
    UnknownSuitChar(char),
    #[error("a card takes exactly two characters, got {0}")]
    BadLength(usize),
    #[error("card list has odd length {0}")]
    OddLength(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rank {
    Deuce,
    Trey,
    Four,
    Five,
    Six,
    Seven,
    Eight,
    Nine,
    Ten,
    Jack,
    Queen,
    King,
    Ace,
    Unknown,
}

impl Rank {
    pub const KNOWN: [Rank; 13] = [
        Rank::Deuce,
        Rank::Trey,
        Rank::Four,
        Rank::Five,
        Rank::Six,
        Rank::Seven,
        Rank::Eight,
        Rank::Nine,
        Rank::Ten,
        Rank::Jack,
        Rank::Queen,
        Rank::King,
        Rank::Ace,
    ];

    pub fn from_char(c: char) -> Option<Rank> {
        Some(match c {
            '2' => Rank::Deuce,
            '3' => Rank::Trey,
            '4' => Rank::Four,
            '5' => Rank::Five,
            '6' => Rank::Six,
            '7' => Rank::Seven,
            '8' => Rank::Eight,
            '9' => Rank::Nine,
            'T' => Rank::Ten,
            'J' => Rank::Jack,
            'Q' => Rank::Queen,
            'K' => Rank::King,
            'A' => Rank::Ace,
            '?' => Rank::Unknown,
            _ => return None,
        })
    }

    pub fn to_char(self) -> char {
        match self {
            Rank::Deuce => '2',
            Rank::Trey => '3',
            Rank::Four => '4',
            Rank::Five => '5',
            Rank::Six => '6',
            Rank::Seven => '7',
            Rank::Eight => '8',
            Rank::Nine => '9',
            Rank::Ten => 'T',
            Rank::Jack => 'J',
            Rank::Queen => 'Q',
            Rank::King => 'K',
            Rank::Ace => 'A',
            Rank::Unknown => '?',
        }
    }

    /// Numeric value with aces high: 2..=14. `None` for an unknown rank.
    pub fn high_value(self) -> Option<u8> {
        match self {
            Rank::Unknown => None,
            r => Some(r as u8 + 2),
        }
    }

    /// Numeric value with aces low: 1..=13.
    pub fn low_value(self) -> Option<u8> {
        match self {
            Rank::Ace => Some(1),
            r => r.high_value(),
        }
    }

    /// Inverse of [`Rank::high_value`]; 1 is accepted as a low ace.
    pub fn from_value(v: u8) -> Option<Rank> {
        match v {
            1 | 14 => Some(Rank::Ace),
            2..=13 => Some(Rank::KNOWN[(v - 2) as usize]),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suit {
    Club,
    Diamond,
    Heart,
    Spade,
    Unknown,
}

impl Suit {
    pub const KNOWN: [Suit; 4] = [Suit::Club, Suit::Diamond, Suit::Heart, Suit::Spade];

    pub fn from_char(c: char) -> Option<Suit> {
        Some(match c {
            'c' => Suit::Club,
            'd' => Suit::Diamond,
            'h' => Suit::Heart,
            's' => Suit::Spade,
            '?' => Suit::Unknown,
            _ => return None,
        })
    }

    pub fn to_char(self) -> char {
        match self {
            Suit::Club => 'c',
            Suit::Diamond => 'd',
            Suit::Heart => 'h',
            Suit::Spade => 's',
            Suit::Unknown => '?',
        }
    }
}

/// A card whose rank and suit may each be unknown.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Card {
    pub rank: Rank,
    pub suit: Suit,
}

impl Card {
    pub const UNKNOWN: Card = Card {
        rank: Rank::Unknown,
        suit: Suit::Unknown,
    };

    pub const fn new(rank: Rank, suit: Suit) -> Card {
        Card { rank, suit }
    }

    pub fn is_known(self) -> bool {
        self.rank != Rank::Unknown && self.suit != Suit::Unknown
    }

    pub fn is_unknown(self) -> bool {
        self.rank == Rank::Unknown && self.suit == Suit::Unknown
    }

    /// One component known and the other not, e.g. `A?`.
    pub fn is_mixed(self) -> bool {
        !self.is_known() && !self.is_unknown()
    }

    /// All 52 known cards, clubs first.
    pub fn deck() -> impl Iterator<Item = Card> {
        Suit::KNOWN
            .into_iter()
            .flat_map(|s| Rank::KNOWN.into_iter().map(move |r| Card::new(r, s)))
    }
}

impl fmt::Display for Card {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.rank.to_char(), self.suit.to_char())
    }
}

impl FromStr for Card {
    type Err = CardError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_card(s)
    }
}

impl Serialize for Card {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

pub fn parse_card(text: &str) -> Result<Card, CardError> {
    let mut chars = text.chars();
    let (Some(r), Some(s), None) = (chars.next(), chars.next(), chars.next()) else {
        return Err(CardError::BadLength(text.chars().count()));
    };
    let rank = Rank::from_char(r).ok_or(CardError::UnknownRankChar(r))?;
    let suit = Suit::from_char(s).ok_or(CardError::UnknownSuitChar(s))?;
    Ok(Card { rank, suit })
}

pub fn parse_cards(text: &str) -> Result<Vec<Card>, CardError> {
    let chars: Vec<char> = text.chars().collect();
    if !chars.len().is_multiple_of(2) {
        return Err(CardError::OddLength(chars.len()));
    }
    chars
        .chunks(2)
        .map(|pair| {
            let rank = Rank::from_char(pair[0]).ok_or(CardError::UnknownRankChar(pair[0]))?;
            let suit = Suit::from_char(pair[1]).ok_or(CardError::UnknownSuitChar(pair[1]))?;
            Ok(Card { rank, suit })
        })
        .collect()
}

pub fn serialize_cards(cards: &[Card]) -> String {
    let mut out = String::with_capacity(cards.len() * 2);
    for card in cards {
        out.push(card.rank.to_char());
        out.push(card.suit.to_char());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_known_and_unknown_cards() {
        assert_eq!(parse_card("7h"), Ok(Card::new(Rank::Seven, Suit::Heart)));
        assert_eq!(parse_card("??"), Ok(Card::UNKNOWN));
        assert_eq!(parse_card("Tx"), Err(CardError::UnknownSuitChar('x')));
        assert_eq!(parse_card("1s"), Err(CardError::UnknownRankChar('1')));
        assert_eq!(parse_card("7"), Err(CardError::BadLength(1)));
        assert_eq!(parse_card("7hh"), Err(CardError::BadLength(3)));
    }

    #[test]
    fn parses_card_lists() {
        assert_eq!(
            parse_cards("AsQs").unwrap(),
            vec![
                Card::new(Rank::Ace, Suit::Spade),
                Card::new(Rank::Queen, Suit::Spade)
            ]
        );
        let unknown = parse_cards("??????????").unwrap();
        assert_eq!(unknown.len(), 5);
        assert!(unknown.iter().all(|c| c.is_unknown()));
        assert_eq!(parse_cards("").unwrap(), vec![]);
        assert_eq!(parse_cards("AsQ"), Err(CardError::OddLength(3)));
    }

    #[test]
    fn serializes_card_lists() {
        assert_eq!(
            serialize_cards(&[Card::new(Rank::Seven, Suit::Heart)]),
            "7h"
        );
        assert_eq!(serialize_cards(&[]), "");
        assert_eq!(serialize_cards(&[Card::UNKNOWN; 5]), "??????????");
    }

    #[test]
    fn character_tables_are_exhaustive() {
        let ranks = "23456789TJQKA?";
        let suits = "cdhs?";
        for b in 0u8..=255 {
            let c = b as char;
            assert_eq!(Rank::from_char(c).is_some(), ranks.contains(c), "{c:?}");
            assert_eq!(Suit::from_char(c).is_some(), suits.contains(c), "{c:?}");
        }
        for c in ranks.chars() {
            assert_eq!(Rank::from_char(c).unwrap().to_char(), c);
        }
        for c in suits.chars() {
            assert_eq!(Suit::from_char(c).unwrap().to_char(), c);
        }
    }

    #[test]
    fn mixed_cards_are_representable() {
        let card = parse_card("A?").unwrap();
        assert!(card.is_mixed());
        assert!(!card.is_known());
    }

    fn any_card() -> impl Strategy<Value = Card> {
        (0usize..14, 0usize..5).prop_map(|(r, s)| {
            let rank = Rank::from_char("23456789TJQKA?".as_bytes()[r] as char).unwrap();
            let suit = Suit::from_char("cdhs?".as_bytes()[s] as char).unwrap();
            Card::new(rank, suit)
        })
    }

    proptest! {
        #[test]
        fn card_lists_round_trip(cards in proptest::collection::vec(any_card(), 0..12)) {
            let text = serialize_cards(&cards);
            prop_assert_eq!(parse_cards(&text).unwrap(), cards);
            prop_assert_eq!(serialize_cards(&parse_cards(&text).unwrap()), text);
        }
    }
}
