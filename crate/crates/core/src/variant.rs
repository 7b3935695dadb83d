use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown variant code {0:?}")]
pub struct UnknownVariant(pub String);

/// The eleven game codes a hand may declare.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VariantCode {
    FixedLimitTexasHoldem,
    NoLimitTexasHoldem,
    NoLimitShortDeckHoldem,
    PotLimitOmahaHoldem,
    FixedLimitOmahaHoldemHiLo,
    FixedLimitSevenCardStud,
    FixedLimitSevenCardStudHiLo,
    FixedLimitRazz,
    NoLimitDeuceToSevenSingleDraw,
    FixedLimitDeuceToSevenTripleDraw,
    FixedLimitBadugi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BettingStructure {
    FixedLimit,
    PotLimit,
    NoLimit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Holdem,
    Omaha,
    Stud,
    Draw,
}

impl VariantCode {
    pub const ALL: [VariantCode; 11] = [
        VariantCode::FixedLimitTexasHoldem,
        VariantCode::NoLimitTexasHoldem,
        VariantCode::NoLimitShortDeckHoldem,
        VariantCode::PotLimitOmahaHoldem,
        VariantCode::FixedLimitOmahaHoldemHiLo,
        VariantCode::FixedLimitSevenCardStud,
        VariantCode::FixedLimitSevenCardStudHiLo,
        VariantCode::FixedLimitRazz,
        VariantCode::NoLimitDeuceToSevenSingleDraw,
        VariantCode::FixedLimitDeuceToSevenTripleDraw,
        VariantCode::FixedLimitBadugi,
    ];

    pub fn code(self) -> &'static str {
        match self {
            VariantCode::FixedLimitTexasHoldem => "FT",
            VariantCode::NoLimitTexasHoldem => "NT",
            VariantCode::NoLimitShortDeckHoldem => "NS",
            VariantCode::PotLimitOmahaHoldem => "PO",
            VariantCode::FixedLimitOmahaHoldemHiLo => "FO/8",
            VariantCode::FixedLimitSevenCardStud => "F7S",
            VariantCode::FixedLimitSevenCardStudHiLo => "F7S/8",
            VariantCode::FixedLimitRazz => "FR",
            VariantCode::NoLimitDeuceToSevenSingleDraw => "N2L1D",
            VariantCode::FixedLimitDeuceToSevenTripleDraw => "F2L3D",
            VariantCode::FixedLimitBadugi => "FB",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            VariantCode::FixedLimitTexasHoldem => "Fixed-limit Texas hold 'em",
            VariantCode::NoLimitTexasHoldem => "No-limit Texas hold 'em",
            VariantCode::NoLimitShortDeckHoldem => "No-limit short-deck hold 'em",
            VariantCode::PotLimitOmahaHoldem => "Pot-limit Omaha hold 'em",
            VariantCode::FixedLimitOmahaHoldemHiLo => {
                "Fixed-limit Omaha hold 'em high/low-split eight or better"
            }
            VariantCode::FixedLimitSevenCardStud => "Fixed-limit seven card stud",
            VariantCode::FixedLimitSevenCardStudHiLo => {
                "Fixed-limit seven card stud high/low-split eight or better"
            }
            VariantCode::FixedLimitRazz => "Fixed-limit razz",
            VariantCode::NoLimitDeuceToSevenSingleDraw => {
                "No-limit deuce-to-seven lowball single draw"
            }
            VariantCode::FixedLimitDeuceToSevenTripleDraw => {
                "Fixed-limit deuce-to-seven lowball triple draw"
            }
            VariantCode::FixedLimitBadugi => "Fixed-limit badugi",
        }
    }

    pub fn betting_structure(self) -> BettingStructure {
        match self {
            VariantCode::NoLimitTexasHoldem
            | VariantCode::NoLimitShortDeckHoldem
            | VariantCode::NoLimitDeuceToSevenSingleDraw => BettingStructure::NoLimit,
            VariantCode::PotLimitOmahaHoldem => BettingStructure::PotLimit,
            _ => BettingStructure::FixedLimit,
        }
    }

    pub fn family(self) -> Family {
        match self {
            VariantCode::FixedLimitTexasHoldem
            | VariantCode::NoLimitTexasHoldem
            | VariantCode::NoLimitShortDeckHoldem => Family::Holdem,
            VariantCode::PotLimitOmahaHoldem | VariantCode::FixedLimitOmahaHoldemHiLo => {
                Family::Omaha
            }
            VariantCode::FixedLimitSevenCardStud
            | VariantCode::FixedLimitSevenCardStudHiLo
            | VariantCode::FixedLimitRazz => Family::Stud,
            VariantCode::NoLimitDeuceToSevenSingleDraw
            | VariantCode::FixedLimitDeuceToSevenTripleDraw
            | VariantCode::FixedLimitBadugi => Family::Draw,
        }
    }

    /// Games whose positions are defined by a dealer button and which
    /// therefore use blinds or straddles.
    pub fn is_button_game(self) -> bool {
        self.family() != Family::Stud
    }

    pub fn is_short_deck(self) -> bool {
        self == VariantCode::NoLimitShortDeckHoldem
    }
}

impl fmt::Display for VariantCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for VariantCode {
    type Err = UnknownVariant;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        VariantCode::ALL
            .into_iter()
            .find(|v| v.code() == s)
            .ok_or_else(|| UnknownVariant(s.to_owned()))
    }
}

impl Serialize for VariantCode {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.code())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes_round_trip() {
        for v in VariantCode::ALL {
            assert_eq!(v.code().parse::<VariantCode>(), Ok(v));
        }
        assert!("NLHE".parse::<VariantCode>().is_err());
        assert!("ft".parse::<VariantCode>().is_err());
    }

    #[test]
    fn structures() {
        use BettingStructure::*;
        let expected = [
            FixedLimit, NoLimit, NoLimit, PotLimit, FixedLimit, FixedLimit, FixedLimit, FixedLimit,
            NoLimit, FixedLimit, FixedLimit,
        ];
        for (v, s) in VariantCode::ALL.iter().zip(expected) {
            assert_eq!(v.betting_structure(), s, "{v}");
        }
    }
}
