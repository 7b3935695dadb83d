use serde::Serialize;

use crate::variant::{BettingStructure, VariantCode};

/// Whether a stud card is dealt face down or face up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Face {
    Down,
    Up,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Deal {
    /// Hole cards to every player still in the hand, one face per card.
    Hole(&'static [Face]),
    Board(usize),
    /// Each player stands pat or discards, then receives replacements.
    Draw,
}

/// Size of a bet on a street.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tier {
    SmallBet,
    BigBet,
    /// No-limit or pot-limit, bounded below by `min_bet`.
    MinBet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Opener {
    /// After the forced bets on the first street, else the first player
    /// still able to act.
    Position,
    /// The stud bring-in, chosen by the lowest (or in razz highest) up card.
    BringIn,
    /// The best hand showing on board.
    UpCards,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Street {
    pub deal: Deal,
    pub tier: Tier,
    pub opener: Opener,
}

const fn street(deal: Deal, tier: Tier, opener: Opener) -> Street {
    Street { deal, tier, opener }
}

use Deal::{Board, Draw, Hole};
use Face::{Down, Up};
use Opener::{BringIn, Position, UpCards};
use Tier::{BigBet, MinBet, SmallBet};

const TWO: &[Face] = &[Down, Down];
const FOUR: &[Face] = &[Down, Down, Down, Down];
const FIVE: &[Face] = &[Down, Down, Down, Down, Down];

static HOLDEM_FIXED: [Street; 4] = [
    street(Hole(TWO), SmallBet, Position),
    street(Board(3), SmallBet, Position),
    street(Board(1), BigBet, Position),
    street(Board(1), BigBet, Position),
];

static HOLDEM_OPEN: [Street; 4] = [
    street(Hole(TWO), MinBet, Position),
    street(Board(3), MinBet, Position),
    street(Board(1), MinBet, Position),
    street(Board(1), MinBet, Position),
];

static OMAHA_FIXED: [Street; 4] = [
    street(Hole(FOUR), SmallBet, Position),
    street(Board(3), SmallBet, Position),
    street(Board(1), BigBet, Position),
    street(Board(1), BigBet, Position),
];

static OMAHA_OPEN: [Street; 4] = [
    street(Hole(FOUR), MinBet, Position),
    street(Board(3), MinBet, Position),
    street(Board(1), MinBet, Position),
    street(Board(1), MinBet, Position),
];

static STUD: [Street; 5] = [
    street(Hole(&[Down, Down, Up]), SmallBet, BringIn),
    street(Hole(&[Up]), SmallBet, UpCards),
    street(Hole(&[Up]), BigBet, UpCards),
    street(Hole(&[Up]), BigBet, UpCards),
    street(Hole(&[Down]), BigBet, UpCards),
];

static SINGLE_DRAW_OPEN: [Street; 2] = [
    street(Hole(FIVE), MinBet, Position),
    street(Draw, MinBet, Position),
];

static TRIPLE_DRAW_FIXED: [Street; 4] = [
    street(Hole(FIVE), SmallBet, Position),
    street(Draw, SmallBet, Position),
    street(Draw, BigBet, Position),
    street(Draw, BigBet, Position),
];

static BADUGI_FIXED: [Street; 4] = [
    street(Hole(FOUR), SmallBet, Position),
    street(Draw, SmallBet, Position),
    street(Draw, BigBet, Position),
    street(Draw, BigBet, Position),
];

/// The sequence of streets for one variant. Every street has a betting
/// round after its deal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreetPlan {
    pub variant: VariantCode,
    pub streets: &'static [Street],
}

impl StreetPlan {
    pub fn for_variant(variant: VariantCode) -> StreetPlan {
        use VariantCode::*;
        let streets: &'static [Street] = match variant {
            FixedLimitTexasHoldem => &HOLDEM_FIXED,
            NoLimitTexasHoldem | NoLimitShortDeckHoldem => &HOLDEM_OPEN,
            PotLimitOmahaHoldem => &OMAHA_OPEN,
            FixedLimitOmahaHoldemHiLo => &OMAHA_FIXED,
            FixedLimitSevenCardStud | FixedLimitSevenCardStudHiLo | FixedLimitRazz => &STUD,
            NoLimitDeuceToSevenSingleDraw => &SINGLE_DRAW_OPEN,
            FixedLimitDeuceToSevenTripleDraw => &TRIPLE_DRAW_FIXED,
            FixedLimitBadugi => &BADUGI_FIXED,
        };
        StreetPlan { variant, streets }
    }

    /// Hole cards each player holds after all deals, ignoring draws.
    pub fn hole_card_total(&self) -> usize {
        self.streets
            .iter()
            .map(|s| match s.deal {
                Deal::Hole(faces) => faces.len(),
                _ => 0,
            })
            .sum()
    }

    pub fn board_card_total(&self) -> usize {
        self.streets
            .iter()
            .map(|s| match s.deal {
                Deal::Board(n) => n,
                _ => 0,
            })
            .sum()
    }

    pub fn draw_count(&self) -> usize {
        self.streets.iter().filter(|s| s.deal == Deal::Draw).count()
    }

    pub fn is_fixed_limit(&self) -> bool {
        self.variant.betting_structure() == BettingStructure::FixedLimit
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hole_card_totals() {
        use VariantCode::*;
        let expected = [
            (FixedLimitTexasHoldem, 2),
            (NoLimitTexasHoldem, 2),
            (NoLimitShortDeckHoldem, 2),
            (PotLimitOmahaHoldem, 4),
            (FixedLimitOmahaHoldemHiLo, 4),
            (FixedLimitSevenCardStud, 7),
            (FixedLimitSevenCardStudHiLo, 7),
            (FixedLimitRazz, 7),
            (NoLimitDeuceToSevenSingleDraw, 5),
            (FixedLimitDeuceToSevenTripleDraw, 5),
            (FixedLimitBadugi, 4),
        ];
        for (v, n) in expected {
            assert_eq!(StreetPlan::for_variant(v).hole_card_total(), n, "{v}");
        }
    }

    #[test]
    fn tiers_match_structure() {
        for v in VariantCode::ALL {
            let plan = StreetPlan::for_variant(v);
            let open = plan.streets.iter().all(|s| s.tier == Tier::MinBet);
            assert_eq!(open, !plan.is_fixed_limit(), "{v}");
        }
        let plan = StreetPlan::for_variant(VariantCode::FixedLimitDeuceToSevenTripleDraw);
        assert_eq!(plan.draw_count(), 3);
        let tiers: Vec<Tier> = plan.streets.iter().map(|s| s.tier).collect();
        assert_eq!(tiers, [SmallBet, SmallBet, BigBet, BigBet]);
    }
}
