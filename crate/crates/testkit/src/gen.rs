//! Random valid hands for every variant.
//!
//! The generator plays a hand against the engine: it asks what the table is
//! waiting for, picks a legal action at random and applies it in strict
//! mode. The resulting document therefore replays cleanly by construction,
//! so any disagreement later is a bug in the parser, emitter or engine.

use phh_core::action::{ActionBody, ActionRecord, Disclosure, PlayerIndex};
use phh_core::card::Card;
use phh_core::document::{ActionEntry, FieldComments, FieldValue, HandDocument};
use phh_core::engine::{
    initial_state, Deal, EngineConfig, Expected, Face, GameState, PlayerStatus,
};
use phh_core::money::{Money, NumericForm};
use phh_core::variant::{BettingStructure, Family, VariantCode};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

#[derive(Debug, Clone, Copy)]
pub struct GenOptions {
    pub max_players: usize,
    /// Chance that a player's down cards are recorded as `??`.
    pub hidden_hole: f64,
    /// Chance that the action list stops early.
    pub truncate: f64,
    /// Chance that a starting stack is unknown.
    pub unknown_stack: f64,
    /// Attach comments, commentary and optional fields.
    pub decorate: bool,
}

impl Default for GenOptions {
    fn default() -> Self {
        GenOptions {
            max_players: 6,
            hidden_hole: 0.25,
            truncate: 0.1,
            unknown_stack: 0.0,
            decorate: true,
        }
    }
}

/// A generated document plus what the generator knows about it.
#[derive(Debug, Clone)]
pub struct GeneratedHand {
    pub document: HandDocument,
    /// True when the action list runs to the end of the hand.
    pub complete: bool,
}

pub fn generate(variant: VariantCode, seed: u64, options: &GenOptions) -> GeneratedHand {
    let mut rng = StdRng::seed_from_u64(seed);
    Generator::new(variant, &mut rng, options).run()
}

/// `count` hands cycling through all variants.
pub fn corpus(count: usize, seed: u64, options: &GenOptions) -> Vec<GeneratedHand> {
    (0..count)
        .map(|i| {
            let variant = VariantCode::ALL[i % VariantCode::ALL.len()];
            generate(
                variant,
                seed.wrapping_mul(1_000_003).wrapping_add(i as u64),
                options,
            )
        })
        .collect()
}

struct Generator<'a> {
    rng: &'a mut StdRng,
    options: &'a GenOptions,
    doc: HandDocument,
    state: GameState,
    deck: Vec<Card>,
    hidden: Vec<bool>,
    /// The real card behind every hole slot, in the engine's order.
    truth: Vec<Vec<Card>>,
    raises: (usize, usize),
    scale: u32,
}

const NAMES: [&str; 9] = [
    "Ada", "Basil", "Cora", "Dmitri", "Esme", "Farid", "Greta", "Hiro", "Ines",
];

impl<'a> Generator<'a> {
    fn new(variant: VariantCode, rng: &'a mut StdRng, options: &'a GenOptions) -> Self {
        let max = if variant.family() == Family::Stud {
            options.max_players.min(7)
        } else {
            options.max_players
        };
        let n = rng.gen_range(2..=max.max(2));
        let scale = if rng.gen_bool(0.25) { 2 } else { 0 };
        let form = if scale == 0 {
            NumericForm::Integer
        } else {
            NumericForm::Float
        };
        let money = |units: i64| Money::from_units_at(units as i128, scale, form);
        let unit: i64 = if scale == 0 {
            rng.gen_range(1..=5)
        } else {
            *[5, 10, 25, 50].choose(rng).expect("nonempty")
        };
        let small = unit;
        let big = 2 * unit;

        let mut antes = vec![0i64; n];
        let stud = variant.family() == Family::Stud;
        if stud || rng.gen_bool(0.3) {
            let ante = (unit / 2).max(1);
            if !stud && rng.gen_bool(0.3) {
                // Big blind ante: the second entry, reversed by the engine
                // when heads-up.
                antes[1] = big;
            } else {
                antes.iter_mut().for_each(|a| *a = ante);
            }
        }
        let mut blinds = vec![0i64; n];
        if variant.is_button_game() {
            blinds[0] = small;
            blinds[1] = big;
            if n >= 4 && rng.gen_bool(0.15) {
                blinds[2] = 2 * big;
            } else if n >= 4 && rng.gen_bool(0.05) {
                blinds[n - 1] = 2 * big;
            }
        }
        let stacks: Vec<Option<Money>> = (0..n)
            .map(|i| {
                if rng.gen_bool(options.unknown_stack) {
                    return None;
                }
                // Heads-up forced bets are posted in reverse order.
                let j = if n == 2 { 1 - i } else { i };
                let floor = antes[j] + blinds[j] + 1;
                let units = if rng.gen_bool(0.15) {
                    rng.gen_range(floor..=floor + 4 * big)
                } else {
                    rng.gen_range(20 * big..=150 * big) + rng.gen_range(0..unit)
                };
                Some(money(units.max(floor)))
            })
            .collect();

        let mut doc = HandDocument::new(variant, antes.iter().map(|&a| money(a)).collect(), stacks);
        if variant.is_button_game() {
            doc.blinds_or_straddles = Some(blinds.iter().map(|&b| money(b)).collect());
        }
        match (stud, variant.betting_structure()) {
            (true, _) => {
                doc.bring_in = Some(money(unit));
                doc.small_bet = Some(money(big));
                doc.big_bet = Some(money(2 * big));
            }
            (false, BettingStructure::FixedLimit) => {
                doc.small_bet = Some(money(big));
                doc.big_bet = Some(money(2 * big));
            }
            _ => doc.min_bet = Some(money(big)),
        }

        let config = EngineConfig::strict();
        let (state, _) = initial_state(&doc, &config).expect("generated stakes are postable");
        let mut deck: Vec<Card> = Card::deck()
            .filter(|c| !variant.is_short_deck() || c.rank.high_value().is_some_and(|v| v >= 6))
            .collect();
        deck.shuffle(rng);
        let hidden = (0..n).map(|_| rng.gen_bool(options.hidden_hole)).collect();
        Generator {
            rng,
            options,
            doc,
            state,
            deck,
            hidden,
            truth: vec![Vec::new(); n],
            raises: (usize::MAX, 0),
            scale,
        }
    }

    fn run(mut self) -> GeneratedHand {
        let truncate_at = self
            .rng
            .gen_bool(self.options.truncate)
            .then(|| self.rng.gen_range(0..40));
        for _ in 0..1000 {
            if truncate_at.is_some_and(|t| self.doc.actions.len() >= t) {
                break;
            }
            let Some(body) = self.next_body() else { break };
            self.push(body);
        }
        let complete = self.state.is_terminal();
        if self.options.decorate {
            self.decorate(complete);
        }
        GeneratedHand {
            document: self.doc,
            complete,
        }
    }

    fn push(&mut self, body: ActionBody) {
        self.track(&body);
        let mut record = ActionRecord::new(body);
        if self.options.decorate && self.rng.gen_bool(0.05) {
            record = record.with_commentary(format!("note {}", self.doc.actions.len()));
        }
        let index = self.doc.actions.len();
        if let Err(e) = self.state.apply(&record, index, &EngineConfig::strict()) {
            panic!(
                "generator produced an illegal action {record} in {}: {e}",
                self.doc.variant
            );
        }
        let mut entry = ActionEntry::new(record);
        if self.options.decorate && self.rng.gen_bool(0.1) {
            entry.trailing_comment = Some(NAMES[index % NAMES.len()].to_owned());
        }
        self.doc.actions.push(entry);
    }

    /// Mirrors the engine's discard bookkeeping on the true cards. Dealt
    /// cards reach `truth` as they leave the deck.
    fn track(&mut self, body: &ActionBody) {
        if let ActionBody::StandPatDiscard { player, cards } = body {
            let p = player.index();
            let mut shown: Vec<Card> = self.state.hole_cards(*player);
            for card in cards {
                let i = shown
                    .iter()
                    .position(|c| c.is_known() && c == card)
                    .or_else(|| shown.iter().position(|c| c.is_unknown()))
                    .expect("discarded card is held");
                shown.remove(i);
                self.truth[p].remove(i);
            }
        }
    }

    fn draw(&mut self, player: Option<usize>, count: usize, face_up: &[bool]) -> Vec<Card> {
        (0..count)
            .map(|i| {
                let card = self.deck.pop().expect("deck has cards");
                match player {
                    Some(p) => {
                        self.truth[p].push(card);
                        let up = face_up.get(i).copied().unwrap_or(false);
                        if self.hidden[p] && !up {
                            Card::UNKNOWN
                        } else {
                            card
                        }
                    }
                    None => card,
                }
            })
            .collect()
    }

    fn next_body(&mut self) -> Option<ActionBody> {
        let body = match self.state.expected() {
            Expected::Terminal => return None,
            Expected::DealHole { player, count } => {
                let p = player.index();
                let street = self.state.plan().streets[self.state.street()];
                let faces: Vec<bool> = match street.deal {
                    Deal::Hole(faces) => faces
                        .iter()
                        .skip(faces.len() - count)
                        .map(|f| *f == Face::Up)
                        .collect(),
                    _ => Vec::new(),
                };
                if self.deck.len() < count {
                    return None;
                }
                let cards = self.draw(Some(p), count, &faces);
                ActionBody::DealHole { player, cards }
            }
            Expected::DealBoard { count } => {
                if self.deck.len() < count {
                    return None;
                }
                ActionBody::DealBoard {
                    cards: self.draw(None, count, &[]),
                }
            }
            Expected::Draw { player } => {
                let hole = self.state.hole_cards(player);
                let owed: usize = self.state.pending_draw().iter().sum();
                let room = self.deck.len().saturating_sub(owed);
                let k = self.rng.gen_range(0..=hole.len().min(room));
                let mut picks: Vec<usize> = (0..hole.len()).collect();
                picks.shuffle(self.rng);
                picks.truncate(k);
                picks.sort_unstable();
                let cards = picks.iter().map(|&i| hole[i]).collect();
                ActionBody::StandPatDiscard { player, cards }
            }
            Expected::Replace { player, count } => ActionBody::DealHole {
                player,
                cards: self.draw(Some(player.index()), count, &[]),
            },
            Expected::BringIn { player } => {
                let player = player.unwrap_or_else(|| self.first_active());
                let bounds = self.state.bet_bounds(player);
                match bounds.min_to {
                    Some(to) if self.rng.gen_bool(0.3) => {
                        ActionBody::CompleteBetRaiseTo { player, amount: to }
                    }
                    _ => ActionBody::PostBringIn { player },
                }
            }
            Expected::Bet { player } => {
                let player = player.unwrap_or_else(|| self.first_active());
                self.bet(player)
            }
            Expected::Show { player } => self.show(player),
        };
        Some(body)
    }

    fn first_active(&self) -> PlayerIndex {
        let p = self
            .state
            .statuses()
            .iter()
            .position(|s| *s == PlayerStatus::Active)
            .expect("someone can act");
        PlayerIndex::from_index(p)
    }

    fn bet(&mut self, player: PlayerIndex) -> ActionBody {
        let street = self.state.street();
        if self.raises.0 != street {
            self.raises = (street, 0);
        }
        let bounds = self.state.bet_bounds(player);
        let facing = bounds.call.is_positive();
        let roll: f64 = self.rng.gen();
        let may_raise = bounds.min_to.is_some() && self.raises.1 < 4;
        if facing && roll < 0.2 {
            return ActionBody::Fold { player };
        }
        let raise_chance = if facing { 0.45 } else { 0.4 };
        if may_raise && roll > 1.0 - raise_chance {
            self.raises.1 += 1;
            let lo = bounds.min_to.expect("checked");
            let hi = bounds.max_to.unwrap_or(lo.max(lo + lo));
            return ActionBody::CompleteBetRaiseTo {
                player,
                amount: self.pick(lo, hi),
            };
        }
        ActionBody::CheckCall { player }
    }

    /// A random amount in `[lo, hi]` at the document's granularity, biased
    /// toward the bounds.
    fn pick(&mut self, lo: Money, hi: Money) -> Money {
        if hi <= lo {
            return lo;
        }
        let scale = self.state.granularity().max(self.scale);
        let a = lo.units_at(scale).expect("granular");
        let b = hi.units_at(scale).expect("granular");
        let units = match self.rng.gen_range(0..10) {
            0..=4 => a,
            5 => b,
            _ => self.rng.gen_range(a..=b),
        };
        Money::from_units_at(units, scale, lo.form())
    }

    fn show(&mut self, player: PlayerIndex) -> ActionBody {
        let p = player.index();
        let unmucked = self
            .state
            .statuses()
            .iter()
            .filter(|s| {
                matches!(
                    s,
                    PlayerStatus::Active | PlayerStatus::AllIn | PlayerStatus::Shown
                )
            })
            .count();
        let roll: f64 = self.rng.gen();
        let disclosure = if roll < 0.1 && unmucked > 1 {
            Disclosure::Muck
        } else if roll < 0.2 && self.state.hole_cards(player).iter().all(|c| c.is_known()) {
            Disclosure::ShowPrevious
        } else {
            Disclosure::Show(self.truth[p].clone())
        };
        ActionBody::ShowMuck { player, disclosure }
    }

    fn decorate(&mut self, complete: bool) {
        let n = self.doc.player_count();
        let rng = &mut *self.rng;
        let o = &mut self.doc.optional;
        if rng.gen_bool(0.5) {
            o.event = Some(format!("Generated series #{}", rng.gen_range(1..100)));
        }
        if rng.gen_bool(0.3) {
            o.city = Some("Las Vegas".to_owned());
            o.country = Some("United States of America".to_owned());
        }
        if rng.gen_bool(0.4) {
            o.day = Some(rng.gen_range(1..=28));
            o.month = Some(rng.gen_range(1..=12));
            o.year = Some(rng.gen_range(2000..=2030));
        }
        if rng.gen_bool(0.5) {
            o.players = Some((0..n).map(|i| NAMES[i % NAMES.len()].to_owned()).collect());
        }
        if rng.gen_bool(0.3) {
            o.seats = Some((1..=n as i64).collect());
            o.seat_count = Some(9);
        }
        if rng.gen_bool(0.2) {
            o.currency = Some("USD".to_owned());
            o.time_zone = Some("America/Los_Angeles".to_owned());
        }
        if rng.gen_bool(0.2) {
            o.hand = Some(rng.gen_range(1..10_000));
        }
        if complete && rng.gen_bool(0.5) {
            let settled = phh_core::engine::settle(&self.state).expect("terminal");
            if let Some(stacks) = settled.stacks.into_iter().collect::<Option<Vec<Money>>>() {
                o.finishing_stacks = Some(stacks);
            }
        }
        if rng.gen_bool(0.2) {
            self.doc.user_fields.insert(
                "_source".to_owned(),
                FieldValue::String("generator".to_owned()),
            );
        }
        if rng.gen_bool(0.3) {
            self.doc.field_comments.insert(
                "variant".to_owned(),
                FieldComments {
                    leading: vec![format!("Generated {} hand.", self.doc.variant)],
                    trailing: None,
                },
            );
        }
        if rng.gen_bool(0.1) {
            self.doc.closing_comments.push("end of hand".to_owned());
        }
    }
}
