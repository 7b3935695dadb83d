use serde::Serialize;

use crate::action::{ActionBody, ActionRecord, Disclosure, PlayerIndex};
use crate::card::{Card, Suit};
use crate::diagnostic::{Code, Diagnostic, Location, Severity};
use crate::document::HandDocument;
use crate::money::Money;
use crate::variant::{BettingStructure, Family, VariantCode};

use super::plan::{Deal, Face, Opener, StreetPlan, Tier};
use super::{EngineConfig, EngineError, Strictness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PlayerStatus {
    Active,
    AllIn,
    Folded,
    Mucked,
    Shown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Phase {
    Dealing,
    Drawing,
    Betting,
    /// Every street is done; waiting for hands to be shown or mucked.
    Showdown,
    Terminal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HoleCard {
    pub card: Card,
    pub face: Face,
}

/// What the hand is waiting for next.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expected {
    DealHole {
        player: PlayerIndex,
        count: usize,
    },
    DealBoard {
        count: usize,
    },
    Draw {
        player: PlayerIndex,
    },
    Replace {
        player: PlayerIndex,
        count: usize,
    },
    BringIn {
        player: Option<PlayerIndex>,
    },
    /// `None` when unknown up cards hide who opens.
    Bet {
        player: Option<PlayerIndex>,
    },
    Show {
        player: PlayerIndex,
    },
    Terminal,
}

/// Legal wager sizes for the player to act.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BetBounds {
    /// Chips needed to call, capped by the stack.
    pub call: Money,
    /// Smallest legal complete/bet/raise-to, or `None` if the player may not raise.
    pub min_to: Option<Money>,
    /// Largest legal amount; `None` means unbounded.
    pub max_to: Option<Money>,
    /// The player's whole stack as a to-amount, if the stack is known.
    pub all_in_to: Option<Money>,
}

#[derive(Debug, Clone)]
pub struct GameState {
    pub(super) variant: VariantCode,
    pub(super) plan: StreetPlan,
    pub(super) bring_in: Money,
    pub(super) small_bet: Money,
    pub(super) big_bet: Money,
    pub(super) min_bet: Money,
    pub(super) granularity: u32,
    pub(super) starting: Vec<Option<Money>>,
    pub(super) stacks: Vec<Option<Money>>,
    pub(super) committed: Vec<Money>,
    pub(super) total_committed: Vec<Money>,
    pub(super) pot: Money,
    pub(super) statuses: Vec<PlayerStatus>,
    pub(super) hole: Vec<Vec<HoleCard>>,
    pub(super) board: Vec<Card>,
    pub(super) street: usize,
    pub(super) phase: Phase,
    dealt: Vec<usize>,
    board_dealt: usize,
    drawn: Vec<bool>,
    pending_draw: Vec<usize>,
    turn: Option<usize>,
    acted: Vec<bool>,
    raise_option: Vec<bool>,
    full_level: Money,
    increment: Money,
    bets: u32,
    raise_cap: Option<u32>,
    bring_in_pending: bool,
    last_aggressor: Option<usize>,
    showdown_open: bool,
    showdown_start: Option<usize>,
    applied: usize,
}

/// Collects diagnostics for one action.
struct Cx {
    location: Location,
    diagnostics: Vec<Diagnostic>,
}

impl Cx {
    fn flag(&mut self, code: Code, message: impl Into<String>) {
        self.diagnostics.push(Diagnostic::new(
            Severity::Error,
            code,
            self.location.clone(),
            message,
        ));
    }
}

fn finish(cx: Cx, config: &EngineConfig) -> Result<Vec<Diagnostic>, EngineError> {
    match config.strictness {
        Strictness::Strict if cx.diagnostics.iter().any(Diagnostic::is_error) => Err(EngineError {
            diagnostics: cx.diagnostics,
        }),
        Strictness::Silent => Ok(Vec::new()),
        _ => Ok(cx.diagnostics),
    }
}

pub fn initial_state(
    doc: &HandDocument,
    config: &EngineConfig,
) -> Result<(GameState, Vec<Diagnostic>), EngineError> {
    let Some(variant) = doc.variant.code() else {
        return Err(EngineError {
            diagnostics: vec![Diagnostic::field(
                Severity::Error,
                Code::BadVariantCode,
                "variant",
                format!("cannot replay unknown variant {:?}", doc.variant.as_str()),
            )],
        });
    };
    let n = doc.player_count();
    let per_player = |values: Option<&Vec<Money>>| -> Vec<Money> {
        let mut out: Vec<Money> = (0..n)
            .map(|i| {
                values
                    .and_then(|v| v.get(i))
                    .copied()
                    .unwrap_or(Money::ZERO)
            })
            .collect();
        if n == 2 {
            out.reverse();
        }
        out
    };
    let antes = per_player(Some(&doc.antes));
    let blinds = if variant.is_button_game() {
        per_player(doc.blinds_or_straddles.as_ref())
    } else {
        vec![Money::ZERO; n]
    };
    let granularity = doc.amounts().iter().map(Money::scale).max().unwrap_or(0);
    let plan = StreetPlan::for_variant(variant);
    let mut state = GameState {
        variant,
        plan,
        bring_in: doc.bring_in.unwrap_or(Money::ZERO),
        small_bet: doc.small_bet.unwrap_or(Money::ZERO),
        big_bet: doc.big_bet.unwrap_or(Money::ZERO),
        min_bet: doc.min_bet.unwrap_or(Money::ZERO),
        granularity,
        starting: doc.starting_stacks.clone(),
        stacks: doc.starting_stacks.clone(),
        committed: vec![Money::ZERO; n],
        total_committed: vec![Money::ZERO; n],
        pot: Money::ZERO,
        statuses: vec![PlayerStatus::Active; n],
        hole: vec![Vec::new(); n],
        board: Vec::new(),
        street: 0,
        phase: Phase::Dealing,
        dealt: vec![0; n],
        board_dealt: 0,
        drawn: vec![false; n],
        pending_draw: vec![0; n],
        turn: None,
        acted: vec![false; n],
        raise_option: vec![true; n],
        full_level: Money::ZERO,
        increment: Money::ZERO,
        bets: 0,
        raise_cap: config.raise_cap,
        bring_in_pending: false,
        last_aggressor: None,
        showdown_open: false,
        showdown_start: None,
        applied: 0,
    };
    let mut cx = Cx {
        location: Location::Document,
        diagnostics: Vec::new(),
    };
    for (i, ante) in antes.into_iter().enumerate() {
        let paid = state.forced(i, ante, "ante", &mut cx);
        state.committed[i] -= paid;
        state.pot += paid;
    }
    for (i, blind) in blinds.into_iter().enumerate() {
        state.forced(i, blind, "blind or straddle", &mut cx);
    }
    let top = state.max_committed();
    state.full_level = top;
    state.increment = state.min_bet.max(top);
    state.bets = u32::from(top.is_positive());
    if doc.optional.ante_trimming_status == Some(true) {
        cx.diagnostics.push(Diagnostic::field(
            Severity::Warning,
            Code::AnteTrimmingNotApplied,
            "ante_trimming_status",
            "antes are replayed as written; no trimming is applied",
        ));
    }
    let diagnostics = finish(cx, config)?;
    state.advance();
    Ok((state, diagnostics))
}

impl GameState {
    pub fn variant(&self) -> VariantCode {
        self.variant
    }

    pub fn plan(&self) -> StreetPlan {
        self.plan
    }

    pub fn player_count(&self) -> usize {
        self.stacks.len()
    }

    pub fn street(&self) -> usize {
        self.street
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn is_terminal(&self) -> bool {
        self.phase == Phase::Terminal
    }

    pub fn starting_stacks(&self) -> &[Option<Money>] {
        &self.starting
    }

    pub fn stacks(&self) -> &[Option<Money>] {
        &self.stacks
    }

    pub fn committed(&self) -> &[Money] {
        &self.committed
    }

    pub fn total_committed(&self) -> &[Money] {
        &self.total_committed
    }

    /// Chips collected from finished betting rounds and antes.
    pub fn pot(&self) -> Money {
        self.pot
    }

    pub fn statuses(&self) -> &[PlayerStatus] {
        &self.statuses
    }

    pub fn hole(&self, player: PlayerIndex) -> &[HoleCard] {
        &self.hole[player.index()]
    }

    pub fn hole_cards(&self, player: PlayerIndex) -> Vec<Card> {
        self.hole[player.index()].iter().map(|h| h.card).collect()
    }

    pub fn board(&self) -> &[Card] {
        &self.board
    }

    pub fn pending_draw(&self) -> &[usize] {
        &self.pending_draw
    }

    pub fn turn(&self) -> Option<PlayerIndex> {
        self.turn.map(PlayerIndex::from_index)
    }

    pub fn granularity(&self) -> u32 {
        self.granularity
    }

    /// Whether hands may be shown yet.
    pub fn showdown_open(&self) -> bool {
        self.showdown_open
    }

    /// Stacks plus pot plus current bets, when every stack is known.
    pub fn chip_total(&self) -> Option<Money> {
        let stacks: Option<Money> = self.stacks.iter().copied().sum();
        Some(stacks? + self.pot + self.committed.iter().copied().sum())
    }

    pub fn actions_applied(&self) -> usize {
        self.applied
    }

    fn max_committed(&self) -> Money {
        self.committed.iter().copied().max().unwrap_or(Money::ZERO)
    }

    fn contenders(&self) -> usize {
        self.statuses
            .iter()
            .filter(|s| **s != PlayerStatus::Folded)
            .count()
    }

    fn unmucked(&self) -> usize {
        self.statuses
            .iter()
            .filter(|s| !matches!(s, PlayerStatus::Folded | PlayerStatus::Mucked))
            .count()
    }

    fn is_live(&self, p: usize) -> bool {
        self.statuses[p] != PlayerStatus::Folded
    }

    fn tier_amount(&self) -> Money {
        match self.plan.streets[self.street].tier {
            Tier::SmallBet => self.small_bet,
            Tier::BigBet => self.big_bet,
            Tier::MinBet => self.min_bet,
        }
    }

    /// Posts a forced bet, all-in if the stack is short.
    fn forced(&mut self, p: usize, amount: Money, what: &str, cx: &mut Cx) -> Money {
        if !amount.is_positive() {
            return Money::ZERO;
        }
        let mut pay = amount;
        if let Some(stack) = self.stacks[p] {
            if amount > stack {
                cx.flag(
                    Code::StakesExceedStack,
                    format!(
                        "p{} cannot cover the {what} of {amount} with {stack}",
                        p + 1
                    ),
                );
                pay = stack;
            }
        }
        self.commit(p, pay);
        pay
    }

    fn commit(&mut self, p: usize, pay: Money) {
        if let Some(stack) = &mut self.stacks[p] {
            *stack -= pay;
            if stack.is_zero() {
                self.statuses[p] = PlayerStatus::AllIn;
            }
        }
        self.committed[p] += pay;
        self.total_committed[p] += pay;
    }

    /// Applies one action. In strict mode a failing action leaves the state
    /// untouched.
    pub fn apply(
        &mut self,
        record: &ActionRecord,
        index: usize,
        config: &EngineConfig,
    ) -> Result<Vec<Diagnostic>, EngineError> {
        let backup = (config.strictness == Strictness::Strict).then(|| self.clone());
        let mut cx = Cx {
            location: Location::Action(index),
            diagnostics: Vec::new(),
        };
        self.dispatch(&record.body, &mut cx);
        self.applied += 1;
        let result = finish(cx, config);
        if result.is_err() {
            if let Some(backup) = backup {
                *self = backup;
            }
        }
        result
    }

    fn dispatch(&mut self, body: &ActionBody, cx: &mut Cx) {
        if body.is_noop() {
            return;
        }
        if self.is_terminal() {
            cx.flag(Code::ActionAfterTerminal, "the hand is already over");
            return;
        }
        if let Some(p) = body.referenced_player() {
            if p.index() >= self.player_count() {
                cx.flag(Code::UnknownActor, format!("{p} is not in this hand"));
                return;
            }
        }
        match body {
            ActionBody::NoOp => {}
            ActionBody::DealBoard { cards } => self.deal_board(cards, cx),
            ActionBody::DealHole { player, cards } => self.deal_hole(player.index(), cards, cx),
            ActionBody::PostBringIn { player } => self.post_bring_in(player.index(), cx),
            ActionBody::CompleteBetRaiseTo { player, amount } => {
                self.complete_bet_raise(player.index(), *amount, cx)
            }
            ActionBody::CheckCall { player } => self.check_call(player.index(), cx),
            ActionBody::Fold { player } => self.fold(player.index(), cx),
            ActionBody::StandPatDiscard { player, cards } => {
                self.stand_pat_discard(player.index(), cards, cx)
            }
            ActionBody::ShowMuck { player, disclosure } => {
                self.show_muck(player.index(), disclosure, cx)
            }
        }
        self.advance();
    }

    // Dealing.

    fn live_cards(&self) -> impl Iterator<Item = Card> + '_ {
        self.hole
            .iter()
            .flatten()
            .map(|h| h.card)
            .chain(self.board.iter().copied())
    }

    fn check_new_cards(&self, cards: &[Card], cx: &mut Cx) {
        let mut seen: Vec<Card> = self.live_cards().filter(|c| c.is_known()).collect();
        for &card in cards {
            if !card.is_known() {
                continue;
            }
            if self.variant.is_short_deck() && card.rank.high_value().is_some_and(|v| v < 6) {
                cx.flag(
                    Code::CardOutsideDeck,
                    format!("{card} is not in a short deck"),
                );
            }
            if seen.contains(&card) {
                cx.flag(Code::DuplicateCard, format!("{card} is already in play"));
            }
            seen.push(card);
        }
    }

    fn deal_board(&mut self, cards: &[Card], cx: &mut Cx) {
        let Deal::Board(n) = self.plan.streets[self.street].deal else {
            cx.flag(Code::WrongStreetAction, "no board cards are due");
            return;
        };
        if self.phase != Phase::Dealing {
            cx.flag(Code::WrongStreetAction, "no board cards are due");
            return;
        }
        if self.board_dealt + cards.len() > n {
            cx.flag(
                Code::TooManyCards,
                format!(
                    "this street has {n} board cards, {} already dealt",
                    self.board_dealt
                ),
            );
            return;
        }
        self.check_new_cards(cards, cx);
        self.board.extend_from_slice(cards);
        self.board_dealt += cards.len();
    }

    fn deal_hole(&mut self, p: usize, cards: &[Card], cx: &mut Cx) {
        if !self.is_live(p) {
            cx.flag(Code::WrongStreetAction, format!("p{} has folded", p + 1));
            return;
        }
        let deal = self.plan.streets[self.street].deal;
        match (self.phase, deal) {
            (Phase::Dealing, Deal::Hole(faces)) => {
                if self.dealt[p] + cards.len() > faces.len() {
                    cx.flag(
                        Code::TooManyCards,
                        format!(
                            "p{} gets {} cards this street, {} already dealt",
                            p + 1,
                            faces.len(),
                            self.dealt[p]
                        ),
                    );
                    return;
                }
                self.check_new_cards(cards, cx);
                let start = self.dealt[p];
                for (i, &card) in cards.iter().enumerate() {
                    self.hole[p].push(HoleCard {
                        card,
                        face: faces[start + i],
                    });
                }
                self.dealt[p] += cards.len();
            }
            (Phase::Drawing, _) if self.drawn[p] && self.pending_draw[p] > 0 => {
                if cards.len() > self.pending_draw[p] {
                    cx.flag(
                        Code::TooManyCards,
                        format!("p{} is owed {} cards", p + 1, self.pending_draw[p]),
                    );
                    return;
                }
                self.check_new_cards(cards, cx);
                self.hole[p].extend(cards.iter().map(|&card| HoleCard {
                    card,
                    face: Face::Down,
                }));
                self.pending_draw[p] -= cards.len();
            }
            _ => cx.flag(
                Code::WrongStreetAction,
                format!("no hole cards are due to p{}", p + 1),
            ),
        }
    }

    fn deal_complete(&self) -> bool {
        match self.plan.streets[self.street].deal {
            Deal::Hole(faces) => (0..self.player_count())
                .filter(|&p| self.is_live(p))
                .all(|p| self.dealt[p] >= faces.len()),
            Deal::Board(n) => self.board_dealt >= n,
            Deal::Draw => true,
        }
    }

    // Drawing.

    fn next_drawer(&self) -> Option<usize> {
        (0..self.player_count()).find(|&p| self.is_live(p) && !self.drawn[p])
    }

    fn stand_pat_discard(&mut self, p: usize, cards: &[Card], cx: &mut Cx) {
        if self.phase != Phase::Drawing || self.drawn[p] || !self.is_live(p) {
            cx.flag(
                Code::WrongStreetAction,
                format!("p{} cannot draw now", p + 1),
            );
            return;
        }
        if let Some(expected) = self.next_drawer() {
            if expected != p {
                cx.flag(
                    Code::OutOfTurn,
                    format!("p{} draws before p{}", p + 1, expected + 1),
                );
            }
        }
        let mut removed = 0;
        for &card in cards {
            let hand = &mut self.hole[p];
            let exact = card
                .is_known()
                .then(|| hand.iter().position(|h| h.card == card))
                .flatten();
            let slot = exact.or_else(|| hand.iter().position(|h| h.card.is_unknown()));
            match slot {
                Some(i) => {
                    hand.remove(i);
                    removed += 1;
                }
                None => cx.flag(
                    Code::DiscardNotHeld,
                    format!("p{} does not hold {card}", p + 1),
                ),
            }
        }
        self.drawn[p] = true;
        self.pending_draw[p] = removed;
    }

    fn draw_complete(&self) -> bool {
        self.next_drawer().is_none() && self.pending_draw.iter().all(|&n| n == 0)
    }

    // Betting.

    fn active(&self, p: usize) -> bool {
        self.statuses[p] == PlayerStatus::Active
    }

    fn needs_to_act(&self, p: usize) -> bool {
        self.active(p) && (!self.acted[p] || self.committed[p] < self.max_committed())
    }

    fn next_to_act(&self, after: usize) -> Option<usize> {
        let n = self.player_count();
        (1..=n)
            .map(|k| (after + k) % n)
            .find(|&q| self.needs_to_act(q))
    }

    fn first_to_act_from(&self, start: usize) -> Option<usize> {
        let n = self.player_count();
        (0..n)
            .map(|k| (start + k) % n)
            .find(|&q| self.needs_to_act(q))
    }

    fn betting_possible(&self) -> bool {
        let active: Vec<usize> = (0..self.player_count())
            .filter(|&p| self.active(p))
            .collect();
        match active.as_slice() {
            [] => false,
            [p] => self.committed[*p] < self.max_committed(),
            _ => true,
        }
    }

    fn start_betting(&mut self) {
        if !self.betting_possible() {
            self.open_showdown();
            self.end_round();
            self.next_street();
            return;
        }
        self.phase = Phase::Betting;
        let n = self.player_count();
        self.turn = match self.plan.streets[self.street].opener {
            Opener::Position if self.street == 0 => {
                let top = self.max_committed();
                let last = (0..n)
                    .rev()
                    .find(|&p| self.committed[p] == top)
                    .unwrap_or(n - 1);
                self.first_to_act_from((last + 1) % n)
            }
            Opener::Position => self.first_to_act_from(0),
            Opener::BringIn => {
                let opener = self.bring_in_player();
                self.bring_in_pending = true;
                opener
            }
            Opener::UpCards => self.best_showing(),
        };
    }

    /// The lowest up card brings in, or the highest in razz. `None` when an
    /// up card is unknown.
    fn bring_in_player(&self) -> Option<usize> {
        let razz = self.variant == VariantCode::FixedLimitRazz;
        let mut best: Option<(u8, u8, usize)> = None;
        for p in (0..self.player_count()).filter(|&p| self.active(p)) {
            let up = self.hole[p].iter().rev().find(|h| h.face == Face::Up)?.card;
            if !up.is_known() {
                return None;
            }
            let rank = if razz {
                up.rank.low_value()
            } else {
                up.rank.high_value()
            }?;
            let key = (rank, suit_order(up.suit), p);
            let better = match best {
                None => true,
                Some((r, s, _)) if razz => (key.0, key.1) > (r, s),
                Some((r, s, _)) => (key.0, key.1) < (r, s),
            };
            if better {
                best = Some(key);
            }
        }
        best.map(|(_, _, p)| p)
    }

    /// The best hand showing on board opens later stud streets; the earlier
    /// player wins ties.
    fn best_showing(&self) -> Option<usize> {
        let low = self.variant == VariantCode::FixedLimitRazz;
        let mut best: Option<(u32, usize)> = None;
        for p in (0..self.player_count()).filter(|&p| self.active(p)) {
            let up: Vec<Card> = self.hole[p]
                .iter()
                .filter(|h| h.face == Face::Up)
                .map(|h| h.card)
                .collect();
            let key = showing_key(&up, low)?;
            if best.is_none_or(|(k, _)| key > k) {
                best = Some((key, p));
            }
        }
        best.map(|(_, p)| p)
    }

    /// Validates that `p` may take a betting action now.
    fn betting_actor(&mut self, p: usize, cx: &mut Cx) -> bool {
        if self.phase != Phase::Betting {
            cx.flag(Code::WrongStreetAction, "no betting round is in progress");
            return false;
        }
        if !self.active(p) {
            cx.flag(
                Code::OutOfTurn,
                format!("p{} cannot act: {:?}", p + 1, self.statuses[p]),
            );
            return false;
        }
        if let Some(t) = self.turn {
            if t != p {
                cx.flag(
                    Code::OutOfTurn,
                    format!("p{} acts but it is p{}'s turn", p + 1, t + 1),
                );
            }
        }
        true
    }

    fn after_bet_action(&mut self, p: usize) {
        self.acted[p] = true;
        self.raise_option[p] = false;
        self.turn = self.next_to_act(p);
    }

    fn post_bring_in(&mut self, p: usize, cx: &mut Cx) {
        if self.variant.family() != Family::Stud || !self.bring_in_pending {
            cx.flag(Code::WrongStreetAction, "no bring-in is due");
            return;
        }
        if !self.betting_actor(p, cx) {
            return;
        }
        let pay = match self.stacks[p] {
            Some(stack) => self.bring_in.min(stack),
            None => self.bring_in,
        };
        self.commit(p, pay);
        self.bring_in_pending = false;
        self.after_bet_action(p);
    }

    fn check_call(&mut self, p: usize, cx: &mut Cx) {
        if self.bring_in_pending && self.phase == Phase::Betting {
            cx.flag(
                Code::WrongStreetAction,
                "the bring-in must be posted or completed first",
            );
            return;
        }
        if !self.betting_actor(p, cx) {
            return;
        }
        self.call(p);
        self.after_bet_action(p);
    }

    fn call(&mut self, p: usize) {
        let mut pay = self.max_committed() - self.committed[p];
        if let Some(stack) = self.stacks[p] {
            pay = pay.min(stack);
        }
        self.commit(p, pay);
    }

    fn fold(&mut self, p: usize, cx: &mut Cx) {
        if self.bring_in_pending && self.phase == Phase::Betting && self.turn == Some(p) {
            cx.flag(
                Code::WrongStreetAction,
                "the bring-in must be posted or completed first",
            );
            return;
        }
        if !self.betting_actor(p, cx) {
            return;
        }
        self.statuses[p] = PlayerStatus::Folded;
        self.after_bet_action(p);
    }

    pub fn bet_bounds(&self, player: PlayerIndex) -> BetBounds {
        let p = player.index();
        let max = self.max_committed();
        let all_in_to = self.stacks[p].map(|s| s + self.committed[p]);
        let mut call = max - self.committed[p];
        if let Some(stack) = self.stacks[p] {
            call = call.min(stack);
        }
        let facing = max.is_positive() && !self.bring_in_pending;
        let may_raise = all_in_to.is_none_or(|a| a > max) && (self.raise_option[p] || !facing);
        let (lo, hi) = if self.plan.is_fixed_limit() {
            let target = self.full_level + self.tier_amount();
            (target, Some(target))
        } else {
            let lo = max + self.increment.max(self.min_bet);
            let hi = (self.variant.betting_structure() == BettingStructure::PotLimit).then(|| {
                let others: Money = self.committed.iter().copied().sum();
                max + self.pot + others + (max - self.committed[p])
            });
            (lo, hi)
        };
        let capped = self.plan.is_fixed_limit() && facing && self.bets_capped();
        let clamp = |m: Money| all_in_to.map_or(m, |a| m.min(a));
        BetBounds {
            call,
            min_to: (may_raise && !capped).then(|| clamp(lo)),
            max_to: if may_raise && !capped {
                match hi {
                    Some(h) => Some(clamp(h)),
                    None => all_in_to,
                }
            } else {
                None
            },
            all_in_to,
        }
    }

    fn bets_capped(&self) -> bool {
        self.raise_cap.is_some_and(|cap| self.bets >= cap)
    }

    fn complete_bet_raise(&mut self, p: usize, amount: Money, cx: &mut Cx) {
        if !self.betting_actor(p, cx) {
            return;
        }
        let max = self.max_committed();
        let all_in_to = self.stacks[p].map(|s| s + self.committed[p]);
        if amount <= max {
            cx.flag(
                Code::BelowMinimum,
                format!(
                    "raise to {amount} does not exceed the current bet of {max}; treated as a call"
                ),
            );
            self.call(p);
            self.bring_in_pending = false;
            self.after_bet_action(p);
            return;
        }
        let mut amount = amount;
        if let Some(all_in) = all_in_to {
            if amount > all_in {
                cx.flag(
                    Code::AboveCap,
                    format!("p{} has only {all_in} to bet; treated as all-in", p + 1),
                );
                amount = all_in;
            }
        }
        let is_all_in = all_in_to == Some(amount);
        let facing = max.is_positive() && !self.bring_in_pending;
        if facing && !self.raise_option[p] {
            cx.flag(
                Code::AboveCap,
                format!("p{} may not re-raise after an incomplete raise", p + 1),
            );
        }
        let full = if self.plan.is_fixed_limit() {
            let target = self.full_level + self.tier_amount();
            if amount > target {
                cx.flag(
                    Code::AboveCap,
                    format!("fixed-limit raise must be to {target}, not {amount}"),
                );
            } else if amount < target && !is_all_in {
                cx.flag(
                    Code::BelowMinimum,
                    format!("fixed-limit raise must be to {target}, not {amount}"),
                );
            }
            if self.bets_capped() {
                cx.flag(
                    Code::RaiseCapExceeded,
                    format!("betting is capped at {} bets", self.bets),
                );
            }
            amount >= target
        } else {
            let step = self.increment.max(self.min_bet);
            let min_to = max + step;
            if amount < min_to && !is_all_in {
                cx.flag(
                    Code::BelowMinimum,
                    format!("minimum raise is to {min_to}, not {amount}"),
                );
            }
            if self.variant.betting_structure() == BettingStructure::PotLimit {
                let others: Money = self.committed.iter().copied().sum();
                let cap = max + self.pot + others + (max - self.committed[p]);
                if amount > cap {
                    cx.flag(
                        Code::AboveCap,
                        format!("pot-limit maximum is {cap}, not {amount}"),
                    );
                }
            }
            amount - max >= step
        };
        let pay = amount - self.committed[p];
        self.commit(p, pay);
        if full {
            if !self.plan.is_fixed_limit() {
                self.increment = self.increment.max(amount - max);
            }
            self.full_level = amount;
            self.bets += 1;
            for q in 0..self.player_count() {
                if q != p {
                    self.raise_option[q] = true;
                }
            }
        }
        self.last_aggressor = Some(p);
        self.bring_in_pending = false;
        self.after_bet_action(p);
    }

    fn round_open(&self) -> bool {
        self.bring_in_pending || (0..self.player_count()).any(|p| self.needs_to_act(p))
    }

    /// Returns any uncalled excess and sweeps bets into the pot.
    fn end_round(&mut self) {
        let n = self.player_count();
        if let Some(top) = (0..n).max_by_key(|&p| (self.committed[p], std::cmp::Reverse(p))) {
            let second = (0..n)
                .filter(|&q| q != top)
                .map(|q| self.committed[q])
                .max()
                .unwrap_or(Money::ZERO);
            let excess = self.committed[top] - second;
            if excess.is_positive() {
                self.committed[top] -= excess;
                self.total_committed[top] -= excess;
                if let Some(stack) = &mut self.stacks[top] {
                    *stack += excess;
                    if self.statuses[top] == PlayerStatus::AllIn {
                        self.statuses[top] = PlayerStatus::Active;
                    }
                }
            }
        }
        for c in &mut self.committed {
            self.pot += *c;
            *c = Money::ZERO;
        }
    }

    fn next_street(&mut self) {
        self.turn = None;
        self.bring_in_pending = false;
        if self.street + 1 >= self.plan.streets.len() {
            self.phase = Phase::Showdown;
            self.open_showdown();
            return;
        }
        self.street += 1;
        let n = self.player_count();
        self.dealt = vec![0; n];
        self.board_dealt = 0;
        self.drawn = vec![false; n];
        self.pending_draw = vec![0; n];
        self.acted = vec![false; n];
        self.raise_option = vec![true; n];
        self.full_level = Money::ZERO;
        self.increment = self.min_bet;
        self.bets = 0;
        self.last_aggressor = None;
        self.phase = if self.plan.streets[self.street].deal == Deal::Draw {
            Phase::Drawing
        } else {
            Phase::Dealing
        };
    }

    fn open_showdown(&mut self) {
        if !self.showdown_open {
            self.showdown_start = self.last_aggressor.filter(|&p| self.is_live(p));
        }
        self.showdown_open = true;
    }

    // Showdown.

    fn showing_pending(&self, p: usize) -> bool {
        matches!(self.statuses[p], PlayerStatus::Active | PlayerStatus::AllIn)
    }

    /// Next player due to show: the last aggressor first, then in order.
    pub(super) fn next_shower(&self) -> Option<usize> {
        let n = self.player_count();
        let start = self.showdown_start.unwrap_or(0);
        (0..n)
            .map(|k| (start + k) % n)
            .find(|&p| self.showing_pending(p))
    }

    fn show_muck(&mut self, p: usize, disclosure: &Disclosure, cx: &mut Cx) {
        if !self.showdown_open {
            cx.flag(
                Code::WrongStreetAction,
                "hands cannot be shown while betting continues",
            );
            return;
        }
        if !self.showing_pending(p) {
            cx.flag(
                Code::WrongStreetAction,
                format!("p{} cannot show or muck: {:?}", p + 1, self.statuses[p]),
            );
            return;
        }
        if let Some(expected) = self.next_shower() {
            if expected != p {
                cx.flag(
                    Code::OutOfTurn,
                    format!("p{} shows before p{}", p + 1, expected + 1),
                );
            }
        }
        match disclosure {
            Disclosure::Muck => self.statuses[p] = PlayerStatus::Mucked,
            Disclosure::ShowPrevious => {
                if self.hole[p].iter().any(|h| !h.card.is_known()) {
                    cx.flag(
                        Code::DashWithoutKnownHole,
                        format!("p{} shows with `-` but some hole cards are unknown", p + 1),
                    );
                }
                self.statuses[p] = PlayerStatus::Shown;
            }
            Disclosure::Show(cards) => {
                self.reveal(p, cards, cx);
                self.statuses[p] = PlayerStatus::Shown;
            }
        }
    }

    /// Merges shown cards into the hole: they either restate it or fill
    /// its unknown slots.
    fn reveal(&mut self, p: usize, cards: &[Card], cx: &mut Cx) {
        let hand = &self.hole[p];
        let mismatch = |cx: &mut Cx| {
            cx.flag(
                Code::ShownCardsMismatch,
                format!("p{} shows cards that do not match the hole cards", p + 1),
            )
        };
        let mut merged = hand.clone();
        let mut fresh = Vec::new();
        let mut ok = cards.len() <= hand.len();
        let mut matched = vec![false; merged.len()];
        for &card in cards.iter().filter(|c| c.is_known()) {
            if let Some(i) = (0..merged.len()).find(|&i| !matched[i] && merged[i].card == card) {
                matched[i] = true;
            }
        }
        for &card in cards {
            if card.is_known()
                && merged
                    .iter()
                    .zip(&matched)
                    .any(|(h, &m)| m && h.card == card)
            {
                continue;
            }
            match (0..merged.len()).find(|&i| !matched[i] && !merged[i].card.is_known()) {
                Some(i) => {
                    matched[i] = true;
                    if card.is_known() {
                        merged[i].card = card;
                        fresh.push(card);
                    }
                }
                None => ok = false,
            }
        }
        if !ok {
            mismatch(cx);
            let faces: Vec<Face> = hand.iter().map(|h| h.face).collect();
            merged = cards
                .iter()
                .enumerate()
                .map(|(i, &card)| HoleCard {
                    card,
                    face: faces.get(i).copied().unwrap_or(Face::Down),
                })
                .collect();
            fresh = cards.to_vec();
            self.hole[p].clear();
        }
        self.check_new_cards(&fresh, cx);
        self.hole[p] = merged;
    }

    fn showdown_complete(&self) -> bool {
        self.phase == Phase::Showdown && (0..self.player_count()).all(|p| !self.showing_pending(p))
    }

    /// Moves the state forward past everything that needs no action.
    pub(super) fn advance(&mut self) {
        loop {
            if self.phase == Phase::Terminal {
                return;
            }
            if self.contenders() <= 1 {
                self.end_round();
                self.phase = Phase::Terminal;
                self.turn = None;
                return;
            }
            if self.showdown_open && self.unmucked() <= 1 {
                self.end_round();
                self.phase = Phase::Terminal;
                self.turn = None;
                return;
            }
            match self.phase {
                Phase::Dealing => {
                    if !self.deal_complete() {
                        self.turn = None;
                        return;
                    }
                    self.start_betting();
                }
                Phase::Drawing => {
                    if !self.draw_complete() {
                        self.turn = self.next_drawer();
                        return;
                    }
                    self.start_betting();
                }
                Phase::Betting => {
                    if self.round_open() {
                        return;
                    }
                    if !self.betting_possible_later() {
                        self.open_showdown();
                    }
                    self.end_round();
                    self.next_street();
                }
                Phase::Showdown => {
                    if self.showdown_complete() {
                        self.phase = Phase::Terminal;
                        self.turn = None;
                    } else {
                        self.turn = self.next_shower();
                    }
                    return;
                }
                Phase::Terminal => return,
            }
        }
    }

    /// Whether more than one player can still bet on later streets.
    fn betting_possible_later(&self) -> bool {
        (0..self.player_count()).filter(|&p| self.active(p)).count() >= 2
    }

    /// What the hand is waiting for.
    pub fn expected(&self) -> Expected {
        let player = PlayerIndex::from_index;
        match self.phase {
            Phase::Terminal => Expected::Terminal,
            Phase::Showdown => match self.next_shower() {
                Some(p) => Expected::Show { player: player(p) },
                None => Expected::Terminal,
            },
            Phase::Dealing => match self.plan.streets[self.street].deal {
                Deal::Hole(faces) => {
                    let p = (0..self.player_count())
                        .find(|&p| self.is_live(p) && self.dealt[p] < faces.len())
                        .expect("dealing is incomplete");
                    Expected::DealHole {
                        player: player(p),
                        count: faces.len() - self.dealt[p],
                    }
                }
                Deal::Board(n) => Expected::DealBoard {
                    count: n - self.board_dealt,
                },
                Deal::Draw => unreachable!("draw streets start in the drawing phase"),
            },
            Phase::Drawing => {
                if let Some(p) = (0..self.player_count()).find(|&p| self.pending_draw[p] > 0) {
                    Expected::Replace {
                        player: player(p),
                        count: self.pending_draw[p],
                    }
                } else {
                    Expected::Draw {
                        player: player(self.next_drawer().expect("drawing is incomplete")),
                    }
                }
            }
            Phase::Betting if self.bring_in_pending => Expected::BringIn {
                player: self.turn.map(player),
            },
            Phase::Betting => Expected::Bet {
                player: self.turn.map(player),
            },
        }
    }
}

fn suit_order(suit: Suit) -> u8 {
    match suit {
        Suit::Club => 0,
        Suit::Diamond => 1,
        Suit::Heart => 2,
        Suit::Spade => 3,
        Suit::Unknown => 4,
    }
}

/// Strength of up to four face-up cards, larger is better. Only pairs,
/// trips and quads count; razz prefers the lowest holding with aces low.
fn showing_key(cards: &[Card], low: bool) -> Option<u32> {
    let mut values = Vec::with_capacity(cards.len());
    for c in cards {
        let v = if low {
            c.rank.low_value()
        } else {
            c.rank.high_value()
        }?;
        values.push(v);
    }
    let mut groups: Vec<(u8, u8)> = Vec::new();
    for v in values {
        match groups.iter_mut().find(|(r, _)| *r == v) {
            Some((_, n)) => *n += 1,
            None => groups.push((v, 1)),
        }
    }
    groups.sort_by(|a, b| b.1.cmp(&a.1).then(b.0.cmp(&a.0)));
    let shape: Vec<u8> = groups.iter().map(|g| g.1).collect();
    let ladder = match shape.as_slice() {
        [4, ..] => 4,
        [3, ..] => 3,
        [2, 2, ..] => 2,
        [2, ..] => 1,
        _ => 0,
    };
    let mut key: u32 = ladder;
    for i in 0..4 {
        key = key << 4 | groups.get(i).map_or(0, |g| g.0 as u32);
    }
    Some(if low { u32::MAX - key } else { key })
}
