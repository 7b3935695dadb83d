use std::cmp::Ordering;

use serde::Serialize;

use crate::action::PlayerIndex;
use crate::card::Card;
use crate::diagnostic::{Code, Diagnostic, Location, Severity};
use crate::eval::{compare, evaluate, EvaluatedStrength, EvaluationOrder, ShowdownRules};
use crate::money::{Money, NumericForm};

use super::state::{GameState, PlayerStatus};
use super::{EngineError, Strictness};

/// One layer of the pot and who can win it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Pot {
    pub amount: Money,
    pub eligible: Vec<PlayerIndex>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Share {
    Whole,
    High,
    Low,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Award {
    pub pot: usize,
    pub player: PlayerIndex,
    pub share: Share,
    pub amount: Money,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Settlement {
    /// Final stacks; `None` where an unknown card leaves the result open.
    pub stacks: Vec<Option<Money>>,
    pub pots: Vec<Pot>,
    pub awards: Vec<Award>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Layers the collected chips into a main pot and side pots. Chips from
/// folded players stay in whichever layer they reached; a layer nobody can
/// win joins the one below it.
pub fn pots(state: &GameState) -> Vec<Pot> {
    let n = state.player_count();
    let collected: Vec<Money> = (0..n)
        .map(|p| state.total_committed()[p] - state.committed()[p])
        .collect();
    let can_win = |p: usize| {
        !matches!(
            state.statuses()[p],
            PlayerStatus::Folded | PlayerStatus::Mucked
        )
    };
    let mut levels: Vec<Money> = collected
        .iter()
        .copied()
        .filter(Money::is_positive)
        .collect();
    levels.sort();
    levels.dedup();
    let mut out: Vec<Pot> = Vec::new();
    let mut prev = Money::ZERO;
    for level in levels {
        let amount: Money = collected.iter().map(|&c| c.min(level) - c.min(prev)).sum();
        let eligible: Vec<PlayerIndex> = (0..n)
            .filter(|&p| can_win(p) && collected[p] >= level)
            .map(PlayerIndex::from_index)
            .collect();
        prev = level;
        match out.last_mut() {
            Some(last) if eligible.is_empty() || last.eligible == eligible => last.amount += amount,
            _ => out.push(Pot { amount, eligible }),
        }
    }
    if let Some(first) = out.first_mut() {
        if first.eligible.is_empty() {
            first.eligible = (0..n)
                .filter(|&p| can_win(p))
                .map(PlayerIndex::from_index)
                .collect();
        }
    }
    out
}

/// Awards every pot of a finished hand.
pub fn settle(state: &GameState) -> Result<Settlement, EngineError> {
    if !state.is_terminal() {
        return Err(EngineError {
            diagnostics: vec![Diagnostic::new(
                Severity::Error,
                Code::NonTerminalState,
                Location::Document,
                "the hand has not finished",
            )],
        });
    }
    let rules = ShowdownRules::for_variant(state.variant());
    let pots = pots(state);
    let mut stacks = state.stacks().to_vec();
    let mut awards = Vec::new();
    let mut diagnostics = Vec::new();
    for (index, pot) in pots.iter().enumerate() {
        if pot.eligible.len() == 1 {
            let player = pot.eligible[0];
            credit(&mut stacks, player, pot.amount);
            awards.push(Award {
                pot: index,
                player,
                share: Share::Whole,
                amount: pot.amount,
            });
            continue;
        }
        let ranked = pot
            .eligible
            .iter()
            .map(|&p| rank_player(state, rules, p))
            .collect::<Result<Vec<_>, String>>();
        let ranked = match ranked {
            Ok(r) => r,
            Err(why) => {
                diagnostics.push(Diagnostic::new(
                    Severity::Warning,
                    Code::UnknownShowdownCards,
                    Location::Document,
                    format!("pot {} cannot be awarded: {why}", index + 1),
                ));
                for p in &pot.eligible {
                    stacks[p.index()] = None;
                }
                continue;
            }
        };
        let high: Vec<&EvaluatedStrength> = ranked.iter().map(|(h, _)| h).collect();
        let high_winners = best(&pot.eligible, &high);
        let lows: Vec<(PlayerIndex, &EvaluatedStrength)> = pot
            .eligible
            .iter()
            .zip(&ranked)
            .filter_map(|(&p, (_, l))| l.as_ref().map(|l| (p, l)))
            .collect();
        let granularity = state.granularity().max(pot.amount.scale());
        let form = pot.amount.form();
        let units = pot
            .amount
            .units_at(granularity)
            .expect("pot fits its granularity");
        if lows.is_empty() {
            split(
                units,
                granularity,
                form,
                &high_winners,
                index,
                Share::Whole,
                &mut stacks,
                &mut awards,
            );
        } else {
            let (players, strengths): (Vec<PlayerIndex>, Vec<&EvaluatedStrength>) =
                lows.into_iter().unzip();
            let low_winners = best(&players, &strengths);
            let low_units = units / 2;
            let high_units = units - low_units;
            split(
                high_units,
                granularity,
                form,
                &high_winners,
                index,
                Share::High,
                &mut stacks,
                &mut awards,
            );
            split(
                low_units,
                granularity,
                form,
                &low_winners,
                index,
                Share::Low,
                &mut stacks,
                &mut awards,
            );
        }
    }
    Ok(Settlement {
        stacks,
        pots,
        awards,
        diagnostics,
    })
}

/// Final stacks. In strict mode an unresolvable pot is an error.
pub fn finishing_stacks(
    state: &GameState,
    strictness: Strictness,
) -> Result<Vec<Option<Money>>, EngineError> {
    let settlement = settle(state)?;
    if strictness == Strictness::Strict && !settlement.diagnostics.is_empty() {
        let diagnostics = settlement
            .diagnostics
            .into_iter()
            .map(|mut d| {
                d.severity = Severity::Error;
                d
            })
            .collect();
        return Err(EngineError { diagnostics });
    }
    Ok(settlement.stacks)
}

fn credit(stacks: &mut [Option<Money>], player: PlayerIndex, amount: Money) {
    if let Some(s) = &mut stacks[player.index()] {
        *s += amount;
    }
}

type Ranked = (EvaluatedStrength, Option<EvaluatedStrength>);

fn rank_player(
    state: &GameState,
    rules: ShowdownRules,
    player: PlayerIndex,
) -> Result<Ranked, String> {
    let hole = state.hole_cards(player);
    let board: &[Card] = state.board();
    if let Some(card) = hole.iter().chain(board).find(|c| !c.is_known()) {
        return Err(format!("{player} holds unknown card {card}"));
    }
    let eval = |order: EvaluationOrder| {
        evaluate(order, &hole, board, rules.selection).map_err(|e| format!("{player}: {e}"))
    };
    let high = eval(rules.high)?.ok_or_else(|| format!("{player} has no high hand"))?;
    let low = match rules.low {
        Some(order) => eval(order)?,
        None => None,
    };
    Ok((high, low))
}

fn best(players: &[PlayerIndex], strengths: &[&EvaluatedStrength]) -> Vec<PlayerIndex> {
    let mut winners: Vec<PlayerIndex> = Vec::new();
    let mut top: Option<&EvaluatedStrength> = None;
    for (&p, &s) in players.iter().zip(strengths) {
        match top.map(|t| compare(s, t).expect("same order")) {
            None | Some(Ordering::Greater) => {
                top = Some(s);
                winners = vec![p];
            }
            Some(Ordering::Equal) => winners.push(p),
            Some(Ordering::Less) => {}
        }
    }
    winners
}

/// Splits evenly in whole units; the earliest winner takes any remainder.
#[allow(clippy::too_many_arguments)]
fn split(
    units: i128,
    scale: u32,
    form: NumericForm,
    winners: &[PlayerIndex],
    pot: usize,
    share: Share,
    stacks: &mut [Option<Money>],
    awards: &mut Vec<Award>,
) {
    let k = winners.len() as i128;
    let each = units / k;
    let extra = units - each * k;
    for (i, &player) in winners.iter().enumerate() {
        let mine = each + if i == 0 { extra } else { 0 };
        let amount = Money::from_units_at(mine, scale, form);
        credit(stacks, player, amount);
        awards.push(Award {
            pot,
            player,
            share,
            amount,
        });
    }
}
