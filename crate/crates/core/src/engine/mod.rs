//! Replays a hand's actions against the rules of its variant.
//!
//! [`initial_state`] posts the forced bets, [`GameState::apply`] applies one
//! action at a time and [`settle`] awards the pots once the hand is over.
//! [`replay`] does all three and records a [`Snapshot`] after every step.

mod plan;
mod settle;
mod state;
#[cfg(test)]
mod tests;

use std::fmt;

use serde::Serialize;

use crate::action::{ActionRecord, PlayerIndex};
use crate::diagnostic::{Code, Diagnostic, Location, Severity};
use crate::document::HandDocument;
use crate::money::Money;

pub use plan::{Deal, Face, Opener, Street, StreetPlan, Tier};
pub use settle::{finishing_stacks, pots, settle, Award, Pot, Settlement, Share};
pub use state::{initial_state, BetBounds, Expected, GameState, HoleCard, Phase, PlayerStatus};

/// How rule violations are handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum Strictness {
    /// The first violation aborts and leaves the state unchanged.
    Strict,
    /// Violations are reported and the action is applied where it can be.
    #[default]
    Warn,
    /// As `Warn`, without reporting.
    Silent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EngineConfig {
    pub strictness: Strictness,
    /// Maximum number of bets and raises per fixed-limit round.
    pub raise_cap: Option<u32>,
}

impl EngineConfig {
    pub fn strict() -> EngineConfig {
        EngineConfig {
            strictness: Strictness::Strict,
            raise_cap: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EngineError {
    pub diagnostics: Vec<Diagnostic>,
}

impl EngineError {
    pub fn codes(&self) -> Vec<Code> {
        self.diagnostics.iter().map(|d| d.code).collect()
    }

    pub fn has_code(&self, code: Code) -> bool {
        self.diagnostics.iter().any(|d| d.code == code)
    }
}

impl fmt::Display for EngineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.diagnostics.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join("; "))
    }
}

impl std::error::Error for EngineError {}

/// Applies the next action, numbering it by how many came before.
pub fn apply_action(
    state: &mut GameState,
    record: &ActionRecord,
    config: &EngineConfig,
) -> Result<Vec<Diagnostic>, EngineError> {
    let index = state.actions_applied();
    state.apply(record, index, config)
}

/// The state of the table after one step of a replay.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Snapshot {
    pub version: u32,
    pub step: usize,
    /// Position of the action in the document's action list.
    pub action_index: Option<usize>,
    pub action: Option<String>,
    #[serde(skip)]
    pub record: Option<ActionRecord>,
    pub street: usize,
    pub phase: Phase,
    pub stacks: Vec<Option<Money>>,
    pub committed: Vec<Money>,
    pub total_committed: Vec<Money>,
    pub pots: Vec<Pot>,
    pub statuses: Vec<PlayerStatus>,
    pub hole: Vec<String>,
    pub board: String,
    pub turn: Option<PlayerIndex>,
    pub terminal: bool,
}

pub const SNAPSHOT_VERSION: u32 = 1;

impl Snapshot {
    pub fn capture(
        state: &GameState,
        step: usize,
        action: Option<(usize, &ActionRecord)>,
    ) -> Snapshot {
        let cards = |cs: &mut dyn Iterator<Item = String>| cs.collect::<String>();
        Snapshot {
            version: SNAPSHOT_VERSION,
            step,
            action_index: action.map(|(i, _)| i),
            action: action.map(|(_, r)| r.to_string()),
            record: action.map(|(_, r)| r.clone()),
            street: state.street(),
            phase: state.phase(),
            stacks: state.stacks().to_vec(),
            committed: state.committed().to_vec(),
            total_committed: state.total_committed().to_vec(),
            pots: pots(state),
            statuses: state.statuses().to_vec(),
            hole: (0..state.player_count())
                .map(|p| {
                    cards(
                        &mut state
                            .hole(PlayerIndex::from_index(p))
                            .iter()
                            .map(|h| h.card.to_string()),
                    )
                })
                .collect(),
            board: cards(&mut state.board().iter().map(ToString::to_string)),
            turn: state.turn(),
            terminal: state.is_terminal(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Replay {
    /// The initial state followed by one snapshot per action.
    pub snapshots: Vec<Snapshot>,
    pub diagnostics: Vec<Diagnostic>,
    pub state: GameState,
    /// `None` when the hand did not finish.
    pub settlement: Option<Settlement>,
}

impl Replay {
    pub fn finishing_stacks(&self) -> Option<&[Option<Money>]> {
        self.settlement.as_ref().map(|s| s.stacks.as_slice())
    }
}

/// Replays every parsed action of `doc`.
///
/// Actions that failed to parse are skipped. If the document states
/// finishing stacks and the hand finishes, they are checked against the
/// computed result.
pub fn replay(doc: &HandDocument, config: &EngineConfig) -> Result<Replay, EngineError> {
    let (mut state, mut diagnostics) = initial_state(doc, config)?;
    let mut snapshots = vec![Snapshot::capture(&state, 0, None)];
    for (index, record) in doc.records() {
        diagnostics.extend(state.apply(record, index, config)?);
        snapshots.push(Snapshot::capture(
            &state,
            snapshots.len(),
            Some((index, record)),
        ));
    }
    let settlement = if state.is_terminal() {
        let settlement = settle(&state)?;
        if config.strictness == Strictness::Strict && !settlement.diagnostics.is_empty() {
            finishing_stacks(&state, config.strictness)?;
        }
        if let Some(stated) = &doc.optional.finishing_stacks {
            let computed = &settlement.stacks;
            let differs = stated.len() != computed.len()
                || stated
                    .iter()
                    .zip(computed)
                    .any(|(s, c)| c.is_some_and(|c| c != *s));
            if differs {
                let shown: Vec<String> = computed
                    .iter()
                    .map(|c| c.map_or_else(|| "?".to_owned(), |m| m.to_string()))
                    .collect();
                let d = Diagnostic::new(
                    Severity::Error,
                    Code::FinishingStackMismatch,
                    Location::Field("finishing_stacks".to_owned()),
                    format!("replay ends with [{}]", shown.join(", ")),
                );
                if config.strictness == Strictness::Strict {
                    return Err(EngineError {
                        diagnostics: vec![d],
                    });
                }
                diagnostics.push(d);
            }
        }
        if config.strictness != Strictness::Silent {
            diagnostics.extend(settlement.diagnostics.iter().cloned());
        }
        Some(settlement)
    } else {
        None
    };
    if config.strictness == Strictness::Silent {
        diagnostics.clear();
    }
    Ok(Replay {
        snapshots,
        diagnostics,
        state,
        settlement,
    })
}
