//! The action micro-grammar:
//!
//! ```text
//! [Actor Action[ Arguments...]][ # Commentary]
//! ```
//!
//! Only syntax is handled here. Whether an action is legal at a given point
//! of the hand is decided by the replay engine.

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::card::{parse_cards, serialize_cards, Card, CardError};
use crate::diagnostic::{Code, Diagnostic, Location};
use crate::money::Money;

/// 1-based position of a player in the document's player ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlayerIndex(u32);

impl PlayerIndex {
    pub fn new(number: u32) -> Option<PlayerIndex> {
        (number >= 1).then_some(PlayerIndex(number))
    }

    pub fn from_index(index: usize) -> PlayerIndex {
        PlayerIndex(index as u32 + 1)
    }

    /// The 1-based number as written after `p`.
    pub fn number(self) -> u32 {
        self.0
    }

    /// The 0-based index into per-player arrays.
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }
}

impl fmt::Display for PlayerIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}", self.0)
    }
}

impl Serialize for PlayerIndex {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_u32(self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Disclosure {
    Muck,
    Show(Vec<Card>),
    /// The `-` shorthand: show the hole cards already on record.
    ShowPrevious,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ActionBody {
    NoOp,
    DealBoard {
        cards: Vec<Card>,
    },
    DealHole {
        player: PlayerIndex,
        cards: Vec<Card>,
    },
    PostBringIn {
        player: PlayerIndex,
    },
    CompleteBetRaiseTo {
        player: PlayerIndex,
        amount: Money,
    },
    CheckCall {
        player: PlayerIndex,
    },
    Fold {
        player: PlayerIndex,
    },
    /// Empty `cards` means standing pat.
    StandPatDiscard {
        player: PlayerIndex,
        cards: Vec<Card>,
    },
    ShowMuck {
        player: PlayerIndex,
        disclosure: Disclosure,
    },
}

impl ActionBody {
    /// The acting player, or `None` for dealer actions and no-ops.
    pub fn player(&self) -> Option<PlayerIndex> {
        match self {
            ActionBody::NoOp | ActionBody::DealBoard { .. } => None,
            ActionBody::DealHole { .. } => None,
            ActionBody::PostBringIn { player }
            | ActionBody::CompleteBetRaiseTo { player, .. }
            | ActionBody::CheckCall { player }
            | ActionBody::Fold { player }
            | ActionBody::StandPatDiscard { player, .. }
            | ActionBody::ShowMuck { player, .. } => Some(*player),
        }
    }

    /// Every player index the action names, including the dealee of `dh`.
    pub fn referenced_player(&self) -> Option<PlayerIndex> {
        match self {
            ActionBody::DealHole { player, .. } => Some(*player),
            other => other.player(),
        }
    }

    pub fn cards(&self) -> &[Card] {
        match self {
            ActionBody::DealBoard { cards }
            | ActionBody::DealHole { cards, .. }
            | ActionBody::StandPatDiscard { cards, .. } => cards,
            ActionBody::ShowMuck {
                disclosure: Disclosure::Show(cards),
                ..
            } => cards,
            _ => &[],
        }
    }

    pub fn is_noop(&self) -> bool {
        matches!(self, ActionBody::NoOp)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionRecord {
    pub body: ActionBody,
    pub commentary: Option<String>,
}

impl ActionRecord {
    pub fn new(body: ActionBody) -> ActionRecord {
        ActionRecord {
            body,
            commentary: None,
        }
    }

    pub fn with_commentary(mut self, text: impl Into<String>) -> ActionRecord {
        self.commentary = Some(text.into());
        self
    }
}

impl fmt::Display for ActionRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_action(self))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum ParsePolicy {
    #[default]
    Strict,
    Lenient,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ActionError {
    #[error("unknown actor {0:?}")]
    UnknownActor(String),
    #[error("unknown verb {0:?}")]
    UnknownVerb(String),
    #[error("missing {0}")]
    MissingArgument(&'static str),
    #[error("unexpected argument {0:?}")]
    ExtraArgument(String),
    #[error("bad cards {text:?}: {source}")]
    BadCards { text: String, source: CardError },
    #[error("bad amount {0:?}")]
    BadAmount(String),
}

impl ActionError {
    pub fn code(&self) -> Code {
        match self {
            ActionError::UnknownActor(_) => Code::UnknownActor,
            ActionError::UnknownVerb(_) => Code::UnknownVerb,
            ActionError::MissingArgument(_) => Code::MissingArgument,
            ActionError::ExtraArgument(_) => Code::ExtraArgument,
            ActionError::BadCards { .. } => Code::BadCards,
            ActionError::BadAmount(_) => Code::BadAmount,
        }
    }
}

/// Result of parsing one entry under a [`ParsePolicy`].
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedAction {
    /// `None` when a lenient parse dropped the entry.
    pub record: Option<ActionRecord>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Splits off the commentary: the first `#` that starts a word.
fn split_commentary(text: &str) -> (&str, Option<&str>) {
    let mut prev_ws = true;
    for (i, c) in text.char_indices() {
        if c == '#' && prev_ws {
            return (&text[..i], Some(&text[i + 1..]));
        }
        prev_ws = c.is_whitespace();
    }
    (text, None)
}

fn parse_player(token: &str) -> Result<PlayerIndex, ActionError> {
    let digits = token
        .strip_prefix('p')
        .ok_or_else(|| ActionError::UnknownActor(token.to_owned()))?;
    if digits.is_empty() || digits.starts_with('0') || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ActionError::UnknownActor(token.to_owned()));
    }
    digits
        .parse::<u32>()
        .ok()
        .and_then(PlayerIndex::new)
        .ok_or_else(|| ActionError::UnknownActor(token.to_owned()))
}

fn parse_card_arg(token: &str) -> Result<Vec<Card>, ActionError> {
    parse_cards(token).map_err(|source| ActionError::BadCards {
        text: token.to_owned(),
        source,
    })
}

fn parse_amount(token: &str) -> Result<Money, ActionError> {
    let bad = || ActionError::BadAmount(token.to_owned());
    let (int, frac) = match token.split_once('.') {
        Some((i, f)) => (i, Some(f)),
        None => (token, None),
    };
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if !digits(int) || frac.is_some_and(|f| !digits(f)) {
        return Err(bad());
    }
    Money::parse_lexeme(token).map_err(|_| bad())
}

/// Parses one action entry, failing on the first grammar violation.
pub fn parse_action(text: &str) -> Result<ActionRecord, ActionError> {
    let (body_text, commentary) = split_commentary(text);
    let commentary = commentary.map(|c| c.trim().to_owned());
    let mut tokens = body_text.split_whitespace();
    let Some(actor) = tokens.next() else {
        return Ok(ActionRecord {
            body: ActionBody::NoOp,
            commentary,
        });
    };
    let verb = tokens
        .next()
        .ok_or(ActionError::MissingArgument("action verb"))?;

    let body = if actor == "d" {
        match verb {
            "db" => {
                let cards = tokens
                    .next()
                    .ok_or(ActionError::MissingArgument("board cards"))?;
                ActionBody::DealBoard {
                    cards: parse_card_arg(cards)?,
                }
            }
            "dh" => {
                let player = parse_player(
                    tokens
                        .next()
                        .ok_or(ActionError::MissingArgument("player to deal to"))?,
                )?;
                let cards = tokens
                    .next()
                    .ok_or(ActionError::MissingArgument("hole cards"))?;
                ActionBody::DealHole {
                    player,
                    cards: parse_card_arg(cards)?,
                }
            }
            other => return Err(ActionError::UnknownVerb(other.to_owned())),
        }
    } else {
        let player = parse_player(actor)?;
        match verb {
            "pb" => ActionBody::PostBringIn { player },
            "cbr" => {
                let amount = tokens
                    .next()
                    .ok_or(ActionError::MissingArgument("amount"))?;
                ActionBody::CompleteBetRaiseTo {
                    player,
                    amount: parse_amount(amount)?,
                }
            }
            "cc" => ActionBody::CheckCall { player },
            "f" => ActionBody::Fold { player },
            "sd" => ActionBody::StandPatDiscard {
                player,
                cards: match tokens.next() {
                    Some(t) => parse_card_arg(t)?,
                    None => Vec::new(),
                },
            },
            "sm" => ActionBody::ShowMuck {
                player,
                disclosure: match tokens.next() {
                    None => Disclosure::Muck,
                    Some("-") => Disclosure::ShowPrevious,
                    Some(t) => Disclosure::Show(parse_card_arg(t)?),
                },
            },
            other => return Err(ActionError::UnknownVerb(other.to_owned())),
        }
    };
    if let Some(extra) = tokens.next() {
        return Err(ActionError::ExtraArgument(extra.to_owned()));
    }
    Ok(ActionRecord { body, commentary })
}

/// Parses an entry under a policy, reporting at `index` in the actions
/// array. Strict mode returns the grammar error; lenient mode drops the entry
/// and records an error diagnostic.
pub fn parse_action_with(
    text: &str,
    policy: ParsePolicy,
    index: usize,
) -> Result<ParsedAction, ActionError> {
    match parse_action(text) {
        Ok(record) => {
            let diagnostics = record
                .body
                .cards()
                .iter()
                .filter(|c| c.is_mixed())
                .map(|c| {
                    Diagnostic::warning(
                        Code::MixedUnknownCard,
                        Location::Action(index),
                        format!("card {c} has only one known component"),
                    )
                })
                .collect();
            Ok(ParsedAction {
                record: Some(record),
                diagnostics,
            })
        }
        Err(e) if policy == ParsePolicy::Strict => Err(e),
        Err(e) => Ok(ParsedAction {
            record: None,
            diagnostics: vec![Diagnostic::error(
                e.code(),
                Location::Action(index),
                format!("{e} in {text:?}; action ignored"),
            )],
        }),
    }
}

/// Canonical text: single spaces, commentary after two spaces.
pub fn serialize_action(record: &ActionRecord) -> String {
    let mut out = match &record.body {
        ActionBody::NoOp => String::new(),
        ActionBody::DealBoard { cards } => format!("d db {}", serialize_cards(cards)),
        ActionBody::DealHole { player, cards } => {
            format!("d dh {player} {}", serialize_cards(cards))
        }
        ActionBody::PostBringIn { player } => format!("{player} pb"),
        ActionBody::CompleteBetRaiseTo { player, amount } => format!("{player} cbr {amount}"),
        ActionBody::CheckCall { player } => format!("{player} cc"),
        ActionBody::Fold { player } => format!("{player} f"),
        ActionBody::StandPatDiscard { player, cards } if cards.is_empty() => {
            format!("{player} sd")
        }
        ActionBody::StandPatDiscard { player, cards } => {
            format!("{player} sd {}", serialize_cards(cards))
        }
        ActionBody::ShowMuck { player, disclosure } => match disclosure {
            Disclosure::Muck => format!("{player} sm"),
            Disclosure::ShowPrevious => format!("{player} sm -"),
            Disclosure::Show(cards) => format!("{player} sm {}", serialize_cards(cards)),
        },
    };
    if let Some(commentary) = &record.commentary {
        if !out.is_empty() {
            out.push_str("  ");
        }
        out.push('#');
        if !commentary.is_empty() {
            out.push(' ');
            out.push_str(commentary);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::card::parse_card;
    use proptest::prelude::*;

    fn p(n: u32) -> PlayerIndex {
        PlayerIndex::new(n).unwrap()
    }

    fn cards(s: &str) -> Vec<Card> {
        parse_cards(s).unwrap()
    }

    #[test]
    fn parses_examples() {
        assert_eq!(
            parse_action("d dh p4 AsQs6s5c3c").unwrap(),
            ActionRecord::new(ActionBody::DealHole {
                player: p(4),
                cards: cards("AsQs6s5c3c")
            })
        );
        assert_eq!(
            parse_action("p3 f  # Esposito").unwrap(),
            ActionRecord::new(ActionBody::Fold { player: p(3) }).with_commentary("Esposito")
        );
        assert_eq!(
            parse_action("").unwrap(),
            ActionRecord::new(ActionBody::NoOp)
        );
        assert_eq!(
            parse_action("p4 sm -").unwrap().body,
            ActionBody::ShowMuck {
                player: p(4),
                disclosure: Disclosure::ShowPrevious
            }
        );
        assert_eq!(
            parse_action("p1 cbr 450000").unwrap().body,
            ActionBody::CompleteBetRaiseTo {
                player: p(1),
                amount: Money::from_int(450000)
            }
        );
    }

    #[test]
    fn serializes_examples() {
        let fold = ActionRecord::new(ActionBody::Fold { player: p(3) }).with_commentary("Esposito");
        assert_eq!(serialize_action(&fold), "p3 f  # Esposito");
        let note = ActionRecord::new(ActionBody::NoOp).with_commentary("First draw");
        assert_eq!(serialize_action(&note), "# First draw");
        let pat = ActionRecord::new(ActionBody::StandPatDiscard {
            player: p(1),
            cards: vec![],
        });
        assert_eq!(serialize_action(&pat), "p1 sd");
    }

    /// One accepted and one rejected vector per grammar row.
    #[test]
    fn every_grammar_row() {
        let accepted = [
            "d db AcKd7h",
            "d dh p2 ????",
            "p1 pb",
            "p2 cbr 2.5",
            "p2 cc",
            "p1 f",
            "p3 sd 7h",
            "p3 sm AsKs",
            "# just a note",
        ];
        for text in accepted {
            let record = parse_action(text).unwrap_or_else(|e| panic!("{text}: {e}"));
            assert_eq!(serialize_action(&record), text);
        }
        let rejected: [(&str, Code); 9] = [
            ("d db", Code::MissingArgument),
            ("d dh p2", Code::MissingArgument),
            ("p1 pb 5", Code::ExtraArgument),
            ("p2 cbr", Code::MissingArgument),
            ("p2 cc 4", Code::ExtraArgument),
            ("p1 f now", Code::ExtraArgument),
            ("p3 sd 7x", Code::BadCards),
            ("p3 sm note", Code::BadCards),
            ("x # note", Code::MissingArgument),
        ];
        for (text, code) in rejected {
            let err = parse_action(text).expect_err(text);
            assert_eq!(err.code(), code, "{text}");
        }
    }

    #[test]
    fn rejects_bad_actors_and_verbs() {
        assert_eq!(parse_action("q1 f").unwrap_err().code(), Code::UnknownActor);
        assert_eq!(parse_action("p0 f").unwrap_err().code(), Code::UnknownActor);
        assert_eq!(
            parse_action("p01 f").unwrap_err().code(),
            Code::UnknownActor
        );
        assert_eq!(
            parse_action("p1 fold").unwrap_err().code(),
            Code::UnknownVerb
        );
        assert_eq!(parse_action("d f").unwrap_err().code(), Code::UnknownVerb);
        assert_eq!(
            parse_action("p1 db As").unwrap_err().code(),
            Code::UnknownVerb
        );
        assert_eq!(
            parse_action("p1 cbr -5").unwrap_err().code(),
            Code::BadAmount
        );
        assert_eq!(
            parse_action("p1 cbr 1e3").unwrap_err().code(),
            Code::BadAmount
        );
        assert_eq!(
            parse_action("d db").unwrap_err().code(),
            Code::MissingArgument
        );
    }

    #[test]
    fn commentary_needs_a_word_boundary() {
        assert_eq!(
            parse_action("p1 sd # note").unwrap().commentary.as_deref(),
            Some("note")
        );
        assert_eq!(
            parse_action("p1 f#x").unwrap_err().code(),
            Code::UnknownVerb
        );
        assert_eq!(
            parse_action("#").unwrap(),
            ActionRecord::new(ActionBody::NoOp).with_commentary("")
        );
        assert_eq!(
            serialize_action(&parse_action("p1 f #").unwrap()),
            "p1 f  #"
        );
    }

    #[test]
    fn lenient_drops_with_diagnostic() {
        let parsed = parse_action_with("p1 zz", ParsePolicy::Lenient, 7).unwrap();
        assert!(parsed.record.is_none());
        assert_eq!(parsed.diagnostics[0].code, Code::UnknownVerb);
        assert_eq!(parsed.diagnostics[0].location, Location::Action(7));
        assert!(parse_action_with("p1 zz", ParsePolicy::Strict, 7).is_err());
    }

    #[test]
    fn flags_mixed_cards() {
        let parsed = parse_action_with("d dh p1 A???", ParsePolicy::Strict, 0).unwrap();
        assert_eq!(parsed.diagnostics.len(), 1);
        assert_eq!(parsed.diagnostics[0].code, Code::MixedUnknownCard);
    }

    fn any_card() -> impl Strategy<Value = Card> + Clone {
        (0usize..14, 0usize..5).prop_map(|(r, s)| {
            let text: String = [
                "23456789TJQKA?".as_bytes()[r] as char,
                "cdhs?".as_bytes()[s] as char,
            ]
            .iter()
            .collect();
            parse_card(&text).unwrap()
        })
    }

    fn any_body() -> impl Strategy<Value = ActionBody> {
        let player = (1u32..10).prop_map(|n| PlayerIndex::new(n).unwrap());
        let some_cards = proptest::collection::vec(any_card(), 1..6);
        let amount = (0i64..1_000_000, 0u32..3).prop_map(|(u, s)| {
            if s == 0 {
                Money::from_int(u)
            } else {
                Money::from_scaled(u as i128, s)
            }
        });
        prop_oneof![
            Just(ActionBody::NoOp),
            some_cards
                .clone()
                .prop_map(|cards| ActionBody::DealBoard { cards }),
            (player.clone(), some_cards.clone())
                .prop_map(|(player, cards)| ActionBody::DealHole { player, cards }),
            player
                .clone()
                .prop_map(|player| ActionBody::PostBringIn { player }),
            (player.clone(), amount)
                .prop_map(|(player, amount)| ActionBody::CompleteBetRaiseTo { player, amount }),
            player
                .clone()
                .prop_map(|player| ActionBody::CheckCall { player }),
            player
                .clone()
                .prop_map(|player| ActionBody::Fold { player }),
            (player.clone(), proptest::collection::vec(any_card(), 0..4))
                .prop_map(|(player, cards)| ActionBody::StandPatDiscard { player, cards }),
            (
                player.clone(),
                prop_oneof![
                    Just(Disclosure::Muck),
                    Just(Disclosure::ShowPrevious),
                    some_cards.prop_map(Disclosure::Show),
                ]
            )
                .prop_map(|(player, disclosure)| ActionBody::ShowMuck { player, disclosure }),
        ]
    }

    fn any_record() -> impl Strategy<Value = ActionRecord> {
        (any_body(), proptest::option::of("[A-Za-z0-9;,'# ]{0,20}")).prop_map(|(body, c)| {
            ActionRecord {
                body,
                commentary: c.map(|s| s.trim().to_owned()),
            }
        })
    }

    proptest! {
        #[test]
        fn serialize_then_parse_is_identity(record in any_record()) {
            let text = serialize_action(&record);
            prop_assert_eq!(parse_action(&text).unwrap(), record);
        }

        #[test]
        fn whitespace_robust(record in any_record(), pad in "[ \t]{1,3}", sep in "[ \t]{2,4}") {
            let canonical = serialize_action(&record);
            let (body, comment) = split_commentary(&canonical);
            let spaced = body.split(' ').collect::<Vec<_>>().join(&sep);
            let noisy = match comment {
                Some(c) => format!("{pad}{spaced}{pad}#{c}{pad}"),
                None => format!("{pad}{spaced}{pad}"),
            };
            prop_assert_eq!(parse_action(&noisy).unwrap(), record);
        }
    }
}
