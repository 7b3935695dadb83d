use super::*;
use crate::action::parse_action;
use crate::action::ParsePolicy;
use crate::document::parse_document;

const GOLDEN: &str = include_str!("../../tests/fixtures/arieh_yockey_2019.phh");

fn m(v: i64) -> Money {
    Money::from_int(v)
}

fn stacks(values: &[i64]) -> Vec<Option<Money>> {
    values.iter().map(|&v| Some(m(v))).collect()
}

fn doc(src: &str) -> HandDocument {
    parse_document(src, ParsePolicy::Strict).unwrap().document
}

fn nt(stacks: &str, blinds: &str, actions: &[&str]) -> HandDocument {
    let n = stacks.split(',').count();
    let antes = vec!["0"; n].join(", ");
    let actions: Vec<String> = actions.iter().map(|a| format!("{a:?}")).collect();
    doc(&format!(
        "variant = \"NT\"\nantes = [{antes}]\nblinds_or_straddles = [{blinds}]\nmin_bet = 2\n\
         starting_stacks = [{stacks}]\nactions = [{}]\n",
        actions.join(", ")
    ))
}

#[test]
fn golden_posts_and_finish() {
    let d = doc(GOLDEN);
    let (state, diags) = initial_state(&d, &EngineConfig::strict()).unwrap();
    assert!(diags.is_empty());
    assert_eq!(
        state.stacks(),
        stacks(&[1105000, 4190000, 5910000, 10765000])
    );
    assert_eq!(state.committed(), [m(75000), m(150000), m(0), m(0)]);

    let r = replay(&d, &EngineConfig::strict()).unwrap();
    assert_eq!(r.snapshots.len(), 27);
    assert!(r.diagnostics.is_empty(), "{:?}", r.diagnostics);
    let s = r.settlement.unwrap();
    assert_eq!(s.stacks, stacks(&[0, 4190000, 5910000, 12095000]));
    assert_eq!(s.pots.len(), 1);
    assert_eq!(s.pots[0].amount, m(2510000));
    assert_eq!(s.awards.len(), 1);
    assert_eq!(s.awards[0].player, PlayerIndex::from_index(3));
}

#[test]
fn golden_snapshots_conserve_chips() {
    let d = doc(GOLDEN);
    let r = replay(&d, &EngineConfig::strict()).unwrap();
    let total = m(1180000 + 4340000 + 5910000 + 10765000);
    for s in &r.snapshots {
        let stacks: Money = s.stacks.iter().map(|x| x.unwrap()).sum();
        let pot: Money = s.pots.iter().map(|p| p.amount).sum();
        let bets: Money = s.committed.iter().copied().sum();
        assert_eq!(stacks + pot + bets, total, "step {}", s.step);
    }
    assert!(r.snapshots.last().unwrap().terminal);
    assert_eq!(r.snapshots[26].hole[3], "5c3c2h4d7c");
}

#[test]
fn fold_to_big_blind_refunds() {
    let d = nt(
        "200, 200, 200",
        "1, 2, 0",
        &[
            "d dh p1 ????",
            "d dh p2 ????",
            "d dh p3 ????",
            "p3 f",
            "p1 f",
        ],
    );
    let r = replay(&d, &EngineConfig::strict()).unwrap();
    assert_eq!(r.finishing_stacks().unwrap(), stacks(&[199, 201, 200]));
}

#[test]
fn out_of_turn_strict_and_warn() {
    let d = nt(
        "200, 200, 200",
        "1, 2, 0",
        &["d dh p1 ????", "d dh p2 ????", "d dh p3 ????", "p1 f"],
    );
    let err = replay(&d, &EngineConfig::strict()).unwrap_err();
    assert!(err.has_code(Code::OutOfTurn));
    let r = replay(&d, &EngineConfig::default()).unwrap();
    assert!(r.diagnostics.iter().any(|d| d.code == Code::OutOfTurn));
    assert_eq!(r.state.statuses()[0], PlayerStatus::Folded);
}

#[test]
fn strict_failure_leaves_state_untouched() {
    let d = nt("200, 200", "1, 2", &["d dh p1 ????", "d dh p2 ????"]);
    let config = EngineConfig::strict();
    let mut state = replay(&d, &config).unwrap().state;
    let before = Snapshot::capture(&state, 0, None);
    let bad = parse_action("p2 cbr 3").unwrap();
    assert!(apply_action(&mut state, &bad, &config).is_err());
    assert_eq!(Snapshot::capture(&state, 0, None), before);
}

#[test]
fn heads_up_forced_bets_are_reversed() {
    let d = nt("200, 200", "1, 2", &[]);
    let (state, _) = initial_state(&d, &EngineConfig::default()).unwrap();
    assert_eq!(state.committed(), [m(2), m(1)]);
    assert_eq!(state.stacks(), stacks(&[198, 199]));
}

#[test]
fn button_straddle_acts_last_preflop() {
    let d = nt(
        "200, 200, 200, 200",
        "1, 2, 0, 4",
        &[
            "d dh p1 ????",
            "d dh p2 ????",
            "d dh p3 ????",
            "d dh p4 ????",
        ],
    );
    let r = replay(&d, &EngineConfig::strict()).unwrap();
    assert_eq!(r.state.committed(), [m(1), m(2), m(0), m(4)]);
    assert_eq!(r.state.turn(), Some(PlayerIndex::from_index(0)));
    assert_eq!(
        r.state.bet_bounds(PlayerIndex::from_index(0)).min_to,
        Some(m(8))
    );
}

#[test]
fn finishing_stack_mismatch_is_reported() {
    let src = GOLDEN.replace(
        "players = [",
        "finishing_stacks = [0, 4190000, 5910000, 12095001]\nplayers = [",
    );
    let d = doc(&src);
    let r = replay(&d, &EngineConfig::default()).unwrap();
    assert!(r
        .diagnostics
        .iter()
        .any(|d| d.code == Code::FinishingStackMismatch));
    let ok = GOLDEN.replace(
        "players = [",
        "finishing_stacks = [0, 4190000, 5910000, 12095000]\nplayers = [",
    );
    assert!(replay(&doc(&ok), &EngineConfig::strict()).is_ok());
}

#[test]
fn unfinished_hand_does_not_settle() {
    let d = nt("200, 200", "1, 2", &[]);
    let r = replay(&d, &EngineConfig::strict()).unwrap();
    assert!(r.settlement.is_none());
    let err = settle(&r.state).unwrap_err();
    assert!(err.has_code(Code::NonTerminalState));
}

#[test]
fn all_in_short_raise_does_not_reopen() {
    // p2's all-in is less than a full raise, so p3 may only call.
    let d = nt(
        "200, 9, 200",
        "1, 2, 0",
        &[
            "d dh p1 ????",
            "d dh p2 ????",
            "d dh p3 ????",
            "p3 cbr 6",
            "p1 f",
            "p2 cbr 9",
            "p3 cbr 20",
        ],
    );
    let r = replay(&d, &EngineConfig::default()).unwrap();
    let codes: Vec<Code> = r.diagnostics.iter().map(|d| d.code).collect();
    assert_eq!(codes, [Code::AboveCap]);
    let bounds = |acts: &[&str]| {
        let d = nt("200, 9, 200", "1, 2, 0", acts);
        let r = replay(&d, &EngineConfig::strict()).unwrap();
        r.state.bet_bounds(PlayerIndex::from_index(2))
    };
    let b = bounds(&[
        "d dh p1 ????",
        "d dh p2 ????",
        "d dh p3 ????",
        "p3 cbr 6",
        "p1 f",
        "p2 cbr 9",
    ]);
    assert_eq!(b.min_to, None);
    assert_eq!(b.call, m(3));
}

#[test]
fn below_minimum_is_error_in_strict() {
    let d = nt(
        "200, 200",
        "1, 2",
        &["d dh p1 ????", "d dh p2 ????", "p2 cbr 3"],
    );
    let err = replay(&d, &EngineConfig::strict()).unwrap_err();
    assert!(err.has_code(Code::BelowMinimum));
}

#[test]
fn side_pots_layer_by_commitment() {
    let d = nt(
        "50, 100, 200",
        "1, 2, 0",
        &[
            "d dh p1 AcAd",
            "d dh p2 KcKd",
            "d dh p3 QcQd",
            "p3 cbr 200",
            "p1 cc",
            "p2 cc",
            "d db 2h3h8s",
            "d db 9s",
            "d db Td",
            "p3 sm QcQd",
            "p1 sm AcAd",
            "p2 sm KcKd",
        ],
    );
    let r = replay(&d, &EngineConfig::default()).unwrap();
    assert!(r.diagnostics.is_empty(), "{:?}", r.diagnostics);
    let s = r.settlement.unwrap();
    let amounts: Vec<Money> = s.pots.iter().map(|p| p.amount).collect();
    assert_eq!(amounts, [m(150), m(100)]);
    assert_eq!(s.stacks, stacks(&[150, 100, 100]));
}

#[test]
fn unknown_cards_leave_stacks_open() {
    let d = nt(
        "100, 100",
        "1, 2",
        &[
            "d dh p1 ????",
            "d dh p2 AsAh",
            "p2 cbr 100",
            "p1 cc",
            "d db 2c3c4d",
            "d db 9s",
            "d db Td",
            "p2 sm AsAh",
            "p1 sm -",
        ],
    );
    let r = replay(&d, &EngineConfig::default()).unwrap();
    assert_eq!(r.finishing_stacks().unwrap(), [None, None]);
    assert!(r
        .diagnostics
        .iter()
        .any(|d| d.code == Code::UnknownShowdownCards));
    assert!(r
        .diagnostics
        .iter()
        .any(|d| d.code == Code::DashWithoutKnownHole));
    assert!(replay(&d, &EngineConfig::strict()).is_err());
}

#[test]
fn stud_bring_in_goes_to_lowest_card() {
    let d = doc(r#"
variant = "F7S"
antes = [1, 1, 1]
bring_in = 2
small_bet = 5
big_bet = 10
starting_stacks = [100, 100, 100]
actions = ["d dh p1 ????Kc", "d dh p2 ????2d", "d dh p3 ????2c", "p3 pb", "p1 cbr 5"]
"#);
    let r = replay(&d, &EngineConfig::strict()).unwrap();
    assert_eq!(r.state.committed(), [m(5), m(0), m(2)]);
    assert_eq!(r.state.turn(), Some(PlayerIndex::from_index(1)));
}

#[test]
fn razz_bring_in_goes_to_highest_card() {
    let d = doc(r#"
variant = "FR"
antes = [1, 1, 1]
bring_in = 2
small_bet = 5
big_bet = 10
starting_stacks = [100, 100, 100]
actions = ["d dh p1 ????Kc", "d dh p2 ????Ks", "d dh p3 ????Ac"]
"#);
    let r = replay(&d, &EngineConfig::strict()).unwrap();
    assert_eq!(
        r.state.expected(),
        Expected::BringIn {
            player: Some(PlayerIndex::from_index(1))
        }
    );
}

#[test]
fn hi_lo_pot_is_split() {
    let d = doc(r#"
variant = "FO/8"
antes = [0, 0]
blinds_or_straddles = [1, 2]
small_bet = 2
big_bet = 4
starting_stacks = [3, 3]
actions = [
  "d dh p1 AsKs2c3c", "d dh p2 QhQd4h5h",
  "p2 cbr 3", "p1 cc",
  "d db 6d7d8c", "d db Jh", "d db Ts",
  "p2 sm QhQd4h5h", "p1 sm AsKs2c3c",
]
"#);
    let r = replay(&d, &EngineConfig::strict()).unwrap();
    let s = r.settlement.unwrap();
    // p2 wins high with a straight, p1 wins low with 8-7-6-2-A.
    assert_eq!(s.stacks, stacks(&[3, 3]));
    let high = s.awards.iter().find(|a| a.share == Share::High).unwrap();
    assert_eq!(high.amount, m(3));
}

#[test]
fn triple_draw_fixed_limit_bounds() {
    let d = doc(GOLDEN);
    let (mut state, _) = initial_state(&d, &EngineConfig::strict()).unwrap();
    for (i, r) in d.records().take(5) {
        state.apply(r, i, &EngineConfig::strict()).unwrap();
    }
    let b = state.bet_bounds(PlayerIndex::from_index(3));
    assert_eq!(b.min_to, Some(m(300000)));
    assert_eq!(b.max_to, Some(m(300000)));
    assert_eq!(b.call, m(150000));
}

#[test]
fn raise_cap_is_optional() {
    let d = nt("200, 200", "1, 2", &[]);
    let config = EngineConfig {
        strictness: Strictness::Strict,
        raise_cap: Some(1),
    };
    let fl = doc(r#"
variant = "FT"
antes = [0, 0]
blinds_or_straddles = [1, 2]
small_bet = 2
big_bet = 4
starting_stacks = [200, 200]
actions = ["d dh p1 ????", "d dh p2 ????", "p2 cbr 4"]
"#);
    let err = replay(&fl, &config).unwrap_err();
    assert!(err.has_code(Code::RaiseCapExceeded));
    assert!(replay(&fl, &EngineConfig::strict()).is_ok());
    assert!(replay(&d, &config).is_ok());
}

#[test]
fn actions_after_terminal_are_flagged() {
    let d = nt(
        "200, 200",
        "1, 2",
        &["d dh p1 ????", "d dh p2 ????", "p2 f", "p1 cc"],
    );
    let r = replay(&d, &EngineConfig::default()).unwrap();
    assert!(r
        .diagnostics
        .iter()
        .any(|d| d.code == Code::ActionAfterTerminal));
    assert_eq!(r.finishing_stacks().unwrap(), stacks(&[201, 199]));
}

#[test]
fn snapshot_serializes_with_version() {
    let d = doc(GOLDEN);
    let r = replay(&d, &EngineConfig::default()).unwrap();
    let v = serde_json::to_string(&r.snapshots[5]).unwrap();
    assert!(v.contains("\"version\":1"), "{v}");
    assert!(v.contains("\"action\":\"p3 f\""), "{v}");
}

#[test]
fn stud_open_pair_does_not_unlock_the_big_bet() {
    let d = doc(
        r#"
variant = "F7S"
antes = [1, 1]
bring_in = 2
small_bet = 5
big_bet = 10
starting_stacks = [100, 100]
actions = [
  "d dh p1 ????Kc", "d dh p2 ????2d", "p2 pb", "p1 cbr 5", "p2 cc",
  "d dh p1 Kd", "d dh p2 3s", "p1 cbr 10",
]
"#,
    );
    let r = replay(&d, &EngineConfig::default()).unwrap();
    let codes: Vec<Code> = r.diagnostics.iter().map(|d| d.code).collect();
    assert_eq!(codes, [Code::AboveCap]);
    assert!(replay(&d, &EngineConfig::strict()).unwrap_err().has_code(Code::AboveCap));
}
