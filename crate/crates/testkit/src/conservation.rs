//! Chip accounting checks over a full replay.

use phh_core::document::HandDocument;
use phh_core::engine::{replay, EngineConfig};
use phh_core::money::Money;

/// What a conservation check looked at.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Checked {
    pub snapshots: usize,
    pub settled: bool,
}

/// Replays `doc` and checks that stacks, pots and outstanding bets always
/// add up to the starting total, and that a settled hand's finishing
/// deltas sum to zero. Hands with an unknown starting stack are skipped.
pub fn check(doc: &HandDocument) -> Result<Checked, String> {
    let Some(total) = doc.starting_stacks.iter().copied().sum::<Option<Money>>() else {
        return Ok(Checked::default());
    };
    let r = replay(doc, &EngineConfig::strict()).map_err(|e| e.to_string())?;
    for s in &r.snapshots {
        let Some(stacks) = s.stacks.iter().copied().sum::<Option<Money>>() else {
            return Err(format!("step {}: a stack became unknown", s.step));
        };
        let pots: Money = s.pots.iter().map(|p| p.amount).sum();
        let bets: Money = s.committed.iter().copied().sum();
        if stacks + pots + bets != total {
            return Err(format!(
                "step {}: {stacks} + {pots} + {bets} != {total}",
                s.step
            ));
        }
    }
    let mut checked = Checked {
        snapshots: r.snapshots.len(),
        settled: false,
    };
    if let Some(settlement) = &r.settlement {
        let mut delta = Money::ZERO;
        for (end, start) in settlement.stacks.iter().zip(&doc.starting_stacks) {
            let (Some(end), Some(start)) = (end, start) else {
                return Ok(checked);
            };
            delta += *end - *start;
        }
        if !delta.is_zero() {
            return Err(format!("finishing deltas sum to {delta}"));
        }
        checked.settled = true;
    }
    Ok(checked)
}
