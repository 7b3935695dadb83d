use std::collections::BTreeSet;

use crate::action::ParsePolicy;
use crate::diagnostic::{Code, Diagnostic, Severity};
use crate::variant::{BettingStructure, VariantCode};

use super::HandDocument;

/// Required fields in canonical order.
pub const REQUIRED_FIELDS: [&str; 9] = [
    "variant",
    "antes",
    "blinds_or_straddles",
    "bring_in",
    "small_bet",
    "big_bet",
    "min_bet",
    "starting_stacks",
    "actions",
];

/// Optional fields in canonical order.
pub const OPTIONAL_FIELDS: [&str; 24] = [
    "author",
    "event",
    "url",
    "address",
    "city",
    "region",
    "postal_code",
    "country",
    "time",
    "time_zone",
    "day",
    "month",
    "year",
    "hand",
    "level",
    "seats",
    "seat_count",
    "table",
    "players",
    "finishing_stacks",
    "currency",
    "ante_trimming_status",
    "time_limit",
    "time_banks",
];

/// Arrays with one entry per player.
pub const PER_PLAYER_FIELDS: [&str; 6] = [
    "antes",
    "blinds_or_straddles",
    "seats",
    "players",
    "finishing_stacks",
    "time_banks",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldStatus {
    Required,
    NotApplicable,
}

/// Whether `field` (one of the eight state-construction fields other than
/// `variant`) is required for `variant`.
pub fn required_status(variant: VariantCode, field: &str) -> Option<FieldStatus> {
    let structure = variant.betting_structure();
    let required = match field {
        "antes" | "starting_stacks" | "actions" => true,
        "blinds_or_straddles" => variant.is_button_game(),
        "bring_in" => !variant.is_button_game(),
        "small_bet" | "big_bet" => structure == BettingStructure::FixedLimit,
        "min_bet" => structure != BettingStructure::FixedLimit,
        _ => return None,
    };
    Some(if required {
        FieldStatus::Required
    } else {
        FieldStatus::NotApplicable
    })
}

pub fn check_required_matrix(
    variant: VariantCode,
    present: &BTreeSet<&str>,
    policy: ParsePolicy,
) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for field in &REQUIRED_FIELDS[1..] {
        let status = required_status(variant, field).expect("state field");
        let here = present.contains(field);
        match status {
            FieldStatus::Required if !here => out.push(Diagnostic::field(
                Severity::Error,
                Code::MissingRequiredField,
                field,
                format!("`{field}` is required for {variant}"),
            )),
            FieldStatus::NotApplicable if here => {
                let severity = match policy {
                    ParsePolicy::Strict => Severity::Error,
                    ParsePolicy::Lenient => Severity::Warning,
                };
                out.push(Diagnostic::field(
                    severity,
                    Code::FieldNotApplicable,
                    field,
                    format!("`{field}` does not apply to {variant}"),
                ))
            }
            _ => {}
        }
    }
    out
}

/// Shape checks on optional fields beyond their TOML types.
pub fn check_optional_types(doc: &HandDocument) -> Vec<Diagnostic> {
    let o = &doc.optional;
    let mut out = Vec::new();
    let mut warn = |code: Code, field: &str, message: String| {
        out.push(Diagnostic::field(Severity::Warning, code, field, message));
    };
    if let Some(m) = o.month {
        if !(1..=12).contains(&m) {
            warn(
                Code::BadCalendarField,
                "month",
                format!("month {m} is outside 1..=12"),
            );
        }
    }
    if let Some(d) = o.day {
        if !(1..=31).contains(&d) {
            warn(
                Code::BadCalendarField,
                "day",
                format!("day {d} is outside 1..=31"),
            );
        }
    }
    if let Some(tz) = &o.time_zone {
        if !is_iana_shaped(tz) {
            warn(
                Code::BadTimeZone,
                "time_zone",
                format!("{tz:?} is not an IANA zone name"),
            );
        }
    }
    if let Some(c) = &o.currency {
        if !(c.len() == 3 && c.bytes().all(|b| b.is_ascii_uppercase())) {
            warn(
                Code::BadCurrency,
                "currency",
                format!("{c:?} is not a 3-letter currency code"),
            );
        }
    }
    if let Some(seats) = &o.seats {
        if let Some(&bad) = seats.iter().find(|&&s| s < 1) {
            warn(
                Code::SeatOutOfRange,
                "seats",
                format!("seat {bad} is not positive"),
            );
        }
        if let Some(count) = o.seat_count {
            if let Some(&bad) = seats.iter().find(|&&s| s > count) {
                warn(
                    Code::SeatOutOfRange,
                    "seats",
                    format!("seat {bad} exceeds seat_count {count}"),
                );
            }
        }
    }
    if doc.player_count() > 0 {
        if let Some(count) = o.seat_count {
            if count < doc.player_count() as i64 {
                warn(
                    Code::SeatOutOfRange,
                    "seat_count",
                    format!("{count} seats for {} players", doc.player_count()),
                );
            }
        }
    }
    if let Some(stacks) = &o.finishing_stacks {
        if stacks.iter().any(|s| s.is_negative()) {
            warn(
                Code::NegativeAmount,
                "finishing_stacks",
                "negative stack".to_owned(),
            );
        }
    }
    out
}

/// `UTC`, `Etc/GMT+5`, `America/Argentina/Buenos_Aires` and the like.
fn is_iana_shaped(name: &str) -> bool {
    let part_ok = |p: &str| {
        let mut chars = p.chars();
        matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
            && p.chars()
                .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '+'))
    };
    !name.is_empty() && name.len() <= 64 && name.split('/').all(part_ok)
}
