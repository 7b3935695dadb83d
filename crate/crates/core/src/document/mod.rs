//! Typed hand documents: TOML in, [`HandDocument`] out, and back again.

mod emit;
mod schema;
mod value;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;
use toml_edit::{ImDocument, Item, Value};

use crate::action::{parse_action_with, ActionRecord, ParsePolicy};
use crate::diagnostic::{has_errors, Code, Diagnostic, Location, Severity};
use crate::money::{Money, MoneyError};
use crate::variant::VariantCode;

pub use emit::{serialize_document, SerializeError, SerializeStyle};
pub use schema::{
    check_optional_types, check_required_matrix, required_status, FieldStatus, OPTIONAL_FIELDS,
    PER_PLAYER_FIELDS, REQUIRED_FIELDS,
};
pub use value::{toml_key, toml_string, FieldValue};

use value::raw_text;

/// The declared game. Unrecognized codes survive only in lenient mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Variant {
    Known(VariantCode),
    Opaque(String),
}

impl Variant {
    pub fn code(&self) -> Option<VariantCode> {
        match self {
            Variant::Known(v) => Some(*v),
            Variant::Opaque(_) => None,
        }
    }

    pub fn as_str(&self) -> &str {
        match self {
            Variant::Known(v) => v.code(),
            Variant::Opaque(s) => s,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One element of the `actions` array.
#[derive(Debug, Clone)]
pub struct ActionEntry {
    /// The string exactly as it appeared in the file.
    pub text: String,
    /// `None` if the entry was dropped by a lenient parse.
    pub record: Option<ActionRecord>,
    /// TOML comments on the lines before this entry.
    pub leading_comments: Vec<String>,
    /// TOML comment after this entry on the same line.
    pub trailing_comment: Option<String>,
}

impl ActionEntry {
    pub fn new(record: ActionRecord) -> ActionEntry {
        ActionEntry {
            text: record.to_string(),
            record: Some(record),
            leading_comments: Vec::new(),
            trailing_comment: None,
        }
    }

    pub fn with_trailing_comment(mut self, comment: impl Into<String>) -> ActionEntry {
        self.trailing_comment = Some(comment.into());
        self
    }
}

impl PartialEq for ActionEntry {
    fn eq(&self, other: &Self) -> bool {
        let same_content = match (&self.record, &other.record) {
            (Some(a), Some(b)) => a == b,
            (None, None) => self.text == other.text,
            _ => false,
        };
        same_content
            && self.leading_comments == other.leading_comments
            && self.trailing_comment == other.trailing_comment
    }
}

/// Comment text attached to a top-level field.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FieldComments {
    pub leading: Vec<String>,
    pub trailing: Option<String>,
}

impl FieldComments {
    fn is_empty(&self) -> bool {
        self.leading.is_empty() && self.trailing.is_none()
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct OptionalFields {
    pub author: Option<String>,
    pub event: Option<String>,
    pub url: Option<String>,
    pub address: Option<String>,
    pub city: Option<String>,
    pub region: Option<String>,
    pub postal_code: Option<String>,
    pub country: Option<String>,
    /// TOML local time, kept in its TOML text form.
    pub time: Option<String>,
    pub time_zone: Option<String>,
    pub day: Option<i64>,
    pub month: Option<i64>,
    pub year: Option<i64>,
    pub hand: Option<i64>,
    pub level: Option<i64>,
    pub seats: Option<Vec<i64>>,
    pub seat_count: Option<i64>,
    pub table: Option<i64>,
    pub players: Option<Vec<String>>,
    pub finishing_stacks: Option<Vec<Money>>,
    pub currency: Option<String>,
    pub ante_trimming_status: Option<bool>,
    pub time_limit: Option<Money>,
    pub time_banks: Option<Vec<Money>>,
}

/// A parsed hand.
///
/// Equality is semantic: the retained `source` and the raw text of entries
/// that parsed successfully are ignored, comment text is compared.
#[derive(Debug, Clone)]
pub struct HandDocument {
    pub variant: Variant,
    pub antes: Vec<Money>,
    pub blinds_or_straddles: Option<Vec<Money>>,
    pub bring_in: Option<Money>,
    pub small_bet: Option<Money>,
    pub big_bet: Option<Money>,
    pub min_bet: Option<Money>,
    /// `None` entries are unknown stacks.
    pub starting_stacks: Vec<Option<Money>>,
    pub actions: Vec<ActionEntry>,
    pub optional: OptionalFields,
    /// Underscore-prefixed fields, passed through untouched.
    pub user_fields: BTreeMap<String, FieldValue>,
    pub field_comments: BTreeMap<String, FieldComments>,
    /// Comments inside the `actions` array after its last entry.
    pub actions_closing_comments: Vec<String>,
    /// Comments after the last field.
    pub closing_comments: Vec<String>,
    pub source: Option<String>,
}

impl PartialEq for HandDocument {
    fn eq(&self, other: &Self) -> bool {
        let comments = |d: &HandDocument| -> BTreeMap<String, FieldComments> {
            d.field_comments
                .iter()
                .filter(|(_, c)| !c.is_empty())
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect()
        };
        self.variant == other.variant
            && self.antes == other.antes
            && self.blinds_or_straddles == other.blinds_or_straddles
            && self.bring_in == other.bring_in
            && self.small_bet == other.small_bet
            && self.big_bet == other.big_bet
            && self.min_bet == other.min_bet
            && self.starting_stacks == other.starting_stacks
            && self.actions == other.actions
            && self.optional == other.optional
            && self.user_fields == other.user_fields
            && comments(self) == comments(other)
            && self.actions_closing_comments == other.actions_closing_comments
            && self.closing_comments == other.closing_comments
    }
}

impl HandDocument {
    /// A minimal document: the given stakes and no optional fields.
    pub fn new(
        variant: VariantCode,
        antes: Vec<Money>,
        starting_stacks: Vec<Option<Money>>,
    ) -> Self {
        HandDocument {
            variant: Variant::Known(variant),
            antes,
            blinds_or_straddles: None,
            bring_in: None,
            small_bet: None,
            big_bet: None,
            min_bet: None,
            starting_stacks,
            actions: Vec::new(),
            optional: OptionalFields::default(),
            user_fields: BTreeMap::new(),
            field_comments: BTreeMap::new(),
            actions_closing_comments: Vec::new(),
            closing_comments: Vec::new(),
            source: None,
        }
    }

    pub fn player_count(&self) -> usize {
        self.starting_stacks.len()
    }

    /// Parsed action records, skipping entries a lenient parse dropped.
    pub fn records(&self) -> impl Iterator<Item = (usize, &ActionRecord)> {
        self.actions
            .iter()
            .enumerate()
            .filter_map(|(i, a)| a.record.as_ref().map(|r| (i, r)))
    }

    /// Names of every field that is set, in no particular order.
    pub fn present_fields(&self) -> BTreeSet<&'static str> {
        let o = &self.optional;
        let flags: [(&'static str, bool); 33] = [
            ("variant", true),
            ("antes", true),
            ("blinds_or_straddles", self.blinds_or_straddles.is_some()),
            ("bring_in", self.bring_in.is_some()),
            ("small_bet", self.small_bet.is_some()),
            ("big_bet", self.big_bet.is_some()),
            ("min_bet", self.min_bet.is_some()),
            ("starting_stacks", true),
            ("actions", true),
            ("author", o.author.is_some()),
            ("event", o.event.is_some()),
            ("url", o.url.is_some()),
            ("address", o.address.is_some()),
            ("city", o.city.is_some()),
            ("region", o.region.is_some()),
            ("postal_code", o.postal_code.is_some()),
            ("country", o.country.is_some()),
            ("time", o.time.is_some()),
            ("time_zone", o.time_zone.is_some()),
            ("day", o.day.is_some()),
            ("month", o.month.is_some()),
            ("year", o.year.is_some()),
            ("hand", o.hand.is_some()),
            ("level", o.level.is_some()),
            ("seats", o.seats.is_some()),
            ("seat_count", o.seat_count.is_some()),
            ("table", o.table.is_some()),
            ("players", o.players.is_some()),
            ("finishing_stacks", o.finishing_stacks.is_some()),
            ("currency", o.currency.is_some()),
            ("ante_trimming_status", o.ante_trimming_status.is_some()),
            ("time_limit", o.time_limit.is_some()),
            ("time_banks", o.time_banks.is_some()),
        ];
        flags
            .into_iter()
            .filter(|(_, set)| *set)
            .map(|(k, _)| k)
            .collect()
    }

    /// Lengths of the per-player arrays that are present, by field name.
    pub fn per_player_lengths(&self) -> Vec<(&'static str, usize)> {
        let o = &self.optional;
        let mut out = vec![("antes", self.antes.len())];
        let optional: [(&'static str, Option<usize>); 5] = [
            (
                "blinds_or_straddles",
                self.blinds_or_straddles.as_ref().map(Vec::len),
            ),
            ("seats", o.seats.as_ref().map(Vec::len)),
            ("players", o.players.as_ref().map(Vec::len)),
            (
                "finishing_stacks",
                o.finishing_stacks.as_ref().map(Vec::len),
            ),
            ("time_banks", o.time_banks.as_ref().map(Vec::len)),
        ];
        out.extend(optional.into_iter().filter_map(|(k, n)| Some((k, n?))));
        out
    }

    /// Every amount written in the document, used to find the smallest
    /// chip granularity.
    pub fn amounts(&self) -> Vec<Money> {
        let mut out: Vec<Money> = Vec::new();
        out.extend(&self.antes);
        out.extend(self.blinds_or_straddles.iter().flatten());
        out.extend(
            [self.bring_in, self.small_bet, self.big_bet, self.min_bet]
                .into_iter()
                .flatten(),
        );
        out.extend(self.starting_stacks.iter().flatten());
        for (_, record) in self.records() {
            if let crate::action::ActionBody::CompleteBetRaiseTo { amount, .. } = record.body {
                out.push(amount);
            }
        }
        out
    }

    /// Drops the retained source, marking the document as modified.
    pub fn touch(&mut self) {
        self.source = None;
    }
}

#[derive(Debug, Clone)]
pub struct ParsedDocument {
    pub document: HandDocument,
    /// Warnings, plus errors that a lenient parse worked around.
    pub diagnostics: Vec<Diagnostic>,
}

#[derive(Debug, Clone, Error)]
pub struct DocumentError {
    pub diagnostics: Vec<Diagnostic>,
}

impl fmt::Display for DocumentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let errors: Vec<String> = self
            .diagnostics
            .iter()
            .filter(|d| d.is_error())
            .map(ToString::to_string)
            .collect();
        if errors.is_empty() {
            f.write_str("invalid hand history")
        } else {
            f.write_str(&errors.join("; "))
        }
    }
}

impl DocumentError {
    pub fn codes(&self) -> Vec<Code> {
        self.diagnostics.iter().map(|d| d.code).collect()
    }

    pub fn has_code(&self, code: Code) -> bool {
        self.diagnostics.iter().any(|d| d.code == code)
    }
}

/// Parses raw bytes; invalid UTF-8 is reported as `NotToml`.
pub fn parse_document_bytes(
    bytes: &[u8],
    policy: ParsePolicy,
) -> Result<ParsedDocument, DocumentError> {
    match std::str::from_utf8(bytes) {
        Ok(text) => parse_document(text, policy),
        Err(e) => Err(DocumentError {
            diagnostics: vec![Diagnostic::error(
                Code::NotToml,
                Location::Document,
                format!("input is not UTF-8: {e}"),
            )],
        }),
    }
}

pub fn parse_document(src: &str, policy: ParsePolicy) -> Result<ParsedDocument, DocumentError> {
    let toml = ImDocument::parse(src).map_err(|e| DocumentError {
        diagnostics: vec![Diagnostic::error(
            Code::NotToml,
            Location::Document,
            e.message().to_owned(),
        )],
    })?;
    let mut reader = Reader {
        src,
        policy,
        diagnostics: Vec::new(),
    };
    let mut fields = RawFields::default();
    let mut field_comments = BTreeMap::new();
    let mut actions_closing_comments = Vec::new();
    let mut user_fields = BTreeMap::new();
    let mut optional = OptionalFields::default();

    for (key, item) in toml.as_table().iter() {
        let mut comments = FieldComments::default();
        if let Some(k) = toml.as_table().key(key) {
            comments
                .leading
                .extend(comment_lines(decor_prefix(k.leaf_decor(), src)));
        }
        if let Item::Table(t) = item {
            comments
                .leading
                .extend(comment_lines(decor_prefix(t.decor(), src)));
        }
        if key == "actions" {
            if let Some(Value::Array(array)) = item.as_value() {
                comments.trailing = first_comment(decor_suffix(array.decor(), src));
            }
        } else {
            collect_inner_comments(item, src, &mut comments);
        }

        match key {
            "variant"
            | "antes"
            | "blinds_or_straddles"
            | "bring_in"
            | "small_bet"
            | "big_bet"
            | "min_bet"
            | "starting_stacks"
            | "actions" => {
                fields.raw.insert(key, item);
            }
            _ if OPTIONAL_FIELDS.contains(&key) => reader.optional(key, item, &mut optional),
            _ if key.starts_with('_') => {
                if key.starts_with("__") {
                    reader.diagnostics.push(Diagnostic::field(
                        Severity::Warning,
                        Code::NonstandardUserField,
                        key,
                        "user-defined fields take a single underscore prefix",
                    ));
                }
                if let Some(v) = FieldValue::from_item(item, src) {
                    user_fields.insert(key.to_owned(), v);
                }
            }
            _ => {
                let severity = match policy {
                    ParsePolicy::Strict => Severity::Error,
                    ParsePolicy::Lenient => Severity::Warning,
                };
                reader.diagnostics.push(Diagnostic::field(
                    severity,
                    Code::UnknownField,
                    key,
                    "not a defined field; user-defined fields start with `_`",
                ));
                continue;
            }
        }
        field_comments.insert(key.to_owned(), comments);
    }

    let variant = reader.variant(fields.raw.get("variant").copied());
    let antes = reader.required_amounts(&fields, "antes");
    let starting_stacks = reader.starting_stacks(fields.raw.get("starting_stacks").copied());
    let blinds_or_straddles = fields
        .raw
        .get("blinds_or_straddles")
        .and_then(|item| reader.amount_array("blinds_or_straddles", item, false));
    let bring_in = reader.scalar_amount(&fields, "bring_in");
    let small_bet = reader.scalar_amount(&fields, "small_bet");
    let big_bet = reader.scalar_amount(&fields, "big_bet");
    let min_bet = reader.scalar_amount(&fields, "min_bet");
    let actions = reader.actions(
        fields.raw.get("actions").copied(),
        &mut field_comments,
        &mut actions_closing_comments,
    );

    let (Some(variant), Some(antes), Some(starting_stacks), Some(actions)) =
        (variant, antes, starting_stacks, actions)
    else {
        return Err(DocumentError {
            diagnostics: reader.diagnostics,
        });
    };

    let mut document = HandDocument {
        variant,
        antes,
        blinds_or_straddles,
        bring_in,
        small_bet,
        big_bet,
        min_bet,
        starting_stacks,
        actions,
        optional,
        user_fields,
        field_comments,
        actions_closing_comments,
        closing_comments: comment_lines(raw_text(toml.trailing(), src)),
        source: Some(src.to_owned()),
    };

    if let Some(code) = document.variant.code() {
        reader.diagnostics.extend(check_required_matrix(
            code,
            &document.present_fields(),
            policy,
        ));
    }
    reader.check_player_references(&mut document);
    reader.check_lengths(&mut document);
    reader.diagnostics.extend(check_optional_types(&document));

    if policy == ParsePolicy::Strict && has_errors(&reader.diagnostics) {
        return Err(DocumentError {
            diagnostics: reader.diagnostics,
        });
    }
    Ok(ParsedDocument {
        document,
        diagnostics: reader.diagnostics,
    })
}

#[derive(Default)]
struct RawFields<'d> {
    raw: BTreeMap<&'d str, &'d Item>,
}

struct Reader<'s> {
    src: &'s str,
    policy: ParsePolicy,
    diagnostics: Vec<Diagnostic>,
}

impl Reader<'_> {
    fn error(&mut self, code: Code, field: &str, message: impl Into<String>) {
        self.diagnostics
            .push(Diagnostic::field(Severity::Error, code, field, message));
    }

    fn wrong_type(&mut self, field: &str, expected: &str, item: &Item) {
        let found = item_type_name(item);
        self.error(
            Code::WrongFieldType,
            field,
            format!("expected {expected}, found {found}"),
        );
    }

    fn missing(&mut self, field: &str) {
        self.error(
            Code::MissingRequiredField,
            field,
            format!("required field `{field}` is missing"),
        );
    }

    fn variant(&mut self, item: Option<&Item>) -> Option<Variant> {
        let Some(item) = item else {
            self.missing("variant");
            return None;
        };
        let Some(text) = item.as_str() else {
            self.wrong_type("variant", "string", item);
            return None;
        };
        match text.parse::<VariantCode>() {
            Ok(code) => Some(Variant::Known(code)),
            Err(e) => match self.policy {
                ParsePolicy::Strict => {
                    self.error(Code::BadVariantCode, "variant", e.to_string());
                    None
                }
                ParsePolicy::Lenient => {
                    self.diagnostics.push(Diagnostic::field(
                        Severity::Warning,
                        Code::BadVariantCode,
                        "variant",
                        format!("{e}; kept as an opaque code"),
                    ));
                    Some(Variant::Opaque(text.to_owned()))
                }
            },
        }
    }

    fn money(&mut self, field: &str, value: &Value) -> Result<Money, ()> {
        let lexeme = match value {
            Value::Integer(f) => f
                .as_repr()
                .map(|r| raw_text(r.as_raw(), self.src).to_owned()),
            Value::Float(f) => f
                .as_repr()
                .map(|r| raw_text(r.as_raw(), self.src).to_owned()),
            _ => {
                self.error(
                    Code::WrongFieldType,
                    field,
                    format!("expected integer or float, found {}", value.type_name()),
                );
                return Err(());
            }
        };
        let lexeme = lexeme
            .filter(|s| !s.is_empty())
            .unwrap_or_else(|| match value {
                Value::Integer(f) => f.value().to_string(),
                Value::Float(f) => format!("{:?}", f.value()),
                _ => unreachable!(),
            });
        match Money::parse_lexeme(&lexeme) {
            Ok(m) if m.is_negative() => {
                self.error(Code::NegativeAmount, field, format!("{lexeme} is negative"));
                Err(())
            }
            Ok(m) => Ok(m),
            Err(e @ MoneyError::NotFinite(_)) => {
                self.error(Code::BadAmount, field, e.to_string());
                Err(())
            }
            Err(e) => {
                self.error(Code::BadAmount, field, e.to_string());
                Err(())
            }
        }
    }

    fn amount_array(&mut self, field: &str, item: &Item, required: bool) -> Option<Vec<Money>> {
        let Some(array) = item.as_array() else {
            self.wrong_type(field, "array of integers or floats", item);
            return None;
        };
        let mut out = Vec::with_capacity(array.len());
        let mut ok = true;
        for v in array.iter() {
            match self.money(field, v) {
                Ok(m) => out.push(m),
                Err(()) => ok = false,
            }
        }
        if !ok && !required && self.policy == ParsePolicy::Lenient {
            return None;
        }
        ok.then_some(out)
    }

    fn required_amounts(&mut self, fields: &RawFields, field: &str) -> Option<Vec<Money>> {
        match fields.raw.get(field) {
            Some(item) => self.amount_array(field, item, true),
            None => {
                self.missing(field);
                None
            }
        }
    }

    fn scalar_amount(&mut self, fields: &RawFields, field: &str) -> Option<Money> {
        let item = fields.raw.get(field)?;
        match item.as_value() {
            Some(v) => self.money(field, v).ok(),
            None => {
                self.wrong_type(field, "integer or float", item);
                None
            }
        }
    }

    fn starting_stacks(&mut self, item: Option<&Item>) -> Option<Vec<Option<Money>>> {
        let field = "starting_stacks";
        let Some(item) = item else {
            self.missing(field);
            return None;
        };
        let Some(array) = item.as_array() else {
            self.wrong_type(field, "array of integers, floats or inf", item);
            return None;
        };
        let mut out = Vec::with_capacity(array.len());
        let mut ok = true;
        for v in array.iter() {
            if let Value::Float(f) = v {
                if f.value().is_infinite() && *f.value() > 0.0 {
                    out.push(None);
                    continue;
                }
            }
            match self.money(field, v) {
                Ok(m) if m.is_zero() => {
                    self.error(
                        Code::NonPositiveStack,
                        field,
                        "starting stacks must be non-zero",
                    );
                    ok = false;
                }
                Ok(m) => out.push(Some(m)),
                Err(()) => ok = false,
            }
        }
        if out.len() < 2 && ok {
            self.error(
                Code::TooFewPlayers,
                field,
                format!("a hand needs at least 2 players, found {}", out.len()),
            );
            ok = false;
        }
        ok.then_some(out)
    }

    fn actions(
        &mut self,
        item: Option<&Item>,
        field_comments: &mut BTreeMap<String, FieldComments>,
        closing: &mut Vec<String>,
    ) -> Option<Vec<ActionEntry>> {
        let Some(item) = item else {
            self.missing("actions");
            return None;
        };
        let Some(array) = item.as_array() else {
            self.wrong_type("actions", "array of strings", item);
            return None;
        };
        let mut entries: Vec<ActionEntry> = Vec::with_capacity(array.len());
        for (i, v) in array.iter().enumerate() {
            let prefix = decor_prefix(v.decor(), self.src);
            let (same_line, rest) = if i == 0 {
                ("", prefix)
            } else {
                prefix.split_once('\n').unwrap_or((prefix, ""))
            };
            if let (Some(prev), Some(c)) = (entries.last_mut(), first_comment(same_line)) {
                prev.trailing_comment.get_or_insert(c);
            }
            let mut leading = comment_lines(rest);
            if i == 0 {
                leading = comment_lines(prefix);
            }
            let suffix = decor_suffix(v.decor(), self.src);
            let (same_line, after) = suffix.split_once('\n').unwrap_or((suffix, ""));
            let trailing = first_comment(same_line);
            closing.extend(comment_lines(after));
            let Some(text) = v.as_str() else {
                self.diagnostics.push(Diagnostic::error(
                    Code::WrongFieldType,
                    Location::Action(i),
                    format!("actions must be strings, found {}", v.type_name()),
                ));
                entries.push(ActionEntry {
                    text: v.to_string().trim().to_owned(),
                    record: None,
                    leading_comments: leading,
                    trailing_comment: trailing,
                });
                continue;
            };
            let parsed = parse_action_with(text, ParsePolicy::Lenient, i)
                .expect("lenient action parsing does not fail");
            self.diagnostics.extend(parsed.diagnostics);
            entries.push(ActionEntry {
                text: text.to_owned(),
                record: parsed.record,
                leading_comments: leading,
                trailing_comment: trailing,
            });
        }
        let tail = raw_text(array.trailing(), self.src);
        let (same_line, rest) = tail.split_once('\n').unwrap_or((tail, ""));
        match (entries.last_mut(), first_comment(same_line)) {
            (Some(last), Some(c)) if last.trailing_comment.is_none() => {
                last.trailing_comment = Some(c);
                closing.extend(comment_lines(rest));
            }
            (None, _) => {
                let comments = field_comments.entry("actions".to_owned()).or_default();
                comments.leading.extend(comment_lines(tail));
            }
            _ => closing.extend(comment_lines(tail)),
        }
        Some(entries)
    }

    fn optional(&mut self, key: &str, item: &Item, out: &mut OptionalFields) {
        let string = |r: &mut Self| -> Option<String> {
            match item.as_str() {
                Some(s) => Some(s.to_owned()),
                None => {
                    r.wrong_type(key, "string", item);
                    None
                }
            }
        };
        let integer = |r: &mut Self| -> Option<i64> {
            match item.as_integer() {
                Some(i) => Some(i),
                None => {
                    r.wrong_type(key, "integer", item);
                    None
                }
            }
        };
        match key {
            "author" => out.author = string(self),
            "event" => out.event = string(self),
            "url" => out.url = string(self),
            "address" => out.address = string(self),
            "city" => out.city = string(self),
            "region" => out.region = string(self),
            "postal_code" => out.postal_code = string(self),
            "country" => out.country = string(self),
            "time_zone" => out.time_zone = string(self),
            "currency" => out.currency = string(self),
            "day" => out.day = integer(self),
            "month" => out.month = integer(self),
            "year" => out.year = integer(self),
            "hand" => out.hand = integer(self),
            "level" => out.level = integer(self),
            "seat_count" => out.seat_count = integer(self),
            "table" => out.table = integer(self),
            "time" => match item.as_datetime() {
                Some(dt) if dt.date.is_none() && dt.offset.is_none() && dt.time.is_some() => {
                    out.time = Some(dt.to_string())
                }
                _ => self.wrong_type(key, "local time", item),
            },
            "ante_trimming_status" => match item.as_bool() {
                Some(b) => out.ante_trimming_status = Some(b),
                None => self.wrong_type(key, "boolean", item),
            },
            "seats" => match item.as_array() {
                Some(a) if a.iter().all(|v| v.as_integer().is_some()) => {
                    out.seats = Some(a.iter().filter_map(Value::as_integer).collect())
                }
                _ => self.wrong_type(key, "array of integers", item),
            },
            "players" => match item.as_array() {
                Some(a) if a.iter().all(|v| v.as_str().is_some()) => {
                    out.players = Some(
                        a.iter()
                            .filter_map(|v| v.as_str().map(str::to_owned))
                            .collect(),
                    )
                }
                _ => self.wrong_type(key, "array of strings", item),
            },
            "finishing_stacks" => out.finishing_stacks = self.amount_array(key, item, false),
            "time_banks" => out.time_banks = self.amount_array(key, item, false),
            "time_limit" => match item.as_value() {
                Some(v) => out.time_limit = self.money(key, v).ok(),
                None => self.wrong_type(key, "integer or float", item),
            },
            _ => unreachable!("{key} is not an optional field"),
        }
    }

    fn check_player_references(&mut self, document: &mut HandDocument) {
        let count = document.player_count();
        for (i, entry) in document.actions.iter_mut().enumerate() {
            let Some(record) = &entry.record else {
                continue;
            };
            let Some(player) = record.body.referenced_player() else {
                continue;
            };
            if player.number() as usize > count {
                self.diagnostics.push(Diagnostic::error(
                    Code::UnknownActor,
                    Location::Action(i),
                    format!("{player} does not exist in a {count}-player hand"),
                ));
                entry.record = None;
            }
        }
    }

    fn check_lengths(&mut self, document: &mut HandDocument) {
        let count = document.player_count();
        for (field, len) in document.per_player_lengths() {
            if len == count {
                continue;
            }
            self.error(
                Code::LengthMismatch,
                field,
                format!("has {len} entries but there are {count} players"),
            );
            if self.policy == ParsePolicy::Lenient {
                let o = &mut document.optional;
                match field {
                    "seats" => o.seats = None,
                    "players" => o.players = None,
                    "finishing_stacks" => o.finishing_stacks = None,
                    "time_banks" => o.time_banks = None,
                    _ => {}
                }
            }
        }
    }
}

fn item_type_name(item: &Item) -> &'static str {
    match item {
        Item::None => "nothing",
        Item::Value(v) => v.type_name(),
        Item::Table(_) => "table",
        Item::ArrayOfTables(_) => "array of tables",
    }
}

fn decor_prefix<'a>(decor: &'a toml_edit::Decor, src: &'a str) -> &'a str {
    decor.prefix().map(|r| raw_text(r, src)).unwrap_or("")
}

fn decor_suffix<'a>(decor: &'a toml_edit::Decor, src: &'a str) -> &'a str {
    decor.suffix().map(|r| raw_text(r, src)).unwrap_or("")
}

/// Text of every `#` comment in a run of TOML whitespace and comments.
fn comment_lines(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .filter_map(|line| line.strip_prefix('#'))
        .map(|c| c.trim().to_owned())
        .collect()
}

fn first_comment(text: &str) -> Option<String> {
    comment_lines(text).into_iter().next()
}

/// Comments nested inside a value (array elements, table entries) are kept
/// with the field so their text survives canonicalization.
fn collect_inner_comments(item: &Item, src: &str, out: &mut FieldComments) {
    fn walk_value(value: &Value, src: &str, top: bool, out: &mut FieldComments) {
        if !top {
            out.leading
                .extend(comment_lines(decor_prefix(value.decor(), src)));
            out.leading
                .extend(comment_lines(decor_suffix(value.decor(), src)));
        }
        match value {
            Value::Array(a) => {
                for v in a.iter() {
                    walk_value(v, src, false, out);
                }
                out.leading
                    .extend(comment_lines(raw_text(a.trailing(), src)));
            }
            Value::InlineTable(t) => {
                for (_, v) in t.iter() {
                    walk_value(v, src, false, out);
                }
            }
            _ => {}
        }
    }
    fn walk_table(table: &toml_edit::Table, src: &str, out: &mut FieldComments) {
        for (k, item) in table.iter() {
            if let Some(key) = table.key(k) {
                out.leading
                    .extend(comment_lines(decor_prefix(key.leaf_decor(), src)));
            }
            match item {
                Item::Value(v) => {
                    walk_value(v, src, true, out);
                    out.leading
                        .extend(comment_lines(decor_suffix(v.decor(), src)));
                }
                Item::Table(t) => {
                    out.leading
                        .extend(comment_lines(decor_prefix(t.decor(), src)));
                    walk_table(t, src, out);
                }
                Item::ArrayOfTables(a) => {
                    for t in a.iter() {
                        out.leading
                            .extend(comment_lines(decor_prefix(t.decor(), src)));
                        walk_table(t, src, out);
                    }
                }
                Item::None => {}
            }
        }
    }
    match item {
        Item::Value(v) => {
            walk_value(v, src, true, out);
            out.trailing = first_comment(decor_suffix(v.decor(), src));
        }
        Item::Table(t) => {
            out.leading
                .extend(comment_lines(decor_suffix(t.decor(), src)));
            walk_table(t, src, out);
        }
        Item::ArrayOfTables(a) => {
            for t in a.iter() {
                out.leading
                    .extend(comment_lines(decor_prefix(t.decor(), src)));
                walk_table(t, src, out);
            }
        }
        Item::None => {}
    }
}
