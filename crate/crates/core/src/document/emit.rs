use std::fmt::Write as _;

use thiserror::Error;

use crate::action::ParsePolicy;
use crate::diagnostic::Diagnostic;
use crate::money::Money;

use super::schema::check_required_matrix;
use super::value::{toml_key, toml_string};
use super::{FieldComments, HandDocument};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SerializeStyle {
    #[default]
    Canonical,
    /// The retained source text if the document is unmodified, else canonical.
    PreserveSource,
}

#[derive(Debug, Clone, Error)]
pub enum SerializeError {
    #[error("invalid document: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    InvalidDocument(Vec<Diagnostic>),
}

const INLINE_LIMIT: usize = 4;

pub fn serialize_document(
    doc: &HandDocument,
    style: SerializeStyle,
) -> Result<String, SerializeError> {
    if style == SerializeStyle::PreserveSource {
        if let Some(src) = &doc.source {
            return Ok(src.clone());
        }
    }
    if let Some(code) = doc.variant.code() {
        let errors: Vec<Diagnostic> =
            check_required_matrix(code, &doc.present_fields(), ParsePolicy::Lenient)
                .into_iter()
                .filter(Diagnostic::is_error)
                .collect();
        if !errors.is_empty() {
            return Err(SerializeError::InvalidDocument(errors));
        }
    }
    Ok(Emitter::default().document(doc))
}

#[derive(Default)]
struct Emitter {
    out: String,
}

impl Emitter {
    fn document(mut self, doc: &HandDocument) -> String {
        let o = &doc.optional;
        let money = |m: &Money| m.to_string();
        let stack = |s: &Option<Money>| s.map_or_else(|| "inf".to_owned(), |m| m.to_string());
        let string = |s: &String| toml_string(s);
        let int = |i: &i64| i.to_string();

        self.scalar(doc, "variant", Some(toml_string(doc.variant.as_str())));
        self.array(doc, "antes", Some(&doc.antes), money);
        self.array(
            doc,
            "blinds_or_straddles",
            doc.blinds_or_straddles.as_ref(),
            money,
        );
        self.scalar(doc, "bring_in", doc.bring_in.as_ref().map(money));
        self.scalar(doc, "small_bet", doc.small_bet.as_ref().map(money));
        self.scalar(doc, "big_bet", doc.big_bet.as_ref().map(money));
        self.scalar(doc, "min_bet", doc.min_bet.as_ref().map(money));
        self.array(doc, "starting_stacks", Some(&doc.starting_stacks), stack);
        self.actions(doc);

        self.scalar(doc, "author", o.author.as_ref().map(string));
        self.scalar(doc, "event", o.event.as_ref().map(string));
        self.scalar(doc, "url", o.url.as_ref().map(string));
        self.scalar(doc, "address", o.address.as_ref().map(string));
        self.scalar(doc, "city", o.city.as_ref().map(string));
        self.scalar(doc, "region", o.region.as_ref().map(string));
        self.scalar(doc, "postal_code", o.postal_code.as_ref().map(string));
        self.scalar(doc, "country", o.country.as_ref().map(string));
        self.scalar(doc, "time", o.time.clone());
        self.scalar(doc, "time_zone", o.time_zone.as_ref().map(string));
        self.scalar(doc, "day", o.day.as_ref().map(int));
        self.scalar(doc, "month", o.month.as_ref().map(int));
        self.scalar(doc, "year", o.year.as_ref().map(int));
        self.scalar(doc, "hand", o.hand.as_ref().map(int));
        self.scalar(doc, "level", o.level.as_ref().map(int));
        self.array(doc, "seats", o.seats.as_ref(), int);
        self.scalar(doc, "seat_count", o.seat_count.as_ref().map(int));
        self.scalar(doc, "table", o.table.as_ref().map(int));
        self.array(doc, "players", o.players.as_ref(), string);
        self.array(doc, "finishing_stacks", o.finishing_stacks.as_ref(), money);
        self.scalar(doc, "currency", o.currency.as_ref().map(string));
        self.scalar(
            doc,
            "ante_trimming_status",
            o.ante_trimming_status.map(|b| b.to_string()),
        );
        self.scalar(doc, "time_limit", o.time_limit.as_ref().map(money));
        self.array(doc, "time_banks", o.time_banks.as_ref(), money);

        for (key, value) in &doc.user_fields {
            self.leading(doc.field_comments.get(key));
            let _ = write!(self.out, "{} = {}", toml_key(key), value.to_toml());
            self.trailing(doc.field_comments.get(key));
        }
        self.comment_lines("", &doc.closing_comments);
        self.out
    }

    fn comment_lines(&mut self, indent: &str, lines: &[String]) {
        for line in lines {
            self.out.push_str(indent);
            push_comment(&mut self.out, line);
            self.out.push('\n');
        }
    }

    fn leading(&mut self, comments: Option<&FieldComments>) {
        if let Some(c) = comments {
            self.comment_lines("", &c.leading);
        }
    }

    fn trailing(&mut self, comments: Option<&FieldComments>) {
        if let Some(text) = comments.and_then(|c| c.trailing.as_ref()) {
            self.out.push_str("  ");
            push_comment(&mut self.out, text);
        }
        self.out.push('\n');
    }

    fn scalar(&mut self, doc: &HandDocument, key: &str, value: Option<String>) {
        let Some(value) = value else { return };
        let comments = doc.field_comments.get(key);
        self.leading(comments);
        let _ = write!(self.out, "{key} = {value}");
        self.trailing(comments);
    }

    fn array<T>(
        &mut self,
        doc: &HandDocument,
        key: &str,
        items: Option<&Vec<T>>,
        render: impl Fn(&T) -> String,
    ) {
        let Some(items) = items else { return };
        let comments = doc.field_comments.get(key);
        self.leading(comments);
        let rendered: Vec<String> = items.iter().map(render).collect();
        if rendered.len() <= INLINE_LIMIT {
            let _ = write!(self.out, "{key} = [{}]", rendered.join(", "));
        } else {
            let _ = writeln!(self.out, "{key} = [");
            for item in &rendered {
                let _ = writeln!(self.out, "  {item},");
            }
            self.out.push(']');
        }
        self.trailing(comments);
    }

    fn actions(&mut self, doc: &HandDocument) {
        let comments = doc.field_comments.get("actions");
        self.leading(comments);
        if doc.actions.is_empty() && doc.actions_closing_comments.is_empty() {
            self.out.push_str("actions = []");
            self.trailing(comments);
            return;
        }
        self.out.push_str("actions = [\n");
        for entry in &doc.actions {
            self.comment_lines("  ", &entry.leading_comments);
            let text = match &entry.record {
                Some(record) => record.to_string(),
                None => entry.text.clone(),
            };
            let _ = write!(self.out, "  {},", toml_string(&text));
            if let Some(c) = &entry.trailing_comment {
                self.out.push_str("  ");
                push_comment(&mut self.out, c);
            }
            self.out.push('\n');
        }
        self.comment_lines("  ", &doc.actions_closing_comments);
        self.out.push(']');
        self.trailing(comments);
    }
}

fn push_comment(out: &mut String, text: &str) {
    let text: String = text
        .chars()
        .map(|c| if c.is_control() && c != '\t' { ' ' } else { c })
        .collect();
    let text = text.trim();
    out.push('#');
    if !text.is_empty() {
        out.push(' ');
        out.push_str(text);
    }
}
