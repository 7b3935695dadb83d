//! Format-independent copies of TOML values, used for user-defined fields.

use std::collections::BTreeMap;

use serde::Serialize;
use toml_edit::{Item, RawString, Value};

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum FieldValue {
    String(String),
    Integer(i64),
    Float {
        value: f64,
        #[serde(skip)]
        repr: String,
    },
    Boolean(bool),
    Datetime(String),
    Array(Vec<FieldValue>),
    Table(BTreeMap<String, FieldValue>),
}

impl PartialEq for FieldValue {
    fn eq(&self, other: &Self) -> bool {
        use FieldValue::*;
        match (self, other) {
            (String(a), String(b)) | (Datetime(a), Datetime(b)) => a == b,
            (Integer(a), Integer(b)) => a == b,
            (Float { value: a, .. }, Float { value: b, .. }) => {
                a == b || (a.is_nan() && b.is_nan())
            }
            (Boolean(a), Boolean(b)) => a == b,
            (Array(a), Array(b)) => a == b,
            (Table(a), Table(b)) => a == b,
            _ => false,
        }
    }
}

impl FieldValue {
    pub fn float(value: f64) -> FieldValue {
        FieldValue::Float {
            value,
            repr: float_repr(value),
        }
    }

    pub fn type_name(&self) -> &'static str {
        match self {
            FieldValue::String(_) => "string",
            FieldValue::Integer(_) => "integer",
            FieldValue::Float { .. } => "float",
            FieldValue::Boolean(_) => "boolean",
            FieldValue::Datetime(_) => "datetime",
            FieldValue::Array(_) => "array",
            FieldValue::Table(_) => "table",
        }
    }

    pub(crate) fn from_value(value: &Value, src: &str) -> FieldValue {
        match value {
            Value::String(s) => FieldValue::String(s.value().clone()),
            Value::Integer(i) => FieldValue::Integer(*i.value()),
            Value::Float(f) => FieldValue::Float {
                value: *f.value(),
                repr: f
                    .as_repr()
                    .map(|r| raw_text(r.as_raw(), src).to_owned())
                    .filter(|r| !r.is_empty())
                    .unwrap_or_else(|| float_repr(*f.value())),
            },
            Value::Boolean(b) => FieldValue::Boolean(*b.value()),
            Value::Datetime(d) => FieldValue::Datetime(d.value().to_string()),
            Value::Array(a) => {
                FieldValue::Array(a.iter().map(|v| FieldValue::from_value(v, src)).collect())
            }
            Value::InlineTable(t) => FieldValue::Table(
                t.iter()
                    .map(|(k, v)| (k.to_owned(), FieldValue::from_value(v, src)))
                    .collect(),
            ),
        }
    }

    pub(crate) fn from_item(item: &Item, src: &str) -> Option<FieldValue> {
        match item {
            Item::None => None,
            Item::Value(v) => Some(FieldValue::from_value(v, src)),
            Item::Table(t) => Some(FieldValue::Table(
                t.iter()
                    .filter_map(|(k, v)| Some((k.to_owned(), FieldValue::from_item(v, src)?)))
                    .collect(),
            )),
            Item::ArrayOfTables(a) => Some(FieldValue::Array(
                a.iter()
                    .map(|t| {
                        FieldValue::Table(
                            t.iter()
                                .filter_map(|(k, v)| {
                                    Some((k.to_owned(), FieldValue::from_item(v, src)?))
                                })
                                .collect(),
                        )
                    })
                    .collect(),
            )),
        }
    }

    /// Inline TOML text for this value.
    pub fn to_toml(&self) -> String {
        match self {
            FieldValue::String(s) => toml_string(s),
            FieldValue::Integer(i) => i.to_string(),
            FieldValue::Float { repr, .. } => repr.clone(),
            FieldValue::Boolean(b) => b.to_string(),
            FieldValue::Datetime(d) => d.clone(),
            FieldValue::Array(items) => {
                let inner: Vec<String> = items.iter().map(FieldValue::to_toml).collect();
                format!("[{}]", inner.join(", "))
            }
            FieldValue::Table(map) if map.is_empty() => "{}".to_owned(),
            FieldValue::Table(map) => {
                let inner: Vec<String> = map
                    .iter()
                    .map(|(k, v)| format!("{} = {}", toml_key(k), v.to_toml()))
                    .collect();
                format!("{{ {} }}", inner.join(", "))
            }
        }
    }
}

fn float_repr(value: f64) -> String {
    if value.is_nan() {
        "nan".to_owned()
    } else if value.is_infinite() {
        if value > 0.0 { "inf" } else { "-inf" }.to_owned()
    } else {
        format!("{value:?}")
    }
}

/// Text of a raw TOML fragment, resolving source spans.
pub(crate) fn raw_text<'a>(raw: &'a RawString, src: &'a str) -> &'a str {
    raw.as_str()
        .or_else(|| raw.span().and_then(|s| src.get(s)))
        .unwrap_or("")
}

/// A TOML basic string literal.
pub fn toml_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            '\u{8}' => out.push_str("\\b"),
            '\u{c}' => out.push_str("\\f"),
            c if c.is_control() => out.push_str(&format!("\\u{:04X}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

pub fn toml_key(key: &str) -> String {
    let bare = !key.is_empty()
        && key
            .bytes()
            .all(|b| b.is_ascii_alphanumeric() || b == b'_' || b == b'-');
    if bare {
        key.to_owned()
    } else {
        toml_string(key)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strings_escape() {
        assert_eq!(toml_string("a\"b\\c\n"), r#""a\"b\\c\n""#);
        assert_eq!(toml_string("\u{7f}"), r#""\u007F""#);
        assert_eq!(toml_key("_apm"), "_apm");
        assert_eq!(toml_key("_a b"), "\"_a b\"");
    }

    #[test]
    fn values_re_parse() {
        let src = r#"v = { b = [1, 2.5, "x"], a = true, c = 1979-05-27, d = inf }"#;
        let doc = toml_edit::ImDocument::parse(src).unwrap();
        let value = FieldValue::from_item(&doc["v"], src).unwrap();
        let emitted = format!("v = {}", value.to_toml());
        let again = toml_edit::ImDocument::parse(emitted.as_str()).unwrap();
        assert_eq!(FieldValue::from_item(&again["v"], &emitted).unwrap(), value);
    }
}
