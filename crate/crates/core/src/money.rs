//! Exact decimal chip amounts.
//!
//! A [`Money`] is a scaled integer (`units * 10^-scale`). It also remembers
//! whether it came from an integer or a float lexeme so that `0` and `0.0`
//! re-serialize the way they were written.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::iter::Sum;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

/// Largest number of fractional digits a source amount may carry.
pub const MAX_SCALE: u32 = 18;

/// Amounts must be below `10^MAX_WHOLE_DIGITS` in magnitude, which keeps
/// every sum a hand can form well inside `i128`.
pub const MAX_WHOLE_DIGITS: u32 = 15;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoneyError {
    #[error("malformed amount {0:?}")]
    Malformed(String),
    #[error("amount {0:?} is not finite")]
    NotFinite(String),
    #[error("amount {0:?} needs more than {MAX_SCALE} fractional digits")]
    TooPrecise(String),
    #[error("amount {0:?} is out of range")]
    OutOfRange(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum NumericForm {
    Integer,
    Float,
}

#[derive(Clone, Copy)]
pub struct Money {
    units: i128,
    scale: u32,
    form: NumericForm,
}

const fn pow10(exp: u32) -> i128 {
    10i128.pow(exp)
}

impl Money {
    pub const ZERO: Money = Money {
        units: 0,
        scale: 0,
        form: NumericForm::Integer,
    };

    pub fn from_int(value: i64) -> Money {
        Money {
            units: value as i128,
            scale: 0,
            form: NumericForm::Integer,
        }
    }

    /// `units * 10^-scale`, float form.
    pub fn from_scaled(units: i128, scale: u32) -> Money {
        Money {
            units,
            scale,
            form: NumericForm::Float,
        }
        .normalized()
    }

    pub fn form(&self) -> NumericForm {
        self.form
    }

    pub fn with_form(mut self, form: NumericForm) -> Money {
        self.form = form;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.units == 0
    }

    pub fn is_negative(&self) -> bool {
        self.units < 0
    }

    pub fn is_positive(&self) -> bool {
        self.units > 0
    }

    /// Number of fractional digits needed to represent this value exactly.
    pub fn scale(&self) -> u32 {
        self.normalized().scale
    }

    fn normalized(mut self) -> Money {
        while self.scale > 0 && self.units % 10 == 0 {
            self.units /= 10;
            self.scale -= 1;
        }
        self
    }

    fn aligned(a: Money, b: Money) -> (i128, i128, u32) {
        let scale = a.scale.max(b.scale);
        (
            a.units * pow10(scale - a.scale),
            b.units * pow10(scale - b.scale),
            scale,
        )
    }

    fn combined_form(a: Money, b: Money) -> NumericForm {
        if a.form == NumericForm::Float || b.form == NumericForm::Float {
            NumericForm::Float
        } else {
            NumericForm::Integer
        }
    }

    pub fn abs(self) -> Money {
        Money {
            units: self.units.abs(),
            ..self
        }
    }

    pub fn min(self, other: Money) -> Money {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Money) -> Money {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn times(self, factor: i64) -> Money {
        Money {
            units: self.units * factor as i128,
            ..self
        }
    }

    /// Number of whole `10^-scale` units in this amount, if it is a
    /// multiple of that granularity.
    pub fn units_at(&self, scale: u32) -> Option<i128> {
        let n = self.normalized();
        if n.scale > scale {
            None
        } else {
            Some(n.units * pow10(scale - n.scale))
        }
    }

    /// Inverse of [`Money::units_at`].
    pub fn from_units_at(units: i128, scale: u32, form: NumericForm) -> Money {
        Money { units, scale, form }.normalized()
    }

    /// Parses the text of a TOML integer or float, or an action amount.
    ///
    /// Accepts an optional sign, `_` digit separators, a fractional part and
    /// an exponent. The result is exact.
    pub fn parse_lexeme(text: &str) -> Result<Money, MoneyError> {
        let malformed = || MoneyError::Malformed(text.to_owned());
        let cleaned: String = text.chars().filter(|&c| c != '_').collect();
        let lower = cleaned.to_ascii_lowercase();
        let unsigned = lower.trim_start_matches(['+', '-']);
        if unsigned == "inf" || unsigned == "nan" {
            return Err(MoneyError::NotFinite(text.to_owned()));
        }
        let (negative, body) = match lower.as_bytes().first() {
            Some(b'-') => (true, &lower[1..]),
            Some(b'+') => (false, &lower[1..]),
            _ => (false, lower.as_str()),
        };
        if body.starts_with("0x") || body.starts_with("0o") || body.starts_with("0b") {
            let radix = match &body[..2] {
                "0x" => 16,
                "0o" => 8,
                _ => 2,
            };
            let v = i128::from_str_radix(&body[2..], radix).map_err(|_| malformed())?;
            return Money {
                units: if negative { -v } else { v },
                scale: 0,
                form: NumericForm::Integer,
            }
            .bounded(text);
        }
        let (mantissa, exponent) = match body.split_once('e') {
            Some((m, e)) => (m, e.parse::<i32>().map_err(|_| malformed())?),
            None => (body, 0),
        };
        let (int_part, frac_part) = match mantissa.split_once('.') {
            Some((i, f)) => (i, Some(f)),
            None => (mantissa, None),
        };
        let digits_ok = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
        if !digits_ok(int_part) || frac_part.is_some_and(|f| !digits_ok(f)) {
            return Err(malformed());
        }
        let form = if frac_part.is_some() || body.contains('e') {
            NumericForm::Float
        } else {
            NumericForm::Integer
        };
        let frac = frac_part.unwrap_or("");
        let all_digits = format!("{int_part}{frac}");
        let all_digits = all_digits.trim_start_matches('0');
        if all_digits.len() > 36 {
            return Err(MoneyError::OutOfRange(text.to_owned()));
        }
        let mut units: i128 = if all_digits.is_empty() {
            0
        } else {
            all_digits.parse().map_err(|_| malformed())?
        };
        let mut scale = frac.len() as i64 - exponent as i64;
        if scale < 0 {
            if scale < -36 {
                return Err(MoneyError::OutOfRange(text.to_owned()));
            }
            units = units
                .checked_mul(pow10((-scale) as u32))
                .ok_or_else(|| MoneyError::OutOfRange(text.to_owned()))?;
            scale = 0;
        }
        let mut money = Money {
            units: if negative { -units } else { units },
            scale: scale.min(u32::MAX as i64) as u32,
            form,
        };
        while money.scale > MAX_SCALE && money.units % 10 == 0 {
            money.units /= 10;
            money.scale -= 1;
        }
        if money.scale > MAX_SCALE {
            return Err(MoneyError::TooPrecise(text.to_owned()));
        }
        money.normalized().bounded(text)
    }

    fn bounded(self, text: &str) -> Result<Money, MoneyError> {
        if self.units.abs() < pow10(MAX_WHOLE_DIGITS + self.scale) {
            Ok(self)
        } else {
            Err(MoneyError::OutOfRange(text.to_owned()))
        }
    }
}

impl PartialEq for Money {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Money {}

impl Hash for Money {
    fn hash<H: Hasher>(&self, state: &mut H) {
        let n = self.normalized();
        n.units.hash(state);
        n.scale.hash(state);
    }
}

impl PartialOrd for Money {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Money {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = Money::aligned(*self, *other);
        a.cmp(&b)
    }
}

impl Add for Money {
    type Output = Money;

    fn add(self, rhs: Money) -> Money {
        let (a, b, scale) = Money::aligned(self, rhs);
        Money {
            units: a + b,
            scale,
            form: Money::combined_form(self, rhs),
        }
        .normalized()
    }
}

impl Sub for Money {
    type Output = Money;

    fn sub(self, rhs: Money) -> Money {
        self + (-rhs)
    }
}

impl Neg for Money {
    type Output = Money;

    fn neg(self) -> Money {
        Money {
            units: -self.units,
            ..self
        }
    }
}

impl AddAssign for Money {
    fn add_assign(&mut self, rhs: Money) {
        *self = *self + rhs;
    }
}

impl SubAssign for Money {
    fn sub_assign(&mut self, rhs: Money) {
        *self = *self - rhs;
    }
}

impl Sum for Money {
    fn sum<I: Iterator<Item = Money>>(iter: I) -> Money {
        iter.fold(Money::ZERO, |acc, m| acc + m)
    }
}

impl<'a> Sum<&'a Money> for Money {
    fn sum<I: Iterator<Item = &'a Money>>(iter: I) -> Money {
        iter.copied().sum()
    }
}

impl Default for Money {
    fn default() -> Self {
        Money::ZERO
    }
}

impl fmt::Display for Money {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.normalized();
        let sign = if n.units < 0 { "-" } else { "" };
        let abs = n.units.unsigned_abs();
        if n.scale == 0 {
            return match self.form {
                NumericForm::Integer => write!(f, "{sign}{abs}"),
                NumericForm::Float => write!(f, "{sign}{abs}.0"),
            };
        }
        let div = pow10(n.scale) as u128;
        write!(
            f,
            "{sign}{}.{:0width$}",
            abs / div,
            abs % div,
            width = n.scale as usize
        )
    }
}

impl fmt::Debug for Money {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Money({self})")
    }
}

impl FromStr for Money {
    type Err = MoneyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Money::parse_lexeme(s)
    }
}

impl From<i64> for Money {
    fn from(v: i64) -> Self {
        Money::from_int(v)
    }
}

impl Serialize for Money {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(s: &str) -> Money {
        s.parse().unwrap()
    }

    #[test]
    fn keeps_lexical_form() {
        assert_eq!(m("0").to_string(), "0");
        assert_eq!(m("0.0").to_string(), "0.0");
        assert_eq!(m("3.0").to_string(), "3.0");
        assert_eq!(m("0.25").to_string(), "0.25");
        assert_eq!(m("1_000").to_string(), "1000");
        assert_eq!(m("1e3").to_string(), "1000.0");
        assert_eq!(m("2.5e-1").to_string(), "0.25");
        assert_eq!(m("0x10").to_string(), "16");
        assert_eq!(m("-1.50").to_string(), "-1.5");
    }

    #[test]
    fn rejects_bad_lexemes() {
        assert!(matches!(
            Money::parse_lexeme("inf"),
            Err(MoneyError::NotFinite(_))
        ));
        assert!(matches!(
            Money::parse_lexeme("-nan"),
            Err(MoneyError::NotFinite(_))
        ));
        assert!(Money::parse_lexeme("").is_err());
        assert!(Money::parse_lexeme("1.").is_err());
        assert!(Money::parse_lexeme(".5").is_err());
        assert!(Money::parse_lexeme("12a").is_err());
        assert!(matches!(
            Money::parse_lexeme("1e-40"),
            Err(MoneyError::TooPrecise(_))
        ));
        assert!(Money::parse_lexeme("999999999999999.999").is_ok());
        for big in ["1000000000000000", "1e15", "0x7fffffffffffffff", "-1e20"] {
            assert!(
                matches!(Money::parse_lexeme(big), Err(MoneyError::OutOfRange(_))),
                "{big}"
            );
        }
    }

    #[test]
    fn tenth_granularity_is_exact() {
        let total: Money = std::iter::repeat_n(m("0.1"), 10).sum();
        assert_eq!(total, m("1"));
        assert_eq!(m("0.1") + m("0.2"), m("0.3"));
    }

    #[test]
    fn equality_ignores_form() {
        assert_eq!(m("3"), m("3.0"));
        assert_eq!(m("3").form(), NumericForm::Integer);
        assert_eq!((m("3") + m("0.0")).form(), NumericForm::Float);
    }

    #[test]
    fn units_at_granularity() {
        assert_eq!(m("2.5").units_at(1), Some(25));
        assert_eq!(m("2.55").units_at(1), None);
        assert_eq!(m("7").units_at(0), Some(7));
        assert_eq!(Money::from_units_at(25, 1, NumericForm::Float), m("2.5"));
    }

    proptest! {
        #[test]
        fn add_then_subtract_is_identity(a in 0i64..10_000_000, sa in 0u32..4, b in 0i64..10_000_000, sb in 0u32..4) {
            let x = Money::from_scaled(a as i128, sa);
            let y = Money::from_scaled(b as i128, sb);
            prop_assert_eq!((x + y) - y, x);
        }

        #[test]
        fn display_parses_back(a in -10_000_000i64..10_000_000, s in 0u32..6) {
            let x = Money::from_scaled(a as i128, s);
            let back: Money = x.to_string().parse().unwrap();
            prop_assert_eq!(back, x);
            prop_assert_eq!(back.to_string(), x.to_string());
        }
    }
}
