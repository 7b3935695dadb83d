//! Machine-readable findings produced while parsing, validating and
//! replaying a hand.

use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Severity {
    Warning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Warning => "warning",
            Severity::Error => "error",
        })
    }
}

/// Stable diagnostic codes. The `Display` form is the variant name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Code {
    // document
    NotToml,
    MissingRequiredField,
    WrongFieldType,
    LengthMismatch,
    UnknownField,
    BadVariantCode,
    FieldNotApplicable,
    TooFewPlayers,
    NonPositiveStack,
    NegativeAmount,
    BadAmount,
    BadCalendarField,
    BadTimeZone,
    BadCurrency,
    SeatOutOfRange,
    NonstandardUserField,
    // action grammar
    UnknownActor,
    UnknownVerb,
    MissingArgument,
    ExtraArgument,
    BadCards,
    MixedUnknownCard,
    // positions
    NonstandardBlindPlacement,
    // replay
    OutOfTurn,
    BelowMinimum,
    AboveCap,
    WrongStreetAction,
    DiscardNotHeld,
    DashWithoutKnownHole,
    ActionAfterTerminal,
    DuplicateCard,
    CardOutsideDeck,
    TooManyCards,
    ShownCardsMismatch,
    StakesExceedStack,
    RaiseCapExceeded,
    AnteTrimmingNotApplied,
    UnknownShowdownCards,
    NonTerminalState,
    FinishingStackMismatch,
    // conformance
    RoundTripMismatch,
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Where in the document a diagnostic points.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", content = "at", rename_all = "snake_case")]
pub enum Location {
    Document,
    Field(String),
    /// Zero-based index into the `actions` array.
    Action(usize),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Document => f.write_str("document"),
            Location::Field(name) => write!(f, "field `{name}`"),
            Location::Action(i) => write!(f, "actions[{i}]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: Code,
    pub location: Location,
    pub message: String,
}

impl Diagnostic {
    pub fn new(
        severity: Severity,
        code: Code,
        location: Location,
        message: impl Into<String>,
    ) -> Self {
        Diagnostic {
            severity,
            code,
            location,
            message: message.into(),
        }
    }

    pub fn error(code: Code, location: Location, message: impl Into<String>) -> Self {
        Diagnostic::new(Severity::Error, code, location, message)
    }

    pub fn warning(code: Code, location: Location, message: impl Into<String>) -> Self {
        Diagnostic::new(Severity::Warning, code, location, message)
    }

    pub fn field(severity: Severity, code: Code, field: &str, message: impl Into<String>) -> Self {
        Diagnostic::new(severity, code, Location::Field(field.to_owned()), message)
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}[{}] {}: {}",
            self.severity, self.code, self.location, self.message
        )
    }
}

pub fn has_errors(diagnostics: &[Diagnostic]) -> bool {
    diagnostics.iter().any(Diagnostic::is_error)
}
