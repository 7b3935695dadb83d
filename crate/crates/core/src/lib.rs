pub mod action;
pub mod card;
pub mod conformance;
pub mod diagnostic;
pub mod document;
pub mod engine;
pub mod eval;
pub mod money;
pub mod variant;
