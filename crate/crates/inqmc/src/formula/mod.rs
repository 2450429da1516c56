//! InqLTL formulas: core syntax tree, surface syntax with sugar, parsing,
//! pretty-printing, fragment classification, and the singleton-collapse to
//! classical LTL.
//!
//! The core grammar is `bot | top | p | a | b | a & b | a -> b | X a | a U b | a R b`
//! where `|` is Boolean (inquisitive) disjunction and `->` is intuitionistic
//! implication. Everything else (`!`, `F`, `G`, `A`, `A1`, `card1`, `dep`)
//! is surface sugar expanded before a formula is stored.

mod ast;
mod classify;
mod ltl;
mod parse;
mod print;
mod sugar;

pub use ast::{Formula, FormulaKind, Span};
pub use classify::{classify, FragmentReport};
pub use ltl::{collapse_to_ltl, LtlFormula};
pub use parse::{parse, parse_surface, ParseError, SurfaceFormula, SurfaceKind};
pub use sugar::expand_sugar;
