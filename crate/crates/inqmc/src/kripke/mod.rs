//! Finite Kripke structures, macro-states, and ultimately periodic words:
//! the state-space side of the checker.
//!
//! A macro-state is a set of structure states; a macro-path is an infinite
//! successor-chained sequence of macro-states and abstracts a set of paths.
//! All infinite objects are handled as lassos (stem plus repeated period).

mod lasso;
mod paths;
mod sets;
mod structure;

pub use lasso::{gcd, lcm, Lasso, MacroLasso, PathLasso, TraceLasso};
pub use paths::PathEnumeration;
pub use sets::{MacroState, PropSet};
pub use structure::KripkeStructure;
