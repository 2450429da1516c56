//! Independent reference semantics used to cross-validate the automata
//! pipeline: classical LTL on lassos, exact InqLTL team semantics on finite
//! teams, and a bounded direct evaluation of the macro-path semantics.
//!
//! Nothing in this module shares code with the automata constructions; the
//! whole point is that the two sides can disagree only when one of them is
//! wrong.

mod finite_paths;
mod ltl_eval;
mod macro_eval;
mod team;

pub use finite_paths::{enumerate_initial_paths, team_vs_macro_check, TeamVsMacroReport};
pub use ltl_eval::eval_ltl_lasso;
pub use macro_eval::{eval_macro_lasso_bounded, BoundedVerdict};
pub use team::{eval_team_finite, FiniteTeam, DEFAULT_LCM_CAP, DEFAULT_TEAM_BOUND};
