//! The automata pipeline: hesitant alternating word automata over
//! macro-state letters, the constructions for negation, implication, and
//! whole formulas, dealternation to Büchi word automata, intersection with
//! the macro-paths of a structure, and the 1-letter product whose emptiness
//! decides the model-checking question.

mod compile;
mod dealternate;
mod haa;
mod implication;
mod ltl_haa;
mod negation;
mod nbw;
mod one_letter;
mod pbf;
mod restrict;
mod solve;

pub use compile::{compile, default_macro_alphabet, StageRecord};
pub(crate) use compile::compile_unrestricted;
pub use dealternate::haa_to_nbw;
pub use haa::{Haa, Letter, StateId, Stratum, StratumKind};
pub use implication::build_implication_haa;
pub(crate) use implication::implication_counterexample;
pub use ltl_haa::{ltl_to_haa, ltl_to_nbw};
pub use negation::build_negation_haa;
pub(crate) use negation::negation_counterexample;
pub use nbw::Nbw;
pub use one_letter::{haa_membership, one_letter_nonempty, one_letterize, OneLetterHaa};
pub use pbf::Pbf;
pub use restrict::restrict_to_macro_paths;

/// Debugging dump of an HAA: states, strata, and DNF transitions. The
/// format is documented by example and not stability-guaranteed.
pub fn haa_dump_json<L: Letter>(haa: &Haa<L>) -> serde_json::Value {
    use serde_json::json;
    let states: Vec<_> = (0..haa.num_states() as u32)
        .map(|q| {
            json!({
                "id": q,
                "name": haa.name(q),
                "stratum": haa.stratum_of(q),
            })
        })
        .collect();
    let strata: Vec<_> = haa
        .strata()
        .iter()
        .map(|s| {
            json!({
                "states": s.states,
                "accepting": s.accepting,
                "kind": s.kind,
            })
        })
        .collect();
    let transitions: Vec<_> = (0..haa.num_states() as u32)
        .flat_map(|q| {
            haa.alphabet().iter().enumerate().map(move |(li, l)| {
                json!({
                    "from": q,
                    "letter": format!("{l:?}"),
                    "dnf": haa.delta(q, li).dnf(),
                })
            })
        })
        .collect();
    json!({
        "initial": haa.initial(),
        "states": states,
        "strata": strata,
        "transitions": transitions,
    })
}
