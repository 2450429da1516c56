use super::haa::{Haa, Letter, StratumKind};
use super::solve::{positioned_graph, solve_acceptance, AcceptanceGraph};
use crate::error::{Error, Result};
use crate::kripke::{KripkeStructure, Lasso, MacroLasso, MacroState};

/// Decide whether the HAA accepts an ultimately periodic word.
///
/// The word's letters must belong to the automaton's alphabet. Internally
/// this is the acceptance game on (state, lasso position) nodes, solved
/// stratum by stratum.
pub fn haa_membership<L: Letter>(haa: &Haa<L>, w: &Lasso<L>) -> Result<bool> {
    let graph = membership_graph(haa, w)?;
    Ok(solve_acceptance(&graph))
}

pub(crate) fn membership_graph<L: Letter>(
    haa: &Haa<L>,
    w: &Lasso<L>,
) -> Result<AcceptanceGraph> {
    let total = w.total_len();
    let letters: Vec<usize> = (0..total)
        .map(|i| {
            haa.letter_index(w.at(i)).ok_or_else(|| {
                Error::Structure(format!(
                    "lasso letter at position {i} is not in the automaton alphabet"
                ))
            })
        })
        .collect::<Result<_>>()?;
    let next: Vec<usize> = (0..total).map(|i| w.next_pos(i)).collect();
    positioned_graph(haa, &letters, &next, "membership", usize::MAX)
}

/// A 1-letter HAA: the product of an HAA over macro-state letters with the
/// deterministic forward-image iteration of a structure, starting at its
/// initial states. Its states are (state, macro-state) pairs, the macro-state
/// component ranging over the orbit actually reachable from the initial set;
/// strata are lifted componentwise, so the depth is unchanged.
#[derive(Debug)]
pub struct OneLetterHaa {
    graph: AcceptanceGraph,
    orbit: MacroLasso,
    base_states: usize,
}

impl OneLetterHaa {
    pub fn num_states(&self) -> usize {
        self.graph.delta.len()
    }

    pub fn num_base_states(&self) -> usize {
        self.base_states
    }

    /// Macro-states materialized from the forward-image iteration.
    pub fn orbit(&self) -> &MacroLasso {
        &self.orbit
    }

    pub fn depth(&self) -> usize {
        self.graph.strata_kinds.len()
    }

    pub fn strata_kinds(&self) -> &[StratumKind] {
        &self.graph.strata_kinds
    }
}

/// Build the 1-letter HAA simulating `haa` on the initial macro-path of `k`.
pub fn one_letterize(
    k: &KripkeStructure,
    haa: &Haa<MacroState>,
    max_states: usize,
) -> Result<OneLetterHaa> {
    let orbit = k.initial_macro_lasso();
    let total = orbit.total_len();
    let letters: Vec<usize> = (0..total)
        .map(|i| {
            haa.letter_index(orbit.at(i)).ok_or_else(|| {
                Error::Structure(
                    "automaton alphabet does not cover the initial macro-path".into(),
                )
            })
        })
        .collect::<Result<_>>()?;
    let next: Vec<usize> = (0..total).map(|i| orbit.next_pos(i)).collect();
    let graph = positioned_graph(haa, &letters, &next, "one-letter product", max_states)?;
    Ok(OneLetterHaa { graph, orbit, base_states: haa.num_states() })
}

/// Nonemptiness of a 1-letter HAA, by the bottom-up stratum fixpoint:
/// true iff the automaton accepts its single input word.
pub fn one_letter_nonempty(a: &OneLetterHaa) -> bool {
    solve_acceptance(&a.graph)
}
