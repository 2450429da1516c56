use std::collections::HashMap;

use super::dealternate::haa_to_nbw;
use super::haa::{Haa, StateId};
use super::nbw::Nbw;
use crate::error::{Error, Result};
use crate::kripke::{KripkeStructure, MacroState};

/// HAA for an implication under the macro-path semantics.
///
/// Inputs: `n1` accepts exactly the macro-paths satisfying the (positive)
/// antecedent, and `a2` accepts the consequent's macro-paths up to
/// intersection with the structure's macro-paths. The construction builds a
/// Büchi automaton that guesses a nonempty sub-macro-path (a letterwise
/// subset sequence chained by the successor relation) on which the
/// antecedent holds and the consequent fails — running `n1` and the
/// dealternated dual of `a2` over the guessed sequence with a round-robin
/// flag for the two Büchi conditions — and returns its dual. The caller
/// remains responsible for the final intersection with the macro-paths of
/// the structure.
pub fn build_implication_haa(
    k: &KripkeStructure,
    n1: &Nbw<MacroState>,
    a2: &Haa<MacroState>,
    alphabet: &[MacroState],
    max_states: usize,
) -> Result<Haa<MacroState>> {
    let n2 = haa_to_nbw(&a2.dual(), max_states)?;
    let (product, _) = counterexample_product(k, n1, &n2, alphabet, max_states)?;
    Ok(product.trim().to_haa("implication automaton", max_states)?.dual())
}

/// Extract a countering sub-macro-path of `w` for the implication, if any:
/// an accepting run of the counterexample product over `w`, projected to the
/// guessed letter component.
pub(crate) fn implication_counterexample(
    k: &KripkeStructure,
    n1: &Nbw<MacroState>,
    a2: &Haa<MacroState>,
    alphabet: &[MacroState],
    w: &crate::kripke::MacroLasso,
    max_states: usize,
) -> Result<Option<crate::kripke::MacroLasso>> {
    let n2 = haa_to_nbw(&a2.dual(), max_states)?;
    let (product, tuples) = counterexample_product(k, n1, &n2, alphabet, max_states)?;
    let Some((stem, cycle)) = product.accepting_run_over(w) else {
        return Ok(None);
    };
    // Run states carry the guessed letters; the start state (id 0) carries
    // none and only ever appears first.
    let project = |ids: &[StateId]| -> Vec<MacroState> {
        ids.iter()
            .filter(|&&id| id != 0)
            .map(|&id| tuples[(id - 1) as usize].0)
            .collect()
    };
    let stem_letters = project(&stem);
    let cycle_letters = project(&cycle);
    if cycle_letters.is_empty() {
        return Ok(None);
    }
    Ok(Some(crate::kripke::MacroLasso::new(stem_letters, cycle_letters).canonical()))
}

type Tuple = (MacroState, StateId, StateId, u8);

/// The product automaton accepting macro-lassos that contain a nonempty
/// sub-macro-path accepted by both `n1` and `n2`. Returned untrimmed, with
/// the tuple carried by each state id above 0.
fn counterexample_product(
    k: &KripkeStructure,
    n1: &Nbw<MacroState>,
    n2: &Nbw<MacroState>,
    alphabet: &[MacroState],
    max_states: usize,
) -> Result<(Nbw<MacroState>, Vec<Tuple>)> {
    let mut index: HashMap<Tuple, StateId> = HashMap::new();
    let mut tuples: Vec<Tuple> = Vec::new();
    let mut worklist: Vec<StateId> = Vec::new();
    let start = 0u32;
    let mut delta: Vec<Vec<Vec<StateId>>> = vec![vec![Vec::new(); alphabet.len()]];

    let intern = |t: Tuple,
                      index: &mut HashMap<Tuple, StateId>,
                      tuples: &mut Vec<Tuple>,
                      worklist: &mut Vec<StateId>,
                      delta: &mut Vec<Vec<Vec<StateId>>>|
     -> Result<StateId> {
        if let Some(&id) = index.get(&t) {
            return Ok(id);
        }
        if tuples.len() + 1 >= max_states {
            return Err(Error::BudgetExceeded {
                stage: "implication product",
                budget: max_states,
            });
        }
        let id = 1 + tuples.len() as StateId;
        index.insert(t, id);
        tuples.push(t);
        delta.push(vec![Vec::new(); alphabet.len()]);
        worklist.push(id);
        Ok(id)
    };

    // Start transitions: guess the first letter T of the sub-macro-path and
    // initial moves of both automata on it.
    for (li, &letter) in alphabet.iter().enumerate() {
        let mut succs = Vec::new();
        for t in letter.subsets() {
            if t.is_empty() {
                continue;
            }
            let Some(tli) = n1.letter_index(t) else { continue };
            for &q1_0 in &n1.initial {
                for &q1 in n1.successors(q1_0, tli) {
                    for &q2_0 in &n2.initial {
                        for &q2 in n2.successors(q2_0, tli) {
                            let id = intern(
                                (t, q1, q2, 1),
                                &mut index,
                                &mut tuples,
                                &mut worklist,
                                &mut delta,
                            )?;
                            succs.push(id);
                        }
                    }
                }
            }
        }
        succs.sort_unstable();
        succs.dedup();
        delta[start as usize][li] = succs;
    }

    while let Some(id) = worklist.pop() {
        let (t, q1, q2, flag) = tuples[(id - 1) as usize];
        for (li, &letter) in alphabet.iter().enumerate() {
            let mut succs = Vec::new();
            for t2 in letter.subsets() {
                if t2.is_empty() || !k.is_successor(t, t2) {
                    continue;
                }
                let Some(tli) = n1.letter_index(t2) else { continue };
                let flag2 = match flag {
                    1 if n1.accepting[q1 as usize] => 2,
                    2 if n2.accepting[q2 as usize] => 1,
                    f => f,
                };
                for &q1n in n1.successors(q1, tli) {
                    for &q2n in n2.successors(q2, tli) {
                        let sid = intern(
                            (t2, q1n, q2n, flag2),
                            &mut index,
                            &mut tuples,
                            &mut worklist,
                            &mut delta,
                        )?;
                        succs.push(sid);
                    }
                }
            }
            succs.sort_unstable();
            succs.dedup();
            delta[id as usize][li] = succs;
        }
    }

    let mut accepting = vec![false];
    accepting.extend(
        tuples
            .iter()
            .map(|&(_, _, q2, flag)| flag == 2 && n2.accepting[q2 as usize]),
    );
    let num = 1 + tuples.len() as u32;
    let nbw = Nbw::new(
        alphabet.to_vec(),
        num,
        vec![start],
        delta,
        accepting,
        "implication product",
        max_states,
    )?;
    Ok((nbw, tuples))
}
