use super::haa::Haa;
use super::ltl_haa::ltl_to_nbw;
use super::nbw::Nbw;
use crate::error::Result;
use crate::formula::{collapse_to_ltl, Formula};
use crate::kripke::{KripkeStructure, MacroState};

/// HAA accepting (within the macro-paths of `k`) exactly the macro-paths
/// that satisfy `!body`.
///
/// A macro-path satisfies `!body` iff no path threading through it satisfies
/// the classical reading of `body`. So: build a Büchi automaton for the
/// collapsed body over trace letters, lift it to macro-state letters by
/// guessing a path (a state component walks edges inside the letters while
/// the word automaton reads its labels), and dualize. The result has one
/// coBüchi stratum.
pub fn build_negation_haa(
    k: &KripkeStructure,
    body: &Formula,
    alphabet: &[MacroState],
    max_states: usize,
) -> Result<Haa<MacroState>> {
    let lifted = negation_witness_nbw(k, body, alphabet, max_states)?;
    Ok(lifted.trim().to_haa("negation automaton", max_states)?.dual())
}

/// The pre-dualization automaton: accepts the macro-lassos containing a path
/// whose trace satisfies the collapsed body. Its accepting runs are the
/// counterexamples to the negation.
pub(crate) fn negation_witness_nbw(
    k: &KripkeStructure,
    body: &Formula,
    alphabet: &[MacroState],
    max_states: usize,
) -> Result<Nbw<MacroState>> {
    let ltl = collapse_to_ltl(body);
    // Only letters that actually occur as state labels matter to the lift.
    let mut trace_letters: Vec<_> = (0..k.num_states()).map(|s| k.label(s)).collect();
    trace_letters.sort_unstable();
    trace_letters.dedup();
    let nbw = ltl_to_nbw(&ltl, trace_letters, k.ap(), max_states)?;
    lift_to_macro_letters(k, &nbw, alphabet, max_states)
}

/// A violating path of `w` for `!body`, as a singleton macro-lasso.
pub(crate) fn negation_counterexample(
    k: &KripkeStructure,
    body: &Formula,
    alphabet: &[MacroState],
    w: &crate::kripke::MacroLasso,
    max_states: usize,
) -> Result<Option<crate::kripke::MacroLasso>> {
    let lifted = negation_witness_nbw(k, body, alphabet, max_states)?;
    let Some((stem, cycle)) = lifted.accepting_run_over(w) else {
        return Ok(None);
    };
    let states = k.num_states();
    let fresh = states;
    let project = |ids: &[u32]| -> Vec<MacroState> {
        ids.iter()
            .map(|&id| id % (states + 1))
            .filter(|&s| s != fresh)
            .map(MacroState::singleton)
            .collect()
    };
    let stem_letters = project(&stem);
    let cycle_letters = project(&cycle);
    if cycle_letters.is_empty() {
        return Ok(None);
    }
    Ok(Some(crate::kripke::MacroLasso::new(stem_letters, cycle_letters).canonical()))
}

/// The path-guessing lift: accepts a macro-lasso iff some path through it
/// induces a trace accepted by `nbw`.
fn lift_to_macro_letters(
    k: &KripkeStructure,
    nbw: &Nbw<PropSetLetter>,
    alphabet: &[MacroState],
    max_states: usize,
) -> Result<Nbw<MacroState>> {
    let n = nbw.num_states;
    let states = k.num_states();
    // State layout: (q, s) -> q*(states+1) + s, and (q, fresh) at s = states.
    let fresh = states;
    let id = |q: u32, s: u32| q * (states + 1) + s;
    let num = n * (states + 1);

    let mut delta: Vec<Vec<Vec<u32>>> = vec![vec![Vec::new(); alphabet.len()]; num as usize];
    for q in 0..n {
        for s in 0..=states {
            let from = id(q, s);
            for (li, &letter) in alphabet.iter().enumerate() {
                let mut succs = Vec::new();
                // Pick the next path state inside the letter; at the fresh
                // component any state of the letter starts the path.
                let candidates = if s == fresh {
                    letter
                } else {
                    k.successors(s).intersect(letter)
                };
                for s2 in candidates.iter() {
                    let label = k.label(s2);
                    if let Some(tli) = nbw.letter_index(label) {
                        for &q2 in nbw.successors(q, tli) {
                            succs.push(id(q2, s2));
                        }
                    }
                }
                succs.sort_unstable();
                succs.dedup();
                delta[from as usize][li] = succs;
            }
        }
    }

    let initial = nbw.initial.iter().map(|&q0| id(q0, fresh)).collect();
    let mut accepting = vec![false; num as usize];
    for q in 0..n {
        if nbw.accepting[q as usize] {
            for s in 0..states {
                accepting[id(q, s) as usize] = true;
            }
        }
    }
    Nbw::new(
        alphabet.to_vec(),
        num,
        initial,
        delta,
        accepting,
        "negation lift",
        max_states,
    )
}

type PropSetLetter = crate::kripke::PropSet;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::one_letter::haa_membership;
    use crate::formula::parse;
    use crate::kripke::MacroLasso;

    fn k_with_p() -> KripkeStructure {
        KripkeStructure::build(
            vec!["p".into()],
            vec![("s0".into(), vec!["p".into()]), ("s1".into(), vec![])],
            vec!["s0".into()],
            vec![
                ("s0".into(), "s0".into()),
                ("s0".into(), "s1".into()),
                ("s1".into(), "s1".into()),
            ],
        )
        .unwrap()
    }

    fn full_alphabet(k: &KripkeStructure) -> Vec<MacroState> {
        k.all_states().subsets().collect()
    }

    #[test]
    fn negated_atom_rejects_p_states() {
        let k = k_with_p();
        let a = build_negation_haa(
            &k,
            &parse("p", Some(k.ap())).unwrap(),
            &full_alphabet(&k),
            100_000,
        )
        .unwrap();
        let s0 = MacroState::singleton(0);
        let s1 = MacroState::singleton(1);
        // {s0}^w has the path s0^w whose trace satisfies p.
        assert!(!haa_membership(&a, &MacroLasso::periodic(vec![s0])).unwrap());
        assert!(haa_membership(&a, &MacroLasso::periodic(vec![s1])).unwrap());
        // The empty macro-path has no paths at all, so it satisfies !p.
        assert!(haa_membership(&a, &MacroLasso::periodic(vec![MacroState::EMPTY])).unwrap());
    }

    #[test]
    fn negated_eventually_requires_p_unreachable_inside() {
        let k = k_with_p();
        let a = build_negation_haa(
            &k,
            &parse("F p", Some(k.ap())).unwrap(),
            &full_alphabet(&k),
            100_000,
        )
        .unwrap();
        let s0 = MacroState::singleton(0);
        let s1 = MacroState::singleton(1);
        let both = s0.union(s1);
        // Any macro-path containing s0 somewhere admits a path visiting p.
        assert!(!haa_membership(&a, &MacroLasso::periodic(vec![s0])).unwrap());
        assert!(!haa_membership(&a, &MacroLasso::new(vec![both], vec![s1])).unwrap());
        // Only-s1 macro-paths never see p.
        assert!(haa_membership(&a, &MacroLasso::periodic(vec![s1])).unwrap());
    }
}
