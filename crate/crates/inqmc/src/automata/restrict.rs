use super::haa::{Haa, Stratum, StratumKind};
use super::pbf::Pbf;
use crate::error::Result;
use crate::kripke::{KripkeStructure, MacroState};

/// Intersect an HAA over macro-state letters with the set of macro-paths of
/// the structure.
///
/// A deterministic safety monitor runs conjunctively alongside the original
/// automaton: it remembers the previous letter and fails unless each next
/// letter is a macro-state successor of it. The monitor contributes one
/// coBüchi stratum with no accepting states (pure safety) at the end of the
/// order, plus a fresh transient initial stratum at the front, so the depth
/// grows by two.
pub fn restrict_to_macro_paths(
    k: &KripkeStructure,
    a: &Haa<MacroState>,
    max_states: usize,
) -> Result<Haa<MacroState>> {
    let alphabet = a.alphabet().to_vec();
    let num_letters = alphabet.len();
    let n = a.num_states() as u32;
    // Layout: 0 = fresh initial, 1..=n original states, n+1.. monitor states
    // (one per alphabet letter).
    let init = 0u32;
    let shift = |q: u32| q + 1;
    let monitor = |letter_idx: usize| n + 1 + letter_idx as u32;

    let mut names = vec!["init".to_string()];
    names.extend((0..n).map(|q| a.name(q).to_string()));
    names.extend(alphabet.iter().map(|l| format!("after {l:?}")));

    let mut delta: Vec<Vec<Pbf>> = Vec::with_capacity(names.len());
    delta.push(
        (0..num_letters)
            .map(|l| a.delta(a.initial(), l).rename(shift).and(&Pbf::atom(monitor(l))))
            .collect(),
    );
    for q in 0..n {
        delta.push((0..num_letters).map(|l| a.delta(q, l).rename(shift)).collect());
    }
    for (i, &prev) in alphabet.iter().enumerate() {
        let _ = i;
        delta.push(
            (0..num_letters)
                .map(|l| {
                    if k.is_successor(prev, alphabet[l]) {
                        Pbf::atom(monitor(l))
                    } else {
                        Pbf::ff()
                    }
                })
                .collect(),
        );
    }

    let mut strata = vec![Stratum {
        states: vec![init],
        accepting: vec![],
        kind: StratumKind::Transient,
    }];
    strata.extend(a.strata().iter().map(|s| Stratum {
        states: s.states.iter().map(|&q| shift(q)).collect(),
        accepting: s.accepting.iter().map(|&q| shift(q)).collect(),
        kind: s.kind,
    }));
    strata.push(Stratum {
        states: (0..num_letters).map(monitor).collect(),
        accepting: vec![],
        kind: StratumKind::CoBuchi,
    });

    Haa::new(alphabet, names, init, delta, strata, "macro-path restriction", max_states)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::one_letter::haa_membership;
    use crate::automata::nbw::Nbw;
    use crate::kripke::MacroLasso;

    fn no_self_loop_pair() -> KripkeStructure {
        // s0 <-> s1 without self loops.
        KripkeStructure::build(
            vec![],
            vec![("s0".into(), vec![]), ("s1".into(), vec![])],
            vec!["s0".into()],
            vec![("s0".into(), "s1".into()), ("s1".into(), "s0".into())],
        )
        .unwrap()
    }

    fn universal_haa(alphabet: Vec<MacroState>) -> Haa<MacroState> {
        // Accepts every word: one-state NBW looping over all letters.
        let delta = vec![vec![vec![0]; alphabet.len()]];
        Nbw::new(alphabet, 1, vec![0], delta, vec![true], "test", 100)
            .unwrap()
            .to_haa("test", 100)
            .unwrap()
    }

    #[test]
    fn restriction_filters_non_macro_paths() {
        let k = no_self_loop_pair();
        let alphabet: Vec<MacroState> = k.all_states().subsets().collect();
        let a = universal_haa(alphabet);
        let restricted = restrict_to_macro_paths(&k, &a, 10_000).unwrap();
        let s0 = MacroState::singleton(0);
        let s1 = MacroState::singleton(1);
        // (s0 s0)^w is not a macro-path here (no self loop), (s0 s1)^w is.
        assert!(!haa_membership(&restricted, &MacroLasso::periodic(vec![s0])).unwrap());
        assert!(haa_membership(&restricted, &MacroLasso::periodic(vec![s0, s1])).unwrap());
        // The all-empty lasso is a macro-path.
        assert!(haa_membership(&restricted, &MacroLasso::periodic(vec![MacroState::EMPTY]))
            .unwrap());
        // Depth grows by exactly two.
        assert_eq!(restricted.depth(), a.depth() + 2);
    }

    #[test]
    fn restriction_keeps_rho0_verdict() {
        let k = no_self_loop_pair();
        let alphabet: Vec<MacroState> = k.all_states().subsets().collect();
        let a = universal_haa(alphabet);
        let restricted = restrict_to_macro_paths(&k, &a, 10_000).unwrap();
        let rho0 = k.initial_macro_lasso();
        assert!(haa_membership(&a, &rho0).unwrap());
        assert!(haa_membership(&restricted, &rho0).unwrap());
    }
}
