use std::collections::HashMap;

use super::dealternate::haa_to_nbw;
use super::haa::{Haa, Stratum, StratumKind};
use super::nbw::Nbw;
use super::pbf::Pbf;
use crate::error::Result;
use crate::formula::LtlFormula;
use crate::kripke::PropSet;

/// Build an alternating automaton for a classical LTL formula over the given
/// trace letters, with the usual one-state-per-subformula transition table.
/// Each subformula is its own singleton stratum: until-states form Büchi
/// strata with empty accepting sets (a run must not get trapped fulfilling
/// nothing), release-states coBüchi strata, everything else transient.
pub fn ltl_to_haa(
    f: &LtlFormula,
    alphabet: Vec<PropSet>,
    ap: &[String],
    max_states: usize,
) -> Result<Haa<PropSet>> {
    // Distinct subformulas, larger first so that strata respect the
    // partial-order requirement (transitions only move to subformulas).
    let mut subs: Vec<&LtlFormula> = Vec::new();
    collect(f, &mut subs);
    subs.sort_by_key(|g| std::cmp::Reverse(g.size()));
    let index: HashMap<&LtlFormula, u32> =
        subs.iter().enumerate().map(|(i, &g)| (g, i as u32)).collect();

    let prop_bit = |name: &str| -> Option<u32> {
        ap.iter().position(|p| p == name).map(|i| i as u32)
    };

    let mut delta: Vec<Vec<Pbf>> = vec![Vec::new(); subs.len()];
    for (qi, &g) in subs.iter().enumerate() {
        for &letter in &alphabet {
            let f = transition(g, letter, &index, &prop_bit);
            delta[qi].push(f);
        }
    }

    let strata = subs
        .iter()
        .enumerate()
        .map(|(qi, &g)| Stratum {
            states: vec![qi as u32],
            accepting: vec![],
            kind: match g {
                LtlFormula::Until(..) => StratumKind::Buchi,
                LtlFormula::Release(..) => StratumKind::CoBuchi,
                _ => StratumKind::Transient,
            },
        })
        .collect();

    let names = subs.iter().map(|g| g.to_string()).collect();
    Haa::new(alphabet, names, index[f], delta, strata, "ltl automaton", max_states)
}

/// Büchi automaton for the trace language of a classical LTL formula.
pub fn ltl_to_nbw(
    f: &LtlFormula,
    alphabet: Vec<PropSet>,
    ap: &[String],
    max_states: usize,
) -> Result<Nbw<PropSet>> {
    let haa = ltl_to_haa(f, alphabet, ap, max_states)?;
    haa_to_nbw(&haa, max_states)
}

fn collect<'a>(f: &'a LtlFormula, out: &mut Vec<&'a LtlFormula>) {
    if out.contains(&f) {
        return;
    }
    out.push(f);
    match f {
        LtlFormula::True | LtlFormula::False | LtlFormula::Prop(_) | LtlFormula::NProp(_) => {}
        LtlFormula::Next(a) => collect(a, out),
        LtlFormula::And(a, b)
        | LtlFormula::Or(a, b)
        | LtlFormula::Until(a, b)
        | LtlFormula::Release(a, b) => {
            collect(a, out);
            collect(b, out);
        }
    }
}

fn transition(
    g: &LtlFormula,
    letter: PropSet,
    index: &HashMap<&LtlFormula, u32>,
    prop_bit: &impl Fn(&str) -> Option<u32>,
) -> Pbf {
    match g {
        LtlFormula::True => Pbf::tt(),
        LtlFormula::False => Pbf::ff(),
        LtlFormula::Prop(p) => {
            Pbf::when(prop_bit(p).is_some_and(|i| letter.contains(i)))
        }
        LtlFormula::NProp(p) => {
            Pbf::when(!prop_bit(p).is_some_and(|i| letter.contains(i)))
        }
        LtlFormula::And(a, b) => {
            transition(a, letter, index, prop_bit).and(&transition(b, letter, index, prop_bit))
        }
        LtlFormula::Or(a, b) => {
            transition(a, letter, index, prop_bit).or(&transition(b, letter, index, prop_bit))
        }
        LtlFormula::Next(a) => Pbf::atom(index[a.as_ref()]),
        LtlFormula::Until(a, b) => transition(b, letter, index, prop_bit).or(
            &transition(a, letter, index, prop_bit).and(&Pbf::atom(index[g])),
        ),
        LtlFormula::Release(a, b) => transition(b, letter, index, prop_bit).and(
            &transition(a, letter, index, prop_bit).or(&Pbf::atom(index[g])),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::one_letter::haa_membership;
    use crate::formula::{collapse_to_ltl, parse};
    use crate::kripke::TraceLasso;

    fn ap() -> Vec<String> {
        vec!["p".to_string(), "q".to_string()]
    }

    fn full_alphabet() -> Vec<PropSet> {
        (0..4u64).map(PropSet).collect()
    }

    fn nbw(text: &str) -> Nbw<PropSet> {
        let f = collapse_to_ltl(&parse(text, None).unwrap());
        ltl_to_nbw(&f, full_alphabet(), &ap(), 100_000).unwrap()
    }

    #[test]
    fn atomic_automaton_checks_first_letter() {
        let n = nbw("p");
        let w_p = TraceLasso::new(vec![PropSet(0b01)], vec![PropSet(0)]);
        let w_np = TraceLasso::periodic(vec![PropSet(0)]);
        assert!(n.accepts_lasso(&w_p));
        assert!(!n.accepts_lasso(&w_np));
    }

    #[test]
    fn eventually_and_globally() {
        let n = nbw("F p");
        assert!(n.accepts_lasso(&TraceLasso::new(vec![PropSet(0), PropSet(1)], vec![PropSet(0)])));
        assert!(!n.accepts_lasso(&TraceLasso::periodic(vec![PropSet(0)])));
        let n = nbw("G p");
        assert!(n.accepts_lasso(&TraceLasso::periodic(vec![PropSet(1)])));
        assert!(!n.accepts_lasso(&TraceLasso::new(vec![PropSet(1)], vec![PropSet(0), PropSet(1)])));
    }

    #[test]
    fn gf_accepts_exactly_recurrent_p() {
        let n = nbw("G F p");
        assert!(n.accepts_lasso(&TraceLasso::periodic(vec![PropSet(0), PropSet(1)])));
        assert!(!n.accepts_lasso(&TraceLasso::new(vec![PropSet(1)], vec![PropSet(0)])));
    }

    #[test]
    fn haa_membership_matches_nbw_language() {
        // The alternating automaton and its dealternation agree on a sample
        // of lassos, for several formulas.
        let texts = ["p U q", "p R q", "X X p", "(F p) & (F q)", "G (p | q)", "F G p"];
        let lassos: Vec<TraceLasso> = vec![
            TraceLasso::periodic(vec![PropSet(0)]),
            TraceLasso::periodic(vec![PropSet(1)]),
            TraceLasso::periodic(vec![PropSet(2)]),
            TraceLasso::periodic(vec![PropSet(3)]),
            TraceLasso::new(vec![PropSet(1)], vec![PropSet(2)]),
            TraceLasso::new(vec![PropSet(0), PropSet(2)], vec![PropSet(1), PropSet(0)]),
            TraceLasso::periodic(vec![PropSet(1), PropSet(2)]),
            TraceLasso::new(vec![PropSet(3), PropSet(0)], vec![PropSet(0), PropSet(2)]),
        ];
        for text in texts {
            let f = collapse_to_ltl(&parse(text, None).unwrap());
            let haa = ltl_to_haa(&f, full_alphabet(), &ap(), 100_000).unwrap();
            let nbw = haa_to_nbw(&haa, 100_000).unwrap();
            for w in &lassos {
                assert_eq!(
                    haa_membership(&haa, w).unwrap(),
                    nbw.accepts_lasso(w),
                    "{text} on {w:?}"
                );
            }
        }
    }

    #[test]
    fn ltl_nbw_agrees_with_direct_evaluation() {
        use crate::oracle::eval_ltl_lasso;
        let texts = [
            "p", "!p", "X p", "F p", "G p", "p U q", "p R q", "G F p", "F G q",
            "(p U q) | G p", "F (p & X q)",
        ];
        let lassos: Vec<TraceLasso> = vec![
            TraceLasso::periodic(vec![PropSet(0)]),
            TraceLasso::periodic(vec![PropSet(1)]),
            TraceLasso::periodic(vec![PropSet(3)]),
            TraceLasso::new(vec![PropSet(0)], vec![PropSet(1)]),
            TraceLasso::new(vec![PropSet(1), PropSet(0)], vec![PropSet(2), PropSet(1)]),
            TraceLasso::new(vec![PropSet(2)], vec![PropSet(0), PropSet(3)]),
        ];
        for text in texts {
            let f = collapse_to_ltl(&parse(text, None).unwrap());
            let n = ltl_to_nbw(&f, full_alphabet(), &ap(), 100_000).unwrap();
            for w in &lassos {
                assert_eq!(
                    n.accepts_lasso(w),
                    eval_ltl_lasso(w, &f, &ap()),
                    "{text} on {w:?}"
                );
            }
        }
    }
}
