use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::formula::{Formula, FormulaKind};
use crate::kripke::{KripkeStructure, MacroLasso, MacroState};

/// Verdict of the bounded macro-path evaluator.
#[derive(Clone, Debug)]
pub struct BoundedVerdict {
    pub holds: bool,
    /// True when some implication was decided by bounded enumeration, so the
    /// verdict is only exact if the bound dominates the corresponding
    /// product-automaton size. Positive formulas are always exact.
    pub advisory: bool,
    /// Smallest countering sub-macro-lasso found, when the verdict is false
    /// and a violated implication produced one.
    pub witness: Option<MacroLasso>,
}

/// Direct recursive evaluation of the macro-path semantics on a lasso.
///
/// The implication clause enumerates nonempty sub-macro-lassos of the
/// current suffix in order of increasing stem-plus-period size, up to
/// `bound`, and additionally always tests the suffix itself. Negated atoms
/// are decided directly without enumeration, as is every connective of the
/// positive fragment.
pub fn eval_macro_lasso_bounded(
    k: &KripkeStructure,
    rho: &MacroLasso,
    f: &Formula,
    bound: usize,
) -> Result<BoundedVerdict> {
    k.validate_macro_lasso(rho)?;
    let unknown: Vec<String> = f
        .atoms()
        .into_iter()
        .filter(|a| k.prop_index(a).is_none())
        .map(|a| a.to_string())
        .collect();
    if !unknown.is_empty() {
        return Err(Error::UnknownAtoms(unknown));
    }
    let mut eval = MacroEval {
        k,
        bound,
        advisory: false,
        witness: None,
        word_memo: HashMap::new(),
    };
    let holds = eval.eval_on(rho, f);
    Ok(BoundedVerdict {
        holds,
        advisory: eval.advisory,
        witness: if holds { None } else { eval.witness },
    })
}

struct MacroEval<'a> {
    k: &'a KripkeStructure,
    bound: usize,
    advisory: bool,
    witness: Option<MacroLasso>,
    /// Verdicts per (canonical lasso, subformula) at position 0, shared
    /// across the enumeration to collapse duplicate candidate words.
    word_memo: HashMap<(MacroLasso, *const Formula), bool>,
}

impl<'a> MacroEval<'a> {
    fn eval_on(&mut self, rho: &MacroLasso, f: &Formula) -> bool {
        let canon = rho.canonical();
        let key = (canon.clone(), f as *const Formula);
        if let Some(&v) = self.word_memo.get(&key) {
            return v;
        }
        let mut memo = HashMap::new();
        let v = self.eval(&canon, f, 0, &mut memo);
        self.word_memo.insert(key, v);
        v
    }

    fn eval(
        &mut self,
        rho: &MacroLasso,
        f: &Formula,
        pos: usize,
        memo: &mut HashMap<(*const Formula, usize), bool>,
    ) -> bool {
        let key = (f as *const Formula, pos);
        if let Some(&v) = memo.get(&key) {
            return v;
        }
        let v = match &f.kind {
            FormulaKind::Bot => rho.at(pos).is_empty(),
            FormulaKind::Top => true,
            FormulaKind::Atom(p) => {
                let i = self.k.prop_index(p).unwrap();
                rho.at(pos).iter().all(|s| self.k.label(s).contains(i))
            }
            // Negated atom: no sub-path quantification needed, every
            // nonempty sub-path can isolate each state of the first letter.
            FormulaKind::Impl(lhs, rhs)
                if matches!(rhs.kind, FormulaKind::Bot)
                    && matches!(lhs.kind, FormulaKind::Atom(_)) =>
            {
                let FormulaKind::Atom(p) = &lhs.kind else { unreachable!() };
                let i = self.k.prop_index(p).unwrap();
                rho.at(pos).iter().all(|s| !self.k.label(s).contains(i))
            }
            FormulaKind::BDis(a, b) => {
                self.eval(rho, a, pos, memo) || self.eval(rho, b, pos, memo)
            }
            FormulaKind::Conj(a, b) => {
                self.eval(rho, a, pos, memo) && self.eval(rho, b, pos, memo)
            }
            FormulaKind::Impl(a, b) => self.eval_implication(rho, pos, a, b),
            FormulaKind::Next(a) => {
                let next = rho.next_pos(pos);
                self.eval(rho, a, next, memo)
            }
            FormulaKind::Until(a, b) => {
                let mut cur = pos;
                let mut visited = vec![false; rho.total_len()];
                loop {
                    if visited[cur] {
                        break false;
                    }
                    visited[cur] = true;
                    if self.eval(rho, b, cur, memo) {
                        break true;
                    }
                    if !self.eval(rho, a, cur, memo) {
                        break false;
                    }
                    cur = rho.next_pos(cur);
                }
            }
            FormulaKind::Release(a, b) => {
                let mut cur = pos;
                let mut visited = vec![false; rho.total_len()];
                loop {
                    if visited[cur] {
                        break true;
                    }
                    visited[cur] = true;
                    if !self.eval(rho, b, cur, memo) {
                        break false;
                    }
                    if self.eval(rho, a, cur, memo) {
                        break true;
                    }
                    cur = rho.next_pos(cur);
                }
            }
        };
        memo.insert(key, v);
        v
    }

    fn eval_implication(
        &mut self,
        rho: &MacroLasso,
        pos: usize,
        lhs: &Formula,
        rhs: &Formula,
    ) -> bool {
        self.advisory = true;
        let suffix = rho.suffix(pos);
        // The suffix itself is a sub-macro-path regardless of its size.
        if self.eval_on(&suffix, lhs) && !self.eval_on(&suffix, rhs) {
            self.note_witness(suffix);
            return false;
        }
        // The empty sub-macro-path satisfies both sides, so only nonempty
        // candidates can refute the implication.
        let mut emitted = std::collections::HashSet::new();
        for total in 1..=self.bound {
            for stem_len in 0..total {
                let period_len = total - stem_len;
                let mut prefix = Vec::with_capacity(total);
                if self.search_candidates(
                    &suffix,
                    stem_len,
                    period_len,
                    &mut prefix,
                    &mut emitted,
                    lhs,
                    rhs,
                ) {
                    return false;
                }
            }
        }
        true
    }

    /// DFS over candidate letter sequences; returns true when a
    /// counterexample was found.
    #[allow(clippy::too_many_arguments)]
    fn search_candidates(
        &mut self,
        suffix: &MacroLasso,
        stem_len: usize,
        period_len: usize,
        prefix: &mut Vec<MacroState>,
        emitted: &mut std::collections::HashSet<MacroLasso>,
        lhs: &Formula,
        rhs: &Formula,
    ) -> bool {
        let total = stem_len + period_len;
        if prefix.len() == total {
            // Close the lasso and check it really is a sub-macro-path.
            if !self.k.is_successor(prefix[total - 1], prefix[stem_len]) {
                return false;
            }
            let cand = MacroLasso::new(
                prefix[..stem_len].to_vec(),
                prefix[stem_len..].to_vec(),
            );
            if !cand.is_sub_lasso_of(suffix) {
                return false;
            }
            let canon = cand.canonical();
            if !emitted.insert(canon.clone()) {
                return false;
            }
            if self.eval_on(&canon, lhs) && !self.eval_on(&canon, rhs) {
                self.note_witness(canon);
                return true;
            }
            return false;
        }
        let here = suffix.at(prefix.len());
        for t in here.subsets() {
            if t.is_empty() {
                continue;
            }
            if let Some(&prev) = prefix.last() {
                if !self.k.is_successor(prev, t) {
                    continue;
                }
            }
            prefix.push(t);
            let found = self.search_candidates(
                suffix, stem_len, period_len, prefix, emitted, lhs, rhs,
            );
            prefix.pop();
            if found {
                return true;
            }
        }
        false
    }

    fn note_witness(&mut self, w: MacroLasso) {
        if self.witness.is_none() {
            self.witness = Some(w);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn eval(k: &KripkeStructure, rho: &MacroLasso, text: &str, bound: usize) -> BoundedVerdict {
        eval_macro_lasso_bounded(k, rho, &parse(text, Some(k.ap())).unwrap(), bound).unwrap()
    }

    fn two_state_total() -> KripkeStructure {
        KripkeStructure::build(
            vec!["p".into()],
            vec![("s0".into(), vec![]), ("s1".into(), vec!["p".into()])],
            vec!["s0".into()],
            vec![
                ("s0".into(), "s0".into()),
                ("s0".into(), "s1".into()),
                ("s1".into(), "s0".into()),
                ("s1".into(), "s1".into()),
            ],
        )
        .unwrap()
    }

    #[test]
    fn empty_lasso_satisfies_everything() {
        let k = two_state_total();
        let empty = MacroLasso::periodic(vec![MacroState::EMPTY]);
        for text in ["bot", "p", "!p", "G p", "(p | !p) -> G p"] {
            let v = eval(&k, &empty, text, 4);
            assert!(v.holds, "{text}");
        }
    }

    #[test]
    fn positive_formulas_are_exact_without_enumeration() {
        let k = two_state_total();
        let rho = k.initial_macro_lasso();
        let v = eval(&k, &rho, "X (p | !p)", 1);
        assert!(!v.holds); // position 1 is {s0,s1}: neither all-p nor all-not-p
        assert!(!v.advisory);
        let v = eval(&k, &rho, "!p", 1);
        assert!(v.holds); // rho(0) = {s0}, not labelled p
        assert!(!v.advisory);
    }

    #[test]
    fn implication_finds_small_counterexamples() {
        let k = two_state_total();
        let rho = k.initial_macro_lasso();
        // A (F p): every nonempty sub-path eventually has uniform p. The
        // sub-path sticking to s0 forever refutes it.
        let v = eval(&k, &rho, "top -> F p", 6);
        assert!(!v.holds);
        assert!(v.advisory);
        let w = v.witness.expect("counterexample witness");
        assert!(w.is_sub_lasso_of(&rho));
        // while A (F (p | !p)) holds: every sub-path position is uniform or not...
        let v = eval(&k, &rho, "top -> F (p | !p)", 6);
        assert!(v.holds);
    }

    #[test]
    fn response_property_on_deterministic_chains() {
        // Misaligned responses: both initial states request at time 0 but
        // answer at different delays.
        let k = KripkeStructure::build(
            vec!["q".into(), "p".into()],
            vec![
                ("a0".into(), vec!["q".into()]),
                ("a1".into(), vec!["p".into()]),
                ("a2".into(), vec![]),
                ("b0".into(), vec!["q".into()]),
                ("b1".into(), vec![]),
                ("b2".into(), vec!["p".into()]),
            ],
            vec!["a0".into(), "b0".into()],
            vec![
                ("a0".into(), "a1".into()),
                ("a1".into(), "a2".into()),
                ("a2".into(), "a2".into()),
                ("b0".into(), "b1".into()),
                ("b1".into(), "b2".into()),
                ("b2".into(), "b2".into()),
            ],
        )
        .unwrap();
        let rho = k.initial_macro_lasso();
        let v = eval(&k, &rho, "G (q -> F p)", 8);
        assert!(!v.holds);
        assert!(v.witness.is_some());
    }
}
