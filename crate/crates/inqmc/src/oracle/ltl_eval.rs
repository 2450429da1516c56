use std::collections::HashMap;

use crate::formula::LtlFormula;
use crate::kripke::TraceLasso;

/// Evaluate a classical LTL formula on an ultimately periodic trace.
///
/// Propositions not present in `ap` never hold. Verdicts are memoized per
/// (subformula, lasso position); until/release walk the position orbit and
/// stop as soon as a position repeats, which is exact on a lasso.
pub fn eval_ltl_lasso(w: &TraceLasso, f: &LtlFormula, ap: &[String]) -> bool {
    let mut eval = LtlEval { w, ap, memo: HashMap::new() };
    eval.eval(f, 0)
}

struct LtlEval<'a> {
    w: &'a TraceLasso,
    ap: &'a [String],
    memo: HashMap<(*const LtlFormula, usize), bool>,
}

impl<'a> LtlEval<'a> {
    fn eval(&mut self, f: &LtlFormula, pos: usize) -> bool {
        let key = (f as *const LtlFormula, pos);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let v = match f {
            LtlFormula::True => true,
            LtlFormula::False => false,
            LtlFormula::Prop(p) => self.holds_at(p, pos),
            LtlFormula::NProp(p) => !self.holds_at(p, pos),
            LtlFormula::And(a, b) => self.eval(a, pos) && self.eval(b, pos),
            LtlFormula::Or(a, b) => self.eval(a, pos) || self.eval(b, pos),
            LtlFormula::Next(a) => self.eval(a, self.w.next_pos(pos)),
            LtlFormula::Until(a, b) => {
                let mut cur = pos;
                let mut visited = vec![false; self.w.total_len()];
                loop {
                    if visited[cur] {
                        break false;
                    }
                    visited[cur] = true;
                    if self.eval(b, cur) {
                        break true;
                    }
                    if !self.eval(a, cur) {
                        break false;
                    }
                    cur = self.w.next_pos(cur);
                }
            }
            LtlFormula::Release(a, b) => {
                let mut cur = pos;
                let mut visited = vec![false; self.w.total_len()];
                loop {
                    if visited[cur] {
                        break true;
                    }
                    visited[cur] = true;
                    if !self.eval(b, cur) {
                        break false;
                    }
                    if self.eval(a, cur) {
                        break true;
                    }
                    cur = self.w.next_pos(cur);
                }
            }
        };
        self.memo.insert(key, v);
        v
    }

    fn holds_at(&self, prop: &str, pos: usize) -> bool {
        match self.ap.iter().position(|p| p == prop) {
            Some(i) => self.w.at(pos).contains(i as u32),
            None => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{collapse_to_ltl, parse};
    use crate::kripke::PropSet;

    fn ap() -> Vec<String> {
        vec!["p".to_string(), "q".to_string()]
    }

    fn letters(spec: &[&[u32]]) -> Vec<PropSet> {
        spec.iter().map(|s| PropSet::from_indices(s.iter().copied())).collect()
    }

    fn eval(text: &str, w: &TraceLasso) -> bool {
        let f = collapse_to_ltl(&parse(text, None).unwrap());
        eval_ltl_lasso(w, &f, &ap())
    }

    #[test]
    fn globally_on_constant_trace() {
        let w = TraceLasso::periodic(letters(&[&[0]]));
        assert!(eval("G p", &w));
        assert!(eval("F p", &w));
        assert!(!eval("G q", &w));
    }

    #[test]
    fn eventually_in_the_stem_only() {
        // {} {p} {} {} ... : F p holds, G p does not.
        let w = TraceLasso::new(letters(&[&[], &[0]]), letters(&[&[]]));
        assert!(eval("F p", &w));
        assert!(!eval("G p", &w));
        assert!(!eval("F (p & X p)", &w));
        assert!(eval("X p", &w));
    }

    #[test]
    fn until_release_duality_on_samples() {
        let cases = [
            TraceLasso::periodic(letters(&[&[0], &[1]])),
            TraceLasso::new(letters(&[&[]]), letters(&[&[0, 1], &[]])),
            TraceLasso::periodic(letters(&[&[]])),
        ];
        for w in &cases {
            for text in ["p U q", "p R q", "G F p", "F G p", "X (p | q)"] {
                let pos = collapse_to_ltl(&parse(text, None).unwrap());
                let neg = collapse_to_ltl(&parse(&format!("!({text})"), None).unwrap());
                assert_ne!(
                    eval_ltl_lasso(w, &pos, &ap()),
                    eval_ltl_lasso(w, &neg, &ap()),
                    "{text} on {w:?}"
                );
            }
        }
    }

    #[test]
    fn gf_distinguishes_period_content() {
        // ({} {p})^w satisfies G F p; {p} {}^w does not.
        let w1 = TraceLasso::periodic(letters(&[&[], &[0]]));
        let w2 = TraceLasso::new(letters(&[&[0]]), letters(&[&[]]));
        assert!(eval("G F p", &w1));
        assert!(!eval("G F p", &w2));
    }
}
