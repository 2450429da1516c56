use std::collections::HashMap;

use super::haa::{Haa, Letter, StateId, Stratum, StratumKind};
use super::pbf::Pbf;
use crate::error::{Error, Result};
use crate::kripke::Lasso;

/// A nondeterministic Büchi word automaton over an explicit finite alphabet.
#[derive(Clone, Debug)]
pub struct Nbw<L: Letter> {
    pub alphabet: Vec<L>,
    letter_index: HashMap<L, usize>,
    pub num_states: u32,
    pub initial: Vec<StateId>,
    /// Successor sets, indexed `[state][letter index]`.
    pub delta: Vec<Vec<Vec<StateId>>>,
    pub accepting: Vec<bool>,
}

impl<L: Letter> Nbw<L> {
    pub fn new(
        alphabet: Vec<L>,
        num_states: u32,
        initial: Vec<StateId>,
        delta: Vec<Vec<Vec<StateId>>>,
        accepting: Vec<bool>,
        stage: &'static str,
        max_states: usize,
    ) -> Result<Self> {
        if num_states as usize > max_states {
            return Err(Error::BudgetExceeded { stage, budget: max_states });
        }
        let letter_index = alphabet.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        Ok(Nbw { alphabet, letter_index, num_states, initial, delta, accepting })
    }

    pub fn letter_index(&self, letter: L) -> Option<usize> {
        self.letter_index.get(&letter).copied()
    }

    pub fn successors(&self, q: StateId, letter_idx: usize) -> &[StateId] {
        &self.delta[q as usize][letter_idx]
    }

    /// Decide membership of an ultimately periodic word and, when accepted,
    /// return an accepting run lasso (state sequences for the stem and the
    /// repeating cycle).
    pub fn accepting_run_over(&self, w: &Lasso<L>) -> Option<(Vec<StateId>, Vec<StateId>)> {
        let total = w.total_len();
        let letters: Vec<usize> = (0..total)
            .map(|i| self.letter_index(w.at(i)))
            .collect::<Option<Vec<_>>>()?;
        let node = |q: StateId, pos: usize| q as usize * total + pos;
        let n = self.num_states as usize * total;
        // Forward reachability from the initial layer with parents.
        let mut parent: Vec<Option<usize>> = vec![None; n];
        let mut reached = vec![false; n];
        let mut queue = std::collections::VecDeque::new();
        for &q0 in &self.initial {
            let v = node(q0, 0);
            if !reached[v] {
                reached[v] = true;
                queue.push_back(v);
            }
        }
        let mut order = Vec::new();
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let (q, pos) = ((v / total) as StateId, v % total);
            let next = w.next_pos(pos);
            for &q2 in self.successors(q, letters[pos]) {
                let u = node(q2, next);
                if !reached[u] {
                    reached[u] = true;
                    parent[u] = Some(v);
                    queue.push_back(u);
                }
            }
        }
        // An accepted word needs a reachable accepting node that lies on a
        // cycle of the product.
        for &v in &order {
            let (q, pos) = ((v / total) as StateId, v % total);
            if !self.accepting[q as usize] || pos < w.stem.len() {
                continue;
            }
            if let Some(cycle) = self.cycle_through(v, total, &letters, w) {
                let mut stem = Vec::new();
                let mut cur = v;
                while let Some(p) = parent[cur] {
                    stem.push((cur / total) as StateId);
                    cur = p;
                }
                stem.push((cur / total) as StateId);
                stem.reverse();
                stem.pop(); // the cycle starts at v itself
                return Some((stem, cycle));
            }
        }
        None
    }

    /// A cycle of product nodes from `v` back to `v`, as automaton states.
    fn cycle_through(
        &self,
        v: usize,
        total: usize,
        letters: &[usize],
        w: &Lasso<L>,
    ) -> Option<Vec<StateId>> {
        let n = self.num_states as usize * total;
        let mut parent: Vec<Option<usize>> = vec![None; n];
        let mut reached = vec![false; n];
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(v);
        while let Some(x) = queue.pop_front() {
            let (q, pos) = ((x / total) as StateId, x % total);
            let next = w.next_pos(pos);
            for &q2 in self.successors(q, letters[pos]) {
                let u = q2 as usize * total + next;
                if u == v {
                    let mut cycle = vec![q2];
                    let mut cur = x;
                    loop {
                        cycle.push((cur / total) as StateId);
                        match parent[cur] {
                            Some(p) => cur = p,
                            None => break,
                        }
                    }
                    cycle.reverse();
                    cycle.pop(); // drop the repeated entry state
                    return Some(cycle);
                }
                if !reached[u] {
                    reached[u] = true;
                    parent[u] = Some(x);
                    queue.push_back(u);
                }
            }
        }
        None
    }

    pub fn accepts_lasso(&self, w: &Lasso<L>) -> bool {
        self.accepting_run_over(w).is_some()
    }

    /// Drop states that cannot take part in any accepting run: keep only
    /// states reachable from the initial set that can reach an accepting
    /// cycle. Preserves the language.
    pub fn trim(&self) -> Nbw<L> {
        let n = self.num_states as usize;
        let mut reach = vec![false; n];
        let mut stack: Vec<StateId> = self.initial.clone();
        for &q in &self.initial {
            reach[q as usize] = true;
        }
        while let Some(q) = stack.pop() {
            for row in &self.delta[q as usize] {
                for &t in row {
                    if !reach[t as usize] {
                        reach[t as usize] = true;
                        stack.push(t);
                    }
                }
            }
        }
        // States on an accepting cycle: accepting and reachable from themselves.
        let mut live_seed = vec![false; n];
        for q in 0..n as StateId {
            if !reach[q as usize] || !self.accepting[q as usize] {
                continue;
            }
            if self.reaches(q, q) {
                live_seed[q as usize] = true;
            }
        }
        // Live: can reach a seed.
        let mut live = vec![false; n];
        for q in 0..n as StateId {
            if reach[q as usize]
                && (live_seed[q as usize]
                    || (0..n as StateId)
                        .any(|t| live_seed[t as usize] && self.reaches(q, t)))
            {
                live[q as usize] = true;
            }
        }
        let mut remap = vec![u32::MAX; n];
        let mut kept = 0u32;
        for q in 0..n {
            if live[q] {
                remap[q] = kept;
                kept += 1;
            }
        }
        let delta = (0..n)
            .filter(|&q| live[q])
            .map(|q| {
                self.delta[q]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .filter(|&&t| live[t as usize])
                            .map(|&t| remap[t as usize])
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Nbw {
            alphabet: self.alphabet.clone(),
            letter_index: self.letter_index.clone(),
            num_states: kept,
            initial: self
                .initial
                .iter()
                .filter(|&&q| live[q as usize])
                .map(|&q| remap[q as usize])
                .collect(),
            delta,
            accepting: (0..n).filter(|&q| live[q]).map(|q| self.accepting[q]).collect(),
        }
    }

    fn reaches(&self, from: StateId, to: StateId) -> bool {
        // One or more steps.
        let n = self.num_states as usize;
        let mut seen = vec![false; n];
        let mut stack: Vec<StateId> = Vec::new();
        for row in &self.delta[from as usize] {
            for &t in row {
                if t == to {
                    return true;
                }
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    stack.push(t);
                }
            }
        }
        while let Some(q) = stack.pop() {
            for row in &self.delta[q as usize] {
                for &t in row {
                    if t == to {
                        return true;
                    }
                    if !seen[t as usize] {
                        seen[t as usize] = true;
                        stack.push(t);
                    }
                }
            }
        }
        false
    }

    /// View the automaton as an HAA with one Büchi stratum. A fresh initial
    /// state stands in for the initial set.
    pub fn to_haa(&self, stage: &'static str, max_states: usize) -> Result<Haa<L>> {
        let n = self.num_states;
        let init = n; // fresh
        let mut names: Vec<String> = (0..n).map(|q| format!("q{q}")).collect();
        names.push("init".to_string());
        let mut delta: Vec<Vec<Pbf>> = Vec::with_capacity(n as usize + 1);
        for q in 0..n {
            delta.push(
                (0..self.alphabet.len())
                    .map(|l| Pbf::or_all(self.successors(q, l).iter().map(|&t| Pbf::atom(t))))
                    .collect(),
            );
        }
        delta.push(
            (0..self.alphabet.len())
                .map(|l| {
                    Pbf::or_all(self.initial.iter().flat_map(|&q0| {
                        self.successors(q0, l).iter().map(|&t| Pbf::atom(t))
                    }))
                })
                .collect(),
        );
        let accepting = (0..n).filter(|&q| self.accepting[q as usize]).collect();
        let strata = vec![Stratum {
            states: (0..=n).collect(),
            accepting,
            kind: StratumKind::Buchi,
        }];
        Haa::new(self.alphabet.clone(), names, init, delta, strata, stage, max_states)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Letters are plain u8 for these tests.
    fn two_letter_gf() -> Nbw<u8> {
        // Accepts words with infinitely many letter-1: classic two-state GF.
        Nbw::new(
            vec![0, 1],
            2,
            vec![0],
            vec![
                vec![vec![0], vec![0, 1]], // from q0 on 0 / on 1
                vec![vec![0], vec![0, 1]], // from q1
            ],
            vec![false, true],
            "test",
            1000,
        )
        .unwrap()
    }

    #[test]
    fn gf_membership_on_lassos() {
        let n = two_letter_gf();
        assert!(n.accepts_lasso(&Lasso::periodic(vec![1u8])));
        assert!(n.accepts_lasso(&Lasso::periodic(vec![0u8, 1u8])));
        assert!(!n.accepts_lasso(&Lasso::new(vec![1u8], vec![0u8])));
    }

    #[test]
    fn accepting_run_is_a_real_run() {
        let n = two_letter_gf();
        let w = Lasso::new(vec![0u8], vec![0u8, 1u8]);
        let (stem, cycle) = n.accepting_run_over(&w).unwrap();
        assert!(!cycle.is_empty());
        // The run has one state per stem letter before entering the cycle,
        // and the cycle length is a multiple of the period.
        assert_eq!(cycle.len() % w.period.len(), 0);
        let _ = stem;
    }

    #[test]
    fn trim_preserves_membership() {
        // Add an unreachable and a dead state around the GF automaton.
        let n = Nbw::new(
            vec![0u8, 1u8],
            4,
            vec![0],
            vec![
                vec![vec![0, 3], vec![0, 1, 3]],
                vec![vec![0], vec![0, 1]],
                vec![vec![2], vec![2]], // unreachable
                vec![vec![], vec![]],   // dead
            ],
            vec![false, true, true, false],
            "test",
            1000,
        )
        .unwrap();
        let t = n.trim();
        assert_eq!(t.num_states, 2);
        for w in [
            Lasso::periodic(vec![1u8]),
            Lasso::periodic(vec![0u8]),
            Lasso::new(vec![1u8], vec![0u8]),
            Lasso::periodic(vec![0u8, 1u8]),
        ] {
            assert_eq!(n.accepts_lasso(&w), t.accepts_lasso(&w), "{w:?}");
        }
    }
}
