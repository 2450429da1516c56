use std::collections::HashMap;
use std::hash::Hash;

use super::pbf::Pbf;
use crate::error::{Error, Result};

/// Alphabet letters are small copyable values (macro-states or proposition
/// sets in this crate).
pub trait Letter: Copy + Eq + Hash + std::fmt::Debug {}
impl<T: Copy + Eq + Hash + std::fmt::Debug> Letter for T {}

pub type StateId = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum StratumKind {
    Transient,
    Buchi,
    CoBuchi,
}

/// One component of the ordered acceptance partition.
#[derive(Clone, Debug)]
pub struct Stratum {
    pub states: Vec<StateId>,
    pub accepting: Vec<StateId>,
    pub kind: StratumKind,
}

/// A hesitant alternating word automaton.
///
/// States are partitioned into ordered strata; transitions from a stratum
/// may only mention states of the same or later strata, and within a stratum
/// the transition structure is constrained so that every infinite run path
/// is eventually trapped in a single Büchi or coBüchi stratum. These
/// invariants are checked on construction: a violation is a bug in a
/// builder, not bad input.
#[derive(Clone, Debug)]
pub struct Haa<L: Letter> {
    alphabet: Vec<L>,
    letter_index: HashMap<L, usize>,
    /// Debug names, parallel to state ids.
    names: Vec<String>,
    /// Stratum index per state.
    stratum_of: Vec<u32>,
    initial: StateId,
    /// Transition formulas, indexed `[state][letter index]`.
    delta: Vec<Vec<Pbf>>,
    strata: Vec<Stratum>,
}

impl<L: Letter> Haa<L> {
    pub fn new(
        alphabet: Vec<L>,
        names: Vec<String>,
        initial: StateId,
        delta: Vec<Vec<Pbf>>,
        strata: Vec<Stratum>,
        stage: &'static str,
        max_states: usize,
    ) -> Result<Self> {
        if names.len() > max_states {
            return Err(Error::BudgetExceeded { stage, budget: max_states });
        }
        let letter_index = alphabet
            .iter()
            .enumerate()
            .map(|(i, &l)| (l, i))
            .collect::<HashMap<_, _>>();
        assert_eq!(letter_index.len(), alphabet.len(), "duplicate letters in alphabet");
        let mut stratum_of = vec![u32::MAX; names.len()];
        for (i, stratum) in strata.iter().enumerate() {
            for &q in &stratum.states {
                assert_eq!(
                    stratum_of[q as usize],
                    u32::MAX,
                    "state {q} assigned to two strata"
                );
                stratum_of[q as usize] = i as u32;
            }
            for &q in &stratum.accepting {
                assert!(
                    stratum.states.contains(&q),
                    "accepting state {q} outside its stratum"
                );
            }
        }
        assert!(
            stratum_of.iter().all(|&s| s != u32::MAX),
            "strata do not cover all states"
        );
        let haa = Haa {
            alphabet,
            letter_index,
            names,
            stratum_of,
            initial,
            delta,
            strata,
        };
        haa.validate();
        Ok(haa)
    }

    /// Partial-order and hesitant requirements, for every state and letter.
    fn validate(&self) {
        assert_eq!(self.delta.len(), self.names.len());
        for (q, row) in self.delta.iter().enumerate() {
            assert_eq!(row.len(), self.alphabet.len(), "delta row size for state {q}");
            let i = self.stratum_of[q];
            let stratum = &self.strata[i as usize];
            for pbf in row {
                for atom in pbf.atoms() {
                    assert!(
                        self.stratum_of[atom as usize] >= i,
                        "partial order violated: state {q} (stratum {i}) moves to {atom}"
                    );
                }
                match stratum.kind {
                    StratumKind::Transient => {
                        assert!(
                            pbf.atoms().all(|a| self.stratum_of[a as usize] != i),
                            "transient stratum {i} has a self-stratum move from {q}"
                        );
                    }
                    StratumKind::Buchi => {
                        for conjunct in pbf.dnf() {
                            let own = conjunct
                                .iter()
                                .filter(|&&a| self.stratum_of[a as usize] == i)
                                .count();
                            assert!(
                                own <= 1,
                                "Büchi stratum {i}: conjunct with {own} own states from {q}"
                            );
                        }
                    }
                    StratumKind::CoBuchi => {
                        for clause in pbf.cnf() {
                            let own = clause
                                .iter()
                                .filter(|&&a| self.stratum_of[a as usize] == i)
                                .count();
                            assert!(
                                own <= 1,
                                "coBüchi stratum {i}: clause with {own} own states from {q}"
                            );
                        }
                    }
                }
            }
        }
    }

    pub fn alphabet(&self) -> &[L] {
        &self.alphabet
    }

    pub fn letter_index(&self, letter: L) -> Option<usize> {
        self.letter_index.get(&letter).copied()
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn name(&self, q: StateId) -> &str {
        &self.names[q as usize]
    }

    pub fn strata(&self) -> &[Stratum] {
        &self.strata
    }

    pub fn depth(&self) -> usize {
        self.strata.len()
    }

    pub fn stratum_of(&self, q: StateId) -> u32 {
        self.stratum_of[q as usize]
    }

    pub fn delta(&self, q: StateId, letter_idx: usize) -> &Pbf {
        &self.delta[q as usize][letter_idx]
    }

    pub fn delta_by_letter(&self, q: StateId, letter: L) -> Option<&Pbf> {
        self.letter_index(letter).map(|i| self.delta(q, i))
    }

    /// The dual automaton: transition formulas dualized, Büchi and coBüchi
    /// strata kinds swapped. Accepts exactly the complement language.
    pub fn dual(&self) -> Haa<L> {
        let delta = self
            .delta
            .iter()
            .map(|row| row.iter().map(|f| f.dual()).collect())
            .collect();
        let strata = self
            .strata
            .iter()
            .map(|s| Stratum {
                states: s.states.clone(),
                accepting: s.accepting.clone(),
                kind: match s.kind {
                    StratumKind::Transient => StratumKind::Transient,
                    StratumKind::Buchi => StratumKind::CoBuchi,
                    StratumKind::CoBuchi => StratumKind::Buchi,
                },
            })
            .collect();
        let dual = Haa {
            alphabet: self.alphabet.clone(),
            letter_index: self.letter_index.clone(),
            names: self.names.clone(),
            stratum_of: self.stratum_of.clone(),
            initial: self.initial,
            delta,
            strata,
        };
        dual.validate();
        dual
    }
}
