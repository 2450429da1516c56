use std::collections::HashMap;

use serde::Deserialize;

use super::lasso::{MacroLasso, PathLasso, TraceLasso};
use super::sets::{MacroState, PropSet};
use crate::error::{Error, Result};

/// A finite Kripke structure with a left-total transition relation.
///
/// States and propositions are indexed densely; macro-states and label sets
/// are bit sets over those indices, which keeps successor computations and
/// automata letters cheap to hash and compare. At most 64 states and 64
/// propositions are supported.
#[derive(Clone, Debug)]
pub struct KripkeStructure {
    ap: Vec<String>,
    state_ids: Vec<String>,
    labels: Vec<PropSet>,
    initial: MacroState,
    succ: Vec<MacroState>,
    pred: Vec<MacroState>,
}

#[derive(Deserialize)]
struct RawStructure {
    ap: Vec<String>,
    states: Vec<RawState>,
    initial: Vec<String>,
    edges: Vec<(String, String)>,
}

#[derive(Deserialize)]
struct RawState {
    id: String,
    #[serde(default)]
    label: Vec<String>,
}

impl KripkeStructure {
    /// Load and validate a structure from its JSON document.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawStructure =
            serde_json::from_str(text).map_err(|e| Error::Structure(format!("bad JSON: {e}")))?;
        Self::from_raw(raw)
    }

    /// Build a structure programmatically; applies the same validation as
    /// loading from JSON.
    pub fn build(
        ap: Vec<String>,
        states: Vec<(String, Vec<String>)>,
        initial: Vec<String>,
        edges: Vec<(String, String)>,
    ) -> Result<Self> {
        Self::from_raw(RawStructure {
            ap,
            states: states
                .into_iter()
                .map(|(id, label)| RawState { id, label })
                .collect(),
            initial,
            edges,
        })
    }

    fn from_raw(raw: RawStructure) -> Result<Self> {
        if raw.states.is_empty() {
            return Err(Error::Structure("structure has no states".into()));
        }
        if raw.states.len() > 64 {
            return Err(Error::Structure("at most 64 states are supported".into()));
        }
        if raw.ap.len() > 64 {
            return Err(Error::Structure("at most 64 propositions are supported".into()));
        }
        let mut prop_index = HashMap::new();
        for (i, p) in raw.ap.iter().enumerate() {
            if prop_index.insert(p.clone(), i as u32).is_some() {
                return Err(Error::Structure(format!("duplicate proposition `{p}`")));
            }
        }
        let mut id_index = HashMap::new();
        for (i, s) in raw.states.iter().enumerate() {
            if id_index.insert(s.id.clone(), i as u32).is_some() {
                return Err(Error::Structure(format!("duplicate state id `{}`", s.id)));
            }
        }
        let mut labels = Vec::with_capacity(raw.states.len());
        for s in &raw.states {
            let mut set = PropSet::EMPTY;
            for p in &s.label {
                let i = *prop_index.get(p).ok_or_else(|| {
                    Error::Structure(format!(
                        "state `{}` labelled with `{p}` which is not in \"ap\"",
                        s.id
                    ))
                })?;
                set.insert(i);
            }
            labels.push(set);
        }
        let mut succ = vec![MacroState::EMPTY; raw.states.len()];
        let mut pred = vec![MacroState::EMPTY; raw.states.len()];
        for (from, to) in &raw.edges {
            let f = *id_index
                .get(from)
                .ok_or_else(|| Error::Structure(format!("edge from undeclared state `{from}`")))?;
            let t = *id_index
                .get(to)
                .ok_or_else(|| Error::Structure(format!("edge to undeclared state `{to}`")))?;
            succ[f as usize].insert(t);
            pred[t as usize].insert(f);
        }
        for (i, s) in succ.iter().enumerate() {
            if s.is_empty() {
                return Err(Error::Structure(format!(
                    "not left-total at `{}`: state has no outgoing edge",
                    raw.states[i].id
                )));
            }
        }
        if raw.initial.is_empty() {
            return Err(Error::Structure("initial state set is empty".into()));
        }
        let mut initial = MacroState::EMPTY;
        for id in &raw.initial {
            let i = *id_index
                .get(id)
                .ok_or_else(|| Error::Structure(format!("initial state `{id}` is undeclared")))?;
            initial.insert(i);
        }
        Ok(KripkeStructure {
            ap: raw.ap,
            state_ids: raw.states.into_iter().map(|s| s.id).collect(),
            labels,
            initial,
            succ,
            pred,
        })
    }

    pub fn num_states(&self) -> u32 {
        self.state_ids.len() as u32
    }

    pub fn ap(&self) -> &[String] {
        &self.ap
    }

    pub fn prop_index(&self, name: &str) -> Option<u32> {
        self.ap.iter().position(|p| p == name).map(|i| i as u32)
    }

    pub fn state_id(&self, index: u32) -> &str {
        &self.state_ids[index as usize]
    }

    pub fn state_index(&self, id: &str) -> Option<u32> {
        self.state_ids.iter().position(|s| s == id).map(|i| i as u32)
    }

    pub fn label(&self, state: u32) -> PropSet {
        self.labels[state as usize]
    }

    pub fn successors(&self, state: u32) -> MacroState {
        self.succ[state as usize]
    }

    pub fn initial_states(&self) -> MacroState {
        self.initial
    }

    /// The macro-state containing every state.
    pub fn all_states(&self) -> MacroState {
        if self.state_ids.len() == 64 {
            MacroState(u64::MAX)
        } else {
            MacroState((1u64 << self.state_ids.len()) - 1)
        }
    }

    /// Exact forward image `{s' | s' in R[s] for some s in T}`.
    pub fn forward_image(&self, t: MacroState) -> MacroState {
        t.iter()
            .fold(MacroState::EMPTY, |acc, s| acc.union(self.succ[s as usize]))
    }

    /// Macro-state successor relation: every state of `a` has a successor in
    /// `b`, and every state of `b` has a predecessor in `a`.
    pub fn is_successor(&self, a: MacroState, b: MacroState) -> bool {
        a.iter().all(|s| !self.succ[s as usize].intersect(b).is_empty())
            && b.iter().all(|t| !self.pred[t as usize].intersect(a).is_empty())
    }

    /// The initial macro-path: the deterministic forward-image iteration from
    /// the initial states, folded into a lasso at the first repeated
    /// macro-state. Its path set is exactly the set of initial paths.
    pub fn initial_macro_lasso(&self) -> MacroLasso {
        let mut seen: HashMap<MacroState, usize> = HashMap::new();
        let mut seq = Vec::new();
        let mut cur = self.initial;
        loop {
            if let Some(&i) = seen.get(&cur) {
                return MacroLasso::new(seq[..i].to_vec(), seq[i..].to_vec());
            }
            seen.insert(cur, seq.len());
            seq.push(cur);
            cur = self.forward_image(cur);
        }
    }

    /// Check that a macro-lasso is a macro-path of this structure, including
    /// the stem-to-period seam and the period wrap-around.
    pub fn validate_macro_lasso(&self, rho: &MacroLasso) -> Result<()> {
        let all = self.all_states();
        let n = rho.total_len();
        for i in 0..n {
            if !rho.at(i).is_subset_of(all) {
                return Err(Error::Structure(format!(
                    "macro-lasso position {i} mentions undeclared states"
                )));
            }
            let next = rho.at(rho.next_pos(i));
            if !self.is_successor(rho.at(i), next) {
                return Err(Error::Structure(format!(
                    "macro-lasso positions {i} -> {} violate the successor relation",
                    rho.next_pos(i)
                )));
            }
        }
        Ok(())
    }

    /// Check that a path lasso is a path of this structure.
    pub fn validate_path_lasso(&self, path: &PathLasso) -> Result<()> {
        let n = path.total_len();
        for i in 0..n {
            if path.at(i) >= self.num_states() {
                return Err(Error::Structure(format!("path position {i} is out of range")));
            }
            let next = path.at(path.next_pos(i));
            if !self.succ[path.at(i) as usize].contains(next) {
                return Err(Error::Structure(format!(
                    "path positions {i} -> {} are not an edge",
                    path.next_pos(i)
                )));
            }
        }
        Ok(())
    }

    /// The trace induced by a path lasso.
    pub fn trace_of_path(&self, path: &PathLasso) -> TraceLasso {
        TraceLasso::new(
            path.stem.iter().map(|&s| self.label(s)).collect(),
            path.period.iter().map(|&s| self.label(s)).collect(),
        )
    }

    /// Render a macro-state with state ids.
    pub fn show_macro_state(&self, m: MacroState) -> String {
        let mut out = String::from("{");
        for (n, i) in m.iter().enumerate() {
            if n > 0 {
                out.push(',');
            }
            out.push_str(self.state_id(i));
        }
        out.push('}');
        out
    }

    /// Render a macro-lasso with state ids, stem and period separated.
    pub fn show_macro_lasso(&self, rho: &MacroLasso) -> String {
        let stem: Vec<_> = rho.stem.iter().map(|&m| self.show_macro_state(m)).collect();
        let period: Vec<_> = rho.period.iter().map(|&m| self.show_macro_state(m)).collect();
        format!("{} ({})^w", stem.join(" "), period.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_state() -> KripkeStructure {
        KripkeStructure::from_json(
            r#"{"ap":["p"],"states":[{"id":"s0","label":["p"]}],
                "initial":["s0"],"edges":[["s0","s0"]]}"#,
        )
        .unwrap()
    }

    #[test]
    fn loads_single_state_self_loop() {
        let k = single_state();
        assert_eq!(k.num_states(), 1);
        assert!(k.label(0).contains(0));
    }

    #[test]
    fn rejects_non_left_total() {
        let err = KripkeStructure::from_json(
            r#"{"ap":[],"states":[{"id":"s0"},{"id":"s1"}],
                "initial":["s0"],"edges":[["s0","s1"]]}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("not left-total at `s1`"));
    }

    #[test]
    fn rejects_dangling_edge_and_empty_initial() {
        assert!(KripkeStructure::from_json(
            r#"{"ap":[],"states":[{"id":"s0"}],"initial":["s0"],
                "edges":[["s0","nope"]]}"#,
        )
        .is_err());
        assert!(KripkeStructure::from_json(
            r#"{"ap":[],"states":[{"id":"s0"}],"initial":[],
                "edges":[["s0","s0"]]}"#,
        )
        .is_err());
        assert!(KripkeStructure::from_json(
            r#"{"ap":[],"states":[{"id":"s0","label":["q"]}],"initial":["s0"],
                "edges":[["s0","s0"]]}"#,
        )
        .is_err());
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
    fn successor_conditions() {
        let k = two_state_total();
        let s0 = MacroState::singleton(0);
        let s1 = MacroState::singleton(1);
        let both = s0.union(s1);
        assert!(k.is_successor(s0, s1));
        assert!(k.is_successor(MacroState::EMPTY, MacroState::EMPTY));
        assert!(!k.is_successor(MacroState::EMPTY, s0));
        assert!(!k.is_successor(s0, MacroState::EMPTY));
        assert!(k.is_successor(both, both));
    }

    #[test]
    fn successor_requires_backward_justification() {
        // s0 -> s0 only; s1 unreachable from s0.
        let k = KripkeStructure::build(
            vec![],
            vec![("s0".into(), vec![]), ("s1".into(), vec![])],
            vec!["s0".into()],
            vec![("s0".into(), "s0".into()), ("s1".into(), "s1".into())],
        )
        .unwrap();
        let s0 = MacroState::singleton(0);
        let both = s0.union(MacroState::singleton(1));
        assert!(!k.is_successor(s0, both));
    }

    #[test]
    fn forward_image_and_monotonicity() {
        let k = two_state_total();
        let s0 = MacroState::singleton(0);
        assert_eq!(k.forward_image(s0), k.all_states());
        assert_eq!(k.forward_image(MacroState::EMPTY), MacroState::EMPTY);
        for t in k.all_states().subsets() {
            for u in k.all_states().subsets() {
                if t.is_subset_of(u) {
                    assert!(k.forward_image(t).is_subset_of(k.forward_image(u)));
                }
            }
        }
    }

    #[test]
    fn initial_macro_lasso_shapes() {
        let k = single_state();
        let rho = k.initial_macro_lasso();
        assert!(rho.stem.is_empty());
        assert_eq!(rho.period, vec![MacroState::singleton(0)]);

        let k = two_state_total();
        let rho = k.initial_macro_lasso();
        assert_eq!(rho.stem, vec![MacroState::singleton(0)]);
        assert_eq!(rho.period, vec![k.all_states()]);
        k.validate_macro_lasso(&rho).unwrap();
    }
}
