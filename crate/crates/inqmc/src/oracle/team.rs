use std::collections::HashMap;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::formula::{Formula, FormulaKind};
use crate::kripke::{lcm, PropSet, TraceLasso};

/// Exact team evaluation is exponential in the team size; teams larger than
/// this are refused unless the caller raises the bound.
pub const DEFAULT_TEAM_BOUND: usize = 6;

/// Period alignment across team members is refused beyond this many letters.
pub const DEFAULT_LCM_CAP: usize = 1024;

/// A finite team: a set of ultimately periodic traces over a shared
/// alphabet, deduplicated by the word they denote.
#[derive(Clone, Debug)]
pub struct FiniteTeam {
    ap: Vec<String>,
    traces: Vec<TraceLasso>,
}

#[derive(Deserialize)]
struct RawTeam {
    ap: Vec<String>,
    traces: Vec<RawTrace>,
}

#[derive(Deserialize)]
struct RawTrace {
    #[serde(default)]
    stem: Vec<Vec<String>>,
    period: Vec<Vec<String>>,
}

impl FiniteTeam {
    pub fn new(ap: Vec<String>, traces: Vec<TraceLasso>) -> Self {
        let mut seen = Vec::new();
        let mut kept = Vec::new();
        for t in traces {
            let c = t.canonical();
            if !seen.contains(&c) {
                seen.push(c.clone());
                kept.push(c);
            }
        }
        FiniteTeam { ap, traces: kept }
    }

    /// Load a team file: `{"ap":["p"],"traces":[{"stem":[["p"]],"period":[[]]}]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawTeam =
            serde_json::from_str(text).map_err(|e| Error::Oracle(format!("bad team file: {e}")))?;
        let mut traces = Vec::new();
        for t in &raw.traces {
            if t.period.is_empty() {
                return Err(Error::Oracle("trace period must be nonempty".into()));
            }
            let conv = |letters: &[Vec<String>]| -> Result<Vec<PropSet>> {
                letters
                    .iter()
                    .map(|letter| {
                        let mut set = PropSet::EMPTY;
                        for p in letter {
                            let i = raw.ap.iter().position(|q| q == p).ok_or_else(|| {
                                Error::Oracle(format!("trace letter uses undeclared `{p}`"))
                            })?;
                            set.insert(i as u32);
                        }
                        Ok(set)
                    })
                    .collect()
            };
            traces.push(TraceLasso::new(conv(&t.stem)?, conv(&t.period)?));
        }
        Ok(FiniteTeam::new(raw.ap, traces))
    }

    pub fn ap(&self) -> &[String] {
        &self.ap
    }

    pub fn traces(&self) -> &[TraceLasso] {
        &self.traces
    }

    pub fn len(&self) -> usize {
        self.traces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.traces.is_empty()
    }
}

/// Exact InqLTL team semantics on a finite team.
///
/// Implication enumerates all `2^|L|` subteams, so the team size is capped.
/// Suffix teams are taken by aligning every member to a common stem length
/// and period (their least common multiple, capped), after which one shared
/// position orbit serves all members.
pub fn eval_team_finite(team: &FiniteTeam, f: &Formula, team_bound: usize) -> Result<bool> {
    if team.len() > team_bound.min(31) {
        return Err(Error::Oracle(format!(
            "team of size {} exceeds the evaluation bound {team_bound}",
            team.len()
        )));
    }
    let unknown: Vec<String> = f
        .atoms()
        .into_iter()
        .filter(|a| !team.ap.iter().any(|p| p == a))
        .map(|a| a.to_string())
        .collect();
    if !unknown.is_empty() {
        return Err(Error::UnknownAtoms(unknown));
    }

    let stem = team.traces.iter().map(|t| t.stem.len()).max().unwrap_or(0);
    let period = team
        .traces
        .iter()
        .map(|t| t.period.len())
        .fold(1usize, lcm);
    if period > DEFAULT_LCM_CAP {
        return Err(Error::Oracle(format!(
            "aligned period {period} exceeds the cap {DEFAULT_LCM_CAP}"
        )));
    }
    let total = stem + period;
    let unrolled: Vec<Vec<PropSet>> =
        team.traces.iter().map(|t| t.unroll(total)).collect();

    let mut eval = TeamEval {
        ap: &team.ap,
        unrolled,
        stem,
        total,
        memo: HashMap::new(),
    };
    let full = (1u32 << team.traces.len()) - 1;
    Ok(eval.eval(f, full, 0))
}

struct TeamEval<'a> {
    ap: &'a [String],
    unrolled: Vec<Vec<PropSet>>,
    stem: usize,
    total: usize,
    memo: HashMap<(*const Formula, u32, usize), bool>,
}

impl<'a> TeamEval<'a> {
    fn next_pos(&self, pos: usize) -> usize {
        if pos + 1 < self.total { pos + 1 } else { self.stem }
    }

    fn members(mask: u32) -> impl Iterator<Item = usize> {
        let mut bits = mask;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    fn eval(&mut self, f: &Formula, mask: u32, pos: usize) -> bool {
        let key = (f as *const Formula, mask, pos);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let v = match &f.kind {
            FormulaKind::Bot => mask == 0,
            FormulaKind::Top => true,
            FormulaKind::Atom(p) => {
                let i = self.ap.iter().position(|q| q == p).unwrap() as u32;
                Self::members(mask).all(|t| self.unrolled[t][pos].contains(i))
            }
            FormulaKind::BDis(a, b) => self.eval(a, mask, pos) || self.eval(b, mask, pos),
            FormulaKind::Conj(a, b) => self.eval(a, mask, pos) && self.eval(b, mask, pos),
            FormulaKind::Impl(a, b) => {
                // All subteams, including the full and the empty one.
                let mut sub = mask;
                loop {
                    if self.eval(a, sub, pos) && !self.eval(b, sub, pos) {
                        break false;
                    }
                    if sub == 0 {
                        break true;
                    }
                    sub = (sub - 1) & mask;
                }
            }
            FormulaKind::Next(a) => {
                let next = self.next_pos(pos);
                self.eval(a, mask, next)
            }
            FormulaKind::Until(a, b) => {
                let mut cur = pos;
                let mut visited = vec![false; self.total];
                loop {
                    if visited[cur] {
                        break false;
                    }
                    visited[cur] = true;
                    if self.eval(b, mask, cur) {
                        break true;
                    }
                    if !self.eval(a, mask, cur) {
                        break false;
                    }
                    cur = self.next_pos(cur);
                }
            }
            FormulaKind::Release(a, b) => {
                let mut cur = pos;
                let mut visited = vec![false; self.total];
                loop {
                    if visited[cur] {
                        break true;
                    }
                    visited[cur] = true;
                    if !self.eval(b, mask, cur) {
                        break false;
                    }
                    if self.eval(a, mask, cur) {
                        break true;
                    }
                    cur = self.next_pos(cur);
                }
            }
        };
        self.memo.insert(key, v);
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn p_at(position: usize) -> TraceLasso {
        // p exactly once, at the given position.
        let mut stem = vec![PropSet::EMPTY; position + 1];
        stem[position] = PropSet::from_indices([0]);
        TraceLasso::new(stem, vec![PropSet::EMPTY])
    }

    fn team(traces: Vec<TraceLasso>) -> FiniteTeam {
        FiniteTeam::new(vec!["p".to_string()], traces)
    }

    fn eval(team: &FiniteTeam, text: &str) -> bool {
        eval_team_finite(team, &parse(text, None).unwrap(), DEFAULT_TEAM_BOUND).unwrap()
    }

    #[test]
    fn empty_team_satisfies_everything() {
        let t = team(vec![]);
        for text in ["bot", "p", "!p", "F p -> G p", "!!(p U p)", "G bot"] {
            assert!(eval(&t, text), "{text}");
        }
    }

    #[test]
    fn example_team_with_scattered_p() {
        // Three traces with p exactly once, at pairwise distinct positions:
        // the team falsifies (!!F p) -> F p although each singleton satisfies it.
        let t = team(vec![p_at(0), p_at(1), p_at(2)]);
        assert!(!eval(&t, "(!!(F p)) -> F p"));
        assert!(eval(&t, "!!(F p)"));
        assert!(!eval(&t, "F p"));
        for w in [p_at(0), p_at(1), p_at(2)] {
            let single = team(vec![w]);
            assert!(eval(&single, "(!!(F p)) -> F p"));
        }
    }

    #[test]
    fn atoms_quantify_over_members() {
        let always_p = TraceLasso::periodic(vec![PropSet::from_indices([0])]);
        let never_p = TraceLasso::periodic(vec![PropSet::EMPTY]);
        let both = team(vec![always_p.clone(), never_p.clone()]);
        assert!(!eval(&both, "p"));
        assert!(!eval(&both, "!p"));
        // But p | !p splits: neither disjunct holds on the mixed team.
        assert!(!eval(&both, "p | !p"));
        assert!(eval(&team(vec![always_p]), "p | !p"));
        assert!(eval(&team(vec![never_p]), "p | !p"));
    }

    #[test]
    fn dep_encoding_matches_dependence() {
        let ap = vec!["a".to_string(), "b".to_string()];
        let tr = |bits: &[u32]| TraceLasso::periodic(vec![PropSet::from_indices(bits.iter().copied())]);
        let dep = parse("dep(a; b)", None).unwrap();
        // Same a-value, same b-value: holds.
        let good = FiniteTeam::new(ap.clone(), vec![tr(&[0, 1]), tr(&[])]);
        assert!(eval_team_finite(&good, &dep, 6).unwrap());
        // Same a-value, different b-value: fails.
        let bad = FiniteTeam::new(ap.clone(), vec![tr(&[0, 1]), tr(&[0])]);
        assert!(!eval_team_finite(&bad, &dep, 6).unwrap());
    }

    #[test]
    fn team_bound_is_enforced() {
        let t = team((0..7).map(p_at).collect());
        assert!(eval_team_finite(&t, &parse("p", None).unwrap(), 6).is_err());
    }
}
