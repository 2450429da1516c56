use crate::check::{model_check, CheckOptions};
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::kripke::{KripkeStructure, PathLasso};
use crate::oracle::team::{eval_team_finite, FiniteTeam};

/// Agreement report between the exact finite-team semantics and the
/// automata pipeline.
#[derive(Clone, Debug)]
pub struct TeamVsMacroReport {
    pub team_holds: bool,
    pub automata_holds: bool,
    pub paths: usize,
}

impl TeamVsMacroReport {
    pub fn agree(&self) -> bool {
        self.team_holds == self.automata_holds
    }
}

/// Enumerate the initial paths of a structure whose path set is finite.
///
/// The path set is finite exactly when no reachable state lying on a cycle
/// has two or more successors; `None` is returned otherwise. Each path is
/// then a branch through choice states followed by a forced cycle.
pub fn enumerate_initial_paths(k: &KripkeStructure, cap: usize) -> Option<Vec<PathLasso>> {
    let n = k.num_states() as usize;
    let mut reachable = vec![false; n];
    let mut queue: Vec<u32> = k.initial_states().iter().collect();
    for &s in &queue {
        reachable[s as usize] = true;
    }
    while let Some(s) = queue.pop() {
        for t in k.successors(s).iter() {
            if !reachable[t as usize] {
                reachable[t as usize] = true;
                queue.push(t);
            }
        }
    }
    for s in 0..n as u32 {
        if reachable[s as usize]
            && on_cycle(k, s)
            && k.successors(s).len() >= 2
        {
            return None;
        }
    }

    let mut paths = Vec::new();
    for s0 in k.initial_states().iter() {
        let mut walk = vec![s0];
        if !extend_paths(k, &mut walk, cap, &mut paths) {
            return None; // cap exhausted; treat as too many to enumerate
        }
    }
    Some(paths)
}

fn on_cycle(k: &KripkeStructure, s: u32) -> bool {
    // s lies on a cycle iff s is reachable from one of its successors.
    let n = k.num_states() as usize;
    let mut seen = vec![false; n];
    let mut queue: Vec<u32> = k.successors(s).iter().collect();
    while let Some(t) = queue.pop() {
        if t == s {
            return true;
        }
        if !seen[t as usize] {
            seen[t as usize] = true;
            queue.extend(k.successors(t).iter());
        }
    }
    false
}

fn extend_paths(
    k: &KripkeStructure,
    walk: &mut Vec<u32>,
    cap: usize,
    out: &mut Vec<PathLasso>,
) -> bool {
    let cur = *walk.last().unwrap();
    if let Some(j) = walk.iter().position(|&s| s == cur).filter(|&j| j + 1 < walk.len()) {
        // Revisited a state: the cycle part is forced, close the lasso.
        let lasso = PathLasso::new(walk[..j].to_vec(), walk[j..walk.len() - 1].to_vec());
        if out.len() >= cap {
            return false;
        }
        out.push(lasso.canonical());
        return true;
    }
    for t in k.successors(cur).iter() {
        walk.push(t);
        let ok = extend_paths(k, walk, cap, out);
        walk.pop();
        if !ok {
            return false;
        }
    }
    true
}

/// Compare the exact team semantics on the (finite) set of initial traces
/// with the automata-based verdict on the initial macro-path.
pub fn team_vs_macro_check(
    k: &KripkeStructure,
    f: &Formula,
    team_bound: usize,
    options: &CheckOptions,
) -> Result<TeamVsMacroReport> {
    let paths = enumerate_initial_paths(k, team_bound.max(64)).ok_or_else(|| {
        Error::Oracle(
            "structure has infinitely many initial paths; \
             the finite-team oracle does not apply"
                .into(),
        )
    })?;
    if paths.len() > team_bound {
        return Err(Error::Oracle(format!(
            "structure has {} initial paths, more than the team bound {team_bound}",
            paths.len()
        )));
    }
    let team = FiniteTeam::new(
        k.ap().to_vec(),
        paths.iter().map(|p| k.trace_of_path(p)).collect(),
    );
    let team_holds = eval_team_finite(&team, f, team_bound)?;
    let automata = model_check(k, f, options)?;
    Ok(TeamVsMacroReport {
        team_holds,
        automata_holds: automata.holds,
        paths: paths.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain_pair() -> KripkeStructure {
        // Two deterministic chains into self-loops: exactly two initial paths.
        KripkeStructure::build(
            vec!["p".into()],
            vec![
                ("a0".into(), vec![]),
                ("a1".into(), vec!["p".into()]),
                ("b0".into(), vec![]),
                ("b1".into(), vec![]),
            ],
            vec!["a0".into(), "b0".into()],
            vec![
                ("a0".into(), "a1".into()),
                ("a1".into(), "a1".into()),
                ("b0".into(), "b1".into()),
                ("b1".into(), "b1".into()),
            ],
        )
        .unwrap()
    }

    #[test]
    fn enumerates_deterministic_chains() {
        let k = chain_pair();
        let paths = enumerate_initial_paths(&k, 16).unwrap();
        assert_eq!(paths.len(), 2);
        for p in &paths {
            k.validate_path_lasso(p).unwrap();
        }
    }

    #[test]
    fn branching_on_a_cycle_is_infinite() {
        let k = KripkeStructure::build(
            vec![],
            vec![("s".into(), vec![]), ("t".into(), vec![])],
            vec!["s".into()],
            vec![
                ("s".into(), "s".into()),
                ("s".into(), "t".into()),
                ("t".into(), "t".into()),
            ],
        )
        .unwrap();
        assert!(enumerate_initial_paths(&k, 16).is_none());
    }

    #[test]
    fn acyclic_branching_is_finite() {
        // One choice state feeding two loops: two paths.
        let k = KripkeStructure::build(
            vec![],
            vec![
                ("c".into(), vec![]),
                ("l".into(), vec![]),
                ("r".into(), vec![]),
            ],
            vec!["c".into()],
            vec![
                ("c".into(), "l".into()),
                ("c".into(), "r".into()),
                ("l".into(), "l".into()),
                ("r".into(), "r".into()),
            ],
        )
        .unwrap();
        let paths = enumerate_initial_paths(&k, 16).unwrap();
        assert_eq!(paths.len(), 2);
    }
}
