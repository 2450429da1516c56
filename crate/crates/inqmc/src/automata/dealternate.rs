use std::collections::HashMap;

use super::haa::{Haa, Letter, StateId, StratumKind};
use super::nbw::Nbw;
use super::pbf::Pbf;
use crate::error::{Error, Result};

/// Translate an HAA into an equivalent nondeterministic Büchi automaton.
///
/// Two stages. First the HAA becomes an alternating Büchi automaton:
/// Büchi strata keep their accepting sets; coBüchi strata with an empty
/// accepting set are pure safety (every trapped run is fine) and all their
/// states become accepting; coBüchi strata with accepting states are
/// weakened with ranks in `0..=2n`, non-increasing along stratum-internal
/// moves, where accepting states may only carry even ranks and a run path is
/// good iff it stabilizes on an odd rank. Second, the breakpoint (subset +
/// obligation set) construction turns the alternating automaton into an NBW.
pub fn haa_to_nbw<L: Letter>(haa: &Haa<L>, max_states: usize) -> Result<Nbw<L>> {
    let abw = rank_weaken(haa);
    breakpoint(&abw, haa.alphabet().to_vec(), max_states).map(|n| n.trim())
}

struct Abw {
    /// Transition formulas over ABW state ids, `[state][letter index]`.
    delta: Vec<Vec<Pbf>>,
    initial: u32,
    accepting: Vec<bool>,
}

fn rank_weaken<L: Letter>(haa: &Haa<L>) -> Abw {
    // Assign ABW ids: one per plain state, a block per ranked state.
    let num_letters = haa.alphabet().len();
    let mut ranked: Vec<Option<(u32, u32)>> = vec![None; haa.num_states()]; // (base id, max rank)
    let mut plain: Vec<Option<u32>> = vec![None; haa.num_states()];
    let mut accepting_in_stratum = vec![false; haa.num_states()];
    let mut next_id = 0u32;
    for stratum in haa.strata() {
        let rank_this = stratum.kind == StratumKind::CoBuchi && !stratum.accepting.is_empty();
        let max_rank = 2 * stratum.states.len() as u32;
        for &q in &stratum.states {
            if rank_this {
                ranked[q as usize] = Some((next_id, max_rank));
                next_id += max_rank + 1;
            } else {
                plain[q as usize] = Some(next_id);
                next_id += 1;
            }
        }
        for &q in &stratum.accepting {
            accepting_in_stratum[q as usize] = true;
        }
    }
    let total = next_id as usize;

    // An accepting state of a ranked stratum cannot take odd ranks.
    let valid = |q: u32, r: u32| -> bool { !(accepting_in_stratum[q as usize] && r % 2 == 1) };
    // Target id for entering state q from outside its stratum (or from a
    // non-ranked state): ranked states are entered at their maximal rank.
    let entry = |q: u32| -> u32 {
        match ranked[q as usize] {
            Some((base, max)) => base + max,
            None => plain[q as usize].unwrap(),
        }
    };

    let mut delta: Vec<Vec<Pbf>> = vec![Vec::new(); total];
    let mut accepting = vec![false; total];

    for q in 0..haa.num_states() as u32 {
        let stratum_q = haa.stratum_of(q);
        match ranked[q as usize] {
            None => {
                let id = plain[q as usize].unwrap();
                for l in 0..num_letters {
                    let f = haa.delta(q, l).map_atoms(|t| Pbf::atom(entry(t)));
                    delta[id as usize].push(f);
                }
                let kind = haa.strata()[stratum_q as usize].kind;
                accepting[id as usize] = match kind {
                    StratumKind::Buchi => accepting_in_stratum[q as usize],
                    // Safety shortcut: trapped runs are unconditionally good.
                    StratumKind::CoBuchi => true,
                    StratumKind::Transient => false,
                };
            }
            Some((base, max)) => {
                for r in 0..=max {
                    let id = base + r;
                    if !valid(q, r) {
                        // Unreachable filler so ids stay dense.
                        for _ in 0..num_letters {
                            delta[id as usize].push(Pbf::ff());
                        }
                        continue;
                    }
                    for l in 0..num_letters {
                        let f = haa.delta(q, l).map_atoms(|t| {
                            if haa.stratum_of(t) == stratum_q {
                                // Same ranked stratum: release to any rank <= r.
                                let (tbase, _) = ranked[t as usize].unwrap();
                                Pbf::or_all(
                                    (0..=r).filter(|&r2| valid(t, r2)).map(|r2| {
                                        Pbf::atom(tbase + r2)
                                    }),
                                )
                            } else {
                                Pbf::atom(entry(t))
                            }
                        });
                        delta[id as usize].push(f);
                    }
                    accepting[id as usize] = r % 2 == 1;
                }
            }
        }
    }

    Abw { delta, initial: entry(haa.initial()), accepting }
}

fn breakpoint<L: Letter>(abw: &Abw, alphabet: Vec<L>, max_states: usize) -> Result<Nbw<L>> {
    let num_letters = alphabet.len();
    type Key = (Vec<u32>, Vec<u32>);
    let mut index: HashMap<Key, StateId> = HashMap::new();
    let mut keys: Vec<Key> = Vec::new();
    let mut worklist: Vec<StateId> = Vec::new();
    let mut delta: Vec<Vec<Vec<StateId>>> = Vec::new();

    let intern = |key: Key,
                      index: &mut HashMap<Key, StateId>,
                      keys: &mut Vec<Key>,
                      worklist: &mut Vec<StateId>,
                      delta: &mut Vec<Vec<Vec<StateId>>>|
     -> Result<StateId> {
        if let Some(&id) = index.get(&key) {
            return Ok(id);
        }
        let id = keys.len() as StateId;
        if keys.len() >= max_states {
            return Err(Error::BudgetExceeded { stage: "dealternation", budget: max_states });
        }
        index.insert(key.clone(), id);
        keys.push(key);
        delta.push(vec![Vec::new(); num_letters]);
        worklist.push(id);
        Ok(id)
    };

    let start = intern(
        (vec![abw.initial], vec![]),
        &mut index,
        &mut keys,
        &mut worklist,
        &mut delta,
    )?;

    while let Some(id) = worklist.pop() {
        let (u_set, o_set) = keys[id as usize].clone();
        for l in 0..num_letters {
            // Per-state minimal models of the transition formula.
            let mut options: Vec<(u32, Vec<Vec<u32>>)> = Vec::with_capacity(u_set.len());
            let mut stuck = false;
            for &q in &u_set {
                let dnf = abw.delta[q as usize][l].dnf().to_vec();
                if dnf.is_empty() {
                    stuck = true;
                    break;
                }
                options.push((q, dnf));
            }
            if stuck {
                continue;
            }
            // Fold the per-state choices into (U', O'-pre) pairs, deduplicating
            // as we go.
            let mut partial: Vec<(Vec<u32>, Vec<u32>)> = vec![(vec![], vec![])];
            for (q, choices) in &options {
                let tracked = o_set.contains(q);
                let mut grown: Vec<(Vec<u32>, Vec<u32>)> = Vec::new();
                for (u_acc, o_acc) in &partial {
                    for choice in choices {
                        let mut u = union_sorted(u_acc, choice);
                        let mut o = if tracked {
                            union_sorted(o_acc, choice)
                        } else {
                            o_acc.clone()
                        };
                        u.dedup();
                        o.dedup();
                        grown.push((u, o));
                    }
                }
                grown.sort();
                grown.dedup();
                partial = grown;
            }
            for (u_next, o_pre) in partial {
                let o_next: Vec<u32> = if o_set.is_empty() {
                    u_next
                        .iter()
                        .copied()
                        .filter(|&q| !abw.accepting[q as usize])
                        .collect()
                } else {
                    o_pre
                        .into_iter()
                        .filter(|&q| !abw.accepting[q as usize])
                        .collect()
                };
                let succ = intern(
                    (u_next, o_next),
                    &mut index,
                    &mut keys,
                    &mut worklist,
                    &mut delta,
                )?;
                if !delta[id as usize][l].contains(&succ) {
                    delta[id as usize][l].push(succ);
                }
            }
        }
    }

    let accepting: Vec<bool> = keys.iter().map(|(_, o)| o.is_empty()).collect();
    Nbw::new(
        alphabet,
        keys.len() as u32,
        vec![start],
        delta,
        accepting,
        "dealternation",
        max_states,
    )
}

fn union_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => { out.push(a[i]); i += 1 }
            std::cmp::Ordering::Greater => { out.push(b[j]); j += 1 }
            std::cmp::Ordering::Equal => { out.push(a[i]); i += 1; j += 1 }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}
