use std::time::Instant;

use super::dealternate::haa_to_nbw;
use super::haa::{Haa, Stratum, StratumKind};
use super::implication::build_implication_haa;
use super::negation::build_negation_haa;
use super::pbf::Pbf;
use super::restrict::restrict_to_macro_paths;
use crate::error::{Error, Result};
use crate::formula::{classify, Formula, FormulaKind};
use crate::kripke::{KripkeStructure, MacroState};

/// Size and timing record for one construction stage.
#[derive(Clone, Debug, serde::Serialize)]
pub struct StageRecord {
    pub stage: String,
    pub states: usize,
    pub millis: u128,
}

pub fn record(stats: &mut Vec<StageRecord>, stage: impl Into<String>, states: usize, t0: Instant) {
    stats.push(StageRecord {
        stage: stage.into(),
        states,
        millis: t0.elapsed().as_millis(),
    });
}

/// The default letter universe for a structure: every macro-state reachable
/// on the initial macro-path, closed under subsets (sub-macro-path guessing
/// quantifies over subsets of the letters it reads). The full powerset of
/// the state space is never enumerated unless the orbit itself demands it.
pub fn default_macro_alphabet(k: &KripkeStructure) -> Vec<MacroState> {
    let rho0 = k.initial_macro_lasso();
    let mut letters: Vec<MacroState> = Vec::new();
    for i in 0..rho0.total_len() {
        for sub in rho0.at(i).subsets() {
            letters.push(sub);
        }
    }
    letters.sort_unstable();
    letters.dedup();
    letters
}

/// Compile a left-positive formula into an HAA accepting exactly the
/// macro-paths of `k` (over the given letters) that satisfy it. This is the
/// recursive subformula construction plus a final intersection with the
/// macro-paths of the structure.
pub fn compile(
    k: &KripkeStructure,
    f: &Formula,
    alphabet: &[MacroState],
    max_states: usize,
    stats: &mut Vec<StageRecord>,
) -> Result<Haa<MacroState>> {
    let report = classify(f);
    if !report.is_left_positive {
        let offending = report
            .offending
            .map(|o| o.pretty)
            .unwrap_or_else(|| f.to_string());
        return Err(Error::NotLeftPositive(offending));
    }
    let t0 = Instant::now();
    let raw = compile_raw(k, f, alphabet, max_states, stats)?;
    record(stats, format!("formula automaton `{f}`"), raw.num_states(), t0);
    let t0 = Instant::now();
    let restricted = restrict_to_macro_paths(k, &raw, max_states)?;
    record(stats, "macro-path restriction", restricted.num_states(), t0);
    Ok(restricted)
}

/// The compiled automaton without the final macro-path intersection, for
/// callers that apply their own (the implication machinery does).
pub(crate) fn compile_unrestricted(
    k: &KripkeStructure,
    f: &Formula,
    alphabet: &[MacroState],
    max_states: usize,
) -> Result<Haa<MacroState>> {
    let mut stats = Vec::new();
    compile_raw(k, f, alphabet, max_states, &mut stats)
}

/// The raw subformula automaton: correct on macro-paths of `k` (the caller
/// intersects with them once, at the top level).
fn compile_raw(
    k: &KripkeStructure,
    f: &Formula,
    alphabet: &[MacroState],
    max_states: usize,
    stats: &mut Vec<StageRecord>,
) -> Result<Haa<MacroState>> {
    // Top-level subformulas: those reachable without crossing an
    // implication (negations included).
    let mut fs: Vec<&Formula> = Vec::new();
    collect_fs(f, &mut fs);
    fs.sort_by(|a, b| {
        b.size().cmp(&a.size()).then_with(|| a.to_string().cmp(&b.to_string()))
    });
    let fs_index = |g: &Formula| -> u32 {
        fs.iter().position(|&h| h == g).expect("subformula indexed") as u32
    };

    // Build sub-automata for implication- and negation-rooted members.
    let mut subs: Vec<(u32, Haa<MacroState>)> = Vec::new();
    for (i, &g) in fs.iter().enumerate() {
        let FormulaKind::Impl(lhs, rhs) = &g.kind else { continue };
        if matches!(rhs.kind, FormulaKind::Bot) {
            if matches!(lhs.kind, FormulaKind::Atom(_)) {
                continue; // negated atom: direct table entry
            }
            let t0 = Instant::now();
            let a = build_negation_haa(k, lhs, alphabet, max_states)?;
            record(stats, format!("negation automaton `{g}`"), a.num_states(), t0);
            subs.push((i as u32, a));
        } else {
            // The antecedent automaton must accept exactly the macro-paths
            // satisfying it, so it gets its own restriction before
            // dealternation.
            let raw1 = compile_raw(k, lhs, alphabet, max_states, stats)?;
            let t0 = Instant::now();
            let n1 = haa_to_nbw(&restrict_to_macro_paths(k, &raw1, max_states)?, max_states)?;
            record(
                stats,
                format!("antecedent word automaton `{lhs}`"),
                n1.num_states as usize,
                t0,
            );
            let a2 = compile_raw(k, rhs, alphabet, max_states, stats)?;
            let t0 = Instant::now();
            let a = build_implication_haa(k, &n1, &a2, alphabet, max_states)?;
            record(stats, format!("implication automaton `{g}`"), a.num_states(), t0);
            subs.push((i as u32, a));
        }
    }

    // State layout: the subformula states first, then each sub-automaton's
    // block in order.
    let m = fs.len() as u32;
    let mut offsets: Vec<Option<u32>> = vec![None; fs.len()];
    let mut next = m;
    for (i, a) in &subs {
        offsets[*i as usize] = Some(next);
        next += a.num_states() as u32;
    }
    let total = next as usize;

    let mut names: Vec<String> = fs.iter().map(|g| g.to_string()).collect();
    for (_, a) in &subs {
        for q in 0..a.num_states() as u32 {
            names.push(a.name(q).to_string());
        }
    }

    let mut delta: Vec<Vec<Pbf>> = Vec::with_capacity(total);
    for &g in &fs {
        let row = alphabet
            .iter()
            .enumerate()
            .map(|(li, &letter)| {
                table_delta(k, g, letter, li, &fs_index, &offsets, &subs)
            })
            .collect();
        delta.push(row);
    }
    for (_, a) in &subs {
        let offset = next_offset(&offsets, &subs, a);
        for q in 0..a.num_states() as u32 {
            delta.push(
                (0..alphabet.len())
                    .map(|li| a.delta(q, li).rename(|t| t + offset))
                    .collect(),
            );
        }
    }

    let mut strata: Vec<Stratum> = fs
        .iter()
        .enumerate()
        .map(|(i, &g)| Stratum {
            states: vec![i as u32],
            accepting: vec![],
            kind: match &g.kind {
                FormulaKind::Until(..) => StratumKind::Buchi,
                FormulaKind::Release(..) => StratumKind::CoBuchi,
                _ => StratumKind::Transient,
            },
        })
        .collect();
    for (i, a) in &subs {
        let offset = offsets[*i as usize].unwrap();
        strata.extend(a.strata().iter().map(|s| Stratum {
            states: s.states.iter().map(|&q| q + offset).collect(),
            accepting: s.accepting.iter().map(|&q| q + offset).collect(),
            kind: s.kind,
        }));
    }

    Haa::new(
        alphabet.to_vec(),
        names,
        fs_index(f),
        delta,
        strata,
        "formula automaton",
        max_states,
    )
}

fn next_offset(
    offsets: &[Option<u32>],
    subs: &[(u32, Haa<MacroState>)],
    a: &Haa<MacroState>,
) -> u32 {
    for (i, b) in subs {
        if std::ptr::eq(a, b) {
            return offsets[*i as usize].unwrap();
        }
    }
    unreachable!("sub-automaton registered")
}

/// The transition table for top-level subformulas.
fn table_delta(
    k: &KripkeStructure,
    g: &Formula,
    letter: MacroState,
    letter_idx: usize,
    fs_index: &impl Fn(&Formula) -> u32,
    offsets: &[Option<u32>],
    subs: &[(u32, Haa<MacroState>)],
) -> Pbf {
    match &g.kind {
        FormulaKind::Top => Pbf::tt(),
        FormulaKind::Bot => Pbf::when(letter.is_empty()),
        FormulaKind::Atom(p) => {
            let i = k.prop_index(p).expect("atoms validated before compilation");
            Pbf::when(letter.iter().all(|s| k.label(s).contains(i)))
        }
        FormulaKind::Impl(lhs, rhs)
            if matches!(rhs.kind, FormulaKind::Bot)
                && matches!(lhs.kind, FormulaKind::Atom(_)) =>
        {
            let FormulaKind::Atom(p) = &lhs.kind else { unreachable!() };
            let i = k.prop_index(p).expect("atoms validated before compilation");
            Pbf::when(letter.iter().all(|s| !k.label(s).contains(i)))
        }
        FormulaKind::Impl(..) => {
            let fi = fs_index(g);
            let offset = offsets[fi as usize].expect("implication has a sub-automaton");
            let (_, a) = subs
                .iter()
                .find(|(i, _)| *i == fi)
                .expect("implication has a sub-automaton");
            a.delta(a.initial(), letter_idx).rename(|t| t + offset)
        }
        FormulaKind::BDis(a, b) => table_delta(k, a, letter, letter_idx, fs_index, offsets, subs)
            .or(&table_delta(k, b, letter, letter_idx, fs_index, offsets, subs)),
        FormulaKind::Conj(a, b) => table_delta(k, a, letter, letter_idx, fs_index, offsets, subs)
            .and(&table_delta(k, b, letter, letter_idx, fs_index, offsets, subs)),
        FormulaKind::Next(a) => Pbf::atom(fs_index(a)),
        FormulaKind::Until(a, b) => {
            let self_atom = Pbf::atom(fs_index(g));
            table_delta(k, b, letter, letter_idx, fs_index, offsets, subs).or(
                &table_delta(k, a, letter, letter_idx, fs_index, offsets, subs).and(&self_atom),
            )
        }
        FormulaKind::Release(a, b) => {
            let self_atom = Pbf::atom(fs_index(g));
            table_delta(k, b, letter, letter_idx, fs_index, offsets, subs).and(
                &table_delta(k, a, letter, letter_idx, fs_index, offsets, subs).or(&self_atom),
            )
        }
    }
}

fn collect_fs<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
    if out.contains(&f) {
        return;
    }
    out.push(f);
    if matches!(f.kind, FormulaKind::Impl(..)) {
        return; // children are under -> or !
    }
    for c in f.children() {
        collect_fs(c, out);
    }
}
