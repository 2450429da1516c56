//! Top-level model checking: classification, compilation to an HAA, the
//! 1-letter product, and its nonemptiness test, with per-stage size and
//! timing statistics.

use std::time::Instant;

use serde::Serialize;

use crate::automata::{
    compile, compile_unrestricted, default_macro_alphabet, haa_to_nbw,
    implication_counterexample, negation_counterexample, one_letter_nonempty, one_letterize,
    StageRecord,
};
use crate::error::{Error, Result};
use crate::formula::{classify, Formula, FormulaKind, FragmentReport};
use crate::kripke::{KripkeStructure, MacroLasso};

/// Default cap on the number of states any single construction stage may
/// allocate. The worst case is a tower of exponentials, so running into the
/// cap is an explicit, reported outcome rather than silent truncation.
pub const DEFAULT_STATE_BUDGET: usize = 5_000_000;

#[derive(Clone, Debug)]
pub struct CheckOptions {
    pub state_budget: usize,
    /// Attempt counterexample extraction on violation.
    pub want_witness: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { state_budget: DEFAULT_STATE_BUDGET, want_witness: true }
    }
}

/// Outcome of the automata-based check.
#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub fragment: FragmentSummary,
    pub stages: Vec<StageRecord>,
    pub total_millis: u128,
    /// Countering sub-macro-lasso for a violated top-level implication or
    /// negation, when extraction succeeded.
    #[serde(skip)]
    pub witness: Option<MacroLasso>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FragmentSummary {
    pub positive: bool,
    pub left_positive: bool,
    pub implication_depth: u32,
}

impl From<&FragmentReport> for FragmentSummary {
    fn from(r: &FragmentReport) -> Self {
        FragmentSummary {
            positive: r.is_positive,
            left_positive: r.is_left_positive,
            implication_depth: r.implication_depth,
        }
    }
}

/// Check the formula's atoms against the structure's declared alphabet.
pub fn validate_atoms(k: &KripkeStructure, f: &Formula) -> Result<()> {
    let unknown: Vec<String> = f
        .atoms()
        .into_iter()
        .filter(|a| k.prop_index(a).is_none())
        .map(|a| a.to_string())
        .collect();
    if unknown.is_empty() {
        Ok(())
    } else {
        Err(Error::UnknownAtoms(unknown))
    }
}

/// Does the trace set of `k` satisfy the left-positive formula `f`?
///
/// Decided on the initial macro-path: compile the formula to an HAA over
/// macro-state letters, build the 1-letter product along the forward-image
/// orbit, and test its nonemptiness.
pub fn model_check(k: &KripkeStructure, f: &Formula, options: &CheckOptions) -> Result<Verdict> {
    let started = Instant::now();
    let report = classify(f);
    validate_atoms(k, f)?;
    let mut stages = Vec::new();
    let alphabet = default_macro_alphabet(k);
    let automaton = compile(k, f, &alphabet, options.state_budget, &mut stages)?;
    let t0 = Instant::now();
    let product = one_letterize(k, &automaton, options.state_budget)?;
    stages.push(StageRecord {
        stage: "one-letter product".into(),
        states: product.num_states(),
        millis: t0.elapsed().as_millis(),
    });
    let t0 = Instant::now();
    let holds = one_letter_nonempty(&product);
    stages.push(StageRecord {
        stage: "emptiness".into(),
        states: product.num_states(),
        millis: t0.elapsed().as_millis(),
    });
    let witness = if !holds && options.want_witness {
        extract_witness(k, f, &alphabet, options.state_budget).unwrap_or(None)
    } else {
        None
    };
    Ok(Verdict {
        holds,
        fragment: FragmentSummary::from(&report),
        stages,
        total_millis: started.elapsed().as_millis(),
        witness,
    })
}

/// Best-effort counterexample for a violated root implication or negation:
/// rerun the counterexample side of the construction over the initial
/// macro-path and project the guessed sub-macro-path out of an accepting
/// run.
fn extract_witness(
    k: &KripkeStructure,
    f: &Formula,
    alphabet: &[crate::kripke::MacroState],
    budget: usize,
) -> Result<Option<MacroLasso>> {
    let FormulaKind::Impl(lhs, rhs) = &f.kind else {
        return Ok(None);
    };
    let rho0 = k.initial_macro_lasso();
    if matches!(rhs.kind, FormulaKind::Bot) {
        return negation_counterexample(k, lhs, alphabet, &rho0, budget);
    }
    let mut stats = Vec::new();
    let n1 = haa_to_nbw(&compile(k, lhs, alphabet, budget, &mut stats)?, budget)?;
    let a2 = compile_unrestricted(k, rhs, alphabet, budget)?;
    implication_counterexample(k, &n1, &a2, alphabet, &rho0, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn check(k: &KripkeStructure, text: &str) -> Verdict {
        let f = parse(text, Some(k.ap())).unwrap();
        model_check(k, &f, &CheckOptions::default()).unwrap()
    }

    fn single_p_state() -> KripkeStructure {
        KripkeStructure::build(
            vec!["p".into()],
            vec![("s".into(), vec!["p".into()])],
            vec!["s".into()],
            vec![("s".into(), "s".into())],
        )
        .unwrap()
    }

    #[test]
    fn atoms_on_a_single_state() {
        let k = single_p_state();
        assert!(check(&k, "p").holds);
        assert!(check(&k, "G p").holds);
        assert!(!check(&k, "!p").holds);
        assert!(check(&k, "top -> p").holds);
    }

    #[test]
    fn refuses_non_left_positive() {
        let k = single_p_state();
        let f = parse("(!!(F p)) -> F p", Some(k.ap())).unwrap();
        let err = model_check(&k, &f, &CheckOptions::default()).unwrap_err();
        assert!(matches!(err, Error::NotLeftPositive(_)), "{err}");
    }

    #[test]
    fn rejects_undeclared_atoms() {
        let k = single_p_state();
        let f = parse("q", None).unwrap();
        assert!(matches!(
            model_check(&k, &f, &CheckOptions::default()),
            Err(Error::UnknownAtoms(_))
        ));
    }

    #[test]
    fn branching_two_state_structure() {
        let k = KripkeStructure::build(
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
        .unwrap();
        // Not every subteam eventually agrees on p: staying in s0 never does.
        let v = check(&k, "top -> F p");
        assert!(!v.holds);
        let w = v.witness.expect("witness for violated implication");
        assert!(w.is_sub_lasso_of(&{
            let mut rho = k.initial_macro_lasso();
            // align shapes for the subset check
            rho.stem.truncate(rho.stem.len());
            rho
        }));
        // But on singleton subteams the collapse holds trivially here.
        assert!(check(&k, "!!(F p | G !p)").holds);
    }
}
