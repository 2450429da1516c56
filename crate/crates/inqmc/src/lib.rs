//! `inqmc` decides whether the trace set of a finite Kripke structure
//! satisfies a left-positive InqLTL formula.
//!
//! InqLTL is LTL interpreted over *teams* (sets of traces) with Boolean
//! disjunction and intuitionistic implication, whose antecedent quantifies
//! over all subteams. Model checking works through a macro-path abstraction
//! of the structure and a pipeline of hesitant alternating word automata;
//! an independent brute-force semantics lives in [`oracle`] and is used to
//! cross-validate every stage.
//!
//! ```
//! use inqmc::kripke::KripkeStructure;
//! use inqmc::formula::parse;
//! use inqmc::check::{model_check, CheckOptions};
//!
//! let k = KripkeStructure::from_json(r#"{
//!     "ap": ["p"],
//!     "states": [{"id": "s0", "label": ["p"]}],
//!     "initial": ["s0"],
//!     "edges": [["s0", "s0"]]
//! }"#).unwrap();
//! let phi = parse("G p", Some(k.ap())).unwrap();
//! let verdict = model_check(&k, &phi, &CheckOptions::default()).unwrap();
//! assert!(verdict.holds);
//! ```

pub mod automata;
pub mod check;
pub mod error;
pub mod formula;
pub mod kripke;
pub mod oracle;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    //! Keeps the mdbook chapters honest: every fenced Rust snippet in the
    //! guide runs as a doctest.
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            mod $name {}
        };
    }

    chapter!(introduction, "../../../book/src/introduction.md");
    chapter!(teams, "../../../book/src/teams-and-formulas.md");
    chapter!(structures, "../../../book/src/structures-and-macro-paths.md");
    chapter!(pipeline, "../../../book/src/automata-pipeline.md");
    chapter!(oracle, "../../../book/src/oracle.md");
    chapter!(cli, "../../../book/src/cli.md");
}

pub mod cli;
