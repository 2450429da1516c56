//! Command-line front end: `inqmc check|classify|oracle|bench`.
//!
//! Exit codes: 0 the property holds, 1 it is violated, 2 an error or
//! fragment refusal, 3 the two engines disagree (a bug signal).

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::check::{model_check, validate_atoms, CheckOptions, Verdict, DEFAULT_STATE_BUDGET};
use crate::error::{Error, Result};
use crate::formula::{classify, parse, Formula};
use crate::kripke::KripkeStructure;
use crate::oracle::{
    eval_macro_lasso_bounded, eval_team_finite, team_vs_macro_check, BoundedVerdict, FiniteTeam,
    DEFAULT_TEAM_BOUND,
};

pub const EXIT_HOLDS: i32 = 0;
pub const EXIT_VIOLATED: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_DISAGREE: i32 = 3;

#[derive(Parser)]
#[command(name = "inqmc", version, about = "Model checker for left-positive InqLTL")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a structure against a formula.
    Check(CheckArgs),
    /// Report the fragment a formula belongs to.
    Classify(ClassifyArgs),
    /// Run the reference semantics: finite teams and bounded macro-lassos.
    Oracle(OracleArgs),
    /// Run a corpus of instances and print a CSV timing table.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Engine {
    Automata,
    Oracle,
    Both,
}

#[derive(Args)]
struct CheckArgs {
    /// Structure file (JSON).
    #[arg(long)]
    structure: PathBuf,
    /// Formula text.
    #[arg(long)]
    formula: Option<String>,
    /// File containing the formula text.
    #[arg(long)]
    formula_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "automata")]
    engine: Engine,
    /// Bound on stem+period of enumerated sub-macro-lassos (oracle engines).
    #[arg(long, default_value_t = 8)]
    max_lasso: usize,
    /// Cap on automaton states per construction stage.
    #[arg(long, env = "INQMC_STATE_BUDGET")]
    state_budget: Option<usize>,
    /// Print per-stage sizes and timings.
    #[arg(long)]
    stats: bool,
    /// Machine-readable output.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Formula text.
    #[arg(long)]
    formula: Option<String>,
    #[arg(long)]
    formula_file: Option<PathBuf>,
    /// Optional structure providing the proposition alphabet (needed for
    /// `card1`).
    #[arg(long)]
    structure: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct OracleArgs {
    /// Structure with finitely many initial paths.
    #[arg(long)]
    structure: Option<PathBuf>,
    /// Explicit team file (JSON).
    #[arg(long)]
    team: Option<PathBuf>,
    #[arg(long)]
    formula: Option<String>,
    #[arg(long)]
    formula_file: Option<PathBuf>,
    /// Largest team the exact evaluator will accept.
    #[arg(long, default_value_t = DEFAULT_TEAM_BOUND)]
    team_bound: usize,
    #[arg(long, env = "INQMC_STATE_BUDGET")]
    state_budget: Option<usize>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// Directory containing `manifest.json` and the referenced files.
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long, env = "INQMC_STATE_BUDGET")]
    state_budget: Option<usize>,
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version with its own exit codes.
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_HOLDS };
        }
    };
    let outcome = match cli.command {
        Command::Check(a) => cmd_check(a),
        Command::Classify(a) => cmd_classify(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

fn read_formula(
    formula: &Option<String>,
    formula_file: &Option<PathBuf>,
    ap: Option<&[String]>,
) -> Result<Formula> {
    let text = match (formula, formula_file) {
        (Some(t), None) => t.clone(),
        (None, Some(path)) => std::fs::read_to_string(path)?,
        _ => {
            return Err(Error::Oracle(
                "provide exactly one of --formula and --formula-file".into(),
            ))
        }
    };
    Ok(parse(text.trim(), ap)?)
}

fn load_structure(path: &Path) -> Result<KripkeStructure> {
    KripkeStructure::from_json(&std::fs::read_to_string(path)?)
}

fn budget(explicit: Option<usize>) -> usize {
    explicit.unwrap_or(DEFAULT_STATE_BUDGET)
}

fn cmd_check(a: CheckArgs) -> Result<i32> {
    let k = load_structure(&a.structure)?;
    let f = read_formula(&a.formula, &a.formula_file, Some(k.ap()))?;
    validate_atoms(&k, &f)?;
    let options = CheckOptions {
        state_budget: budget(a.state_budget),
        want_witness: true,
    };

    let automata_verdict = match a.engine {
        Engine::Automata | Engine::Both => Some(model_check(&k, &f, &options)?),
        Engine::Oracle => None,
    };
    let oracle_verdict = match a.engine {
        Engine::Oracle | Engine::Both => {
            let rho0 = k.initial_macro_lasso();
            Some(eval_macro_lasso_bounded(&k, &rho0, &f, a.max_lasso)?)
        }
        Engine::Automata => None,
    };

    let (holds, disagree) = match (&automata_verdict, &oracle_verdict) {
        (Some(av), Some(ov)) => (av.holds, av.holds != ov.holds),
        (Some(av), None) => (av.holds, false),
        (None, Some(ov)) => (ov.holds, false),
        (None, None) => unreachable!(),
    };

    if a.json {
        let report = classify(&f);
        let out = json!({
            "holds": holds,
            "engine": match a.engine {
                Engine::Automata => "automata",
                Engine::Oracle => "oracle",
                Engine::Both => "both",
            },
            "fragment": {
                "positive": report.is_positive,
                "left_positive": report.is_left_positive,
                "implication_depth": report.implication_depth,
            },
            "agreement": automata_verdict.as_ref().and(oracle_verdict.as_ref())
                .map(|_| !disagree),
            "stages": automata_verdict.as_ref().map(|v| &v.stages),
            "total_millis": automata_verdict.as_ref().map(|v| v.total_millis),
            "oracle": oracle_verdict.as_ref().map(|o| json!({
                "holds": o.holds,
                "advisory": o.advisory,
                "bound": a.max_lasso,
            })),
            "witness": witness_text(&k, &automata_verdict, &oracle_verdict),
        });
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        print_human(&k, &f, &automata_verdict, &oracle_verdict, a.stats, a.max_lasso);
    }

    if disagree {
        return Ok(EXIT_DISAGREE);
    }
    Ok(if holds { EXIT_HOLDS } else { EXIT_VIOLATED })
}

fn witness_text(
    k: &KripkeStructure,
    automata: &Option<Verdict>,
    oracle: &Option<BoundedVerdict>,
) -> Option<String> {
    if let Some(o) = oracle {
        if let Some(w) = &o.witness {
            return Some(k.show_macro_lasso(w));
        }
    }
    automata
        .as_ref()
        .and_then(|v| v.witness.as_ref())
        .map(|w| k.show_macro_lasso(w))
}

fn print_human(
    k: &KripkeStructure,
    f: &Formula,
    automata: &Option<Verdict>,
    oracle: &Option<BoundedVerdict>,
    stats: bool,
    bound: usize,
) {
    let report = classify(f);
    let fragment = if report.is_positive {
        "positive".to_string()
    } else if report.is_left_positive {
        "left-positive".to_string()
    } else {
        "general".to_string()
    };
    println!("formula: {f}");
    println!("fragment: {fragment}, k={}", report.implication_depth);
    if let Some(v) = automata {
        println!(
            "automata: {} ({} ms)",
            if v.holds { "holds" } else { "violated" },
            v.total_millis
        );
        if stats {
            for s in &v.stages {
                println!("  stage {:<40} states {:>8}  {:>6} ms", s.stage, s.states, s.millis);
            }
        }
    }
    if let Some(o) = oracle {
        println!(
            "oracle (bound {bound}): {}{}",
            if o.holds { "holds" } else { "violated" },
            if o.advisory { " [advisory: bounded enumeration]" } else { "" }
        );
    }
    if let (Some(av), Some(ov)) = (automata, oracle) {
        println!(
            "agreement: {}",
            if av.holds == ov.holds { "yes" } else { "NO — bug signal" }
        );
    }
    if let Some(w) = witness_text(k, automata, oracle) {
        println!("counterexample sub-macro-lasso: {w}");
    }
}

fn cmd_classify(a: ClassifyArgs) -> Result<i32> {
    let ap = match &a.structure {
        Some(path) => Some(load_structure(path)?.ap().to_vec()),
        None => None,
    };
    let f = read_formula(&a.formula, &a.formula_file, ap.as_deref())?;
    let report = classify(&f);
    if a.json {
        let out = json!({
            "formula": f.to_string(),
            "positive": report.is_positive,
            "left_positive": report.is_left_positive,
            "implication_depth": report.implication_depth,
            "offending": report.offending.as_ref().map(|o| &o.pretty),
        });
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        let fragment = if report.is_positive {
            "positive"
        } else if report.is_left_positive {
            "left-positive"
        } else {
            "not left-positive"
        };
        println!("{fragment}, k={}", report.implication_depth);
        if let Some(off) = &report.offending {
            println!("offending antecedent: {}", off.pretty);
        }
    }
    Ok(EXIT_HOLDS)
}

fn cmd_oracle(a: OracleArgs) -> Result<i32> {
    match (&a.structure, &a.team) {
        (Some(path), None) => {
            let k = load_structure(path)?;
            let f = read_formula(&a.formula, &a.formula_file, Some(k.ap()))?;
            let options = CheckOptions {
                state_budget: budget(a.state_budget),
                want_witness: false,
            };
            let report = team_vs_macro_check(&k, &f, a.team_bound, &options)?;
            if a.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "team_holds": report.team_holds,
                        "automata_holds": report.automata_holds,
                        "paths": report.paths,
                        "agreement": report.agree(),
                    }))?
                );
            } else {
                println!(
                    "team of {} initial traces: {}",
                    report.paths,
                    if report.team_holds { "holds" } else { "violated" }
                );
                println!(
                    "automata: {}",
                    if report.automata_holds { "holds" } else { "violated" }
                );
                println!("agreement: {}", if report.agree() { "yes" } else { "NO — bug signal" });
            }
            if !report.agree() {
                return Ok(EXIT_DISAGREE);
            }
            Ok(if report.team_holds { EXIT_HOLDS } else { EXIT_VIOLATED })
        }
        (None, Some(path)) => {
            let team = FiniteTeam::from_json(&std::fs::read_to_string(path)?)?;
            let f = read_formula(&a.formula, &a.formula_file, Some(team.ap()))?;
            let team_holds = eval_team_finite(&team, &f, a.team_bound)?;
            let mut singleton_holds = Vec::new();
            for t in team.traces() {
                let single = FiniteTeam::new(team.ap().to_vec(), vec![t.clone()]);
                singleton_holds.push(eval_team_finite(&single, &f, a.team_bound)?);
            }
            let all_singletons = singleton_holds.iter().all(|&b| b);
            if a.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "team_holds": team_holds,
                        "singletons_hold": singleton_holds,
                        "all_singletons_hold": all_singletons,
                    }))?
                );
            } else {
                println!(
                    "team of {} traces: {}",
                    team.len(),
                    if team_holds { "holds" } else { "violated" }
                );
                println!(
                    "singletons: {}",
                    if all_singletons {
                        "all hold".to_string()
                    } else {
                        format!(
                            "{} of {} hold",
                            singleton_holds.iter().filter(|&&b| b).count(),
                            singleton_holds.len()
                        )
                    }
                );
            }
            Ok(if team_holds { EXIT_HOLDS } else { EXIT_VIOLATED })
        }
        _ => Err(Error::Oracle(
            "provide exactly one of --structure and --team".into(),
        )),
    }
}

#[derive(serde::Deserialize)]
struct ManifestEntry {
    name: String,
    structure: String,
    formula: String,
    /// Per-instance override, e.g. to demonstrate budget exhaustion.
    state_budget: Option<usize>,
}

fn cmd_bench(a: BenchArgs) -> Result<i32> {
    let manifest_path = a.corpus.join("manifest.json");
    let entries: Vec<ManifestEntry> =
        serde_json::from_str(&std::fs::read_to_string(&manifest_path)?)?;
    println!("name,verdict,states_max,total_millis,note");
    for e in &entries {
        let row = bench_instance(&a, e);
        match row {
            Ok((verdict, states, millis)) => {
                println!("{},{verdict},{states},{millis},", e.name);
            }
            Err(err) => {
                let note = err.to_string().replace(',', ";");
                println!("{},error,,,{note}", e.name);
            }
        }
    }
    Ok(EXIT_HOLDS)
}

fn bench_instance(a: &BenchArgs, e: &ManifestEntry) -> Result<(String, usize, u128)> {
    let k = load_structure(&a.corpus.join(&e.structure))?;
    let text = std::fs::read_to_string(a.corpus.join(&e.formula))?;
    let f = parse(text.trim(), Some(k.ap()))?;
    validate_atoms(&k, &f)?;
    let options = CheckOptions {
        state_budget: e.state_budget.unwrap_or_else(|| budget(a.state_budget)),
        want_witness: false,
    };
    let v = model_check(&k, &f, &options)?;
    let states_max = v.stages.iter().map(|s| s.states).max().unwrap_or(0);
    Ok((
        if v.holds { "holds".into() } else { "violated".into() },
        states_max,
        v.total_millis,
    ))
}
