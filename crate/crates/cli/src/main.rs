use std::collections::BTreeSet;
use std::fs;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use pldl::automata::{build_aba, build_parametric, counter_breakpoint, determinize, mh_to_nba, region_bounds, Aba, Alphabet, Nba};
use pldl::dot::ToDot;
use pldl::gen::{self, GenOptions};
use pldl::modelcheck::{ag_check, implication, mc_optimize, model_check};
use pldl::optimize::Objective;
use pldl::oracle::{models, models_with_color};
use pldl::realize::{real_optimize, realize};
use pldl::syntax::{parse_formula_with, parse_lasso, parse_system, parse_valuation, ParseOptions};
use pldl::{Formula, LassoWord, System, Valuation};

/// Parametric linear dynamic logic: translation, model checking and
/// synthesis.
///
/// Formula, system and lasso arguments are given inline or as `@path`.
/// Exit code 0 means a positive verdict, 1 a negative one and 2 a usage or
/// parse error.
#[derive(Parser, Debug)]
#[command(name = "pldl", version)]
struct Cli {
    /// Accept `{cp}` operators in input formulas.
    #[arg(long, global = true)]
    allow_cp: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Report the fragment of a formula.
    Classify { formula: String },
    /// Print the negation normal form of the negated formula.
    Negate { formula: String },
    /// Print the alternating automaton of a formula.
    ToAba(Translate),
    /// Print the nondeterministic Büchi automaton of a formula.
    ToNba(Translate),
    /// Print the deterministic parity automaton of a formula.
    ToDpa(Translate),
    /// Model check a system against a formula.
    Mc { system: String, formula: String },
    /// Compute an optimal valuation for which the system satisfies the formula.
    McOpt {
        system: String,
        formula: String,
        #[arg(long)]
        objective: Objective,
    },
    /// Check that a bounded assumption yields a bounded guarantee.
    Agmc { system: String, assume: String, guarantee: String },
    /// Check the implication on all words over the given propositions.
    Implies {
        assume: String,
        guarantee: String,
        #[arg(long, value_delimiter = ',')]
        props: Vec<String>,
    },
    /// Decide realizability and print a winning strategy.
    Realize(Partition),
    /// Compute an optimal valuation for which the formula is realizable.
    RealizeOpt {
        #[command(flatten)]
        partition: Partition,
        #[arg(long)]
        objective: Objective,
    },
    /// Evaluate a formula on a lasso word with the direct semantics.
    Eval {
        lasso: String,
        formula: String,
        #[arg(long, default_value = "")]
        valuation: String,
        /// Proposition whose flips mark changepoints.
        #[arg(long, default_value = "p")]
        color: String,
    },
    /// Compare the Büchi translation with the direct semantics on a random corpus.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        count: usize,
    },
}

#[derive(Args, Debug)]
struct Translate {
    formula: String,
    /// Valuation imposed on bounded operators, as `x=3,y=0`.
    #[arg(long)]
    valuation: Option<String>,
    /// Proposition whose flips mark changepoints.
    #[arg(long, default_value = "p")]
    color: String,
    #[arg(long)]
    dot: bool,
}

#[derive(Args, Debug)]
struct Partition {
    formula: String,
    #[arg(long, value_delimiter = ',')]
    inputs: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    outputs: Vec<String>,
}

/// Reads `@path` arguments from disk.
fn text(arg: &str) -> Result<String> {
    match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).with_context(|| format!("reading {path}")),
        None => Ok(arg.to_string()),
    }
}

fn formula(arg: &str, allow_cp: bool) -> Result<Formula> {
    Ok(parse_formula_with(text(arg)?.trim(), ParseOptions { allow_cp })?)
}

fn system(arg: &str) -> Result<System> {
    let t = if arg.starts_with('@') { text(arg)? } else { fs::read_to_string(arg).with_context(|| format!("reading {arg}"))? };
    Ok(parse_system(&t)?)
}

fn valuation(arg: &str) -> Result<Valuation> {
    if arg.trim().is_empty() {
        return Ok(Valuation::new());
    }
    Ok(parse_valuation(arg)?)
}

fn set(v: &[String]) -> BTreeSet<String> {
    v.iter().map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}

fn verdict(positive: bool) -> ExitCode {
    ExitCode::from(if positive { 0 } else { 1 })
}

fn alphabet(phi: &Formula, color: &str) -> Result<Alphabet> {
    let mut props = phi.props();
    if phi.has_changepoint_ops() {
        props.insert(color.to_string());
    }
    Ok(Alphabet::new(props)?)
}

fn aba(t: &Translate, allow_cp: bool) -> Result<(Formula, Aba)> {
    let phi = formula(&t.formula, allow_cp)?;
    let alphabet = alphabet(&phi, &t.color)?;
    let a = if phi.is_variable_free() { build_aba(&phi, &alphabet, &t.color)? } else { build_parametric(&phi, &alphabet)? };
    Ok((phi, a))
}

fn nba(t: &Translate, allow_cp: bool) -> Result<Nba> {
    let (phi, a) = aba(t, allow_cp)?;
    let n = if phi.is_variable_free() {
        mh_to_nba(&a)
    } else {
        let Some(v) = &t.valuation else { bail!("the formula has variables; pass --valuation") };
        counter_breakpoint(&a, &region_bounds(&a, &valuation(v)?)?)?
    };
    Ok(n.trim())
}

fn emit(dot: bool, obj: &(impl ToDot + std::fmt::Display)) {
    if dot {
        print!("{}", obj.to_dot());
    } else {
        print!("{obj}");
    }
}

/// Checks the Büchi translation against the direct semantics on `count`
/// random formulas over `a` and the color `p`, with every lasso of length
/// at most 4. Returns the first disagreement.
fn selftest(seed: u64, count: usize) -> Result<usize, String> {
    let props = ["p", "a"];
    let alphabet = Alphabet::new(props).map_err(|e| e.to_string())?;
    let words = LassoWord::enumerate(&props, 4);
    let opts = GenOptions::ldl(&props).with_changepoints();
    let none = Valuation::new();
    for phi in gen::corpus(seed, count, &opts, 10) {
        let nba = mh_to_nba(&build_aba(&phi, &alphabet, "p").map_err(|e| e.to_string())?);
        if let Some(w) = words.iter().find(|w| nba.accepts(w) != models_with_color(w, &none, &phi, "p")) {
            return Err(format!("{phi} on {w}"));
        }
    }
    Ok(count)
}

fn run(cli: Cli) -> Result<ExitCode> {
    let cp = cli.allow_cp;
    Ok(match cli.cmd {
        Cmd::Classify { formula: f } => {
            let tag = formula(&f, cp)?.classify();
            println!("{}", tag.name());
            verdict(tag != pldl::FragmentTag::NotWellFormed)
        }
        Cmd::Negate { formula: f } => {
            println!("{}", formula(&f, cp)?.negate());
            ExitCode::SUCCESS
        }
        Cmd::ToAba(t) => {
            emit(t.dot, &aba(&t, cp)?.1);
            ExitCode::SUCCESS
        }
        Cmd::ToNba(t) => {
            emit(t.dot, &nba(&t, cp)?);
            ExitCode::SUCCESS
        }
        Cmd::ToDpa(t) => {
            emit(t.dot, &determinize(&nba(&t, cp)?));
            ExitCode::SUCCESS
        }
        Cmd::Mc { system: s, formula: f } => {
            let v = model_check(&system(&s)?, &formula(&f, cp)?)?;
            print!("{}", v.report());
            verdict(v.satisfied)
        }
        Cmd::McOpt { system: s, formula: f, objective } => {
            let best = mc_optimize(&system(&s)?, &formula(&f, cp)?, objective)?;
            match best {
                Some(k) => println!("OPTIMUM {k}"),
                None => println!("OPTIMUM none"),
            }
            verdict(best.is_some())
        }
        Cmd::Agmc { system: s, assume, guarantee } => {
            let v = ag_check(&system(&s)?, &formula(&assume, cp)?, &formula(&guarantee, cp)?)?;
            print!("{}", v.report());
            verdict(v.satisfied)
        }
        Cmd::Implies { assume, guarantee, props } => {
            let (a, g) = (formula(&assume, cp)?, formula(&guarantee, cp)?);
            let mut ps = set(&props);
            if ps.is_empty() {
                ps = a.props().union(&g.props()).cloned().collect();
            }
            let holds = implication(&a, &g, &ps)?;
            println!("RESULT {}", if holds { "valid" } else { "invalid" });
            verdict(holds)
        }
        Cmd::Realize(p) => {
            let v = realize(&formula(&p.formula, cp)?, &set(&p.inputs), &set(&p.outputs))?;
            print!("{}", v.report());
            verdict(v.realizable)
        }
        Cmd::RealizeOpt { partition: p, objective } => {
            let best = real_optimize(&formula(&p.formula, cp)?, &set(&p.inputs), &set(&p.outputs), objective)?;
            match &best {
                Some(r) => {
                    println!("OPTIMUM {}", r.value);
                    if let Some(v) = &r.valuation {
                        println!("VALUATION {v}");
                    }
                    if let Some(t) = &r.strategy {
                        print!("{}", t.to_text());
                    }
                }
                None => println!("OPTIMUM none"),
            }
            verdict(best.is_some())
        }
        Cmd::Eval { lasso, formula: f, valuation: v, color } => {
            let w = parse_lasso(text(&lasso)?.trim())?;
            let phi = formula(&f, cp)?;
            let alpha = valuation(&v)?;
            if let Some(x) = phi.all_variables().into_iter().find(|x| !alpha.contains(x)) {
                return Err(pldl::Error::UnassignedVariable(x).into());
            }
            let holds = if phi.has_changepoint_ops() { models_with_color(&w, &alpha, &phi, &color) } else { models(&w, &alpha, &phi) };
            println!("{holds}");
            verdict(holds)
        }
        Cmd::Selftest { seed, count } => match selftest(seed, count) {
            Ok(n) => {
                println!("PASS {n} formulas");
                ExitCode::SUCCESS
            }
            Err(e) => {
                println!("FAIL {e}");
                ExitCode::from(1)
            }
        },
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
