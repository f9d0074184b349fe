use std::collections::BTreeSet;

mod common;

use common::{closed_loop, real_scan_max, real_scan_min};
use pldl::gen::{self, GenOptions};
use pldl::optimize::{Objective, Optimum};
use pldl::realize::*;
use pldl::syntax::parse_formula;
use pldl::{Formula, Valuation};

fn set(ps: &[&str]) -> BTreeSet<String> {
    ps.iter().map(|p| p.to_string()).collect()
}

fn io() -> (BTreeSet<String>, BTreeSet<String>) {
    (set(&["i"]), set(&["o"]))
}

fn corpus(seed: u64, n: usize, vars: &[&str], boxes: bool) -> Vec<Formula> {
    let mut opts = GenOptions::ldl(&["i", "o"]).with_vars(vars);
    if !boxes {
        opts = opts.without_boxes();
    }
    gen::corpus(seed, n, &opts, 6)
}

#[test]
fn realize_is_sound_in_closed_loop() {
    let (i, o) = io();
    let mut realizable = 0;
    for phi in corpus(11, 60, &["x"], false) {
        let run = realize_run(&phi, &i, &o).unwrap();
        let g = &run.game;
        let sol = solve_parity(g);
        assert!(strategy_wins(g, &sol, sol.winner[g.init]), "{phi}");
        if let RealVerdict { realizable: true, valuation: Some(alpha), strategy: Some(t) } = &run.verdict {
            realizable += 1;
            let n = run.colored.as_ref().unwrap().len() as u64;
            assert!(alpha.iter().all(|(_, &v)| v <= 2 * n + 2));
            closed_loop(t, &phi, alpha).unwrap_or_else(|e| panic!("{phi}: {e}"));
            assert!(real_query(&phi, &i, &o, alpha).unwrap().realizable, "{phi} at {alpha}");
        } else {
            assert!(!run.verdict.realizable);
        }
    }
    assert!(realizable > 10);
}

#[test]
fn duality_at_pinned_valuations() {
    let (i, o) = io();
    let mut checked = 0;
    for phi in corpus(5, 30, &["x", "y"], true) {
        for k in [0, 1, 2] {
            let alpha = Valuation::uniform(phi.all_variables().iter(), k);
            let here = real_query(&phi, &i, &o, &alpha).unwrap();
            let dual = real_query(&dualize(&phi, &i, &o), &o, &i, &alpha).unwrap();
            assert_ne!(here.realizable, dual.realizable, "{phi} at {alpha}");
            let winner = if here.realizable { here } else { dual.clone() };
            let t = winner.strategy.unwrap();
            let target = if dual.realizable { dualize(&phi, &i, &o) } else { phi.clone() };
            closed_loop(&t, &target, &alpha).unwrap_or_else(|e| panic!("{phi}: {e}"));
            checked += 1;
        }
    }
    assert!(checked >= 10);
}

#[test]
fn solver_partitions_and_wins() {
    let (i, o) = io();
    for phi in corpus(3, 30, &["x"], true) {
        let alpha = Valuation::uniform(phi.all_variables().iter(), 1);
        let v = real_query(&phi, &i, &o, &alpha).unwrap();
        if let Some(t) = v.strategy {
            closed_loop(&t, &phi, &alpha).unwrap_or_else(|e| panic!("{phi}: {e}"));
        }
    }
    // both players' strategies on random games win from where they win
    let dpa_run = realize_run(&parse_formula("[ tt* ](i -> < tt* >{<= x} o)").unwrap(), &i, &o).unwrap();
    let sol = solve_parity(&dpa_run.game);
    for v in 0..dpa_run.game.len() {
        let mut g = dpa_run.game.clone();
        g.init = v;
        assert!(strategy_wins(&g, &sol, sol.winner[v]));
    }
}

#[test]
fn optimization_matches_linear_scan() {
    let (i, o) = io();
    let diamonds: Vec<Formula> = corpus(21, 40, &["x", "x2"], false)
        .into_iter()
        .filter(|f| !f.all_variables().is_empty())
        .take(12)
        .collect();
    for phi in &diamonds {
        for obj in [Objective::MinMax, Objective::MinMin] {
            let got = real_optimize(phi, &i, &o, obj).unwrap();
            assert_eq!(got.as_ref().map(|r| r.value), real_scan_min(phi, &i, &o, obj).map(Optimum::Finite), "{obj} {phi}");
            if let Some(RealOptimum { valuation: Some(a), strategy: Some(t), .. }) = got {
                closed_loop(&t, phi, &a).unwrap();
            }
        }
    }
    let boxes: Vec<Formula> = corpus(23, 200, &["y", "y2"], true)
        .into_iter()
        .filter(|f| f.is_pldl_box() && !f.all_variables().is_empty())
        .take(10)
        .collect();
    assert!(boxes.len() >= 5);
    for phi in &boxes {
        for obj in [Objective::MaxMax, Objective::MaxMin] {
            let got = real_optimize(phi, &i, &o, obj).unwrap();
            assert_eq!(got.as_ref().map(|r| r.value), real_scan_max(phi, &i, &o, obj), "{obj} {phi}");
            if let Some(RealOptimum { valuation: Some(a), strategy: Some(t), .. }) = got {
                closed_loop(&t, phi, &a).unwrap();
            }
        }
    }
}

#[test]
fn delayed_response_needs_one_step() {
    let phi = parse_formula("!o & < tt* >{<= x} o").unwrap();
    let (i, o) = io();
    assert!(!real_query(&phi, &i, &o, &Valuation::new().with("x", 0)).unwrap().realizable);
    assert!(real_query(&phi, &i, &o, &Valuation::new().with("x", 1)).unwrap().realizable);
    let best = real_optimize(&phi, &i, &o, Objective::MinMax).unwrap().unwrap();
    assert_eq!(best.value, Optimum::Finite(1));
}

#[test]
fn unbounded_box_is_infinite() {
    let phi = parse_formula("[ tt* ]{<= y} o").unwrap();
    let (i, o) = io();
    let best = real_optimize(&phi, &i, &o, Objective::MaxMax).unwrap().unwrap();
    assert_eq!(best.value, Optimum::Infinite);
    let blocked = parse_formula("[ tt ; tt* ]{<= y} (o & !o)").unwrap();
    assert_eq!(real_optimize(&blocked, &i, &o, Objective::MaxMax).unwrap().map(|r| r.value), Some(Optimum::Finite(0)));
    assert!(matches!(real_optimize(&phi, &i, &o, Objective::MinMax), Err(pldl::Error::WrongFragment(_))));
}

#[test]
fn partition_is_checked() {
    let phi = parse_formula("i & o").unwrap();
    assert!(realize(&phi, &set(&["i"]), &set(&[])).is_err());
    assert!(realize(&phi, &set(&["i", "o"]), &set(&["o"])).is_err());
}
