#![allow(dead_code)]

use std::collections::BTreeSet;

use pldl::modelcheck::{max_search_bound, mc_query, min_search_bound, ColoredGraph};
use pldl::optimize::{Objective, Optimum};
use pldl::oracle::models;
use pldl::realize::{self, dualize, real_query, Transducer};
use pldl::syntax::{parse_formula, parse_system};
use pldl::{Formula, LassoWord, System, Valuation};

/// Hand-built systems over `a` and `b` with at most six states.
pub const SYSTEMS: &[(&str, &str)] = &[
    ("always-a", "props a b\nstate s {a}\ninit s\nedge s s\n"),
    ("silent", "props a b\nstate s\ninit s\nedge s s\n"),
    ("alternate", "props a b\nstate s {a}\nstate t {b}\ninit s\nedge s t\nedge t s\n"),
    ("triangle", "props a b\nstate s {a}\nstate t\nstate u {b}\ninit s\nedge s t\nedge t u\nedge u s\n"),
    ("may-stall", "props a b\nstate s\nstate t {a}\ninit s\nedge s s\nedge s t\nedge t s\n"),
    ("stall-then-b", "props a b\nstate s {a}\nstate t\nstate u {b}\ninit s\nedge s t\nedge t t\nedge t u\nedge u s\n"),
    ("both", "props a b\nstate s {a b}\ninit s\nedge s s\n"),
    ("late-a", "props a b\nstate s\nstate t\nstate u {a}\ninit s\nedge s t\nedge t u\nedge u s\nedge u u\n"),
    ("settle-b", "props a b\nstate s {a}\nstate t {b}\ninit s\nedge s t\nedge t t\n"),
    ("period-four", "props a b\nstate s\nstate t {a}\nstate u\nstate v\ninit s\nedge s t\nedge t u\nedge u v\nedge v s\n"),
    ("branch", "props a b\nstate s {a}\nstate t {b}\nstate u\ninit s\nedge s t\nedge s u\nedge t s\nedge u u\n"),
    ("a-or-b-forever", "props a b\nstate s\nstate t {a}\nstate u {b}\ninit s\nedge s t\nedge s u\nedge t t\nedge u u\n"),
    ("six-ring", "props a b\nstate s0 {a}\nstate s1\nstate s2\nstate s3 {b}\nstate s4\nstate s5\ninit s0\nedge s0 s1\nedge s1 s2\nedge s2 s3\nedge s3 s4\nedge s4 s5\nedge s5 s0\n"),
    ("a-then-silent", "props a b\nstate s {a}\nstate t\ninit s\nedge s t\nedge t t\n"),
    ("diamond-branch", "props a b\nstate s\nstate t {a}\nstate u {b}\nstate v\ninit s\nedge s t\nedge s u\nedge t v\nedge u v\nedge v s\n"),
    ("b-until-a", "props a b\nstate s {b}\nstate t {a}\ninit s\nedge s s\nedge s t\nedge t t\n"),
    ("two-cycles", "props a b\nstate s {a}\nstate t\nstate u {b}\ninit s\nedge s t\nedge t s\nedge t u\nedge u u\nedge u t\n"),
    ("long-wait", "props a b\nstate s\nstate t\nstate u\nstate v\nstate w {a b}\ninit s\nedge s t\nedge t u\nedge u v\nedge v w\nedge w s\nedge w w\n"),
    ("sometimes-both", "props a b\nstate s {a b}\nstate t\ninit s\nedge s t\nedge t s\nedge t t\n"),
    ("b-then-a-forever", "props a b\nstate s {b}\nstate t {a}\ninit s\nedge s t\nedge t t\n"),
];

/// Parameterized diamonds.
pub const DIAMOND_FORMULAS: &[&str] = &[
    "< tt* >{<= x} a",
    "[ tt* ] < tt* >{<= x} a",
    "[ tt* ](a -> < tt* >{<= x} b)",
    "< tt* >{<= x} (a & < tt* >{<= x2} b)",
    "< tt* >{<= x} b | [ tt* ] a",
];

/// Parameterized boxes.
pub const BOX_FORMULAS: &[&str] = &[
    "[ tt* ]{<= y} a",
    "[ tt* ](b -> [ tt ]{<= y} b)",
    "[ tt* ] [ tt* ]{<= y} a",
    "[ tt* ]{<= y} (a | b)",
    "[ tt* ]{<= y} a & [ tt* ]{<= y2} !b",
];

pub fn systems() -> Vec<(&'static str, System)> {
    SYSTEMS.iter().map(|(n, t)| (*n, parse_system(t).unwrap())).collect()
}

pub fn formulas(texts: &[&str]) -> Vec<Formula> {
    texts.iter().map(|t| parse_formula(t).unwrap()).collect()
}

pub const RR: &str = "[ tt* ](req -> < tt* >{<= x} resp)";

/// Every request at `a`, answered two steps later at `c`.
pub fn delayed_response() -> System {
    parse_system("props req resp\nstate a {req}\nstate b\nstate c {resp}\ninit a\nedge a b\nedge b c\nedge c a\n").unwrap()
}

pub fn always_p() -> System {
    parse_system("props p\nstate s {p}\ninit s\nedge s s\n").unwrap()
}

/// Curated degree-two graphs with the expected pumpability. Label bit 0 is
/// the assumption color, bit 1 the guarantee color.
pub fn degree_two_graphs() -> Vec<(&'static str, ColoredGraph, bool)> {
    let g = |succ: Vec<Vec<usize>>, init: usize, label: Vec<u8>, f0: Vec<bool>, f1: Vec<bool>| {
        ColoredGraph::from_parts(succ, init, label, vec![f0, f1], &["p", "q"])
    };
    let all = |n: usize| vec![true; n];
    // two guarantee blocks, each with a cycle that changes the assumption color
    let forced = || g(vec![vec![1], vec![0, 2], vec![3], vec![2, 0]], 0, vec![0, 1, 2, 3], all(4), all(4));
    let mut out = vec![
        ("length-one-blocks", g(vec![vec![1], vec![0]], 0, vec![0, 3], all(2), all(2)), false),
        ("forced-repetition", forced(), true),
        (
            "second-block-monochrome",
            g(vec![vec![1], vec![0, 2], vec![2, 0]], 0, vec![0, 1, 2], all(3), all(3)),
            false,
        ),
        ("guarantee-set-empty", g(forced().succ, 0, forced().label, all(4), vec![false; 4]), false),
        (
            "sparse-acceptance",
            g(forced().succ, 0, forced().label, vec![true, false, false, false], vec![false, false, false, true]),
            true,
        ),
        (
            "no-flip-on-cycle",
            g(vec![vec![1], vec![0, 2], vec![3], vec![2]], 0, vec![0, 1, 2, 3], all(4), all(4)),
            false,
        ),
        (
            "pumpable-part-unreachable",
            g(
                vec![vec![1], vec![0], vec![3], vec![2, 4], vec![5], vec![4, 2]],
                0,
                vec![0, 2, 0, 1, 2, 3],
                all(6),
                all(6),
            ),
            false,
        ),
    ];
    let mut stem = forced();
    stem.succ.push(vec![0]);
    stem.label.push(0);
    stem.accepting[0].push(true);
    stem.accepting[1].push(true);
    stem.sys_state.push(4);
    stem.sys_labels.push(Default::default());
    stem.init = 4;
    out.push(("stem-joins-pumpable-block", stem.clone(), true));
    let mut bad_stem = stem.clone();
    bad_stem.label[4] = 2;
    out.push(("stem-block-of-length-one", bad_stem, false));
    let mut stem_only = stem;
    stem_only.accepting[0] = vec![false, false, false, false, true];
    out.push(("assumption-set-only-on-stem", stem_only, false));
    out.push((
        "three-cycle-change",
        g(vec![vec![1], vec![2], vec![0, 3], vec![4], vec![3, 0]], 0, vec![0, 0, 1, 3, 2], all(5), all(5)),
        true,
    ));
    out
}

pub fn uniform(phi: &Formula, k: u64) -> Valuation {
    Valuation::uniform(phi.all_variables().iter(), k)
}

/// Least uniform value in `0..=hi` at which `sys` satisfies `phi`.
pub fn scan_least(sys: &System, phi: &Formula, hi: u64, at: impl Fn(u64) -> Valuation) -> Option<u64> {
    (0..=hi).find(|&k| mc_query(sys, phi, &at(k)).unwrap())
}

/// Greatest value in `0..=hi` at which `sys` satisfies `phi`, or infinity
/// if it holds at `hi`.
pub fn scan_greatest(sys: &System, phi: &Formula, hi: u64, at: impl Fn(u64) -> Valuation) -> Option<Optimum> {
    let holds: Vec<bool> = (0..=hi).map(|k| mc_query(sys, phi, &at(k)).unwrap()).collect();
    if holds[hi as usize] {
        return Some(Optimum::Infinite);
    }
    holds.iter().rposition(|&h| h).map(|k| Optimum::Finite(k as u64))
}

/// Optimum by linear scan over the search bounds.
pub fn mc_scan(sys: &System, phi: &Formula, obj: Objective) -> Option<Optimum> {
    let vars = phi.all_variables();
    match obj {
        Objective::MinMax => {
            let hi = min_search_bound(sys, phi).unwrap()?;
            scan_least(sys, phi, hi, |k| uniform(phi, k)).map(Optimum::Finite)
        }
        Objective::MinMin => {
            let hi = min_search_bound(sys, phi).unwrap()?;
            vars.iter()
                .filter_map(|x| scan_least(sys, phi, hi, |k| uniform(phi, hi).with(x, k)))
                .min()
                .map(Optimum::Finite)
        }
        Objective::MaxMin => {
            let z = "z_";
            let psi = phi.rename_all_vars_to(z).unwrap();
            let hi = max_search_bound(sys, &psi).unwrap();
            scan_greatest(sys, &psi, hi, |k| Valuation::new().with(z, k))
        }
        Objective::MaxMax => vars
            .iter()
            .filter_map(|y| {
                let psi = phi.fix_all_but_one_box(y).unwrap();
                let hi = max_search_bound(sys, &psi).unwrap();
                scan_greatest(sys, &psi, hi, |k| Valuation::new().with(y, k))
            })
            .max(),
    }
}

/// Every outcome against input lassos of length at most 4 satisfies `phi`.
pub fn closed_loop(t: &Transducer, phi: &Formula, alpha: &Valuation) -> Result<(), String> {
    let ins: Vec<&str> = t.inputs.iter().map(String::as_str).collect();
    for w in LassoWord::enumerate(&ins, 4) {
        let out = t.outcome(&w);
        if !models(&out, alpha, phi) {
            return Err(format!("input {w} gives {out}"));
        }
    }
    Ok(())
}

/// Min objectives by scanning up to the realizability bound.
pub fn real_scan_min(phi: &Formula, i: &BTreeSet<String>, o: &BTreeSet<String>, obj: Objective) -> Option<u64> {
    let vars = phi.all_variables();
    let hi = realize::min_search_bound(phi, i, o).unwrap()?;
    let q = |a: &Valuation| real_query(phi, i, o, a).unwrap().realizable;
    match obj {
        Objective::MinMax => (0..=hi).find(|&k| q(&Valuation::uniform(vars.iter(), k))),
        _ => vars
            .iter()
            .filter_map(|x| (0..=hi).find(|&k| q(&Valuation::uniform(vars.iter(), hi).with(x, k))))
            .min(),
    }
}

/// Max objectives by scanning the original formula up to the dual bound.
pub fn real_scan_max(phi: &Formula, i: &BTreeSet<String>, o: &BTreeSet<String>, obj: Objective) -> Option<Optimum> {
    let vars = phi.all_variables();
    let single = |psi: &Formula, y: &str| -> Option<Optimum> {
        let dual = dualize(psi, i, o);
        let Some(hi) = realize::min_search_bound(&dual, o, i).unwrap() else { return Some(Optimum::Infinite) };
        let holds: Vec<bool> =
            (0..=hi).map(|k| real_query(psi, i, o, &Valuation::new().with(y, k)).unwrap().realizable).collect();
        if holds[hi as usize] {
            return Some(Optimum::Infinite);
        }
        holds.iter().rposition(|&h| h).map(|k| Optimum::Finite(k as u64))
    };
    match obj {
        Objective::MaxMin => single(&phi.rename_all_vars_to("z").unwrap(), "z"),
        _ => vars.iter().filter_map(|y| single(&phi.fix_all_but_one_box(y).unwrap(), y)).max(),
    }
}
