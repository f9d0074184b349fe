//! Seeded random formulas, words and systems for testing and benchmarking.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formula::{Formula, PropFormula, Regex};
use crate::system::System;
use crate::word::{LassoWord, Letter};

/// Which constructs random formulas may use.
#[derive(Clone, Debug)]
pub struct GenOptions {
    pub props: Vec<String>,
    /// Variables for bounded operators; empty means none are generated.
    pub vars: Vec<String>,
    pub changepoints: bool,
    pub tests: bool,
    pub boxes: bool,
}

impl GenOptions {
    pub fn ldl(props: &[&str]) -> Self {
        GenOptions {
            props: props.iter().map(|p| p.to_string()).collect(),
            vars: Vec::new(),
            changepoints: false,
            tests: true,
            boxes: true,
        }
    }

    pub fn with_vars(mut self, vars: &[&str]) -> Self {
        self.vars = vars.iter().map(|v| v.to_string()).collect();
        self
    }

    pub fn with_changepoints(mut self) -> Self {
        self.changepoints = true;
        self
    }

    pub fn without_boxes(mut self) -> Self {
        self.boxes = false;
        self
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random formula whose syntax tree has roughly `budget` nodes.
pub fn formula(rng: &mut impl Rng, opts: &GenOptions, budget: usize) -> Formula {
    if budget <= 1 {
        return literal(rng, opts);
    }
    match rng.gen_range(0..10) {
        0 | 1 => {
            let l = rng.gen_range(1..budget);
            Formula::and(formula(rng, opts, l), formula(rng, opts, budget - l))
        }
        2 | 3 => {
            let l = rng.gen_range(1..budget);
            Formula::or(formula(rng, opts, l), formula(rng, opts, budget - l))
        }
        _ => {
            let rb = rng.gen_range(1..budget.max(2)).min(4);
            let r = regex(rng, opts, rb);
            let body = formula(rng, opts, budget.saturating_sub(rb + 1).max(1));
            modal(rng, opts, r, body)
        }
    }
}

fn literal(rng: &mut impl Rng, opts: &GenOptions) -> Formula {
    match rng.gen_range(0..8) {
        0 => Formula::True,
        1 => Formula::False,
        k => {
            let p = opts.props.choose(rng).expect("at least one proposition");
            if k % 2 == 0 {
                Formula::atom(p)
            } else {
                Formula::neg_atom(p)
            }
        }
    }
}

fn modal(rng: &mut impl Rng, opts: &GenOptions, r: Regex, body: Formula) -> Formula {
    let diamond = !opts.boxes || rng.gen_bool(0.5);
    let kind = rng.gen_range(0..4);
    if kind == 0 && !opts.vars.is_empty() {
        let v = opts.vars.choose(rng).unwrap();
        if diamond {
            Formula::diamond_le(r, v, body)
        } else {
            Formula::box_le(r, v, body)
        }
    } else if kind == 1 && opts.changepoints {
        if diamond {
            Formula::diamond_cp(r, body)
        } else {
            Formula::box_cp(r, body)
        }
    } else if diamond {
        Formula::diamond(r, body)
    } else {
        Formula::boxed(r, body)
    }
}

fn prop_formula(rng: &mut impl Rng, opts: &GenOptions) -> PropFormula {
    match rng.gen_range(0..6) {
        0 => PropFormula::True,
        1 => PropFormula::negated(PropFormula::atom(opts.props.choose(rng).unwrap())),
        2 if opts.props.len() > 1 => PropFormula::and(
                PropFormula::atom(opts.props.choose(rng).unwrap()),
                PropFormula::atom(opts.props.choose(rng).unwrap()),
        ),
        _ => PropFormula::atom(opts.props.choose(rng).unwrap()),
    }
}

/// Random regular expression with about `budget` nodes.
pub fn regex(rng: &mut impl Rng, opts: &GenOptions, budget: usize) -> Regex {
    if budget <= 1 {
        if opts.tests && rng.gen_range(0..5) == 0 {
            return Regex::test(literal(rng, opts));
        }
        return Regex::prop(prop_formula(rng, opts));
    }
    match rng.gen_range(0..7) {
        0 | 1 => Regex::star(regex(rng, opts, budget - 1)),
        2 | 3 => {
            let l = rng.gen_range(1..budget);
            Regex::concat(regex(rng, opts, l), regex(rng, opts, budget - l))
        }
        4 => {
            let l = rng.gen_range(1..budget);
            Regex::union(regex(rng, opts, l), regex(rng, opts, budget - l))
        }
        _ if opts.tests => Regex::test(formula(rng, opts, budget - 1)),
        _ => Regex::star(regex(rng, opts, budget - 1)),
    }
}

/// `n` formulas with budgets cycling through `1..=max_budget`.
pub fn corpus(seed: u64, n: usize, opts: &GenOptions, max_budget: usize) -> Vec<Formula> {
    let mut r = rng(seed);
    (0..n).map(|i| formula(&mut r, opts, 1 + i % max_budget)).collect()
}

pub fn random_letter(rng: &mut impl Rng, props: &[String]) -> Letter {
    props.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect()
}

/// Random lasso with `|prefix| + |cycle| <= max_len`.
pub fn lasso(rng: &mut impl Rng, props: &[String], max_len: usize) -> LassoWord {
    let total = rng.gen_range(1..=max_len.max(1));
    let split = rng.gen_range(0..total);
    let letters: Vec<Letter> = (0..total).map(|_| random_letter(rng, props)).collect();
    LassoWord::new(letters[..split].to_vec(), letters[split..].to_vec())
}

/// Random left-total system with `n` states.
pub fn system(rng: &mut impl Rng, props: &[String], n: usize) -> System {
    let n = n.max(1);
    let succ = (0..n)
        .map(|_| {
            let mut out: BTreeSet<usize> = BTreeSet::new();
            out.insert(rng.gen_range(0..n));
            while rng.gen_bool(0.35) {
                out.insert(rng.gen_range(0..n));
            }
            out.into_iter().collect()
        })
        .collect();
    System {
        props: props.iter().cloned().collect(),
        names: (0..n).map(|i| format!("s{i}")).collect(),
        labels: (0..n).map(|_| random_letter(rng, props)).collect(),
        init: 0,
        succ,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_valid() {
        let opts = GenOptions::ldl(&["a", "b"]).with_vars(&["x"]).with_changepoints();
        assert_eq!(corpus(7, 20, &opts, 8), corpus(7, 20, &opts, 8));
        for f in corpus(1, 50, &opts, 10) {
            assert!(f.props().iter().all(|p| p == "a" || p == "b"));
        }
        let props = vec!["a".to_string()];
        let mut r = rng(3);
        for _ in 0..20 {
            assert!(system(&mut r, &props, 4).validate().is_ok());
            assert!(lasso(&mut r, &props, 4).len() <= 4);
        }
        let ldl = GenOptions::ldl(&["a"]);
        assert!(corpus(2, 30, &ldl, 8).iter().all(Formula::is_variable_free));
    }
}
