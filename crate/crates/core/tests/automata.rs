#![allow(clippy::needless_range_loop)]

use pldl::automata::*;
use pldl::gen::{self, GenOptions};
use pldl::oracle::{eval_at, match_ends, models, models_with_color};
use pldl::{Formula, LassoWord, Regex, Valuation};
use proptest::prelude::*;

/// States per unit of formula size allowed in the alternating automaton.
const STATES_PER_SIZE: usize = 2;

/// Formulas over `a` and the color `p` of size at most 10.
fn ldl_cp_corpus(seed: u64, n: usize) -> Vec<Formula> {
    let opts = GenOptions::ldl(&["p", "a"]).with_changepoints();
    let mut out = Vec::new();
    let mut r = gen::rng(seed);
    let mut budget = 0;
    while out.len() < n {
        budget = budget % 10 + 1;
        let f = gen::formula(&mut r, &opts, budget);
        if f.size() <= 10 {
            out.push(f);
        }
    }
    out
}

#[test]
fn buchi_translation_matches_oracle() {
    let alphabet = Alphabet::new(["p", "a"]).unwrap();
    let words = LassoWord::enumerate(&["p", "a"], 4);
    let none = Valuation::new();
    for f in ldl_cp_corpus(12, 200) {
        let aba = build_aba(&f, &alphabet, "p").unwrap();
        assert!(aba.is_weak(), "{f}");
        assert!(aba.len() <= STATES_PER_SIZE * f.size().max(1), "{f}: {} states", aba.len());
        let nba = mh_to_nba(&aba);
        for w in &words {
            assert_eq!(nba.accepts(w), models_with_color(w, &none, &f, "p"), "{f} on {w}");
        }
    }
}

#[test]
fn determinization_preserves_language() {
    let alphabet = Alphabet::new(["p", "a"]).unwrap();
    let words = LassoWord::enumerate(&["p", "a"], 4);
    let mut checked = 0;
    for f in ldl_cp_corpus(4, 200) {
        let nba = mh_to_nba(&build_aba(&f, &alphabet, "p").unwrap());
        if nba.len() > 12 {
            continue;
        }
        let dpa = determinize(&nba);
        for w in &words {
            assert_eq!(dpa.accepts(w), nba.accepts(w), "{f} on {w}");
        }
        checked += 1;
    }
    assert!(checked >= 100);
}

#[test]
fn determinization_of_random_automata() {
    use rand::Rng;
    let mut r = gen::rng(99);
    let alphabet = Alphabet::new(["a"]).unwrap();
    let words = LassoWord::enumerate(&["a"], 6);
    for _ in 0..300 {
        let n = r.gen_range(1..=4);
        let succ = (0..n)
            .map(|_| (0..2).map(|_| (0..n).filter(|_| r.gen_bool(0.4)).collect()).collect())
            .collect();
        let nba = Nba {
            alphabet: alphabet.clone(),
            init: 0,
            succ,
            accepting: (0..n).map(|_| r.gen_bool(0.4)).collect(),
            names: (0..n).map(|i| i.to_string()).collect(),
        };
        let d = determinize(&nba);
        for w in &words {
            assert_eq!(d.accepts(w), nba.accepts(w), "{nba} on {w}");
        }
    }
}

/// Growth constant in the state bound `(3·(k+1))^(c·size)`.
const COUNTER_GROWTH: f64 = 0.5;

#[test]
fn counter_automata_match_oracle() {
    let alphabet = Alphabet::new(["a", "b"]).unwrap();
    let words = LassoWord::enumerate(&["a", "b"], 4);
    let mut diamonds = 0;
    let mut boxes = 0;
    for f in gen::corpus(5, 300, &GenOptions::ldl(&["a", "b"]).with_vars(&["z"]), 9) {
        if f.all_variables().is_empty() {
            continue;
        }
        let (dv, bv) = f.variables();
        diamonds += !dv.is_empty() as usize;
        boxes += !bv.is_empty() as usize;
        let aba = build_parametric(&f, &alphabet).unwrap();
        for k in 0..=3u64 {
            let alpha = Valuation::new().with("z", k);
            let nba = counter_breakpoint(&aba, &region_bounds(&aba, &alpha).unwrap()).unwrap();
            let bound = (3.0 * (k as f64 + 1.0)).powf(COUNTER_GROWTH * f.size() as f64);
            assert!((nba.len() as f64) <= bound, "{f} at {k}: {} states", nba.len());
            for w in &words {
                assert_eq!(nba.accepts(w), models(w, &alpha, &f), "{f} at z={k} on {w}");
            }
        }
    }
    assert!(diamonds >= 30 && boxes >= 30, "{diamonds} diamond and {boxes} box formulas");
}

#[test]
fn dpa_of_counter_automaton() {
    let alphabet = Alphabet::new(["a"]).unwrap();
    let f = pldl::syntax::parse_formula("[ tt* ] < tt* >{<= z} a").unwrap();
    let aba = build_parametric(&f, &alphabet).unwrap();
    let alpha = Valuation::new().with("z", 2);
    let dpa = determinize(&counter_breakpoint(&aba, &region_bounds(&aba, &alpha).unwrap()).unwrap());
    for w in LassoWord::enumerate(&["a"], 5) {
        assert_eq!(dpa.accepts(&w), models(&w, &alpha, &f), "{w}");
    }
}

/// Matches of `r` with both ends in `0..=limit`, by the structural
/// relational semantics.
fn relation(r: &Regex, w: &LassoWord, alpha: &Valuation, limit: usize) -> Vec<Vec<bool>> {
    let n = limit + 1;
    let mut m = vec![vec![false; n]; n];
    match r {
        Regex::Prop(p) => {
            for i in 0..limit {
                m[i][i + 1] = p.holds_in(w.letter_at(i));
            }
        }
        Regex::Test(t) => {
            for (i, row) in m.iter_mut().enumerate() {
                row[i] = eval_at(w, i, alpha, t);
            }
        }
        Regex::Union(a, b) => {
            let (x, y) = (relation(a, w, alpha, limit), relation(b, w, alpha, limit));
            for i in 0..n {
                for j in 0..n {
                    m[i][j] = x[i][j] || y[i][j];
                }
            }
        }
        Regex::Concat(a, b) => {
            let (x, y) = (relation(a, w, alpha, limit), relation(b, w, alpha, limit));
            for i in 0..n {
                for k in 0..n {
                    if x[i][k] {
                        for j in 0..n {
                            m[i][j] |= y[k][j];
                        }
                    }
                }
            }
        }
        Regex::Star(a) => {
            m = relation(a, w, alpha, limit);
            for (i, row) in m.iter_mut().enumerate() {
                row[i] = true;
            }
            for k in 0..n {
                for i in 0..n {
                    if m[i][k] {
                        for j in 0..n {
                            m[i][j] = m[i][j] || m[k][j];
                        }
                    }
                }
            }
        }
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 150, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn match_ends_follow_the_relational_semantics(seed in any::<u64>(), budget in 1..=6usize, k in 0..3u64) {
        let opts = GenOptions::ldl(&["a", "b"]).with_vars(&["x"]);
        let mut rng = gen::rng(seed);
        let r = gen::regex(&mut rng, &opts, budget);
        let alpha = Valuation::new().with("x", k);
        for w in LassoWord::enumerate(&["a", "b"], 3) {
            let limit = w.prefix.len() + 3 * w.cycle.len() + 2;
            let rel = relation(&r, &w, &alpha, limit);
            for n in 0..w.len() {
                let ends = match_ends(&w, n, &alpha, &r);
                for j in n..=limit {
                    prop_assert_eq!(rel[n][j], ends.contains(j - n), "{} on {} from {} to {}", r, w, n, j);
                }
            }
        }
    }

    #[test]
    fn truth_is_periodic(seed in any::<u64>(), budget in 1..=8usize, k in 0..3u64) {
        let opts = GenOptions::ldl(&["a", "b"]).with_vars(&["x", "y"]).with_changepoints();
        let f = gen::formula(&mut gen::rng(seed), &opts, budget);
        let alpha = Valuation::new().with("x", k).with("y", k);
        for w in LassoWord::enumerate(&["a", "b"], 3) {
            for n in w.prefix.len()..w.len() {
                prop_assert_eq!(eval_at(&w, n, &alpha, &f), eval_at(&w, n + w.cycle.len(), &alpha, &f));
            }
        }
    }
}
