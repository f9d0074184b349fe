use std::collections::BTreeSet;

use pldl::formula::regex_hat;
use pldl::gen::{self, GenOptions};
use pldl::oracle::{eval_at, match_ends, models};
use pldl::syntax::{parse_formula, parse_regex, print_formula};
use pldl::{Formula, FragmentTag, LassoWord, Regex, Valuation};
use proptest::prelude::*;

fn f(s: &str) -> Formula {
    parse_formula(s).unwrap()
}

fn set(fs: &[&str]) -> BTreeSet<Formula> {
    fs.iter().map(|s| f(s)).collect()
}

#[test]
fn negation_rules() {
    let cases = [
        ("p", "!p"),
        ("!p", "p"),
        ("p & q", "!p | !q"),
        ("p | q", "!p & !q"),
        ("< a > p", "[ a ] !p"),
        ("[ a ] p", "< a > !p"),
        ("< a >{<= x} p", "[ a ]{<= x} !p"),
        ("[ a ]{<= y} p", "< a >{<= y} !p"),
    ];
    for (phi, neg) in cases {
        assert_eq!(f(phi).negate(), f(neg), "{phi}");
    }
    let cp = Formula::diamond_cp(Regex::atom("a"), Formula::atom("q"));
    assert_eq!(cp.negate(), Formula::box_cp(Regex::atom("a"), Formula::neg_atom("q")));
}

#[test]
fn negation_leaves_tests_alone() {
    let boxbox = f("[ {[ p ]{<= x} p}? ]{<= x} p");
    assert_eq!(boxbox.negate(), f("< {[ p ]{<= x} p}? >{<= x} !p"));
    assert_eq!(boxbox.negate().classify(), FragmentTag::NotWellFormed);
}

#[test]
fn closures() {
    assert_eq!(f("< {p}? ; q >{<= x} p2").closure(), set(&["p", "p2", "< {p}? ; q >{<= x} p2"]));
    assert_eq!(f("p").closure(), set(&["p"]));
    assert_eq!(f("< tt* > p & q").closure(), set(&["< tt* > p & q", "< tt* > p", "p", "q"]));
}

#[test]
fn sizes() {
    assert_eq!(f("p").size(), 1);
    assert_eq!(f("< tt* > p").size(), 4);
    assert_eq!(f("p & p").size(), 2);
    assert_eq!(f("p & p").tree_size(), 3);
}

#[test]
fn negation_can_change_the_closure_size() {
    // the test formula and the negated body coincide only after negation
    let phi = f("< {b}? > !b");
    assert_eq!(phi.size(), 4);
    assert_eq!(phi.negate(), f("[ {b}? ] b"));
    assert_eq!(phi.negate().size(), 3);
    assert_eq!(phi.tree_size(), phi.negate().tree_size());
}

#[test]
fn variable_sets() {
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<BTreeSet<_>>();
    assert_eq!(f("< tt* >{<= x} p").variables(), (s(&["x"]), s(&[])));
    assert_eq!(f("[ {[ p ]{<= x} p}? ]{<= x} p").variables(), (s(&[]), s(&["x"])));
    assert_eq!(f("< a >{<= x} [ b ]{<= y} q").variables(), (s(&["x"]), s(&["y"])));
}

#[test]
fn fragments() {
    assert_eq!(f("< a >{<= x} [ b ]{<= x} q").classify(), FragmentTag::NotWellFormed);
    let boxbox = f("[ {[ p ]{<= x} p}? ]{<= x} p");
    assert_eq!(boxbox.classify(), FragmentTag::WellFormed);
    assert!(!boxbox.is_pldl_box());
    assert_eq!(f("< tt* > p").classify(), FragmentTag::Ldl);
    assert_eq!(f("< tt* >{<= x} p").classify(), FragmentTag::PldlDiamond);
    assert_eq!(f("[ tt* ]{<= y} p").classify(), FragmentTag::PldlBox);
}

#[test]
fn hat_rules() {
    let r = |s: &str| parse_regex(s).unwrap();
    assert_eq!(regex_hat(&r("tt*")), Regex::test(Formula::True));
    assert_eq!(regex_hat(&r("p")), Regex::test(Formula::False));
    assert_eq!(regex_hat(&r("{a}? + {b}?")), Regex::test(f("a | b")));
}

#[test]
fn box_elimination() {
    assert_eq!(f("[ tt* ]{<= y} q").eliminate_boxes(), f("[ {tt}? ] q"));
    assert_eq!(f("< a >{<= x} p").eliminate_boxes(), f("< a >{<= x} p"));
}

#[test]
fn color_transform() {
    let chi = |l: &str| f(&format!("[ tt* ] < tt* > {l}"));
    let got = f("< tt* >{<= x} resp").color_transform("p").unwrap();
    let rel = Formula::diamond_cp(Regex::star(Regex::tt()), Formula::atom("resp"));
    assert_eq!(got, Formula::all([rel, chi("p"), chi("!p")]));
    assert_eq!(f("q").color_transform("p").unwrap(), Formula::all([f("q"), chi("p"), chi("!p")]));
    assert!(f("[ a ]{<= y} q").color_transform("p").is_err());
    let nested = f("< {< tt* >{<= x} a}? ; b >{<= x} c").rel();
    let inner = Formula::diamond_cp(Regex::star(Regex::tt()), Formula::atom("a"));
    let want = Formula::diamond_cp(Regex::concat(Regex::test(inner), Regex::atom("b")), Formula::atom("c"));
    assert_eq!(nested, want);
}

#[test]
fn renaming() {
    assert_eq!(f("< a >{<= x1} < b >{<= x2} q").rename_all_vars_to("z").unwrap(), f("< a >{<= z} < b >{<= z} q"));
    assert_eq!(f("[ a ]{<= y1} [ tt* ]{<= y2} q").fix_all_but_one_box("y1").unwrap(), f("[ a ]{<= y1} [ {tt}? ] q"));
    assert_eq!(f("< a > q").rename_all_vars_to("z").unwrap(), f("< a > q"));
    assert!(f("[ a ]{<= y} q").fix_all_but_one_box("y").is_ok());
    assert!(f("< a >{<= x} q").fix_all_but_one_box("x").is_err());
}

fn any_formula(opts: GenOptions, max: usize) -> impl Strategy<Value = Formula> {
    (any::<u64>(), 1..=max).prop_map(move |(seed, budget)| gen::formula(&mut gen::rng(seed), &opts, budget))
}

fn small_words() -> Vec<LassoWord> {
    LassoWord::enumerate(&["a", "b"], 3)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn negation_is_an_involution(phi in any_formula(GenOptions::ldl(&["a", "b"]).with_vars(&["x", "y"]).with_changepoints(), 14)) {
        prop_assert_eq!(phi.negate().negate(), phi.clone());
        prop_assert_eq!(phi.negate().tree_size(), phi.tree_size());
    }

    #[test]
    fn print_parse_round_trip(phi in any_formula(GenOptions::ldl(&["a", "b"]).with_vars(&["x", "y"]), 14)) {
        let text = print_formula(&phi);
        prop_assert_eq!(parse_formula(&text).unwrap(), phi);
    }

    #[test]
    fn negation_flips_truth(phi in any_formula(GenOptions::ldl(&["a", "b"]).with_vars(&["x", "y"]), 8), x in 0..3u64, y in 0..3u64) {
        let alpha = Valuation::new().with("x", x).with("y", y);
        let neg = phi.negate();
        for w in small_words() {
            for n in 0..w.len() {
                prop_assert_ne!(eval_at(&w, n, &alpha, &phi), eval_at(&w, n, &alpha, &neg));
            }
        }
    }

    #[test]
    fn truth_is_monotone(phi in any_formula(GenOptions::ldl(&["a", "b"]).with_vars(&["x", "y"]), 8), lo in 0..3u64, up in 0..3u64) {
        prop_assume!(phi.is_well_formed() && phi.parameters_positive());
        let (dv, bv) = phi.variables();
        let mut alpha = Valuation::new();
        let mut beta = Valuation::new();
        for x in &dv {
            alpha.set(x, lo);
            beta.set(x, lo + up);
        }
        for y in &bv {
            alpha.set(y, lo + up);
            beta.set(y, lo);
        }
        for w in small_words() {
            prop_assert!(!models(&w, &alpha, &phi) || models(&w, &beta, &phi));
        }
    }

    #[test]
    fn hat_keeps_exactly_the_empty_matches(seed in any::<u64>(), budget in 1..6usize, k in 0..3u64) {
        let opts = GenOptions::ldl(&["a", "b"]).with_vars(&["x"]);
        let r = gen::regex(&mut gen::rng(seed), &opts, budget);
        let hat = regex_hat(&r);
        let alpha = Valuation::new().with("x", k);
        for w in small_words() {
            for n in 0..w.len() {
                let full = match_ends(&w, n, &alpha, &r);
                let diag = match_ends(&w, n, &alpha, &hat);
                prop_assert_eq!(full.contains(0), diag.contains(0));
                prop_assert!(diag.offsets_below(2 * w.len() + 2).iter().all(|&j| j == 0));
            }
        }
    }

    #[test]
    fn box_elimination_gives_diamond_fragment(phi in any_formula(GenOptions::ldl(&["a", "b"]).with_vars(&["x", "y"]), 14)) {
        prop_assume!(phi.is_well_formed());
        let e = phi.eliminate_boxes();
        prop_assert!(e.is_pldl_diamond());
        prop_assert!(e.size() <= phi.size());
    }

    #[test]
    fn pldl_box_negates_to_pldl_diamond(phi in any_formula(GenOptions::ldl(&["a", "b"]).with_vars(&["y"]), 14)) {
        prop_assert_eq!(phi.is_pldl_box(), phi.variables().0.is_empty() && phi.negate().is_pldl_diamond());
    }
}
