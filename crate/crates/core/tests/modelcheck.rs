mod common;

use std::collections::BTreeSet;

use common::*;
use pldl::modelcheck::*;
use pldl::optimize::{Objective, Optimum};
use pldl::oracle::models;
use pldl::syntax::parse_formula;
use pldl::Formula;

#[test]
fn verdicts_match_queries_at_the_bound() {
    let mut instances = 0;
    for (name, sys) in systems() {
        for phi in formulas(DIAMOND_FORMULAS).into_iter().chain(formulas(BOX_FORMULAS)) {
            let run = model_check_run(&sys, &phi).unwrap();
            let mut alpha = uniform(&phi, run.bound);
            for y in phi.variables().1 {
                alpha.set(&y, 0);
            }
            let direct = mc_query(&sys, &phi, &alpha).unwrap();
            assert_eq!(run.verdict.satisfied, direct, "{name}: {phi}");
            if run.verdict.satisfied {
                assert_eq!(run.verdict.valuation.as_ref(), Some(&alpha));
            } else {
                let w = run.verdict.witness.as_ref().unwrap();
                for k in 1..=3 {
                    let pumped = pump_witness(&run.graph, &w.path, k).unwrap();
                    assert!(!models(&pumped, &uniform(&phi, k as u64), &phi), "{name}: {phi} pumped {pumped}");
                }
            }
            instances += 1;
        }
    }
    assert!(instances >= 20);
}

#[test]
fn optimization_matches_linear_scan() {
    for (name, sys) in systems() {
        for phi in formulas(DIAMOND_FORMULAS) {
            for obj in [Objective::MinMax, Objective::MinMin] {
                assert_eq!(mc_optimize(&sys, &phi, obj).unwrap(), mc_scan(&sys, &phi, obj), "{name}: {obj} {phi}");
            }
        }
        for phi in formulas(BOX_FORMULAS) {
            for obj in [Objective::MaxMax, Objective::MaxMin] {
                assert_eq!(mc_optimize(&sys, &phi, obj).unwrap(), mc_scan(&sys, &phi, obj), "{name}: {obj} {phi}");
            }
        }
    }
}

#[test]
fn fixture_optima() {
    let rr = parse_formula(RR).unwrap();
    assert_eq!(mc_optimize(&delayed_response(), &rr, Objective::MinMax).unwrap(), Some(Optimum::Finite(2)));
    let always = parse_formula("[ tt* ] [ tt* ]{<= y} p").unwrap();
    assert_eq!(mc_optimize(&always_p(), &always, Objective::MaxMax).unwrap(), Some(Optimum::Infinite));
    assert!(matches!(
        mc_optimize(&always_p(), &always, Objective::MinMax),
        Err(pldl::Error::WrongFragment(_))
    ));
}

#[test]
fn degree_two_pumpability() {
    for (name, g, expected) in degree_two_graphs() {
        assert_eq!(pumpable_nonempty2(&g).is_some(), expected, "{name}");
    }
}

#[test]
fn assume_guarantee_on_fixtures() {
    // the guarantee holds for some valuation whenever the assumption does:
    // a bounded a-response guarantees an unbounded one
    let bounded = parse_formula("[ tt* ] < tt* >{<= x} a").unwrap();
    let unbounded = parse_formula("[ tt* ] < tt* > a").unwrap();
    for (name, sys) in systems() {
        assert!(ag_check(&sys, &bounded, &unbounded).unwrap().satisfied, "{name}");
    }
    // visits to `a` can be spread arbitrarily far apart
    let stall = &systems()[4];
    assert_eq!(stall.0, "may-stall");
    let v = ag_check(&stall.1, &unbounded, &bounded).unwrap();
    assert!(!v.satisfied);
    let rr = ag_check(&delayed_response(), &Formula::True, &parse_formula(RR).unwrap()).unwrap();
    assert!(rr.satisfied);
    let props: BTreeSet<String> = ["a".to_string()].into();
    assert!(!implication(&unbounded, &bounded, &props).unwrap());
    assert!(implication(&bounded, &unbounded, &props).unwrap());
}

#[test]
fn assume_guarantee_agrees_with_model_checking() {
    // with a trivial assumption the specification reduces to the guarantee
    for (name, sys) in systems() {
        for phi in formulas(DIAMOND_FORMULAS) {
            let ag = ag_check(&sys, &Formula::True, &phi).unwrap();
            let mc = model_check(&sys, &phi).unwrap();
            assert_eq!(ag.satisfied, mc.satisfied, "{name}: {phi}");
        }
    }
}
