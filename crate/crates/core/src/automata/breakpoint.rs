//! From alternating to nondeterministic Büchi automata.
//!
//! States are triples `(T, O, γ)`: the set `T` of active states, the subset
//! `O` of states owing a visit to an accepting state since the last
//! breakpoint, and counters `γ` for states of bounded regions. Without
//! bounds this is the Miyano-Hayashi construction.

use std::collections::{BTreeMap, HashMap, VecDeque};

use super::aba::{Aba, RegionKind};
use super::nba::Nba;
use crate::formula::Valuation;
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct MhState {
    /// Active states with their counters; unbounded states carry 0.
    t: Vec<(usize, i64)>,
    o: Vec<usize>,
}

/// The Miyano-Hayashi breakpoint construction.
pub fn mh_to_nba(aba: &Aba) -> Nba {
    counter_breakpoint(aba, &BTreeMap::new()).expect("no bounds to check")
}

/// Region bounds taken from a valuation: every region with a variable gets
/// that variable's value.
pub fn region_bounds(aba: &Aba, alpha: &Valuation) -> Result<BTreeMap<usize, u64>, Error> {
    let mut out = BTreeMap::new();
    for (i, r) in aba.regions.iter().enumerate() {
        if let Some(x) = &r.var {
            if !alpha.contains(x) {
                return Err(Error::UnassignedVariable(x.clone()));
            }
            out.insert(i, alpha.get(x));
        }
    }
    Ok(out)
}

/// The breakpoint construction with counters. A region listed in `bounds`
/// limits how many letters a run may spend in it: diamond regions block
/// runs that overstay, box regions release their obligations.
pub fn counter_breakpoint(aba: &Aba, bounds: &BTreeMap<usize, u64>) -> Result<Nba, Error> {
    if let Some((&r, _)) = bounds.iter().find(|(&r, _)| r >= aba.regions.len()) {
        return Err(Error::Invalid(format!("unknown region {r}")));
    }
    let bound_of = |q: usize| aba.states[q].region.and_then(|r| bounds.get(&r).map(|&b| (r, b as i64)));
    let init = MhState { t: vec![(aba.init, 0)], o: Vec::new() };
    let mut index: HashMap<MhState, usize> = HashMap::new();
    let mut states = vec![init.clone()];
    index.insert(init, 0);
    let mut queue = VecDeque::from([0usize]);
    let nletters = aba.alphabet.size();
    let mut succ: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    while let Some(i) = queue.pop_front() {
        let s = states[i].clone();
        let mut row = Vec::with_capacity(nletters);
        for a in aba.alphabet.letters() {
            let mut targets = Vec::new();
            for next in successors(aba, &s, a, &bound_of) {
                let id = match index.get(&next) {
                    Some(&id) => id,
                    None => {
                        let id = states.len();
                        index.insert(next.clone(), id);
                        states.push(next);
                        succ.push(Vec::new());
                        queue.push_back(id);
                        id
                    }
                };
                targets.push(id);
            }
            targets.sort_unstable();
            targets.dedup();
            row.push(targets);
        }
        succ[i] = row;
    }
    let names = states.iter().map(|s| mh_name(aba, s)).collect();
    Ok(Nba {
        alphabet: aba.alphabet.clone(),
        init: 0,
        accepting: states.iter().map(|s| s.o.is_empty()).collect(),
        succ,
        names,
    })
}

fn successors(
    aba: &Aba,
    s: &MhState,
    a: u32,
    bound_of: &dyn Fn(usize) -> Option<(usize, i64)>,
) -> Vec<MhState> {
    let options: Vec<&Vec<Vec<usize>>> = s.t.iter().map(|&(q, _)| &aba.delta[q][a as usize]).collect();
    if options.iter().any(|d| d.is_empty()) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut choice = vec![0usize; options.len()];
    loop {
        if let Some(next) = combine(aba, s, &options, &choice, bound_of) {
            out.push(next);
        }
        let mut k = 0;
        while k < choice.len() {
            choice[k] += 1;
            if choice[k] < options[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
        if k == choice.len() {
            break;
        }
    }
    out.sort();
    out.dedup();
    out
}

fn combine(
    aba: &Aba,
    s: &MhState,
    options: &[&Vec<Vec<usize>>],
    choice: &[usize],
    bound_of: &dyn Fn(usize) -> Option<(usize, i64)>,
) -> Option<MhState> {
    let mut counters: BTreeMap<usize, i64> = BTreeMap::new();
    for (k, &(q, gamma)) in s.t.iter().enumerate() {
        for &t in &options[k][choice[k]] {
            let value = match bound_of(t) {
                None => 0,
                Some((r, b)) => {
                    if aba.states[q].region == Some(r) {
                        gamma - 1
                    } else {
                        b - 1
                    }
                }
            };
            let diamond = aba.states[t]
                .region
                .is_some_and(|r| aba.regions[r].kind == RegionKind::Diamond);
            counters
                .entry(t)
                .and_modify(|v| *v = if diamond { (*v).min(value) } else { (*v).max(value) })
                .or_insert(value);
        }
    }
    let mut t_next = Vec::with_capacity(counters.len());
    for (t, v) in counters {
        if v < 0 {
            let diamond = aba.states[t]
                .region
                .is_some_and(|r| aba.regions[r].kind == RegionKind::Diamond);
            if diamond {
                return None;
            }
            continue;
        }
        t_next.push((t, v));
    }
    let alive = |t: usize| t_next.binary_search_by(|&(x, _)| x.cmp(&t)).is_ok();
    let mut o_next: Vec<usize> = if s.o.is_empty() {
        t_next.iter().map(|&(t, _)| t).collect()
    } else {
        s.t.iter()
            .enumerate()
            .filter(|(_, (q, _))| s.o.binary_search(q).is_ok())
            .flat_map(|(k, _)| options[k][choice[k]].iter().copied())
            .filter(|&t| alive(t))
            .collect()
    };
    o_next.retain(|&t| !aba.states[t].accepting);
    o_next.sort_unstable();
    o_next.dedup();
    Some(MhState { t: t_next, o: o_next })
}

fn mh_name(aba: &Aba, s: &MhState) -> String {
    let t: Vec<String> = s
        .t
        .iter()
        .map(|&(q, g)| {
            let bounded = aba.states[q]
                .region
                .is_some_and(|r| aba.regions[r].var.is_some());
            if bounded {
                format!("{}:{g}", aba.state_name(q))
            } else {
                aba.state_name(q)
            }
        })
        .collect();
    let o: Vec<String> = s.o.iter().map(|&q| aba.state_name(q)).collect();
    format!("{{{}}} / {{{}}}", t.join(","), o.join(","))
}
