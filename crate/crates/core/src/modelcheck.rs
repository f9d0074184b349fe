//! Model checking, assume-guarantee model checking, implication, and
//! model-checking optimization.
//!
//! The unbounded deciders follow the alternating color technique: a fresh
//! color proposition splits traces into blocks, parameterized diamonds
//! become changepoint-bounded, and a violation is a fair path through the
//! product of the automaton with the system whose blocks can all be pumped.
//! Queries at a fixed valuation use counter automata instead.

use std::collections::BTreeSet;

use crate::automata::{build_aba, build_parametric, counter_breakpoint, mh_to_nba, region_bounds, Alphabet, Nba};
use crate::formula::{Formula, Valuation};
use crate::graph::{self, Lasso, Require};
use crate::optimize::{greatest_true, least_true, Objective, Optimum};
use crate::system::System;
use crate::word::{LassoWord, Letter};
use crate::Error;

/// A finite graph whose vertices carry one or two color bits and one or
/// two Büchi sets. Vertices also remember the system state they project to.
#[derive(Clone, Debug)]
pub struct ColoredGraph {
    pub succ: Vec<Vec<usize>>,
    pub init: usize,
    /// Bit 0 is the first color, bit 1 the second.
    pub label: Vec<u8>,
    pub accepting: Vec<Vec<bool>>,
    pub colors: Vec<String>,
    pub sys_state: Vec<usize>,
    pub sys_labels: Vec<Letter>,
}

impl ColoredGraph {
    pub fn len(&self) -> usize {
        self.succ.len()
    }

    pub fn is_empty(&self) -> bool {
        self.succ.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.colors.len()
    }

    /// A graph given directly, for hand-built instances. `sys_state` is the
    /// identity and system labels are empty.
    pub fn from_parts(
        succ: Vec<Vec<usize>>,
        init: usize,
        label: Vec<u8>,
        accepting: Vec<Vec<bool>>,
        colors: &[&str],
    ) -> ColoredGraph {
        let n = succ.len();
        ColoredGraph {
            succ,
            init,
            label,
            accepting,
            colors: colors.iter().map(|c| c.to_string()).collect(),
            sys_state: (0..n).collect(),
            sys_labels: vec![Letter::new(); n],
        }
    }

    /// Trace of a vertex path through the system labels.
    pub fn trace(&self, stem: &[usize], cycle: &[usize]) -> LassoWord {
        let l = |v: &usize| self.sys_labels[self.sys_state[*v]].clone();
        LassoWord::new(stem.iter().map(l).collect(), cycle.iter().map(l).collect())
    }
}

/// Outcome of a model-checking decision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McVerdict {
    pub satisfied: bool,
    /// A valuation witnessing satisfaction, when one exists uniformly.
    pub valuation: Option<Valuation>,
    /// A violating path, when the property fails.
    pub witness: Option<Witness>,
}

/// A lasso-shaped path through a product and its trace on the system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub path: Lasso,
    pub trace: LassoWord,
}

impl McVerdict {
    /// Line-oriented report: `RESULT`, then `VALUATION` or `WITNESS`.
    pub fn report(&self) -> String {
        let mut s = format!("RESULT {}\n", if self.satisfied { "sat" } else { "unsat" });
        if let Some(v) = &self.valuation {
            s.push_str(&format!("VALUATION {v}\n"));
        }
        if let Some(w) = &self.witness {
            s.push_str(&format!("WITNESS {}\n", w.trace));
        }
        s
    }
}

/// Everything computed by one run of the unbounded model checker.
#[derive(Clone, Debug)]
pub struct McRun {
    pub verdict: McVerdict,
    pub nba: Nba,
    pub graph: ColoredGraph,
    /// `2·|Q|·|S| + 2`.
    pub bound: u64,
}

/// A proposition name not in `taken`, preferring `base`.
pub fn fresh_prop(base: &str, taken: &BTreeSet<String>) -> String {
    let mut c = base.to_string();
    while taken.contains(&c) {
        c.push('_');
    }
    c
}

pub(crate) fn check_decidable(phi: &Formula) -> Result<(), Error> {
    if !phi.is_well_formed() {
        return Err(Error::NotWellFormed);
    }
    if !phi.parameters_positive() {
        return Err(Error::WrongFragment(
            "a parameterized operator inside a test of a box is not monotone in its parameter"
                .into(),
        ));
    }
    Ok(())
}

/// The product of `nba` (over the system propositions plus `color`) with
/// `sys`: vertices `(q, s, C)` for `C ⊆ {color}`, initial `(q0, s0, ∅)`.
pub fn build_product(nba: &Nba, sys: &System, color: &str) -> Result<ColoredGraph, Error> {
    for p in sys.props.iter().chain(std::iter::once(&color.to_string())) {
        if nba.alphabet.index(p).is_none() {
            return Err(Error::Invalid(format!("automaton alphabet lacks {p}")));
        }
    }
    let ns = sys.len();
    let id = |q: usize, s: usize, c: usize| (q * ns + s) * 2 + c;
    let total = nba.len() * ns * 2;
    let mut succ = vec![Vec::new(); total];
    let mut label = vec![0u8; total];
    let mut accepting = vec![false; total];
    let mut sys_state = vec![0; total];
    let masks: Vec<[u32; 2]> = (0..ns)
        .map(|s| {
            let base = nba.alphabet.mask(&sys.labels[s]);
            [base, base | 1 << nba.alphabet.index(color).unwrap()]
        })
        .collect();
    for q in 0..nba.len() {
        for (s, row) in masks.iter().enumerate() {
            for (c, &a) in row.iter().enumerate() {
                let v = id(q, s, c);
                label[v] = c as u8;
                accepting[v] = nba.accepting[q];
                sys_state[v] = s;
                for &q2 in &nba.succ[q][a as usize] {
                    for &s2 in &sys.succ[s] {
                        succ[v].extend([id(q2, s2, 0), id(q2, s2, 1)]);
                    }
                }
            }
        }
    }
    Ok(ColoredGraph {
        succ,
        init: id(nba.init, sys.init, 0),
        label,
        accepting: vec![accepting],
        colors: vec![color.to_string()],
        sys_state,
        sys_labels: sys.labels.clone(),
    })
}

/// The product of two automata with `sys`, colored by `colors[0]` (read
/// by `a`) and `colors[1]` (read by `g`).
pub fn build_ag_product(a: &Nba, g: &Nba, sys: &System, colors: [&str; 2]) -> Result<ColoredGraph, Error> {
    for (nba, c) in [(a, colors[0]), (g, colors[1])] {
        for p in sys.props.iter().map(String::as_str).chain([c]) {
            if nba.alphabet.index(p).is_none() {
                return Err(Error::Invalid(format!("automaton alphabet lacks {p}")));
            }
        }
    }
    let (na, ng, ns) = (a.len(), g.len(), sys.len());
    let id = |qa: usize, qg: usize, s: usize, c: usize| ((qa * ng + qg) * ns + s) * 4 + c;
    let total = na * ng * ns * 4;
    let mut succ = vec![Vec::new(); total];
    let mut label = vec![0u8; total];
    let mut acc_a = vec![false; total];
    let mut acc_g = vec![false; total];
    let mut sys_state = vec![0; total];
    let letter = |s: usize, c: usize| {
        let mut l = sys.labels[s].clone();
        for (bit, name) in colors.iter().enumerate() {
            if c >> bit & 1 == 1 {
                l.insert(name.to_string());
            }
        }
        l
    };
    let masks: Vec<Vec<(u32, u32)>> = (0..ns)
        .map(|s| (0..4).map(|c| (a.alphabet.mask(&letter(s, c)), g.alphabet.mask(&letter(s, c)))).collect())
        .collect();
    for qa in 0..na {
        for qg in 0..ng {
            for (s, row) in masks.iter().enumerate() {
                for (c, &(ma, mg)) in row.iter().enumerate() {
                    let v = id(qa, qg, s, c);
                    label[v] = c as u8;
                    acc_a[v] = a.accepting[qa];
                    acc_g[v] = g.accepting[qg];
                    sys_state[v] = s;
                    for &qa2 in &a.succ[qa][ma as usize] {
                        for &qg2 in &g.succ[qg][mg as usize] {
                            for &s2 in &sys.succ[s] {
                                succ[v].extend((0..4).map(|c2| id(qa2, qg2, s2, c2)));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(ColoredGraph {
        succ,
        init: id(a.init, g.init, sys.init, 0),
        label,
        accepting: vec![acc_a, acc_g],
        colors: colors.iter().map(|c| c.to_string()).collect(),
        sys_state,
        sys_labels: sys.labels.clone(),
    })
}

/// Vertices on a cycle that stays inside one block. For degree two the
/// blocks are those of the second color and the cycle must also change
/// the first color.
pub fn pumpable_vertices(g: &ColoredGraph) -> Vec<bool> {
    let block_bit = if g.degree() == 2 { 2 } else { 1 };
    let mono: Vec<Vec<usize>> = (0..g.len())
        .map(|v| {
            g.succ[v]
                .iter()
                .copied()
                .filter(|&t| g.label[t] & block_bit == g.label[v] & block_bit)
                .collect()
        })
        .collect();
    let mut pump = vec![false; g.len()];
    for comp in graph::sccs(&mono) {
        let nontrivial = comp.len() > 1 || mono[comp[0]].contains(&comp[0]);
        let flips_first =
            g.degree() < 2 || comp.iter().any(|&v| g.label[v] & 1 != g.label[comp[0]] & 1);
        if nontrivial && flips_first {
            for v in comp {
                pump[v] = true;
            }
        }
    }
    pump
}

/// A fair path on which every block visits a pumpable vertex and the cycle
/// changes block, if one exists. Works for degree one and two.
pub fn pumpable_lasso(g: &ColoredGraph) -> Option<Lasso> {
    let block_bit = if g.degree() == 2 { 2 } else { 1 };
    let pump = pumpable_vertices(g);
    // augmented vertex 2v + seen
    let n = g.len();
    let mut succ = vec![Vec::new(); 2 * n];
    for u in 0..n {
        for seen in 0..2 {
            for &v in &g.succ[u] {
                let same = g.label[u] & block_bit == g.label[v] & block_bit;
                let next = if same {
                    seen | pump[v] as usize
                } else if seen == 1 {
                    pump[v] as usize
                } else {
                    continue;
                };
                succ[2 * u + seen].push(2 * v + next);
            }
        }
    }
    let start = 2 * g.init + pump[g.init] as usize;
    let flip = |u: usize, v: usize| g.label[u / 2] & block_bit != g.label[v / 2] & block_bit;
    let accs: Vec<Box<dyn Fn(usize) -> bool + '_>> = g
        .accepting
        .iter()
        .map(|set| Box::new(move |v: usize| set[v / 2]) as Box<dyn Fn(usize) -> bool>)
        .collect();
    let mut reqs: Vec<Require<'_>> = accs.iter().map(|f| Require::Vertex(f.as_ref())).collect();
    reqs.push(Require::Edge(&flip));
    let l = graph::fair_lasso(&succ, start, &reqs)?;
    Some(Lasso {
        stem: l.stem.iter().map(|v| v / 2).collect(),
        cycle: l.cycle.iter().map(|v| v / 2).collect(),
    })
}

/// Pumpable non-emptiness for degree-one graphs.
pub fn pumpable_nonempty1(g: &ColoredGraph) -> Option<Lasso> {
    assert_eq!(g.degree(), 1, "degree-one graph expected");
    pumpable_lasso(g)
}

/// Pumpable non-emptiness for degree-two graphs.
pub fn pumpable_nonempty2(g: &ColoredGraph) -> Option<Lasso> {
    assert_eq!(g.degree(), 2, "degree-two graph expected");
    pumpable_lasso(g)
}

/// The trace of a pumpable path of a degree-one graph where, in every
/// block, a cycle through the first pumpable vertex is repeated `k` extra
/// times. With `k ≥ 1` every block of the result has length at least `k`.
pub fn pump_witness(g: &ColoredGraph, l: &Lasso, k: usize) -> Result<LassoWord, Error> {
    let not_pumpable = || Error::Invalid("path is not pumpable".into());
    let pump = pumpable_vertices(g);
    let color = |v: usize| g.label[v] & 1;
    let anchor = *l.stem.last().ok_or_else(not_pumpable)?;
    let m = l.cycle.len();
    // rotate so that the cycle starts right after a color change
    let x = |i: usize| l.cycle[(i + m - 1) % m]; // x(1..=m) = cycle
    let i = (1..=m).find(|&i| color(x(i)) != color(x(i % m + 1))).ok_or_else(not_pumpable)?;
    let _ = anchor;
    let mut stem = l.stem.clone();
    stem.extend((1..=i).map(x));
    let cycle: Vec<usize> = (i + 1..=m).chain(1..=i).map(x).collect();
    let expand = |seg: &[usize]| -> Result<Vec<usize>, Error> {
        let mut out = Vec::new();
        let mut start = 0;
        while start < seg.len() {
            let mut end = start;
            while end + 1 < seg.len() && color(seg[end + 1]) == color(seg[start]) {
                end += 1;
            }
            let block = &seg[start..=end];
            let pos = block.iter().position(|&v| pump[v]).ok_or_else(not_pumpable)?;
            let v = block[pos];
            let c = color(v);
            let lap = graph::bfs_path(&g.succ, v, &|t| t == v, &|t| color(t) == c, true)
                .ok_or_else(not_pumpable)?;
            out.extend_from_slice(&block[..=pos]);
            for _ in 0..k {
                out.extend_from_slice(&lap[1..]);
            }
            out.extend_from_slice(&block[pos + 1..]);
            start = end + 1;
        }
        Ok(out)
    };
    // the first stem vertex is the initial vertex, whose block starts there
    let stem = expand(&stem)?;
    let cycle = expand(&cycle)?;
    Ok(g.trace(&stem, &cycle))
}

fn universe(sys: &System, phis: &[&Formula]) -> BTreeSet<String> {
    let mut u = sys.props.clone();
    for f in phis {
        u.extend(f.props());
    }
    u
}

/// Trimmed Büchi automaton for `¬rel(φ) ∧ χ∞c ∧ χ∞¬c` (or `rel(φ) ∧ ...`
/// when `negated` is false) over `props ∪ {c}`.
fn colored_nba(phi: &Formula, props: &BTreeSet<String>, color: &str, negated: bool) -> Result<Nba, Error> {
    let rel = phi.rel();
    let core = if negated { rel.negate() } else { rel };
    let target = Formula::all([
        core,
        Formula::infinitely_often(Formula::atom(color)),
        Formula::infinitely_often(Formula::neg_atom(color)),
    ]);
    let alphabet = Alphabet::new(props.iter().map(String::as_str).chain([color]))?;
    Ok(mh_to_nba(&build_aba(&target, &alphabet, color)?).trim())
}

/// Decides whether some valuation makes every trace of `sys` satisfy `phi`.
pub fn model_check(sys: &System, phi: &Formula) -> Result<McVerdict, Error> {
    Ok(model_check_run(sys, phi)?.verdict)
}

/// [`model_check`] with the intermediate automaton and product.
pub fn model_check_run(sys: &System, phi: &Formula) -> Result<McRun, Error> {
    check_decidable(phi)?;
    sys.validate()?;
    let diamond_form = phi.eliminate_boxes();
    let props = universe(sys, &[phi]);
    let color = fresh_prop("p", &props);
    let nba = colored_nba(&diamond_form, &props, &color, true)?;
    let graph = build_product(&nba, sys, &color)?;
    let bound = 2 * nba.len() as u64 * sys.len() as u64 + 2;
    let verdict = match pumpable_nonempty1(&graph) {
        None => {
            let (dvars, bvars) = phi.variables();
            let mut v = Valuation::new();
            for x in dvars {
                v.set(&x, bound);
            }
            for y in bvars {
                v.set(&y, 0);
            }
            McVerdict { satisfied: true, valuation: Some(v), witness: None }
        }
        Some(path) => {
            let trace = graph.trace(&path.stem, &path.cycle);
            McVerdict { satisfied: false, valuation: None, witness: Some(Witness { path, trace }) }
        }
    };
    Ok(McRun { verdict, nba, graph, bound })
}

/// Decides the assume-guarantee specification `(phi_a, phi_g)` on `sys`:
/// whenever the assumption holds for some valuation, the guarantee holds
/// for some valuation. No single guarantee valuation exists in general, so
/// satisfied verdicts carry none.
pub fn ag_check(sys: &System, phi_a: &Formula, phi_g: &Formula) -> Result<McVerdict, Error> {
    check_decidable(phi_a)?;
    check_decidable(phi_g)?;
    sys.validate()?;
    let props = universe(sys, &[phi_a, phi_g]);
    let p = fresh_prop("p", &props);
    let mut taken = props.clone();
    taken.insert(p.clone());
    let q = fresh_prop("q", &taken);
    let nba_a = colored_nba(&phi_a.eliminate_boxes(), &props, &p, false)?;
    let nba_g = colored_nba(&phi_g.eliminate_boxes(), &props, &q, true)?;
    let g = build_ag_product(&nba_a, &nba_g, sys, [&p, &q])?;
    Ok(match pumpable_nonempty2(&g) {
        None => McVerdict { satisfied: true, valuation: None, witness: None },
        Some(path) => {
            let trace = g.trace(&path.stem, &path.cycle);
            McVerdict { satisfied: false, valuation: None, witness: Some(Witness { path, trace }) }
        }
    })
}

/// Whether every system over `props` satisfying the assumption for some
/// valuation satisfies the guarantee for some valuation.
pub fn implication(phi_a: &Formula, phi_g: &Formula, props: &BTreeSet<String>) -> Result<bool, Error> {
    let mut u = props.clone();
    u.extend(phi_a.props());
    u.extend(phi_g.props());
    let letters = System::universal(&u, &Letter::new()).labels;
    for first in &letters {
        if !ag_check(&System::universal(&u, first), phi_a, phi_g)?.satisfied {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Product of an automaton over the system propositions with `sys`; returns
/// a violating lasso if some trace is accepted.
fn accepted_trace(nba: &Nba, sys: &System) -> Option<Witness> {
    let ns = sys.len();
    let id = |q: usize, s: usize| q * ns + s;
    let mut succ = vec![Vec::new(); nba.len() * ns];
    for q in 0..nba.len() {
        for s in 0..ns {
            let a = nba.alphabet.mask(&sys.labels[s]);
            for &q2 in &nba.succ[q][a as usize] {
                for &s2 in &sys.succ[s] {
                    succ[id(q, s)].push(id(q2, s2));
                }
            }
        }
    }
    let acc = |v: usize| nba.accepting[v / ns];
    let path = graph::fair_lasso(&succ, id(nba.init, sys.init), &[Require::Vertex(&acc)])?;
    let l = |v: &usize| sys.labels[v % ns].clone();
    let trace = LassoWord::new(path.stem.iter().map(l).collect(), path.cycle.iter().map(l).collect());
    Some(Witness { path, trace })
}

/// Decides whether every trace of `sys` satisfies `phi` at exactly `alpha`.
pub fn mc_query(sys: &System, phi: &Formula, alpha: &Valuation) -> Result<bool, Error> {
    Ok(mc_query_verdict(sys, phi, alpha)?.satisfied)
}

/// [`mc_query`] with a counterexample trace on failure.
pub fn mc_query_verdict(sys: &System, phi: &Formula, alpha: &Valuation) -> Result<McVerdict, Error> {
    if let Some(x) = phi.all_variables().into_iter().find(|x| !alpha.contains(x)) {
        return Err(Error::UnassignedVariable(x));
    }
    sys.validate()?;
    let props = universe(sys, &[phi]);
    let alphabet = Alphabet::new(props.iter())?;
    let aba = build_parametric(&phi.negate(), &alphabet)?;
    let nba = counter_breakpoint(&aba, &region_bounds(&aba, alpha)?)?;
    Ok(match accepted_trace(&nba, sys) {
        None => McVerdict { satisfied: true, valuation: Some(alpha.clone()), witness: None },
        Some(w) => McVerdict { satisfied: false, valuation: None, witness: Some(w) },
    })
}

/// Upper end of the search range for a Min objective: `2·|Q|·|S| + 2`, or
/// `None` when no valuation works.
pub fn min_search_bound(sys: &System, phi: &Formula) -> Result<Option<u64>, Error> {
    let run = model_check_run(sys, phi)?;
    Ok(run.verdict.satisfied.then_some(run.bound))
}

/// The value above which a Max objective is unbounded: `4·|A|·|S| + 2`
/// where `A` recognizes `c(¬φ)`.
pub fn max_search_bound(sys: &System, phi: &Formula) -> Result<u64, Error> {
    let neg = phi.negate();
    check_decidable(&neg)?;
    let props = universe(sys, &[phi]);
    let color = fresh_prop("p", &props);
    let nba = colored_nba(&neg.eliminate_boxes(), &props, &color, false)?;
    Ok(4 * nba.len() as u64 * sys.len() as u64 + 2)
}

fn check_objective(phi: &Formula, obj: Objective) -> Result<BTreeSet<String>, Error> {
    let vars = phi.all_variables();
    if vars.is_empty() {
        return Err(Error::Invalid("optimization needs at least one variable".into()));
    }
    let ok = if obj.is_min() { phi.is_pldl_diamond() } else { phi.is_pldl_box() };
    if !ok {
        let want = if obj.is_min() { "pldl-diamond" } else { "pldl-box" };
        return Err(Error::WrongFragment(format!("{obj} needs a {want} formula")));
    }
    check_decidable(phi)?;
    Ok(vars)
}

/// Name for the single variable after renaming.
fn merged_var(phi: &Formula) -> String {
    fresh_prop("z", &phi.all_variables())
}

/// The optimal parameter value for `obj`, or `None` if no valuation makes
/// `sys` satisfy `phi`.
pub fn mc_optimize(sys: &System, phi: &Formula, obj: Objective) -> Result<Option<Optimum>, Error> {
    let vars = check_objective(phi, obj)?;
    match obj {
        Objective::MinMax => {
            let Some(hi) = min_search_bound(sys, phi)? else { return Ok(None) };
            let z = merged_var(phi);
            let psi = phi.rename_all_vars_to(&z)?;
            let k = least_true(0, hi, &mut |k| mc_query(sys, &psi, &Valuation::new().with(&z, k)))?;
            Ok(k.map(Optimum::Finite))
        }
        Objective::MinMin => {
            let Some(hi) = min_search_bound(sys, phi)? else { return Ok(None) };
            let mut best: Option<u64> = None;
            for x in &vars {
                let top = best.map_or(hi, |b| b.saturating_sub(1));
                let pinned = Valuation::uniform(vars.iter(), hi);
                let k = least_true(0, top, &mut |k| mc_query(sys, phi, &pinned.clone().with(x, k)))?;
                if let Some(k) = k {
                    best = Some(best.map_or(k, |b| b.min(k)));
                }
            }
            Ok(best.map(Optimum::Finite))
        }
        Objective::MaxMin => {
            let z = merged_var(phi);
            let psi = phi.rename_all_vars_to(&z)?;
            let top = max_search_bound(sys, &psi)?;
            let at = |k| Valuation::new().with(&z, k);
            if mc_query(sys, &psi, &at(top))? {
                return Ok(Some(Optimum::Infinite));
            }
            let k = greatest_true(0, top, &mut |k| mc_query(sys, &psi, &at(k)))?;
            Ok(k.map(Optimum::Finite))
        }
        Objective::MaxMax => {
            let mut best: Option<Optimum> = None;
            for y in &vars {
                let psi = phi.fix_all_but_one_box(y)?;
                let top = max_search_bound(sys, &psi)?;
                let at = |k| Valuation::new().with(y, k);
                let value = if mc_query(sys, &psi, &at(top))? {
                    Some(Optimum::Infinite)
                } else {
                    greatest_true(0, top, &mut |k| mc_query(sys, &psi, &at(k)))?.map(Optimum::Finite)
                };
                best = best.max(value);
            }
            Ok(best)
        }
    }
}
