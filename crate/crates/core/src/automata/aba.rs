//! Alternating Büchi automata for LDL with changepoint-bounded operators.
//!
//! Every modal subformula `<r> psi` or `[r] psi` owns a region: a copy of the
//! marked ε-NFA of `r`, possibly in product with the changepoint DFA. The
//! states of a region are the NFA states entered by letter edges. ε-moves are
//! resolved while computing transitions: a transition of a region state is a
//! disjunction (diamond) or conjunction (box) over simple ε-paths, where each
//! path contributes its test obligations, and paths reaching the final state
//! continue into `psi`. The initial state and all test automata are inlined,
//! so transitions of formula states are never materialized as states.

use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

use super::alphabet::Alphabet;
use super::dnf::{self, Dnf};
use super::nfa::{thompson, MarkedNfa};
use crate::formula::Formula;
use crate::oracle::DEFAULT_COLOR;
use crate::Error;

/// States of the deterministic automaton that accepts infixes with at most
/// one change of the color proposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CpState {
    Init,
    /// Colored so far, no change yet.
    Colored,
    /// Uncolored so far, no change yet.
    Plain,
    /// Colored, then uncolored.
    ColoredPlain,
    /// Uncolored, then colored.
    PlainColored,
    Sink,
}

impl CpState {
    pub fn step(self, colored: bool) -> CpState {
        use CpState::*;
        match (self, colored) {
            (Init, true) => Colored,
            (Init, false) => Plain,
            (Colored, true) => Colored,
            (Colored, false) => ColoredPlain,
            (Plain, false) => Plain,
            (Plain, true) => PlainColored,
            (PlainColored, true) => PlainColored,
            (ColoredPlain, false) => ColoredPlain,
            _ => Sink,
        }
    }

    pub fn accepting(self) -> bool {
        self != CpState::Sink
    }

    pub const ALL: [CpState; 6] = [
        CpState::Init,
        CpState::Colored,
        CpState::Plain,
        CpState::ColoredPlain,
        CpState::PlainColored,
        CpState::Sink,
    ];
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RegionKind {
    Diamond,
    Box,
}

/// The automaton copy serving one modal subformula.
#[derive(Clone, Debug)]
pub struct Region {
    pub kind: RegionKind,
    /// Parameter bounding the match length, if any.
    pub var: Option<String>,
    pub cp: bool,
    pub formula: Formula,
    pub nfa: Rc<MarkedNfa>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbaState {
    /// `None` for the initial state.
    pub region: Option<usize>,
    pub nfa_state: usize,
    pub cp: Option<CpState>,
    pub accepting: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct AbaOptions {
    /// Whether the markings of both ends of an ε-path are collected.
    pub include_endpoints: bool,
    /// Whether bounded operators are accepted and tagged instead of rejected.
    pub parametric: bool,
}

impl Default for AbaOptions {
    fn default() -> Self {
        AbaOptions { include_endpoints: true, parametric: false }
    }
}

/// An alternating Büchi automaton with transitions tabulated per letter.
#[derive(Clone, Debug)]
pub struct Aba {
    pub alphabet: Alphabet,
    pub color: String,
    pub states: Vec<AbaState>,
    pub regions: Vec<Region>,
    pub init: usize,
    /// `delta[q][letter]`.
    pub delta: Vec<Vec<Dnf>>,
}

impl Aba {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn region_of(&self, q: usize) -> Option<usize> {
        self.states[q].region
    }

    /// Whether every strongly connected component of the state graph is
    /// uniformly accepting or uniformly rejecting.
    pub fn is_weak(&self) -> bool {
        let g = self.state_graph();
        petgraph::algo::tarjan_scc(&g).iter().all(|scc| {
            let acc = self.states[scc[0].index()].accepting;
            scc.iter().all(|v| self.states[v.index()].accepting == acc)
        })
    }

    /// Directed graph of "may move to" between states.
    pub fn state_graph(&self) -> petgraph::Graph<(), ()> {
        let mut g = petgraph::Graph::new();
        let nodes: Vec<_> = (0..self.len()).map(|_| g.add_node(())).collect();
        for (q, row) in self.delta.iter().enumerate() {
            let mut targets: Vec<usize> = row.iter().flatten().flatten().copied().collect();
            targets.sort_unstable();
            targets.dedup();
            for t in targets {
                g.add_edge(nodes[q], nodes[t], ());
            }
        }
        g
    }

    pub fn state_name(&self, q: usize) -> String {
        let s = &self.states[q];
        match s.region {
            None => "init".to_string(),
            Some(r) => match s.cp {
                None => format!("r{r}.{}", s.nfa_state),
                Some(c) => format!("r{r}.{}.{c:?}", s.nfa_state),
            },
        }
    }
}

impl fmt::Display for Aba {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.len() {
            let acc = if self.states[q].accepting { " (accepting)" } else { "" };
            writeln!(f, "{}{acc}", self.state_name(q))?;
            for a in self.alphabet.letters() {
                let d = &self.delta[q][a as usize];
                let clauses: Vec<String> = d
                    .iter()
                    .map(|c| match c.len() {
                        0 => "tt".to_string(),
                        _ => c.iter().map(|&t| self.state_name(t)).collect::<Vec<_>>().join(" & "),
                    })
                    .collect();
                let rhs = if clauses.is_empty() { "ff".to_string() } else { clauses.join(" | ") };
                let letter = crate::syntax::print_letter(&self.alphabet.letter(a));
                writeln!(f, "  {letter} -> {rhs}")?;
            }
        }
        Ok(())
    }
}

struct Builder {
    alphabet: Alphabet,
    color: String,
    opts: AbaOptions,
    regions: Vec<Region>,
    region_index: HashMap<Formula, usize>,
    states: Vec<AbaState>,
    state_index: HashMap<(usize, usize, Option<CpState>), usize>,
    memo: HashMap<(Formula, u32), Dnf>,
}

impl Builder {
    fn region(&mut self, phi: &Formula) -> usize {
        if let Some(&r) = self.region_index.get(phi) {
            return r;
        }
        let (kind, var, cp, regex) = match phi {
            Formula::Diamond(r, _) => (RegionKind::Diamond, None, false, r),
            Formula::Box(r, _) => (RegionKind::Box, None, false, r),
            Formula::DiamondLe(r, x, _) => (RegionKind::Diamond, Some(x.clone()), false, r),
            Formula::BoxLe(r, y, _) => (RegionKind::Box, Some(y.clone()), false, r),
            Formula::DiamondCp(r, _) => (RegionKind::Diamond, None, true, r),
            Formula::BoxCp(r, _) => (RegionKind::Box, None, true, r),
            _ => unreachable!("regions belong to modal formulas"),
        };
        let nfa = Rc::new(thompson(regex));
        self.regions.push(Region { kind, var, cp, formula: phi.clone(), nfa });
        self.region_index.insert(phi.clone(), self.regions.len() - 1);
        self.regions.len() - 1
    }

    fn state(&mut self, region: usize, q: usize, cp: Option<CpState>) -> usize {
        if let Some(&s) = self.state_index.get(&(region, q, cp)) {
            return s;
        }
        let accepting = self.regions[region].kind == RegionKind::Box;
        self.states.push(AbaState { region: Some(region), nfa_state: q, cp, accepting });
        self.state_index.insert((region, q, cp), self.states.len() - 1);
        self.states.len() - 1
    }

    /// Transition of the automaton for `phi` on letter `a`.
    fn delta(&mut self, phi: &Formula, a: u32) -> Dnf {
        if let Some(d) = self.memo.get(&(phi.clone(), a)) {
            return d.clone();
        }
        let d = match phi {
            Formula::True => dnf::tt(),
            Formula::False => dnf::ff(),
            Formula::Atom(p) => bool_dnf(self.alphabet.has(a, p)),
            Formula::NegAtom(p) => bool_dnf(!self.alphabet.has(a, p)),
            Formula::And(x, y) => {
                let dx = self.delta(x, a);
                if dnf::is_false(&dx) {
                    dx
                } else {
                    dnf::and(&dx, &self.delta(y, a))
                }
            }
            Formula::Or(x, y) => {
                let dx = self.delta(x, a);
                if dnf::is_true(&dx) {
                    dx
                } else {
                    dnf::or(&dx, &self.delta(y, a))
                }
            }
            _ => {
                let r = self.region(phi);
                let nfa = self.regions[r].nfa.clone();
                let cp = self.regions[r].cp.then_some(CpState::Init);
                self.expand(r, nfa.init, cp, a)
            }
        };
        self.memo.insert((phi.clone(), a), d.clone());
        d
    }

    /// Transition from NFA state `q` of region `r` on letter `a`.
    fn expand(&mut self, r: usize, q: usize, cp: Option<CpState>, a: u32) -> Dnf {
        let region = self.regions[r].clone();
        let diamond = region.kind == RegionKind::Diamond;
        let body = match &region.formula {
            Formula::Diamond(_, b)
            | Formula::Box(_, b)
            | Formula::DiamondLe(_, _, b)
            | Formula::BoxLe(_, _, b)
            | Formula::DiamondCp(_, b)
            | Formula::BoxCp(_, b) => (**b).clone(),
            _ => unreachable!(),
        };
        let nfa = region.nfa;
        let colored = self.alphabet.has(a, &self.color);
        let mut acc = if diamond { dnf::ff() } else { dnf::tt() };
        for path in nfa.epsilon_paths(q, self.opts.include_endpoints) {
            // Diamond: all tests must hold. Box: some negated test holds.
            let mut guard = if diamond { dnf::tt() } else { dnf::ff() };
            for theta in &path.marks {
                if diamond {
                    let d = self.delta(theta, a);
                    guard = dnf::and(&guard, &d);
                } else {
                    let d = self.delta(&theta.negate(), a);
                    guard = dnf::or(&guard, &d);
                }
            }
            let mut options: Vec<Dnf> = Vec::new();
            for (label, t) in &nfa.edges[path.target] {
                if !self.alphabet.holds(label, a) {
                    continue;
                }
                let next = cp.map(|c| c.step(colored));
                if next == Some(CpState::Sink) {
                    // the match would contain a second changepoint
                    options.push(if diamond { dnf::ff() } else { dnf::tt() });
                } else {
                    options.push(dnf::var(self.state(r, *t, next)));
                }
            }
            if path.target == nfa.fin {
                options.push(self.delta(&body, a));
            }
            for o in options {
                acc = if diamond {
                    dnf::or(&acc, &dnf::and(&guard, &o))
                } else {
                    dnf::and(&acc, &dnf::or(&guard, &o))
                };
            }
        }
        acc
    }
}

fn bool_dnf(b: bool) -> Dnf {
    if b {
        dnf::tt()
    } else {
        dnf::ff()
    }
}

/// Builds the alternating automaton of a variable-free formula over the
/// letters of `alphabet`; changepoints are counted on `color`.
pub fn build_aba(phi: &Formula, alphabet: &Alphabet, color: &str) -> Result<Aba, Error> {
    build_aba_with(phi, alphabet, color, AbaOptions::default())
}

/// Builds the automaton of a formula that may contain bounded operators.
/// Their regions are built unbounded and tagged with the variable; bounds
/// are imposed later by the counter construction.
pub fn build_parametric(phi: &Formula, alphabet: &Alphabet) -> Result<Aba, Error> {
    build_aba_with(
        phi,
        alphabet,
        DEFAULT_COLOR,
        AbaOptions { parametric: true, ..AbaOptions::default() },
    )
}

pub fn build_aba_with(
    phi: &Formula,
    alphabet: &Alphabet,
    color: &str,
    opts: AbaOptions,
) -> Result<Aba, Error> {
    if !opts.parametric && !phi.is_variable_free() {
        return Err(Error::WrongFragment(
            "the alternating automaton needs a variable-free formula".into(),
        ));
    }
    let mut b = Builder {
        alphabet: alphabet.clone(),
        color: color.to_string(),
        opts,
        regions: Vec::new(),
        region_index: HashMap::new(),
        states: vec![AbaState { region: None, nfa_state: 0, cp: None, accepting: false }],
        state_index: HashMap::new(),
        memo: HashMap::new(),
    };
    let mut delta: Vec<Vec<Dnf>> = vec![alphabet.letters().map(|a| b.delta(phi, a)).collect()];
    while delta.len() < b.states.len() {
        let q = delta.len();
        let s = b.states[q].clone();
        let r = s.region.expect("only the initial state lacks a region");
        let row = alphabet.letters().map(|a| b.expand(r, s.nfa_state, s.cp, a)).collect();
        delta.push(row);
    }
    Ok(Aba {
        alphabet: alphabet.clone(),
        color: color.to_string(),
        states: b.states,
        regions: b.regions,
        init: 0,
        delta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Regex;
    use crate::syntax::parse_formula;

    fn ab(props: &[&str]) -> Alphabet {
        Alphabet::new(props.iter().copied()).unwrap()
    }

    #[test]
    fn atom_automaton() {
        let a = ab(&["p"]);
        let aba = build_aba(&Formula::atom("p"), &a, "p").unwrap();
        assert_eq!(aba.len(), 1);
        assert_eq!(aba.delta[0][1], dnf::tt());
        assert_eq!(aba.delta[0][0], dnf::ff());
    }

    #[test]
    fn eventually() {
        let a = ab(&["p"]);
        let aba = build_aba(&parse_formula("< tt* > p").unwrap(), &a, "p").unwrap();
        // init plus the target of the single tt edge
        assert_eq!(aba.len(), 2);
        assert!(!aba.states[1].accepting);
        assert_eq!(aba.delta[0][1], dnf::tt());
        assert_eq!(aba.delta[0][0], dnf::var(1));
        assert_eq!(aba.delta[1][0], dnf::var(1));
        assert!(aba.is_weak());
    }

    #[test]
    fn always_is_accepting_loop() {
        let a = ab(&["p"]);
        let aba = build_aba(&parse_formula("[ tt* ] p").unwrap(), &a, "p").unwrap();
        assert!(aba.states[1].accepting);
        assert_eq!(aba.delta[1][1], dnf::var(1));
        assert_eq!(aba.delta[1][0], dnf::ff());
    }

    #[test]
    fn rejects_parameters() {
        let a = ab(&["p"]);
        let f = parse_formula("< tt* >{<= x} p").unwrap();
        assert!(build_aba(&f, &a, "p").is_err());
        let aba = build_parametric(&f, &a).unwrap();
        assert_eq!(aba.regions[0].var.as_deref(), Some("x"));
    }

    #[test]
    fn cp_sink_blocks() {
        let a = ab(&["p"]);
        let f = Formula::diamond_cp(Regex::star(Regex::tt()), Formula::False);
        let aba = build_aba(&f, &a, "p").unwrap();
        assert!(aba.states.iter().skip(1).all(|s| s.cp.is_some()));
        assert!(aba.states.iter().all(|s| s.cp != Some(CpState::Sink)));
        assert_eq!(CpState::Init.step(true).step(false).step(true), CpState::Sink);
        assert_eq!(CpState::Init.step(false).step(true).step(true), CpState::PlainColored);
    }
}
