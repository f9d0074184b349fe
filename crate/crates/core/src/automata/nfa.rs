//! Marked ε-NFAs for regular expressions (Thompson construction).

use std::collections::BTreeSet;

use crate::formula::{Formula, PropFormula, Regex};

/// An ε-NFA whose test states carry the formula they check.
///
/// Every state has either ε-edges or letter edges, never both. The final
/// state is unique and has no outgoing edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedNfa {
    pub init: usize,
    pub fin: usize,
    pub eps: Vec<Vec<usize>>,
    pub edges: Vec<Vec<(PropFormula, usize)>>,
    pub marking: Vec<Option<Formula>>,
}

/// A simple ε-path summary: where it ends and which tests it passes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct EpsPath {
    pub target: usize,
    pub marks: BTreeSet<Formula>,
}

impl MarkedNfa {
    pub fn len(&self) -> usize {
        self.eps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eps.is_empty()
    }

    fn add_state(&mut self) -> usize {
        self.eps.push(Vec::new());
        self.edges.push(Vec::new());
        self.marking.push(None);
        self.eps.len() - 1
    }

    /// States with at least one letter edge.
    pub fn letter_states(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&q| !self.edges[q].is_empty())
    }

    /// Distinct (target, marking set) pairs over simple ε-paths from `q`,
    /// including the empty path. `include_ends` controls whether the
    /// markings of the two endpoints count.
    pub fn epsilon_paths(&self, q: usize, include_ends: bool) -> Vec<EpsPath> {
        let mut out = BTreeSet::new();
        let mut on_path = vec![false; self.len()];
        let mut path = vec![q];
        on_path[q] = true;
        self.paths_from(&mut path, &mut on_path, include_ends, &mut out);
        out.into_iter().collect()
    }

    fn paths_from(
        &self,
        path: &mut Vec<usize>,
        on_path: &mut [bool],
        include_ends: bool,
        out: &mut BTreeSet<EpsPath>,
    ) {
        let last = path.len() - 1;
        let marks = path
            .iter()
            .enumerate()
            .filter(|&(i, _)| include_ends || (i != 0 && i != last))
            .filter_map(|(_, &s)| self.marking[s].clone())
            .collect();
        out.insert(EpsPath { target: path[last], marks });
        for &t in &self.eps[path[last]] {
            if !on_path[t] {
                on_path[t] = true;
                path.push(t);
                self.paths_from(path, on_path, include_ends, out);
                path.pop();
                on_path[t] = false;
            }
        }
    }
}

/// Builds the marked ε-NFA of `r` with the five inductive gadgets.
pub fn thompson(r: &Regex) -> MarkedNfa {
    let mut nfa = MarkedNfa {
        init: 0,
        fin: 0,
        eps: Vec::new(),
        edges: Vec::new(),
        marking: Vec::new(),
    };
    let (i, f) = build(r, &mut nfa);
    nfa.init = i;
    nfa.fin = f;
    nfa
}

fn build(r: &Regex, nfa: &mut MarkedNfa) -> (usize, usize) {
    match r {
        Regex::Prop(p) => {
            let a = nfa.add_state();
            let b = nfa.add_state();
            nfa.edges[a].push((p.clone(), b));
            (a, b)
        }
        Regex::Test(theta) => {
            let a = nfa.add_state();
            nfa.marking[a] = Some((**theta).clone());
            (a, a)
        }
        Regex::Union(r0, r1) => {
            let i = nfa.add_state();
            let (i0, f0) = build(r0, nfa);
            let (i1, f1) = build(r1, nfa);
            let f = nfa.add_state();
            nfa.eps[i].extend([i0, i1]);
            nfa.eps[f0].push(f);
            nfa.eps[f1].push(f);
            (i, f)
        }
        Regex::Concat(r0, r1) => {
            let i = nfa.add_state();
            let (i0, f0) = build(r0, nfa);
            let (i1, f1) = build(r1, nfa);
            let f = nfa.add_state();
            nfa.eps[i].push(i0);
            nfa.eps[f0].push(i1);
            nfa.eps[f1].push(f);
            (i, f)
        }
        Regex::Star(r0) => {
            let i = nfa.add_state();
            let (i0, f0) = build(r0, nfa);
            let f = nfa.add_state();
            nfa.eps[i].extend([i0, f]);
            nfa.eps[f0].extend([i0, f]);
            (i, f)
        }
    }
}
