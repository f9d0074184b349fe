//! Nondeterministic Büchi automata: emptiness and lasso membership.

use std::fmt;

use super::alphabet::Alphabet;
use crate::graph::{self, Require};
use crate::word::LassoWord;

#[derive(Clone, Debug)]
pub struct Nba {
    pub alphabet: Alphabet,
    pub init: usize,
    /// `succ[q][letter]`, sorted.
    pub succ: Vec<Vec<Vec<usize>>>,
    pub accepting: Vec<bool>,
    pub names: Vec<String>,
}

/// An accepting run on a lasso word: states `run[i]` read `letters[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcceptingLasso {
    pub word: LassoWord,
    pub stem: Vec<(usize, u32)>,
    pub cycle: Vec<(usize, u32)>,
}

impl Nba {
    pub fn len(&self) -> usize {
        self.succ.len()
    }

    pub fn is_empty(&self) -> bool {
        self.succ.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().flatten().map(Vec::len).sum()
    }

    fn graph(&self) -> Vec<Vec<usize>> {
        self.succ
            .iter()
            .map(|row| {
                let mut t: Vec<usize> = row.iter().flatten().copied().collect();
                t.sort_unstable();
                t.dedup();
                t
            })
            .collect()
    }

    fn letter_between(&self, u: usize, v: usize) -> u32 {
        self.alphabet
            .letters()
            .find(|&a| self.succ[u][a as usize].contains(&v))
            .expect("edge exists")
    }

    /// Some accepted lasso word with a run witnessing it, or `None` if the
    /// language is empty.
    pub fn accepting_lasso(&self) -> Option<AcceptingLasso> {
        let g = self.graph();
        let acc = |v: usize| self.accepting[v];
        let l = graph::fair_lasso(&g, self.init, &[Require::Vertex(&acc)])?;
        let label = |path: &[usize]| -> Vec<(usize, u32)> {
            path.windows(2).map(|w| (w[0], self.letter_between(w[0], w[1]))).collect()
        };
        let stem = label(&l.stem);
        let anchor = *l.stem.last().unwrap();
        let mut full = vec![anchor];
        full.extend(&l.cycle);
        let cycle = label(&full);
        let word = LassoWord::new(
            stem.iter().map(|&(_, a)| self.alphabet.letter(a)).collect(),
            cycle.iter().map(|&(_, a)| self.alphabet.letter(a)).collect(),
        );
        Some(AcceptingLasso { word, stem, cycle })
    }

    /// Some accepted word, or `None` if the language is empty.
    pub fn emptiness(&self) -> Option<LassoWord> {
        self.accepting_lasso().map(|l| l.word)
    }

    /// Whether `w` is accepted, via the product with the lasso's positions.
    pub fn accepts(&self, w: &LassoWord) -> bool {
        let masks = self.alphabet.masks(w);
        let npos = masks.len();
        let id = |q: usize, n: usize| q * npos + n;
        let mut succ = vec![Vec::new(); self.len() * npos];
        for q in 0..self.len() {
            for (n, &m) in masks.iter().enumerate() {
                succ[id(q, n)] = self.succ[q][m as usize].iter().map(|&t| id(t, w.next(n))).collect();
            }
        }
        let acc = |v: usize| self.accepting[v / npos];
        graph::fair_lasso(&succ, id(self.init, 0), &[Require::Vertex(&acc)]).is_some()
    }

    /// Restriction to states that are reachable and can reach an accepting
    /// cycle. Keeps the initial state even if the language is empty.
    pub fn trim(&self) -> Nba {
        let g = self.graph();
        let reach = graph::reachable(&g, self.init);
        let comps = graph::sccs(&g);
        let mut good = vec![false; self.len()];
        for c in &comps {
            let nontrivial = c.len() > 1 || g[c[0]].contains(&c[0]);
            if nontrivial && c.iter().any(|&v| self.accepting[v]) {
                for &v in c {
                    good[v] = true;
                }
            }
        }
        // backward closure: tarjan yields components in reverse topological order
        for c in &comps {
            if c.iter().any(|&v| g[v].iter().any(|&t| good[t])) {
                for &v in c {
                    good[v] = true;
                }
            }
        }
        let keep: Vec<usize> = (0..self.len()).filter(|&v| v == self.init || (reach[v] && good[v])).collect();
        let mut index = vec![usize::MAX; self.len()];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        Nba {
            alphabet: self.alphabet.clone(),
            init: index[self.init],
            succ: keep
                .iter()
                .map(|&v| {
                    self.succ[v]
                        .iter()
                        .map(|ts| ts.iter().filter(|&&t| index[t] != usize::MAX).map(|&t| index[t]).collect())
                        .collect()
                })
                .collect(),
            accepting: keep.iter().map(|&v| self.accepting[v]).collect(),
            names: keep.iter().map(|&v| self.names[v].clone()).collect(),
        }
    }
}

impl fmt::Display for Nba {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.len() {
            let mark = if q == self.init { "-> " } else { "   " };
            let acc = if self.accepting[q] { " (accepting)" } else { "" };
            writeln!(f, "{mark}{}{acc}", self.names[q])?;
            for a in self.alphabet.letters() {
                for &t in &self.succ[q][a as usize] {
                    let l = crate::syntax::print_letter(&self.alphabet.letter(a));
                    writeln!(f, "     {l} -> {}", self.names[t])?;
                }
            }
        }
        Ok(())
    }
}
