//! Finite labeled transition systems.

use std::collections::BTreeSet;

use crate::word::{LassoWord, Letter};
use crate::Error;

/// `(S, s0, E, ℓ)` with a left-total edge relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct System {
    pub props: BTreeSet<String>,
    pub names: Vec<String>,
    pub labels: Vec<Letter>,
    pub init: usize,
    pub succ: Vec<Vec<usize>>,
}

impl System {
    /// Checks the structural invariants.
    pub fn validate(&self) -> Result<(), Error> {
        let n = self.names.len();
        if n == 0 || self.init >= n {
            return Err(Error::Invalid("missing initial state".into()));
        }
        if self.labels.len() != n || self.succ.len() != n {
            return Err(Error::Invalid("inconsistent state tables".into()));
        }
        for (s, out) in self.succ.iter().enumerate() {
            if out.is_empty() {
                return Err(Error::Invalid(format!(
                    "not left-total: state {} has no outgoing edge",
                    self.names[s]
                )));
            }
            if out.iter().any(|&t| t >= n) {
                return Err(Error::Invalid("edge to unknown state".into()));
            }
        }
        for (s, l) in self.labels.iter().enumerate() {
            if let Some(p) = l.iter().find(|p| !self.props.contains(*p)) {
                return Err(Error::Invalid(format!(
                    "label {p} of state {} is not a declared proposition",
                    self.names[s]
                )));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// A single state with a self-loop.
    pub fn self_loop(label: Letter) -> System {
        System {
            props: label.clone(),
            names: vec!["s0".into()],
            labels: vec![label],
            init: 0,
            succ: vec![vec![0]],
        }
    }

    /// The system whose only trace is the given lasso.
    pub fn from_lasso(w: &LassoWord, props: &BTreeSet<String>) -> System {
        let n = w.len();
        System {
            props: props.clone(),
            names: (0..n).map(|i| format!("s{i}")).collect(),
            labels: (0..n).map(|i| w.letter_at(i).clone()).collect(),
            init: 0,
            succ: (0..n).map(|i| vec![w.next(i)]).collect(),
        }
    }

    /// One state per letter over `props`, fully connected, starting in `first`.
    pub fn universal(props: &BTreeSet<String>, first: &Letter) -> System {
        let props_v: Vec<&String> = props.iter().collect();
        let count = 1usize << props_v.len();
        let labels: Vec<Letter> = (0..count)
            .map(|m| {
                props_v
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| m >> i & 1 == 1)
                    .map(|(_, p)| (*p).clone())
                    .collect()
            })
            .collect();
        let init = labels.iter().position(|l| l == first).expect("letter over props");
        System {
            props: props.clone(),
            names: (0..count).map(|i| format!("u{i}")).collect(),
            labels,
            init,
            succ: (0..count).map(|_| (0..count).collect()).collect(),
        }
    }

    /// Trace of a lasso-shaped state path.
    pub fn trace(&self, prefix: &[usize], cycle: &[usize]) -> LassoWord {
        LassoWord::new(
            prefix.iter().map(|&s| self.labels[s].clone()).collect(),
            cycle.iter().map(|&s| self.labels[s].clone()).collect(),
        )
    }

    /// Distinct traces of lasso paths with at most `max_len` states, in canonical form.
    pub fn lasso_traces(&self, max_len: usize) -> Vec<LassoWord> {
        let mut out = BTreeSet::new();
        let mut path = vec![self.init];
        fn go(sys: &System, path: &mut Vec<usize>, max_len: usize, out: &mut BTreeSet<String>, acc: &mut Vec<LassoWord>) {
            let last = *path.last().unwrap();
            for &t in &sys.succ[last] {
                for (i, &s) in path.iter().enumerate() {
                    if s == t {
                        let w = sys.trace(&path[..i], &path[i..]).canonical();
                        if out.insert(w.to_string()) {
                            acc.push(w);
                        }
                    }
                }
            }
            if path.len() < max_len {
                for &t in &sys.succ[last] {
                    path.push(t);
                    go(sys, path, max_len, out, acc);
                    path.pop();
                }
            }
        }
        let mut acc = Vec::new();
        go(self, &mut path, max_len, &mut out, &mut acc);
        acc
    }
}
