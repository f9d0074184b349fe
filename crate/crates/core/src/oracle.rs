//! Direct semantics of PLDL on ultimately periodic words.
//!
//! Truth values are computed bottom-up as vectors over the reduced positions
//! `0..|prefix|+|cycle|` of a lasso. Regular expressions are matched by
//! running their marked ε-NFA along the word, which yields the exact,
//! eventually periodic set of match end offsets.

use std::collections::HashMap;
use std::rc::Rc;

use crate::automata::nfa::{thompson, MarkedNfa};
use crate::formula::{Formula, Regex, Valuation};
use crate::word::LassoWord;

/// Proposition whose flips delimit blocks for the changepoint operators.
pub const DEFAULT_COLOR: &str = "p";

/// The offsets `j` such that `(n, n + j)` is a match, as an eventually
/// periodic bit vector: `ends[j]` for `j < ends.len()`, and beyond that the
/// slice `ends[loop_start..]` repeats.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchSet {
    pub start: usize,
    pub ends: Vec<bool>,
    pub loop_start: usize,
}

impl MatchSet {
    pub fn contains(&self, j: usize) -> bool {
        if j < self.ends.len() {
            self.ends[j]
        } else {
            let period = self.ends.len() - self.loop_start;
            self.ends[self.loop_start + (j - self.loop_start) % period]
        }
    }

    pub fn period(&self) -> usize {
        self.ends.len() - self.loop_start
    }

    /// Offsets below `limit` that are matches.
    pub fn offsets_below(&self, limit: usize) -> Vec<usize> {
        (0..limit).filter(|&j| self.contains(j)).collect()
    }

    /// Whether there are no matches at all.
    pub fn is_empty(&self) -> bool {
        !self.ends.contains(&true)
    }
}

/// Evaluator for one word and one valuation.
pub struct Oracle<'a> {
    w: &'a LassoWord,
    alpha: &'a Valuation,
    color: String,
    truth: HashMap<Formula, Rc<Vec<bool>>>,
    nfas: HashMap<Regex, Rc<MarkedNfa>>,
}

impl<'a> Oracle<'a> {
    pub fn new(w: &'a LassoWord, alpha: &'a Valuation) -> Self {
        Self::with_color(w, alpha, DEFAULT_COLOR)
    }

    pub fn with_color(w: &'a LassoWord, alpha: &'a Valuation, color: &str) -> Self {
        Oracle { w, alpha, color: color.to_string(), truth: HashMap::new(), nfas: HashMap::new() }
    }

    pub fn eval_at(&mut self, n: usize, phi: &Formula) -> bool {
        let m = self.w.reduce(n);
        self.truth(phi)[m]
    }

    /// Truth value of `phi` at each reduced position.
    pub fn truth(&mut self, phi: &Formula) -> Rc<Vec<bool>> {
        if let Some(v) = self.truth.get(phi) {
            return v.clone();
        }
        let len = self.w.len();
        let v: Vec<bool> = match phi {
            Formula::True => vec![true; len],
            Formula::False => vec![false; len],
            Formula::Atom(p) => (0..len).map(|n| self.w.letter_at(n).contains(p)).collect(),
            Formula::NegAtom(p) => (0..len).map(|n| !self.w.letter_at(n).contains(p)).collect(),
            Formula::And(a, b) => {
                let (a, b) = (self.truth(a), self.truth(b));
                (0..len).map(|n| a[n] && b[n]).collect()
            }
            Formula::Or(a, b) => {
                let (a, b) = (self.truth(a), self.truth(b));
                (0..len).map(|n| a[n] || b[n]).collect()
            }
            Formula::Diamond(r, psi) => self.modal(r, psi, true, |_, _| None),
            Formula::Box(r, psi) => self.modal(r, psi, false, |_, _| None),
            Formula::DiamondLe(r, x, psi) => {
                let k = self.alpha.get(x);
                self.modal(r, psi, true, |_, _| Some(k))
            }
            Formula::BoxLe(r, y, psi) => {
                let k = self.alpha.get(y);
                self.modal(r, psi, false, |_, _| Some(k))
            }
            Formula::DiamondCp(r, psi) => self.modal(r, psi, true, cp_bound),
            Formula::BoxCp(r, psi) => self.modal(r, psi, false, cp_bound),
        };
        let v = Rc::new(v);
        self.truth.insert(phi.clone(), v.clone());
        v
    }

    /// Evaluates `<r> psi` (`diamond`) or `[r] psi` with a per-position bound
    /// on the match length; `None` means unbounded.
    fn modal(
        &mut self,
        r: &Regex,
        psi: &Formula,
        diamond: bool,
        bound: impl Fn(&Oracle<'_>, usize) -> Option<u64>,
    ) -> Vec<bool> {
        let body = self.truth(psi);
        (0..self.w.len())
            .map(|n| {
                let ms = self.match_ends(n, r);
                let horizon = ms.ends.len() as u64;
                let limit = bound(self, n).map_or(horizon, |k| k.saturating_add(1).min(horizon));
                let mut hits = (0..limit as usize)
                    .filter(|&j| ms.contains(j))
                    .map(|j| body[self.w.reduce(n + j)]);
                if diamond {
                    hits.any(|b| b)
                } else {
                    hits.all(|b| b)
                }
            })
            .collect()
    }

    fn nfa(&mut self, r: &Regex) -> Rc<MarkedNfa> {
        self.nfas.entry(r.clone()).or_insert_with(|| Rc::new(thompson(r))).clone()
    }

    /// All end offsets of matches of `r` starting at position `n`.
    pub fn match_ends(&mut self, n: usize, r: &Regex) -> MatchSet {
        let nfa = self.nfa(r);
        let mut seen: HashMap<(Vec<bool>, usize), usize> = HashMap::new();
        let mut pre = vec![false; nfa.len()];
        pre[nfa.init] = true;
        let mut ends = Vec::new();
        let mut k = 0;
        loop {
            let m = n + k;
            let key = (pre.clone(), self.w.reduce(m));
            if let Some(&k0) = seen.get(&key) {
                return MatchSet { start: n, ends, loop_start: k0 };
            }
            seen.insert(key, k);
            let cur = self.closure(&nfa, &pre, m);
            ends.push(cur[nfa.fin]);
            let letter = self.w.letter_at(m);
            let mut next = vec![false; nfa.len()];
            for s in (0..nfa.len()).filter(|&s| cur[s]) {
                for (label, t) in &nfa.edges[s] {
                    if label.holds_in(letter) {
                        next[*t] = true;
                    }
                }
            }
            pre = next;
            k += 1;
        }
    }

    /// States reachable by ε-moves at position `m` through states whose
    /// markings hold at `m`.
    fn closure(&mut self, nfa: &MarkedNfa, pre: &[bool], m: usize) -> Vec<bool> {
        let mut cur = vec![false; nfa.len()];
        let mut stack: Vec<usize> = (0..nfa.len()).filter(|&s| pre[s]).collect();
        while let Some(s) = stack.pop() {
            if cur[s] {
                continue;
            }
            if let Some(theta) = &nfa.marking[s] {
                if !self.eval_at(m, theta) {
                    continue;
                }
            }
            cur[s] = true;
            stack.extend(nfa.eps[s].iter().copied().filter(|&t| !cur[t]));
        }
        cur
    }

    fn colored(&self, i: usize) -> bool {
        self.w.letter_at(i).contains(&self.color)
    }
}

/// Largest `j` such that positions `n+1 ..= n+j-1` contain at most one
/// color flip, or `None` when there is no second flip.
fn cp_bound(o: &Oracle<'_>, n: usize) -> Option<u64> {
    let scan = n + o.w.prefix.len() + 2 * o.w.cycle.len() + 1;
    let mut flips = 0;
    for i in n + 1..=scan {
        if o.colored(i - 1) != o.colored(i) {
            flips += 1;
            if flips == 2 {
                return Some((i - n) as u64);
            }
        }
    }
    None
}

/// `(w, n, alpha) |= phi`.
pub fn eval_at(w: &LassoWord, n: usize, alpha: &Valuation, phi: &Formula) -> bool {
    Oracle::new(w, alpha).eval_at(n, phi)
}

/// `(w, alpha) |= phi`.
pub fn models(w: &LassoWord, alpha: &Valuation, phi: &Formula) -> bool {
    eval_at(w, 0, alpha, phi)
}

/// `(w, alpha) |= phi` with changepoints counted on `color`.
pub fn models_with_color(w: &LassoWord, alpha: &Valuation, phi: &Formula, color: &str) -> bool {
    Oracle::with_color(w, alpha, color).eval_at(0, phi)
}

pub fn match_ends(w: &LassoWord, n: usize, alpha: &Valuation, r: &Regex) -> MatchSet {
    Oracle::new(w, alpha).match_ends(n, r)
}
