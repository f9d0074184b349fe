//! Determinization of Büchi automata into max-parity automata, following
//! Piterman's construction with compact Safra trees.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use super::alphabet::Alphabet;
use super::nba::Nba;
use crate::word::LassoWord;

/// A deterministic parity automaton; a run is accepting iff the largest
/// color seen infinitely often is even.
#[derive(Clone, Debug)]
pub struct Dpa {
    pub alphabet: Alphabet,
    pub init: usize,
    /// `delta[q][letter]`.
    pub delta: Vec<Vec<usize>>,
    pub color: Vec<u32>,
}

impl Dpa {
    pub fn len(&self) -> usize {
        self.delta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.delta.is_empty()
    }

    pub fn max_color(&self) -> u32 {
        self.color.iter().copied().max().unwrap_or(0)
    }

    pub fn accepts(&self, w: &LassoWord) -> bool {
        let masks = self.alphabet.masks(w);
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        let mut run = Vec::new();
        let (mut q, mut n) = (self.init, 0);
        loop {
            if let Some(&start) = seen.get(&(q, n)) {
                let top = run[start..].iter().map(|&s| self.color[s]).max().unwrap();
                return top % 2 == 0;
            }
            seen.insert((q, n), run.len());
            run.push(q);
            q = self.delta[q][masks[n] as usize];
            n = w.next(n);
        }
    }
}

impl fmt::Display for Dpa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.len() {
            let mark = if q == self.init { "-> " } else { "   " };
            writeln!(f, "{mark}q{q} color {}", self.color[q])?;
            for a in self.alphabet.letters() {
                let l = crate::syntax::print_letter(&self.alphabet.letter(a));
                writeln!(f, "     {l} -> q{}", self.delta[q][a as usize])?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Node {
    name: usize,
    label: Vec<usize>,
    children: Vec<Node>,
}

/// One step of the tree construction; returns the new tree (`None` when
/// the label set died out) and the min-parity priority of the step.
fn step(nba: &Nba, tree: &Node, a: u32, neutral: usize) -> (Option<Node>, usize) {
    let mut t = tree.clone();
    // 1. successors
    fn update(n: &mut Node, nba: &Nba, a: u32) {
        let mut l: Vec<usize> = n.label.iter().flat_map(|&q| nba.succ[q][a as usize].iter().copied()).collect();
        l.sort_unstable();
        l.dedup();
        n.label = l;
        for c in &mut n.children {
            update(c, nba, a);
        }
    }
    update(&mut t, nba, a);
    // 2. spawn children with the accepting part of each label
    let mut next_name = max_name(&t) + 1;
    fn spawn(n: &mut Node, nba: &Nba, next: &mut usize) {
        for c in &mut n.children {
            spawn(c, nba, next);
        }
        let acc: Vec<usize> = n.label.iter().copied().filter(|&q| nba.accepting[q]).collect();
        if !acc.is_empty() {
            n.children.push(Node { name: *next, label: acc, children: Vec::new() });
            *next += 1;
        }
    }
    spawn(&mut t, nba, &mut next_name);
    // 3. horizontal merge: a state stays only in the oldest sibling
    fn horizontal(n: &mut Node) {
        let mut taken: Vec<usize> = Vec::new();
        for c in &mut n.children {
            c.remove_states(&taken);
            taken.extend(c.label.iter().copied());
            taken.sort_unstable();
            taken.dedup();
        }
        for c in &mut n.children {
            horizontal(c);
        }
    }
    horizontal(&mut t);
    // 4. remove empty nodes, 5. vertical merge
    let mut removed: Vec<usize> = Vec::new();
    let mut green: Vec<usize> = Vec::new();
    fn prune(n: &mut Node, removed: &mut Vec<usize>, green: &mut Vec<usize>) {
        n.children.retain(|c| {
            if c.label.is_empty() {
                c.collect_names(removed);
                false
            } else {
                true
            }
        });
        for c in &mut n.children {
            prune(c, removed, green);
        }
        if !n.children.is_empty() {
            let mut union: Vec<usize> = n.children.iter().flat_map(|c| c.label.iter().copied()).collect();
            union.sort_unstable();
            union.dedup();
            if union == n.label {
                for c in &n.children {
                    c.collect_names(removed);
                }
                n.children.clear();
                green.push(n.name);
            }
        }
    }
    if t.label.is_empty() {
        return (None, neutral);
    }
    prune(&mut t, &mut removed, &mut green);
    let e = removed.iter().copied().min();
    let f = green.iter().copied().min();
    let prio = match (e, f) {
        (None, None) => neutral,
        (Some(e), None) => 2 * e - 1,
        (None, Some(f)) => 2 * f,
        (Some(e), Some(f)) => {
            if f < e {
                2 * f
            } else {
                2 * e - 1
            }
        }
    };
    // 6. compact names, preserving their order
    let mut names = Vec::new();
    t.collect_names(&mut names);
    names.sort_unstable();
    let rename: HashMap<usize, usize> = names.iter().enumerate().map(|(i, &n)| (n, i + 1)).collect();
    t.rename(&rename);
    (Some(t), prio.min(neutral))
}

impl Node {
    fn remove_states(&mut self, gone: &[usize]) {
        self.label.retain(|q| gone.binary_search(q).is_err());
        for c in &mut self.children {
            c.remove_states(gone);
        }
    }

    fn collect_names(&self, out: &mut Vec<usize>) {
        out.push(self.name);
        for c in &self.children {
            c.collect_names(out);
        }
    }

    fn rename(&mut self, map: &HashMap<usize, usize>) {
        self.name = map[&self.name];
        for c in &mut self.children {
            c.rename(map);
        }
    }
}

fn max_name(n: &Node) -> usize {
    n.children.iter().map(max_name).max().unwrap_or(0).max(n.name)
}

/// Language-preserving determinization.
pub fn determinize(nba: &Nba) -> Dpa {
    // at most |Q| nodes survive a step, at most 2|Q| exist during one
    let names = 2 * nba.len().max(1);
    let neutral = 2 * names + 1;
    let to_color = |prio: usize| (2 * names + 2 - prio) as u32;
    type Key = (Option<Node>, usize);
    let init: Key = (Some(Node { name: 1, label: vec![nba.init], children: Vec::new() }), neutral);
    let mut index: HashMap<Key, usize> = HashMap::new();
    let mut keys = vec![init.clone()];
    index.insert(init, 0);
    let mut delta: Vec<Vec<usize>> = vec![Vec::new()];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let tree = keys[i].0.clone();
        let mut row = Vec::with_capacity(nba.alphabet.size());
        for a in nba.alphabet.letters() {
            let key = match &tree {
                Some(t) => step(nba, t, a, neutral),
                None => (None, neutral),
            };
            let id = match index.get(&key) {
                Some(&id) => id,
                None => {
                    let id = keys.len();
                    index.insert(key.clone(), id);
                    keys.push(key);
                    delta.push(Vec::new());
                    queue.push_back(id);
                    id
                }
            };
            row.push(id);
        }
        delta[i] = row;
    }
    Dpa {
        alphabet: nba.alphabet.clone(),
        init: 0,
        color: keys.iter().map(|(_, p)| to_color(*p)).collect(),
        delta,
    }
}
