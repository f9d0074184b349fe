//! Graphviz export of automata, products, games and transducers.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::automata::{Aba, Alphabet, CpState, Dpa, Nba};
use crate::modelcheck::ColoredGraph;
use crate::realize::{ParityGame, Player, Transducer};
use crate::syntax::print_letter;

/// Rendering as a DOT digraph.
pub trait ToDot {
    fn to_dot(&self) -> String;
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Letters grouped by the edge they label, one label per edge.
fn grouped<K: Ord>(alphabet: &Alphabet, edges: impl IntoIterator<Item = (K, u32)>) -> BTreeMap<K, String> {
    let mut by: BTreeMap<K, Vec<String>> = BTreeMap::new();
    for (k, a) in edges {
        by.entry(k).or_default().push(print_letter(&alphabet.letter(a)));
    }
    by.into_iter().map(|(k, ls)| (k, ls.join(" "))).collect()
}

fn header(out: &mut String) {
    out.push_str("digraph {\n  rankdir=LR;\n  start [shape=point];\n");
}

impl ToDot for Aba {
    fn to_dot(&self) -> String {
        let mut out = String::new();
        header(&mut out);
        for q in 0..self.len() {
            let shape = if self.states[q].accepting { "doublecircle" } else { "circle" };
            let _ = writeln!(out, "  n{q} [label={}, shape={shape}];", quote(&self.state_name(q)));
        }
        out.push_str("  tt [label=\"tt\", shape=doublecircle];\n  ff [label=\"ff\", shape=circle];\n");
        out.push_str("  tt -> tt [label=\"*\"];\n  ff -> ff [label=\"*\"];\n");
        let _ = writeln!(out, "  start -> n{};", self.init);
        for q in 0..self.len() {
            let edges = self.alphabet.letters().flat_map(|a| {
                let d = &self.delta[q][a as usize];
                if d.is_empty() {
                    vec![(None, a)]
                } else {
                    d.iter().map(|c| (Some(c.clone()), a)).collect()
                }
            });
            for (k, (clause, label)) in grouped(&self.alphabet, edges).into_iter().enumerate() {
                match clause.as_deref() {
                    None => {
                        let _ = writeln!(out, "  n{q} -> ff [label={}];", quote(&label));
                    }
                    Some([]) => {
                        let _ = writeln!(out, "  n{q} -> tt [label={}];", quote(&label));
                    }
                    Some([t]) => {
                        let _ = writeln!(out, "  n{q} -> n{t} [label={}];", quote(&label));
                    }
                    Some(ts) => {
                        let _ = writeln!(out, "  and{q}_{k} [shape=point];");
                        let _ = writeln!(out, "  n{q} -> and{q}_{k} [label={}, arrowhead=none];", quote(&label));
                        for t in ts {
                            let _ = writeln!(out, "  and{q}_{k} -> n{t};");
                        }
                    }
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

impl ToDot for Nba {
    fn to_dot(&self) -> String {
        let mut out = String::new();
        header(&mut out);
        for q in 0..self.len() {
            let shape = if self.accepting[q] { "doublecircle" } else { "circle" };
            let _ = writeln!(out, "  n{q} [label={}, shape={shape}];", quote(&self.names[q]));
        }
        let _ = writeln!(out, "  start -> n{};", self.init);
        for q in 0..self.len() {
            let edges = self
                .alphabet
                .letters()
                .flat_map(|a| self.succ[q][a as usize].iter().map(move |&t| (t, a)));
            for (t, label) in grouped(&self.alphabet, edges) {
                let _ = writeln!(out, "  n{q} -> n{t} [label={}];", quote(&label));
            }
        }
        out.push_str("}\n");
        out
    }
}

impl ToDot for Dpa {
    fn to_dot(&self) -> String {
        let mut out = String::new();
        header(&mut out);
        for q in 0..self.len() {
            let _ = writeln!(out, "  n{q} [label=\"q{q} / color {}\"];", self.color[q]);
        }
        let _ = writeln!(out, "  start -> n{};", self.init);
        for q in 0..self.len() {
            let edges = self.alphabet.letters().map(|a| (self.delta[q][a as usize], a));
            for (t, label) in grouped(&self.alphabet, edges) {
                let _ = writeln!(out, "  n{q} -> n{t} [label={}];", quote(&label));
            }
        }
        out.push_str("}\n");
        out
    }
}

impl ToDot for ColoredGraph {
    fn to_dot(&self) -> String {
        let mut out = String::new();
        header(&mut out);
        for v in 0..self.len() {
            let colors: Vec<&str> = self
                .colors
                .iter()
                .enumerate()
                .filter(|(b, _)| self.label[v] >> b & 1 == 1)
                .map(|(_, c)| c.as_str())
                .collect();
            let sets: Vec<String> = (0..self.accepting.len()).filter(|&i| self.accepting[i][v]).map(|i| format!("F{i}")).collect();
            let label = format!("v{v} s{} {{{}}} {}", self.sys_state[v], colors.join(","), sets.join(","));
            let shape = if sets.is_empty() { "circle" } else { "doublecircle" };
            let _ = writeln!(out, "  n{v} [label={}, shape={shape}];", quote(label.trim_end()));
        }
        let _ = writeln!(out, "  start -> n{};", self.init);
        for v in 0..self.len() {
            for t in &self.succ[v] {
                let _ = writeln!(out, "  n{v} -> n{t};");
            }
        }
        out.push_str("}\n");
        out
    }
}

impl ToDot for ParityGame {
    fn to_dot(&self) -> String {
        let mut out = String::new();
        header(&mut out);
        for v in 0..self.len() {
            let shape = if self.owner[v] == Player::I { "box" } else { "ellipse" };
            let label = format!("{} / color {}", self.names[v], self.color[v]);
            let _ = writeln!(out, "  n{v} [label={}, shape={shape}];", quote(&label));
        }
        let _ = writeln!(out, "  start -> n{};", self.init);
        for v in 0..self.len() {
            let mut by: BTreeMap<usize, Vec<String>> = BTreeMap::new();
            for (t, l) in self.succ[v].iter().zip(&self.moves[v]) {
                by.entry(*t).or_default().push(print_letter(l));
            }
            for (t, ls) in by {
                let _ = writeln!(out, "  n{v} -> n{t} [label={}];", quote(&ls.join(" ")));
            }
        }
        out.push_str("}\n");
        out
    }
}

impl ToDot for Transducer {
    fn to_dot(&self) -> String {
        let mut out = String::new();
        header(&mut out);
        for s in 0..self.len() {
            let label = format!("s{s} / {}", print_letter(&self.output[s]));
            let _ = writeln!(out, "  n{s} [label={}, shape=box];", quote(&label));
        }
        let _ = writeln!(out, "  start -> n{};", self.init);
        let inputs = self.input_letters();
        for s in 0..self.len() {
            let mut by: BTreeMap<usize, Vec<String>> = BTreeMap::new();
            for (i, &t) in self.delta[s].iter().enumerate() {
                by.entry(t).or_default().push(print_letter(&inputs[i]));
            }
            for (t, ls) in by {
                let _ = writeln!(out, "  n{s} -> n{t} [label={}];", quote(&ls.join(" ")));
            }
        }
        out.push_str("}\n");
        out
    }
}

/// The changepoint-tracking automaton: it accepts the words whose color
/// changes at most once after the first letter.
pub fn changepoint_dot(color: &str) -> String {
    let mut out = String::new();
    header(&mut out);
    for c in CpState::ALL {
        let shape = if c.accepting() { "doublecircle" } else { "circle" };
        let _ = writeln!(out, "  {c:?} [shape={shape}];");
    }
    out.push_str("  start -> Init;\n");
    for c in CpState::ALL {
        for (colored, label) in [(true, color.to_string()), (false, format!("!{color}"))] {
            let _ = writeln!(out, "  {c:?} -> {:?} [label={}];", c.step(colored), quote(&label));
        }
    }
    out.push_str("}\n");
    out
}
