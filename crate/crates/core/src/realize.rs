//! Realizability: parity games built from deterministic parity automata,
//! their solution, transducer strategies, the duality transform and
//! optimization of realizing valuations.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::automata::{
    build_aba, build_parametric, counter_breakpoint, determinize, mh_to_nba, region_bounds, Alphabet, Dpa,
};
use crate::formula::{Formula, PropFormula, Regex, Valuation};
use crate::graph;
use crate::modelcheck::{check_decidable, fresh_prop};
use crate::optimize::{least_true, Objective, Optimum};
use crate::syntax::print_letter;
use crate::word::{LassoWord, Letter};
use crate::Error;

/// The two players: `I` picks inputs, `O` picks outputs and wins plays
/// whose largest color seen infinitely often is even.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Player {
    I,
    O,
}

impl Player {
    fn index(self) -> usize {
        self as usize
    }

    fn other(self) -> Player {
        match self {
            Player::I => Player::O,
            Player::O => Player::I,
        }
    }

    /// The player favoured by a color.
    pub fn of_color(c: u32) -> Player {
        if c.is_multiple_of(2) {
            Player::O
        } else {
            Player::I
        }
    }
}

/// A max-parity game. Every edge carries the letter chosen by the owner of
/// its source.
#[derive(Clone, Debug)]
pub struct ParityGame {
    pub owner: Vec<Player>,
    pub succ: Vec<Vec<usize>>,
    pub moves: Vec<Vec<Letter>>,
    pub color: Vec<u32>,
    pub init: usize,
    pub names: Vec<String>,
}

impl ParityGame {
    pub fn len(&self) -> usize {
        self.succ.len()
    }

    pub fn is_empty(&self) -> bool {
        self.succ.is_empty()
    }

    fn preds(&self) -> Vec<Vec<usize>> {
        let mut p = vec![Vec::new(); self.len()];
        for (v, ts) in self.succ.iter().enumerate() {
            for &t in ts {
                p[t].push(v);
            }
        }
        p
    }
}

/// All subsets of `props` as letters, indexed by their bit pattern over
/// the sorted list.
fn subsets(props: &[String]) -> Vec<Letter> {
    (0..1u32 << props.len())
        .map(|m| props.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, p)| p.clone()).collect())
        .collect()
}

fn sorted(props: &BTreeSet<String>) -> Vec<String> {
    props.iter().cloned().collect()
}

/// The arena in which `I` picks a subset of `inputs`, then `O` picks a
/// subset of `outputs` and the automaton moves. Vertices `0..|Q|` belong
/// to `I`; vertex `|Q| + q·2^|I| + i` is the `O` vertex `(q, i)`.
pub fn build_arena(dpa: &Dpa, inputs: &BTreeSet<String>, outputs: &BTreeSet<String>) -> Result<ParityGame, Error> {
    let mut both: BTreeSet<String> = inputs.clone();
    both.extend(outputs.iter().cloned());
    if both.len() != inputs.len() + outputs.len() {
        return Err(Error::Invalid("inputs and outputs overlap".into()));
    }
    if both.iter().ne(dpa.alphabet.props().iter()) {
        return Err(Error::Invalid("automaton alphabet differs from inputs and outputs".into()));
    }
    let ins = subsets(&sorted(inputs));
    let outs = subsets(&sorted(outputs));
    let nq = dpa.len();
    let ni = ins.len();
    let total = nq * (1 + ni);
    let mut g = ParityGame {
        owner: Vec::with_capacity(total),
        succ: Vec::with_capacity(total),
        moves: Vec::with_capacity(total),
        color: Vec::with_capacity(total),
        init: dpa.init,
        names: Vec::with_capacity(total),
    };
    for q in 0..nq {
        g.owner.push(Player::I);
        g.succ.push((0..ni).map(|i| nq + q * ni + i).collect());
        g.moves.push(ins.clone());
        g.color.push(dpa.color[q]);
        g.names.push(format!("q{q}"));
    }
    for q in 0..nq {
        for i in &ins {
            g.owner.push(Player::O);
            g.succ.push(
                outs.iter()
                    .map(|o| {
                        let l: Letter = i.union(o).cloned().collect();
                        dpa.delta[q][dpa.alphabet.mask(&l) as usize]
                    })
                    .collect(),
            );
            g.moves.push(outs.clone());
            g.color.push(dpa.color[q]);
            g.names.push(format!("q{q},{}", print_letter(i)));
        }
    }
    Ok(g)
}

/// Winning regions and positional strategies. `strategy[v]` is an index
/// into `succ[v]`, set for every vertex won by its owner.
#[derive(Clone, Debug)]
pub struct Solution {
    pub winner: Vec<Player>,
    pub strategy: Vec<Option<usize>>,
}

/// Solves a max-parity game by recursive attractor decomposition.
pub fn solve_parity(g: &ParityGame) -> Solution {
    let preds = g.preds();
    let mut strategy = vec![None; g.len()];
    let all = vec![true; g.len()];
    let [_, win_o] = zielonka(g, &preds, &all, &mut strategy);
    let winner = win_o.iter().map(|&w| if w { Player::O } else { Player::I }).collect();
    Solution { winner, strategy }
}

/// Vertices of `sub` from which `p` can force a visit to `target`, with
/// attractor moves written into `strategy`.
fn attractor(
    g: &ParityGame,
    preds: &[Vec<usize>],
    sub: &[bool],
    target: &[bool],
    p: Player,
    strategy: &mut [Option<usize>],
) -> Vec<bool> {
    let mut attr: Vec<bool> = target.to_vec();
    let mut count: Vec<usize> = (0..g.len())
        .map(|v| if sub[v] { g.succ[v].iter().filter(|&&t| sub[t]).count() } else { 0 })
        .collect();
    let mut queue: VecDeque<usize> = (0..g.len()).filter(|&v| attr[v]).collect();
    while let Some(t) = queue.pop_front() {
        for &v in &preds[t] {
            if !sub[v] || attr[v] {
                continue;
            }
            if g.owner[v] == p {
                strategy[v] = g.succ[v].iter().position(|&x| x == t);
                attr[v] = true;
                queue.push_back(v);
            } else {
                count[v] -= 1;
                if count[v] == 0 {
                    attr[v] = true;
                    queue.push_back(v);
                }
            }
        }
    }
    attr
}

fn zielonka(g: &ParityGame, preds: &[Vec<usize>], sub: &[bool], strategy: &mut [Option<usize>]) -> [Vec<bool>; 2] {
    let n = g.len();
    let Some(d) = (0..n).filter(|&v| sub[v]).map(|v| g.color[v]).max() else {
        return [vec![false; n], vec![false; n]];
    };
    let p = Player::of_color(d);
    let top: Vec<bool> = (0..n).map(|v| sub[v] && g.color[v] == d).collect();
    let mut attr_strategy = strategy.to_vec();
    let a = attractor(g, preds, sub, &top, p, &mut attr_strategy);
    let rest: Vec<bool> = (0..n).map(|v| sub[v] && !a[v]).collect();
    let w1 = zielonka(g, preds, &rest, strategy);
    if !w1[p.other().index()].iter().any(|&w| w) {
        for v in 0..n {
            if a[v] && !top[v] && g.owner[v] == p {
                strategy[v] = attr_strategy[v];
            }
            if top[v] && g.owner[v] == p {
                strategy[v] = g.succ[v].iter().position(|&t| sub[t]);
            }
        }
        let mut out = [vec![false; n], vec![false; n]];
        out[p.index()] = sub.to_vec();
        return out;
    }
    let b = attractor(g, preds, sub, &w1[p.other().index()], p.other(), strategy);
    let rest: Vec<bool> = (0..n).map(|v| sub[v] && !b[v]).collect();
    let mut w2 = zielonka(g, preds, &rest, strategy);
    for v in 0..n {
        if b[v] {
            w2[p.other().index()][v] = true;
        }
    }
    w2
}

/// Whether every play from the initial vertex in which `p` follows its
/// strategy is won by `p`: no reachable cycle of the restricted graph has
/// a largest color favouring the opponent.
pub fn strategy_wins(g: &ParityGame, sol: &Solution, p: Player) -> bool {
    let restricted: Vec<Vec<usize>> = (0..g.len())
        .map(|v| {
            if g.owner[v] == p {
                match sol.strategy[v] {
                    Some(k) => vec![g.succ[v][k]],
                    None => Vec::new(),
                }
            } else {
                g.succ[v].clone()
            }
        })
        .collect();
    let reach = graph::reachable(&restricted, g.init);
    if (0..g.len()).any(|v| reach[v] && restricted[v].is_empty()) {
        return false;
    }
    let mut bad: Vec<u32> = g.color.iter().copied().filter(|&c| Player::of_color(c) != p).collect();
    bad.sort_unstable();
    bad.dedup();
    for c in bad {
        let keep = |v: usize| reach[v] && g.color[v] <= c;
        let sub: Vec<Vec<usize>> = (0..g.len())
            .map(|v| if keep(v) { restricted[v].iter().copied().filter(|&t| keep(t)).collect() } else { Vec::new() })
            .collect();
        for comp in graph::sccs(&sub) {
            let cyclic = comp.len() > 1 || sub[comp[0]].contains(&comp[0]);
            if cyclic && comp.iter().any(|&v| g.color[v] == c && keep(v)) {
                return false;
            }
        }
    }
    true
}

/// A Moore machine: the output of a state is emitted when the state is
/// entered, so the first output answers the first input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transducer {
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub init: usize,
    /// `delta[s][i]` with `i` the bit pattern of the input over `inputs`.
    pub delta: Vec<Vec<usize>>,
    pub output: Vec<Letter>,
}

impl Transducer {
    pub fn len(&self) -> usize {
        self.delta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.delta.is_empty()
    }

    pub fn input_index(&self, l: &Letter) -> usize {
        self.inputs.iter().enumerate().filter(|(_, p)| l.contains(*p)).fold(0, |m, (i, _)| m | 1 << i)
    }

    pub fn input_letters(&self) -> Vec<Letter> {
        subsets(&self.inputs)
    }

    /// Outputs produced in response to a finite input sequence.
    pub fn respond(&self, inputs: &[Letter]) -> Vec<Letter> {
        let mut s = self.init;
        inputs
            .iter()
            .map(|i| {
                s = self.delta[s][self.input_index(i)];
                self.output[s].clone()
            })
            .collect()
    }

    /// The outcome of the play against an input lasso: each letter joins
    /// the input with the answer to it.
    pub fn outcome(&self, w: &LassoWord) -> LassoWord {
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        let mut letters = Vec::new();
        let (mut s, mut n) = (self.init, 0);
        loop {
            if let Some(&start) = seen.get(&(s, n)) {
                let cycle = letters.split_off(start);
                return LassoWord::new(letters, cycle);
            }
            seen.insert((s, n), letters.len());
            let i: Letter = w.letter_at(n).iter().filter(|p| self.inputs.contains(p)).cloned().collect();
            s = self.delta[s][self.input_index(&i)];
            letters.push(i.union(&self.output[s]).cloned().collect());
            n = w.next(n);
        }
    }

    /// The same machine with `props` removed from every output.
    pub fn strip(&self, props: &BTreeSet<String>) -> Transducer {
        Transducer {
            outputs: self.outputs.iter().filter(|p| !props.contains(*p)).cloned().collect(),
            output: self.output.iter().map(|o| o.difference(props).cloned().collect()).collect(),
            ..self.clone()
        }
    }

    /// The least machine implementing the same strategy: reachable states
    /// merged by partition refinement.
    pub fn minimize(&self) -> Transducer {
        let reach = graph::reachable(&self.delta, self.init);
        let states: Vec<usize> = (0..self.len()).filter(|&s| reach[s]).collect();
        let mut class: Vec<usize> = vec![0; self.len()];
        let mut count = 0;
        {
            let mut ids: HashMap<&Letter, usize> = HashMap::new();
            for &s in &states {
                let n = ids.len();
                class[s] = *ids.entry(&self.output[s]).or_insert(n);
            }
            count = count.max(ids.len());
        }
        loop {
            let mut ids: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
            let mut next = vec![0; self.len()];
            for &s in &states {
                let key = (class[s], self.delta[s].iter().map(|&t| class[t]).collect());
                let n = ids.len();
                next[s] = *ids.entry(key).or_insert(n);
            }
            let done = ids.len() == count;
            count = ids.len();
            class = next;
            if done {
                break;
            }
        }
        // renumber classes by first appearance in a breadth-first walk
        let mut order: Vec<Option<usize>> = vec![None; count];
        let mut reps = Vec::new();
        let mut queue = VecDeque::from([self.init]);
        order[class[self.init]] = Some(0);
        reps.push(self.init);
        while let Some(s) = queue.pop_front() {
            for &t in &self.delta[s] {
                if order[class[t]].is_none() {
                    order[class[t]] = Some(reps.len());
                    reps.push(t);
                    queue.push_back(t);
                }
            }
        }
        let id = |s: usize| order[class[s]].unwrap();
        Transducer {
            inputs: self.inputs.clone(),
            outputs: self.outputs.clone(),
            init: 0,
            delta: reps.iter().map(|&s| self.delta[s].iter().map(|&t| id(t)).collect()).collect(),
            output: reps.iter().map(|&s| self.output[s].clone()).collect(),
        }
    }

    /// Replayable text: header lines, then one line per transition.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "inputs {}\noutputs {}\ninit s{}\n",
            self.inputs.join(" "),
            self.outputs.join(" "),
            self.init
        );
        for (q, row) in self.delta.iter().enumerate() {
            for (i, l) in self.input_letters().iter().enumerate() {
                let t = row[i];
                s.push_str(&format!(
                    "s{q} on {} -> goto s{t} emit {}\n",
                    print_letter(l),
                    print_letter(&self.output[t])
                ));
            }
        }
        s
    }

    /// Parses the format written by [`Transducer::to_text`].
    pub fn from_text(text: &str) -> Result<Transducer, Error> {
        let bad = |line: usize, msg: &str| Error::Parse { pos: line, msg: msg.to_string() };
        let state = |tok: &str, line: usize| -> Result<usize, Error> {
            tok.strip_prefix('s').and_then(|n| n.parse().ok()).ok_or_else(|| bad(line, "expected a state s<k>"))
        };
        let letter = |tok: &str, line: usize| -> Result<Letter, Error> {
            let inner = tok
                .strip_prefix('{')
                .and_then(|t| t.strip_suffix('}'))
                .ok_or_else(|| bad(line, "expected a letter {..}"))?;
            Ok(inner.split(',').map(str::trim).filter(|p| !p.is_empty()).map(String::from).collect())
        };
        let (mut inputs, mut outputs, mut init) = (Vec::new(), Vec::new(), 0);
        let mut edges: Vec<(usize, Letter, usize, Letter)> = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("inputs") {
                inputs = rest.split_whitespace().map(String::from).collect();
            } else if let Some(rest) = line.strip_prefix("outputs") {
                outputs = rest.split_whitespace().map(String::from).collect();
            } else if let Some(rest) = line.strip_prefix("init") {
                init = state(rest.trim(), n)?;
            } else {
                // s0 on {a} -> goto s1 emit {b}
                let (src, rest) = line.split_once(" on ").ok_or_else(|| bad(n, "expected `on`"))?;
                let (inp, rest) = rest.split_once("-> goto").ok_or_else(|| bad(n, "expected `-> goto`"))?;
                let (dst, out) = rest.split_once("emit").ok_or_else(|| bad(n, "expected `emit`"))?;
                edges.push((state(src.trim(), n)?, letter(inp.trim(), n)?, state(dst.trim(), n)?, letter(out.trim(), n)?));
            }
        }
        inputs.sort();
        outputs.sort();
        let size = edges.iter().map(|e| e.0.max(e.2) + 1).max().unwrap_or(1).max(init + 1);
        let mut t = Transducer {
            inputs,
            outputs,
            init,
            delta: vec![vec![usize::MAX; 0]; size],
            output: vec![Letter::new(); size],
        };
        let width = 1usize << t.inputs.len();
        t.delta = vec![vec![usize::MAX; width]; size];
        for (n, (s, i, d, o)) in edges.into_iter().enumerate() {
            let k = t.input_index(&i);
            t.delta[s][k] = d;
            t.output[d] = o;
            let _ = n;
        }
        if t.delta.iter().flatten().any(|&d| d == usize::MAX) {
            return Err(bad(0, "transition function is not total"));
        }
        Ok(t)
    }
}

impl fmt::Display for Transducer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// The strategy of `O` read off a solved arena: a state is a vertex of `I`
/// together with the last output.
pub fn extract_transducer(
    g: &ParityGame,
    sol: &Solution,
    inputs: &BTreeSet<String>,
    outputs: &BTreeSet<String>,
) -> Result<Transducer, Error> {
    if sol.winner[g.init] != Player::O {
        return Err(Error::Invalid("player O does not win from the initial vertex".into()));
    }
    let ni = 1usize << inputs.len();
    let mut index: HashMap<(usize, Letter), usize> = HashMap::new();
    let mut keys = vec![(g.init, Letter::new())];
    index.insert(keys[0].clone(), 0);
    let mut delta: Vec<Vec<usize>> = vec![Vec::new()];
    let mut queue = VecDeque::from([0usize]);
    while let Some(s) = queue.pop_front() {
        let q = keys[s].0;
        let mut row = Vec::with_capacity(ni);
        for i in 0..ni {
            let v = g.succ[q][i];
            let k = sol.strategy[v].ok_or_else(|| Error::Invalid("strategy leaves the winning region".into()))?;
            let key = (g.succ[v][k], g.moves[v][k].clone());
            let id = *index.entry(key.clone()).or_insert_with(|| {
                keys.push(key);
                delta.push(Vec::new());
                queue.push_back(keys.len() - 1);
                keys.len() - 1
            });
            row.push(id);
        }
        delta[s] = row;
    }
    Ok(Transducer {
        inputs: sorted(inputs),
        outputs: sorted(outputs),
        init: 0,
        delta,
        output: keys.into_iter().map(|(_, o)| o).collect(),
    })
}

/// Outcome of a realizability decision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealVerdict {
    pub realizable: bool,
    pub valuation: Option<Valuation>,
    pub strategy: Option<Transducer>,
}

impl RealVerdict {
    fn unrealizable() -> RealVerdict {
        RealVerdict { realizable: false, valuation: None, strategy: None }
    }

    /// Line-oriented report: `RESULT`, `VALUATION`, then the strategy.
    pub fn report(&self) -> String {
        let mut s = format!("RESULT {}\n", if self.realizable { "sat" } else { "unsat" });
        if let Some(v) = &self.valuation {
            s.push_str(&format!("VALUATION {v}\n"));
        }
        if let Some(t) = &self.strategy {
            s.push_str(&t.to_text());
        }
        s
    }
}

/// Everything computed by one run of [`realize`].
#[derive(Clone, Debug)]
pub struct RealRun {
    pub verdict: RealVerdict,
    pub dpa: Dpa,
    pub game: ParityGame,
    /// The minimized strategy before the color is removed; its size `n`
    /// gives the reported bound `2n + 2`.
    pub colored: Option<Transducer>,
}

fn check_partition(phi: &Formula, inputs: &BTreeSet<String>, outputs: &BTreeSet<String>) -> Result<(), Error> {
    if let Some(p) = inputs.intersection(outputs).next() {
        return Err(Error::Invalid(format!("{p} is both an input and an output")));
    }
    if let Some(p) = phi.props().into_iter().find(|p| !inputs.contains(p) && !outputs.contains(p)) {
        return Err(Error::Invalid(format!("{p} is neither an input nor an output")));
    }
    Ok(())
}

fn solve_dpa(dpa: &Dpa, inputs: &BTreeSet<String>, outputs: &BTreeSet<String>) -> Result<(ParityGame, Option<Transducer>), Error> {
    let game = build_arena(dpa, inputs, outputs)?;
    let sol = solve_parity(&game);
    let t = if sol.winner[game.init] == Player::O {
        Some(extract_transducer(&game, &sol, inputs, outputs)?.minimize())
    } else {
        None
    };
    Ok((game, t))
}

/// Decides whether `O` can make every outcome satisfy `phi` for some
/// valuation.
pub fn realize(phi: &Formula, inputs: &BTreeSet<String>, outputs: &BTreeSet<String>) -> Result<RealVerdict, Error> {
    Ok(realize_run(phi, inputs, outputs)?.verdict)
}

/// [`realize`] with the intermediate automaton, game and colored strategy.
pub fn realize_run(phi: &Formula, inputs: &BTreeSet<String>, outputs: &BTreeSet<String>) -> Result<RealRun, Error> {
    check_decidable(phi)?;
    check_partition(phi, inputs, outputs)?;
    let diamond_form = phi.eliminate_boxes();
    let mut taken = inputs.clone();
    taken.extend(outputs.iter().cloned());
    let color = fresh_prop("p", &taken);
    let target = diamond_form.color_transform(&color)?;
    let mut colored_outputs = outputs.clone();
    colored_outputs.insert(color.clone());
    let alphabet = Alphabet::new(taken.iter().chain([&color]))?;
    let nba = mh_to_nba(&build_aba(&target, &alphabet, &color)?).trim();
    let dpa = determinize(&nba);
    let (game, colored) = solve_dpa(&dpa, inputs, &colored_outputs)?;
    let verdict = match &colored {
        None => RealVerdict::unrealizable(),
        Some(t) => {
            let bound = 2 * t.len() as u64 + 2;
            let (dvars, bvars) = phi.variables();
            let mut v = Valuation::new();
            for x in dvars {
                v.set(&x, bound);
            }
            for y in bvars {
                v.set(&y, 0);
            }
            let strategy = t.strip(&BTreeSet::from([color])).minimize();
            RealVerdict { realizable: true, valuation: Some(v), strategy: Some(strategy) }
        }
    };
    Ok(RealRun { verdict, dpa, game, colored })
}

/// Decides realizability at exactly `alpha`.
pub fn real_query(
    phi: &Formula,
    inputs: &BTreeSet<String>,
    outputs: &BTreeSet<String>,
    alpha: &Valuation,
) -> Result<RealVerdict, Error> {
    if let Some(x) = phi.all_variables().into_iter().find(|x| !alpha.contains(x)) {
        return Err(Error::UnassignedVariable(x));
    }
    check_partition(phi, inputs, outputs)?;
    let alphabet = Alphabet::new(inputs.iter().chain(outputs.iter()))?;
    let aba = build_parametric(phi, &alphabet)?;
    let nba = counter_breakpoint(&aba, &region_bounds(&aba, alpha)?)?.trim();
    let (_, t) = solve_dpa(&determinize(&nba), inputs, outputs)?;
    Ok(match t {
        None => RealVerdict::unrealizable(),
        Some(t) => RealVerdict { realizable: true, valuation: Some(alpha.clone()), strategy: Some(t) },
    })
}

/// The negation of `phi` with every input literal moved one step ahead, so
/// that the roles of the players can be swapped.
pub fn dualize(phi: &Formula, inputs: &BTreeSet<String>, _outputs: &BTreeSet<String>) -> Formula {
    shift_inputs(&phi.negate(), inputs)
}

fn shift_inputs(f: &Formula, inputs: &BTreeSet<String>) -> Formula {
    let next = |g: Formula| Formula::diamond(Regex::tt(), g);
    match f {
        Formula::Atom(p) if inputs.contains(p) => next(f.clone()),
        Formula::NegAtom(p) if inputs.contains(p) => next(f.clone()),
        Formula::Diamond(r, b) => Formula::Diamond(shift_regex(r, inputs), Box::new(shift_inputs(b, inputs))),
        Formula::Box(r, b) => Formula::Box(shift_regex(r, inputs), Box::new(shift_inputs(b, inputs))),
        Formula::DiamondLe(r, x, b) => {
            Formula::DiamondLe(shift_regex(r, inputs), x.clone(), Box::new(shift_inputs(b, inputs)))
        }
        Formula::BoxLe(r, y, b) => Formula::BoxLe(shift_regex(r, inputs), y.clone(), Box::new(shift_inputs(b, inputs))),
        Formula::DiamondCp(r, b) => Formula::DiamondCp(shift_regex(r, inputs), Box::new(shift_inputs(b, inputs))),
        Formula::BoxCp(r, b) => Formula::BoxCp(shift_regex(r, inputs), Box::new(shift_inputs(b, inputs))),
        _ => f.map_children(&mut |c| shift_inputs(c, inputs)),
    }
}

/// A letter step reading inputs becomes a test of the shifted condition
/// followed by an arbitrary letter.
fn shift_regex(r: &Regex, inputs: &BTreeSet<String>) -> Regex {
    match r {
        Regex::Prop(p) => {
            let mut props = BTreeSet::new();
            p.collect_props(&mut props);
            if props.is_disjoint(inputs) {
                r.clone()
            } else {
                Regex::concat(Regex::test(shift_inputs(&p.to_formula(), inputs)), Regex::prop(PropFormula::True))
            }
        }
        Regex::Test(t) => Regex::test(shift_inputs(t, inputs)),
        Regex::Union(a, b) => Regex::union(shift_regex(a, inputs), shift_regex(b, inputs)),
        Regex::Concat(a, b) => Regex::concat(shift_regex(a, inputs), shift_regex(b, inputs)),
        Regex::Star(a) => Regex::star(shift_regex(a, inputs)),
    }
}

/// An optimal value with a strategy realizing it. There is no strategy for
/// an infinite optimum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealOptimum {
    pub value: Optimum,
    pub valuation: Option<Valuation>,
    pub strategy: Option<Transducer>,
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

/// Upper end of the search range for a Min objective, `2n + 2` for the
/// strategy size `n` found by [`realize`], or `None` if unrealizable.
pub fn min_search_bound(phi: &Formula, inputs: &BTreeSet<String>, outputs: &BTreeSet<String>) -> Result<Option<u64>, Error> {
    let run = realize_run(phi, inputs, outputs)?;
    Ok(run.colored.map(|t| 2 * t.len() as u64 + 2))
}

fn realized_at(
    phi: &Formula,
    inputs: &BTreeSet<String>,
    outputs: &BTreeSet<String>,
    alpha: Valuation,
) -> Result<RealOptimum, Error> {
    let v = real_query(phi, inputs, outputs, &alpha)?;
    Ok(RealOptimum {
        value: Optimum::Finite(0),
        valuation: v.valuation,
        strategy: v.strategy,
    })
}

/// Least value of the single variable `z` realizing `phi` over the given
/// players, searched up to the bound from one [`realize`] call.
fn min_single(phi: &Formula, z: &str, inputs: &BTreeSet<String>, outputs: &BTreeSet<String>) -> Result<Option<u64>, Error> {
    let Some(hi) = min_search_bound(phi, inputs, outputs)? else { return Ok(None) };
    least_true(0, hi, &mut |k| Ok(real_query(phi, inputs, outputs, &Valuation::new().with(z, k))?.realizable))
}

/// The optimal parameter value for `obj` with a witnessing strategy, or
/// `None` if no valuation is realizable.
pub fn real_optimize(
    phi: &Formula,
    inputs: &BTreeSet<String>,
    outputs: &BTreeSet<String>,
    obj: Objective,
) -> Result<Option<RealOptimum>, Error> {
    let vars = check_objective(phi, obj)?;
    check_partition(phi, inputs, outputs)?;
    let z = fresh_prop("z", &vars);
    match obj {
        Objective::MinMax => {
            let psi = phi.rename_all_vars_to(&z)?;
            let Some(k) = min_single(&psi, &z, inputs, outputs)? else { return Ok(None) };
            let alpha = Valuation::uniform(vars.iter(), k);
            Ok(Some(RealOptimum { value: Optimum::Finite(k), ..realized_at(phi, inputs, outputs, alpha)? }))
        }
        Objective::MinMin => {
            let Some(hi) = min_search_bound(phi, inputs, outputs)? else { return Ok(None) };
            let mut best: Option<(u64, Valuation)> = None;
            for x in &vars {
                let top = best.as_ref().map_or(hi, |(b, _)| b.saturating_sub(1));
                let pinned = Valuation::uniform(vars.iter(), hi);
                let k = least_true(0, top, &mut |k| {
                    Ok(real_query(phi, inputs, outputs, &pinned.clone().with(x, k))?.realizable)
                })?;
                if let Some(k) = k {
                    if best.as_ref().is_none_or(|(b, _)| k < *b) {
                        best = Some((k, pinned.with(x, k)));
                    }
                }
            }
            match best {
                None => Ok(None),
                Some((k, alpha)) => {
                    Ok(Some(RealOptimum { value: Optimum::Finite(k), ..realized_at(phi, inputs, outputs, alpha)? }))
                }
            }
        }
        Objective::MaxMin => {
            let psi = phi.rename_all_vars_to(&z)?;
            let value = max_single(&psi, &z, inputs, outputs)?;
            finish_max(phi, inputs, outputs, value, |k| Valuation::uniform(vars.iter(), k))
        }
        Objective::MaxMax => {
            let mut best: Option<(Optimum, String)> = None;
            for y in &vars {
                let psi = phi.fix_all_but_one_box(y)?;
                if let Some(v) = max_single(&psi, y, inputs, outputs)? {
                    if best.as_ref().is_none_or(|(b, _)| v > *b) {
                        best = Some((v, y.clone()));
                    }
                }
            }
            match best {
                None => Ok(None),
                Some((v, y)) => finish_max(phi, inputs, outputs, Some(v), |k| {
                    Valuation::uniform(vars.iter(), 0).with(&y, k)
                }),
            }
        }
    }
}

fn finish_max(
    phi: &Formula,
    inputs: &BTreeSet<String>,
    outputs: &BTreeSet<String>,
    value: Option<Optimum>,
    alpha: impl Fn(u64) -> Valuation,
) -> Result<Option<RealOptimum>, Error> {
    match value {
        None => Ok(None),
        Some(Optimum::Infinite) => Ok(Some(RealOptimum { value: Optimum::Infinite, valuation: None, strategy: None })),
        Some(Optimum::Finite(k)) => {
            Ok(Some(RealOptimum { value: Optimum::Finite(k), ..realized_at(phi, inputs, outputs, alpha(k))? }))
        }
    }
}

/// Largest value of the single box variable `y`: one less than the least
/// value at which the dual game is won by the other player.
fn max_single(psi: &Formula, y: &str, inputs: &BTreeSet<String>, outputs: &BTreeSet<String>) -> Result<Option<Optimum>, Error> {
    let dual = dualize(psi, inputs, outputs);
    match min_single(&dual, y, outputs, inputs)? {
        None => Ok(Some(Optimum::Infinite)),
        Some(0) => Ok(None),
        Some(m) => Ok(Some(Optimum::Finite(m - 1))),
    }
}
