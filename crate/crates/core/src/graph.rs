//! Explicit directed graphs given by successor lists, and fair-lasso search.

use std::collections::VecDeque;

use petgraph::graph::{DiGraph, NodeIndex};

/// A fairness requirement on a cycle.
pub enum Require<'a> {
    /// Some vertex on the cycle satisfies the predicate.
    Vertex(&'a dyn Fn(usize) -> bool),
    /// Some edge on the cycle satisfies the predicate.
    Edge(&'a dyn Fn(usize, usize) -> bool),
}

/// A path `stem` from the start vertex followed by a nonempty `cycle`
/// returning to the last stem vertex. `stem` is nonempty; `cycle` lists the
/// vertices after the stem's last vertex, ending with that vertex again.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lasso {
    pub stem: Vec<usize>,
    pub cycle: Vec<usize>,
}

/// Strongly connected components, each as a sorted vertex list.
pub fn sccs(succ: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut g: DiGraph<(), ()> = DiGraph::with_capacity(succ.len(), 0);
    for _ in 0..succ.len() {
        g.add_node(());
    }
    for (v, out) in succ.iter().enumerate() {
        for &t in out {
            g.add_edge(NodeIndex::new(v), NodeIndex::new(t), ());
        }
    }
    petgraph::algo::tarjan_scc(&g)
        .into_iter()
        .map(|c| {
            let mut c: Vec<usize> = c.into_iter().map(|n| n.index()).collect();
            c.sort_unstable();
            c
        })
        .collect()
}

/// Vertices reachable from `from`.
pub fn reachable(succ: &[Vec<usize>], from: usize) -> Vec<bool> {
    let mut seen = vec![false; succ.len()];
    let mut stack = vec![from];
    seen[from] = true;
    while let Some(v) = stack.pop() {
        for &t in &succ[v] {
            if !seen[t] {
                seen[t] = true;
                stack.push(t);
            }
        }
    }
    seen
}

/// Shortest path from `from` to a vertex satisfying `goal` using only
/// `allowed` vertices, with at least one edge when `nonempty` is set.
pub fn bfs_path(
    succ: &[Vec<usize>],
    from: usize,
    goal: &dyn Fn(usize) -> bool,
    allowed: &dyn Fn(usize) -> bool,
    nonempty: bool,
) -> Option<Vec<usize>> {
    if !nonempty && goal(from) {
        return Some(vec![from]);
    }
    let mut parent: Vec<Option<usize>> = vec![None; succ.len()];
    let mut seen = vec![false; succ.len()];
    let mut queue = VecDeque::new();
    for &t in &succ[from] {
        if allowed(t) && !seen[t] {
            seen[t] = true;
            parent[t] = Some(from);
            queue.push_back(t);
        }
    }
    while let Some(v) = queue.pop_front() {
        if goal(v) {
            let mut path = vec![v];
            let mut cur = v;
            while let Some(p) = parent[cur] {
                path.push(p);
                if p == from && path.len() > 1 {
                    break;
                }
                cur = p;
            }
            path.reverse();
            return Some(path);
        }
        for &t in &succ[v] {
            if allowed(t) && !seen[t] {
                seen[t] = true;
                parent[t] = Some(v);
                queue.push_back(t);
            }
        }
    }
    None
}

/// A lasso from `init` whose cycle meets every requirement, if one exists.
pub fn fair_lasso(succ: &[Vec<usize>], init: usize, reqs: &[Require<'_>]) -> Option<Lasso> {
    let reach = reachable(succ, init);
    let comps = sccs(succ);
    let mut comp_of = vec![usize::MAX; succ.len()];
    for (i, c) in comps.iter().enumerate() {
        for &v in c {
            comp_of[v] = i;
        }
    }
    for (ci, comp) in comps.iter().enumerate() {
        if !reach[comp[0]] {
            continue;
        }
        let inside = |v: usize| comp_of[v] == ci;
        let nontrivial = comp.len() > 1 || succ[comp[0]].contains(&comp[0]);
        if !nontrivial {
            continue;
        }
        // one witness edge (u, v) per requirement, both ends inside
        let mut witnesses = Vec::new();
        let mut ok = true;
        for r in reqs {
            let w = match r {
                Require::Vertex(p) => comp.iter().find(|&&v| p(v)).map(|&v| (v, None)),
                Require::Edge(p) => comp.iter().find_map(|&u| {
                    succ[u].iter().find(|&&t| inside(t) && p(u, t)).map(|&t| (u, Some(t)))
                }),
            };
            match w {
                Some(w) => witnesses.push(w),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        let anchor = witnesses.first().map_or(comp[0], |w| w.0);
        let stem = bfs_path(succ, init, &|v| v == anchor, &|_| true, false)?;
        let mut cycle = Vec::new();
        let mut cur = anchor;
        for &(u, t) in &witnesses {
            if cur != u {
                let p = bfs_path(succ, cur, &|v| v == u, &inside, true)?;
                cycle.extend_from_slice(&p[1..]);
                cur = u;
            }
            if let Some(t) = t {
                cycle.push(t);
                cur = t;
            }
        }
        if cur != anchor || cycle.is_empty() {
            let p = bfs_path(succ, cur, &|v| v == anchor, &inside, true)?;
            cycle.extend_from_slice(&p[1..]);
        }
        return Some(Lasso { stem, cycle });
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(succ: &[Vec<usize>], l: &Lasso) {
        let mut all = l.stem.clone();
        all.extend(&l.cycle);
        for w in all.windows(2) {
            assert!(succ[w[0]].contains(&w[1]), "{w:?}");
        }
        assert_eq!(l.cycle.last(), l.stem.last());
    }

    #[test]
    fn finds_fair_cycles() {
        // 0 -> 1 <-> 2, 2 -> 3 -> 3
        let succ = vec![vec![1], vec![2], vec![1, 3], vec![3]];
        let is2 = |v: usize| v == 2;
        let l = fair_lasso(&succ, 0, &[Require::Vertex(&is2)]).unwrap();
        check(&succ, &l);
        assert!(l.cycle.contains(&2));
        let back = |u: usize, v: usize| u == 2 && v == 1;
        let l = fair_lasso(&succ, 0, &[Require::Edge(&back), Require::Vertex(&is2)]).unwrap();
        check(&succ, &l);
        let self3 = |u: usize, v: usize| u == 3 && v == 3;
        let l = fair_lasso(&succ, 0, &[Require::Edge(&self3)]).unwrap();
        assert_eq!(l.cycle, vec![3]);
        let is0 = |v: usize| v == 0;
        assert!(fair_lasso(&succ, 0, &[Require::Vertex(&is0)]).is_none());
        assert_eq!(bfs_path(&succ, 1, &|v| v == 1, &|_| true, true), Some(vec![1, 2, 1]));
    }
}
