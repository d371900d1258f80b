//! Small graph utilities shared by automata and games.

use fixedbitset::FixedBitSet;
use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

/// Strongly connected component id of every node.
pub fn scc_ids(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Vec<usize> {
    let mut g: DiGraph<(), ()> = DiGraph::with_capacity(n, 0);
    for _ in 0..n {
        g.add_node(());
    }
    for (s, t) in edges {
        g.add_edge(NodeIndex::new(s), NodeIndex::new(t), ());
    }
    let mut id = vec![0; n];
    for (k, comp) in tarjan_scc(&g).into_iter().enumerate() {
        for v in comp {
            id[v.index()] = k;
        }
    }
    id
}

/// Nodes reachable from `starts` along `succ`.
pub fn reachable(n: usize, starts: &[usize], succ: impl Fn(usize) -> Vec<usize>) -> FixedBitSet {
    let mut seen = FixedBitSet::with_capacity(n);
    let mut stack = Vec::new();
    for &s in starts {
        if !seen.put(s) {
            stack.push(s);
        }
    }
    while let Some(v) = stack.pop() {
        for w in succ(v) {
            if !seen.put(w) {
                stack.push(w);
            }
        }
    }
    seen
}

/// Looks for a cycle inside the subgraph of kept edges that uses an edge
/// satisfying `hit1` and an edge satisfying `hit2`. Returns the two edges.
pub fn cycle_hitting(
    n: usize,
    edges: &[(usize, usize)],
    keep: impl Fn(usize) -> bool,
    hit1: impl Fn(usize) -> bool,
    hit2: impl Fn(usize) -> bool,
) -> Option<(usize, usize)> {
    let kept: Vec<usize> = (0..edges.len()).filter(|&e| keep(e)).collect();
    let id = scc_ids(n, kept.iter().map(|&e| edges[e]));
    let mut first1: std::collections::HashMap<usize, usize> = Default::default();
    let mut first2: std::collections::HashMap<usize, usize> = Default::default();
    for &e in &kept {
        let (s, t) = edges[e];
        if id[s] != id[t] {
            continue;
        }
        if hit1(e) {
            first1.entry(id[s]).or_insert(e);
        }
        if hit2(e) {
            first2.entry(id[s]).or_insert(e);
        }
    }
    let mut best: Option<(usize, usize)> = None;
    for (c, &e1) in &first1 {
        if let Some(&e2) = first2.get(c) {
            if best.is_none_or(|b| (e1, e2) < b) {
                best = Some((e1, e2));
            }
        }
    }
    best
}

/// True iff some cycle has a minimal priority of the given parity.
pub fn exists_cycle_min_parity(n: usize, edges: &[(usize, usize, u32)], parity: u32) -> bool {
    let pairs: Vec<(usize, usize)> = edges.iter().map(|&(s, t, _)| (s, t)).collect();
    let mut prios: Vec<u32> = edges.iter().map(|e| e.2).filter(|c| c % 2 == parity).collect();
    prios.sort_unstable();
    prios.dedup();
    prios
        .into_iter()
        .any(|c| cycle_hitting(n, &pairs, |e| edges[e].2 >= c, |e| edges[e].2 == c, |_| true).is_some())
}

/// Shortest path (as edge indices) from any of `from` to `to`, using kept edges.
pub fn shortest_path(
    n: usize,
    edges: &[(usize, usize)],
    keep: impl Fn(usize) -> bool,
    from: &[usize],
    to: usize,
) -> Option<Vec<usize>> {
    let mut out = vec![Vec::new(); n];
    for (e, &(s, _)) in edges.iter().enumerate() {
        if keep(e) {
            out[s].push(e);
        }
    }
    let mut via: Vec<Option<usize>> = vec![None; n];
    let mut seen = FixedBitSet::with_capacity(n);
    let mut queue = std::collections::VecDeque::new();
    for &s in from {
        if !seen.put(s) {
            queue.push_back(s);
        }
    }
    while let Some(v) = queue.pop_front() {
        if v == to {
            let mut path = Vec::new();
            let mut cur = v;
            while let Some(e) = via[cur] {
                path.push(e);
                cur = edges[e].0;
                if from.contains(&cur) && via[cur].is_none() {
                    break;
                }
            }
            path.reverse();
            return Some(path);
        }
        for &e in &out[v] {
            let w = edges[e].1;
            if !seen.put(w) {
                via[w] = Some(e);
                queue.push_back(w);
            }
        }
    }
    None
}
