#![allow(dead_code)]

use std::collections::VecDeque;
use std::path::PathBuf;

use hdtk::automaton::{parse_tpa, RandomParams};
use hdtk::{LassoWord, ParityAutomaton};
use proptest::prelude::*;

pub fn fixture(name: &str) -> ParityAutomaton {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    parse_tpa(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn reach(n: usize, from: usize, edges: &[(usize, usize, u32)], min_prio: u32) -> Vec<bool> {
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([from]);
    seen[from] = true;
    while let Some(v) = queue.pop_front() {
        for &(s, t, p) in edges {
            if s == v && p >= min_prio && !seen[t] {
                seen[t] = true;
                queue.push_back(t);
            }
        }
    }
    seen
}

/// Membership of `u v^ω` by brute force: some reachable even edge `s -p-> t`
/// closes a cycle back to `s` through edges of priority at least `p`.
pub fn member_oracle(a: &ParityAutomaton, w: &LassoWord) -> bool {
    let len = w.prefix.len() + w.cycle.len();
    let node = |q: usize, i: usize| q * len + i;
    let next = |i: usize| if i + 1 < len { i + 1 } else { w.prefix.len() };
    let mut edges = Vec::new();
    for t in &a.transitions {
        for i in 0..len {
            if w.at(i) == t.letter {
                edges.push((node(t.src, i), node(t.dst, next(i)), t.prio));
            }
        }
    }
    let n = a.num_states() * len;
    let from_init = reach(n, node(a.initial, 0), &edges, 0);
    edges
        .iter()
        .any(|&(s, t, p)| p % 2 == 0 && from_init[s] && reach(n, t, &edges, p)[s])
}

/// Membership for a deterministic complete automaton by running it until the
/// (state, position) pair repeats.
pub fn det_member(a: &ParityAutomaton, w: &LassoWord) -> bool {
    let len = w.prefix.len() + w.cycle.len();
    let mut seen = vec![None; a.num_states() * len];
    let mut prios = Vec::new();
    let (mut q, mut i) = (a.initial, 0);
    loop {
        if let Some(start) = seen[q * len + i] {
            return prios[start..].iter().min().unwrap() % 2 == 0;
        }
        seen[q * len + i] = Some(prios.len());
        let t = a
            .transitions
            .iter()
            .find(|t| t.src == q && t.letter == w.at(i))
            .unwrap();
        prios.push(t.prio);
        q = t.dst;
        i = if i + 1 < len { i + 1 } else { w.prefix.len() };
    }
}

pub fn params(states: usize, letters: usize, lo: u32, hi: u32) -> RandomParams {
    RandomParams {
        states,
        letters,
        lo,
        hi,
        ..RandomParams::default()
    }
}

pub fn lasso() -> impl Strategy<Value = LassoWord> {
    (
        prop::collection::vec(0..2usize, 0..4),
        prop::collection::vec(0..2usize, 1..4),
    )
        .prop_map(|(u, v)| LassoWord::new(u, v).unwrap())
}
