//! Ultimately periodic words and exact membership.

use std::fmt;

use rand::Rng;

use crate::automaton::ParityAutomaton;
use crate::error::{Error, Result};
use crate::graph::{exists_cycle_min_parity, reachable};

/// The word `prefix · cycle^ω` over letter indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LassoWord {
    pub prefix: Vec<usize>,
    pub cycle: Vec<usize>,
}

impl LassoWord {
    pub fn new(prefix: Vec<usize>, cycle: Vec<usize>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::Invalid("lasso cycle must be nonempty".into()));
        }
        Ok(LassoWord { prefix, cycle })
    }

    /// Parses `u|v` where both sides are whitespace- or comma-separated letters.
    pub fn parse(s: &str, alphabet: &[String]) -> Result<Self> {
        let (u, v) = s
            .split_once('|')
            .ok_or_else(|| Error::Invalid("lasso must be written `u|v`".into()))?;
        let word = |part: &str| -> Result<Vec<usize>> {
            part.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| {
                    alphabet
                        .iter()
                        .position(|l| l == t)
                        .ok_or_else(|| Error::Alphabet(format!("unknown letter `{t}`")))
                })
                .collect()
        };
        LassoWord::new(word(u)?, word(v)?)
    }

    /// Letter at position `i` of the infinite word.
    pub fn at(&self, i: usize) -> usize {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    pub fn random(rng: &mut impl Rng, letters: usize, max_u: usize, max_v: usize) -> Self {
        let lu = rng.gen_range(0..=max_u);
        let lv = rng.gen_range(1..=max_v.max(1));
        LassoWord {
            prefix: (0..lu).map(|_| rng.gen_range(0..letters)).collect(),
            cycle: (0..lv).map(|_| rng.gen_range(0..letters)).collect(),
        }
    }

    /// Every lasso with `|u| <= max_u` and `1 <= |v| <= max_v`.
    pub fn enumerate(letters: usize, max_u: usize, max_v: usize) -> Vec<LassoWord> {
        let words = |max: usize, min: usize| {
            let mut all = Vec::new();
            let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
            for len in 0..=max {
                if len >= min {
                    all.extend(layer.iter().cloned());
                }
                layer = layer
                    .iter()
                    .flat_map(|w| {
                        (0..letters).map(move |l| {
                            let mut w2 = w.clone();
                            w2.push(l);
                            w2
                        })
                    })
                    .collect();
            }
            all
        };
        let us = words(max_u, 0);
        let vs = words(max_v, 1);
        let mut out = Vec::with_capacity(us.len() * vs.len());
        for u in &us {
            for v in &vs {
                out.push(LassoWord {
                    prefix: u.clone(),
                    cycle: v.clone(),
                });
            }
        }
        out
    }

    pub fn display<'a>(&'a self, alphabet: &'a [String]) -> impl fmt::Display + 'a {
        DisplayLasso { w: self, alphabet }
    }
}

struct DisplayLasso<'a> {
    w: &'a LassoWord,
    alphabet: &'a [String],
}

impl fmt::Display for DisplayLasso<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| {
            v.iter()
                .map(|&l| self.alphabet[l].as_str())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "{}|{}", join(&self.w.prefix), join(&self.w.cycle))
    }
}

/// Exact membership of `u·v^ω` via the product with the lasso graph.
pub fn lasso_member(a: &ParityAutomaton, w: &LassoWord) -> Result<bool> {
    if w.cycle.is_empty() {
        return Err(Error::Invalid("lasso cycle must be nonempty".into()));
    }
    if let Some(&l) = w.prefix.iter().chain(&w.cycle).find(|&&l| l >= a.num_letters()) {
        return Err(Error::Alphabet(format!("letter index {l} not in alphabet")));
    }
    let len = w.prefix.len() + w.cycle.len();
    let next = |i: usize| if i + 1 < len { i + 1 } else { w.prefix.len() };
    let n = a.num_states();
    let table = a.out_table();
    let node = |q: usize, i: usize| q * len + i;
    let mut edges: Vec<(usize, usize, u32)> = Vec::new();
    for q in 0..n {
        for i in 0..len {
            for &t in &table[q][w.at(i)] {
                let tr = a.transitions[t];
                edges.push((node(q, i), node(tr.dst, next(i)), tr.prio));
            }
        }
    }
    let total = n * len;
    let mut out = vec![Vec::new(); total];
    for &(s, t, _) in &edges {
        out[s].push(t);
    }
    let seen = reachable(total, &[node(a.initial, 0)], |v| out[v].clone());
    let live: Vec<(usize, usize, u32)> = edges.into_iter().filter(|&(s, _, _)| seen.contains(s)).collect();
    Ok(exists_cycle_min_parity(total, &live, 0))
}
