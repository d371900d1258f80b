//! Transition-based parity automata, the HDTK-TPA text format and the
//! structural transforms built on top of them.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use petgraph::unionfind::UnionFind;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{pre, Error, Result};
use crate::graph::scc_ids;

pub const ACC_SINK: &str = "__acc_sink";
pub const REJ_SINK: &str = "__rej_sink";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transition {
    pub src: usize,
    pub letter: usize,
    pub prio: u32,
    pub dst: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityAutomaton {
    pub alphabet: Vec<String>,
    pub states: Vec<String>,
    pub initial: usize,
    pub transitions: Vec<Transition>,
    pub lo: u32,
    pub hi: u32,
}

impl ParityAutomaton {
    /// Builds an automaton, checking endpoint and priority bounds.
    pub fn new(
        alphabet: Vec<String>,
        states: Vec<String>,
        initial: usize,
        transitions: Vec<Transition>,
        (lo, hi): (u32, u32),
    ) -> Result<Self> {
        let a = ParityAutomaton {
            alphabet,
            states,
            initial,
            transitions,
            lo,
            hi,
        };
        a.check()?;
        Ok(a)
    }

    /// Builds an automaton whose index is derived from its priorities.
    pub fn with_derived_index(
        alphabet: Vec<String>,
        states: Vec<String>,
        initial: usize,
        transitions: Vec<Transition>,
    ) -> Result<Self> {
        let (lo, hi) = derived_index(&transitions);
        Self::new(alphabet, states, initial, transitions, (lo, hi))
    }

    fn check(&self) -> Result<()> {
        if self.initial >= self.states.len() {
            return Err(Error::Invalid("initial state out of range".into()));
        }
        if self.lo > self.hi {
            return Err(Error::Invalid(format!("empty index [{},{}]", self.lo, self.hi)));
        }
        for t in &self.transitions {
            if t.src >= self.states.len() || t.dst >= self.states.len() {
                return Err(Error::Invalid("transition endpoint out of range".into()));
            }
            if t.letter >= self.alphabet.len() {
                return Err(Error::Invalid("transition letter out of range".into()));
            }
            if t.prio < self.lo || t.prio > self.hi {
                return Err(Error::Invalid(format!(
                    "priority {} outside index [{},{}]",
                    t.prio, self.lo, self.hi
                )));
            }
        }
        Ok(())
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_letters(&self) -> usize {
        self.alphabet.len()
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn letter_index(&self, name: &str) -> Option<usize> {
        self.alphabet.iter().position(|s| s == name)
    }

    /// Transition indices grouped by `[state][letter]`, in stored order.
    pub fn out_table(&self) -> Vec<Vec<Vec<usize>>> {
        let mut t = vec![vec![Vec::new(); self.alphabet.len()]; self.states.len()];
        for (i, tr) in self.transitions.iter().enumerate() {
            t[tr.src][tr.letter].push(i);
        }
        t
    }

    pub fn is_complete(&self) -> bool {
        self.out_table().iter().all(|row| row.iter().all(|v| !v.is_empty()))
    }

    pub fn is_deterministic(&self) -> bool {
        self.out_table().iter().all(|row| row.iter().all(|v| v.len() <= 1))
    }

    /// States reachable from the initial state.
    pub fn reachable_states(&self) -> Vec<bool> {
        let mut seen = vec![false; self.states.len()];
        let mut out = vec![Vec::new(); self.states.len()];
        for t in &self.transitions {
            out[t.src].push(t.dst);
        }
        let mut stack = vec![self.initial];
        seen[self.initial] = true;
        while let Some(q) = stack.pop() {
            for &r in &out[q] {
                if !seen[r] {
                    seen[r] = true;
                    stack.push(r);
                }
            }
        }
        seen
    }

    /// States with a nonempty language: those reaching a cycle whose least
    /// priority is even.
    pub fn nonempty_states(&self) -> Vec<bool> {
        let n = self.num_states();
        let mut good = vec![false; n];
        let mut evens: Vec<u32> = self.transitions.iter().map(|t| t.prio).filter(|p| p % 2 == 0).collect();
        evens.sort_unstable();
        evens.dedup();
        for p in evens {
            let kept: Vec<&Transition> = self.transitions.iter().filter(|t| t.prio >= p).collect();
            let id = scc_ids(n, kept.iter().map(|t| (t.src, t.dst)));
            for t in kept {
                if t.prio == p && id[t.src] == id[t.dst] {
                    good[t.src] = true;
                }
            }
        }
        let mut preds = vec![Vec::new(); n];
        for t in &self.transitions {
            preds[t.dst].push(t.src);
        }
        let mut stack: Vec<usize> = (0..n).filter(|&q| good[q]).collect();
        while let Some(q) = stack.pop() {
            for &r in &preds[q] {
                if !good[r] {
                    good[r] = true;
                    stack.push(r);
                }
            }
        }
        good
    }

    /// Drops unreachable states, keeping the relative order of the rest.
    pub fn trim(&self) -> ParityAutomaton {
        let keep = self.reachable_states();
        self.restrict_states(&keep)
    }

    /// Keeps the given states (the initial state must be kept).
    pub fn restrict_states(&self, keep: &[bool]) -> ParityAutomaton {
        let mut map = vec![usize::MAX; self.states.len()];
        let mut states = Vec::new();
        for (q, name) in self.states.iter().enumerate() {
            if keep[q] {
                map[q] = states.len();
                states.push(name.clone());
            }
        }
        let transitions = self
            .transitions
            .iter()
            .filter(|t| keep[t.src] && keep[t.dst])
            .map(|t| Transition {
                src: map[t.src],
                dst: map[t.dst],
                ..*t
            })
            .collect();
        ParityAutomaton {
            alphabet: self.alphabet.clone(),
            states,
            initial: map[self.initial],
            transitions,
            lo: self.lo,
            hi: self.hi,
        }
    }

    /// Same automaton with a different set of transitions.
    pub fn with_transitions(&self, transitions: Vec<Transition>) -> ParityAutomaton {
        ParityAutomaton {
            transitions,
            ..self.clone()
        }
    }

    /// Same automaton started from another state.
    pub fn with_initial(&self, q: usize) -> ParityAutomaton {
        ParityAutomaton {
            initial: q,
            ..self.clone()
        }
    }

    /// Shifts every priority up by `k` (k even keeps the language).
    pub fn shifted(&self, k: u32) -> ParityAutomaton {
        let transitions = self
            .transitions
            .iter()
            .map(|t| Transition { prio: t.prio + k, ..*t })
            .collect();
        ParityAutomaton {
            transitions,
            lo: self.lo + k,
            hi: self.hi + k,
            ..self.clone()
        }
    }

    /// Recomputes `[lo,hi]` from the priorities present.
    pub fn tighten_index(&self) -> ParityAutomaton {
        let (lo, hi) = derived_index(&self.transitions);
        ParityAutomaton { lo, hi, ..self.clone() }
    }

    fn fresh_name(&self, base: &str) -> String {
        let mut name = base.to_string();
        let mut k = 1;
        while self.states.contains(&name) {
            name = format!("{base}{k}");
            k += 1;
        }
        name
    }
}

/// `[lo,hi]` spanned by the given transitions (priorities assumed normalised).
pub fn derived_index(transitions: &[Transition]) -> (u32, u32) {
    let lo = transitions.iter().map(|t| t.prio).min().unwrap_or(0);
    let hi = transitions.iter().map(|t| t.prio).max().unwrap_or(lo);
    (lo, hi)
}

fn is_letter(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses the HDTK-TPA text format.
pub fn parse_tpa(text: &str) -> Result<ParityAutomaton> {
    let err = |line: usize, msg: String| Error::Parse { line, msg };
    let mut header_seen = false;
    let mut alphabet: Option<Vec<String>> = None;
    let mut states: Option<Vec<String>> = None;
    let mut initial: Option<(usize, String)> = None;
    let mut index: Option<(u32, u32)> = None;
    let mut raw: Vec<(usize, String, String, u32, String)> = Vec::new();

    for (k, line) in text.lines().enumerate() {
        let ln = k + 1;
        let content = line.split('#').next().unwrap_or("");
        let toks: Vec<&str> = content.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        if !header_seen {
            if toks != ["HDTK-TPA", "1"] {
                return Err(err(ln, "expected header `HDTK-TPA 1`".into()));
            }
            header_seen = true;
            continue;
        }
        match toks[0] {
            "HDTK-TPA" => return Err(err(ln, "duplicate header".into())),
            "alphabet:" => {
                if alphabet.is_some() {
                    return Err(err(ln, "duplicate alphabet line".into()));
                }
                let letters: Vec<String> = toks[1..].iter().map(|s| s.to_string()).collect();
                if letters.is_empty() {
                    return Err(err(ln, "empty alphabet".into()));
                }
                for l in &letters {
                    if !is_letter(l) {
                        return Err(err(ln, format!("invalid letter `{l}`")));
                    }
                }
                if has_duplicates(&letters) {
                    return Err(err(ln, "duplicate letter".into()));
                }
                alphabet = Some(letters);
            }
            "states:" => {
                if states.is_some() {
                    return Err(err(ln, "duplicate states line".into()));
                }
                let ids: Vec<String> = toks[1..].iter().map(|s| s.to_string()).collect();
                if ids.is_empty() {
                    return Err(err(ln, "no states".into()));
                }
                if has_duplicates(&ids) {
                    return Err(err(ln, "duplicate state".into()));
                }
                states = Some(ids);
            }
            "initial:" => {
                if initial.is_some() {
                    return Err(err(ln, "duplicate initial line".into()));
                }
                if toks.len() != 2 {
                    return Err(err(ln, "expected one initial state".into()));
                }
                initial = Some((ln, toks[1].to_string()));
            }
            "index:" => {
                if index.is_some() {
                    return Err(err(ln, "duplicate index line".into()));
                }
                if toks.len() != 3 {
                    return Err(err(ln, "expected `index: <lo> <hi>`".into()));
                }
                let lo = parse_prio(toks[1]).ok_or_else(|| err(ln, "bad priority".into()))?;
                let hi = parse_prio(toks[2]).ok_or_else(|| err(ln, "bad priority".into()))?;
                if lo > hi {
                    return Err(err(ln, "empty index".into()));
                }
                index = Some((lo, hi));
            }
            "trans:" => {
                if toks.len() != 5 {
                    return Err(err(ln, "expected `trans: <src> <letter> <priority> <dst>`".into()));
                }
                let prio = parse_prio(toks[3])
                    .ok_or_else(|| err(ln, format!("priority `{}` is not a nonnegative integer", toks[3])))?;
                raw.push((ln, toks[1].into(), toks[2].into(), prio, toks[4].into()));
            }
            other => return Err(err(ln, format!("unknown line `{other}`"))),
        }
    }
    if !header_seen {
        return Err(err(1, "missing header".into()));
    }
    let last = text.lines().count().max(1);
    let alphabet = alphabet.ok_or_else(|| err(last, "missing alphabet line".into()))?;
    let states = states.ok_or_else(|| err(last, "missing states line".into()))?;
    let (iln, iname) = initial.ok_or_else(|| err(last, "missing initial line".into()))?;
    let sidx: HashMap<&str, usize> = states.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let lidx: HashMap<&str, usize> = alphabet.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let initial = *sidx
        .get(iname.as_str())
        .ok_or_else(|| err(iln, format!("unknown state `{iname}`")))?;
    let mut transitions = Vec::with_capacity(raw.len());
    for (ln, s, l, p, d) in &raw {
        let src = *sidx
            .get(s.as_str())
            .ok_or_else(|| err(*ln, format!("unknown state `{s}`")))?;
        let dst = *sidx
            .get(d.as_str())
            .ok_or_else(|| err(*ln, format!("unknown state `{d}`")))?;
        let letter = *lidx
            .get(l.as_str())
            .ok_or_else(|| err(*ln, format!("unknown letter `{l}`")))?;
        transitions.push(Transition {
            src,
            letter,
            prio: *p,
            dst,
        });
    }
    let min_seen = transitions
        .iter()
        .map(|t| t.prio)
        .chain(index.map(|i| i.0))
        .min()
        .unwrap_or(0);
    let shift = min_seen - min_seen % 2;
    for t in &mut transitions {
        t.prio -= shift;
    }
    let (lo, hi) = match index {
        Some((lo, hi)) => (lo - shift, hi - shift),
        None => derived_index(&transitions),
    };
    ParityAutomaton::new(alphabet, states, initial, transitions, (lo, hi)).map_err(|e| err(last, e.to_string()))
}

fn parse_prio(s: &str) -> Option<u32> {
    if s.chars().all(|c| c.is_ascii_digit()) {
        s.parse().ok()
    } else {
        None
    }
}

fn has_duplicates(v: &[String]) -> bool {
    let mut s: Vec<&String> = v.iter().collect();
    s.sort();
    s.windows(2).any(|w| w[0] == w[1])
}

/// Serialises to HDTK-TPA; headers first, transitions in stored order.
pub fn serialize_tpa(a: &ParityAutomaton) -> String {
    let mut out = String::from("HDTK-TPA 1\n");
    let _ = writeln!(out, "alphabet: {}", a.alphabet.join(" "));
    let _ = writeln!(out, "states: {}", a.states.join(" "));
    let _ = writeln!(out, "initial: {}", a.states[a.initial]);
    let _ = writeln!(out, "index: {} {}", a.lo, a.hi);
    for t in &a.transitions {
        let _ = writeln!(
            out,
            "trans: {} {} {} {}",
            a.states[t.src], a.alphabet[t.letter], t.prio, a.states[t.dst]
        );
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompletionMode {
    Reject,
    AddRejectingSink,
}

/// Odd priority used for rejecting sinks: the largest odd priority in the
/// index, or `hi + 1` when the index holds no odd priority.
fn rejecting_priority(lo: u32, hi: u32) -> u32 {
    if hi % 2 == 1 {
        hi
    } else if hi > lo {
        hi - 1
    } else {
        hi + 1
    }
}

pub fn validate_and_complete(a: &ParityAutomaton, mode: CompletionMode) -> Result<ParityAutomaton> {
    if a.alphabet.is_empty() {
        return Err(Error::Invalid("empty alphabet".into()));
    }
    let table = a.out_table();
    let missing: Vec<(usize, usize)> = (0..a.num_states())
        .flat_map(|q| (0..a.num_letters()).map(move |l| (q, l)))
        .filter(|&(q, l)| table[q][l].is_empty())
        .collect();
    if missing.is_empty() {
        return Ok(a.clone());
    }
    if mode == CompletionMode::Reject {
        let (q, l) = missing[0];
        return pre(format!(
            "incomplete: no transition from {} on {}",
            a.states[q], a.alphabet[l]
        ));
    }
    let mut b = a.clone();
    let c = rejecting_priority(a.lo, a.hi);
    b.hi = b.hi.max(c);
    let sink = b.states.len();
    b.states.push(a.fresh_name(REJ_SINK));
    for (q, l) in missing {
        b.transitions.push(Transition {
            src: q,
            letter: l,
            prio: c,
            dst: sink,
        });
    }
    for l in 0..a.num_letters() {
        b.transitions.push(Transition {
            src: sink,
            letter: l,
            prio: c,
            dst: sink,
        });
    }
    Ok(b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Approximation {
    /// `A_{>0}`: priority-0 transitions go to an accepting sink.
    Above0,
    /// `A_{>1}`: priority-1 transitions go to a rejecting sink.
    Above1,
    /// `A_safe`: priorities at least 2 become 2, priority 1 goes to a rejecting sink.
    Safe,
    /// `A_reach`: priority-0 transitions go to an accepting sink.
    Reach,
}

pub fn approximate(a: &ParityAutomaton, kind: Approximation) -> Result<ParityAutomaton> {
    approximate_traced(a, kind).map(|(b, _)| b)
}

/// Like [`approximate`], also returning for every output transition the
/// input transition it stems from (`None` for sink loops).
pub fn approximate_traced(a: &ParityAutomaton, kind: Approximation) -> Result<(ParityAutomaton, Vec<Option<usize>>)> {
    let need_lo = match kind {
        Approximation::Above0 | Approximation::Reach => 0,
        Approximation::Above1 | Approximation::Safe => 1,
    };
    if a.lo != need_lo {
        return pre(format!(
            "{kind:?} needs an index starting at {need_lo}, got [{},{}]",
            a.lo, a.hi
        ));
    }
    let base = validate_and_complete(a, CompletionMode::AddRejectingSink)?;
    let mut b = base.clone();
    b.transitions.clear();
    let mut origin = Vec::new();
    let n = base.num_states();
    let (sink_name, loop_prio, redirect_prio) = match kind {
        Approximation::Above0 => (ACC_SINK, 2, 2),
        Approximation::Reach => (ACC_SINK, 0, 0),
        Approximation::Above1 | Approximation::Safe => (REJ_SINK, 1, 1),
    };
    b.states.push(base.fresh_name(sink_name));
    let sink = n;
    for (i, t) in base.transitions.iter().enumerate() {
        let o = if i < a.transitions.len() { Some(i) } else { None };
        let nt = match kind {
            Approximation::Above0 | Approximation::Reach if t.prio == 0 => Transition {
                prio: redirect_prio,
                dst: sink,
                ..*t
            },
            Approximation::Above1 | Approximation::Safe if t.prio == 1 => Transition {
                prio: redirect_prio,
                dst: sink,
                ..*t
            },
            Approximation::Safe => Transition { prio: 2, ..*t },
            Approximation::Reach => Transition { prio: 1, ..*t },
            _ => *t,
        };
        b.transitions.push(nt);
        origin.push(o);
    }
    for l in 0..base.num_letters() {
        b.transitions.push(Transition {
            src: sink,
            letter: l,
            prio: loop_prio,
            dst: sink,
        });
        origin.push(None);
    }
    let (lo, hi) = match kind {
        Approximation::Above0 => (1, base.hi.max(2)),
        Approximation::Reach => (0, 1),
        Approximation::Above1 => (1, base.hi.max(1)),
        Approximation::Safe => (1, 2),
    };
    b.lo = lo;
    b.hi = hi;
    Ok((b, origin))
}

/// Coreachability pairs and weak-coreachability classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WcrPartition {
    /// Symmetric list of coreachable pairs `(p,q)`, sorted.
    pub cr_pairs: Vec<(usize, usize)>,
    /// Class id of each reachable state; `None` for unreachable states.
    pub class_of: Vec<Option<usize>>,
    pub classes: Vec<Vec<usize>>,
}

impl WcrPartition {
    pub fn same_class(&self, p: usize, q: usize) -> bool {
        matches!((self.class_of[p], self.class_of[q]), (Some(x), Some(y)) if x == y)
    }

    /// Weakly coreachable partners of `q`, in index order.
    pub fn partners(&self, q: usize) -> &[usize] {
        match self.class_of[q] {
            Some(c) => &self.classes[c],
            None => &[],
        }
    }

    /// All ordered pairs of weakly coreachable states.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut v = Vec::new();
        for c in &self.classes {
            for &p in c {
                for &q in c {
                    v.push((p, q));
                }
            }
        }
        v.sort_unstable();
        v
    }

    /// All ordered triples of weakly coreachable states.
    pub fn triples(&self) -> Vec<(usize, usize, usize)> {
        let mut v = Vec::new();
        for c in &self.classes {
            for &p in c {
                for &q in c {
                    for &r in c {
                        v.push((p, q, r));
                    }
                }
            }
        }
        v.sort_unstable();
        v
    }
}

pub fn weak_coreachability(a: &ParityAutomaton) -> WcrPartition {
    let n = a.num_states();
    let table = a.out_table();
    let mut seen = vec![false; n * n];
    let mut queue = VecDeque::new();
    seen[a.initial * n + a.initial] = true;
    queue.push_back((a.initial, a.initial));
    while let Some((p, q)) = queue.pop_front() {
        for l in 0..a.num_letters() {
            for &i in &table[p][l] {
                for &j in &table[q][l] {
                    let (p2, q2) = (a.transitions[i].dst, a.transitions[j].dst);
                    if !seen[p2 * n + q2] {
                        seen[p2 * n + q2] = true;
                        queue.push_back((p2, q2));
                    }
                }
            }
        }
    }
    let mut uf = UnionFind::<usize>::new(n);
    let mut cr_pairs = Vec::new();
    let mut reach = vec![false; n];
    for p in 0..n {
        for q in 0..n {
            if seen[p * n + q] {
                cr_pairs.push((p, q));
                uf.union(p, q);
                reach[p] = true;
            }
        }
    }
    let mut class_of = vec![None; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut rep_class: HashMap<usize, usize> = HashMap::new();
    for q in 0..n {
        if !reach[q] {
            continue;
        }
        let r = uf.find(q);
        let c = *rep_class.entry(r).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        classes[c].push(q);
        class_of[q] = Some(c);
    }
    WcrPartition {
        cr_pairs,
        class_of,
        classes,
    }
}

/// `Delay^k(A)`: each step postpones the automaton by one letter.
pub fn delay(a: &ParityAutomaton, k: usize) -> ParityAutomaton {
    let mut cur = a.clone();
    for step in 0..k {
        cur = delay_once(&cur, step);
    }
    cur
}

fn delay_once(a: &ParityAutomaton, step: usize) -> ParityAutomaton {
    let n = a.num_states();
    let m = a.num_letters();
    let mut states = Vec::with_capacity(n * m + 1);
    for q in 0..n {
        for l in 0..m {
            states.push(format!("{}~{}", a.states[q], a.alphabet[l]));
        }
    }
    let init = states.len();
    states.push(a.fresh_name(&format!("__delay{step}")));
    let mut transitions = Vec::new();
    for l in 0..m {
        transitions.push(Transition {
            src: init,
            letter: l,
            prio: 0,
            dst: a.initial * m + l,
        });
    }
    for t in &a.transitions {
        for b in 0..m {
            transitions.push(Transition {
                src: t.src * m + t.letter,
                letter: b,
                prio: t.prio,
                dst: t.dst * m + b,
            });
        }
    }
    ParityAutomaton {
        alphabet: a.alphabet.clone(),
        states,
        initial: init,
        transitions,
        lo: 0,
        hi: a.hi.max(1),
    }
}

/// Language-equivalent nondeterministic Büchi automaton via priority guessing.
pub fn parity_to_buchi(a: &ParityAutomaton) -> Result<ParityAutomaton> {
    validate_and_complete(a, CompletionMode::Reject)?;
    let n = a.num_states();
    let evens: Vec<u32> = (a.lo..=a.hi).filter(|c| c % 2 == 0).collect();
    let mut states: Vec<String> = a.states.iter().map(|s| format!("{s}@_")).collect();
    for &e in &evens {
        states.extend(a.states.iter().map(|s| format!("{s}@{e}")));
    }
    let copy = |k: usize, q: usize| (k + 1) * n + q;
    let mut transitions = Vec::new();
    for t in &a.transitions {
        transitions.push(Transition { prio: 1, ..*t });
    }
    for (k, &e) in evens.iter().enumerate() {
        for t in a.transitions.iter().filter(|t| t.prio >= e) {
            let prio = if t.prio == e { 0 } else { 1 };
            transitions.push(Transition {
                src: t.src,
                letter: t.letter,
                prio,
                dst: copy(k, t.dst),
            });
            transitions.push(Transition {
                src: copy(k, t.src),
                letter: t.letter,
                prio,
                dst: copy(k, t.dst),
            });
        }
    }
    let b = ParityAutomaton {
        alphabet: a.alphabet.clone(),
        states,
        initial: a.initial,
        transitions,
        lo: 0,
        hi: 1,
    };
    Ok(b.trim())
}

/// Relabels priorities of a `[1,·]` automaton until it is 2-priority reduced.
pub fn two_priority_reduce(a: &ParityAutomaton) -> Result<ParityAutomaton> {
    if a.lo != 1 {
        return pre(format!(
            "2-priority reduction needs index [1,·], got [{},{}]",
            a.lo, a.hi
        ));
    }
    let mut cur = a.clone();
    loop {
        let next = two_priority_step(&cur);
        if next == cur {
            return Ok(cur);
        }
        cur = next;
    }
}

fn two_priority_step(a: &ParityAutomaton) -> ParityAutomaton {
    let high: Vec<usize> = (0..a.transitions.len())
        .filter(|&i| a.transitions[i].prio >= 2)
        .collect();
    let id = scc_ids(
        a.num_states(),
        high.iter().map(|&i| (a.transitions[i].src, a.transitions[i].dst)),
    );
    let mut b = a.clone();
    let mut scc_min: HashMap<usize, u32> = HashMap::new();
    for &i in &high {
        let t = a.transitions[i];
        if id[t.src] != id[t.dst] {
            b.transitions[i].prio = 1;
        } else {
            let m = scc_min.entry(id[t.src]).or_insert(u32::MAX);
            *m = (*m).min(t.prio);
        }
    }
    for &i in &high {
        let t = a.transitions[i];
        if id[t.src] == id[t.dst] && scc_min[&id[t.src]] > 2 {
            b.transitions[i].prio -= 2;
        }
    }
    b
}

#[derive(Clone, Debug, PartialEq)]
pub struct RandomParams {
    pub states: usize,
    pub letters: usize,
    pub lo: u32,
    pub hi: u32,
    /// Probability of an extra transition on each `(state, letter)`.
    pub density: f64,
    /// 1.0 forces a deterministic automaton.
    pub determinism_bias: f64,
    /// Produce a deterministic seed with language-preserving duplicates.
    pub hd_by_construction: bool,
}

impl Default for RandomParams {
    fn default() -> Self {
        RandomParams {
            states: 3,
            letters: 2,
            lo: 0,
            hi: 1,
            density: 0.5,
            determinism_bias: 0.0,
            hd_by_construction: false,
        }
    }
}

fn letters(m: usize) -> Vec<String> {
    (0..m).map(|i| ((b'a' + (i % 26) as u8) as char).to_string()).collect()
}

pub fn random_automaton(seed: u64, params: &RandomParams) -> Result<ParityAutomaton> {
    if params.hd_by_construction {
        return random_hd_automaton(seed, params).map(|(a, _)| a);
    }
    check_params(params)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = params.states;
    let mut transitions = Vec::new();
    for q in 0..n {
        for l in 0..params.letters {
            let extra = if rng.gen::<f64>() >= params.determinism_bias && rng.gen::<f64>() < params.density {
                rng.gen_range(1..=2)
            } else {
                0
            };
            for _ in 0..=extra {
                let t = Transition {
                    src: q,
                    letter: l,
                    prio: rng.gen_range(params.lo..=params.hi),
                    dst: rng.gen_range(0..n),
                };
                if !transitions.contains(&t) {
                    transitions.push(t);
                }
            }
        }
    }
    Ok(ParityAutomaton {
        alphabet: letters(params.letters),
        states: (0..n).map(|i| format!("q{i}")).collect(),
        initial: 0,
        transitions,
        lo: params.lo,
        hi: params.hi,
    })
}

fn check_params(params: &RandomParams) -> Result<()> {
    if params.states == 0 {
        return Err(Error::Invalid("zero states".into()));
    }
    if params.letters == 0 {
        return Err(Error::Invalid("empty alphabet".into()));
    }
    if params.lo > 1 || params.lo > params.hi {
        return Err(Error::Invalid("index must be [lo,hi] with lo in {0,1}".into()));
    }
    Ok(())
}

/// HD-by-construction automaton together with its deterministic seed.
///
/// The seed `D` lives on states `q0..q{n-1}`. Extra states are copies of
/// seed states whose transitions sometimes lead to a rejecting sink, so each
/// copy accepts a sublanguage of its original; duplicates of seed transitions
/// lead into such copies. `D` stays a language-equivalent subautomaton.
pub fn random_hd_automaton(seed: u64, params: &RandomParams) -> Result<(ParityAutomaton, ParityAutomaton)> {
    check_params(params)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total = params.states;
    let n = total.div_ceil(2).max(1);
    let m = params.letters;
    let mut det = vec![vec![(0usize, 0u32); m]; n];
    for row in det.iter_mut() {
        for cell in row.iter_mut() {
            *cell = (rng.gen_range(0..n), rng.gen_range(params.lo..=params.hi));
        }
    }
    let seed_transitions: Vec<Transition> = (0..n)
        .flat_map(|q| (0..m).map(move |l| (q, l)))
        .map(|(q, l)| Transition {
            src: q,
            letter: l,
            prio: det[q][l].1,
            dst: det[q][l].0,
        })
        .collect();
    let d = ParityAutomaton {
        alphabet: letters(m),
        states: (0..n).map(|i| format!("q{i}")).collect(),
        initial: 0,
        transitions: seed_transitions.clone(),
        lo: params.lo,
        hi: params.hi,
    };
    let copies = total.saturating_sub(n + 1);
    if copies == 0 || params.determinism_bias >= 1.0 {
        return Ok((d.clone(), d));
    }
    let sink = n + copies;
    let rej = rejecting_priority(params.lo, params.hi);
    let orig_of: Vec<usize> = (0..copies).map(|_| rng.gen_range(0..n)).collect();
    let mut copies_of = vec![Vec::new(); n];
    for (c, &o) in orig_of.iter().enumerate() {
        copies_of[o].push(n + c);
    }
    let mut transitions = seed_transitions;
    for (c, &o) in orig_of.iter().enumerate() {
        for l in 0..m {
            let (t, p) = det[o][l];
            let dst = if rng.gen::<f64>() < 0.35 {
                transitions.push(Transition {
                    src: n + c,
                    letter: l,
                    prio: rej,
                    dst: sink,
                });
                continue;
            } else if !copies_of[t].is_empty() && rng.gen::<f64>() < 0.5 {
                copies_of[t][rng.gen_range(0..copies_of[t].len())]
            } else {
                t
            };
            transitions.push(Transition {
                src: n + c,
                letter: l,
                prio: p,
                dst,
            });
        }
    }
    for q in 0..n {
        for l in 0..m {
            let (t, p) = det[q][l];
            if copies_of[t].is_empty() {
                continue;
            }
            if rng.gen::<f64>() >= params.determinism_bias && rng.gen::<f64>() < params.density {
                let dst = copies_of[t][rng.gen_range(0..copies_of[t].len())];
                transitions.push(Transition {
                    src: q,
                    letter: l,
                    prio: p,
                    dst,
                });
            }
        }
    }
    for l in 0..m {
        transitions.push(Transition {
            src: sink,
            letter: l,
            prio: rej,
            dst: sink,
        });
    }
    let mut states: Vec<String> = (0..n).map(|i| format!("q{i}")).collect();
    states.extend((0..copies).map(|c| format!("c{c}")));
    states.push(REJ_SINK.to_string());
    let a = ParityAutomaton {
        alphabet: letters(m),
        states,
        initial: 0,
        transitions,
        lo: params.lo,
        hi: params.hi.max(rej),
    };
    Ok((a, d))
}

/// Nondeterministic automaton together with a language-equivalent
/// deterministic seed, usually not history-deterministic.
///
/// Some seed transitions `q -l-> t` are replaced by two transitions into
/// copies of `t`. One copy continues only on the first half of the alphabet,
/// the other only on the second half; the other letters lead to a rejecting
/// sink. The copies jointly accept `L(t)`, but choosing between them needs
/// the next letter.
pub fn random_split_automaton(seed: u64, params: &RandomParams) -> Result<(ParityAutomaton, ParityAutomaton)> {
    check_params(params)?;
    if params.letters < 2 {
        return Err(Error::Invalid("splitting needs at least two letters".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = params.letters;
    let n = (params.states.saturating_sub(1) / 2).max(1);
    let det: Vec<Vec<(usize, u32)>> = (0..n)
        .map(|_| {
            (0..m)
                .map(|_| (rng.gen_range(0..n), rng.gen_range(params.lo..=params.hi)))
                .collect()
        })
        .collect();
    let seed_transitions: Vec<Transition> = (0..n)
        .flat_map(|q| (0..m).map(move |l| (q, l)))
        .map(|(q, l)| Transition {
            src: q,
            letter: l,
            prio: det[q][l].1,
            dst: det[q][l].0,
        })
        .collect();
    let d = ParityAutomaton {
        alphabet: letters(m),
        states: (0..n).map(|i| format!("q{i}")).collect(),
        initial: 0,
        transitions: seed_transitions.clone(),
        lo: params.lo,
        hi: params.hi,
    };
    let splits = (params.states.saturating_sub(n + 1) / 2).min(n);
    if splits == 0 {
        return Ok((d.clone(), d));
    }
    let mut targets: Vec<usize> = (0..n).collect();
    for i in 0..splits {
        let j = rng.gen_range(i..n);
        targets.swap(i, j);
    }
    targets.truncate(splits);
    let rej = rejecting_priority(params.lo, params.hi);
    let sink = n + 2 * splits;
    let half = m / 2;
    let mut transitions = Vec::new();
    for t in seed_transitions {
        match targets.iter().position(|&x| x == t.dst) {
            Some(k) if rng.gen::<f64>() < params.density.max(0.5) => {
                transitions.push(Transition { dst: n + 2 * k, ..t });
                transitions.push(Transition {
                    dst: n + 2 * k + 1,
                    ..t
                });
            }
            _ => transitions.push(t),
        }
    }
    for (k, &t) in targets.iter().enumerate() {
        for l in 0..m {
            let (dst, prio) = det[t][l];
            let low = Transition {
                src: n + 2 * k,
                letter: l,
                prio,
                dst,
            };
            let high = Transition {
                src: n + 2 * k + 1,
                letter: l,
                prio,
                dst,
            };
            let to_sink = |tr: Transition| Transition {
                prio: rej,
                dst: sink,
                ..tr
            };
            if l < half {
                transitions.push(low);
                transitions.push(to_sink(high));
            } else {
                transitions.push(to_sink(low));
                transitions.push(high);
            }
        }
    }
    for l in 0..m {
        transitions.push(Transition {
            src: sink,
            letter: l,
            prio: rej,
            dst: sink,
        });
    }
    let mut states: Vec<String> = (0..n).map(|i| format!("q{i}")).collect();
    for &t in &targets {
        states.push(format!("q{t}_lo"));
        states.push(format!("q{t}_hi"));
    }
    states.push(REJ_SINK.to_string());
    let a = ParityAutomaton {
        alphabet: letters(m),
        states,
        initial: 0,
        transitions,
        lo: params.lo,
        hi: params.hi.max(rej),
    };
    Ok((a.trim(), d))
}
