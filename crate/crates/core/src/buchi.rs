//! Determinisation of history-deterministic Büchi automata with a quadratic
//! number of states, through rank reduction towards reach-covering.

use std::collections::{HashMap, VecDeque};

use crate::automaton::{approximate_traced, weak_coreachability, Approximation, ParityAutomaton, Transition};
use crate::error::{pre, Error, Result};
use crate::game::{compute_ranks, solve_parity, Player, Solution};
use crate::hd::check_hd;
use crate::token::{
    build_g1, build_g1_buchi, build_g1_buchi_from, eve_wins_joker, extract_subautomaton, BuchiG1, ExtractMode,
};

/// Views an automaton with priorities in `{0,1}` under the index `[0,1]`.
pub fn as_buchi(a: &ParityAutomaton) -> Result<ParityAutomaton> {
    if a.transitions.iter().any(|t| t.prio > 1) {
        return pre(format!("not a Büchi automaton: index [{},{}]", a.lo, a.hi));
    }
    Ok(ParityAutomaton {
        lo: 0,
        hi: 1,
        ..a.clone()
    })
}

/// A positional choice of one transition per `(state, letter)` on a domain
/// closed under the chosen transitions.
#[derive(Clone, Debug)]
pub struct PrunedDet {
    pub choice: Vec<Vec<Option<usize>>>,
    pub domain: Vec<bool>,
}

impl PrunedDet {
    /// The deterministic subautomaton started at `from`, trimmed.
    pub fn automaton(&self, s: &ParityAutomaton, from: usize) -> Result<ParityAutomaton> {
        if !self.domain.get(from).copied().unwrap_or(false) {
            return pre(format!("state {} is outside the pruned domain", s.states[from]));
        }
        let transitions: Vec<Transition> = self
            .choice
            .iter()
            .flatten()
            .flatten()
            .map(|&t| s.transitions[t])
            .collect();
        Ok(s.with_transitions(transitions).with_initial(from).trim())
    }
}

fn accepting_sinks(s: &ParityAutomaton) -> Vec<bool> {
    let table = s.out_table();
    (0..s.num_states())
        .map(|q| {
            table[q].iter().all(|ts| !ts.is_empty())
                && s.transitions
                    .iter()
                    .filter(|t| t.src == q)
                    .all(|t| t.dst == q && t.prio % 2 == 0)
        })
        .collect()
}

/// Deterministic pruning of a safety or reachability automaton from the
/// states `q` with Eve winning `G1(q; q)`. Errors if a requested state is not
/// among them.
pub fn prune_det(s: &ParityAutomaton, requested: &[usize]) -> Result<PrunedDet> {
    let n = s.num_states();
    let table = s.out_table();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|q| (0..n).map(move |p| (q, p))).collect();
    let sol = build_g1(s, s, &pairs)?.solve()?;
    let win: Vec<bool> = sol.winners.iter().map(|&w| w == Player::Eve).collect();
    let won = |q: usize, p: usize| win[q * n + p];
    // Levels of the attractor to accepting sinks in the game where Adam picks
    // letters and Eve picks transitions.
    let sinks = accepting_sinks(s);
    let mut level: Vec<Option<usize>> = sinks.iter().map(|&b| if b { Some(0) } else { None }).collect();
    let mut choice: Vec<Vec<Option<usize>>> = vec![vec![None; s.num_letters()]; n];
    for q in 0..n {
        if sinks[q] {
            for l in 0..s.num_letters() {
                choice[q][l] = Some(table[q][l][0]);
            }
        }
    }
    let mut round = 0;
    loop {
        round += 1;
        let mut added = Vec::new();
        for q in (0..n).filter(|&q| level[q].is_none()) {
            let picks: Option<Vec<usize>> = (0..s.num_letters())
                .map(|l| {
                    table[q][l]
                        .iter()
                        .copied()
                        .find(|&t| level[s.transitions[t].dst].is_some_and(|x| x < round))
                })
                .collect();
            if let Some(picks) = picks {
                added.push((q, picks));
            }
        }
        if added.is_empty() {
            break;
        }
        for (q, picks) in added {
            level[q] = Some(round);
            for (l, t) in picks.into_iter().enumerate() {
                choice[q][l] = Some(t);
            }
        }
    }
    let domain: Vec<bool> = (0..n).map(|q| won(q, q) || level[q].is_some()).collect();
    for q in (0..n).filter(|&q| domain[q] && level[q].is_none()) {
        for l in 0..s.num_letters() {
            let succ: Vec<usize> = table[q][l].iter().map(|&t| s.transitions[t].dst).collect();
            let pick = table[q][l].iter().copied().find(|&t| {
                let d = s.transitions[t].dst;
                succ.iter().all(|&x| won(d, x))
            });
            match pick {
                Some(t) => choice[q][l] = Some(t),
                None => return Err(Error::Internal(format!("no uniform choice at state {}", s.states[q]))),
            }
        }
    }
    for &q in requested {
        if !domain[q] {
            return Err(Error::Precondition(format!("Eve loses G1 at state {}", s.states[q])));
        }
    }
    Ok(PrunedDet { choice, domain })
}

/// Reach-covering witnesses: for each reachable state `q`, the lowest `p`
/// weakly coreachable to `q` with Eve winning `G1(q; p)` in the reachability
/// approximation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReachCovering {
    pub witness: Vec<Option<usize>>,
    pub failing: Option<usize>,
}

impl ReachCovering {
    pub fn holds(&self) -> bool {
        self.failing.is_none()
    }
}

struct ReachGame {
    reach: ParityAutomaton,
    origin: Vec<Option<usize>>,
    g1: BuchiG1,
    sol: Solution,
}

impl ReachGame {
    fn new(a: &ParityAutomaton) -> Result<ReachGame> {
        let (reach, origin) = approximate_traced(&as_buchi(a)?, Approximation::Reach)?;
        let pairs = weak_coreachability(a).pairs();
        let g1 = build_g1_buchi_from(&reach, &pairs)?;
        let sol = solve_parity(&g1.game)?;
        Ok(ReachGame { reach, origin, g1, sol })
    }

    fn sink(&self) -> usize {
        self.reach.num_states() - 1
    }

    fn wins(&self, q: usize, p: usize) -> bool {
        self.g1
            .pair
            .get(&(q, p))
            .is_some_and(|&v| self.sol.winner[v] == Player::Eve)
    }
}

pub fn reach_covering_witness(a: &ParityAutomaton) -> Result<ReachCovering> {
    let rg = ReachGame::new(a)?;
    let wcr = weak_coreachability(a);
    let mut witness = vec![None; a.num_states()];
    let mut failing = None;
    for q in 0..a.num_states() {
        if wcr.class_of[q].is_none() {
            continue;
        }
        witness[q] = wcr.partners(q).iter().copied().find(|&p| rg.wins(q, p));
        if witness[q].is_none() && failing.is_none() {
            failing = Some(q);
        }
    }
    Ok(ReachCovering { witness, failing })
}

/// Optimal ranks of states in the Büchi 1-token arena.
pub fn opt_ranks(a: &ParityAutomaton) -> Result<Vec<u32>> {
    let g = build_g1_buchi(a)?;
    let ranks = compute_ranks(&g.game).map_err(|e| match e {
        Error::Precondition(_) => Error::Precondition("Eve does not win G1 from everywhere".into()),
        e => e,
    })?;
    let wcr = weak_coreachability(a);
    Ok((0..a.num_states())
        .map(|q| {
            wcr.partners(q)
                .iter()
                .map(|&p| ranks.rank[g.pair[&(q, p)]])
                .min()
                .unwrap_or(0)
        })
        .collect())
}

/// One round of rank reduction.
#[derive(Clone, Debug)]
pub struct RankIteration {
    pub opt: Vec<u32>,
    pub removed: Vec<Transition>,
    pub relabelled: Vec<Transition>,
}

#[derive(Clone, Debug)]
pub struct RankReduction {
    pub automaton: ParityAutomaton,
    pub trace: Vec<RankIteration>,
}

/// Removes priority-1 transitions that increase the optimal rank and makes
/// those that decrease it accepting, until nothing changes.
pub fn rank_reduce_buchi(a: &ParityAutomaton) -> Result<RankReduction> {
    let mut cur = as_buchi(a)?.trim();
    let cap = cur.transitions.len() + 1;
    let mut trace = Vec::new();
    for _ in 0..=cap {
        let opt = opt_ranks(&cur)?;
        let mut removed = Vec::new();
        let mut relabelled = Vec::new();
        let mut next = Vec::new();
        for t in &cur.transitions {
            if t.prio == 1 && opt[t.src] < opt[t.dst] {
                removed.push(*t);
            } else if t.prio == 1 && opt[t.src] > opt[t.dst] {
                relabelled.push(*t);
                next.push(Transition { prio: 0, ..*t });
            } else {
                next.push(*t);
            }
        }
        let done = removed.is_empty() && relabelled.is_empty();
        trace.push(RankIteration {
            opt,
            removed,
            relabelled,
        });
        if done {
            return Ok(RankReduction { automaton: cur, trace });
        }
        cur = cur.with_transitions(next).trim();
    }
    Err(Error::Internal("rank reduction exceeded its iteration bound".into()))
}

/// Deterministic Büchi automaton on pairs `(q, r)` for an automaton with
/// reach-covering on which Eve wins G1 from everywhere.
pub fn determinize_reach_covering(a: &ParityAutomaton) -> Result<ParityAutomaton> {
    let a = as_buchi(a)?;
    let rg = ReachGame::new(&a)?;
    let wcr = weak_coreachability(&a);
    let sink = rg.sink();
    let reach_det: Vec<bool> = (0..a.num_states()).map(|p| rg.wins(p, p)).collect();
    let requested: Vec<usize> = (0..a.num_states()).filter(|&p| reach_det[p]).collect();
    let dreach = prune_det(&rg.reach, &requested)?;
    for p in 0..a.num_states() {
        if wcr.class_of[p].is_some() && dreach.domain[p] != reach_det[p] {
            return Err(Error::Internal("1-token arenas disagree on reach-determinism".into()));
        }
    }
    let reset = |q: usize| -> Result<usize> {
        wcr.partners(q)
            .iter()
            .copied()
            .find(|&r| reach_det[r] && rg.wins(q, r))
            .ok_or_else(|| Error::Precondition(format!("no reach-covering witness for {}", a.states[q])))
    };
    let start = (a.initial, reset(a.initial)?);
    let mut ids: HashMap<(usize, usize), usize> = HashMap::from([(start, 0)]);
    let mut order = vec![start];
    let mut queue = VecDeque::from([start]);
    let mut transitions = Vec::new();
    while let Some((q, r)) = queue.pop_front() {
        let src = ids[&(q, r)];
        for l in 0..a.num_letters() {
            let v2 = rg.g1.choice[&(q, l, r)];
            let e = rg.sol.strategy[v2].ok_or_else(|| Error::Internal("Eve loses a reachable pair".into()))?;
            let t_reach = rg.g1.transition[e].expect("Eve edge");
            let t = rg.origin[t_reach]
                .filter(|&t| t < a.transitions.len())
                .ok_or_else(|| Error::Internal("strategy leaves the automaton".into()))?;
            let tr = a.transitions[t];
            let (prio, next) = if tr.prio == 0 {
                (0, (tr.dst, reset(tr.dst)?))
            } else {
                let r2 = if r == sink {
                    sink
                } else {
                    let u = dreach.choice[r][l].ok_or_else(|| Error::Internal("pruned choice missing".into()))?;
                    rg.reach.transitions[u].dst
                };
                (1, (tr.dst, r2))
            };
            if !rg.wins(next.0, next.1) {
                return Err(Error::Internal("successor pair is not winning".into()));
            }
            let dst = *ids.entry(next).or_insert_with(|| {
                order.push(next);
                queue.push_back(next);
                order.len() - 1
            });
            transitions.push(Transition {
                src,
                letter: l,
                prio,
                dst,
            });
        }
    }
    let states = order
        .iter()
        .map(|&(q, r)| format!("{}|{}", a.states[q], rg.reach.states[r]))
        .collect();
    ParityAutomaton::new(a.alphabet.clone(), states, 0, transitions, (0, 1))
}

/// Full pipeline for a complete history-deterministic Büchi automaton.
#[derive(Clone, Debug)]
pub struct Determinization {
    pub automaton: ParityAutomaton,
    pub extracted: ParityAutomaton,
    pub reduction: RankReduction,
}

pub fn determinize_hd_buchi(a: &ParityAutomaton) -> Result<Determinization> {
    let a = as_buchi(a)?;
    let hd = check_hd(&a)?.hd;
    if hd != eve_wins_joker(&a)? {
        return Err(Error::Internal(
            "2-token and Joker verdicts differ on a Büchi automaton".into(),
        ));
    }
    if !hd {
        return pre("automaton is not history-deterministic");
    }
    let extracted = extract_subautomaton(&a, ExtractMode::Joker)?;
    let reduction = rank_reduce_buchi(&extracted)?;
    let automaton = determinize_reach_covering(&reduction.automaton)?;
    Ok(Determinization {
        automaton,
        extracted,
        reduction,
    })
}
