//! History-determinism via the 2-token game, and inclusion checks.

use std::collections::VecDeque;

use fixedbitset::FixedBitSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::automaton::{parity_to_buchi, validate_and_complete, CompletionMode, ParityAutomaton};
use crate::error::{pre, Error, Result};
use crate::game::{verify_strategy, ParityGame, Player};
use crate::graph::{cycle_hitting, shortest_path};
use crate::lasso::{lasso_member, LassoWord};
use crate::token::{build_g1, build_gk, build_sim, Kind};
use crate::zielonka::ZielonkaTree;

/// Winning strategy in a solved parity game.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub game: ParityGame,
    pub winner: Player,
    pub region: FixedBitSet,
    pub strategy: Vec<Option<usize>>,
}

impl Certificate {
    pub fn verify(&self) -> Result<bool> {
        Ok(self.region.contains(self.game.initial)
            && verify_strategy(&self.game, &self.strategy, self.winner, &self.region)?)
    }

    /// Text form: the parity game, then `winner`, `region` and `strategy` lines.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (v, o) in self.game.owner.iter().enumerate() {
            s.push_str(&format!("vertex {v} {o}\n"));
        }
        for &(a, b, p) in &self.game.edges {
            s.push_str(&format!("edge {a} {b} {p}\n"));
        }
        s.push_str(&format!("initial {}\nwinner {}\n", self.game.initial, self.winner));
        let region: Vec<String> = self.region.ones().map(|v| v.to_string()).collect();
        s.push_str(&format!("region {}\n", region.join(" ")));
        for (v, e) in self.strategy.iter().enumerate() {
            if let Some(e) = e {
                s.push_str(&format!("strategy {v} {e}\n"));
            }
        }
        s
    }

    pub fn parse(text: &str) -> Result<Certificate> {
        let mut arena_text = String::new();
        let mut winner = None;
        let mut region_ids = Vec::new();
        let mut strat = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let f: Vec<&str> = line.split_whitespace().collect();
            let bad = || Error::Parse {
                line: i + 1,
                msg: "malformed certificate line".into(),
            };
            match f.first().copied() {
                Some("winner") => {
                    winner = Some(match f.get(1).copied() {
                        Some("Eve") => Player::Eve,
                        Some("Adam") => Player::Adam,
                        _ => return Err(bad()),
                    })
                }
                Some("region") => {
                    for x in &f[1..] {
                        region_ids.push(x.parse::<usize>().map_err(|_| bad())?);
                    }
                }
                Some("strategy") if f.len() == 3 => strat.push((
                    f[1].parse::<usize>().map_err(|_| bad())?,
                    f[2].parse::<usize>().map_err(|_| bad())?,
                )),
                _ => {
                    arena_text.push_str(line);
                    arena_text.push('\n');
                }
            }
        }
        let arena = crate::game::GameArena::parse(&arena_text)?;
        let game = ParityGame::from_arena(&arena)?;
        let n = game.num_vertices();
        let mut region = FixedBitSet::with_capacity(n);
        let mut strategy = vec![None; n];
        for v in region_ids {
            if v >= n {
                return Err(Error::Invalid("region vertex out of range".into()));
            }
            region.insert(v);
        }
        for (v, e) in strat {
            if v >= n || e >= game.edges.len() {
                return Err(Error::Invalid("strategy entry out of range".into()));
            }
            strategy[v] = Some(e);
        }
        let winner = winner.ok_or_else(|| Error::Invalid("certificate has no winner line".into()))?;
        Ok(Certificate {
            game,
            winner,
            region,
            strategy,
        })
    }
}

#[derive(Clone, Debug)]
pub struct HdVerdict {
    pub hd: bool,
    pub certificate: Certificate,
}

/// Decides history-determinism by solving `G2(A)` from `(q0; q0, q0)`.
pub fn check_hd(a: &ParityAutomaton) -> Result<HdVerdict> {
    let q = a.initial;
    let g = build_gk(a, &[a, a], &[vec![q, q, q]])?;
    let sol = g.solve()?;
    let winner = sol.winners[0];
    let game = sol.product.game.clone();
    let certificate = Certificate {
        region: sol.solution.region(winner),
        strategy: sol.solution.strategy_of(&game, winner),
        game,
        winner,
    };
    if !certificate.verify()? {
        return Err(Error::Internal("2-token certificate failed verification".into()));
    }
    Ok(HdVerdict {
        hd: winner == Player::Eve,
        certificate,
    })
}

/// Result of an inclusion check against a deterministic automaton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inclusion {
    pub included: bool,
    /// A word accepted by the left automaton and rejected by the right one.
    pub counterexample: Option<LassoWord>,
}

/// Exact `L(A) ⊆ L(D)` for deterministic complete `D`, by threshold-pair SCC
/// search in the product.
pub fn inclusion_oracle_det(a: &ParityAutomaton, d: &ParityAutomaton) -> Result<Inclusion> {
    if a.alphabet != d.alphabet {
        return Err(Error::Alphabet("automata use different alphabets".into()));
    }
    if !d.is_deterministic() || !d.is_complete() {
        return pre("right-hand automaton must be deterministic and complete");
    }
    let nd = d.num_states();
    let dt = d.out_table();
    let node = |q: usize, r: usize| q * nd + r;
    let total = a.num_states() * nd;
    let start = node(a.initial, d.initial);
    let mut seen = FixedBitSet::with_capacity(total);
    seen.insert(start);
    let mut queue = VecDeque::from([start]);
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); a.num_states()];
    for (i, t) in a.transitions.iter().enumerate() {
        out[t.src].push(i);
    }
    // (src, dst, a-priority, d-priority, letter)
    let mut edges: Vec<(usize, usize, u32, u32, usize)> = Vec::new();
    while let Some(v) = queue.pop_front() {
        let (q, r) = (v / nd, v % nd);
        for &i in &out[q] {
            let t = a.transitions[i];
            let u = d.transitions[dt[r][t.letter][0]];
            let w = node(t.dst, u.dst);
            edges.push((v, w, t.prio, u.prio, t.letter));
            if !seen.put(w) {
                queue.push_back(w);
            }
        }
    }
    let pairs: Vec<(usize, usize)> = edges.iter().map(|e| (e.0, e.1)).collect();
    let evens: Vec<u32> = (a.lo..=a.hi).filter(|c| c % 2 == 0).collect();
    let odds: Vec<u32> = (d.lo..=d.hi).filter(|c| c % 2 == 1).collect();
    for &e in &evens {
        for &o in &odds {
            let keep = |i: usize| edges[i].2 >= e && edges[i].3 >= o;
            let Some((e1, e2)) = cycle_hitting(total, &pairs, keep, |i| edges[i].2 == e, |i| edges[i].3 == o) else {
                continue;
            };
            let ids = crate::graph::scc_ids(total, (0..edges.len()).filter(|&i| keep(i)).map(|i| pairs[i]));
            let comp = ids[edges[e1].0];
            let in_comp = |i: usize| keep(i) && ids[pairs[i].0] == comp && ids[pairs[i].1] == comp;
            let prefix = shortest_path(total, &pairs, |_| true, &[start], edges[e1].0).expect("reachable");
            let mut cycle = vec![e1];
            cycle.extend(shortest_path(total, &pairs, in_comp, &[edges[e1].1], edges[e2].0).expect("same SCC"));
            cycle.push(e2);
            cycle.extend(shortest_path(total, &pairs, in_comp, &[edges[e2].1], edges[e1].0).expect("same SCC"));
            if e1 == e2 {
                cycle.truncate(1);
                cycle.extend(shortest_path(total, &pairs, in_comp, &[edges[e1].1], edges[e1].0).expect("same SCC"));
            }
            let word = LassoWord::new(
                prefix.iter().map(|&i| edges[i].4).collect(),
                cycle.iter().map(|&i| edges[i].4).collect(),
            )?;
            return Ok(Inclusion {
                included: false,
                counterexample: Some(word),
            });
        }
    }
    Ok(Inclusion {
        included: true,
        counterexample: None,
    })
}

/// Independent HD oracle: `A` simulates a language-equivalent deterministic
/// `D`. Equivalence is checked exactly for `L(A) ⊆ L(D)` and by lassos for
/// the converse: all with `|u|,|v| <= 3` plus random ones up to length 6.
pub fn hd_oracle_vs_det(a: &ParityAutomaton, d: &ParityAutomaton) -> Result<bool> {
    if !d.is_deterministic() {
        return pre("reference automaton must be deterministic");
    }
    if !inclusion_oracle_det(a, d)?.included {
        return pre("L(A) is not contained in L(D)");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut words = LassoWord::enumerate(a.num_letters(), 3, 3);
    words.extend((0..200).map(|_| LassoWord::random(&mut rng, a.num_letters(), 6, 6)));
    for w in words {
        if lasso_member(d, &w)? && !lasso_member(a, &w)? {
            return pre(format!("L(D) contains {} but L(A) does not", w.display(&a.alphabet)));
        }
    }
    Ok(build_sim(a, d, &[(a.initial, d.initial)])?.winner()? == Player::Eve)
}

/// Outcome of the HD-target inclusion pipeline.
#[derive(Clone, Debug)]
pub struct HdInclusion {
    pub included: bool,
    /// The implication tree used for the simulation game.
    pub tree_height: usize,
    pub tree_leaves: usize,
}

/// `L(A) ⊆ L(H)` for history-deterministic `H`: `H` simulates the Büchi
/// automaton obtained from `A` by guessing the least even priority.
pub fn inclusion_hd(a: &ParityAutomaton, h: &ParityAutomaton, assume_hd: bool) -> Result<HdInclusion> {
    if a.alphabet != h.alphabet {
        return Err(Error::Alphabet("automata use different alphabets".into()));
    }
    if !assume_hd && !check_hd(h)?.hd {
        return pre("right-hand automaton is not history-deterministic");
    }
    let b = validate_and_complete(&parity_to_buchi(a)?, CompletionMode::AddRejectingSink)?;
    let b = ParityAutomaton { lo: 0, hi: 1, ..b };
    let g = build_sim(h, &b, &[(h.initial, b.initial)])?;
    debug_assert_eq!(g.kind, Kind::Sim);
    let tree: &ZielonkaTree = &g.tree;
    Ok(HdInclusion {
        included: g.winner()? == Player::Eve,
        tree_height: tree.height(),
        tree_leaves: tree.num_branches(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SdVerdict {
    Witnessed,
    Unknown,
}

/// Per `(state, letter)`: whether all successors are pairwise G1-equivalent.
#[derive(Clone, Debug)]
pub struct SdReport {
    pub entries: Vec<(usize, usize, SdVerdict)>,
}

impl SdReport {
    pub fn state_verdict(&self, q: usize) -> SdVerdict {
        if self.entries.iter().any(|e| e.0 == q && e.2 == SdVerdict::Unknown) {
            SdVerdict::Unknown
        } else {
            SdVerdict::Witnessed
        }
    }
}

/// Sufficient check for semantic determinism over reachable states.
pub fn sd_witness(a: &ParityAutomaton) -> Result<SdReport> {
    let table = a.out_table();
    let reach = a.reachable_states();
    let mut starts = Vec::new();
    for q in (0..a.num_states()).filter(|&q| reach[q]) {
        for l in 0..a.num_letters() {
            for &t in &table[q][l] {
                for &u in &table[q][l] {
                    let (x, y) = (a.transitions[t].dst, a.transitions[u].dst);
                    if x != y {
                        starts.push((x, y));
                    }
                }
            }
        }
    }
    starts.sort_unstable();
    starts.dedup();
    let won: std::collections::HashMap<(usize, usize), bool> = if starts.is_empty() {
        Default::default()
    } else {
        let sol = build_g1(a, a, &starts)?.solve()?;
        starts
            .iter()
            .copied()
            .zip(sol.winners.iter().map(|&w| w == Player::Eve))
            .collect()
    };
    let mut entries = Vec::new();
    for q in (0..a.num_states()).filter(|&q| reach[q]) {
        for l in 0..a.num_letters() {
            let succ: Vec<usize> = table[q][l].iter().map(|&t| a.transitions[t].dst).collect();
            let ok = succ.iter().all(|&x| succ.iter().all(|&y| x == y || won[&(x, y)]));
            entries.push((q, l, if ok { SdVerdict::Witnessed } else { SdVerdict::Unknown }));
        }
    }
    Ok(SdReport { entries })
}
