//! Implication games, their reduction to simulation, and the SAT encoding
//! into good implication games.

use std::fmt::Write as _;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::automaton::{validate_and_complete, CompletionMode, ParityAutomaton, Transition};
use crate::error::{Error, Result};
use crate::game::{muller_to_parity_from, solve_parity, GameArena, Player};
use crate::graph::cycle_hitting;
use crate::hd::check_hd;
use crate::token::{build_g2_explicit, eve_wins_g1, implication_tree, simulates};

/// A `(π1 ⇒ π2)` game: every edge colour is `[π1, π2]`.
#[derive(Clone, Debug)]
pub struct ImplicationGame {
    pub arena: GameArena,
}

impl ImplicationGame {
    pub fn new(arena: GameArena) -> Result<Self> {
        arena.check()?;
        if let Some(e) = arena.edges.iter().position(|e| e.colour.len() != 2) {
            return Err(Error::Invalid(format!("edge {e} needs two priorities")));
        }
        if let Some(v) = (0..arena.num_vertices()).find(|&v| arena.out[v].is_empty()) {
            return Err(Error::Invalid(format!("vertex {v} has no outgoing edge")));
        }
        Ok(ImplicationGame { arena })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::new(GameArena::parse(text)?)
    }

    pub fn dump(&self) -> String {
        self.arena.dump()
    }

    fn pi(&self, e: usize, i: usize) -> u32 {
        self.arena.edges[e].colour[i]
    }

    /// Largest priority of either function.
    pub fn max_priority(&self) -> u32 {
        self.arena
            .edges
            .iter()
            .flat_map(|e| e.colour.iter().copied())
            .max()
            .unwrap_or(0)
    }

    fn name(&self, v: usize) -> String {
        let t = &self.arena.tags[v];
        if t.is_empty() {
            format!("v{v}")
        } else {
            t.clone()
        }
    }

    /// Every play with an even least `π2` priority seen infinitely often also
    /// has an even least `π1` one. Decided on strongly connected edge sets.
    pub fn is_good(&self) -> bool {
        self.goodness_violation().is_none()
    }

    /// Two edges on a common cycle of edges with `π2 ≥ m2`, `π1 ≥ m1` hitting
    /// `π2 = m2` even and `π1 = m1` odd.
    pub fn goodness_violation(&self) -> Option<(usize, usize)> {
        let pairs: Vec<(usize, usize)> = self.arena.edges.iter().map(|e| (e.src, e.dst)).collect();
        let d = self.max_priority();
        for m2 in (0..=d).step_by(2) {
            for m1 in (1..=d).step_by(2) {
                let hit = cycle_hitting(
                    self.arena.num_vertices(),
                    &pairs,
                    |e| self.pi(e, 0) >= m1 && self.pi(e, 1) >= m2,
                    |e| self.pi(e, 1) == m2,
                    |e| self.pi(e, 0) == m1,
                );
                if hit.is_some() {
                    return hit;
                }
            }
        }
        None
    }

    /// Winner from the initial vertex, through the Zielonka tree of the
    /// implication condition.
    pub fn winner(&self) -> Result<Player> {
        let d = self.max_priority().max(1);
        let tree = implication_tree((0, d), (0, d))?;
        let p = muller_to_parity_from(&self.arena, &tree, &[(self.arena.initial, 0)])?;
        Ok(solve_parity(&p.game)?.winner[p.game.initial])
    }

    /// Splits same-owner edges with a vertex of the other player named
    /// `<src>__<edgeidx>`, and prepends an Adam vertex if the initial vertex
    /// is Eve's.
    pub fn bipartite(&self) -> ImplicationGame {
        let a = &self.arena;
        let mut g = GameArena::new();
        for v in 0..a.num_vertices() {
            g.add_vertex(a.owner[v], self.name(v));
        }
        for (i, e) in a.edges.iter().enumerate() {
            if a.owner[e.src] == a.owner[e.dst] {
                let mid = g.add_vertex(a.owner[e.src].opponent(), format!("{}__{i}", self.name(e.src)));
                g.add_edge(e.src, mid, e.colour.clone());
                g.add_edge(mid, e.dst, e.colour.clone());
            } else {
                g.add_edge(e.src, e.dst, e.colour.clone());
            }
        }
        g.initial = a.initial;
        if a.owner[a.initial] == Player::Eve {
            let d = self.max_priority();
            let u = g.add_vertex(Player::Adam, "__init");
            g.add_edge(u, a.initial, vec![d, d]);
            g.initial = u;
        }
        ImplicationGame { arena: g }
    }

    /// Bipartite form in which every Eve vertex has at least two moves; a
    /// single move is doubled by a parallel edge.
    pub fn prepared(&self) -> ImplicationGame {
        let mut g = if self.is_bipartite() && self.arena.owner[self.arena.initial] == Player::Adam {
            self.clone()
        } else {
            self.bipartite()
        };
        for v in 0..g.arena.num_vertices() {
            if g.arena.owner[v] == Player::Eve && g.arena.out[v].len() == 1 {
                let e = g.arena.edges[g.arena.out[v][0]].clone();
                g.arena.add_edge(e.src, e.dst, e.colour);
            }
        }
        g
    }

    pub fn is_bipartite(&self) -> bool {
        self.arena
            .edges
            .iter()
            .all(|e| self.arena.owner[e.src] != self.arena.owner[e.dst])
    }
}

/// Deterministic `D` and nondeterministic `H` with `H` simulating `D` iff Eve
/// wins the implication game. Both are completed with a rejecting sink.
#[derive(Clone, Debug)]
pub struct SimInstance {
    pub game: ImplicationGame,
    pub d: ParityAutomaton,
    pub h: ParityAutomaton,
}

pub fn implication_to_sim(g: &ImplicationGame) -> Result<SimInstance> {
    let game = g.prepared();
    let a = &game.arena;
    let n = a.num_vertices();
    let dollar = a.edges.len();
    let mut alphabet: Vec<String> = (0..a.edges.len()).map(|e| format!("e{e}")).collect();
    alphabet.push("sep".into());
    let top = game.max_priority();
    let hi = top.max(1);

    // D: u_D for Adam vertices, v_sep and v_D for Eve vertices. The letter
    // `sep` stands for the separator between Eve's rounds.
    let mut states = Vec::new();
    let mut d_of = vec![usize::MAX; n];
    let mut dollar_of = vec![usize::MAX; n];
    for v in 0..n {
        let name = game.name(v);
        if a.owner[v] == Player::Eve {
            dollar_of[v] = states.len();
            states.push(format!("{name}_sep"));
        }
        d_of[v] = states.len();
        states.push(format!("{name}_D"));
    }
    let mut dt = Vec::new();
    for v in 0..n {
        if a.owner[v] == Player::Eve {
            dt.push(Transition {
                src: dollar_of[v],
                letter: dollar,
                prio: top,
                dst: d_of[v],
            });
        }
    }
    for (i, e) in a.edges.iter().enumerate() {
        let dst = if a.owner[e.src] == Player::Adam {
            dollar_of[e.dst]
        } else {
            d_of[e.dst]
        };
        dt.push(Transition {
            src: d_of[e.src],
            letter: i,
            prio: e.colour[0],
            dst,
        });
    }
    let d_states = states.clone();
    let d = ParityAutomaton::new(alphabet.clone(), d_states, d_of[a.initial], dt.clone(), (0, hi))?;

    // H: a copy of D plus u_H, v_H and (v_H, f).
    let mut h_of = vec![usize::MAX; n];
    for v in 0..n {
        h_of[v] = states.len();
        states.push(format!("{}_H", game.name(v)));
    }
    let mut ht = dt;
    for (i, e) in a.edges.iter().enumerate() {
        if a.owner[e.src] == Player::Adam {
            ht.push(Transition {
                src: h_of[e.src],
                letter: i,
                prio: e.colour[1],
                dst: h_of[e.dst],
            });
        }
    }
    for v in (0..n).filter(|&v| a.owner[v] == Player::Eve) {
        for &f in &a.out[v] {
            let chosen = states.len();
            states.push(format!("{}_H@e{f}", game.name(v)));
            ht.push(Transition {
                src: h_of[v],
                letter: dollar,
                prio: top,
                dst: chosen,
            });
            for &f2 in &a.out[v] {
                let e = &a.edges[f2];
                let dst = if f2 == f { h_of[e.dst] } else { d_of[e.dst] };
                ht.push(Transition {
                    src: chosen,
                    letter: f2,
                    prio: e.colour[1],
                    dst,
                });
            }
        }
    }
    let h = ParityAutomaton::new(alphabet, states, h_of[a.initial], ht, (0, hi))?;
    let d = validate_and_complete(&d, CompletionMode::AddRejectingSink)?;
    let h = validate_and_complete(&h, CompletionMode::AddRejectingSink)?;
    Ok(SimInstance { game, d, h })
}

/// A CNF over variables `1..=vars`; literals are signed variable numbers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    pub vars: usize,
    pub terms: Vec<Vec<i32>>,
}

impl CnfFormula {
    pub fn new(vars: usize, terms: Vec<Vec<i32>>) -> Result<Self> {
        for (i, t) in terms.iter().enumerate() {
            if t.is_empty() {
                return Err(Error::Invalid(format!("term {} is empty", i + 1)));
            }
            if let Some(l) = t.iter().find(|&&l| l == 0 || l.unsigned_abs() as usize > vars) {
                return Err(Error::Invalid(format!("literal {l} out of range")));
            }
        }
        Ok(CnfFormula { vars, terms })
    }

    pub fn parse_dimacs(text: &str) -> Result<Self> {
        let mut vars = None;
        let mut terms = Vec::new();
        let mut cur = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
                continue;
            }
            let err = |msg: &str| Error::Parse {
                line: i + 1,
                msg: msg.to_string(),
            };
            if line.starts_with('p') {
                let f: Vec<&str> = line.split_whitespace().collect();
                if f.len() != 4 || f[1] != "cnf" {
                    return Err(err("expected `p cnf <vars> <clauses>`"));
                }
                vars = Some(f[2].parse::<usize>().map_err(|_| err("bad variable count"))?);
                continue;
            }
            for tok in line.split_whitespace() {
                let l: i32 = tok.parse().map_err(|_| err("bad literal"))?;
                if l == 0 {
                    terms.push(std::mem::take(&mut cur));
                } else {
                    cur.push(l);
                }
            }
        }
        if !cur.is_empty() {
            terms.push(cur);
        }
        let vars = vars.ok_or(Error::Parse {
            line: 0,
            msg: "missing problem line".into(),
        })?;
        Self::new(vars, terms)
    }

    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.vars, self.terms.len());
        for t in &self.terms {
            for l in t {
                let _ = write!(s, "{l} ");
            }
            s.push_str("0\n");
        }
        s
    }

    pub fn satisfied_by(&self, assignment: u64) -> bool {
        self.terms.iter().all(|t| {
            t.iter().any(|&l| {
                let v = (assignment >> (l.unsigned_abs() - 1)) & 1 == 1;
                v == (l > 0)
            })
        })
    }

    /// Exhaustive search over all assignments.
    pub fn brute_force_sat(&self) -> bool {
        (0..1u64 << self.vars).any(|a| self.satisfied_by(a))
    }

    pub fn random(seed: u64, vars: usize, terms: usize, max_len: usize) -> CnfFormula {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let terms = (0..terms)
            .map(|_| {
                let len = rng.gen_range(1..=max_len.max(1));
                let mut t: Vec<i32> = (0..len)
                    .map(|_| {
                        let v = rng.gen_range(1..=vars) as i32;
                        if rng.gen_bool(0.5) {
                            v
                        } else {
                            -v
                        }
                    })
                    .collect();
                t.sort_unstable();
                t.dedup();
                t
            })
            .collect();
        CnfFormula { vars, terms }
    }
}

/// Literal vertices `x1..xM, ¬x1..¬xM` for Adam (initial `x1`), one Eve
/// vertex per term.
pub fn sat_to_good_implication(phi: &CnfFormula) -> Result<ImplicationGame> {
    let phi = CnfFormula::new(phi.vars, phi.terms.clone())?;
    if phi.vars == 0 || phi.terms.is_empty() {
        return Err(Error::Invalid("formula needs a variable and a term".into()));
    }
    let m = phi.vars as u32;
    let mut g = GameArena::new();
    let lit = |l: i32| {
        if l > 0 {
            (l - 1) as usize
        } else {
            phi.vars + (-l - 1) as usize
        }
    };
    for j in 1..=phi.vars {
        g.add_vertex(Player::Adam, format!("x{j}"));
    }
    for j in 1..=phi.vars {
        g.add_vertex(Player::Adam, format!("not_x{j}"));
    }
    let terms: Vec<usize> = (0..phi.terms.len())
        .map(|i| g.add_vertex(Player::Eve, format!("t{}", i + 1)))
        .collect();
    for l in 0..2 * phi.vars {
        for &t in &terms {
            g.add_edge(l, t, vec![2 * m, 2 * m]);
        }
    }
    for (i, term) in phi.terms.iter().enumerate() {
        let mut seen = Vec::new();
        for &l in term {
            if seen.contains(&l) {
                continue;
            }
            seen.push(l);
            let j = l.unsigned_abs();
            let colour = if l > 0 {
                vec![2 * j - 2, 2 * j]
            } else {
                vec![2 * j - 1, 2 * j - 1]
            };
            g.add_edge(terms[i], lit(l), colour);
        }
    }
    g.initial = 0;
    ImplicationGame::new(g)
}

/// The five verdicts on a good implication game.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainReport {
    pub eve_wins_game: bool,
    pub h_simulates_d: bool,
    pub h_is_hd: bool,
    pub eve_wins_g1: bool,
    pub eve_wins_g2: bool,
}

impl ChainReport {
    pub fn agree(&self) -> bool {
        let v = self.eve_wins_game;
        [self.h_simulates_d, self.h_is_hd, self.eve_wins_g1, self.eve_wins_g2]
            .iter()
            .all(|&x| x == v)
    }
}

/// Computes all five verdicts and fails on any disagreement. The 2-token
/// verdict uses the rule-built tree, the HD verdict the generic one.
pub fn crosscheck_chain(g: &ImplicationGame) -> Result<ChainReport> {
    if let Some((e1, e2)) = g.goodness_violation() {
        return Err(Error::Precondition(format!(
            "implication game is not good (edges {e1}, {e2})"
        )));
    }
    let inst = implication_to_sim(g)?;
    let h = &inst.h;
    let report = ChainReport {
        eve_wins_game: g.winner()? == Player::Eve,
        h_simulates_d: simulates(h, &inst.d)?,
        h_is_hd: check_hd(h)?.hd,
        eve_wins_g1: eve_wins_g1(h)?,
        eve_wins_g2: build_g2_explicit(h, &[(h.initial, h.initial, h.initial)])?.winner()? == Player::Eve,
    };
    if !report.agree() {
        return Err(Error::Internal(format!("verdict chain disagrees: {report:?}")));
    }
    Ok(report)
}

/// Random implication game on `n` vertices with priorities in `[0, d]` and
/// out-degree between 1 and 2.
pub fn random_implication_game(seed: u64, n: usize, d: u32) -> Result<ImplicationGame> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = GameArena::new();
    for v in 0..n {
        let o = if rng.gen_bool(0.5) { Player::Eve } else { Player::Adam };
        g.add_vertex(o, format!("v{v}"));
    }
    for v in 0..n {
        for _ in 0..rng.gen_range(1..=2) {
            let t = rng.gen_range(0..n);
            g.add_edge(v, t, vec![rng.gen_range(0..=d), rng.gen_range(0..=d)]);
        }
    }
    g.initial = 0;
    ImplicationGame::new(g)
}
