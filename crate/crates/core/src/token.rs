//! Token games, simulation, Joker and lookahead games on parity automata, and
//! subautomaton extraction from winning strategies.
//!
//! Every round of a token arena emits exactly one coloured edge; all other
//! edges are neutral. Eve's component comes first in token games, while
//! simulation and Joker arenas use `(Adam, Eve)` implication colours.

use std::collections::{HashMap, VecDeque};
use std::sync::{Arc, Mutex, OnceLock};

use fixedbitset::FixedBitSet;

use crate::automaton::{delay, weak_coreachability, ParityAutomaton};
use crate::error::{pre, Error, Result};
use crate::game::{muller_to_parity_from, solve_parity, GameArena, ParityGame, Player, Product, Solution};
use crate::zielonka::{build_2token_condition, build_tree, implication_condition, token_condition, ZielonkaTree};

/// Default bound on the number of Adam tokens.
pub const DEFAULT_K_CAP: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Sim,
    G1,
    Gk(usize),
    Joker,
    Lookahead(usize),
    G2Explicit,
    G1Buchi,
}

/// A move of one of Adam's tokens.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdamMove {
    Own(usize),
    Joker(usize),
}

/// What an arena edge does.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Move {
    Letter(usize),
    Eve(usize),
    Adam(Vec<AdamMove>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum TreeKey {
    Token([(u32, u32); 4], usize),
    Implication((u32, u32), (u32, u32)),
    TwoToken(u32),
}

fn cached_tree(key: TreeKey) -> Result<Arc<ZielonkaTree>> {
    static CACHE: OnceLock<Mutex<HashMap<TreeKey, Arc<ZielonkaTree>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().unwrap().get(&key) {
        return Ok(t.clone());
    }
    let tree = match key {
        TreeKey::Token(r, len) => build_tree(&token_condition(&r[..len]))?,
        TreeKey::Implication(r1, r2) => build_tree(&implication_condition(r1, r2))?,
        TreeKey::TwoToken(d) => build_2token_condition(d)?.1,
    };
    let tree = Arc::new(tree);
    cache.lock().unwrap().insert(key, tree.clone());
    Ok(tree)
}

/// Zielonka tree of the token condition over the given ranges.
pub fn token_tree(ranges: &[(u32, u32)]) -> Result<Arc<ZielonkaTree>> {
    if ranges.len() > 4 {
        return Err(Error::Invalid("at most three Adam tokens are supported".into()));
    }
    let mut r = [(0, 0); 4];
    r[..ranges.len()].copy_from_slice(ranges);
    cached_tree(TreeKey::Token(r, ranges.len()))
}

pub fn implication_tree(r1: (u32, u32), r2: (u32, u32)) -> Result<Arc<ZielonkaTree>> {
    cached_tree(TreeKey::Implication(r1, r2))
}

/// A token-game arena with the tree of its winning condition.
#[derive(Clone, Debug)]
pub struct TokenGame {
    pub kind: Kind,
    pub arena: GameArena,
    pub tree: Arc<ZielonkaTree>,
    pub moves: Vec<Move>,
    /// Round-start vertex of each token tuple, Eve's token first.
    pub round: HashMap<Vec<usize>, usize>,
    /// Round-start vertices of the requested starts, in request order.
    pub starts: Vec<usize>,
}

/// Solved token game.
#[derive(Clone, Debug)]
pub struct TokenSolution {
    pub product: Product,
    pub solution: Solution,
    /// Winner from each requested start.
    pub winners: Vec<Player>,
}

impl TokenSolution {
    pub fn eve_wins_all(&self) -> bool {
        self.winners.iter().all(|&w| w == Player::Eve)
    }
}

impl TokenGame {
    pub fn solve(&self) -> Result<TokenSolution> {
        let starts: Vec<(usize, usize)> = self.starts.iter().map(|&v| (v, 0)).collect();
        let product = muller_to_parity_from(&self.arena, &self.tree, &starts)?;
        let solution = solve_parity(&product.game)?;
        let winners = self
            .starts
            .iter()
            .map(|&v| solution.winner[product.lookup(v, 0).expect("start in product")])
            .collect();
        Ok(TokenSolution {
            product,
            solution,
            winners,
        })
    }

    pub fn winner(&self) -> Result<Player> {
        Ok(self.solve()?.winners[0])
    }

    /// Eve transitions used in plays from the first start that follow Eve's
    /// winning strategy, with Adam restricted by `adam_ok(eve transition, moves)`.
    pub fn used_eve_transitions(
        &self,
        sol: &TokenSolution,
        adam_ok: impl Fn(usize, &[AdamMove]) -> bool,
    ) -> Result<Vec<usize>> {
        let g = &sol.product.game;
        let start = sol.product.lookup(self.starts[0], 0).expect("start in product");
        if sol.solution.winner[start] != Player::Eve {
            return pre("Eve does not win the game");
        }
        let mut chosen: Vec<Option<usize>> = vec![None; self.arena.num_vertices()];
        for (e, mv) in self.moves.iter().enumerate() {
            if let Move::Eve(t) = mv {
                chosen[self.arena.edges[e].dst] = Some(*t);
            }
        }
        let mut used = Vec::new();
        let mut seen = FixedBitSet::with_capacity(g.num_vertices());
        let mut queue = VecDeque::from([start]);
        seen.insert(start);
        while let Some(v) = queue.pop_front() {
            let edges: Vec<usize> = if g.owner[v] == Player::Eve {
                vec![sol.solution.strategy[v].expect("Eve wins here")]
            } else {
                g.out[v].clone()
            };
            for e in edges {
                let ae = sol.product.arena_edge[e];
                match &self.moves[ae] {
                    Move::Eve(t) => used.push(*t),
                    Move::Adam(ms) => {
                        let m = sol.product.vertex[v].0;
                        if let Some(t) = chosen[m] {
                            if !adam_ok(t, ms) {
                                continue;
                            }
                        }
                    }
                    Move::Letter(_) => {}
                }
                let w = g.edges[e].1;
                if !seen.put(w) {
                    queue.push_back(w);
                }
            }
        }
        used.sort_unstable();
        used.dedup();
        Ok(used)
    }
}

fn same_alphabet(a: &ParityAutomaton, b: &ParityAutomaton) -> Result<()> {
    if a.alphabet != b.alphabet {
        return Err(Error::Alphabet(format!("{:?} vs {:?}", a.alphabet, b.alphabet)));
    }
    Ok(())
}

fn need_complete(a: &ParityAutomaton) -> Result<()> {
    if !a.is_complete() {
        return pre("automaton must be complete");
    }
    Ok(())
}

#[derive(Hash, PartialEq, Eq, Clone)]
enum Key {
    Round(Vec<usize>),
    Letter(Vec<usize>, usize),
    Chosen(usize, Vec<usize>),
    Won,
}

struct Builder {
    arena: GameArena,
    moves: Vec<Move>,
    ids: HashMap<Key, usize>,
    queue: VecDeque<Key>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            arena: GameArena::new(),
            moves: Vec::new(),
            ids: HashMap::new(),
            queue: VecDeque::new(),
        }
    }

    fn vertex(&mut self, key: Key, owner: Player) -> usize {
        if let Some(&v) = self.ids.get(&key) {
            return v;
        }
        let v = self.arena.add_vertex(owner, String::new());
        self.ids.insert(key.clone(), v);
        self.queue.push_back(key);
        v
    }

    fn edge(&mut self, s: usize, t: usize, colour: Vec<u32>, mv: Move) {
        self.arena.add_edge(s, t, colour);
        self.moves.push(mv);
    }

    fn finish(self, kind: Kind, tree: Arc<ZielonkaTree>, starts: &[Vec<usize>]) -> TokenGame {
        let round: HashMap<Vec<usize>, usize> = self
            .ids
            .iter()
            .filter_map(|(k, &v)| match k {
                Key::Round(t) => Some((t.clone(), v)),
                _ => None,
            })
            .collect();
        let starts: Vec<usize> = starts.iter().map(|s| round[s]).collect();
        let mut arena = self.arena;
        arena.initial = starts.first().copied().unwrap_or(0);
        TokenGame {
            kind,
            arena,
            tree,
            moves: self.moves,
            round,
            starts,
        }
    }
}

type AdamOptions<'a> = dyn Fn(usize, &[usize]) -> Vec<(Vec<AdamMove>, Vec<usize>, Vec<u32>)> + 'a;

/// Dominated moves in k-token games: a token entering a state with an empty
/// language is never better for its owner than a live alternative, and a
/// letter sending every Adam token into such states is won by Eve.
struct Prune {
    eve_live: Vec<bool>,
    adam_live: Vec<Vec<bool>>,
    adam_tables: Vec<Vec<Vec<Vec<usize>>>>,
    adam_dst: Vec<Vec<usize>>,
    /// Colour of the loop on the shared Eve-won vertex.
    win: Vec<u32>,
}

impl Prune {
    fn dead_letter(&self, advs: &[usize], l: usize) -> bool {
        advs.iter().enumerate().all(|(i, &p)| {
            self.adam_tables[i][p][l]
                .iter()
                .all(|&t| !self.adam_live[i][self.adam_dst[i][t]])
        })
    }
}

/// Rounds where Adam picks a letter, Eve moves, then Adam moves all his tokens.
fn eve_first_rounds(
    eve: &ParityAutomaton,
    starts: &[Vec<usize>],
    adam: &AdamOptions<'_>,
    eve_colour: impl Fn(u32) -> u32,
    prune: Option<&Prune>,
) -> Builder {
    let table = eve.out_table();
    let mut b = Builder::new();
    for s in starts {
        b.vertex(Key::Round(s.clone()), Player::Adam);
    }
    while let Some(key) = b.queue.pop_front() {
        let v = b.ids[&key];
        match key {
            Key::Round(tokens) => {
                let mut dead_seen = false;
                for l in 0..eve.num_letters() {
                    if let Some(p) = prune.filter(|p| p.dead_letter(&tokens[1..], l)) {
                        if !dead_seen {
                            dead_seen = true;
                            let w = b.vertex(Key::Won, Player::Adam);
                            b.edge(v, w, Vec::new(), Move::Letter(l));
                            if b.arena.out[w].is_empty() {
                                b.edge(w, w, p.win.clone(), Move::Letter(l));
                            }
                        }
                        continue;
                    }
                    let w = b.vertex(Key::Letter(tokens.clone(), l), Player::Eve);
                    b.edge(v, w, Vec::new(), Move::Letter(l));
                }
            }
            Key::Letter(tokens, l) => {
                let mut options = table[tokens[0]][l].clone();
                if let Some(p) = prune {
                    if options.iter().any(|&t| p.eve_live[eve.transitions[t].dst]) {
                        options.retain(|&t| p.eve_live[eve.transitions[t].dst]);
                    }
                }
                for t in options {
                    let w = b.vertex(Key::Chosen(t, tokens[1..].to_vec()), Player::Adam);
                    b.edge(v, w, Vec::new(), Move::Eve(t));
                }
            }
            Key::Won => {}
            Key::Chosen(t, advs) => {
                let tr = eve.transitions[t];
                for (ms, next, mut colour) in adam(t, &advs) {
                    colour.insert(0, eve_colour(tr.prio));
                    let mut tokens = vec![tr.dst];
                    tokens.extend(next);
                    let w = b.vertex(Key::Round(tokens), Player::Adam);
                    b.edge(v, w, colour, Move::Adam(ms));
                }
            }
        }
    }
    b
}

/// Every combination of one transition per Adam token on a letter, without
/// moves into empty-language states when a live move exists.
fn combos(
    adams: &[&ParityAutomaton],
    prune: &Prune,
    letter: usize,
    at: &[usize],
) -> Vec<(Vec<AdamMove>, Vec<usize>, Vec<u32>)> {
    let mut out: Vec<(Vec<AdamMove>, Vec<usize>, Vec<u32>)> = vec![(Vec::new(), Vec::new(), Vec::new())];
    for (i, a) in adams.iter().enumerate() {
        let mut options = prune.adam_tables[i][at[i]][letter].clone();
        let live = &prune.adam_live[i];
        if options.iter().any(|&t| live[a.transitions[t].dst]) {
            options.retain(|&t| live[a.transitions[t].dst]);
        }
        let mut next = Vec::new();
        for (ms, ps, cs) in &out {
            for &t in &options {
                let tr = a.transitions[t];
                let (mut ms, mut ps, mut cs) = (ms.clone(), ps.clone(), cs.clone());
                ms.push(AdamMove::Own(t));
                ps.push(tr.dst);
                cs.push(tr.prio);
                next.push((ms, ps, cs));
            }
        }
        out = next;
    }
    out
}

/// `Gk(A; B_1..B_k)` from the given `(q; p_1..p_k)` tuples.
pub fn build_gk(eve: &ParityAutomaton, adams: &[&ParityAutomaton], starts: &[Vec<usize>]) -> Result<TokenGame> {
    build_gk_capped(eve, adams, starts, DEFAULT_K_CAP)
}

pub fn build_gk_capped(
    eve: &ParityAutomaton,
    adams: &[&ParityAutomaton],
    starts: &[Vec<usize>],
    cap: usize,
) -> Result<TokenGame> {
    let k = adams.len();
    if k == 0 {
        return pre("need at least one Adam token");
    }
    if k > cap {
        return Err(Error::Precondition(format!("k = {k} exceeds the token cap")));
    }
    need_complete(eve)?;
    for a in adams {
        same_alphabet(eve, a)?;
        need_complete(a)?;
    }
    check_starts(starts, k + 1, |i| {
        if i == 0 {
            eve.num_states()
        } else {
            adams[i - 1].num_states()
        }
    })?;
    let mut ranges = vec![(eve.lo, eve.hi)];
    ranges.extend(adams.iter().map(|a| (a.lo, a.hi)));
    let tree = token_tree(&ranges)?;
    let win = (0..tree.colours.len())
        .find(|&c| tree.singleton_accepting(c))
        .map(|c| tree.colours[c].clone())
        .ok_or_else(|| Error::Internal("token condition accepts no single colour".into()))?;
    let prune = Prune {
        eve_live: eve.nonempty_states(),
        adam_live: adams.iter().map(|a| a.nonempty_states()).collect(),
        adam_tables: adams.iter().map(|a| a.out_table()).collect(),
        adam_dst: adams
            .iter()
            .map(|a| a.transitions.iter().map(|t| t.dst).collect())
            .collect(),
        win,
    };
    let adam = |t: usize, at: &[usize]| combos(adams, &prune, eve.transitions[t].letter, at);
    let b = eve_first_rounds(eve, starts, &adam, |c| c, Some(&prune));
    let kind = if k == 1 { Kind::G1 } else { Kind::Gk(k) };
    Ok(b.finish(kind, tree, starts))
}

fn check_starts(starts: &[Vec<usize>], len: usize, bound: impl Fn(usize) -> usize) -> Result<()> {
    if starts.is_empty() {
        return Err(Error::Invalid("no start tuple given".into()));
    }
    for s in starts {
        if s.len() != len || s.iter().enumerate().any(|(i, &q)| q >= bound(i)) {
            return Err(Error::Invalid(format!("bad start tuple {s:?}")));
        }
    }
    Ok(())
}

/// `G1(A; B)` from `(q; p)` pairs.
pub fn build_g1(eve: &ParityAutomaton, adam: &ParityAutomaton, starts: &[(usize, usize)]) -> Result<TokenGame> {
    let s: Vec<Vec<usize>> = starts.iter().map(|&(q, p)| vec![q, p]).collect();
    build_gk(eve, &[adam], &s)
}

/// Joker game on `A`. Priorities are shifted up by two and Joker moves get
/// Adam-priority 1; colours are `(Adam, Eve)`.
pub fn build_joker(a: &ParityAutomaton, starts: &[(usize, usize)]) -> Result<TokenGame> {
    need_complete(a)?;
    let s: Vec<Vec<usize>> = starts.iter().map(|&(q, p)| vec![q, p]).collect();
    check_starts(&s, 2, |_| a.num_states())?;
    let table = a.out_table();
    let adam = |t: usize, at: &[usize]| {
        let tr = a.transitions[t];
        let mut opts = Vec::new();
        for &u in &table[at[0]][tr.letter] {
            let ut = a.transitions[u];
            opts.push((vec![AdamMove::Own(u)], vec![ut.dst], vec![ut.prio + 2]));
        }
        for &u in &table[tr.src][tr.letter] {
            opts.push((vec![AdamMove::Joker(u)], vec![a.transitions[u].dst], vec![1]));
        }
        opts
    };
    let mut b = eve_first_rounds(a, &s, &adam, |c| c + 2, None);
    // Reorder colours to (Adam, Eve).
    for e in &mut b.arena.edges {
        if e.colour.len() == 2 {
            e.colour.swap(0, 1);
        }
    }
    let tree = implication_tree((1, a.hi + 2), (a.lo + 2, a.hi + 2))?;
    Ok(b.finish(Kind::Joker, tree, &s))
}

/// Simulation game of `adam` by `eve` (Eve wins iff `eve` simulates `adam`),
/// from `(eve state, adam state)` pairs. Colours are `(Adam, Eve)`.
pub fn build_sim(eve: &ParityAutomaton, adam: &ParityAutomaton, starts: &[(usize, usize)]) -> Result<TokenGame> {
    same_alphabet(eve, adam)?;
    need_complete(eve)?;
    need_complete(adam)?;
    let s: Vec<Vec<usize>> = starts.iter().map(|&(q, p)| vec![q, p]).collect();
    check_starts(&s, 2, |i| if i == 0 { eve.num_states() } else { adam.num_states() })?;
    let etable = eve.out_table();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); adam.num_states()];
    for (i, t) in adam.transitions.iter().enumerate() {
        out[t.src].push(i);
    }
    let mut b = Builder::new();
    for x in &s {
        b.vertex(Key::Round(x.clone()), Player::Adam);
    }
    while let Some(key) = b.queue.pop_front() {
        let v = b.ids[&key];
        match key {
            Key::Round(tokens) => {
                for &t in &out[tokens[1]] {
                    let w = b.vertex(Key::Chosen(t, vec![tokens[0]]), Player::Eve);
                    b.edge(v, w, Vec::new(), Move::Adam(vec![AdamMove::Own(t)]));
                }
            }
            Key::Chosen(t, q) => {
                let at = adam.transitions[t];
                for &u in &etable[q[0]][at.letter] {
                    let et = eve.transitions[u];
                    let w = b.vertex(Key::Round(vec![et.dst, at.dst]), Player::Adam);
                    b.edge(v, w, vec![at.prio, et.prio], Move::Eve(u));
                }
            }
            Key::Letter(..) | Key::Won => unreachable!(),
        }
    }
    let tree = implication_tree((adam.lo, adam.hi), (eve.lo, eve.hi))?;
    Ok(b.finish(Kind::Sim, tree, &s))
}

/// True iff `big` simulates `small` from their initial states.
pub fn simulates(big: &ParityAutomaton, small: &ParityAutomaton) -> Result<bool> {
    Ok(build_sim(big, small, &[(big.initial, small.initial)])?.winner()? == Player::Eve)
}

/// k-lookahead game: `G1(A; Delay^k(A))`.
pub fn build_lookahead(a: &ParityAutomaton, k: usize) -> Result<TokenGame> {
    let d = delay(a, k);
    let mut g = build_g1(a, &d, &[(a.initial, d.initial)])?;
    g.kind = Kind::Lookahead(k);
    Ok(g)
}

/// The explicit 2-token game: the arena of `G2(A)` over weakly coreachable
/// triples, with colours in `[0,K]³` for `K = max(hi, 1)`. An index `[1,K]`
/// is read as its superset `[0,K]`.
pub fn build_g2_explicit(a: &ParityAutomaton, starts: &[(usize, usize, usize)]) -> Result<TokenGame> {
    let wcr = weak_coreachability(a);
    for &(q, p, r) in starts {
        if !(wcr.same_class(q, p) && wcr.same_class(q, r)) {
            return pre(format!("start ({q};{p},{r}) is not weakly coreachable"));
        }
    }
    let s: Vec<Vec<usize>> = starts.iter().map(|&(q, p, r)| vec![q, p, r]).collect();
    let mut g = build_gk(a, &[a, a], &s)?;
    g.tree = cached_tree(TreeKey::TwoToken(a.hi.max(1)))?;
    g.kind = Kind::G2Explicit;
    Ok(g)
}

/// Eve wins `G2(A)` from `(q0; q0, q0)`.
pub fn eve_wins_g2(a: &ParityAutomaton) -> Result<bool> {
    let q = a.initial;
    Ok(build_gk(a, &[a, a], &[vec![q, q, q]])?.winner()? == Player::Eve)
}

pub fn eve_wins_g1(a: &ParityAutomaton) -> Result<bool> {
    let q = a.initial;
    Ok(build_g1(a, a, &[(q, q)])?.winner()? == Player::Eve)
}

pub fn eve_wins_joker(a: &ParityAutomaton) -> Result<bool> {
    let q = a.initial;
    Ok(build_joker(a, &[(q, q)])?.winner()? == Player::Eve)
}

pub fn eve_wins_gk(a: &ParityAutomaton, k: usize) -> Result<bool> {
    let q = a.initial;
    let adams = vec![a; k];
    Ok(build_gk(a, &adams, &[vec![q; k + 1]])?.winner()? == Player::Eve)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Everywhere {
    G1,
    G2,
}

/// Per-tuple verdicts over all weakly coreachable pairs or triples.
#[derive(Clone, Debug)]
pub struct EverywhereReport {
    pub holds: bool,
    pub verdicts: Vec<(Vec<usize>, Player)>,
}

pub fn wins_everywhere(a: &ParityAutomaton, kind: Everywhere) -> Result<EverywhereReport> {
    need_complete(a)?;
    let wcr = weak_coreachability(a);
    let starts: Vec<Vec<usize>> = match kind {
        Everywhere::G1 => wcr.pairs().into_iter().map(|(q, p)| vec![q, p]).collect(),
        Everywhere::G2 => wcr.triples().into_iter().map(|(q, p, r)| vec![q, p, r]).collect(),
    };
    let adams = match kind {
        Everywhere::G1 => vec![a],
        Everywhere::G2 => vec![a, a],
    };
    let g = build_gk(a, &adams, &starts)?;
    let sol = g.solve()?;
    let verdicts: Vec<(Vec<usize>, Player)> = starts.into_iter().zip(sol.winners.iter().copied()).collect();
    Ok(EverywhereReport {
        holds: verdicts.iter().all(|v| v.1 == Player::Eve),
        verdicts,
    })
}

/// The Büchi 1-token arena: priority 2 on letter moves, 0/2 on Eve moves and
/// 1/2 on Adam moves. A player without a move loses by a self-loop.
#[derive(Clone, Debug)]
pub struct BuchiG1 {
    pub game: ParityGame,
    /// Round-start vertex of each pair `(q, p)`.
    pub pair: HashMap<(usize, usize), usize>,
    /// Eve's choice vertex `(q, a, p)`.
    pub choice: HashMap<(usize, usize, usize), usize>,
    /// Automaton transition behind each Eve or Adam edge.
    pub transition: Vec<Option<usize>>,
}

impl BuchiG1 {
    /// Eve's winning region among round-start pairs.
    pub fn winning_pairs(&self, sol: &Solution) -> HashMap<(usize, usize), bool> {
        self.pair
            .iter()
            .map(|(&k, &v)| (k, sol.winner[v] == Player::Eve))
            .collect()
    }
}

/// The Büchi 1-token arena over all weakly coreachable pairs.
pub fn build_g1_buchi(a: &ParityAutomaton) -> Result<BuchiG1> {
    let pairs = weak_coreachability(a).pairs();
    build_g1_buchi_from(a, &pairs)
}

/// The Büchi 1-token arena on the pairs reachable from `starts`.
pub fn build_g1_buchi_from(a: &ParityAutomaton, starts: &[(usize, usize)]) -> Result<BuchiG1> {
    if a.hi > 1 {
        return pre(format!(
            "Büchi arena needs priorities in [0,1], got [{},{}]",
            a.lo, a.hi
        ));
    }
    let table = a.out_table();
    let m = a.num_letters();
    let mut owner: Vec<Player> = Vec::new();
    let mut edges: Vec<(usize, usize, u32, Option<usize>)> = Vec::new();
    let mut pair: HashMap<(usize, usize), usize> = HashMap::new();
    let mut choice = HashMap::new();
    let mut third: HashMap<(usize, usize, usize), usize> = HashMap::new();
    let mut queue: VecDeque<(usize, usize)> = VecDeque::new();
    let mut new_pair = |k: (usize, usize), owner: &mut Vec<Player>, queue: &mut VecDeque<(usize, usize)>| {
        *pair.entry(k).or_insert_with(|| {
            owner.push(Player::Adam);
            queue.push_back(k);
            owner.len() - 1
        })
    };
    for &s in starts {
        new_pair(s, &mut owner, &mut queue);
    }
    while let Some((q, p)) = queue.pop_front() {
        let v1 = new_pair((q, p), &mut owner, &mut queue);
        for l in 0..m {
            owner.push(Player::Eve);
            let v2 = owner.len() - 1;
            choice.insert((q, l, p), v2);
            edges.push((v1, v2, 2, None));
            if table[q][l].is_empty() {
                edges.push((v2, v2, 1, None));
            }
            for &t in &table[q][l] {
                let q2 = a.transitions[t].dst;
                let (v3, fresh) = match third.get(&(q2, p, l)) {
                    Some(&v) => (v, false),
                    None => {
                        owner.push(Player::Adam);
                        third.insert((q2, p, l), owner.len() - 1);
                        (owner.len() - 1, true)
                    }
                };
                edges.push((v2, v3, if a.transitions[t].prio == 0 { 0 } else { 2 }, Some(t)));
                if fresh {
                    if table[p][l].is_empty() {
                        edges.push((v3, v3, 0, None));
                    }
                    for &u in &table[p][l] {
                        let ut = a.transitions[u];
                        let v4 = new_pair((q2, ut.dst), &mut owner, &mut queue);
                        edges.push((v3, v4, if ut.prio == 0 { 1 } else { 2 }, Some(u)));
                    }
                }
            }
        }
    }
    let mut game = ParityGame::new(owner);
    let mut transition = Vec::with_capacity(edges.len());
    for (s, t, p, tr) in edges {
        game.add_edge(s, t, p);
        transition.push(tr);
    }
    game.initial = starts.first().map(|s| pair[s]).unwrap_or(0);
    Ok(BuchiG1 {
        game,
        pair,
        choice,
        transition,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtractMode {
    TheoremI,
    Joker,
}

/// Subautomaton of transitions used by Eve's winning strategy, trimmed to its
/// reachable part and validated (simulation equivalence, plus G2 or G1 from
/// everywhere depending on the mode).
pub fn extract_subautomaton(a: &ParityAutomaton, mode: ExtractMode) -> Result<ParityAutomaton> {
    need_complete(a)?;
    let q = a.initial;
    let used = match mode {
        ExtractMode::TheoremI => {
            let g = build_gk(a, &[a, a, a], &[vec![q, q, q, q]])?;
            let sol = g.solve()?;
            if !sol.eve_wins_all() {
                return pre("Eve loses the 2-token game");
            }
            g.used_eve_transitions(&sol, |t, ms| ms[2] == AdamMove::Own(t))?
        }
        ExtractMode::Joker => {
            let g = build_joker(a, &[(q, q)])?;
            let sol = g.solve()?;
            if !sol.eve_wins_all() {
                return pre("Eve loses the Joker game");
            }
            g.used_eve_transitions(&sol, |_, _| true)?
        }
    };
    let b = a
        .with_transitions(fill_dead_letters(a, used)?.iter().map(|&t| a.transitions[t]).collect())
        .trim();
    if !b.is_complete() {
        return Err(Error::Internal("extracted subautomaton is incomplete".into()));
    }
    if !(simulates(a, &b)? && simulates(&b, a)?) {
        return Err(Error::Internal(
            "extracted subautomaton is not simulation-equivalent".into(),
        ));
    }
    let every = match mode {
        ExtractMode::TheoremI => Everywhere::G2,
        ExtractMode::Joker => Everywhere::G1,
    };
    if !wins_everywhere(&b, every)?.holds {
        return Err(Error::Internal(
            "extracted subautomaton fails the everywhere check".into(),
        ));
    }
    Ok(b)
}

/// Pruned arenas skip letters on which every successor has an empty
/// language, so no transition is recorded there. Any transition will do.
fn fill_dead_letters(a: &ParityAutomaton, mut used: Vec<usize>) -> Result<Vec<usize>> {
    let live = a.nonempty_states();
    let table = a.out_table();
    loop {
        let sub = a.with_transitions(used.iter().map(|&t| a.transitions[t]).collect());
        let reach = sub.reachable_states();
        let have = sub.out_table();
        let mut added = false;
        for q in (0..a.num_states()).filter(|&q| reach[q]) {
            for l in 0..a.num_letters() {
                if !have[q][l].is_empty() || table[q][l].is_empty() {
                    continue;
                }
                if table[q][l].iter().any(|&t| live[a.transitions[t].dst]) {
                    return Err(Error::Internal(format!(
                        "no strategy transition from {} on {}",
                        a.states[q], a.alphabet[l]
                    )));
                }
                used.push(table[q][l][0]);
                added = true;
            }
        }
        if !added {
            used.sort_unstable();
            return Ok(used);
        }
    }
}
