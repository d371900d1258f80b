//! Game arenas, parity games, and their solution.
//!
//! Parity games carry priorities on edges and use the min-even condition.
//! [`solve_parity`] runs the recursive attractor algorithm on the game
//! obtained by subdividing every edge.

use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::graph::{exists_cycle_min_parity, scc_ids};
use crate::zielonka::{StepTable, ZielonkaTree};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Player {
    Eve,
    Adam,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Eve => Player::Adam,
            Player::Adam => Player::Eve,
        }
    }

    /// The player favoured by a priority.
    pub fn of_priority(p: u32) -> Player {
        if p % 2 == 0 {
            Player::Eve
        } else {
            Player::Adam
        }
    }

    fn parity(self) -> u32 {
        match self {
            Player::Eve => 0,
            Player::Adam => 1,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Eve => "Eve",
            Player::Adam => "Adam",
        })
    }
}

/// Edge of an arena. An empty colour marks a neutral edge that does not
/// contribute to the winning condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArenaEdge {
    pub src: usize,
    pub dst: usize,
    pub colour: Vec<u32>,
}

#[derive(Clone, Debug, Default)]
pub struct GameArena {
    pub owner: Vec<Player>,
    pub tags: Vec<String>,
    pub edges: Vec<ArenaEdge>,
    pub out: Vec<Vec<usize>>,
    pub initial: usize,
}

impl GameArena {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, owner: Player, tag: impl Into<String>) -> usize {
        self.owner.push(owner);
        self.tags.push(tag.into());
        self.out.push(Vec::new());
        self.owner.len() - 1
    }

    pub fn add_edge(&mut self, src: usize, dst: usize, colour: Vec<u32>) -> usize {
        self.edges.push(ArenaEdge { src, dst, colour });
        self.out[src].push(self.edges.len() - 1);
        self.edges.len() - 1
    }

    pub fn num_vertices(&self) -> usize {
        self.owner.len()
    }

    pub fn check(&self) -> Result<()> {
        match (0..self.num_vertices()).find(|&v| self.out[v].is_empty()) {
            Some(v) => Err(Error::Invalid(format!("vertex {v} has no outgoing edge"))),
            None => Ok(()),
        }
    }

    /// `vertex <id> <Eve|Adam>`, `edge <src> <dst> <c1>[,<c2>...]` (or `-` for
    /// a neutral edge) and `initial <id>` lines.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (v, o) in self.owner.iter().enumerate() {
            s.push_str(&format!("vertex {v} {o}\n"));
        }
        for e in &self.edges {
            let c = if e.colour.is_empty() {
                "-".to_string()
            } else {
                e.colour.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
            };
            s.push_str(&format!("edge {} {} {}\n", e.src, e.dst, c));
        }
        s.push_str(&format!("initial {}\n", self.initial));
        s
    }

    pub fn parse(text: &str) -> Result<GameArena> {
        let mut g = GameArena::new();
        let mut pending = Vec::new();
        let mut initial = None;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| Error::Parse {
                line: i + 1,
                msg: msg.to_string(),
            };
            let f: Vec<&str> = line.split_whitespace().collect();
            let num = |s: &str| s.parse::<usize>().map_err(|_| err("expected a number"));
            match f.as_slice() {
                ["vertex", id, who] => {
                    if num(id)? != g.num_vertices() {
                        return Err(err("vertex ids must be consecutive from 0"));
                    }
                    let o = match *who {
                        "Eve" => Player::Eve,
                        "Adam" => Player::Adam,
                        _ => return Err(err("owner must be Eve or Adam")),
                    };
                    g.add_vertex(o, id.to_string());
                }
                ["edge", s, t, c] => {
                    let colour = if *c == "-" {
                        Vec::new()
                    } else {
                        c.split(',')
                            .map(|x| x.parse::<u32>().map_err(|_| err("bad colour")))
                            .collect::<Result<_>>()?
                    };
                    pending.push((num(s)?, num(t)?, colour, i + 1));
                }
                ["initial", v] => initial = Some(num(v)?),
                _ => return Err(err("unrecognised line")),
            }
        }
        let n = g.num_vertices();
        for (s, t, c, line) in pending {
            if s >= n || t >= n {
                return Err(Error::Parse {
                    line,
                    msg: "edge endpoint out of range".into(),
                });
            }
            g.add_edge(s, t, c);
        }
        g.initial = initial.unwrap_or(0);
        if n > 0 && g.initial >= n {
            return Err(Error::Parse {
                line: 0,
                msg: "initial vertex out of range".into(),
            });
        }
        Ok(g)
    }
}

#[derive(Clone, Debug, Default)]
pub struct ParityGame {
    pub owner: Vec<Player>,
    /// `(src, dst, priority)`.
    pub edges: Vec<(usize, usize, u32)>,
    pub out: Vec<Vec<usize>>,
    pub initial: usize,
}

impl ParityGame {
    pub fn new(owner: Vec<Player>) -> Self {
        let out = vec![Vec::new(); owner.len()];
        ParityGame {
            owner,
            edges: Vec::new(),
            out,
            initial: 0,
        }
    }

    pub fn add_edge(&mut self, src: usize, dst: usize, prio: u32) -> usize {
        self.edges.push((src, dst, prio));
        self.out[src].push(self.edges.len() - 1);
        self.edges.len() - 1
    }

    pub fn num_vertices(&self) -> usize {
        self.owner.len()
    }

    pub fn max_priority(&self) -> u32 {
        self.edges.iter().map(|e| e.2).max().unwrap_or(0)
    }

    pub fn check(&self) -> Result<()> {
        match (0..self.num_vertices()).find(|&v| self.out[v].is_empty()) {
            Some(v) => Err(Error::Invalid(format!("vertex {v} has no outgoing edge"))),
            None => Ok(()),
        }
    }

    /// Subgame on `keep`, dropping edges that leave it. Returns the subgame and
    /// the original id of each of its vertices.
    pub fn restrict(&self, keep: &FixedBitSet) -> (ParityGame, Vec<usize>) {
        let old: Vec<usize> = keep.ones().collect();
        let mut new_id = vec![usize::MAX; self.num_vertices()];
        for (i, &v) in old.iter().enumerate() {
            new_id[v] = i;
        }
        let mut g = ParityGame::new(old.iter().map(|&v| self.owner[v]).collect());
        for &(s, t, p) in &self.edges {
            if keep.contains(s) && keep.contains(t) {
                g.add_edge(new_id[s], new_id[t], p);
            }
        }
        if keep.contains(self.initial) {
            g.initial = new_id[self.initial];
        }
        (g, old)
    }

    /// Parity game from an arena whose colours have exactly one component.
    pub fn from_arena(a: &GameArena) -> Result<ParityGame> {
        let mut g = ParityGame::new(a.owner.clone());
        for e in &a.edges {
            match e.colour.as_slice() {
                [p] => g.add_edge(e.src, e.dst, *p),
                _ => return Err(Error::Invalid("parity arena edges need one colour".into())),
            };
        }
        g.initial = a.initial;
        Ok(g)
    }
}

/// Winning regions and positional strategies. `strategy[v]` is an edge index,
/// set exactly on vertices owned by the player winning from them.
#[derive(Clone, Debug)]
pub struct Solution {
    pub winner: Vec<Player>,
    pub strategy: Vec<Option<usize>>,
}

impl Solution {
    pub fn region(&self, p: Player) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.winner.len());
        for (v, &w) in self.winner.iter().enumerate() {
            if w == p {
                s.insert(v);
            }
        }
        s
    }

    /// Strategy of `p`, defined on `p`'s vertices in `p`'s region.
    pub fn strategy_of(&self, g: &ParityGame, p: Player) -> Vec<Option<usize>> {
        (0..g.num_vertices())
            .map(|v| if g.owner[v] == p { self.strategy[v] } else { None })
            .collect()
    }
}

struct Split {
    n: usize,
    owner: Vec<Player>,
    prio: Vec<u32>,
    succ_start: Vec<usize>,
    succ: Vec<usize>,
    pred_start: Vec<usize>,
    pred: Vec<usize>,
    by_prio: Vec<(u32, Vec<usize>)>,
}

impl Split {
    fn new(g: &ParityGame) -> Split {
        let n = g.num_vertices();
        let m = g.edges.len();
        let total = n + m;
        let big = g.max_priority() + 2;
        let mut owner = g.owner.clone();
        owner.extend(std::iter::repeat_n(Player::Eve, m));
        let mut prio = vec![big; n];
        prio.extend(g.edges.iter().map(|e| e.2));
        let mut succ_lists: Vec<Vec<usize>> = g.out.iter().map(|es| es.iter().map(|&e| n + e).collect()).collect();
        succ_lists.extend(g.edges.iter().map(|e| vec![e.1]));
        let (succ_start, succ) = csr(&succ_lists);
        let mut pred_lists = vec![Vec::new(); total];
        for (v, ws) in succ_lists.iter().enumerate() {
            for &w in ws {
                pred_lists[w].push(v);
            }
        }
        let (pred_start, pred) = csr(&pred_lists);
        let mut buckets: HashMap<u32, Vec<usize>> = HashMap::new();
        for (v, &p) in prio.iter().enumerate() {
            buckets.entry(p).or_default().push(v);
        }
        let mut by_prio: Vec<(u32, Vec<usize>)> = buckets.into_iter().collect();
        by_prio.sort_by_key(|b| b.0);
        Split {
            n,
            owner,
            prio,
            succ_start,
            succ,
            pred_start,
            pred,
            by_prio,
        }
    }

    fn succs(&self, v: usize) -> &[usize] {
        &self.succ[self.succ_start[v]..self.succ_start[v + 1]]
    }

    fn preds(&self, v: usize) -> &[usize] {
        &self.pred[self.pred_start[v]..self.pred_start[v + 1]]
    }

    /// Attractor of `target` for `p` inside `alive`; records attracting moves.
    fn attractor(&self, p: Player, target: &FixedBitSet, alive: &FixedBitSet, choice: &mut [usize]) -> FixedBitSet {
        let mut attr = target.clone();
        let mut count: HashMap<usize, usize> = HashMap::new();
        let mut queue: Vec<usize> = target.ones().collect();
        while let Some(v) = queue.pop() {
            for &u in self.preds(v) {
                if !alive.contains(u) || attr.contains(u) {
                    continue;
                }
                if self.owner[u] == p {
                    attr.insert(u);
                    choice[u] = v;
                    queue.push(u);
                } else {
                    let c = count
                        .entry(u)
                        .or_insert_with(|| self.succs(u).iter().filter(|&&w| alive.contains(w)).count());
                    *c -= 1;
                    if *c == 0 {
                        attr.insert(u);
                        queue.push(u);
                    }
                }
            }
        }
        attr
    }

    fn min_priority(&self, alive: &FixedBitSet) -> Option<(u32, FixedBitSet)> {
        for (p, vs) in &self.by_prio {
            let mut set = FixedBitSet::with_capacity(alive.len());
            for &v in vs {
                if alive.contains(v) {
                    set.insert(v);
                }
            }
            if !set.is_clear() {
                return Some((*p, set));
            }
        }
        None
    }

    /// Returns Eve's region within `alive`; writes strategies into `choice`.
    fn solve(&self, alive: &FixedBitSet, choice: &mut [usize]) -> FixedBitSet {
        let mut current = alive.clone();
        let mut eve = FixedBitSet::with_capacity(alive.len());
        loop {
            let Some((p, top)) = self.min_priority(&current) else {
                return eve;
            };
            let alpha = Player::of_priority(p);
            let a = self.attractor(alpha, &top, &current, choice);
            let mut rest = current.clone();
            rest.difference_with(&a);
            let sub_eve = self.solve(&rest, choice);
            let mut sub_beta = rest.clone();
            if alpha == Player::Adam {
                sub_beta.intersect_with(&sub_eve);
            } else {
                sub_beta.difference_with(&sub_eve);
            }
            if sub_beta.is_clear() {
                for v in top.ones() {
                    if self.owner[v] == alpha {
                        choice[v] = *self.succs(v).iter().find(|&&w| current.contains(w)).expect("trap");
                    }
                }
                if alpha == Player::Eve {
                    eve.union_with(&current);
                }
                return eve;
            }
            let b = self.attractor(alpha.opponent(), &sub_beta, &current, choice);
            if alpha == Player::Adam {
                eve.union_with(&b);
            }
            current.difference_with(&b);
        }
    }
}

fn csr(lists: &[Vec<usize>]) -> (Vec<usize>, Vec<usize>) {
    let mut start = Vec::with_capacity(lists.len() + 1);
    let mut flat = Vec::new();
    start.push(0);
    for l in lists {
        flat.extend_from_slice(l);
        start.push(flat.len());
    }
    (start, flat)
}

pub fn solve_parity(g: &ParityGame) -> Result<Solution> {
    g.check()?;
    let split = Split::new(g);
    let total = split.prio.len();
    let mut all = FixedBitSet::with_capacity(total);
    all.insert_range(..);
    let mut choice = vec![usize::MAX; total];
    let eve = split.solve(&all, &mut choice);
    let n = split.n;
    let winner: Vec<Player> = (0..n)
        .map(|v| if eve.contains(v) { Player::Eve } else { Player::Adam })
        .collect();
    let strategy = (0..n)
        .map(|v| {
            if g.owner[v] != winner[v] {
                return None;
            }
            let c = choice[v];
            let e = if c >= n && c < total && g.edges[c - n].0 == v {
                c - n
            } else {
                // Fall back to the lowest edge staying in the region.
                *g.out[v]
                    .iter()
                    .find(|&&e| winner[g.edges[e].1] == winner[v])
                    .expect("winning move")
            };
            Some(e)
        })
        .collect();
    Ok(Solution { winner, strategy })
}

/// Checks that `strategy` wins for `player` from every vertex of `region`:
/// the region is closed under the strategy and all opponent moves, and every
/// cycle of the restricted graph has a minimum of the player's parity.
pub fn verify_strategy(
    g: &ParityGame,
    strategy: &[Option<usize>],
    player: Player,
    region: &FixedBitSet,
) -> Result<bool> {
    let mut kept = Vec::new();
    for v in region.ones() {
        if g.owner[v] == player {
            let Some(e) = strategy.get(v).copied().flatten() else {
                return Err(Error::Invalid(format!("strategy undefined at vertex {v}")));
            };
            let (s, t, p) = g.edges[e];
            if s != v {
                return Err(Error::Invalid(format!("edge {e} does not leave vertex {v}")));
            }
            if !region.contains(t) {
                return Err(Error::Invalid(format!("strategy leaves the region at vertex {v}")));
            }
            kept.push((s, t, p));
        } else {
            for &e in &g.out[v] {
                let (s, t, p) = g.edges[e];
                if !region.contains(t) {
                    return Ok(false);
                }
                kept.push((s, t, p));
            }
        }
    }
    Ok(!exists_cycle_min_parity(
        g.num_vertices(),
        &kept,
        player.opponent().parity(),
    ))
}

/// Ranks and an optimal strategy for Eve.
#[derive(Clone, Debug)]
pub struct RankTable {
    pub rank: Vec<u32>,
    pub strategy: Vec<Option<usize>>,
}

fn rank_step(c: u32, r: u32) -> u32 {
    match c {
        0 => 0,
        1 => r + 1,
        _ => r,
    }
}

/// Ranks of a game won by Eve from every vertex.
pub fn compute_ranks(g: &ParityGame) -> Result<RankTable> {
    let sol = solve_parity(g)?;
    if let Some(v) = sol.winner.iter().position(|&w| w == Player::Adam) {
        return Err(Error::Precondition(format!(
            "Adam wins from vertex {v}; ranks are unbounded"
        )));
    }
    let n = g.num_vertices();
    let mut preds = vec![Vec::new(); n];
    for &(s, t, _) in &g.edges {
        preds[t].push(s);
    }
    let eval = |v: usize, f: &[u32]| -> u32 {
        let vals = g.out[v].iter().map(|&e| rank_step(g.edges[e].2, f[g.edges[e].1]));
        match g.owner[v] {
            Player::Eve => vals.min().unwrap_or(0),
            Player::Adam => vals.max().unwrap_or(0),
        }
    };
    let mut f = vec![0u32; n];
    let mut queue: Vec<usize> = (0..n).collect();
    let mut queued = vec![true; n];
    while let Some(v) = queue.pop() {
        queued[v] = false;
        let nv = eval(v, &f);
        if nv > f[v] {
            if nv as usize > n {
                return Err(Error::Internal(format!("rank of vertex {v} exceeds |V|")));
            }
            f[v] = nv;
            for &u in &preds[v] {
                if !queued[u] {
                    queued[u] = true;
                    queue.push(u);
                }
            }
        }
    }
    // Eve restricted to minimising edges still wins; any winning choice there
    // respects the rank bound.
    let minimising = |e: usize| {
        let (s, t, c) = g.edges[e];
        rank_step(c, f[t]) == f[s]
    };
    let mut restricted = ParityGame::new(g.owner.clone());
    let mut orig = Vec::new();
    for (e, &(s, t, p)) in g.edges.iter().enumerate() {
        if g.owner[s] == Player::Adam || minimising(e) {
            restricted.add_edge(s, t, p);
            orig.push(e);
        }
    }
    let rsol = solve_parity(&restricted)?;
    if rsol.winner.contains(&Player::Adam) {
        return Err(Error::Internal(
            "Eve loses when restricted to rank-minimising moves".into(),
        ));
    }
    let strategy: Vec<Option<usize>> = (0..n)
        .map(|v| {
            if g.owner[v] != Player::Eve {
                return None;
            }
            let zero = g.out[v].iter().copied().find(|&e| g.edges[e].2 == 0 && minimising(e));
            Some(zero.unwrap_or_else(|| orig[rsol.strategy[v].expect("Eve wins")]))
        })
        .collect();
    let mut all = FixedBitSet::with_capacity(n);
    all.insert_range(..);
    if !verify_strategy(g, &strategy, Player::Eve, &all)? {
        return Err(Error::Internal("optimal strategy failed verification".into()));
    }
    Ok(RankTable { rank: f, strategy })
}

/// Parity game obtained as the product of an arena with the parity
/// transducer of a Zielonka tree.
#[derive(Clone, Debug)]
pub struct Product {
    pub game: ParityGame,
    /// `(arena vertex, branch)` of each product vertex.
    pub vertex: Vec<(usize, usize)>,
    /// Arena edge behind each product edge.
    pub arena_edge: Vec<usize>,
    index: HashMap<(usize, usize), usize>,
}

impl Product {
    pub fn lookup(&self, m: usize, branch: usize) -> Option<usize> {
        self.index.get(&(m, branch)).copied()
    }
}

fn colour_indices(arena: &GameArena, tree: &ZielonkaTree) -> Result<Vec<Option<usize>>> {
    let idx: HashMap<&[u32], usize> = tree
        .colours
        .iter()
        .enumerate()
        .map(|(i, c)| (c.as_slice(), i))
        .collect();
    arena
        .edges
        .iter()
        .map(|e| {
            if e.colour.is_empty() {
                Ok(None)
            } else {
                idx.get(e.colour.as_slice())
                    .copied()
                    .map(Some)
                    .ok_or_else(|| Error::Invalid(format!("edge colour {:?} not in C", e.colour)))
            }
        })
        .collect()
}

/// Full product over all arena vertices and all branches; the initial vertex
/// pairs the arena's initial vertex with the leftmost branch.
pub fn muller_to_parity(arena: &GameArena, tree: &ZielonkaTree) -> Result<Product> {
    let starts: Vec<(usize, usize)> = (0..arena.num_vertices())
        .flat_map(|m| (0..tree.num_branches()).map(move |b| (m, b)))
        .collect();
    let mut p = muller_to_parity_from(arena, tree, &starts)?;
    p.game.initial = p.lookup(arena.initial, 0).unwrap_or(0);
    Ok(p)
}

/// Product restricted to the part reachable from `starts`. Neutral edges get
/// priority `max prioritydepth + 1` and keep the branch.
pub fn muller_to_parity_from(arena: &GameArena, tree: &ZielonkaTree, starts: &[(usize, usize)]) -> Result<Product> {
    arena.check()?;
    let cidx = colour_indices(arena, tree)?;
    let table: StepTable = tree.step_table();
    let neutral = tree.max_prioritydepth() + 1;
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut vertex = Vec::new();
    let mut owner = Vec::new();
    let mut stack = Vec::new();
    for &s in starts {
        if s.0 >= arena.num_vertices() || s.1 >= tree.num_branches() {
            return Err(Error::Invalid("product start out of range".into()));
        }
        if let std::collections::hash_map::Entry::Vacant(slot) = index.entry(s) {
            slot.insert(vertex.len());
            vertex.push(s);
            owner.push(arena.owner[s.0]);
            stack.push(s);
        }
    }
    let mut edges = Vec::new();
    let mut arena_edge = Vec::new();
    while let Some((m, b)) = stack.pop() {
        let src = index[&(m, b)];
        for &e in &arena.out[m] {
            let (p, nb) = match cidx[e] {
                None => (neutral, b),
                Some(c) => table.get(b, c),
            };
            let key = (arena.edges[e].dst, nb);
            let dst = *index.entry(key).or_insert_with(|| {
                vertex.push(key);
                owner.push(arena.owner[key.0]);
                stack.push(key);
                vertex.len() - 1
            });
            edges.push((src, dst, p));
            arena_edge.push(e);
        }
    }
    let mut game = ParityGame::new(owner);
    for (s, t, p) in edges {
        game.add_edge(s, t, p);
    }
    game.initial = starts.first().map(|s| index[s]).unwrap_or(0);
    Ok(Product {
        game,
        vertex,
        arena_edge,
        index,
    })
}

/// Solves a Muller arena from its initial vertex via the product.
pub fn solve_muller(arena: &GameArena, tree: &ZielonkaTree) -> Result<Player> {
    let p = muller_to_parity_from(arena, tree, &[(arena.initial, 0)])?;
    let s = solve_parity(&p.game)?;
    Ok(s.winner[p.game.initial])
}

/// Positional-strategy enumeration oracle for small games.
pub fn brute_force_winners(g: &ParityGame) -> Vec<Player> {
    let n = g.num_vertices();
    let eve_vs: Vec<usize> = (0..n).filter(|&v| g.owner[v] == Player::Eve).collect();
    let adam_vs: Vec<usize> = (0..n).filter(|&v| g.owner[v] == Player::Adam).collect();
    let choices = |vs: &[usize]| -> Vec<Vec<usize>> {
        let mut all = vec![vec![]];
        for &v in vs {
            all = all
                .into_iter()
                .flat_map(|c: Vec<usize>| {
                    g.out[v].iter().map(move |&e| {
                        let mut c2 = c.clone();
                        c2.push(e);
                        c2
                    })
                })
                .collect();
        }
        all
    };
    let adam_choices = choices(&adam_vs);
    let eve_choices = choices(&eve_vs);
    // Eve wins from v iff some Eve strategy beats every Adam strategy.
    let mut win = vec![false; n];
    for es in &eve_choices {
        let mut ok = vec![true; n];
        for as_ in &adam_choices {
            let mut succ = vec![0usize; n];
            for (i, &v) in eve_vs.iter().enumerate() {
                succ[v] = es[i];
            }
            for (i, &v) in adam_vs.iter().enumerate() {
                succ[v] = as_[i];
            }
            for v in 0..n {
                if !ok[v] {
                    continue;
                }
                let mut seen = vec![usize::MAX; n];
                let mut path = Vec::new();
                let mut cur = v;
                while seen[cur] == usize::MAX {
                    seen[cur] = path.len();
                    path.push(succ[cur]);
                    cur = g.edges[succ[cur]].1;
                }
                let min = path[seen[cur]..].iter().map(|&e| g.edges[e].2).min().unwrap();
                if min % 2 == 1 {
                    ok[v] = false;
                }
            }
        }
        for v in 0..n {
            win[v] |= ok[v];
        }
    }
    win.into_iter()
        .map(|w| if w { Player::Eve } else { Player::Adam })
        .collect()
}

/// Strongly connected components of a game graph, for diagnostics.
pub fn game_sccs(g: &ParityGame) -> Vec<usize> {
    scc_ids(g.num_vertices(), g.edges.iter().map(|e| (e.0, e.1)))
}
