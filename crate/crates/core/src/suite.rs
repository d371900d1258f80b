//! Seeded property suites shared by the acceptance tests and `hdtk corpus`.
//!
//! Each suite generates its instances from a seed, runs a library routine
//! and an independent oracle on each, and records disagreements.

use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automaton::{
    random_automaton, random_hd_automaton, random_split_automaton, validate_and_complete, CompletionMode,
    ParityAutomaton, RandomParams,
};
use crate::buchi::determinize_hd_buchi;
use crate::error::{Error, Result};
use crate::game::{brute_force_winners, compute_ranks, solve_parity, verify_strategy, ParityGame, Player};
use crate::graph::exists_cycle_min_parity;
use crate::hd::{check_hd, hd_oracle_vs_det, inclusion_hd, inclusion_oracle_det};
use crate::lasso::{lasso_member, LassoWord};
use crate::normal::{classify_states, coverage_check, normalize_even, validate_transformation, CoverageKind};
use crate::reduction::{crosscheck_chain, sat_to_good_implication, CnfFormula};
use crate::token::{
    build_g1, build_lookahead, eve_wins_g1, eve_wins_g2, eve_wins_gk, eve_wins_joker, extract_subautomaton, simulates,
    wins_everywhere, Everywhere, ExtractMode,
};
use crate::zielonka::{build_2token_condition, build_2token_tree_by_rules, build_implication_condition, ZielonkaDag};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Property {
    HdVsDet,
    BuchiDet,
    Zielonka,
    TokenTheorems,
    Extraction,
    Normalize,
    SatChain,
    Solver,
    Inclusion,
}

impl Property {
    pub const ALL: [Property; 9] = [
        Property::HdVsDet,
        Property::BuchiDet,
        Property::Zielonka,
        Property::TokenTheorems,
        Property::Extraction,
        Property::Normalize,
        Property::SatChain,
        Property::Solver,
        Property::Inclusion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::HdVsDet => "hd-vs-det",
            Property::BuchiDet => "buchi-det",
            Property::Zielonka => "zielonka",
            Property::TokenTheorems => "token-theorems",
            Property::Extraction => "extraction",
            Property::Normalize => "normalize",
            Property::SatChain => "sat-chain",
            Property::Solver => "solver",
            Property::Inclusion => "inclusion",
        }
    }

    /// Instance count used when a corpus entry gives none.
    pub fn default_count(self) -> usize {
        match self {
            Property::HdVsDet => 50,
            Property::BuchiDet => 30,
            Property::Zielonka => 6,
            Property::TokenTheorems => 30,
            Property::Extraction => 30,
            Property::Normalize => 20,
            Property::SatChain => 20,
            Property::Solver => 3000,
            Property::Inclusion => 60,
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Property> {
        Property::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown property `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub count: usize,
    /// Upper bound on automaton sizes; suites pick smaller defaults.
    pub max_states: Option<usize>,
}

impl SuiteConfig {
    pub fn new(property: Property, seed: u64) -> Self {
        SuiteConfig {
            seed,
            count: property.default_count(),
            max_states: None,
        }
    }

    fn states(&self, default: usize) -> usize {
        self.max_states.unwrap_or(default).max(1)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuiteReport {
    pub property: String,
    pub checks: usize,
    pub failures: Vec<String>,
    /// Named tallies, e.g. how many instances had each verdict.
    pub tallies: Vec<(String, usize)>,
}

impl SuiteReport {
    fn new(p: Property) -> Self {
        SuiteReport {
            property: p.name().into(),
            ..Default::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn record(&mut self, r: Result<()>, what: impl FnOnce() -> String) {
        self.checks += 1;
        if let Err(e) = r {
            self.failures.push(format!("{}: {e}", what()));
        }
    }

    fn tally(&mut self, key: &str) {
        match self.tallies.iter_mut().find(|t| t.0 == key) {
            Some(t) => t.1 += 1,
            None => self.tallies.push((key.into(), 1)),
        }
    }

    pub fn tally_of(&self, key: &str) -> usize {
        self.tallies.iter().find(|t| t.0 == key).map_or(0, |t| t.1)
    }
}

pub fn run(p: Property, cfg: &SuiteConfig) -> Result<SuiteReport> {
    match p {
        Property::HdVsDet => hd_vs_det(cfg),
        Property::BuchiDet => buchi_det(cfg),
        Property::Zielonka => zielonka(cfg),
        Property::TokenTheorems => token_theorems(cfg),
        Property::Extraction => extraction(cfg),
        Property::Normalize => normalize(cfg),
        Property::SatChain => sat_chain(cfg),
        Property::Solver => solver(cfg),
        Property::Inclusion => inclusion(cfg),
    }
}

const INDICES: [(u32, u32); 5] = [(0, 1), (1, 2), (0, 2), (1, 3), (0, 3)];

fn params(states: usize, (lo, hi): (u32, u32)) -> RandomParams {
    RandomParams {
        states,
        letters: 2,
        lo,
        hi,
        density: 0.6,
        ..RandomParams::default()
    }
}

fn complete(a: &ParityAutomaton) -> Result<ParityAutomaton> {
    validate_and_complete(a, CompletionMode::AddRejectingSink)
}

/// check_hd against simulation of a known deterministic equivalent, on
/// HD-by-construction and letter-split automata.
fn hd_vs_det(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new(Property::HdVsDet);
    let max = cfg.states(10);
    for i in 0..cfg.count {
        let seed = cfg.seed.wrapping_add(i as u64);
        let p = params(4 + i % (max.saturating_sub(3)).max(1), INDICES[i % INDICES.len()]);
        let (a, d) = if i % 2 == 0 {
            random_hd_automaton(seed, &p)?
        } else {
            random_split_automaton(seed, &p)?
        };
        let hd = check_hd(&a)?.hd;
        let oracle = hd_oracle_vs_det(&a, &d)?;
        rep.tally(if hd { "hd" } else { "not-hd" });
        rep.check(hd == oracle, || format!("instance {i}: check_hd {hd}, oracle {oracle}"));
    }
    Ok(rep)
}

/// Output of Büchi determinisation is deterministic, within n² states and
/// lasso-equivalent to the input.
fn buchi_det(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new(Property::BuchiDet);
    let max = cfg.states(8);
    let lassos = LassoWord::enumerate(2, 6, 6);
    let mut i = 0u64;
    let mut done = 0;
    while done < cfg.count {
        let seed = cfg.seed.wrapping_add(i);
        i += 1;
        let states = 3 + (i as usize) % (max.saturating_sub(2)).max(1);
        let (a, _) = random_hd_automaton(
            seed,
            &RandomParams {
                states,
                ..params(states, (0, 1))
            },
        )?;
        if a.num_states() > max || !check_hd(&a)?.hd {
            continue;
        }
        done += 1;
        let n = a.num_states();
        let d = match determinize_hd_buchi(&a) {
            Ok(d) => d.automaton,
            Err(e) => {
                rep.record(Err(e), || format!("seed {seed}"));
                continue;
            }
        };
        rep.check(d.is_deterministic() && d.is_complete(), || {
            format!("seed {seed}: output not deterministic")
        });
        rep.check(d.num_states() <= n * n, || {
            format!("seed {seed}: {} states for n = {n}", d.num_states())
        });
        let mut bad = None;
        for w in &lassos {
            if lasso_member(&a, w)? != lasso_member(&d, w)? {
                bad = Some(w.display(&a.alphabet).to_string());
                break;
            }
        }
        rep.check(bad.is_none(), || {
            format!("seed {seed}: lasso {} distinguishes", bad.clone().unwrap_or_default())
        });
    }
    Ok(rep)
}

/// Leaf and height numbers of the implication trees, bounds on the 2-token
/// trees, and agreement of the rule-based builder with the generic one.
///
/// Heights are checked against `d + (i + d) mod 2`, the value the generic
/// builder produces; leaves against `1 + ceil(d/2)` for `i = 1` and
/// `1 + floor(d/2)` for `i = 0`.
fn zielonka(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new(Property::Zielonka);
    let top = cfg.count.clamp(1, 6) as u32;
    for d in 1..=top {
        for i in 0..=1u32 {
            let (_, tree) = build_implication_condition(1, d, i)?;
            let leaves = if i == 1 { 1 + d.div_ceil(2) } else { 1 + d / 2 };
            let height = d + (i + d) % 2;
            rep.check(tree.num_branches() == leaves as usize, || {
                format!("[{i},{}]: {} leaves, expected {leaves}", i + d, tree.num_branches())
            });
            rep.check(tree.height() == height as usize, || {
                format!("[{i},{}]: height {}, expected {height}", i + d, tree.height())
            });
            if tree.height() == d as usize {
                rep.tally("height-equals-d");
            }
        }
    }
    for d in 0..=3u32.min(top) {
        let (_, tree, dag) = build_2token_condition(d)?;
        let k = d as usize + 1;
        rep.check(dag.num_nodes() <= k.pow(3), || {
            format!("d={d}: {} distinct labels", dag.num_nodes())
        });
        rep.check(tree.height() <= 3 * k, || format!("d={d}: height {}", tree.height()));
        rep.check(tree.num_branches() <= 1 << (3 * k), || {
            format!("d={d}: {} branches", tree.num_branches())
        });
        let rules = build_2token_tree_by_rules(d);
        rep.check(rules.same_shape(&tree), || format!("d={d}: rule-based tree differs"));
        rep.check(ZielonkaDag::of(&rules).num_nodes() == dag.num_nodes(), || {
            format!("d={d}: label counts differ")
        });
    }
    Ok(rep)
}

fn random_complete(rng: &mut ChaCha8Rng, states: usize, index: (u32, u32)) -> Result<ParityAutomaton> {
    let p = RandomParams {
        density: 0.5,
        ..params(states, index)
    };
    complete(&random_automaton(rng.gen(), &p)?)
}

/// Relations between the token games on random small automata.
fn token_theorems(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new(Property::TokenTheorems);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let max = cfg.states(4);
    for i in 0..cfg.count {
        let index = INDICES[i % INDICES.len()];
        let a = random_complete(&mut rng, 2 + i % max.saturating_sub(1).max(1), index)?;
        let g1 = eve_wins_g1(&a)?;
        let g2 = eve_wins_g2(&a)?;
        let g3 = eve_wins_gk(&a, 3)?;
        let joker = eve_wins_joker(&a)?;
        rep.tally(if g2 { "g2-eve" } else { "g2-adam" });
        if joker && !g2 {
            rep.tally("joker-not-g2");
        }
        rep.check(g2 == g3, || format!("instance {i}: G2 {g2}, G3 {g3}"));
        rep.check(!g2 || joker, || format!("instance {i}: Eve wins G2 but not Joker"));
        rep.check(!joker || g1, || format!("instance {i}: Eve wins Joker but not G1"));
        for k in 1..=2 {
            let la = build_lookahead(&a, k)?.winner()? == Player::Eve;
            rep.check(la == g1, || format!("instance {i}: G1 {g1}, lookahead-{k} {la}"));
        }
        let b = random_complete(&mut rng, 2, index)?;
        let c = random_complete(&mut rng, 2, index)?;
        let wins = |x: &ParityAutomaton, y: &ParityAutomaton| -> Result<bool> {
            Ok(build_g1(x, y, &[(x.initial, y.initial)])?.winner()? == Player::Eve)
        };
        for (x, y, z) in [(&a, &b, &c), (&b, &a, &c), (&c, &b, &a)] {
            if wins(x, y)? && wins(y, z)? {
                rep.tally("transitivity-premise");
                let xz = wins(x, z)?;
                rep.check(xz, || format!("instance {i}: G1 not transitive"));
            }
        }
    }
    Ok(rep)
}

/// Extraction keeps simulation equivalence and the everywhere properties.
fn extraction(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new(Property::Extraction);
    let max = cfg.states(6);
    for i in 0..cfg.count {
        let seed = cfg.seed.wrapping_add(i as u64);
        let p = params(3 + i % max.saturating_sub(2).max(1), INDICES[i % INDICES.len()]);
        let (a, _) = random_hd_automaton(seed, &p)?;
        for (mode, every) in [
            (ExtractMode::TheoremI, Everywhere::G2),
            (ExtractMode::Joker, Everywhere::G1),
        ] {
            let r = extract_subautomaton(&a, mode).and_then(|b| {
                if !(simulates(&a, &b)? && simulates(&b, &a)?) {
                    return Err(Error::Internal("not simulation-equivalent".into()));
                }
                if !wins_everywhere(&b, every)?.holds {
                    return Err(Error::Internal(format!("fails {every:?} everywhere")));
                }
                Ok(())
            });
            rep.record(r, || format!("seed {seed}, {mode:?}"));
        }
    }
    Ok(rep)
}

/// Normal-form properties of `normalize_even` on `[0,2]` automata on which
/// Eve wins G2 from everywhere.
fn normalize(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new(Property::Normalize);
    let max = cfg.states(6);
    let mut i = 0u64;
    let mut done = 0;
    while done < cfg.count {
        let seed = cfg.seed.wrapping_add(i);
        i += 1;
        if i > 200 * cfg.count as u64 + 200 {
            return Err(Error::Internal("too few G2-everywhere candidates".into()));
        }
        let p = params(3 + (i as usize) % max.saturating_sub(2).max(1), (0, 2));
        let a = if i % 2 == 0 {
            random_hd_automaton(seed, &p)?.0
        } else {
            complete(&random_automaton(seed, &p)?)?.trim()
        };
        if a.lo != 0 || !wins_everywhere(&a, Everywhere::G2)?.holds {
            continue;
        }
        done += 1;
        let r = normalize_even(&a, false).and_then(|n| {
            let b = n.automaton;
            let cls = classify_states(&b)?;
            let reach = b.reachable_states();
            if let Some(q) = (0..b.num_states()).find(|&q| reach[q] && (cls.opt[q] != Some(0) || !cls.right[q])) {
                return Err(Error::Internal(format!(
                    "state {} is not optimal and right",
                    b.states[q]
                )));
            }
            if !coverage_check(&b, CoverageKind::ZeroReachDouble)?.holds() {
                return Err(Error::Internal("no 0-reach double coverage".into()));
            }
            let t = validate_transformation(&a, &b)?;
            if !t.all_pass() {
                return Err(Error::Internal(format!("transformation check failed: {t:?}")));
            }
            Ok(())
        });
        rep.record(r, || format!("seed {seed}"));
    }
    Ok(rep)
}

/// All clauses over `vars` variables: nonempty, without complementary literals.
pub fn all_clauses(vars: usize) -> Vec<Vec<i32>> {
    let mut out = Vec::new();
    for code in 1..3usize.pow(vars as u32) {
        let mut c = Vec::new();
        let mut x = code;
        for v in 1..=vars as i32 {
            match x % 3 {
                1 => c.push(v),
                2 => c.push(-v),
                _ => {}
            }
            x /= 3;
        }
        out.push(c);
    }
    out
}

/// CNFs over exactly `vars` variables made of `1..=max_terms` distinct clauses.
pub fn all_cnfs(vars: usize, max_terms: usize) -> Vec<CnfFormula> {
    let clauses = all_clauses(vars);
    let mut out = Vec::new();
    let mut pick = Vec::new();
    fn rec(clauses: &[Vec<i32>], from: usize, left: usize, pick: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if !pick.is_empty() {
            out.push(pick.clone());
        }
        if left == 0 {
            return;
        }
        for i in from..clauses.len() {
            pick.push(i);
            rec(clauses, i + 1, left - 1, pick, out);
            pick.pop();
        }
    }
    let mut picks = Vec::new();
    rec(&clauses, 0, max_terms, &mut pick, &mut picks);
    for p in picks {
        let terms = p.iter().map(|&i| clauses[i].clone()).collect();
        out.push(CnfFormula::new(vars, terms).expect("well-formed clauses"));
    }
    out
}

/// The SAT chain on a list of formulas.
pub fn chain_on(formulas: &[CnfFormula], rep: &mut SuiteReport) -> Result<()> {
    for phi in formulas {
        let sat = phi.brute_force_sat();
        rep.tally(if sat { "sat" } else { "unsat" });
        let r = sat_to_good_implication(phi)
            .and_then(|g| crosscheck_chain(&g))
            .and_then(|c| {
                if c.agree() && c.eve_wins_game == sat {
                    Ok(())
                } else {
                    Err(Error::Internal(format!("{c:?}, brute force {sat}")))
                }
            });
        rep.record(r, || phi.to_dimacs().replace('\n', " "));
    }
    Ok(())
}

/// Every CNF with at most two variables and four terms, every 3-variable
/// CNF with at most two clauses, and `count` random 3-variable 4-clause CNFs.
fn sat_chain(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new(Property::SatChain);
    let mut formulas = all_cnfs(1, 4);
    formulas.extend(all_cnfs(2, 4));
    formulas.extend(all_cnfs(3, 2));
    formulas.extend((0..cfg.count).map(|i| CnfFormula::random(cfg.seed.wrapping_add(i as u64), 3, 4, 3)));
    chain_on(&formulas, &mut rep)?;
    Ok(rep)
}

/// Games where every vertex has one or two distinct `(target, priority)` edges.
fn games_exhaustive(n: usize, prios: u32) -> Vec<ParityGame> {
    let single: Vec<(usize, u32)> = (0..n).flat_map(|t| (0..prios).map(move |p| (t, p))).collect();
    let mut choices: Vec<Vec<(usize, u32)>> = single.iter().map(|&e| vec![e]).collect();
    for i in 0..single.len() {
        for j in i + 1..single.len() {
            choices.push(vec![single[i], single[j]]);
        }
    }
    let mut out = Vec::new();
    let total = choices.len().pow(n as u32);
    for owners in 0..1usize << n {
        let owner: Vec<Player> = (0..n)
            .map(|v| {
                if owners >> v & 1 == 1 {
                    Player::Adam
                } else {
                    Player::Eve
                }
            })
            .collect();
        for code in 0..total {
            let mut g = ParityGame::new(owner.clone());
            let mut x = code;
            for v in 0..n {
                for &(t, p) in &choices[x % choices.len()] {
                    g.add_edge(v, t, p);
                }
                x /= choices.len();
            }
            out.push(g);
        }
    }
    out
}

fn random_game(rng: &mut ChaCha8Rng, n: usize, prios: u32) -> ParityGame {
    let owner = (0..n)
        .map(|_| if rng.gen() { Player::Eve } else { Player::Adam })
        .collect();
    let mut g = ParityGame::new(owner);
    for v in 0..n {
        let deg = rng.gen_range(1..=2);
        for _ in 0..deg {
            g.add_edge(v, rng.gen_range(0..n), rng.gen_range(0..prios));
        }
    }
    g
}

fn check_solution(g: &ParityGame, rep: &mut SuiteReport, label: &str) -> Result<()> {
    let sol = solve_parity(g)?;
    let oracle = brute_force_winners(g);
    rep.check(sol.winner == oracle, || {
        format!("{label}: winners differ from enumeration")
    });
    for p in [Player::Eve, Player::Adam] {
        let ok = verify_strategy(g, &sol.strategy_of(g, p), p, &sol.region(p))?;
        rep.check(ok, || format!("{label}: {p} strategy fails verification"));
    }
    Ok(())
}

/// Ranks by minimising, over Eve's positional strategies winning from a
/// vertex, the largest number of 1-edges on a path before a 0-edge.
pub fn ranks_by_enumeration(g: &ParityGame) -> Vec<Option<u32>> {
    let n = g.num_vertices();
    let eve: Vec<usize> = (0..n).filter(|&v| g.owner[v] == Player::Eve).collect();
    let mut best: Vec<Option<u32>> = vec![None; n];
    let mut pick = vec![0usize; eve.len()];
    loop {
        let mut edges = Vec::new();
        for v in 0..n {
            match eve.iter().position(|&x| x == v) {
                Some(i) => edges.push(g.edges[g.out[v][pick[i]]]),
                None => edges.extend(g.out[v].iter().map(|&e| g.edges[e])),
            }
        }
        for v in 0..n {
            let mut seen = FixedBitSet::with_capacity(n);
            let mut stack = vec![v];
            seen.insert(v);
            while let Some(u) = stack.pop() {
                for e in edges.iter().filter(|e| e.0 == u) {
                    if !seen.put(e.1) {
                        stack.push(e.1);
                    }
                }
            }
            let local: Vec<(usize, usize, u32)> = edges.iter().copied().filter(|e| seen.contains(e.0)).collect();
            if exists_cycle_min_parity(n, &local, 1) {
                continue;
            }
            // Longest count of 1-edges before a 0-edge; finite since every
            // cycle avoiding 0 has an even minimum of at least 2.
            let mut f = vec![0u32; n];
            for _ in 0..=n {
                for &(s, t, p) in &local {
                    let via = match p {
                        0 => 0,
                        1 => f[t] + 1,
                        _ => f[t],
                    };
                    f[s] = f[s].max(via);
                }
            }
            if best[v].is_none_or(|b| f[v] < b) {
                best[v] = Some(f[v]);
            }
        }
        let mut i = 0;
        loop {
            if i == eve.len() {
                return best;
            }
            pick[i] += 1;
            if pick[i] < g.out[eve[i]].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}

/// Solver against strategy enumeration (exhaustively on tiny arenas, then on
/// `count` random ones) and ranks against [`ranks_by_enumeration`].
fn solver(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new(Property::Solver);
    for (n, prios) in [(1, 3), (2, 3), (3, 2)] {
        for (k, g) in games_exhaustive(n, prios).iter().enumerate() {
            check_solution(g, &mut rep, &format!("exhaustive n={n} #{k}"))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let max = cfg.states(5).max(3);
    for k in 0..cfg.count {
        let n = rng.gen_range(3..=max);
        let g = random_game(&mut rng, n, 5);
        check_solution(&g, &mut rep, &format!("random #{k}"))?;
    }
    let mut ranked = 0;
    while ranked < cfg.count / 10 + 1 {
        let n = rng.gen_range(2..=8);
        let g = random_game(&mut rng, n, 3);
        let sol = solve_parity(&g)?;
        let region = sol.region(Player::Eve);
        if region.count_ones(..) == 0 {
            continue;
        }
        ranked += 1;
        let (won, _) = g.restrict(&region);
        let table = compute_ranks(&won)?;
        let oracle = ranks_by_enumeration(&won);
        let got: Vec<Option<u32>> = table.rank.iter().map(|&r| Some(r)).collect();
        rep.check(got == oracle, || format!("ranks #{ranked}: {got:?} vs {oracle:?}"));
        let mut all = FixedBitSet::with_capacity(won.num_vertices());
        all.insert_range(..);
        rep.check(verify_strategy(&won, &table.strategy, Player::Eve, &all)?, || {
            format!("ranks #{ranked}: strategy")
        });
        rep.tally("ranked-games");
    }
    Ok(rep)
}

/// The HD-target inclusion pipeline against the exact product check.
fn inclusion(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new(Property::Inclusion);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let max = cfg.states(6);
    for i in 0..cfg.count {
        let index = INDICES[i % INDICES.len()];
        let states = 2 + i % max.saturating_sub(1).max(1);
        let det = RandomParams {
            determinism_bias: 1.0,
            ..params(states, index)
        };
        let (a, d) = match i % 3 {
            0 => (
                random_complete(&mut rng, states, index)?,
                random_automaton(rng.gen(), &det)?,
            ),
            1 => random_hd_automaton(rng.gen(), &params(states, index))?,
            _ => {
                let (a, mut d) = random_hd_automaton(rng.gen(), &params(states, index))?;
                let t = rng.gen_range(0..d.transitions.len());
                let p = &mut d.transitions[t].prio;
                *p = if *p == d.hi { d.lo } else { *p + 1 };
                (a, d)
            }
        };
        let exact = inclusion_oracle_det(&a, &d)?.included;
        let via_hd = inclusion_hd(&a, &d, i % 5 != 0)?.included;
        rep.tally(if exact { "included" } else { "not-included" });
        rep.check(exact == via_hd, || {
            format!("pair {i}: oracle {exact}, pipeline {via_hd}")
        });
    }
    Ok(rep)
}
