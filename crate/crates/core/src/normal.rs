//! Coverage properties and the normalisation of `[0,K]` automata on which
//! Eve wins the 2-token game from everywhere.

use fixedbitset::FixedBitSet;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::automaton::{
    approximate, validate_and_complete, weak_coreachability, Approximation, CompletionMode, ParityAutomaton, Transition,
};
use crate::buchi::RankIteration;
use crate::error::{pre, Error, Result};
use crate::game::{compute_ranks, muller_to_parity_from, solve_parity, Player, Product};
use crate::lasso::{lasso_member, LassoWord};
use crate::token::{build_gk, simulates, wins_everywhere, Everywhere, TokenGame};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoverageKind {
    /// `G1(p; q)` in the safe approximation.
    Safe,
    /// `G1(q; p)` in the reachability approximation.
    Reach,
    /// `G2(p; q, q)` above priority 1.
    OneSafeDouble,
    /// `G2(q; p, p)` above priority 0.
    ZeroReachDouble,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coverage {
    /// Witness `p` for each reachable state.
    pub witness: Vec<Option<usize>>,
    pub failing: Option<usize>,
}

impl Coverage {
    pub fn holds(&self) -> bool {
        self.failing.is_none()
    }
}

pub fn coverage_check(a: &ParityAutomaton, kind: CoverageKind) -> Result<Coverage> {
    let (lo, approx) = match kind {
        CoverageKind::Safe => (1, Approximation::Safe),
        CoverageKind::Reach => (0, Approximation::Reach),
        CoverageKind::OneSafeDouble => (1, Approximation::Above1),
        CoverageKind::ZeroReachDouble => (0, Approximation::Above0),
    };
    if a.lo != lo {
        return pre(format!(
            "{kind:?} coverage needs lowest priority {lo}, index is [{},{}]",
            a.lo, a.hi
        ));
    }
    let b = approximate(a, approx)?;
    let wcr = weak_coreachability(a);
    let candidates = wcr.pairs();
    let starts: Vec<Vec<usize>> = candidates
        .iter()
        .map(|&(q, p)| match kind {
            CoverageKind::Safe => vec![p, q],
            CoverageKind::Reach => vec![q, p],
            CoverageKind::OneSafeDouble => vec![p, q, q],
            CoverageKind::ZeroReachDouble => vec![q, p, p],
        })
        .collect();
    let adams: Vec<&ParityAutomaton> = if starts.first().is_some_and(|s| s.len() == 3) {
        vec![&b, &b]
    } else {
        vec![&b]
    };
    let winners = build_gk(&b, &adams, &starts)?.solve()?.winners;
    let mut witness = vec![None; a.num_states()];
    for (&(q, p), w) in candidates.iter().zip(winners) {
        if w == Player::Eve && witness[q].is_none() {
            witness[q] = Some(p);
        }
    }
    let failing = (0..a.num_states()).find(|&q| wcr.class_of[q].is_some() && witness[q].is_none());
    Ok(Coverage { witness, failing })
}

/// The 2-token arena with all branches of the Zielonka tree, solved and
/// ranked on Eve's winning region.
struct RankedG2 {
    game: TokenGame,
    product: Product,
    rank: Vec<Option<u32>>,
    right: Vec<bool>,
}

impl RankedG2 {
    fn new(a: &ParityAutomaton) -> Result<RankedG2> {
        let wcr = weak_coreachability(a);
        let triples: Vec<Vec<usize>> = wcr.triples().into_iter().map(|(q, p, r)| vec![q, p, r]).collect();
        let game = build_gk(a, &[a, a], &triples)?;
        let tree = &game.tree;
        let starts: Vec<(usize, usize)> = game
            .starts
            .iter()
            .flat_map(|&v| (0..tree.num_branches()).map(move |b| (v, b)))
            .collect();
        let product = muller_to_parity_from(&game.arena, tree, &starts)?;
        let sol = solve_parity(&product.game)?;
        if starts
            .iter()
            .any(|&s| sol.winner[product.lookup(s.0, s.1).expect("start")] == Player::Adam)
        {
            return pre("Eve does not win the 2-token game from everywhere");
        }
        let (won, old) = product.game.restrict(&sol.region(Player::Eve));
        let table = compute_ranks(&won)?;
        let mut rank = vec![None; product.game.num_vertices()];
        for (i, &v) in old.iter().enumerate() {
            rank[v] = Some(table.rank[i]);
        }
        let mut positive = FixedBitSet::with_capacity(tree.colours.len());
        for (i, c) in tree.colours.iter().enumerate() {
            if c.iter().all(|&x| x >= 1) {
                positive.insert(i);
            }
        }
        let node = tree
            .nodes
            .iter()
            .position(|n| n.label == positive)
            .ok_or_else(|| Error::Internal("no node for the all-positive colours".into()))?;
        let right = (0..tree.num_branches())
            .map(|b| tree.branch(b).contains(&node))
            .collect();
        Ok(RankedG2 {
            game,
            product,
            rank,
            right,
        })
    }

    fn rank(&self, q: usize, p: usize, r: usize, b: usize) -> Option<u32> {
        let v = self.game.round.get(&vec![q, p, r])?;
        self.rank[self.product.lookup(*v, b)?]
    }

    /// Branches with right-branches first.
    fn branch_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.right.len()).collect();
        order.sort_by_key(|&b| !self.right[b]);
        order
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateClassification {
    /// Optimal rank; `None` for unreachable states.
    pub opt: Vec<Option<u32>>,
    pub right: Vec<bool>,
    /// A rank-0 tuple `(p, r, branch)` for states of optimal rank 0.
    pub witness: Vec<Option<(usize, usize, usize)>>,
}

fn optimal(rg: &RankedG2, a: &ParityAutomaton) -> StateClassification {
    let wcr = weak_coreachability(a);
    let order = rg.branch_order();
    let n = a.num_states();
    let mut cls = StateClassification {
        opt: vec![None; n],
        right: vec![false; n],
        witness: vec![None; n],
    };
    for q in 0..n {
        let mut best: Option<u32> = None;
        for &b in &order {
            for &p in wcr.partners(q) {
                for &r in wcr.partners(q) {
                    if let Some(k) = rg.rank(q, p, r, b) {
                        best = Some(best.map_or(k, |x| x.min(k)));
                        if k == 0 && cls.witness[q].is_none() {
                            cls.witness[q] = Some((p, r, b));
                            cls.right[q] = rg.right[b];
                        }
                    }
                }
            }
        }
        cls.opt[q] = best;
    }
    cls
}

/// Optimal ranks in the 2-token arena and the right/non-right split. For
/// right states the witnessing tuple is checked against a direct solve above
/// priority 0.
pub fn classify_states(a: &ParityAutomaton) -> Result<StateClassification> {
    if a.lo != 0 {
        return pre("classification needs a [0,K] automaton");
    }
    let a = &widened(a);
    let rg = RankedG2::new(a)?;
    let cls = optimal(&rg, a);
    let starts: Vec<Vec<usize>> = (0..a.num_states())
        .filter(|&q| cls.right[q])
        .map(|q| {
            let (p, r, _) = cls.witness[q].expect("right state has a witness");
            vec![q, p, r]
        })
        .collect();
    if !starts.is_empty() {
        let above = approximate(a, Approximation::Above0)?;
        if !build_gk(&above, &[&above, &above], &starts)?.solve()?.eve_wins_all() {
            return Err(Error::Internal(
                "a right state loses the 2-token game above priority 0".into(),
            ));
        }
    }
    Ok(cls)
}

/// `[0,0]` automata are treated as `[0,1]`.
fn widened(a: &ParityAutomaton) -> ParityAutomaton {
    ParityAutomaton {
        hi: a.hi.max(1),
        ..a.clone()
    }
}

fn complete(a: &ParityAutomaton) -> Result<ParityAutomaton> {
    validate_and_complete(a, CompletionMode::AddRejectingSink)
}

/// Rank reduction in the 2-token arena until every state has optimal rank 0.
pub fn rank_reduce_g2(a: &ParityAutomaton) -> Result<(ParityAutomaton, Vec<RankIteration>)> {
    let mut cur = complete(&widened(a))?.trim();
    let cap = cur.transitions.len() + 1;
    let mut trace = Vec::new();
    for _ in 0..=cap {
        let cls = optimal(&RankedG2::new(&cur)?, &cur);
        let opt: Vec<u32> = cls.opt.iter().map(|o| o.unwrap_or(0)).collect();
        let mut removed = Vec::new();
        let mut relabelled = Vec::new();
        let mut next = Vec::new();
        for t in &cur.transitions {
            if t.prio > 0 && opt[t.src] < opt[t.dst] {
                removed.push(*t);
            } else if t.prio > 0 && opt[t.src] > opt[t.dst] {
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
            return Ok((cur, trace));
        }
        cur = complete(&cur.with_transitions(next))?.trim();
    }
    Err(Error::Internal("rank reduction exceeded its iteration bound".into()))
}

/// One round of the normalisation loop.
#[derive(Clone, Debug)]
pub struct NormalRound {
    pub rank_reduction: Vec<RankIteration>,
    pub right: Vec<bool>,
    pub separated: Vec<Transition>,
    pub lowered: Vec<Transition>,
}

#[derive(Clone, Debug)]
pub struct Normalization {
    pub automaton: ParityAutomaton,
    pub rounds: Vec<NormalRound>,
}

/// Repeats rank reduction, branch separation and priority reduction until a
/// fixpoint. With `paranoid`, simulation equivalence to the input and the
/// 2-token condition are re-checked after every subprocedure.
pub fn normalize_even(a: &ParityAutomaton, paranoid: bool) -> Result<Normalization> {
    if a.lo != 0 {
        return pre(format!(
            "normalisation needs a [0,K] automaton, index is [{},{}]",
            a.lo, a.hi
        ));
    }
    let input = complete(&widened(a))?;
    if !wins_everywhere(&input, Everywhere::G2)?.holds {
        return pre("Eve does not win the 2-token game from everywhere");
    }
    let check = |b: &ParityAutomaton, stage: &str| -> Result<()> {
        if paranoid {
            let r = validate_transformation(&input, b)?;
            if !(r.sim_equivalent() && r.g2_everywhere) {
                return Err(Error::Internal(format!("invariant broken after {stage}")));
            }
        }
        Ok(())
    };
    let k = input.hi as usize;
    let cap = (k + 1) * input.transitions.len().max(1);
    let mut cur = input.trim();
    let mut rounds = Vec::new();
    for _ in 0..=cap {
        let (b, rank_reduction) = rank_reduce_g2(&cur)?;
        check(&b, "rank reduction")?;
        let cls = optimal(&RankedG2::new(&b)?, &b);
        if cls.opt.iter().any(|o| o.is_some_and(|x| x > 0)) {
            return Err(Error::Internal("rank reduction left a state of positive rank".into()));
        }
        let right = &cls.right;
        let (separated, kept): (Vec<Transition>, Vec<Transition>) = b
            .transitions
            .iter()
            .partition(|t| (right[t.src] && !right[t.dst] && t.prio >= 1) || (!right[t.src] && t.prio == 1));
        let c = complete(&b.with_transitions(kept))?;
        check(&c, "branch separation")?;
        let mut lowered = Vec::new();
        let reduced: Vec<Transition> = c
            .transitions
            .iter()
            .map(|t| {
                if t.src < right.len() && !right[t.src] && t.prio >= 2 {
                    lowered.push(*t);
                    Transition { prio: t.prio - 2, ..*t }
                } else {
                    *t
                }
            })
            .collect();
        let next = c.with_transitions(reduced).trim();
        check(&next, "priority reduction")?;
        let done = next == cur;
        rounds.push(NormalRound {
            rank_reduction,
            right: cls.right.clone(),
            separated,
            lowered,
        });
        if done {
            let automaton = ParityAutomaton {
                lo: a.lo,
                hi: a.hi.max(next.transitions.iter().map(|t| t.prio).max().unwrap_or(0)),
                ..next
            };
            return Ok(Normalization { automaton, rounds });
        }
        cur = next;
    }
    Err(Error::Internal("normalisation exceeded its iteration bound".into()))
}

/// Property-by-property comparison of an automaton with a transformed one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformReport {
    pub a_simulates_b: bool,
    pub b_simulates_a: bool,
    pub g1_everywhere: bool,
    pub g2_everywhere: bool,
    pub lassos_checked: usize,
    pub lasso_mismatch: Option<LassoWord>,
}

impl TransformReport {
    pub fn sim_equivalent(&self) -> bool {
        self.a_simulates_b && self.b_simulates_a
    }

    pub fn all_pass(&self) -> bool {
        self.sim_equivalent() && self.g1_everywhere && self.g2_everywhere && self.lasso_mismatch.is_none()
    }
}

pub const LASSO_SAMPLES: usize = 50;

/// Simulation both ways, G1/G2 from everywhere on `b`, and acceptance on
/// sampled lassos (fixed seed).
pub fn validate_transformation(a: &ParityAutomaton, b: &ParityAutomaton) -> Result<TransformReport> {
    if a.alphabet != b.alphabet {
        return Err(Error::Alphabet("transformation changed the alphabet".into()));
    }
    let a = complete(a)?;
    let b = complete(b)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut lasso_mismatch = None;
    for _ in 0..LASSO_SAMPLES {
        let w = LassoWord::random(&mut rng, a.num_letters(), 6, 6);
        if lasso_member(&a, &w)? != lasso_member(&b, &w)? {
            lasso_mismatch = Some(w);
            break;
        }
    }
    Ok(TransformReport {
        a_simulates_b: simulates(&a, &b)?,
        b_simulates_a: simulates(&b, &a)?,
        g1_everywhere: wins_everywhere(&b, Everywhere::G1)?.holds,
        g2_everywhere: wins_everywhere(&b, Everywhere::G2)?.holds,
        lassos_checked: LASSO_SAMPLES,
        lasso_mismatch,
    })
}
