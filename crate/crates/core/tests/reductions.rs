use hdtk::automaton::{parse_tpa, serialize_tpa};
use hdtk::reduction::{
    crosscheck_chain, implication_to_sim, random_implication_game, sat_to_good_implication, CnfFormula, ImplicationGame,
};
use hdtk::suite::{all_clauses, all_cnfs, chain_on, SuiteReport};
use hdtk::Player;
use proptest::prelude::*;

/// Goodness by brute force: no nonempty strongly connected edge set has an
/// even least second priority and an odd least first priority.
fn good_by_edge_subsets(g: &ImplicationGame) -> bool {
    let edges = &g.arena.edges;
    let n = g.arena.num_vertices();
    assert!(edges.len() <= 12);
    for mask in 1u32..1 << edges.len() {
        let set: Vec<usize> = (0..edges.len()).filter(|&e| mask >> e & 1 == 1).collect();
        let mut reach = vec![vec![false; n]; n];
        for &e in &set {
            reach[edges[e].src][edges[e].dst] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if reach[i][k] && reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
        let connected = set.iter().all(|&e| {
            set.iter()
                .all(|&f| edges[e].dst == edges[f].src || reach[edges[e].dst][edges[f].src])
        });
        if !connected {
            continue;
        }
        let m1 = set.iter().map(|&e| edges[e].colour[0]).min().unwrap();
        let m2 = set.iter().map(|&e| edges[e].colour[1]).min().unwrap();
        if m2 % 2 == 0 && m1 % 2 == 1 {
            return false;
        }
    }
    true
}

#[test]
fn clause_and_formula_counts() {
    assert_eq!(all_clauses(1).len(), 2);
    assert_eq!(all_clauses(2).len(), 8);
    assert_eq!(all_clauses(3).len(), 26);
    assert_eq!(all_cnfs(1, 4).len(), 3);
    assert_eq!(all_cnfs(2, 4).len(), 162);
    // 26 + C(26,2) + C(26,3) + C(26,4).
    assert_eq!(all_cnfs(3, 4).len(), 26 + 325 + 2600 + 14950);
}

#[test]
fn dimacs_round_trip() {
    let phi = CnfFormula::parse_dimacs("c comment\np cnf 3 2\n1 -2 0\n3\n0\n").unwrap();
    assert_eq!(phi.terms, [vec![1, -2], vec![3]]);
    assert_eq!(CnfFormula::parse_dimacs(&phi.to_dimacs()).unwrap(), phi);
    assert!(CnfFormula::parse_dimacs("1 2 0\n").is_err());
    assert!(CnfFormula::parse_dimacs("p cnf 1 1\n2 0\n").is_err());
}

#[test]
fn sat_game_shape() {
    let phi = CnfFormula::new(2, vec![vec![1, 2], vec![-1]]).unwrap();
    let g = sat_to_good_implication(&phi).unwrap();
    assert_eq!(g.arena.num_vertices(), 2 * 2 + 2);
    assert_eq!(g.arena.owner[g.arena.initial], Player::Adam);
    assert!(g.is_bipartite());
    assert!(g.is_good());
    assert_eq!(g.winner().unwrap(), Player::Eve);
    assert!(sat_to_good_implication(&CnfFormula { vars: 1, terms: vec![] }).is_err());
}

#[test]
fn sim_instance_serialises() {
    let phi = CnfFormula::new(2, vec![vec![1, -2], vec![2]]).unwrap();
    let inst = implication_to_sim(&sat_to_good_implication(&phi).unwrap()).unwrap();
    assert!(inst.d.is_deterministic() && inst.d.is_complete());
    assert!(inst.h.is_complete());
    for a in [&inst.d, &inst.h] {
        assert_eq!(&parse_tpa(&serialize_tpa(a)).unwrap(), a);
    }
}

#[test]
fn small_formulas_agree_along_the_chain() {
    let mut phis = all_cnfs(1, 4);
    phis.extend(all_cnfs(2, 2));
    for phi in &phis {
        let g = sat_to_good_implication(phi).unwrap();
        let r = crosscheck_chain(&g).unwrap();
        assert_eq!(r.eve_wins_game, phi.brute_force_sat(), "{phi:?}");
    }
}

#[test]
fn chain_rejects_bad_games() {
    let g = ImplicationGame::parse("vertex 0 Adam\nedge 0 0 1,0\n").unwrap();
    assert!(!g.is_good());
    assert!(crosscheck_chain(&g).is_err());
}

#[test]
#[ignore = "runs the chain on all 18066 CNFs with at most 3 variables and 4 clauses; about two hours"]
fn exhaustive_chain() {
    let mut phis = all_cnfs(1, 4);
    phis.extend(all_cnfs(2, 4));
    phis.extend(all_cnfs(3, 4));
    let mut rep = SuiteReport::default();
    chain_on(&phis, &mut rep).unwrap();
    assert!(rep.passed(), "{:?}", &rep.failures[..rep.failures.len().min(5)]);
    assert_eq!(rep.checks, phis.len());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sat_games_are_good(seed in any::<u64>(), vars in 1..4usize, terms in 1..4usize) {
        let phi = CnfFormula::random(seed, vars, terms, 3);
        let g = sat_to_good_implication(&phi).unwrap();
        prop_assert!(g.is_good());
    }

    #[test]
    fn goodness_matches_edge_subsets(seed in any::<u64>(), n in 1..5usize, d in 1..4u32) {
        let g = random_implication_game(seed, n, d).unwrap();
        prop_assert_eq!(g.is_good(), good_by_edge_subsets(&g));
    }

    #[test]
    fn bipartite_forms_keep_the_winner(seed in any::<u64>(), n in 1..5usize) {
        let g = random_implication_game(seed, n, 2).unwrap();
        let w = g.winner().unwrap();
        let b = g.bipartite();
        prop_assert!(b.is_bipartite());
        prop_assert_eq!(b.winner().unwrap(), w);
        let p = g.prepared();
        prop_assert_eq!(p.winner().unwrap(), w);
    }
}
