use hdtk::game::{
    brute_force_winners, compute_ranks, solve_muller, solve_parity, verify_strategy, GameArena, ParityGame, Player,
};
use hdtk::suite::ranks_by_enumeration;
use hdtk::zielonka::{build_tree, token_condition};
use proptest::prelude::*;

fn game(n: usize, owners: &[bool], edges: &[(usize, usize, u32)]) -> ParityGame {
    let mut g = ParityGame::new(
        owners[..n]
            .iter()
            .map(|&e| if e { Player::Eve } else { Player::Adam })
            .collect(),
    );
    for &(s, t, p) in edges {
        g.add_edge(s % n, t % n, p);
    }
    for v in 0..n {
        if g.out[v].is_empty() {
            g.add_edge(v, v, 1);
        }
    }
    g
}

fn arb_game(max_n: usize, prios: u32) -> impl Strategy<Value = ParityGame> {
    (1..=max_n)
        .prop_flat_map(move |n| {
            (
                Just(n),
                prop::collection::vec(any::<bool>(), n),
                prop::collection::vec((0..n, 0..n, 0..prios), n..=2 * n),
            )
        })
        .prop_map(|(n, owners, edges)| game(n, &owners, &edges))
}

/// Winner from every vertex by enumerating all pairs of positional strategies.
fn winners_by_strategy_pairs(g: &ParityGame) -> Vec<Player> {
    let n = g.num_vertices();
    let choices = |p: Player| -> Vec<Vec<usize>> {
        let mut all = vec![vec![0; n]];
        for v in 0..n {
            if g.owner[v] == p {
                all = all
                    .into_iter()
                    .flat_map(|s| {
                        g.out[v].iter().map(move |&e| {
                            let mut s = s.clone();
                            s[v] = e;
                            s
                        })
                    })
                    .collect();
            }
        }
        all
    };
    let (eve, adam) = (choices(Player::Eve), choices(Player::Adam));
    let eve_wins = |v0: usize, se: &[usize], sa: &[usize]| {
        let mut first = vec![None; n];
        let mut prios = Vec::new();
        let mut v = v0;
        loop {
            if let Some(i) = first[v] {
                let m: u32 = prios[i..].iter().copied().min().unwrap();
                return m % 2 == 0;
            }
            first[v] = Some(prios.len());
            let e = if g.owner[v] == Player::Eve { se[v] } else { sa[v] };
            prios.push(g.edges[e].2);
            v = g.edges[e].1;
        }
    };
    (0..n)
        .map(|v| {
            if eve.iter().any(|se| adam.iter().all(|sa| eve_wins(v, se, sa))) {
                Player::Eve
            } else {
                Player::Adam
            }
        })
        .collect()
}

#[test]
fn small_games_by_hand() {
    // Eve picks between an even self-loop and an odd cycle.
    let g = game(2, &[true, false], &[(0, 0, 2), (0, 1, 1), (1, 0, 1)]);
    let sol = solve_parity(&g).unwrap();
    assert_eq!(sol.winner, [Player::Eve, Player::Eve]);
    assert_eq!(g.edges[sol.strategy[0].unwrap()].1, 0);

    // Adam can escape to an odd self-loop.
    let g = game(2, &[true, false], &[(0, 1, 0), (1, 0, 0), (1, 1, 3)]);
    assert_eq!(solve_parity(&g).unwrap().winner, [Player::Adam, Player::Adam]);
}

#[test]
fn dead_ends_are_rejected() {
    let mut g = ParityGame::new(vec![Player::Eve, Player::Adam]);
    g.add_edge(0, 1, 0);
    assert!(g.check().is_err());
    assert!(solve_parity(&g).is_err());
}

#[test]
fn ranks_count_odd_steps_before_zero() {
    // 0 -1-> 1 -1-> 2 -0-> 2.
    let g = game(3, &[false, true, true], &[(0, 1, 1), (1, 2, 1), (2, 2, 0)]);
    assert_eq!(compute_ranks(&g).unwrap().rank, [2, 1, 0]);
    // Adam losing from everywhere is a precondition failure.
    let g = game(1, &[true], &[(0, 0, 1)]);
    assert!(compute_ranks(&g).is_err());
}

#[test]
fn arena_text_round_trip() {
    let text = "vertex 0 Eve\nvertex 1 Adam\nedge 0 1 1,2\nedge 0 0 -\nedge 1 0 1,1\n";
    let a = GameArena::parse(text).unwrap();
    let b = GameArena::parse(&a.dump()).unwrap();
    assert_eq!(a.dump(), b.dump());
    assert!(GameArena::parse("vertex 0 Nobody\n").is_err());
}

#[test]
fn muller_solving_through_the_token_tree() {
    // Both components agree on every edge, so Eve wins.
    let text = "vertex 0 Adam\nvertex 1 Eve\nedge 0 1 1,1\nedge 0 1 2,2\nedge 1 0 2,2\nedge 1 0 1,1\n";
    let a = GameArena::parse(text).unwrap();
    let tree = build_tree(&token_condition(&[(1, 2), (1, 2)])).unwrap();
    assert_eq!(solve_muller(&a, &tree).unwrap(), Player::Eve);
    // Adam can keep his component even at 2 while Eve's stays odd.
    let text = "vertex 0 Adam\nvertex 1 Eve\nedge 0 1 1,2\nedge 0 1 2,1\nedge 1 0 1,2\n";
    let a = GameArena::parse(text).unwrap();
    assert_eq!(solve_muller(&a, &tree).unwrap(), Player::Adam);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn solver_matches_strategy_pair_enumeration(g in arb_game(5, 4)) {
        let sol = solve_parity(&g).unwrap();
        prop_assert_eq!(&sol.winner, &winners_by_strategy_pairs(&g));
        prop_assert_eq!(&sol.winner, &brute_force_winners(&g));
        for p in [Player::Eve, Player::Adam] {
            prop_assert!(verify_strategy(&g, &sol.strategy_of(&g, p), p, &sol.region(p)).unwrap());
        }
    }

    #[test]
    fn shifting_priorities_by_two_keeps_winners(g in arb_game(6, 4)) {
        let mut h = g.clone();
        for e in &mut h.edges {
            e.2 += 2;
        }
        prop_assert_eq!(solve_parity(&g).unwrap().winner, solve_parity(&h).unwrap().winner);
    }

    #[test]
    fn ranks_match_enumeration(g in arb_game(6, 3)) {
        let sol = solve_parity(&g).unwrap();
        let region = sol.region(Player::Eve);
        prop_assume!(region.count_ones(..) > 0);
        let (sub, _) = g.restrict(&region);
        prop_assume!(sub.check().is_ok());
        let table = compute_ranks(&sub).unwrap();
        let want: Vec<u32> = ranks_by_enumeration(&sub).into_iter().map(|r| r.unwrap()).collect();
        prop_assert_eq!(table.rank, want);
    }
}
