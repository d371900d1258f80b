mod common;

use common::{fixture, lasso, member_oracle, params};
use hdtk::automaton::{
    random_automaton, random_hd_automaton, random_split_automaton, validate_and_complete, CompletionMode,
};
use hdtk::hd::{check_hd, hd_oracle_vs_det, Certificate};
use hdtk::token::{
    build_g2_explicit, build_lookahead, eve_wins_g1, eve_wins_g2, eve_wins_gk, eve_wins_joker, extract_subautomaton,
    simulates, wins_everywhere, Everywhere, ExtractMode,
};
use hdtk::{ParityAutomaton, Player};
use proptest::prelude::*;

fn complete(a: &ParityAutomaton) -> ParityAutomaton {
    validate_and_complete(a, CompletionMode::AddRejectingSink).unwrap()
}

#[test]
fn fixture_verdicts() {
    let a = fixture("fixA.tpa");
    assert!(eve_wins_g1(&a).unwrap());
    assert!(!eve_wins_g2(&a).unwrap());
    assert!(!eve_wins_joker(&a).unwrap());
    assert!(!check_hd(&a).unwrap().hd);

    let b = fixture("figB.tpa");
    assert!(check_hd(&b).unwrap().hd);
    assert!(eve_wins_joker(&b).unwrap());
    assert!(eve_wins_g1(&b).unwrap());

    let c = fixture("fixC.tpa");
    assert_eq!((c.lo, c.hi), (1, 3));
    assert!(eve_wins_joker(&c).unwrap());
    assert!(!eve_wins_g2(&c).unwrap());
    let q = c.initial;
    assert_eq!(
        build_g2_explicit(&c, &[(q, q, q)]).unwrap().winner().unwrap(),
        Player::Adam
    );
}

#[test]
fn certificates_verify_and_round_trip() {
    for name in ["fixA.tpa", "figB.tpa", "fixC.tpa"] {
        let v = check_hd(&fixture(name)).unwrap();
        assert!(v.certificate.verify().unwrap());
        let back = Certificate::parse(&v.certificate.dump()).unwrap();
        assert_eq!(back.winner, v.certificate.winner);
        assert!(back.verify().unwrap());
    }
}

#[test]
fn tampered_certificate_is_rejected() {
    let v = check_hd(&fixture("fixA.tpa")).unwrap();
    let mut c = v.certificate.clone();
    c.winner = c.winner.opponent();
    c.strategy = c.strategy.iter().map(|_| None).collect();
    assert!(!matches!(c.verify(), Ok(true)));
}

#[test]
fn deterministic_automata_are_hd() {
    let (_, d) = random_hd_automaton(7, &params(5, 2, 1, 3)).unwrap();
    assert!(check_hd(&d).unwrap().hd);
    assert!(wins_everywhere(&d, Everywhere::G2).unwrap().holds);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn token_game_implications(seed in any::<u64>(), n in 2..4usize, (lo, hi) in prop_oneof![Just((0, 1)), Just((1, 2)), Just((0, 2))]) {
        let a = complete(&random_automaton(seed, &params(n, 2, lo, hi)).unwrap());
        let g1 = eve_wins_g1(&a).unwrap();
        let g2 = eve_wins_g2(&a).unwrap();
        let joker = eve_wins_joker(&a).unwrap();
        prop_assert_eq!(g2, eve_wins_gk(&a, 3).unwrap());
        prop_assert!(!g2 || joker);
        prop_assert!(!joker || g1);
        prop_assert_eq!(build_lookahead(&a, 1).unwrap().winner().unwrap() == Player::Eve, g1);
    }

    #[test]
    fn hd_matches_letter_game_oracle(seed in any::<u64>(), n in 3..8usize, split in any::<bool>()) {
        let p = params(n, 2, 0, 2);
        let (a, d) = if split {
            random_split_automaton(seed, &p).unwrap()
        } else {
            random_hd_automaton(seed, &p).unwrap()
        };
        let a = complete(&a);
        let hd = check_hd(&a).unwrap().hd;
        prop_assert_eq!(hd, hd_oracle_vs_det(&a, &d).unwrap());
        if !split {
            prop_assert!(hd);
        }
    }

    #[test]
    fn simulation_implies_inclusion(s1 in any::<u64>(), s2 in any::<u64>(), w in lasso()) {
        let big = complete(&random_automaton(s1, &params(3, 2, 0, 2)).unwrap());
        let small = complete(&random_automaton(s2, &params(2, 2, 0, 2)).unwrap());
        prop_assert!(simulates(&big, &big).unwrap());
        if simulates(&big, &small).unwrap() {
            prop_assert!(!member_oracle(&small, &w) || member_oracle(&big, &w));
        }
    }

    #[test]
    fn extraction_keeps_language(seed in any::<u64>(), n in 3..7usize, w in lasso()) {
        let (a, d) = random_hd_automaton(seed, &params(n, 2, 0, 2)).unwrap();
        for (mode, every) in [(ExtractMode::TheoremI, Everywhere::G2), (ExtractMode::Joker, Everywhere::G1)] {
            let b = extract_subautomaton(&a, mode).unwrap();
            prop_assert!(b.is_complete());
            let inside = b.transitions.iter().all(|t| {
                a.transitions.iter().any(|u| {
                    a.states[u.src] == b.states[t.src]
                        && a.states[u.dst] == b.states[t.dst]
                        && (u.letter, u.prio) == (t.letter, t.prio)
                })
            });
            prop_assert!(inside);
            prop_assert!(wins_everywhere(&b, every).unwrap().holds);
            prop_assert_eq!(member_oracle(&b, &w), common::det_member(&d, &w));
        }
    }
}
