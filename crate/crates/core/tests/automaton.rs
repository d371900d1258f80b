mod common;

use common::{det_member, lasso, member_oracle, params};
use hdtk::automaton::{
    approximate, parse_tpa, random_automaton, random_hd_automaton, serialize_tpa, validate_and_complete,
    weak_coreachability, Approximation, CompletionMode, ACC_SINK, REJ_SINK,
};
use hdtk::lasso::lasso_member;
use hdtk::{Error, LassoWord};
use proptest::prelude::*;

const SMALL: &str = "HDTK-TPA 1
alphabet: a b
states: p q
initial: p
trans: p a 0 q
trans: p b 1 p
trans: q a 2 q
trans: q b 1 p
";

fn parse_error_line(text: &str) -> usize {
    match parse_tpa(text) {
        Err(Error::Parse { line, .. }) => line,
        other => panic!("expected a parse error, got {other:?}"),
    }
}

#[test]
fn parses_and_derives_index() {
    let a = parse_tpa(SMALL).unwrap();
    assert_eq!(a.alphabet, ["a", "b"]);
    assert_eq!(a.states, ["p", "q"]);
    assert_eq!((a.lo, a.hi), (0, 2));
    assert_eq!(a.transitions.len(), 4);
    assert!(a.is_complete());
    assert!(a.is_deterministic());
}

#[test]
fn priorities_shift_by_an_even_amount() {
    let text = SMALL
        .replace(" 0 q", " 4 q")
        .replace(" 1 p", " 3 p")
        .replace(" 2 q", " 6 q");
    let a = parse_tpa(&text).unwrap();
    assert_eq!((a.lo, a.hi), (1, 4));
    let b = parse_tpa(&text.replace("initial: p", "initial: p\nindex: 2 7")).unwrap();
    assert_eq!((b.lo, b.hi), (0, 5));
}

#[test]
fn parse_errors_carry_line_numbers() {
    assert_eq!(parse_error_line("HDTK-TPA 2\n"), 1);
    assert_eq!(parse_error_line(&SMALL.replace("trans: q a 2 q", "trans: q z 2 q")), 7);
    assert_eq!(parse_error_line(&SMALL.replace("trans: q a 2 q", "trans: q a -2 q")), 7);
    assert_eq!(parse_error_line(&SMALL.replace("trans: q a 2 q", "trans: q a 2 r")), 7);
    assert_eq!(parse_error_line(&SMALL.replace("alphabet: a b", "alphabet: a $")), 2);
    assert_eq!(parse_error_line(&SMALL.replace("alphabet: a b", "alphabet: a a")), 2);
    assert_eq!(parse_error_line(&SMALL.replace("initial: p", "initial: r")), 4);
    assert_eq!(
        parse_error_line(&SMALL.replace("initial: p", "initial: p\nindex: 3 1")),
        5
    );
    assert_eq!(parse_error_line(&format!("{SMALL}bogus: 1\n")), 9);
    assert!(matches!(
        parse_tpa("HDTK-TPA 1\nalphabet: a\n"),
        Err(Error::Parse { .. })
    ));
}

#[test]
fn comments_and_blank_lines_are_ignored() {
    let text = format!(
        "# leading\n\n{}",
        SMALL.replace("trans: p b 1 p", "trans: p b 1 p   # loop")
    );
    assert_eq!(parse_tpa(&text).unwrap(), parse_tpa(SMALL).unwrap());
}

#[test]
fn completion_adds_one_rejecting_sink() {
    let a = parse_tpa(&SMALL.replace("trans: q b 1 p\n", "")).unwrap();
    assert!(matches!(
        validate_and_complete(&a, CompletionMode::Reject),
        Err(Error::Precondition(_))
    ));
    let b = validate_and_complete(&a, CompletionMode::AddRejectingSink).unwrap();
    assert!(b.is_complete());
    assert_eq!(b.states.last().unwrap(), REJ_SINK);
    assert_eq!(b.num_states(), 3);
    // Already complete: unchanged.
    let c = parse_tpa(SMALL).unwrap();
    assert_eq!(validate_and_complete(&c, CompletionMode::Reject).unwrap(), c);
}

#[test]
fn approximations_redirect_to_sinks() {
    let a = parse_tpa(SMALL).unwrap();
    let above0 = approximate(&a, Approximation::Above0).unwrap();
    assert_eq!(above0.states.last().unwrap(), ACC_SINK);
    assert!(above0.transitions.iter().all(|t| t.prio >= 1));
    assert_eq!(above0.lo, 1);

    let reach = approximate(&a, Approximation::Reach).unwrap();
    assert!(reach.transitions.iter().all(|t| t.prio <= 1));
    // A_reach accepts exactly the words that take a 0-transition: `a` first.
    let w = |u: Vec<usize>, v: Vec<usize>| LassoWord::new(u, v).unwrap();
    assert!(lasso_member(&reach, &w(vec![0], vec![1])).unwrap());
    assert!(!lasso_member(&reach, &w(vec![], vec![1])).unwrap());

    assert!(approximate(&a, Approximation::Safe).is_err());
    let shifted = parse_tpa(
        &SMALL
            .replace(" 0 q", " 2 q")
            .replace(" 2 q\ntrans: q b", " 4 q\ntrans: q b"),
    )
    .unwrap();
    let safe = approximate(&shifted, Approximation::Safe).unwrap();
    assert!(safe.transitions.iter().all(|t| t.prio == 1 || t.prio == 2));
    let above1 = approximate(&shifted, Approximation::Above1).unwrap();
    assert_eq!(above1.states.last().unwrap(), REJ_SINK);
}

#[test]
fn weak_coreachability_of_a_deterministic_automaton_is_trivial() {
    let a = parse_tpa(SMALL).unwrap();
    let wcr = weak_coreachability(&a);
    assert!(wcr.same_class(0, 0));
    assert!(!wcr.same_class(0, 1));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tpa_round_trip(seed in any::<u64>(), n in 1..6usize, m in 1..4usize, hi in 1..5u32) {
        let a = random_automaton(seed, &params(n, m, 0, hi)).unwrap();
        let b = parse_tpa(&serialize_tpa(&a)).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(serialize_tpa(&a), serialize_tpa(&b));
    }

    #[test]
    fn membership_matches_oracle(seed in any::<u64>(), n in 1..5usize, hi in 1..4u32, w in lasso()) {
        let a = random_automaton(seed, &params(n, 2, 0, hi)).unwrap();
        prop_assert_eq!(lasso_member(&a, &w).unwrap(), member_oracle(&a, &w));
    }

    #[test]
    fn deterministic_membership(seed in any::<u64>(), n in 1..5usize, w in lasso()) {
        let (_, d) = random_hd_automaton(seed, &params(n, 2, 0, 3)).unwrap();
        prop_assert_eq!(lasso_member(&d, &w).unwrap(), det_member(&d, &w));
    }

    #[test]
    fn hd_generator_preserves_language(seed in any::<u64>(), n in 2..8usize, w in lasso()) {
        let (a, d) = random_hd_automaton(seed, &params(n, 2, 0, 2)).unwrap();
        prop_assert!(d.is_deterministic() && d.is_complete());
        prop_assert_eq!(member_oracle(&a, &w), det_member(&d, &w));
    }

    #[test]
    fn completion_preserves_language(seed in any::<u64>(), n in 1..5usize, w in lasso()) {
        let mut a = random_automaton(seed, &params(n, 2, 0, 2)).unwrap();
        a.transitions.retain(|t| (t.src + t.letter + t.dst) % 3 != 0);
        let b = validate_and_complete(&a, CompletionMode::AddRejectingSink).unwrap();
        prop_assert!(b.is_complete());
        prop_assert_eq!(member_oracle(&a, &w), member_oracle(&b, &w));
    }

    #[test]
    fn above0_accepts_more(seed in any::<u64>(), n in 1..5usize, w in lasso()) {
        let a = random_automaton(seed, &params(n, 2, 0, 3)).unwrap();
        let b = approximate(&a, Approximation::Above0).unwrap();
        prop_assert!(!member_oracle(&a, &w) || member_oracle(&b, &w));
    }
}
