mod common;

use common::{member_oracle, params};
use hdtk::automaton::{random_hd_automaton, validate_and_complete, CompletionMode};
use hdtk::normal::{classify_states, coverage_check, normalize_even, validate_transformation, CoverageKind};
use hdtk::token::{wins_everywhere, Everywhere};
use hdtk::{Error, LassoWord};
use proptest::prelude::*;

#[test]
fn odd_lowest_priority_is_rejected() {
    let c = common::fixture("fixC.tpa");
    assert!(matches!(normalize_even(&c, false), Err(Error::Precondition(_))));
    assert!(matches!(classify_states(&c), Err(Error::Precondition(_))));
}

#[test]
fn paranoid_mode_agrees() {
    let (a, _) = random_hd_automaton(11, &params(6, 2, 0, 2)).unwrap();
    let a = validate_and_complete(&a, CompletionMode::AddRejectingSink).unwrap();
    let fast = normalize_even(&a, false).unwrap();
    let slow = normalize_even(&a, true).unwrap();
    assert_eq!(fast.automaton, slow.automaton);
    assert_eq!(fast.rounds.len(), slow.rounds.len());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn normal_form_properties(seed in any::<u64>(), n in 3..7usize) {
        let (a, _) = random_hd_automaton(seed, &params(n, 2, 0, 2)).unwrap();
        let a = validate_and_complete(&a, CompletionMode::AddRejectingSink).unwrap();
        prop_assume!(a.lo == 0 && wins_everywhere(&a, Everywhere::G2).unwrap().holds);
        let b = normalize_even(&a, false).unwrap().automaton;
        let cls = classify_states(&b).unwrap();
        let reach = b.reachable_states();
        for q in (0..b.num_states()).filter(|&q| reach[q]) {
            prop_assert_eq!(cls.opt[q], Some(0));
            prop_assert!(cls.right[q]);
        }
        prop_assert!(coverage_check(&b, CoverageKind::ZeroReachDouble).unwrap().holds());
        prop_assert!(validate_transformation(&a, &b).unwrap().all_pass());
        for w in LassoWord::enumerate(2, 2, 3) {
            prop_assert_eq!(member_oracle(&a, &w), member_oracle(&b, &w));
        }
    }
}
