mod common;

use common::{det_member, member_oracle, params};
use hdtk::automaton::{random_hd_automaton, random_split_automaton};
use hdtk::buchi::{as_buchi, determinize_hd_buchi, opt_ranks, reach_covering_witness};
use hdtk::hd::check_hd;
use hdtk::{Error, LassoWord};
use proptest::prelude::*;

#[test]
fn parity_input_is_rejected() {
    let c = common::fixture("fixC.tpa");
    assert!(matches!(as_buchi(&c), Err(Error::Precondition(_))));
    assert!(matches!(determinize_hd_buchi(&c), Err(Error::Precondition(_))));
}

#[test]
fn non_hd_input_is_rejected() {
    let found = (0..200u64).find_map(|seed| {
        let (a, _) = random_split_automaton(seed, &params(7, 2, 0, 1)).ok()?;
        (!check_hd(&a).ok()?.hd).then_some(a)
    });
    let a = found.expect("a non-HD split automaton among 200 seeds");
    assert!(matches!(determinize_hd_buchi(&a), Err(Error::Precondition(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn determinization_is_quadratic_and_exact(seed in any::<u64>(), n in 3..8usize) {
        let (a, seed_det) = random_hd_automaton(seed, &params(n, 2, 0, 1)).unwrap();
        let det = determinize_hd_buchi(&a).unwrap();
        let d = &det.automaton;
        prop_assert!(d.is_deterministic() && d.is_complete());
        prop_assert!(d.num_states() <= a.num_states() * a.num_states());
        prop_assert!(d.transitions.iter().all(|t| t.prio <= 1));
        for w in LassoWord::enumerate(2, 3, 3) {
            prop_assert_eq!(det_member(d, &w), member_oracle(&a, &w));
            prop_assert_eq!(det_member(d, &w), det_member(&seed_det, &w));
        }
        // After rank reduction every state has optimal rank zero and the
        // automaton is reach-covering.
        let reduced = &det.reduction.automaton;
        prop_assert!(opt_ranks(reduced).unwrap().iter().all(|&r| r == 0));
        prop_assert!(reach_covering_witness(reduced).unwrap().holds());
    }
}
