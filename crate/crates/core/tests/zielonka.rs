use hdtk::zielonka::{
    build_2token_condition, build_2token_tree_by_rules, build_implication_condition, build_tree, token_condition,
    MullerCondition, ZielonkaDag,
};
use proptest::prelude::*;

fn accepts(cond: &MullerCondition, mask: u64) -> bool {
    let set: Vec<usize> = (0..cond.len()).filter(|i| mask >> i & 1 == 1).collect();
    cond.accepts_indices(&set)
}

/// `(leaves, height)` of the Zielonka tree below `mask`, straight from the
/// definition: children are the maximal subsets of opposite acceptance.
fn naive_shape(cond: &MullerCondition, mask: u64) -> (usize, usize) {
    let acc = accepts(cond, mask);
    let mut flipped = Vec::new();
    let mut sub = (mask - 1) & mask;
    while sub != 0 {
        if accepts(cond, sub) != acc {
            flipped.push(sub);
        }
        sub = (sub - 1) & mask;
    }
    let maximal: Vec<u64> = flipped
        .iter()
        .copied()
        .filter(|&s| !flipped.iter().any(|&t| t != s && t & s == s))
        .collect();
    if maximal.is_empty() {
        return (1, 0);
    }
    let kids: Vec<(usize, usize)> = maximal.iter().map(|&s| naive_shape(cond, s)).collect();
    (
        kids.iter().map(|k| k.0).sum(),
        1 + kids.iter().map(|k| k.1).max().unwrap(),
    )
}

fn full(cond: &MullerCondition) -> u64 {
    (1u64 << cond.len()) - 1
}

#[test]
fn implication_leaf_counts() {
    for d in 1..=6u32 {
        let (_, t0) = build_implication_condition(1, d, 0).unwrap();
        let (_, t1) = build_implication_condition(1, d, 1).unwrap();
        assert_eq!(t0.num_branches() as u32, 1 + d / 2, "[0,{d}]");
        assert_eq!(t1.num_branches() as u32, 1 + d.div_ceil(2), "[1,{}]", d + 1);
    }
}

#[test]
fn implication_heights() {
    let got: Vec<Vec<usize>> = (0..=1)
        .map(|i| {
            (1..=6)
                .map(|d| build_implication_condition(1, d, i).unwrap().1.height())
                .collect()
        })
        .collect();
    assert_eq!(got, [vec![2, 2, 4, 4, 6, 6], vec![1, 3, 3, 5, 5, 7]]);
}

/// The height bound `d` for the second range `[i, i+d]` holds only when
/// `i + d` is even; see the frozen values in `implication_heights`.
#[test]
#[ignore = "height exceeds d by one when i + d is odd"]
fn implication_height_is_d() {
    for d in 1..=6u32 {
        for i in 0..=1u32 {
            let (_, t) = build_implication_condition(1, d, i).unwrap();
            assert_eq!(t.height(), d as usize, "[{i},{}]", i + d);
        }
    }
}

#[test]
fn implication_trees_match_the_definition() {
    for d in 1..=4u32 {
        for i in 0..=1u32 {
            let (cond, t) = build_implication_condition(1, d, i).unwrap();
            assert_eq!(
                (t.num_branches(), t.height()),
                naive_shape(&cond, full(&cond)),
                "d={d} i={i}"
            );
        }
    }
    assert!(build_implication_condition(1, 0, 0).is_err());
    assert!(build_implication_condition(1, 2, 2).is_err());
}

#[test]
fn two_token_trees() {
    // Leaves, height and DAG size on [0,d]^3. Checked against the definition
    // for d <= 1 (8 colours); beyond that, two builders agree and the values
    // are frozen.
    let expected = [(1, 0, 1), (1, 2, 3), (3, 4, 8), (8, 8, 24)];
    for d in 0..=3u32 {
        let (cond, tree, dag) = build_2token_condition(d).unwrap();
        let k = d as usize + 1;
        assert!(dag.num_nodes() <= k.pow(3));
        assert!(tree.height() <= 3 * k);
        assert!(tree.num_branches() <= 1 << (3 * k));
        assert_eq!(
            (tree.num_branches(), tree.height(), dag.num_nodes()),
            expected[d as usize],
            "d={d}"
        );
        if d <= 1 {
            assert_eq!((tree.num_branches(), tree.height()), naive_shape(&cond, full(&cond)));
        }
        let rules = build_2token_tree_by_rules(d);
        assert!(rules.same_shape(&build_tree(&cond).unwrap()));
        assert_eq!(ZielonkaDag::of(&rules).num_nodes(), tree.distinct_labels());
    }
}

#[test]
fn token_condition_with_one_adam_token() {
    let cond = token_condition(&[(0, 2), (0, 2)]);
    let tree = build_tree(&cond).unwrap();
    assert_eq!((tree.num_branches(), tree.height()), naive_shape(&cond, full(&cond)));
    assert_eq!(tree.iota, 0);
}

#[test]
fn dump_lists_every_node() {
    let tree = build_2token_tree_by_rules(1);
    let dump = tree.dump();
    assert_eq!(dump.lines().count(), tree.nodes.len());
    assert!(dump.starts_with("node 0 depth 0 pdepth 0 label {"));
}

fn arb_condition() -> impl Strategy<Value = MullerCondition> {
    (1..=4usize).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), (1 << n) - 1).prop_map(move |bits| {
            let colours: Vec<Vec<u32>> = (0..n as u32).map(|c| vec![c]).collect();
            let family: Vec<Vec<Vec<u32>>> = (1..1u64 << n)
                .filter(|&m| bits[m as usize - 1])
                .map(|m| (0..n as u32).filter(|c| m >> c & 1 == 1).map(|c| vec![c]).collect())
                .collect();
            MullerCondition::from_family(colours, &family).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn tree_shape_matches_definition(cond in arb_condition()) {
        let tree = build_tree(&cond).unwrap();
        prop_assert_eq!((tree.num_branches(), tree.height()), naive_shape(&cond, full(&cond)));
    }

    /// Feeding a periodic colour sequence, the least priority seen in the
    /// periodic part is even iff the cycle's colour set is accepting.
    #[test]
    fn transducer_decides_the_condition(
        cond in arb_condition(),
        prefix in prop::collection::vec(0..4usize, 0..4),
        cycle in prop::collection::vec(0..4usize, 1..6),
    ) {
        let n = cond.len();
        let prefix: Vec<usize> = prefix.into_iter().map(|c| c % n).collect();
        let cycle: Vec<usize> = cycle.into_iter().map(|c| c % n).collect();
        let tree = build_tree(&cond).unwrap();
        let mut b = 0;
        for &c in &prefix {
            b = tree.step(b, c).unwrap().1;
        }
        // Run until the branch at the start of the cycle repeats.
        let mut starts = vec![b];
        let mut mins = Vec::new();
        loop {
            let mut m = u32::MAX;
            for &c in &cycle {
                let (p, nb) = tree.step(b, c).unwrap();
                m = m.min(p);
                b = nb;
            }
            mins.push(m);
            if let Some(i) = starts.iter().position(|&s| s == b) {
                let least = *mins[i..].iter().min().unwrap();
                let mut set = cycle.clone();
                set.sort_unstable();
                set.dedup();
                prop_assert_eq!(least % 2 == 0, cond.accepts_indices(&set));
                break;
            }
            starts.push(b);
        }
    }
}
