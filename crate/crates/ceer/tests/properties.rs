//! Law-level property tests: relation algebra, the sequence codec, walk
//! structure, and query budgets of the derived deciders.

use num_bigint::BigUint;
use proptest::prelude::*;

use ceer::builtins::{diagonal_index, mod_relation, sweep_enumerator};
use ceer::coding::{Coding, CodingTable};
use ceer::derived::{in_f, in_r, in_s, in_t};
use ceer::relation::FiniteRelation;
use ceer::seq_codec::{beta, decode_items, decode_seq, encode_seq, is_valid_code};
use ceer::walks::Walk;

// --- strategies ----------------------------------------------------------

/// An arbitrary relation on [0, bound] with a shared bound.
fn relations(n: usize) -> impl Strategy<Value = Vec<FiniteRelation>> {
    (3u64..=9).prop_flat_map(move |bound| {
        proptest::collection::vec(
            proptest::collection::vec((0..=bound, 0..=bound), 0..=20),
            n,
        )
        .prop_map(move |pair_lists| {
            pair_lists
                .into_iter()
                .map(|pairs| FiniteRelation::from_pairs(bound, pairs).expect("pairs in bound"))
                .collect()
        })
    })
}

fn relation() -> impl Strategy<Value = FiniteRelation> {
    relations(1).prop_map(|mut v| v.pop().expect("one relation"))
}

/// An equivalence relation on [0, bound], built from a class assignment.
fn equivalence() -> impl Strategy<Value = FiniteRelation> {
    (3u64..=9).prop_flat_map(|bound| {
        proptest::collection::vec(0u8..4, (bound + 1) as usize).prop_map(move |labels| {
            let mut pairs = Vec::new();
            for i in 0..=bound {
                for j in 0..=bound {
                    if labels[i as usize] == labels[j as usize] {
                        pairs.push((i, j));
                    }
                }
            }
            FiniteRelation::from_pairs(bound, pairs).expect("pairs in bound")
        })
    })
}

fn nonzero_item() -> impl Strategy<Value = i64> {
    (1i64..=40, any::<bool>()).prop_map(|(m, neg)| if neg { -m } else { m })
}

fn items() -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(nonzero_item(), 1..=8)
}

// --- relation algebra ------------------------------------------------------

proptest! {
    #[test]
    fn composition_is_associative(rs in relations(3)) {
        let (a, b, c) = (&rs[0], &rs[1], &rs[2]);
        let left = a.compose(b).unwrap().compose(c).unwrap();
        let right = a.compose(&b.compose(c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn converse_is_an_involution(r in relation()) {
        prop_assert_eq!(r.converse().converse(), r);
    }

    #[test]
    fn converse_reverses_composition(rs in relations(2)) {
        let (a, b) = (&rs[0], &rs[1]);
        let left = a.compose(b).unwrap().converse();
        let right = b.converse().compose(&a.converse()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn converse_distributes_over_union(rs in relations(2)) {
        let (a, b) = (&rs[0], &rs[1]);
        let left = a.union(b).unwrap().converse();
        let right = a.converse().union(&b.converse()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn transitive_closure_is_reachability(r in relation()) {
        // Independent oracle: breadth-first search along at least one step.
        let tc = r.transitive_closure_bf();
        for i in 0..=r.bound() {
            let mut reach = std::collections::BTreeSet::new();
            let mut queue = std::collections::VecDeque::from([i]);
            while let Some(v) = queue.pop_front() {
                for (x, y) in r.pairs() {
                    if x == v && reach.insert(y) {
                        queue.push_back(y);
                    }
                }
            }
            for j in 0..=r.bound() {
                prop_assert_eq!(
                    tc.contains(i, j),
                    reach.contains(&j),
                    "closure disagrees with reachability at ({}, {})", i, j
                );
            }
        }
    }

    #[test]
    fn transitive_closure_is_idempotent(r in relation()) {
        let once = r.transitive_closure_bf();
        prop_assert_eq!(once.transitive_closure_bf(), once);
    }

    #[test]
    fn transitive_closure_is_monotone(rs in relations(2)) {
        let (a, b) = (&rs[0], &rs[1]);
        let union = a.union(b).unwrap();
        prop_assert!(a.transitive_closure_bf().is_subset_of(&union.transitive_closure_bf()));
    }

    #[test]
    fn lattice_join_is_the_least_upper_equivalence(es in proptest::collection::vec(equivalence(), 2)) {
        // Same bound is not guaranteed by the strategy; restrict to the smaller.
        let bound = es[0].bound().min(es[1].bound());
        let a = es[0].restrict(bound);
        let b = es[1].restrict(bound);
        let join = a.lattice_join(&b).unwrap();
        prop_assert!(a.is_subset_of(&join));
        prop_assert!(b.is_subset_of(&join));
        prop_assert!(join.is_equivalence(0..=bound));
        // Least: any equivalence containing both contains the join.
        // The union's closure *is* the join, so closing twice adds nothing.
        let upper = a.union(&b).unwrap().transitive_closure_bf();
        prop_assert!(join.is_subset_of(&upper));
        prop_assert!(upper.is_subset_of(&join));
    }

    #[test]
    fn classes_partition_the_window(e in equivalence()) {
        let partition = e.classes();
        let mut seen = std::collections::BTreeSet::new();
        for class in &partition.classes {
            prop_assert!(!class.is_empty());
            for &x in class {
                prop_assert!(seen.insert(x), "element {} in two classes", x);
            }
            // Classes are exactly the orbits of their members.
            for &x in class {
                prop_assert_eq!(&partition.class_of(x), class);
            }
        }
        let field = e.field();
        prop_assert_eq!(seen, field);
    }
}

// --- sequence codec ----------------------------------------------------

proptest! {
    #[test]
    fn codec_roundtrips(seq in items()) {
        let code = encode_seq(&seq).unwrap();
        prop_assert!(is_valid_code(code.value()));
        prop_assert_eq!(decode_items(code.value()), Some(seq.clone()));
        // The total accessor agrees with the list view.
        prop_assert_eq!(decode_seq(code.value(), 0), seq.len() as i64);
        for (idx, &item) in seq.iter().enumerate() {
            prop_assert_eq!(decode_seq(code.value(), idx as u64 + 1), item);
        }
        prop_assert_eq!(decode_seq(code.value(), seq.len() as u64 + 1), 0);
    }

    #[test]
    fn codec_is_injective(a in items(), b in items()) {
        let ca = encode_seq(&a).unwrap();
        let cb = encode_seq(&b).unwrap();
        prop_assert_eq!(a == b, ca == cb);
    }

    #[test]
    fn codes_stay_under_the_level_bound(
        (k, seq) in (1u64..=8).prop_flat_map(|k| {
            let item = (1i64..=k as i64, any::<bool>())
                .prop_map(|(m, neg)| if neg { -m } else { m });
            (Just(k), proptest::collection::vec(item, 1..=k as usize))
        })
    ) {
        let code = encode_seq(&seq).unwrap();
        prop_assert!(
            code.value() <= &beta(k),
            "code {} of {:?} above the level-{} bound", code.value(), seq, k
        );
    }

    #[test]
    fn decoding_is_a_partial_inverse(z in any::<u64>()) {
        // Whenever an arbitrary numeral decodes, re-encoding reproduces it.
        let z = BigUint::from(z);
        if let Some(seq) = decode_items(&z) {
            prop_assert!(is_valid_code(&z));
            let reencoded = encode_seq(&seq).unwrap();
            prop_assert_eq!(reencoded.value(), &z);
        } else {
            prop_assert!(!is_valid_code(&z));
        }
    }
}

#[test]
fn empty_sequence_has_no_valid_code() {
    let code = encode_seq(&[]).unwrap();
    assert_eq!(code.value(), &BigUint::from(0u32));
    assert!(!is_valid_code(code.value()));
    assert_eq!(decode_items(code.value()), None);
}

#[test]
fn zero_items_are_rejected() {
    assert!(encode_seq(&[3, 0, -1]).is_err());
}

// --- walks ---------------------------------------------------------------

proptest! {
    #[test]
    fn signed_steps_roundtrip(steps in proptest::collection::vec(nonzero_item(), 1..=12)) {
        let walk = Walk::from_signed(&steps).expect("nonzero steps");
        prop_assert_eq!(walk.signed(), steps.clone());
        prop_assert_eq!(walk.len(), steps.len());
    }

    #[test]
    fn zero_steps_are_rejected(prefix in proptest::collection::vec(nonzero_item(), 0..=4)) {
        let mut steps = prefix;
        steps.push(0);
        prop_assert!(Walk::from_signed(&steps).is_none());
    }

    #[test]
    fn block_shapes_are_recognized(
        back in proptest::collection::vec(1i64..=30, 0..=6),
        fore in proptest::collection::vec(1i64..=30, 0..=6),
    ) {
        prop_assume!(!back.is_empty() || !fore.is_empty());
        let steps: Vec<i64> =
            back.iter().map(|&k| -k).chain(fore.iter().copied()).collect();
        let walk = Walk::from_signed(&steps).expect("nonzero steps");
        prop_assert_eq!(walk.backward_forward_split(), Some(back.len()));
    }

    #[test]
    fn forward_before_backward_breaks_the_shape(
        prefix in proptest::collection::vec(nonzero_item(), 0..=4),
        fore in 1i64..=30,
        back in 1i64..=30,
        suffix in proptest::collection::vec(nonzero_item(), 0..=4),
    ) {
        let mut steps = prefix;
        steps.push(fore);
        steps.push(-back);
        steps.extend(suffix);
        let walk = Walk::from_signed(&steps).expect("nonzero steps");
        prop_assert_eq!(walk.backward_forward_split(), None);
    }

    #[test]
    fn mirror_walks_connect_a_pair_to_itself(n in 1u64..=50) {
        // pair_of is arbitrary but fixed: entry k covers (k + 1, 2k + 3).
        let pair_of = |k: u64| ceer::relation::NodePair::new(k + 1, 2 * k + 3);
        let down_up = Walk::from_signed(&[-(n as i64), n as i64]).unwrap();
        prop_assert!(down_up.connects_with(2 * n + 3, 2 * n + 3, pair_of));
        let up_down = Walk::from_signed(&[n as i64, -(n as i64)]).unwrap();
        prop_assert!(up_down.connects_with(n + 1, n + 1, pair_of));
        prop_assert!(!down_up.connects_with(2 * n + 3, n + 1, pair_of));
    }
}

// --- decider query budgets ------------------------------------------------

/// After the table is extended past the window, the selected-pair and
/// mirror deciders answer from the prefix: at most two enumeration
/// lookups per question (the two source pairs), none for the others.
#[test]
fn prefix_deciders_use_constant_queries_after_extension() {
    let window = 25u64;
    let nu = sweep_enumerator(&mod_relation(3));
    let mut t = CodingTable::new(nu);
    t.ensure_second_above(window).expect("window within fuel");

    let counter = t.nu().clone();
    for i in 0..=window {
        for j in 0..=window {
            let before = counter.queries();
            in_r(&mut t, i, j).unwrap();
            let after_r = counter.queries();
            assert_eq!(after_r - before, 0, "selected-pair lookup queried at ({i}, {j})");

            in_s(&mut t, i, j).unwrap();
            let after_s = counter.queries();
            assert!(after_s - after_r <= 2, "mirror check queried {} times", after_s - after_r);

            in_t(&mut t, i, j).unwrap();
            let after_t = counter.queries();
            assert!(after_t - after_s <= 2, "equal-source check queried {} times", after_t - after_s);

            if i != j {
                in_f(&mut t, i, j).unwrap();
                assert_eq!(counter.queries(), after_t, "connectivity queried off the diagonal");
            }
        }
    }
}

/// Diagonal connectivity may scan the enumeration for a first coordinate,
/// but never past the first index that shows it — a window-bounded cost.
#[test]
fn diagonal_connectivity_scan_is_window_bounded() {
    let window = 25u64;
    let nu = sweep_enumerator(&mod_relation(3));
    let mut t = CodingTable::new(nu);
    t.ensure_second_above(window).expect("window within fuel");

    let counter = t.nu().clone();
    for i in 0..=window {
        let before = counter.queries();
        assert!(in_f(&mut t, i, i).unwrap(), "diagonal holds on a total relation");
        let spent = counter.queries() - before;
        // The sweep shows first coordinate i no later than the (i, 0) slot.
        assert!(
            spent <= diagonal_index(i, 0),
            "diagonal scan at {i} spent {spent} queries"
        );
    }
}
