//! Finite relations as first-class values: composition, converses,
//! transitive closures, lattice joins, and equivalence classes.
//!
//! Run with: cargo run --example relation_algebra

use ceer::relation::FiniteRelation;

fn main() {
    // A relation on the window [0, 9] is just a set of pairs with a bound.
    let bound = 9;
    let r = FiniteRelation::from_pairs(bound, vec![(0, 2), (2, 4), (4, 6), (1, 3)]).unwrap();
    let s = FiniteRelation::from_pairs(bound, vec![(2, 1), (4, 8), (3, 5)]).unwrap();

    // Composition chains pairs: (i, k) when some j has (i, j) in r and
    // (j, k) in s.
    let rs = r.compose(&s).unwrap();
    println!("r ∘ s = {:?}", rs.pairs().collect::<Vec<_>>());

    // The converse flips every pair; composing with it creates the
    // round trips that transitive closures then collapse.
    let sym = r.union(&r.converse()).unwrap();
    let closed = sym.transitive_closure_bf();
    println!("tc(r ∪ r⁻¹) has {} pairs on field {:?}", closed.len(), closed.field());

    // Add the identity to get a genuine equivalence on the window, then
    // read off its classes.
    let mut with_diagonal = closed.clone();
    for i in 0..=bound {
        with_diagonal.insert(i, i).unwrap();
    }
    assert!(with_diagonal.is_equivalence(0..=bound));
    println!("classes:");
    for class in &with_diagonal.classes().classes {
        println!("  {class:?}");
    }

    // The lattice join of two equivalences is the least equivalence
    // containing both — the transitive closure of their union.
    let evens_odds = FiniteRelation::from_pairs(
        bound,
        (0..=bound).flat_map(|i| (0..=bound).map(move |j| (i, j))).filter(|&(i, j)| i % 2 == j % 2),
    )
    .unwrap();
    let join = with_diagonal.lattice_join(&evens_odds).unwrap();
    println!("join with the parity relation has {} classes", join.classes().classes.len());

    // Anything windowed can be rendered for Graphviz.
    let tiny = FiniteRelation::from_pairs(4, vec![(0, 1), (1, 0), (2, 3), (3, 2)]).unwrap();
    println!("\nDOT output for a symmetric relation:\n{}", tiny.to_dot("pairs"));
}
