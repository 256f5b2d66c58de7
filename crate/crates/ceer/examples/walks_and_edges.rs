//! Enumerations hand out node pairs by index; signed indices traverse
//! those pairs forwards or backwards, and walks chain them together.
//!
//! Run with: cargo run --example walks_and_edges

use ceer::walks::{eta, is_walk, tau, Enumerator, SignedEdge, Walk};

fn main() {
    // An enumeration is any total function from positive indices to node
    // pairs. This one lists a few edges of the full relation and parks
    // everything else on a far-away loop.
    let nu = Enumerator::new("demo", |k| match k {
        1 => (0, 2).into(),
        2 => (1, 3).into(),
        3 => (0, 7).into(),
        _ => (99, 99).into(),
    });

    // A positive index walks its pair first-to-second; a negative index
    // walks it second-to-first. tau gives the start, eta the end.
    for step in [1i64, -1, 3, -3] {
        let edge = SignedEdge::new(step).unwrap();
        println!(
            "step {step:>2}: {} -> {}  (edge {} of `{}`)",
            tau(edge, &nu),
            eta(edge, &nu),
            edge.index(),
            nu.label(),
        );
    }

    // Walks are nonempty signed sequences. This one runs 2 -> 0 -> 7:
    // backward over entry 1, then forward over entry 3.
    let walk = Walk::from_signed(&[-1, 3]).unwrap();
    assert!(is_walk(&walk, 2, 7, &nu));
    println!("\n[-1, 3] connects 2 to 7: {}", is_walk(&walk, 2, 7, &nu));
    println!("[-1, 3] connects 2 to 3: {}", is_walk(&walk, 2, 3, &nu));

    // Minimal walks always look like backwards-then-forwards. The split
    // point counts the backward block.
    println!("\nblock shape of [-1, 3]: split at {:?}", walk.backward_forward_split());
    let zigzag = Walk::from_signed(&[2, -2, 2]).unwrap();
    println!("block shape of [2, -2, 2]: {:?}", zigzag.backward_forward_split());

    // Every lookup through an enumeration is counted; budgets elsewhere in
    // the crate are expressed in these query counts.
    let before = nu.queries();
    let _ = nu.pair(1);
    let _ = nu.pair(2);
    println!("\nqueries before: {before}, after two lookups: {}", nu.queries());
}
