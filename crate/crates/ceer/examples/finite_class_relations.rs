//! Relations whose classes are finite behave differently: coding
//! searches stall (that stall is a theorem, not a bug), and membership
//! questions reduce to finite data — a stream of exponents, a set of
//! chosen evens, an explicit partition.
//!
//! Run with: cargo run --example finite_class_relations

use ceer::builtins::{
    adjacent_pairs_relation, partition_relation, triple_join_parts, triple_join_relation,
};
use ceer::coding::CodingTable;
use ceer::builtins::sweep_enumerator;

fn main() {
    // A relation built from a stream (2, 3, 7): position n couples the
    // even number 2n with the powers 3^s and 5^s, s the streamed value.
    // Every class is a triple {2n, 3^s, 5^s} or a singleton.
    let eta = [2u64, 3, 7];
    let joined = triple_join_relation(&eta).unwrap();
    println!("classes of the triple join on [0, 130]:");
    for class in &joined.window(130).classes().classes {
        if class.len() > 1 {
            println!("  {class:?}");
        }
    }

    // The join arises from two pieces with classes of size at most 2;
    // membership of s in the stream reduces to one pair question.
    let (f, g) = triple_join_parts(&eta).unwrap();
    println!(
        "\npieces share the even anchor: F(2, 9) = {}, G(2, 25) = {}, F(9, 25) = {}",
        f.related(2, 9),
        g.related(2, 25),
        f.related(9, 25),
    );
    println!("stream contains 3 ⟺ join relates 3³ = 27 and 5³ = 125: {}", joined.related(27, 125));
    println!("stream misses  1 ⟺ join keeps 3 and 5 apart: {}", !joined.related(3, 5));

    // Adjacent pairs: each chosen number a couples 2a with 2a + 1.
    let pairs = adjacent_pairs_relation(&[3]);
    println!(
        "\nadjacent-pairs({{3}}): 6 ~ 7 is {}, 4 ~ 5 is {}",
        pairs.related(6, 7),
        pairs.related(4, 5)
    );

    // Explicit partitions: listed classes, the rest by residue.
    let custom = partition_relation(&[vec![0, 5, 10], vec![1, 6]], 4).unwrap();
    println!("partition: 5 ~ 10 is {}, 2 ~ 6 is {}", custom.related(5, 10), custom.related(2, 6));

    // The dividing line: a coding needs second coordinates that grow
    // forever along related pairs, which only infinite classes provide.
    // On a finite-class relation the search runs its budget dry — the
    // informative outcome.
    let mut table = CodingTable::with_fuel(sweep_enumerator(&pairs), 50_000);
    match table.extend_to(3) {
        Ok(()) => unreachable!("no finite-class enumeration passes the selection rule for long"),
        Err(e) => println!("\ncoding search over adjacent-pairs: {e}"),
    }
}
