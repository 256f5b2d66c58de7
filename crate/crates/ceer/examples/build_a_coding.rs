//! Selecting a coding table from an enumeration: a sparse subsequence
//! whose selected pairs keep their row's first coordinate while the
//! second coordinates race ahead of everything seen so far.
//!
//! Run with: cargo run --example build_a_coding

use ceer::builtins::{full_enumerator, mod_relation, sweep_enumerator};
use ceer::coding::{check_coding_conditions, Coding, CodingTable};

fn main() {
    // The full relation (everything related to everything) enumerated by
    // the exponent pairing: index 2^a(2b+1) carries the pair (a, b).
    let mut table = CodingTable::new(full_enumerator());
    table.extend_to(3).unwrap();
    println!("full relation, first three entries:");
    for n in 1..=3 {
        println!("  entry {n}: index {} selects {:?}", table.chi_at(n), table.pi_at(n));
    }

    // The selection rule forces strictly increasing indices, preserved
    // first coordinates, and strictly climbing second coordinates. The
    // audit re-checks every clause on the filled prefix.
    let report = check_coding_conditions(&table);
    println!("\naudit: all clauses pass = {}", report.all_pass());
    print!("{report}");

    // The same machinery on a sampled relation: congruence mod 3,
    // enumerated by sweeping the diagonal of ℕ² and emitting each related
    // pair (with a harmless placeholder where the sweep hits an unrelated
    // slot, to stay total).
    let mut sampled = CodingTable::new(sweep_enumerator(&mod_relation(3)));
    sampled.extend_to(6).unwrap();
    println!("\nmod 3 over the diagonal sweep:");
    println!("  chi prefix: {:?}", sampled.chi_prefix());
    println!("  pi  prefix: {:?}", sampled.pi_prefix());
    assert!(check_coding_conditions(&sampled).all_pass());

    // Searches are budgeted: every enumeration lookup draws from a fuel
    // allowance per entry, and running dry is an explicit, resumable
    // outcome rather than a hang.
    let mut starved = CodingTable::with_fuel(full_enumerator(), 3);
    match starved.extend_to(1) {
        Ok(()) => unreachable!("three lookups cannot reach index 5"),
        Err(e) => println!("\nstarved search reports: {e}"),
    }
    starved.set_fuel(1000);
    starved.extend_to(1).unwrap();
    println!("after a refuel the same table resumes and finds chi(1) = {}", starved.chi_at(1));
}
