//! The decidable relations a coding table induces, each with a checkable
//! witness: selected pairs (R), mirrored and equal sources (S, T, and
//! their union H), bounded connectivity (F), and — over a merged coding —
//! the bridge J and its union G.
//!
//! Run with: cargo run --example derived_deciders

use ceer::builtins::{full_enumerator, mod_relation, sweep_enumerator};
use ceer::coding::{fair_enumeration, CodingTable};
use ceer::derived::{f_witness, in_f, in_f_formula, in_h, in_r, in_s, minimal_walk, r_witness};
use ceer::merged::MergedCoding;

fn main() {
    // All of R, S, T, H, F live over one coding table.
    let mut t = CodingTable::new(full_enumerator());

    // R holds exactly at the selected pairs; its witness is the entry.
    assert!(in_r(&mut t, 0, 2).unwrap());
    println!("R(0, 2) via entry {:?}", r_witness(&mut t, 0, 2).unwrap());
    assert!(!in_r(&mut t, 2, 0).unwrap(), "R is not symmetric");

    // S relates two selected seconds whose source pairs mirror each other;
    // H = S ∪ T additionally accepts equal sources (so H is reflexive on
    // the selected seconds — the field of H).
    println!("S(2, 2) = {}", in_s(&mut t, 2, 2).unwrap());
    println!("H(2, 2) = {}", in_h(&mut t, 2, 2).unwrap());

    // F is the equivalence the selected pairs generate. Away from the
    // diagonal it is decided exactly by a bounded union-find; the witness
    // is a minimal walk, backwards-then-forwards by construction.
    assert!(in_f(&mut t, 2, 7).unwrap());
    let walk = minimal_walk(&mut t, 2, 7).unwrap().unwrap();
    println!("\nF(2, 7) by walk {:?} (split {:?})", walk.signed(), walk.backward_forward_split());
    println!("full witness: {:?}", f_witness(&mut t, 2, 7).unwrap().unwrap());

    // The same answer the definitional way: scan every walk code up to
    // the level bound. Only tiny coordinate sums are feasible — that is
    // the point of having the union-find decider.
    let direct = in_f(&mut t, 1, 3).unwrap();
    let scanned = in_f_formula(&t, 1, 3).unwrap();
    println!("\nF(1, 3): decider {direct}, exhaustive walk-code scan {scanned}");
    println!("scan at larger sums: {:?}", in_f_formula(&t, 30, 40).unwrap_err());

    // J and G need the two-sided coding over a fair enumeration. J bridges
    // exactly the nodes the first side's field misses; G = H ∪ J therefore
    // touches every node.
    let nu = fair_enumeration(&sweep_enumerator(&mod_relation(3)));
    let mut merged = MergedCoding::new(nu);
    println!("\nover the merged coding of mod 3:");
    println!("  J(6, 12) = {}", merged.in_j(6, 12).unwrap());
    println!("  witness: {:?}", merged.j_witness(6, 12).unwrap().unwrap());
    println!("  G(9, 9)  = {}", merged.in_g(9, 9).unwrap());
    println!("  J(2, 3)  = {} (different classes)", merged.in_j(2, 3).unwrap());
}
