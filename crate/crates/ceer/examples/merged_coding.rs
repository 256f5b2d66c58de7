//! Two codings grown side by side from one fair enumeration, their
//! entries strictly interleaved — the engine behind splitting a relation
//! into a decidable piece and a totally reflexive bridge.
//!
//! Run with: cargo run --example merged_coding

use ceer::builtins::{mod_relation, sweep_enumerator};
use ceer::coding::{fair_enumeration, Coding};
use ceer::merged::MergedCoding;

fn main() {
    // Fairness matters here: both sides search the same stream, so every
    // pair must keep reappearing. The fair wrapper re-indexes any
    // enumeration so that index 2^a(2b+1) replays source index b + 1.
    let nu = fair_enumeration(&sweep_enumerator(&mod_relation(3)));
    let mut coding = MergedCoding::new(nu);
    coding.extend_to(6).unwrap();

    // The two index sequences (called xi and zeta) alternate strictly:
    // xi(1) < zeta(1) < xi(2) < zeta(2) < … — neither side ever laps the
    // other.
    println!("entry   xi  -> pair        zeta -> pair");
    for n in 1..=coding.filled() {
        println!(
            "{n:>5} {:>5} -> {:<10} {:>5} -> {:<10}",
            coding.xi_at(n),
            format!("{:?}", coding.pi_xi_at(n)),
            coding.zeta_at(n),
            format!("{:?}", coding.pi_zeta_at(n)),
        );
    }
    assert_eq!(coding.interleaving_violation(), None);
    println!("interleaving violations: none");

    // Each side is a full-fledged coding table on its own; the shared
    // audit accepts both.
    let (xi_report, zeta_report) = coding.check_both_sides();
    println!(
        "\nside audits pass: xi = {}, zeta = {}",
        xi_report.all_pass(),
        zeta_report.all_pass()
    );

    // The packed totals: mu interleaves both index sequences into one
    // strictly increasing numeral stream (handy for hashing a prefix).
    print!("mu prefix:");
    for n in 1..=4 {
        print!(" {}", coding.mu_at(n));
    }
    println!();

    // Sides can be borrowed as Coding implementations and fed to anything
    // that expects a single table — here, just deepen one side's view.
    let filled = {
        let mut xi = coding.xi_side();
        xi.ensure(4).unwrap();
        xi.filled()
    };
    println!("xi side exposes {filled} entries through the Coding trait");
}
