//! The whole verification harness: every suite over the built-in
//! relations, with one reproducible configuration.
//!
//! Run with: cargo run --example verify_all
//! The binary exposes the same battery as `ceer verify [--json]`.

use ceer::builtins::RelationSpec;
use ceer::harness::{run_all, verify_spec, WindowConfig};

fn main() {
    // Window, per-entry search budget, and sampling seed pin down every
    // byte of the output; rerunning reproduces it exactly.
    let cfg = WindowConfig { window: 20, ..WindowConfig::default() };
    println!(
        "running the full battery (window {}, fuel {}, seed {:#x})\n",
        cfg.window, cfg.fuel, cfg.seed
    );

    let reports = run_all(&cfg);
    for report in &reports {
        print!("{report}");
    }
    let failures: usize = reports.iter().map(|r| r.failures()).sum();
    let inconclusive: usize = reports.iter().map(|r| r.inconclusive()).sum();
    println!("\n{} reports: {failures} failures, {inconclusive} inconclusive", reports.len());

    // Single relations verify through their spec; the suites picked
    // depend on whether the classes are infinite (coding-based suites)
    // or finite (stall checks plus any reduction the construction has).
    let spec: RelationSpec = serde_json::from_str(r#"{"kind":"mod","modulus":5}"#).unwrap();
    let solo = verify_spec(&spec, &cfg).unwrap();
    println!(
        "mod 5 alone runs {} suites: {:?}",
        solo.len(),
        solo.iter().map(|r| r.suite.as_str()).collect::<Vec<_>>()
    );
}
