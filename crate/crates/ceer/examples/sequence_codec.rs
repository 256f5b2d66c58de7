//! Packing sequences of nonzero integers into single naturals, with a
//! computable growth bound — the device that turns "some walk exists"
//! into a bounded search over numerals.
//!
//! Run with: cargo run --example sequence_codec

use ceer::seq_codec::{beta, decode_items, decode_seq, encode_seq, is_valid_code};
use num_bigint::BigUint;

fn main() {
    // Each item contributes a marker, a sign bit, and |item| zeros; the
    // digit string is read back deterministically.
    for seq in [vec![1], vec![-1], vec![2, -2], vec![-1, 3], vec![3, -3]] {
        let code = encode_seq(&seq).unwrap();
        println!("{seq:?} -> {code}");
    }

    // Roundtrip and the total item accessor: index 0 is the length,
    // 1..=n are the items, everything past the end is 0.
    let code = encode_seq(&[-1, 3]).unwrap();
    assert_eq!(decode_items(code.value()), Some(vec![-1, 3]));
    println!(
        "\ndecode_seq on {}: length {}, items ({}, {}), past-the-end {}",
        code.value(),
        decode_seq(code.value(), 0),
        decode_seq(code.value(), 1),
        decode_seq(code.value(), 2),
        decode_seq(code.value(), 3),
    );

    // Most numerals are not codes at all.
    let junk = BigUint::from(7u32);
    println!("7 is a valid code: {}", is_valid_code(&junk));

    // The level bound: every sequence with length and magnitudes at most k
    // encodes below beta(k) = 2^(1 + k(k + 2)). That cap is what keeps
    // exhaustive walk-code scans finite.
    for k in 1..=4u64 {
        println!("beta({k}) = {}", beta(k));
    }
    let tight = encode_seq(&[3, -3]).unwrap();
    assert!(tight.value() <= &beta(3));
    println!(
        "encode([3, -3]) = {} stays under beta(3) = {}",
        tight.value(),
        beta(3)
    );
}
