//! Packs finite sequences of nonzero integers into single naturals.
//!
//! Each item `x` becomes a block of binary digits: `|x|` zeros preceded by
//! `1` when `x` is negative and by `11` when `x` is positive. The blocks are
//! concatenated and the resulting digit string is read as a base-2 numeral,
//! most significant digit first. A natural is a valid code exactly when its
//! digit string starts with `1`, ends with `0`, and never contains `111`.
//!
//! So `(-1)` is `10` = 2, `(1)` is `110` = 6, and `(1, -1)` is `11010` = 26.
//! Values grow fast, hence the arbitrary-precision representation.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodecError {
    #[error("sequence items must be nonzero")]
    ZeroItem,
}

/// A packed sequence. Wraps the numeral so debugging output can show both
/// the decimal value and the digit string.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SeqCode(pub BigUint);

/// Codes overflow fixed-width JSON numbers quickly, so serialize them as
/// decimal strings.
impl Serialize for SeqCode {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0.to_str_radix(10))
    }
}

impl SeqCode {
    pub fn value(&self) -> &BigUint {
        &self.0
    }
}

impl fmt::Display for SeqCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (0b{})", self.0, self.0.to_str_radix(2))
    }
}

impl fmt::Debug for SeqCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Encode a nonempty-or-empty sequence of nonzero integers.
///
/// The empty sequence encodes to 0, which is not a valid code; every
/// nonempty sequence round-trips through [`decode_seq`].
pub fn encode_seq(items: &[i64]) -> Result<SeqCode, CodecError> {
    let mut digits: Vec<u8> = Vec::new();
    for &x in items {
        if x == 0 {
            return Err(CodecError::ZeroItem);
        }
        digits.push(1);
        if x > 0 {
            digits.push(1);
        }
        digits.extend(std::iter::repeat(0).take(x.unsigned_abs() as usize));
    }
    if digits.is_empty() {
        return Ok(SeqCode(BigUint::zero()));
    }
    Ok(SeqCode(BigUint::from_radix_be(&digits, 2).expect("binary digits")))
}

/// Parse a binary digit string (most significant first) back into items.
/// Returns `None` when the string is not in the image of the encoder.
fn parse_digits(digits: &[u8]) -> Option<Vec<i64>> {
    let mut items = Vec::new();
    let mut pos = 0;
    while pos < digits.len() {
        if digits[pos] != 1 {
            return None;
        }
        let positive = digits.get(pos + 1) == Some(&1);
        pos += if positive { 2 } else { 1 };
        let mut zeros: i64 = 0;
        while pos < digits.len() && digits[pos] == 0 {
            zeros += 1;
            pos += 1;
        }
        if zeros == 0 {
            return None;
        }
        items.push(if positive { zeros } else { -zeros });
    }
    if items.is_empty() {
        None
    } else {
        Some(items)
    }
}

/// The full decoded sequence, if `z` is a valid code.
pub fn decode_items(z: &BigUint) -> Option<Vec<i64>> {
    if z.is_zero() {
        return None;
    }
    parse_digits(&z.to_radix_be(2))
}

/// Total item accessor. For a valid code of a sequence of length `n`:
/// index 0 returns `n`, indices `1..=n` return the items, and everything
/// else returns 0. Invalid codes return 0 at every index.
pub fn decode_seq(z: &BigUint, i: u64) -> i64 {
    match decode_items(z) {
        None => 0,
        Some(items) => {
            if i == 0 {
                items.len() as i64
            } else {
                usize::try_from(i - 1)
                    .ok()
                    .and_then(|idx| items.get(idx).copied())
                    .unwrap_or(0)
            }
        }
    }
}

/// Whether `z` encodes some nonempty sequence.
pub fn is_valid_code(z: &BigUint) -> bool {
    if z.is_zero() {
        return false;
    }
    let digits = z.to_radix_be(2);
    digits.last() == Some(&0) && !digits.windows(3).any(|w| w == [1, 1, 1])
}

/// Upper bound for codes of short, small sequences: every sequence with at
/// most `k` items, each of magnitude at most `k`, encodes below `beta(k)`.
pub fn beta(k: u64) -> BigUint {
    assert!(k >= 1, "beta is defined for k >= 1");
    BigUint::one() << usize::try_from(1 + k * (2 + k)).expect("exponent fits usize")
}

/// Fixed-width fast path used by the bounded walk-formula scan: decode a
/// `u64` code without heap digit buffers. Same language as [`decode_items`].
pub fn decode_items_u64(z: u64) -> Option<Vec<i64>> {
    if z == 0 {
        return None;
    }
    // Reject odd numerals (last digit 1) and any 111 run up front.
    if z & 1 == 1 || z & (z >> 1) & (z >> 2) != 0 {
        return None;
    }
    let width = 64 - z.leading_zeros() as u64;
    let mut items = Vec::new();
    let mut pos = width; // digits are bits [pos-1 .. 0], most significant first
    while pos > 0 {
        debug_assert_eq!((z >> (pos - 1)) & 1, 1);
        pos -= 1;
        let positive = pos > 0 && (z >> (pos - 1)) & 1 == 1;
        if positive {
            pos -= 1;
        }
        let mut zeros: i64 = 0;
        while pos > 0 && (z >> (pos - 1)) & 1 == 0 {
            zeros += 1;
            pos -= 1;
        }
        if zeros == 0 {
            return None;
        }
        items.push(if positive { zeros } else { -zeros });
    }
    Some(items)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn enc(items: &[i64]) -> BigUint {
        encode_seq(items).unwrap().0
    }

    #[test]
    fn worked_single_items() {
        assert_eq!(enc(&[-1]), BigUint::from(2u32));
        assert_eq!(enc(&[1]), BigUint::from(6u32));
        assert_eq!(enc(&[-2]), BigUint::from(4u32));
        assert_eq!(enc(&[2]), BigUint::from(12u32));
    }

    #[test]
    fn worked_longer_sequences() {
        assert_eq!(enc(&[1, -1]), BigUint::from(26u32));
        assert_eq!(enc(&[-1, -1]), BigUint::from(10u32));
        assert_eq!(enc(&[2, -2]), BigUint::from(100u32));
    }

    #[test]
    fn zero_items_are_rejected() {
        assert_eq!(encode_seq(&[1, 0]), Err(CodecError::ZeroItem));
    }

    #[test]
    fn validity_worked_values() {
        assert!(is_valid_code(&BigUint::from(2u32)));
        assert!(is_valid_code(&BigUint::from(6u32)));
        assert!(is_valid_code(&BigUint::from(26u32)));
        // 7 = 111: forbidden run (and odd). 5 = 101: ends in 1.
        assert!(!is_valid_code(&BigUint::from(7u32)));
        assert!(!is_valid_code(&BigUint::from(5u32)));
        assert!(!is_valid_code(&BigUint::zero()));
    }

    #[test]
    fn decode_is_total_and_indexed_from_one() {
        let z = BigUint::from(26u32);
        assert_eq!(decode_seq(&z, 0), 2);
        assert_eq!(decode_seq(&z, 1), 1);
        assert_eq!(decode_seq(&z, 2), -1);
        assert_eq!(decode_seq(&z, 3), 0);
        let bad = BigUint::from(7u32);
        for i in 0..5 {
            assert_eq!(decode_seq(&bad, i), 0);
        }
    }

    #[test]
    fn decode_never_panics_below_2_pow_16() {
        for z in 0u32..=(1 << 16) {
            let z = BigUint::from(z);
            let _ = decode_seq(&z, 0);
            let _ = decode_seq(&z, 3);
        }
    }

    #[test]
    fn beta_worked_values() {
        assert_eq!(beta(1), BigUint::from(16u32));
        assert_eq!(beta(2), BigUint::from(512u32));
        assert_eq!(beta(3), BigUint::from(65536u32));
        assert_eq!(beta(4), BigUint::from(1u32) << 25);
    }

    #[test]
    #[should_panic(expected = "k >= 1")]
    fn beta_rejects_zero() {
        beta(0);
    }

    #[test]
    fn u64_fast_path_matches_general_decoder() {
        for z in 0u64..=100_000 {
            let general = decode_items(&BigUint::from(z));
            assert_eq!(decode_items_u64(z), general, "z = {z}");
        }
    }

    #[test]
    fn validity_agrees_with_decodability() {
        for z in 0u64..=100_000 {
            let z_big = BigUint::from(z);
            assert_eq!(is_valid_code(&z_big), decode_items(&z_big).is_some(), "z = {z}");
        }
    }
}
