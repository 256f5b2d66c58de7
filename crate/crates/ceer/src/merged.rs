//! Two codings of one enumeration, interleaved into a single search.
//!
//! A merged coding selects, at each step `n`, a *pair* of indices
//! `xi(n) < zeta(n)` such that the `xi` sequence and the `zeta` sequence are
//! each coding tables of the same enumeration (see [`crate::coding`]) and
//! they interleave: `xi(n) < zeta(n) < xi(n+1)`. The two selections are
//! packed into one number `mu(n) = 2^{xi(n)} (2 zeta(n) + 1)`, and the
//! recursion picks the *least* such `mu` whose unpacked halves satisfy, for
//! the step from `n` to `n+1` with `a = xi(n+1)`, `b = zeta(n+1)`:
//!
//! - `zeta(n) < a < b` (basis: `1 < a < b`);
//! - `proj1 nu(a) = proj1 nu(b) = proj1 nu(n+1)`;
//! - `max { proj1 nu(a), proj1 nu(b), proj2 nu(zeta(n)) } < proj2 nu(a) < proj2 nu(b)`
//!   (basis floor: `max { 1, proj1 nu(1) }`).
//!
//! `mu(n)` is astronomically large (it carries `xi(n)` as an exponent), so
//! the search never enumerates `mu` candidates directly: it scans indices
//! once, keeps candidates that match the target row above the floor, pairs
//! each with its earliest valid partner, and compares packed values
//! `2^a(2b+1)` exactly without materializing them. [`MergedCoding::mu_at`]
//! reconstructs the packed value on demand as a big integer.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Serialize, Serializer};

use crate::coding::{check_coding_conditions, Coding, CodingError, CodingReport, CodingTable, DEFAULT_FUEL};
use crate::relation::NodePair;
use crate::walks::Enumerator;

/// Compare `2^a1 (2 b1 + 1)` with `2^a2 (2 b2 + 1)` without constructing
/// either value.
pub fn cmp_packed(a1: u64, b1: u64, a2: u64, b2: u64) -> Ordering {
    if a1 == a2 {
        return b1.cmp(&b2);
    }
    if a1 > a2 {
        return cmp_packed(a2, b2, a1, b1).reverse();
    }
    // a1 < a2: compare odd1 with odd2 << (a2 - a1) in 128 bits; a shift
    // that overflows means the right side is certainly larger.
    let odd1 = 2u128 * u128::from(b1) + 1;
    let odd2 = 2u128 * u128::from(b2) + 1;
    let shift = a2 - a1;
    let shifted = u32::try_from(shift)
        .ok()
        .and_then(|s| odd2.checked_shl(s).filter(|v| v >> s == odd2));
    match shifted {
        Some(rhs) => odd1.cmp(&rhs),
        None => Ordering::Less,
    }
}

/// An interleaved pair of coding tables over one enumeration.
#[derive(Clone)]
pub struct MergedCoding {
    nu: Enumerator,
    xi: Vec<u64>,
    zeta: Vec<u64>,
    pi_xi: Vec<NodePair>,
    pi_zeta: Vec<NodePair>,
    fuel: u64,
}

impl MergedCoding {
    pub fn new(nu: Enumerator) -> Self {
        Self::with_fuel(nu, DEFAULT_FUEL)
    }

    pub fn with_fuel(nu: Enumerator, fuel: u64) -> Self {
        assert!(fuel >= 1, "fuel must be positive");
        MergedCoding {
            nu,
            xi: Vec::new(),
            zeta: Vec::new(),
            pi_xi: Vec::new(),
            pi_zeta: Vec::new(),
            fuel,
        }
    }

    pub fn nu(&self) -> &Enumerator {
        &self.nu
    }

    pub fn fuel(&self) -> u64 {
        self.fuel
    }

    pub fn filled(&self) -> u64 {
        self.xi.len() as u64
    }

    pub fn xi_at(&self, n: u64) -> u64 {
        assert!(n >= 1 && n <= self.filled(), "entry {n} not filled");
        self.xi[(n - 1) as usize]
    }

    pub fn zeta_at(&self, n: u64) -> u64 {
        assert!(n >= 1 && n <= self.filled(), "entry {n} not filled");
        self.zeta[(n - 1) as usize]
    }

    pub fn pi_xi_at(&self, n: u64) -> NodePair {
        assert!(n >= 1 && n <= self.filled(), "entry {n} not filled");
        self.pi_xi[(n - 1) as usize]
    }

    pub fn pi_zeta_at(&self, n: u64) -> NodePair {
        assert!(n >= 1 && n <= self.filled(), "entry {n} not filled");
        self.pi_zeta[(n - 1) as usize]
    }

    /// The packed selection `2^{xi(n)} (2 zeta(n) + 1)`.
    pub fn mu_at(&self, n: u64) -> BigUint {
        let a = self.xi_at(n);
        let b = self.zeta_at(n);
        (BigUint::one() << usize::try_from(a).expect("exponent fits usize"))
            * BigUint::from(2 * b + 1)
    }

    pub fn xi_prefix(&self) -> &[u64] {
        &self.xi
    }

    pub fn zeta_prefix(&self) -> &[u64] {
        &self.zeta
    }

    /// Extend through entry `n` (no-op if already filled).
    pub fn extend_to(&mut self, n: u64) -> Result<(), CodingError> {
        while self.filled() < n {
            self.extend_one()?;
        }
        Ok(())
    }

    fn extend_one(&mut self) -> Result<(), CodingError> {
        let n = self.filled() + 1;
        let fuel = self.fuel;
        let mut spent: u64 = 1; // the target lookup below
        let target = self.nu.pair(n).first;
        let (scan_start, floor) = match self.pi_zeta.last() {
            None => (2, target.max(1)),
            Some(prev) => (self.zeta.last().copied().unwrap() + 1, target.max(prev.second)),
        };

        // Candidates are indices in the target row above the floor. Each
        // waits for its earliest partner with a strictly larger second
        // coordinate; the packed value of every matched pair is compared
        // exactly, and a candidate is dropped once even its best possible
        // partner cannot beat the incumbent.
        struct OpenCandidate {
            idx: u64,
            pair: NodePair,
        }
        let mut open: Vec<OpenCandidate> = Vec::new();
        let mut best: Option<(u64, NodePair, u64, NodePair)> = None;

        let mut m = scan_start;
        loop {
            if let Some((ba, _, bb, _)) = best {
                let newcomer_can_win = cmp_packed(m, m + 1, ba, bb) == Ordering::Less;
                if open.is_empty() && !newcomer_can_win {
                    break;
                }
            }
            if spent >= fuel {
                return Err(CodingError::FuelExhausted {
                    step: n,
                    fuel,
                    resume_at: scan_start,
                    stopped_at: m,
                    enumerator: self.nu.label().to_string(),
                });
            }
            spent += 1;
            let p = self.nu.pair(m);
            if p.first == target && p.second > floor {
                let mut kept = Vec::with_capacity(open.len());
                for cand in open.drain(..) {
                    if cand.pair.second < p.second {
                        let challenger = (cand.idx, cand.pair, m, p);
                        let wins = match &best {
                            None => true,
                            Some((ba, _, bb, _)) => {
                                cmp_packed(challenger.0, challenger.2, *ba, *bb) == Ordering::Less
                            }
                        };
                        if wins {
                            best = Some(challenger);
                        }
                    } else {
                        kept.push(cand);
                    }
                }
                open = kept;
                open.push(OpenCandidate { idx: m, pair: p });
            }
            if let Some((ba, _, bb, _)) = best {
                open.retain(|cand| cmp_packed(cand.idx, m + 1, ba, bb) == Ordering::Less);
            }
            m += 1;
        }

        let (a, pa, b, pb) = best.expect("loop breaks only with a selection");
        self.xi.push(a);
        self.pi_xi.push(pa);
        self.zeta.push(b);
        self.pi_zeta.push(pb);
        Ok(())
    }

    /// First entry where the interleaving `xi(n) < zeta(n) < xi(n+1)` fails,
    /// if any. Built tables always return `None`; this exists to audit.
    pub fn interleaving_violation(&self) -> Option<u64> {
        for idx in 0..self.xi.len() {
            if self.xi[idx] >= self.zeta[idx] {
                return Some(idx as u64 + 1);
            }
            if idx + 1 < self.xi.len() && self.zeta[idx] >= self.xi[idx + 1] {
                return Some(idx as u64 + 1);
            }
        }
        None
    }

    /// Audit both halves against the full coding-table conditions.
    pub fn check_both_sides(&self) -> (CodingReport, CodingReport) {
        let xi_table = CodingTable::from_raw_parts(self.nu.clone(), self.xi.clone(), self.fuel);
        let zeta_table = CodingTable::from_raw_parts(self.nu.clone(), self.zeta.clone(), self.fuel);
        (check_coding_conditions(&xi_table), check_coding_conditions(&zeta_table))
    }

    /// The first half as an extensible coding (extending it advances the
    /// whole merged construction).
    pub fn xi_side(&mut self) -> XiSide<'_> {
        XiSide(self)
    }

    /// The second half as an extensible coding.
    pub fn zeta_side(&mut self) -> ZetaSide<'_> {
        ZetaSide(self)
    }
}

impl fmt::Debug for MergedCoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MergedCoding")
            .field("enumerator", &self.nu.label())
            .field("filled", &self.xi.len())
            .field("xi", &self.xi)
            .field("zeta", &self.zeta)
            .field("fuel", &self.fuel)
            .finish()
    }
}

impl Serialize for MergedCoding {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            mu: Vec<String>,
            xi: &'a [u64],
            zeta: &'a [u64],
            pi_xi: &'a [NodePair],
            pi_zeta: &'a [NodePair],
            fuel: u64,
            enumerator: &'a str,
        }
        Repr {
            mu: (1..=self.filled()).map(|n| self.mu_at(n).to_str_radix(10)).collect(),
            xi: &self.xi,
            zeta: &self.zeta,
            pi_xi: &self.pi_xi,
            pi_zeta: &self.pi_zeta,
            fuel: self.fuel,
            enumerator: self.nu.label(),
        }
        .serialize(serializer)
    }
}

/// The `xi` half of a merged coding, viewed as a coding table.
pub struct XiSide<'a>(&'a mut MergedCoding);

/// The `zeta` half of a merged coding, viewed as a coding table.
pub struct ZetaSide<'a>(&'a mut MergedCoding);

impl Coding for XiSide<'_> {
    fn nu(&self) -> &Enumerator {
        &self.0.nu
    }

    fn filled(&self) -> u64 {
        self.0.filled()
    }

    fn ensure(&mut self, n: u64) -> Result<(), CodingError> {
        self.0.extend_to(n)
    }

    fn chi_at(&self, n: u64) -> u64 {
        self.0.xi_at(n)
    }

    fn pi_at(&self, n: u64) -> NodePair {
        self.0.pi_xi_at(n)
    }

    fn fuel(&self) -> u64 {
        self.0.fuel
    }
}

impl Coding for ZetaSide<'_> {
    fn nu(&self) -> &Enumerator {
        &self.0.nu
    }

    fn filled(&self) -> u64 {
        self.0.filled()
    }

    fn ensure(&mut self, n: u64) -> Result<(), CodingError> {
        self.0.extend_to(n)
    }

    fn chi_at(&self, n: u64) -> u64 {
        self.0.zeta_at(n)
    }

    fn pi_at(&self, n: u64) -> NodePair {
        self.0.pi_zeta_at(n)
    }

    fn fuel(&self) -> u64 {
        self.0.fuel
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coding::{fair_enumeration, proj_exp, proj_odd};

    fn square_enumerator() -> Enumerator {
        Enumerator::new("square", |k| NodePair::new(proj_exp(k), proj_odd(k)))
    }

    fn fair_square() -> Enumerator {
        fair_enumeration(&square_enumerator())
    }

    #[test]
    fn worked_first_entries() {
        let mut m = MergedCoding::new(fair_square());
        m.extend_to(2).unwrap();
        assert_eq!(m.xi_at(1), 9);
        assert_eq!(m.zeta_at(1), 13);
        assert_eq!(m.mu_at(1), BigUint::from(13824u32)); // 2^9 * 27
        assert_eq!(m.pi_xi_at(1), NodePair::new(0, 2));
        assert_eq!(m.pi_zeta_at(1), NodePair::new(0, 3));
        assert_eq!(m.xi_at(2), 17);
        assert_eq!(m.zeta_at(2), 21);
        assert_eq!(m.mu_at(2), BigUint::from(5636096u64)); // 2^17 * 43
    }

    #[test]
    fn first_entry_matches_a_literal_packed_scan() {
        // Small enough to find by scanning packed values one by one:
        // the least k = 2^a(2b+1) with 1 < a < b, both halves in the target
        // row, and the floor chain satisfied.
        let nu = fair_square();
        let target = nu.pair(1).first;
        let floor = target.max(1);
        let literal = (2u64..=20_000)
            .find(|&k| {
                let a = proj_exp(k);
                let b = proj_odd(k);
                if !(1 < a && a < b) {
                    return false;
                }
                let pa = nu.pair(a);
                let pb = nu.pair(b);
                pa.first == target
                    && pb.first == target
                    && floor < pa.second
                    && pa.second < pb.second
            })
            .expect("a packed witness exists below 20000");
        let mut m = MergedCoding::new(fair_square());
        m.extend_to(1).unwrap();
        assert_eq!(BigUint::from(literal), m.mu_at(1));
    }

    #[test]
    fn interleaving_holds_on_a_long_prefix() {
        // Selected indices grow exponentially on this dense enumerator, so
        // depth is budget-bound; 20 entries stay well inside default fuel.
        let mut m = MergedCoding::new(fair_square());
        m.extend_to(20).unwrap();
        assert_eq!(m.interleaving_violation(), None);
        for n in 1..=20 {
            assert!(m.xi_at(n) < m.zeta_at(n));
            if n < 20 {
                assert!(m.zeta_at(n) < m.xi_at(n + 1));
            }
        }
    }

    #[test]
    fn both_sides_pass_the_table_audit() {
        let mut m = MergedCoding::new(fair_square());
        m.extend_to(20).unwrap();
        let (xi_report, zeta_report) = m.check_both_sides();
        assert!(xi_report.all_pass(), "{xi_report}");
        assert!(zeta_report.all_pass(), "{zeta_report}");
    }

    #[test]
    fn rebuilding_is_deterministic() {
        let mut a = MergedCoding::new(fair_square());
        let mut b = MergedCoding::new(fair_square());
        a.extend_to(20).unwrap();
        b.extend_to(7).unwrap();
        b.extend_to(20).unwrap();
        assert_eq!(a.xi_prefix(), b.xi_prefix());
        assert_eq!(a.zeta_prefix(), b.zeta_prefix());
    }

    #[test]
    fn sides_expose_the_coding_interface() {
        let mut m = MergedCoding::new(fair_square());
        {
            let mut xi = m.xi_side();
            xi.ensure(3).unwrap();
            assert_eq!(xi.chi_at(1), 9);
            assert_eq!(xi.pi_at(1), NodePair::new(0, 2));
        }
        {
            let zeta = m.zeta_side();
            assert_eq!(zeta.filled(), 3);
            assert_eq!(zeta.chi_at(1), 13);
        }
    }

    #[test]
    fn fuel_exhaustion_reports_the_step() {
        let nu = Enumerator::new("constant", |_| NodePair::new(0, 0));
        let mut m = MergedCoding::with_fuel(nu, 400);
        let err = m.extend_to(1).unwrap_err();
        assert_eq!(err.step(), 1);
        assert_eq!(m.filled(), 0);
    }

    #[test]
    fn packed_comparison_is_exact() {
        assert_eq!(cmp_packed(9, 13, 17, 21), Ordering::Less);
        assert_eq!(cmp_packed(17, 21, 9, 13), Ordering::Greater);
        assert_eq!(cmp_packed(3, 5, 3, 5), Ordering::Equal);
        // 2^3 * 11 = 88 vs 2^5 * 3 = 96
        assert_eq!(cmp_packed(3, 5, 5, 1), Ordering::Less);
        // Huge exponent gaps resolve without overflow.
        assert_eq!(cmp_packed(2, u64::MAX / 2 - 1, 200, 1), Ordering::Less);
        assert_eq!(cmp_packed(200, 1, 2, u64::MAX / 2 - 1), Ordering::Greater);
    }

    #[test]
    fn serializes_with_documented_shape() {
        let mut m = MergedCoding::with_fuel(fair_square(), 100_000);
        m.extend_to(2).unwrap();
        let v = serde_json::to_value(&m).unwrap();
        assert_eq!(v["mu"], serde_json::json!(["13824", "5636096"]));
        assert_eq!(v["xi"], serde_json::json!([9, 17]));
        assert_eq!(v["zeta"], serde_json::json!([13, 21]));
        assert_eq!(v["pi_xi"], serde_json::json!([[0, 2], [0, 4]]));
        assert_eq!(v["fuel"], serde_json::json!(100_000));
    }
}
