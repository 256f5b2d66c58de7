//! Coding tables: sparse reindexings of an enumeration.
//!
//! Given an enumeration `nu` of an equivalence relation, a *coding table*
//! records a strictly increasing sequence of indices `chi(1) < chi(2) < …`
//! together with the pairs `pi(n) = nu(chi(n))` they select, chosen so that:
//!
//! - `chi(1) > 1` and `pi(n)` keeps the first coordinate of `nu(n)`;
//! - second coordinates strictly increase and dominate everything seen so
//!   far: `max { proj1 pi(n+1), proj2 pi(n) } < proj2 pi(n+1)` (with basis
//!   `max { 1, proj1 nu(1) } < proj2 pi(1)`).
//!
//! Each entry is found by a minimal search resuming just past the previous
//! index. The growth this forces on second coordinates is what makes the
//! relations derived from a table (see [`crate::derived`]) decidable by
//! bounded searches.
//!
//! The searches terminate exactly when every class of the enumerated
//! relation is infinite, which no program can determine up front; a *fuel*
//! budget bounds the enumeration queries spent per entry and turns
//! non-termination into the explicit [`CodingError::FuelExhausted`].

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::relation::NodePair;
use crate::walks::Enumerator;

/// Default per-entry search budget, in enumeration queries.
pub const DEFAULT_FUEL: u64 = 1_000_000;

/// The `CEER_FUEL` environment variable overrides the default budget for
/// the command-line tools. Unset or unparsable values fall back silently.
pub fn fuel_from_env() -> u64 {
    std::env::var("CEER_FUEL")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .filter(|&f| f >= 1)
        .unwrap_or(DEFAULT_FUEL)
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CodingError {
    /// A per-entry search ran out of queries. Either the source relation
    /// has a finite class (so the search genuinely diverges) or the budget
    /// is too small; the two are indistinguishable from outside.
    #[error(
        "table entry {step}: search exhausted its budget of {fuel} enumeration queries \
         (scanned candidates {resume_at}..{stopped_at} of `{enumerator}`); either some \
         equivalence class is finite or the budget is too small"
    )]
    FuelExhausted {
        step: u64,
        fuel: u64,
        resume_at: u64,
        stopped_at: u64,
        enumerator: String,
    },
}

impl CodingError {
    /// The table entry whose search failed.
    pub fn step(&self) -> u64 {
        match self {
            CodingError::FuelExhausted { step, .. } => *step,
        }
    }
}

/// Anything that behaves like a coding table: a filled prefix of `chi`/`pi`
/// entries over an enumeration, extensible on demand. Implemented by
/// [`CodingTable`] and by the two halves of a merged double coding.
pub trait Coding {
    fn nu(&self) -> &Enumerator;
    /// Entries currently filled; `chi_at`/`pi_at` accept `1..=filled()`.
    fn filled(&self) -> u64;
    /// Extend so that at least `n` entries are filled.
    fn ensure(&mut self, n: u64) -> Result<(), CodingError>;
    fn chi_at(&self, n: u64) -> u64;
    fn pi_at(&self, n: u64) -> NodePair;
    fn fuel(&self) -> u64;

    /// Extend until the last entry's second coordinate exceeds `bound`.
    /// Terminates because second coordinates strictly increase.
    fn ensure_second_above(&mut self, bound: u64) -> Result<(), CodingError> {
        while self.filled() == 0 || self.pi_at(self.filled()).second <= bound {
            let next = self.filled() + 1;
            self.ensure(next)?;
        }
        Ok(())
    }
}

/// A coding table over a single enumeration, built by minimal search.
#[derive(Clone)]
pub struct CodingTable {
    nu: Enumerator,
    chi: Vec<u64>,
    pi: Vec<NodePair>,
    fuel: u64,
    /// Where the next entry's candidate scan starts (one past the last
    /// accepted index; 2 initially since the first entry must exceed 1).
    next_candidate: u64,
}

impl CodingTable {
    pub fn new(nu: Enumerator) -> Self {
        Self::with_fuel(nu, DEFAULT_FUEL)
    }

    pub fn with_fuel(nu: Enumerator, fuel: u64) -> Self {
        assert!(fuel >= 1, "fuel must be positive");
        CodingTable { nu, chi: Vec::new(), pi: Vec::new(), fuel, next_candidate: 2 }
    }

    /// Assemble a table directly from a `chi` array, recomputing the pairs
    /// from the enumeration. The entries are *not* validated; pass the
    /// result to [`check_coding_conditions`] to find out what holds.
    pub fn from_raw_parts(nu: Enumerator, chi: Vec<u64>, fuel: u64) -> Self {
        assert!(fuel >= 1, "fuel must be positive");
        let pi = chi.iter().map(|&c| nu.pair(c)).collect();
        let next_candidate = chi.last().map_or(2, |&c| c.saturating_add(1));
        CodingTable { nu, chi, pi, fuel, next_candidate }
    }

    pub fn chi_prefix(&self) -> &[u64] {
        &self.chi
    }

    pub fn pi_prefix(&self) -> &[NodePair] {
        &self.pi
    }

    pub fn set_fuel(&mut self, fuel: u64) {
        assert!(fuel >= 1, "fuel must be positive");
        self.fuel = fuel;
    }

    /// Extend the table through entry `n` (no-op if already filled).
    pub fn extend_to(&mut self, n: u64) -> Result<(), CodingError> {
        while (self.chi.len() as u64) < n {
            self.extend_one()?;
        }
        Ok(())
    }

    /// Run one minimal search for the next entry.
    fn extend_one(&mut self) -> Result<(), CodingError> {
        let n = self.chi.len() as u64 + 1;
        let fuel = self.fuel;
        let resume_at = self.next_candidate;
        let out_of_fuel = move |at: u64, label: &str| CodingError::FuelExhausted {
            step: n,
            fuel,
            resume_at,
            stopped_at: at,
            enumerator: label.to_string(),
        };

        let mut spent: u64 = 1; // the target lookup below
        let target_first = self.nu.pair(n).first;
        // The new second coordinate must exceed both the entry's own first
        // coordinate and the previous second coordinate (1 at the basis).
        let floor = match self.pi.last() {
            None => target_first.max(1),
            Some(prev) => target_first.max(prev.second),
        };

        let mut c = resume_at;
        loop {
            if spent >= fuel {
                return Err(out_of_fuel(c, self.nu.label()));
            }
            spent += 1;
            let p = self.nu.pair(c);
            if p.first == target_first && p.second > floor {
                self.chi.push(c);
                self.pi.push(p);
                self.next_candidate = c + 1;
                return Ok(());
            }
            c += 1;
        }
    }
}

impl Coding for CodingTable {
    fn nu(&self) -> &Enumerator {
        &self.nu
    }

    fn filled(&self) -> u64 {
        self.chi.len() as u64
    }

    fn ensure(&mut self, n: u64) -> Result<(), CodingError> {
        self.extend_to(n)
    }

    fn chi_at(&self, n: u64) -> u64 {
        assert!(n >= 1 && n <= self.filled(), "entry {n} not filled");
        self.chi[(n - 1) as usize]
    }

    fn pi_at(&self, n: u64) -> NodePair {
        assert!(n >= 1 && n <= self.filled(), "entry {n} not filled");
        self.pi[(n - 1) as usize]
    }

    fn fuel(&self) -> u64 {
        self.fuel
    }
}

impl fmt::Debug for CodingTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CodingTable")
            .field("enumerator", &self.nu.label())
            .field("filled", &self.chi.len())
            .field("chi", &self.chi)
            .field("fuel", &self.fuel)
            .finish()
    }
}

impl Serialize for CodingTable {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            chi: &'a [u64],
            pi: &'a [NodePair],
            fuel: u64,
            enumerator: &'a str,
        }
        Repr { chi: &self.chi, pi: &self.pi, fuel: self.fuel, enumerator: self.nu.label() }
            .serialize(serializer)
    }
}

/// The exponent of 2 in `k`: the `a` of `k = 2^a(2b+1)`.
pub fn proj_exp(k: u64) -> u64 {
    assert!(k >= 1, "projections are defined for k >= 1");
    k.trailing_zeros() as u64
}

/// The odd-part index of `k`: the `b` of `k = 2^a(2b+1)`.
pub fn proj_odd(k: u64) -> u64 {
    assert!(k >= 1, "projections are defined for k >= 1");
    ((k >> k.trailing_zeros()) - 1) / 2
}

/// The pairing `(a, b) -> 2^a(2b+1)`, a bijection onto the positive
/// integers inverted by [`proj_exp`] and [`proj_odd`].
pub fn pair_index(a: u64, b: u64) -> u64 {
    let odd = 2u64.checked_mul(b).and_then(|x| x.checked_add(1)).expect("odd part fits u64");
    odd.checked_shl(u32::try_from(a).expect("exponent fits u32"))
        .filter(|_| a < 64)
        .expect("pair index fits u64")
}

/// Re-index an enumeration so that every emitted pair recurs at infinitely
/// many indices: index `2^a(2b+1)` reads the source at `b + 1`.
pub fn fair_enumeration(nu: &Enumerator) -> Enumerator {
    nu.reindexed(format!("fair({})", nu.label()), |k| proj_odd(k) + 1)
}

/// One line of a table audit: a named condition, whether it held, and a
/// human-readable account (the first counterexample, or what was covered).
#[derive(Debug, Clone, Serialize)]
pub struct ConditionCheck {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

/// Audit report for a table prefix; see [`check_coding_conditions`].
#[derive(Debug, Clone, Serialize)]
pub struct CodingReport {
    pub entries: u64,
    pub enumerator: String,
    pub checks: Vec<ConditionCheck>,
}

impl CodingReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    fn push(&mut self, name: &str, ok: bool, detail: impl Into<String>) {
        self.checks.push(ConditionCheck { name: name.to_string(), ok, detail: detail.into() });
    }
}

impl fmt::Display for CodingReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "table over `{}`, {} entries", self.enumerator, self.entries)?;
        for c in &self.checks {
            writeln!(f, "  [{}] {}: {}", if c.ok { "ok" } else { "FAIL" }, c.name, c.detail)?;
        }
        Ok(())
    }
}

/// Audit a table prefix against every defining condition, the growth laws
/// they imply (`n < chi(n)`, `n < proj2 pi(n)`, both strictly increasing),
/// and the anchored chains `k, chi(k), chi(chi(k)), …` started at diagonal
/// pairs, whose selected second coordinates must strictly increase while
/// keeping the first coordinate fixed. Chains are followed as deep as the
/// filled prefix allows. Works on hand-built tables; nothing is assumed.
pub fn check_coding_conditions(t: &CodingTable) -> CodingReport {
    let n_entries = t.filled();
    let chi = t.chi_prefix();
    let pi = t.pi_prefix();
    let mut report = CodingReport {
        entries: n_entries,
        enumerator: t.nu().label().to_string(),
        checks: Vec::new(),
    };

    if n_entries == 0 {
        report.push("nonempty", true, "empty prefix: all conditions hold vacuously");
        return report;
    }

    report.push(
        "starts-above-one",
        chi[0] > 1,
        format!("chi(1) = {}", chi[0]),
    );

    let mono = (1..chi.len()).find(|&idx| chi[idx - 1] >= chi[idx]);
    report.push(
        "chi-strictly-increasing",
        mono.is_none(),
        match mono {
            None => format!("checked {} consecutive pairs", chi.len().saturating_sub(1)),
            Some(idx) => format!("chi({}) = {} !< chi({}) = {}", idx, chi[idx - 1], idx + 1, chi[idx]),
        },
    );

    let first_preserved = (0..pi.len()).find(|&idx| pi[idx].first != t.nu().pair(idx as u64 + 1).first);
    report.push(
        "first-coordinate-preserved",
        first_preserved.is_none(),
        match first_preserved {
            None => format!("proj1 pi(n) = proj1 nu(n) for n = 1..={n_entries}"),
            Some(idx) => format!(
                "entry {}: proj1 pi = {} but proj1 nu = {}",
                idx + 1,
                pi[idx].first,
                t.nu().pair(idx as u64 + 1).first
            ),
        },
    );

    let basis_floor = t.nu().pair(1).first.max(1);
    report.push(
        "basis-second-coordinate",
        pi[0].second > basis_floor,
        format!("proj2 pi(1) = {} vs required > {}", pi[0].second, basis_floor),
    );

    let step = (1..pi.len()).find(|&idx| pi[idx].second <= pi[idx].first.max(pi[idx - 1].second));
    report.push(
        "step-second-coordinate",
        step.is_none(),
        match step {
            None => format!("max {{ proj1 pi(n+1), proj2 pi(n) }} < proj2 pi(n+1) for n = 1..{n_entries}"),
            Some(idx) => format!(
                "entry {}: proj2 = {} vs required > max({}, {})",
                idx + 1,
                pi[idx].second,
                pi[idx].first,
                pi[idx - 1].second
            ),
        },
    );

    let growth = (0..chi.len())
        .find(|&idx| chi[idx] <= idx as u64 + 1 || pi[idx].second <= idx as u64 + 1);
    report.push(
        "index-growth",
        growth.is_none(),
        match growth {
            None => "n < chi(n) and n < proj2 pi(n) throughout".to_string(),
            Some(idx) => format!(
                "entry {}: chi = {}, proj2 pi = {}",
                idx + 1,
                chi[idx],
                pi[idx].second
            ),
        },
    );

    // Anchored chains: from any k with nu(k) = (i,i), repeatedly stepping
    // k -> chi(k) must keep selecting pairs (i, _) with strictly growing
    // second coordinates. Diagonal anchors are searched within a bounded
    // scan; chains stop at the edge of the filled prefix.
    let scan_cap = t.fuel().min(50_000);
    let mut chain_ok = true;
    let mut chain_notes: Vec<String> = Vec::new();
    for i in 0..=3u64 {
        let anchor = (1..=scan_cap.min(n_entries)).find(|&k| {
            let p = t.nu().pair(k);
            p.first == i && p.second == i
        });
        let Some(k) = anchor else {
            chain_notes.push(format!("i={i}: no diagonal anchor within the filled prefix"));
            continue;
        };
        let mut c = k;
        let mut last_second: Option<u64> = None;
        let mut depth = 0u64;
        let mut broke = false;
        while c <= n_entries {
            let p = pi[(c - 1) as usize];
            if p.first != i {
                chain_ok = false;
                broke = true;
                chain_notes.push(format!("i={i}: chain left the class at entry {c} ({p:?})"));
                break;
            }
            if let Some(prev) = last_second {
                if p.second <= prev {
                    chain_ok = false;
                    broke = true;
                    chain_notes.push(format!("i={i}: second coordinate fell to {} at entry {c}", p.second));
                    break;
                }
            }
            last_second = Some(p.second);
            depth += 1;
            c = chi[(c - 1) as usize];
        }
        if !broke {
            chain_notes.push(format!("i={i}: verified {depth} chain steps from anchor {k}"));
        }
    }
    report.push(
        "anchored-chains",
        chain_ok,
        if chain_notes.is_empty() { "no diagonal anchors found".to_string() } else { chain_notes.join("; ") },
    );

    report
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The canonical dense example: enumerate all of N x N by reading index
    /// 2^m(2n+1) as the pair (m, n).
    fn square_enumerator() -> Enumerator {
        Enumerator::new("square", |k| NodePair::new(proj_exp(k), proj_odd(k)))
    }

    #[test]
    fn worked_table_values() {
        let mut t = CodingTable::new(square_enumerator());
        t.extend_to(5).unwrap();
        assert_eq!(t.chi_prefix(), &[5, 14, 15, 68, 69]);
        assert_eq!(t.pi_at(1), NodePair::new(0, 2));
        assert_eq!(t.pi_at(2), NodePair::new(1, 3));
        assert_eq!(t.pi_at(3), NodePair::new(0, 7));
        assert_eq!(t.pi_at(4), NodePair::new(2, 8));
        assert_eq!(t.pi_at(5), NodePair::new(0, 34));
    }

    #[test]
    fn rebuilding_is_deterministic() {
        let mut a = CodingTable::new(square_enumerator());
        let mut b = CodingTable::new(square_enumerator());
        a.extend_to(14).unwrap();
        b.extend_to(6).unwrap();
        b.extend_to(14).unwrap();
        assert_eq!(a.chi_prefix(), b.chi_prefix());
        assert_eq!(a.pi_prefix(), b.pi_prefix());
    }

    #[test]
    fn built_tables_pass_the_audit() {
        // The dense square enumerator roughly doubles chi every entry, so
        // table depth is budget-bound; 12 entries cost ~10^4 queries.
        let mut t = CodingTable::new(square_enumerator());
        t.extend_to(12).unwrap();
        let report = check_coding_conditions(&t);
        assert!(report.all_pass(), "{report}");
    }

    #[test]
    fn audit_catches_injected_monotonicity_break() {
        let t = CodingTable::from_raw_parts(square_enumerator(), vec![5, 3], DEFAULT_FUEL);
        let report = check_coding_conditions(&t);
        assert!(!report.all_pass());
        let mono = report.checks.iter().find(|c| c.name == "chi-strictly-increasing").unwrap();
        assert!(!mono.ok);
    }

    #[test]
    fn audit_catches_wrong_first_coordinate() {
        // chi = [3]: nu(3) = (0,1) keeps first coordinate 0 = proj1 nu(1),
        // but its second coordinate 1 is not above the basis floor.
        let t = CodingTable::from_raw_parts(square_enumerator(), vec![3], DEFAULT_FUEL);
        let report = check_coding_conditions(&t);
        let basis = report.checks.iter().find(|c| c.name == "basis-second-coordinate").unwrap();
        assert!(!basis.ok);
    }

    #[test]
    fn fuel_exhaustion_reports_the_step_and_leaves_the_table_intact() {
        // Constant enumerator: no candidate ever has a second coordinate
        // above the basis floor, so the first search must time out.
        let nu = Enumerator::new("constant", |_| NodePair::new(0, 0));
        let mut t = CodingTable::with_fuel(nu, 500);
        let err = t.extend_to(1).unwrap_err();
        match &err {
            CodingError::FuelExhausted { step, fuel, .. } => {
                assert_eq!(*step, 1);
                assert_eq!(*fuel, 500);
            }
        }
        assert_eq!(t.filled(), 0);
        assert_eq!(err.step(), 1);
    }

    #[test]
    fn fair_enumeration_repeats_every_pair() {
        let nu = square_enumerator();
        let fair = fair_enumeration(&nu);
        // Indices 2^a(2b+1) with b = 0 all read the source at 1.
        assert_eq!(fair.pair(1), nu.pair(1));
        assert_eq!(fair.pair(2), nu.pair(1));
        assert_eq!(fair.pair(4), nu.pair(1));
        assert_eq!(fair.pair(3), nu.pair(2));
        for k in 1..=100 {
            let p = fair.pair(k);
            assert_eq!(p, nu.pair(proj_odd(k) + 1));
        }
    }

    #[test]
    fn projections_invert_the_pairing() {
        assert_eq!(proj_exp(12), 2);
        assert_eq!(proj_odd(12), 1);
        assert_eq!(proj_exp(1), 0);
        assert_eq!(proj_odd(1), 0);
        for a in 0..=5 {
            for b in 0..=5 {
                let k = pair_index(a, b);
                assert_eq!((proj_exp(k), proj_odd(k)), (a, b));
            }
        }
    }

    #[test]
    fn table_serializes_with_the_documented_shape() {
        let mut t = CodingTable::with_fuel(square_enumerator(), 1000);
        t.extend_to(3).unwrap();
        let v = serde_json::to_value(&t).unwrap();
        assert_eq!(v["chi"], serde_json::json!([5, 14, 15]));
        assert_eq!(v["pi"], serde_json::json!([[0, 2], [1, 3], [0, 7]]));
        assert_eq!(v["fuel"], serde_json::json!(1000));
        assert_eq!(v["enumerator"], serde_json::json!("square"));
    }

    #[test]
    fn ensure_second_above_extends_far_enough() {
        let mut t = CodingTable::new(square_enumerator());
        t.ensure_second_above(30).unwrap();
        let last = t.pi_at(t.filled());
        assert!(last.second > 30);
        // Minimality: the previous entry was not already past the bound.
        if t.filled() > 1 {
            assert!(t.pi_at(t.filled() - 1).second <= 30);
        }
    }
}
