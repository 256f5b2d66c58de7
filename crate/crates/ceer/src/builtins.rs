//! Built-in relations with known ground truth.
//!
//! Everything else in the crate works from an enumeration alone; the
//! verification harness needs relations whose membership is *also* known
//! directly, so deciders and theorems can be checked against an
//! independent answer. A [`GroundTruth`] bundles a total membership test
//! with a label and a note about class sizes, since the coding machinery
//! terminates exactly on relations whose classes are all infinite.
//!
//! Enumerations are produced by a diagonal sweep: index `k` decodes to the
//! `k`-th pair of the square-grid diagonal walk, emitting the pair when it
//! is related and a reflexive stand-in otherwise. The sweep reaches the
//! pair `(i, j)` at index `(i+j)(i+j+1)/2 + i + 1`, so windowed witness
//! searches stay quadratic in the window bound. (The exponent pairing
//! `2^m(2n+1)` used by [`full_enumerator`] would push the pair `(i, j)`
//! out to index `2^i(2j+1)`, beyond any workable budget.)

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coding::{proj_exp, proj_odd};
use crate::relation::{FiniteRelation, NodePair};
use crate::walks::Enumerator;

/// What is known about the equivalence classes of a built-in relation.
/// Codings exist exactly for the all-infinite kind; on the others the
/// per-entry searches eventually diverge and fuel runs out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassKind {
    AllInfinite,
    AllFinite,
    Mixed,
}

/// A relation with directly computable membership.
#[derive(Clone)]
pub struct GroundTruth {
    label: String,
    class_kind: ClassKind,
    decide: Arc<dyn Fn(u64, u64) -> bool + Send + Sync>,
}

impl GroundTruth {
    pub fn new(
        label: impl Into<String>,
        class_kind: ClassKind,
        decide: impl Fn(u64, u64) -> bool + Send + Sync + 'static,
    ) -> Self {
        GroundTruth { label: label.into(), class_kind, decide: Arc::new(decide) }
    }

    pub fn related(&self, i: u64, j: u64) -> bool {
        (self.decide)(i, j)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn class_kind(&self) -> ClassKind {
        self.class_kind
    }

    /// Materialize the restriction to `[0, bound]²`.
    pub fn window(&self, bound: u64) -> FiniteRelation {
        let mut pairs = Vec::new();
        for i in 0..=bound {
            for j in 0..=bound {
                if self.related(i, j) {
                    pairs.push((i, j));
                }
            }
        }
        FiniteRelation::from_pairs(bound, pairs).expect("pairs lie within the bound")
    }
}

impl fmt::Debug for GroundTruth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroundTruth")
            .field("label", &self.label)
            .field("class_kind", &self.class_kind)
            .finish()
    }
}

/// The `q`-th pair of the diagonal walk over ℕ² (starting at `q = 0`):
/// (0,0), (0,1), (1,0), (0,2), (1,1), (2,0), (0,3), …
pub fn diagonal_pair(q: u64) -> NodePair {
    let t = (((8 * q as u128 + 1).isqrt() - 1) / 2) as u64;
    let r = q - t * (t + 1) / 2;
    NodePair::new(r, t - r)
}

/// Index at which [`diagonal_pair`] emits `(i, j)` (1-based).
pub fn diagonal_index(i: u64, j: u64) -> u64 {
    (i + j) * (i + j + 1) / 2 + i + 1
}

/// Enumerate a relation by the diagonal sweep, replacing each unrelated
/// pair `(a, b)` by the reflexive pair `(a, a)`. The image is exactly the
/// relation (reflexivity supplies the stand-ins), every related pair
/// appears, and first coordinates still sweep all of ℕ.
pub fn sweep_enumerator(g: &GroundTruth) -> Enumerator {
    let decide = Arc::clone(&g.decide);
    Enumerator::new(format!("sweep({})", g.label), move |k| {
        let p = diagonal_pair(k - 1);
        if decide(p.first, p.second) {
            p
        } else {
            NodePair::new(p.first, p.first)
        }
    })
}

/// Like [`sweep_enumerator`] but with a constant stand-in pair
/// `(filler, filler)` for unrelated sweep positions. The stand-in choice
/// changes which indices get selected by a coding, never the relations
/// derived from it.
pub fn enumerator_from_decider(g: &GroundTruth, filler: u64) -> Enumerator {
    let decide = Arc::clone(&g.decide);
    let stand_in = NodePair::new(filler, filler);
    Enumerator::new(format!("sweep({}, filler {})", g.label, filler), move |k| {
        let p = diagonal_pair(k - 1);
        if decide(p.first, p.second) {
            p
        } else {
            stand_in
        }
    })
}

/// Congruence modulo `modulus` (`modulus >= 1`): all classes infinite.
pub fn mod_relation(modulus: u64) -> GroundTruth {
    assert!(modulus >= 1, "modulus must be positive");
    GroundTruth::new(format!("mod {modulus}"), ClassKind::AllInfinite, move |i, j| {
        i % modulus == j % modulus
    })
}

/// ℕ²: everything related, one infinite class.
pub fn full_relation() -> GroundTruth {
    GroundTruth::new("full", ClassKind::AllInfinite, |_, _| true)
}

/// The native enumeration of ℕ²: index `2^m(2n+1)` names the pair
/// `(m, n)`. Each pair appears exactly once.
pub fn full_enumerator() -> Enumerator {
    Enumerator::new("full", |k| NodePair::new(proj_exp(k), proj_odd(k)))
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SpecError {
    #[error("modulus must be at least 1")]
    ZeroModulus,
    #[error("stream value {value} repeats; the stream must be injective")]
    StreamRepeats { value: u64 },
    #[error("stream values must be at least 1 (got {value})")]
    StreamZero { value: u64 },
    #[error("listed classes overlap at {value}")]
    OverlappingClasses { value: u64 },
}

fn validate_stream(eta: &[u64]) -> Result<(), SpecError> {
    let mut seen = BTreeSet::new();
    for &e in eta {
        if e == 0 {
            return Err(SpecError::StreamZero { value: e });
        }
        if !seen.insert(e) {
            return Err(SpecError::StreamRepeats { value: e });
        }
    }
    Ok(())
}

/// The class members induced by the `n`-th stream value (1-based). Powers
/// that overflow `u64` cannot equal any queried node and drop out.
fn triple(eta: &[u64], n: u64) -> (u64, Option<u64>, Option<u64>) {
    match u32::try_from(eta[(n - 1) as usize]) {
        Ok(e) => (2 * n, 3u64.checked_pow(e), 5u64.checked_pow(e)),
        Err(_) => (2 * n, None, None),
    }
}

/// The pair of relations whose classes are `{2n, 3^eta(n)}` respectively
/// `{2n, 5^eta(n)}` (plus singletons), for an injective stream `eta` of
/// positive exponents. Each class has at most two members, so both are
/// equivalence relations outright, and their join's classes are the
/// triples `{2n, 3^eta(n), 5^eta(n)}`.
pub fn triple_join_parts(eta: &[u64]) -> Result<(GroundTruth, GroundTruth), SpecError> {
    validate_stream(eta)?;
    let make = |base: u64, owned: Vec<u64>| {
        GroundTruth::new(
            format!("triples(base {base}, stream {owned:?})"),
            ClassKind::AllFinite,
            move |i, j| {
                if i == j {
                    return true;
                }
                (1..=owned.len() as u64).any(|n| {
                    if n > i.max(j) {
                        return false;
                    }
                    let Ok(e) = u32::try_from(owned[(n - 1) as usize]) else {
                        return false;
                    };
                    match base.checked_pow(e) {
                        Some(p) => (i == 2 * n && j == p) || (i == p && j == 2 * n),
                        None => false,
                    }
                })
            },
        )
    };
    Ok((make(3, eta.to_vec()), make(5, eta.to_vec())))
}

/// The join of [`triple_join_parts`]: classes are the full triples.
pub fn triple_join_relation(eta: &[u64]) -> Result<GroundTruth, SpecError> {
    validate_stream(eta)?;
    let owned = eta.to_vec();
    Ok(GroundTruth::new(
        format!("triple-join(stream {owned:?})"),
        ClassKind::AllFinite,
        move |i, j| {
            if i == j {
                return true;
            }
            (1..=owned.len() as u64).any(|n| {
                let (even, three, five) = triple(&owned, n);
                let member = |x| x == even || Some(x) == three || Some(x) == five;
                n <= i.max(j) && member(i) && member(j)
            })
        },
    ))
}

/// Classes `{2n, 2n+1}` for `n` in the set `a`, singletons elsewhere:
/// `x` and `y` are related when equal, or adjacent with the even one
/// first and half of it a member of `a`.
pub fn adjacent_pairs_relation(a: &[u64]) -> GroundTruth {
    let set: BTreeSet<u64> = a.iter().copied().collect();
    GroundTruth::new(format!("adjacent-pairs({set:?})"), ClassKind::AllFinite, move |x, y| {
        let (lo, hi) = (x.min(y), x.max(y));
        x == y || (lo % 2 == 0 && set.contains(&(lo / 2)) && hi - lo == 1)
    })
}

/// Explicitly listed finite classes, with every unlisted number falling
/// into its residue class modulo `modulus` (unlisted numbers only relate
/// to unlisted numbers). `modulus = 0` makes the unlisted numbers
/// singletons.
pub fn partition_relation(
    classes: &[Vec<u64>],
    modulus: u64,
) -> Result<GroundTruth, SpecError> {
    let mut seen = BTreeSet::new();
    for class in classes {
        for &x in class {
            if !seen.insert(x) {
                return Err(SpecError::OverlappingClasses { value: x });
            }
        }
    }
    let classes: Vec<BTreeSet<u64>> = classes.iter().map(|c| c.iter().copied().collect()).collect();
    let class_kind = if modulus == 0 {
        ClassKind::AllFinite
    } else if classes.is_empty() {
        ClassKind::AllInfinite
    } else {
        ClassKind::Mixed
    };
    let label = format!("partition({classes:?}, rest mod {modulus})");
    Ok(GroundTruth::new(label, class_kind, move |i, j| {
        let slot = |x: u64| classes.iter().position(|c| c.contains(&x));
        match (slot(i), slot(j)) {
            (Some(a), Some(b)) => a == b,
            (None, None) => {
                if modulus == 0 {
                    i == j
                } else {
                    i % modulus == j % modulus
                }
            }
            _ => false,
        }
    }))
}

/// Serializable description of a built-in relation, the format the
/// command-line tools take:
/// `{"kind": "mod", "modulus": 3}`, `{"kind": "full"}`,
/// `{"kind": "partition", "classes": [[0,5],[1]], "modulus": 1}`,
/// `{"kind": "prop23", "eta": [2,3,7]}`, `{"kind": "prop24", "a": [3]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RelationSpec {
    Mod { modulus: u64 },
    Full,
    Partition {
        #[serde(default)]
        classes: Vec<Vec<u64>>,
        modulus: u64,
    },
    #[serde(rename = "prop23")]
    TripleJoin { eta: Vec<u64> },
    #[serde(rename = "prop24")]
    AdjacentPairs { a: Vec<u64> },
}

impl RelationSpec {
    pub fn ground_truth(&self) -> Result<GroundTruth, SpecError> {
        match self {
            RelationSpec::Mod { modulus } => {
                if *modulus == 0 {
                    return Err(SpecError::ZeroModulus);
                }
                Ok(mod_relation(*modulus))
            }
            RelationSpec::Full => Ok(full_relation()),
            RelationSpec::Partition { classes, modulus } => partition_relation(classes, *modulus),
            RelationSpec::TripleJoin { eta } => triple_join_relation(eta),
            RelationSpec::AdjacentPairs { a } => Ok(adjacent_pairs_relation(a)),
        }
    }

    /// The enumeration the tables are built over: the exponent pairing for
    /// the full relation (whose worked table values assume it), the
    /// diagonal sweep for everything else.
    pub fn enumerator(&self) -> Result<Enumerator, SpecError> {
        match self {
            RelationSpec::Full => Ok(full_enumerator()),
            other => Ok(sweep_enumerator(&other.ground_truth()?)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_walk_order_and_inverse() {
        let expected = [(0, 0), (0, 1), (1, 0), (0, 2), (1, 1), (2, 0), (0, 3)];
        for (q, &(a, b)) in expected.iter().enumerate() {
            assert_eq!(diagonal_pair(q as u64), NodePair::new(a, b));
        }
        for i in 0..20 {
            for j in 0..20 {
                assert_eq!(diagonal_pair(diagonal_index(i, j) - 1), NodePair::new(i, j));
            }
        }
    }

    #[test]
    fn ground_truths_are_equivalences_on_a_window() {
        let relations = vec![
            mod_relation(1),
            mod_relation(2),
            mod_relation(5),
            full_relation(),
            partition_relation(&[vec![0, 5], vec![1]], 1).unwrap(),
            triple_join_relation(&[2, 3]).unwrap(),
            adjacent_pairs_relation(&[3]),
        ];
        for g in relations {
            assert!(
                g.window(64).is_equivalence(0..=64),
                "{} is not an equivalence on [0, 64]",
                g.label()
            );
        }
    }

    #[test]
    fn sweep_emits_only_related_pairs_and_all_of_them() {
        let g = mod_relation(3);
        let nu = sweep_enumerator(&g);
        for k in 1..=200 {
            let p = nu.pair(k);
            assert!(g.related(p.first, p.second), "index {k} emitted {p:?}");
        }
        // Every related pair in a small window shows up at its sweep slot.
        for i in 0..10u64 {
            for j in 0..10u64 {
                if g.related(i, j) {
                    assert_eq!(nu.pair(diagonal_index(i, j)), NodePair::new(i, j));
                }
            }
        }
        assert_eq!(nu.label(), "sweep(mod 3)");
    }

    #[test]
    fn mod_one_sweep_never_needs_a_stand_in() {
        let nu = sweep_enumerator(&mod_relation(1));
        for k in 1..=100 {
            assert_eq!(nu.pair(k), diagonal_pair(k - 1));
        }
    }

    #[test]
    fn decider_enumerator_matches_sweep_on_related_slots() {
        let g = mod_relation(2);
        let sweep = sweep_enumerator(&g);
        let generic = enumerator_from_decider(&g, 0);
        for k in 1..=100 {
            let raw = diagonal_pair(k - 1);
            if g.related(raw.first, raw.second) {
                assert_eq!(sweep.pair(k), generic.pair(k));
            } else {
                assert_eq!(generic.pair(k), NodePair::new(0, 0));
                assert_eq!(sweep.pair(k), NodePair::new(raw.first, raw.first));
            }
        }
    }

    #[test]
    fn triple_parts_link_evens_to_powers() {
        let (f, g) = triple_join_parts(&[2, 3]).unwrap();
        assert!(f.related(2, 9), "n=1: {{2, 3²}}");
        assert!(f.related(9, 2));
        assert!(g.related(2, 25), "n=1: {{2, 5²}}");
        assert!(!f.related(9, 25), "powers are linked only through the even member");
        assert!(!g.related(9, 25));
        assert!(f.related(4, 27), "n=2: {{4, 3³}}");
        assert!(!f.related(4, 9));
        // Classes stay at size <= 2 on a window.
        for class in &f.window(200).classes().classes {
            assert!(class.len() <= 2, "class {class:?} too large");
        }
    }

    #[test]
    fn triple_join_classes_are_triples() {
        let j = triple_join_relation(&[2, 3]).unwrap();
        assert!(j.related(9, 25), "joined through 2");
        assert!(j.related(2, 25));
        assert!(j.related(27, 125), "joined through 4");
        assert!(!j.related(3, 5), "exponent 1 is not in the stream");
        assert!(!j.related(9, 27), "different triples");
        let classes = j.window(130).classes();
        assert_eq!(classes.class_of(2), [2, 9, 25].into_iter().collect());
        assert_eq!(classes.class_of(4), [4, 27, 125].into_iter().collect());
        assert_eq!(classes.class_of(6), [6].into_iter().collect(), "partners exceed the window");
    }

    #[test]
    fn streams_must_be_injective_and_positive() {
        assert_eq!(
            triple_join_relation(&[2, 2]).unwrap_err(),
            SpecError::StreamRepeats { value: 2 }
        );
        assert_eq!(triple_join_parts(&[0]).unwrap_err(), SpecError::StreamZero { value: 0 });
    }

    #[test]
    fn adjacent_pairs_follow_the_membership_set() {
        let e = adjacent_pairs_relation(&[3]);
        assert!(e.related(6, 7));
        assert!(e.related(7, 6));
        assert!(!e.related(4, 5), "2 is not a member");
        assert!(e.related(6, 6));
        assert!(!e.related(5, 6), "5 belongs to the class of 4, not 6");
        let classes = e.window(16).classes();
        assert_eq!(classes.class_of(6), [6, 7].into_iter().collect());
        assert_eq!(classes.class_of(4), [4].into_iter().collect());
    }

    #[test]
    fn partitions_respect_listed_classes_then_residues() {
        let g = partition_relation(&[vec![0, 5], vec![1]], 1).unwrap();
        assert!(g.related(0, 5));
        assert!(!g.related(0, 1), "different listed classes");
        assert!(g.related(2, 7), "unlisted numbers share the single residue class");
        assert!(!g.related(2, 5), "listed and unlisted never mix");

        let like_mod4 = partition_relation(&[], 4).unwrap();
        let real_mod4 = mod_relation(4);
        for i in 0..=20 {
            for j in 0..=20 {
                assert_eq!(like_mod4.related(i, j), real_mod4.related(i, j));
            }
        }

        let identity_rest = partition_relation(&[vec![0, 5]], 0).unwrap();
        assert!(identity_rest.related(2, 2));
        assert!(!identity_rest.related(2, 3));
        assert_eq!(identity_rest.class_kind(), ClassKind::AllFinite);

        assert_eq!(
            partition_relation(&[vec![0, 1], vec![1, 2]], 1).unwrap_err(),
            SpecError::OverlappingClasses { value: 1 }
        );
    }

    #[test]
    fn specs_parse_build_and_reject() {
        let spec: RelationSpec = serde_json::from_str(r#"{"kind":"mod","modulus":3}"#).unwrap();
        assert_eq!(spec, RelationSpec::Mod { modulus: 3 });
        assert_eq!(spec.ground_truth().unwrap().label(), "mod 3");
        assert_eq!(spec.enumerator().unwrap().label(), "sweep(mod 3)");

        let spec: RelationSpec = serde_json::from_str(r#"{"kind":"full"}"#).unwrap();
        assert_eq!(spec.enumerator().unwrap().label(), "full");

        let spec: RelationSpec =
            serde_json::from_str(r#"{"kind":"prop23","eta":[2,3,7]}"#).unwrap();
        assert!(spec.ground_truth().unwrap().related(9, 25));

        let spec: RelationSpec = serde_json::from_str(r#"{"kind":"prop24","a":[3]}"#).unwrap();
        assert!(spec.ground_truth().unwrap().related(6, 7));

        assert!(serde_json::from_str::<RelationSpec>(r#"{"kind":"frobnicate"}"#).is_err());
        assert!(RelationSpec::Mod { modulus: 0 }.ground_truth().is_err());
    }

    #[test]
    fn full_enumerator_reads_the_exponent_pairing() {
        let nu = full_enumerator();
        assert_eq!(nu.pair(1), NodePair::new(0, 0));
        assert_eq!(nu.pair(5), NodePair::new(0, 2));
        assert_eq!(nu.pair(12), NodePair::new(2, 1));
    }
}
