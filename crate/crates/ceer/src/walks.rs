//! Enumerations of relations and walks along their edges.
//!
//! An [`Enumerator`] is a total function from positive indices to node pairs;
//! it is the only way the rest of the crate observes an infinite relation.
//! Index `k` names the pair `nu(k)` read forwards, and the negated index `-k`
//! names the same pair read backwards, so a signed index sequence describes a
//! walk through the graph of the enumerated relation.

use std::fmt;
use std::num::NonZeroI64;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::relation::NodePair;

/// A total, deterministic enumeration `k -> nu(k)` of a relation, indexed
/// from 1. Every evaluation bumps a shared query counter, which the fuel
/// discipline and the bounded-quantifier instrumentation read.
#[derive(Clone)]
pub struct Enumerator {
    label: String,
    eval: Arc<dyn Fn(u64) -> NodePair + Send + Sync>,
    queries: Arc<AtomicU64>,
}

impl Enumerator {
    pub fn new(label: impl Into<String>, eval: impl Fn(u64) -> NodePair + Send + Sync + 'static) -> Self {
        Enumerator {
            label: label.into(),
            eval: Arc::new(eval),
            queries: Arc::new(AtomicU64::new(0)),
        }
    }

    /// The pair at positive index `k`.
    pub fn pair(&self, k: u64) -> NodePair {
        assert!(k >= 1, "enumeration indices start at 1");
        self.queries.fetch_add(1, Ordering::Relaxed);
        (self.eval)(k)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Total queries made through this enumerator (shared across clones).
    pub fn queries(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }

    /// A new enumerator that reads this one through an index transformation.
    /// It gets a fresh query counter; lookups do not bump this one's.
    pub fn reindexed(
        &self,
        label: impl Into<String>,
        map: impl Fn(u64) -> u64 + Send + Sync + 'static,
    ) -> Enumerator {
        let inner = Arc::clone(&self.eval);
        Enumerator::new(label, move |k| inner(map(k)))
    }
}

impl fmt::Debug for Enumerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Enumerator({})", self.label)
    }
}

/// A nonzero signed index into an enumeration: `k` traverses the pair at
/// index `k` forwards, `-k` traverses it backwards.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SignedEdge(NonZeroI64);

impl SignedEdge {
    pub fn new(x: i64) -> Option<Self> {
        NonZeroI64::new(x).map(SignedEdge)
    }

    pub fn forward(k: u64) -> Self {
        SignedEdge(NonZeroI64::new(i64::try_from(k).expect("index fits i64")).unwrap())
    }

    pub fn backward(k: u64) -> Self {
        SignedEdge(NonZeroI64::new(-i64::try_from(k).expect("index fits i64")).unwrap())
    }

    pub fn get(self) -> i64 {
        self.0.get()
    }

    /// The positive index this edge points at.
    pub fn index(self) -> u64 {
        self.0.get().unsigned_abs()
    }

    pub fn is_forward(self) -> bool {
        self.0.get() > 0
    }
}

impl fmt::Debug for SignedEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Where a signed edge starts, given a lookup for the underlying pairs.
pub fn tau_with(x: SignedEdge, pair_of: impl Fn(u64) -> NodePair) -> u64 {
    let p = pair_of(x.index());
    if x.is_forward() {
        p.first
    } else {
        p.second
    }
}

/// Where a signed edge ends, given a lookup for the underlying pairs.
pub fn eta_with(x: SignedEdge, pair_of: impl Fn(u64) -> NodePair) -> u64 {
    let p = pair_of(x.index());
    if x.is_forward() {
        p.second
    } else {
        p.first
    }
}

/// Start node of a signed edge under an enumeration.
pub fn tau(x: SignedEdge, nu: &Enumerator) -> u64 {
    tau_with(x, |k| nu.pair(k))
}

/// End node of a signed edge under an enumeration.
pub fn eta(x: SignedEdge, nu: &Enumerator) -> u64 {
    eta_with(x, |k| nu.pair(k))
}

/// A nonempty sequence of signed edges.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct Walk {
    steps: Vec<SignedEdge>,
}

impl Walk {
    pub fn new(steps: Vec<SignedEdge>) -> Option<Self> {
        if steps.is_empty() {
            None
        } else {
            Some(Walk { steps })
        }
    }

    pub fn from_signed(steps: &[i64]) -> Option<Self> {
        let steps: Option<Vec<SignedEdge>> = steps.iter().map(|&x| SignedEdge::new(x)).collect();
        Walk::new(steps?)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn steps(&self) -> &[SignedEdge] {
        &self.steps
    }

    pub fn signed(&self) -> Vec<i64> {
        self.steps.iter().map(|s| s.get()).collect()
    }

    /// True when the steps form a walk from `i` to `j`: the first edge starts
    /// at `i`, the last ends at `j`, and each edge starts where the previous
    /// one ended.
    pub fn connects_with(&self, i: u64, j: u64, pair_of: impl Fn(u64) -> NodePair) -> bool {
        if tau_with(self.steps[0], &pair_of) != i {
            return false;
        }
        for w in self.steps.windows(2) {
            if eta_with(w[0], &pair_of) != tau_with(w[1], &pair_of) {
                return false;
            }
        }
        eta_with(self.steps[self.steps.len() - 1], &pair_of) == j
    }

    /// Canonical shape of a minimal walk: some block of backward edges
    /// followed by some block of forward edges. Returns the split point when
    /// the walk has that shape.
    pub fn backward_forward_split(&self) -> Option<usize> {
        let split = self.steps.iter().position(|s| s.is_forward()).unwrap_or(self.steps.len());
        if self.steps[split..].iter().all(|s| s.is_forward()) {
            Some(split)
        } else {
            None
        }
    }
}

impl TryFrom<Vec<i64>> for Walk {
    type Error = &'static str;
    fn try_from(v: Vec<i64>) -> Result<Self, Self::Error> {
        Walk::from_signed(&v).ok_or("walk must be a nonempty sequence of nonzero indices")
    }
}

impl From<Walk> for Vec<i64> {
    fn from(w: Walk) -> Vec<i64> {
        w.signed()
    }
}

impl fmt::Debug for Walk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Walk{:?}", self.signed())
    }
}

/// Walk check against an enumeration.
pub fn is_walk(w: &Walk, i: u64, j: u64, nu: &Enumerator) -> bool {
    w.connects_with(i, j, |k| nu.pair(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// nu: 1 -> (0,2), 2 -> (1,3), 3 -> (0,7), anything else (9,9).
    fn tiny() -> Enumerator {
        Enumerator::new("tiny", |k| match k {
            1 => NodePair::new(0, 2),
            2 => NodePair::new(1, 3),
            3 => NodePair::new(0, 7),
            _ => NodePair::new(9, 9),
        })
    }

    #[test]
    fn signed_edges_orient_pairs() {
        let nu = tiny();
        let f = SignedEdge::forward(1);
        let b = SignedEdge::backward(1);
        assert_eq!((tau(f, &nu), eta(f, &nu)), (0, 2));
        assert_eq!((tau(b, &nu), eta(b, &nu)), (2, 0));
        // tau(-k) = eta(k) and eta(-k) = tau(k).
        assert_eq!(tau(b, &nu), eta(f, &nu));
        assert_eq!(eta(b, &nu), tau(f, &nu));
    }

    #[test]
    fn zero_is_not_an_edge() {
        assert!(SignedEdge::new(0).is_none());
        assert!(SignedEdge::new(-4).is_some());
    }

    #[test]
    fn walk_endpoints_chain() {
        let nu = tiny();
        // 2 --(backwards 1)--> 0 --(forwards 3)--> 7
        let w = Walk::from_signed(&[-1, 3]).unwrap();
        assert!(is_walk(&w, 2, 7, &nu));
        assert!(!is_walk(&w, 2, 3, &nu));
        // Broken chaining: edge 2 starts at 1, not at 2's endpoint.
        let bad = Walk::from_signed(&[-1, 2]).unwrap();
        assert!(!is_walk(&bad, 2, 3, &nu));
    }

    #[test]
    fn empty_walks_are_rejected() {
        assert!(Walk::from_signed(&[]).is_none());
        assert!(Walk::from_signed(&[1, 0]).is_none());
    }

    #[test]
    fn split_shape() {
        assert_eq!(Walk::from_signed(&[-1, -2, 3]).unwrap().backward_forward_split(), Some(2));
        assert_eq!(Walk::from_signed(&[-1, -2]).unwrap().backward_forward_split(), Some(2));
        assert_eq!(Walk::from_signed(&[3]).unwrap().backward_forward_split(), Some(0));
        assert_eq!(Walk::from_signed(&[3, -1]).unwrap().backward_forward_split(), None);
    }

    #[test]
    fn query_counter_tracks_lookups() {
        let nu = tiny();
        let before = nu.queries();
        nu.pair(1);
        nu.pair(2);
        assert_eq!(nu.queries() - before, 2);
    }
}
