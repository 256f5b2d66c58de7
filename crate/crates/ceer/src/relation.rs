//! Finite binary relations on an initial segment `[0, bound]` of the naturals.
//!
//! These are the brute-force objects of the crate: windowed restrictions of
//! infinite relations that are small enough to compose, close, and compare
//! exhaustively. All set semantics are exact.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// An ordered pair of nodes. Serializes as a two-element array.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "(u64, u64)", into = "(u64, u64)")]
pub struct NodePair {
    pub first: u64,
    pub second: u64,
}

impl NodePair {
    pub fn new(first: u64, second: u64) -> Self {
        NodePair { first, second }
    }

    /// The pair with its components swapped.
    pub fn swapped(self) -> Self {
        NodePair { first: self.second, second: self.first }
    }
}

impl From<(u64, u64)> for NodePair {
    fn from((a, b): (u64, u64)) -> Self {
        NodePair::new(a, b)
    }
}

impl From<NodePair> for (u64, u64) {
    fn from(p: NodePair) -> Self {
        (p.first, p.second)
    }
}

impl fmt::Debug for NodePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.first, self.second)
    }
}

impl fmt::Display for NodePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RelationError {
    #[error("pair ({0}, {1}) exceeds bound {2}")]
    OutOfBounds(u64, u64, u64),
    #[error("bound mismatch: {0} vs {1}")]
    BoundMismatch(u64, u64),
    #[error("operand is not an equivalence relation on [0, {0}]")]
    NotEquivalence(u64),
}

/// A finite relation: a set of pairs whose components all lie in `[0, bound]`.
///
/// Pairs are kept in a sorted set, so iteration and serialization order are
/// canonical (lexicographic).
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawRelation", into = "RawRelation")]
pub struct FiniteRelation {
    bound: u64,
    pairs: BTreeSet<(u64, u64)>,
}

#[derive(Serialize, Deserialize)]
struct RawRelation {
    bound: u64,
    pairs: Vec<(u64, u64)>,
}

impl TryFrom<RawRelation> for FiniteRelation {
    type Error = RelationError;
    fn try_from(raw: RawRelation) -> Result<Self, RelationError> {
        FiniteRelation::from_pairs(raw.bound, raw.pairs)
    }
}

impl From<FiniteRelation> for RawRelation {
    fn from(r: FiniteRelation) -> Self {
        RawRelation { bound: r.bound, pairs: r.pairs.into_iter().collect() }
    }
}

impl fmt::Debug for FiniteRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteRelation(bound {}, {} pairs)", self.bound, self.pairs.len())
    }
}

impl FiniteRelation {
    pub fn empty(bound: u64) -> Self {
        FiniteRelation { bound, pairs: BTreeSet::new() }
    }

    /// The identity relation on `[0, bound]`.
    pub fn identity(bound: u64) -> Self {
        FiniteRelation { bound, pairs: (0..=bound).map(|i| (i, i)).collect() }
    }

    pub fn from_pairs(
        bound: u64,
        pairs: impl IntoIterator<Item = (u64, u64)>,
    ) -> Result<Self, RelationError> {
        let mut set = BTreeSet::new();
        for (i, j) in pairs {
            if i > bound || j > bound {
                return Err(RelationError::OutOfBounds(i, j, bound));
            }
            set.insert((i, j));
        }
        Ok(FiniteRelation { bound, pairs: set })
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, i: u64, j: u64) -> bool {
        self.pairs.contains(&(i, j))
    }

    pub fn insert(&mut self, i: u64, j: u64) -> Result<(), RelationError> {
        if i > self.bound || j > self.bound {
            return Err(RelationError::OutOfBounds(i, j, self.bound));
        }
        self.pairs.insert((i, j));
        Ok(())
    }

    pub fn pairs(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn is_subset_of(&self, other: &FiniteRelation) -> bool {
        self.pairs.is_subset(&other.pairs)
    }

    pub fn union(&self, other: &FiniteRelation) -> Result<FiniteRelation, RelationError> {
        self.check_bound(other)?;
        let pairs = self.pairs.union(&other.pairs).copied().collect();
        Ok(FiniteRelation { bound: self.bound, pairs })
    }

    /// Relational composition: `(i, k)` is in the result when some `j` has
    /// `(i, j)` here and `(j, k)` in `other`.
    pub fn compose(&self, other: &FiniteRelation) -> Result<FiniteRelation, RelationError> {
        self.check_bound(other)?;
        // Index the right operand by first component once.
        let mut by_first: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        for &(j, k) in &other.pairs {
            by_first.entry(j).or_default().push(k);
        }
        let mut pairs = BTreeSet::new();
        for &(i, j) in &self.pairs {
            if let Some(ks) = by_first.get(&j) {
                for &k in ks {
                    pairs.insert((i, k));
                }
            }
        }
        Ok(FiniteRelation { bound: self.bound, pairs })
    }

    /// The converse relation: every pair swapped.
    pub fn converse(&self) -> FiniteRelation {
        FiniteRelation {
            bound: self.bound,
            pairs: self.pairs.iter().map(|&(i, j)| (j, i)).collect(),
        }
    }

    /// Transitive closure as the union of all n-fold compositions, computed
    /// by brute-force fixpoint. Pure set semantics; no reflexive padding.
    pub fn transitive_closure_bf(&self) -> FiniteRelation {
        let mut adj: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        for &(i, j) in &self.pairs {
            adj.entry(i).or_default().push(j);
        }
        // Reachability in >= 1 steps from every source that appears.
        let mut pairs = BTreeSet::new();
        for &start in adj.keys() {
            let mut seen = BTreeSet::new();
            let mut queue: VecDeque<u64> = adj[&start].iter().copied().collect();
            while let Some(v) = queue.pop_front() {
                if seen.insert(v) {
                    pairs.insert((start, v));
                    if let Some(next) = adj.get(&v) {
                        queue.extend(next.iter().copied());
                    }
                }
            }
        }
        FiniteRelation { bound: self.bound, pairs }
    }

    pub fn is_symmetric(&self) -> bool {
        self.pairs.iter().all(|&(i, j)| self.pairs.contains(&(j, i)))
    }

    pub fn is_transitive(&self) -> bool {
        let mut by_first: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        for &(j, k) in &self.pairs {
            by_first.entry(j).or_default().push(k);
        }
        self.pairs.iter().all(|&(i, j)| {
            by_first
                .get(&j)
                .map(|ks| ks.iter().all(|&k| self.pairs.contains(&(i, k))))
                .unwrap_or(true)
        })
    }

    /// Equivalence check relative to an explicit domain: reflexive on the
    /// domain, symmetric, and transitive.
    pub fn is_equivalence(&self, domain: impl IntoIterator<Item = u64>) -> bool {
        domain.into_iter().all(|i| self.pairs.contains(&(i, i)))
            && self.is_symmetric()
            && self.is_transitive()
    }

    /// Equivalence check over the full window `[0, bound]`.
    pub fn is_equivalence_on_window(&self) -> bool {
        self.is_equivalence(0..=self.bound)
    }

    /// The field: every node that appears in some pair, on either side.
    pub fn field(&self) -> BTreeSet<u64> {
        let mut out = BTreeSet::new();
        for &(i, j) in &self.pairs {
            out.insert(i);
            out.insert(j);
        }
        out
    }

    /// Least upper bound of two equivalence relations in the lattice of
    /// equivalence relations: the transitive closure of their union.
    pub fn lattice_join(&self, other: &FiniteRelation) -> Result<FiniteRelation, RelationError> {
        self.check_bound(other)?;
        if !self.is_symmetric() || !self.is_transitive() {
            return Err(RelationError::NotEquivalence(self.bound));
        }
        if !other.is_symmetric() || !other.is_transitive() {
            return Err(RelationError::NotEquivalence(other.bound));
        }
        Ok(self.union(other)?.transitive_closure_bf())
    }

    /// Classes of a symmetric transitive relation: the blocks of its field.
    /// Nodes outside the field have empty classes and do not appear.
    pub fn classes(&self) -> Partition {
        debug_assert!(self.is_symmetric() && self.is_transitive());
        let mut uf = UnionFind::new((self.bound + 1) as usize);
        for &(i, j) in &self.pairs {
            uf.union(i as usize, j as usize);
        }
        let mut blocks: BTreeMap<usize, BTreeSet<u64>> = BTreeMap::new();
        for i in self.field() {
            blocks.entry(uf.find(i as usize)).or_default().insert(i);
        }
        let mut classes: Vec<BTreeSet<u64>> = blocks.into_values().collect();
        classes.sort_by_key(|c| *c.first().unwrap());
        Partition { classes }
    }

    /// Restrict to pairs whose components are both at most `new_bound`.
    pub fn restrict(&self, new_bound: u64) -> FiniteRelation {
        FiniteRelation {
            bound: new_bound,
            pairs: self
                .pairs
                .iter()
                .copied()
                .filter(|&(i, j)| i <= new_bound && j <= new_bound)
                .collect(),
        }
    }

    /// Render as Graphviz DOT. Symmetric relations come out as an undirected
    /// graph with one edge per unordered pair; anything else is a digraph.
    /// Reflexive pairs are left implicit.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        let symmetric = self.is_symmetric();
        let (kind, arrow) = if symmetric { ("graph", "--") } else { ("digraph", "->") };
        out.push_str(&format!("{kind} \"{name}\" {{\n"));
        for i in self.field() {
            out.push_str(&format!("  {i};\n"));
        }
        for &(i, j) in &self.pairs {
            if i == j || (symmetric && i > j) {
                continue;
            }
            out.push_str(&format!("  {i} {arrow} {j};\n"));
        }
        out.push_str("}\n");
        out
    }

    fn check_bound(&self, other: &FiniteRelation) -> Result<(), RelationError> {
        if self.bound != other.bound {
            return Err(RelationError::BoundMismatch(self.bound, other.bound));
        }
        Ok(())
    }
}

/// The blocks of a symmetric transitive relation, sorted by least element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Partition {
    pub classes: Vec<BTreeSet<u64>>,
}

impl Partition {
    /// The class containing `i`, empty if `i` is outside the field.
    pub fn class_of(&self, i: u64) -> BTreeSet<u64> {
        self.classes
            .iter()
            .find(|c| c.contains(&i))
            .cloned()
            .unwrap_or_default()
    }
}

/// Plain union-find with path halving, used for exact connectivity on
/// windows.
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
    }

    pub fn connected(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(bound: u64, pairs: &[(u64, u64)]) -> FiniteRelation {
        FiniteRelation::from_pairs(bound, pairs.iter().copied()).unwrap()
    }

    #[test]
    fn compose_chains_through_middles() {
        let a = rel(5, &[(0, 1), (2, 3)]);
        let b = rel(5, &[(1, 4), (3, 3)]);
        let c = a.compose(&b).unwrap();
        assert_eq!(c, rel(5, &[(0, 4), (2, 3)]));
    }

    #[test]
    fn compose_rejects_bound_mismatch() {
        let a = rel(5, &[]);
        let b = rel(6, &[]);
        assert_eq!(a.compose(&b), Err(RelationError::BoundMismatch(5, 6)));
    }

    #[test]
    fn converse_swaps_pairs() {
        let a = rel(3, &[(0, 1), (2, 2)]);
        assert_eq!(a.converse(), rel(3, &[(1, 0), (2, 2)]));
        assert_eq!(a.converse().converse(), a);
    }

    #[test]
    fn closure_of_a_chain() {
        let a = rel(4, &[(0, 1), (1, 2), (2, 3)]);
        let t = a.transitive_closure_bf();
        assert!(t.contains(0, 3));
        assert!(t.contains(1, 3));
        assert!(!t.contains(3, 0));
        assert_eq!(t.len(), 6);
    }

    #[test]
    fn closure_without_reflexive_padding() {
        // tc is the union of n-fold compositions: (1,1) only shows up when a
        // cycle produces it.
        let a = rel(4, &[(0, 1)]);
        assert_eq!(a.transitive_closure_bf(), a);
        let b = rel(4, &[(0, 1), (1, 0)]);
        let t = b.transitive_closure_bf();
        assert!(t.contains(0, 0) && t.contains(1, 1));
    }

    #[test]
    fn identity_is_an_equivalence() {
        let i = FiniteRelation::identity(5);
        assert!(i.is_equivalence_on_window());
        assert_eq!(i.classes().classes.len(), 6);
    }

    #[test]
    fn join_of_two_partitions() {
        // {0,1} + {1,2} join to {0,1,2}.
        let a = rel(2, &[(0, 0), (1, 1), (2, 2), (0, 1), (1, 0)]);
        let b = rel(2, &[(0, 0), (1, 1), (2, 2), (1, 2), (2, 1)]);
        let j = a.lattice_join(&b).unwrap();
        assert!(j.is_equivalence_on_window());
        assert_eq!(j.classes().classes, vec![(0..=2).collect::<BTreeSet<_>>()]);
    }

    #[test]
    fn join_rejects_non_equivalences() {
        let a = rel(2, &[(0, 1)]);
        let b = FiniteRelation::identity(2);
        assert_eq!(a.lattice_join(&b), Err(RelationError::NotEquivalence(2)));
    }

    #[test]
    fn field_and_classes() {
        let a = rel(9, &[(1, 1), (1, 5), (5, 1), (5, 5), (7, 7)]);
        assert_eq!(a.field(), BTreeSet::from([1, 5, 7]));
        let p = a.classes();
        assert_eq!(p.classes, vec![BTreeSet::from([1, 5]), BTreeSet::from([7])]);
        assert_eq!(p.class_of(3), BTreeSet::new());
    }

    #[test]
    fn out_of_bounds_pairs_are_rejected() {
        assert_eq!(
            FiniteRelation::from_pairs(3, [(0, 4)]),
            Err(RelationError::OutOfBounds(0, 4, 3))
        );
    }

    #[test]
    fn json_round_trip_is_sorted() {
        let a = rel(4, &[(3, 1), (0, 2), (0, 1)]);
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, r#"{"bound":4,"pairs":[[0,1],[0,2],[3,1]]}"#);
        let back: FiniteRelation = serde_json::from_str(&json).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn dot_output_for_symmetric_relation() {
        let a = rel(3, &[(0, 1), (1, 0), (0, 0)]);
        let dot = a.to_dot("w");
        assert!(dot.starts_with("graph \"w\""));
        assert!(dot.contains("0 -- 1;"));
        assert!(!dot.contains("1 -- 0"));
    }
}
