//! Decision procedures for the relations a coding table derives from its
//! source enumeration.
//!
//! With a table in hand (see [`crate::coding`]), each relation below is
//! decided by searches the table's growth laws keep bounded:
//!
//! - `R` relates `(i, j)` when some entry selected exactly the pair
//!   `(i, j)`. Second coordinates strictly increase, so scanning entries
//!   until the seconds pass `j` settles membership.
//! - `S` relates `(i, j)` when entries `m`, `n` have seconds `i`, `j` and
//!   mirrored source pairs, `nu(n) = nu(m)` swapped. `T` asks for equal
//!   source pairs instead. `H = S ∪ T`.
//! - `F` is the equivalence generated by `R`: walks through table entries,
//!   read forwards or backwards. For `i ≠ j` a walk can always be pruned
//!   so every entry it uses has second coordinate at most `max(i, j)`,
//!   which turns connectivity into a finite union-find; `(i, i)` instead
//!   asks whether `i` shows up in the table at all, and the half of that
//!   question that reads first coordinates is answered by a fuel-bounded
//!   scan of the source enumeration — a `false` there means only "not in
//!   the prefix scanned".
//! - On a merged double coding, `J` bridges the nodes the first half's `H`
//!   never touches, connecting them through the second half's entries, and
//!   `G = H ∪ J`. These are inherent methods of
//!   [`MergedCoding`](crate::merged::MergedCoding).
//!
//! Deciders take `&mut` tables because answering may fill more entries;
//! the only failure is running out of fuel while extending.

use serde::Serialize;
use std::collections::BTreeMap;
use std::collections::VecDeque;
use thiserror::Error;

use crate::coding::{Coding, CodingError};
use crate::merged::MergedCoding;
use crate::relation::{NodePair, UnionFind};
use crate::seq_codec::decode_items_u64;
use crate::walks::{SignedEdge, Walk};

/// Largest `i + j` the exhaustive walk-code scan of [`in_f_formula`]
/// accepts: the scan bound `2^(1 + s(s + 2))` for `s = max(2, i + j)` is
/// about 33 million at `s = 4` and leaves the feasible range right after.
pub const FORMULA_SUM_LIMIT: u64 = 4;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum DecideError {
    #[error(transparent)]
    Coding(#[from] CodingError),
    /// The walk-code scan would need `2^(1 + s(s + 2))` candidates for
    /// `s = i + j`, which stops being scannable past `s = 4`.
    #[error(
        "walk-code scan for ({i}, {j}) needs 2^(1 + s(s + 2)) candidates at s = {} — \
         only i + j <= {limit} is scannable",
        .i + .j
    )]
    ScaleExceeded { i: u64, j: u64, limit: u64 },
}

/// Evidence a decider can hand back alongside a `true` answer.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `R`: entry `n` selected exactly the asked-for pair.
    TableEntry { n: u64, pair: NodePair },
    /// `S`: entries `m`, `n` have the asked-for seconds and mirrored
    /// source pairs.
    MirroredSources { m: u64, n: u64, nu_m: NodePair, nu_n: NodePair },
    /// `T`: entries `m`, `n` have the asked-for seconds and the same
    /// source pair.
    EqualSources { m: u64, n: u64, source: NodePair },
    /// `F` (or `J`, over the second half of a merged coding): a walk
    /// through table entries, with the nodes it visits.
    ConnectingWalk { steps: Vec<i64>, nodes: Vec<u64> },
}

/// The entry whose selected pair has second coordinate `v`, if any.
/// At most one exists since seconds strictly increase.
pub fn second_witness<C: Coding + ?Sized>(c: &mut C, v: u64) -> Result<Option<u64>, CodingError> {
    c.ensure_second_above(v)?;
    for n in 1..=c.filled() {
        let p = c.pi_at(n);
        if p.second == v {
            return Ok(Some(n));
        }
        if p.second > v {
            break;
        }
    }
    Ok(None)
}

/// `R`: some entry selected exactly `(i, j)`.
pub fn in_r<C: Coding + ?Sized>(c: &mut C, i: u64, j: u64) -> Result<bool, CodingError> {
    Ok(r_witness(c, i, j)?.is_some())
}

pub fn r_witness<C: Coding + ?Sized>(c: &mut C, i: u64, j: u64) -> Result<Option<u64>, CodingError> {
    Ok(second_witness(c, j)?.filter(|&n| c.pi_at(n).first == i))
}

/// `S`: entries `m`, `n` with seconds `i`, `j` whose source pairs mirror
/// each other (`nu(n)` is `nu(m)` swapped).
pub fn in_s<C: Coding + ?Sized>(c: &mut C, i: u64, j: u64) -> Result<bool, CodingError> {
    Ok(s_witness(c, i, j)?.is_some())
}

pub fn s_witness<C: Coding + ?Sized>(
    c: &mut C,
    i: u64,
    j: u64,
) -> Result<Option<(u64, u64)>, CodingError> {
    let (Some(m), Some(n)) = (second_witness(c, i)?, second_witness(c, j)?) else {
        return Ok(None);
    };
    Ok((c.nu().pair(n) == c.nu().pair(m).swapped()).then_some((m, n)))
}

/// `T`: entries `m`, `n` with seconds `i`, `j` and equal source pairs.
pub fn in_t<C: Coding + ?Sized>(c: &mut C, i: u64, j: u64) -> Result<bool, CodingError> {
    Ok(t_witness(c, i, j)?.is_some())
}

pub fn t_witness<C: Coding + ?Sized>(
    c: &mut C,
    i: u64,
    j: u64,
) -> Result<Option<(u64, u64)>, CodingError> {
    let (Some(m), Some(n)) = (second_witness(c, i)?, second_witness(c, j)?) else {
        return Ok(None);
    };
    Ok((c.nu().pair(n) == c.nu().pair(m)).then_some((m, n)))
}

/// `H = S ∪ T`. Its field is exactly the second coordinates the table has
/// selected: `in_h(i, i)` holds iff some entry's second is `i`.
pub fn in_h<C: Coding + ?Sized>(c: &mut C, i: u64, j: u64) -> Result<bool, CodingError> {
    Ok(in_s(c, i, j)? || in_t(c, i, j)?)
}

pub fn h_witness<C: Coding + ?Sized>(
    c: &mut C,
    i: u64,
    j: u64,
) -> Result<Option<Witness>, CodingError> {
    if let Some((m, n)) = s_witness(c, i, j)? {
        return Ok(Some(Witness::MirroredSources {
            m,
            n,
            nu_m: c.nu().pair(m),
            nu_n: c.nu().pair(n),
        }));
    }
    if let Some((m, n)) = t_witness(c, i, j)? {
        return Ok(Some(Witness::EqualSources { m, n, source: c.nu().pair(m) }));
    }
    Ok(None)
}

/// Connectivity index over the table entries whose second coordinate is at
/// most `cap`. Any walk between distinct nodes `i, j <= cap` can be pruned
/// to use only such entries (a walk's topmost node above the endpoints is
/// entered and left through the unique entry selecting it, and the two
/// steps cancel), so this little graph decides `F` away from the diagonal.
pub struct ReachIndex {
    cap: u64,
    ids: BTreeMap<u64, usize>,
    uf: UnionFind,
    admitted: Vec<(u64, NodePair)>,
}

impl ReachIndex {
    pub fn build<C: Coding + ?Sized>(c: &mut C, cap: u64) -> Result<ReachIndex, CodingError> {
        c.ensure_second_above(cap)?;
        let mut admitted = Vec::new();
        for n in 1..=c.filled() {
            let p = c.pi_at(n);
            if p.first <= cap && p.second <= cap {
                admitted.push((n, p));
            }
        }
        let mut ids = BTreeMap::new();
        for &(_, p) in &admitted {
            let next = ids.len();
            ids.entry(p.first).or_insert(next);
            let next = ids.len();
            ids.entry(p.second).or_insert(next);
        }
        let mut uf = UnionFind::new(ids.len());
        for &(_, p) in &admitted {
            uf.union(ids[&p.first], ids[&p.second]);
        }
        Ok(ReachIndex { cap, ids, uf, admitted })
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    /// The admitted entries, as (table index, selected pair).
    pub fn admitted(&self) -> &[(u64, NodePair)] {
        &self.admitted
    }

    /// Whether `i` and `j` are joined by a walk through admitted entries.
    /// Exact for `i != j`; the diagonal needs [`in_f`]'s field check.
    pub fn connected(&mut self, i: u64, j: u64) -> bool {
        assert!(i <= self.cap && j <= self.cap, "nodes must lie within the cap");
        if i == j {
            return true;
        }
        match (self.ids.get(&i).copied(), self.ids.get(&j).copied()) {
            (Some(a), Some(b)) => self.uf.connected(a, b),
            _ => false,
        }
    }
}

/// `F`: the equivalence generated by the selected pairs.
///
/// For `i != j` the answer is exact (bounded union-find, see
/// [`ReachIndex`]). For `i == j` it asks whether `i` occurs in the table:
/// as a second coordinate this is exact, but as a first coordinate it is
/// settled by scanning `nu(1), nu(2), …` for a first coordinate equal to
/// `i`, giving up after `fuel` queries — so a `false` on the diagonal is
/// relative to the scanned prefix, not a refutation.
pub fn in_f<C: Coding + ?Sized>(c: &mut C, i: u64, j: u64) -> Result<bool, CodingError> {
    if i != j {
        return Ok(ReachIndex::build(c, i.max(j))?.connected(i, j));
    }
    if second_witness(c, i)?.is_some() {
        return Ok(true);
    }
    Ok(first_coordinate_witness(c, i).is_some())
}

/// Fuel-bounded scan for `k` with `nu(k)` starting at `i`. Every entry's
/// selected pair keeps the first coordinate of its row, so such a `k` is
/// exactly an (eventual) table entry whose selected pair starts at `i`.
fn first_coordinate_witness<C: Coding + ?Sized>(c: &C, i: u64) -> Option<u64> {
    (1..=c.fuel()).find(|&k| c.nu().pair(k).first == i)
}

/// A fewest-steps walk joining `i` and `j` through table entries, as
/// signed entry indices (`n` forwards, `-n` backwards), or `None` when
/// they are not joined. Diagonal answers are prefix-relative like
/// [`in_f`]'s, and materialize the witnessing entry, which can cost far
/// more fuel than the yes/no answer.
pub fn minimal_walk<C: Coding + ?Sized>(
    c: &mut C,
    i: u64,
    j: u64,
) -> Result<Option<Walk>, CodingError> {
    if i == j {
        if let Some(n) = second_witness(c, i)? {
            let steps = vec![SignedEdge::backward(n), SignedEdge::forward(n)];
            return Ok(Walk::new(steps));
        }
        let Some(k) = first_coordinate_witness(c, i) else {
            return Ok(None);
        };
        c.ensure(k)?;
        let steps = vec![SignedEdge::forward(k), SignedEdge::backward(k)];
        return Ok(Walk::new(steps));
    }

    let index = ReachIndex::build(c, i.max(j))?;
    let (Some(&start), Some(&goal)) = (index.ids.get(&i), index.ids.get(&j)) else {
        return Ok(None);
    };
    let mut adjacency: Vec<Vec<(usize, SignedEdge)>> = vec![Vec::new(); index.ids.len()];
    for &(n, p) in &index.admitted {
        let (a, b) = (index.ids[&p.first], index.ids[&p.second]);
        adjacency[a].push((b, SignedEdge::forward(n)));
        adjacency[b].push((a, SignedEdge::backward(n)));
    }
    let mut parent: Vec<Option<(usize, SignedEdge)>> = vec![None; adjacency.len()];
    let mut seen = vec![false; adjacency.len()];
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    while let Some(node) = queue.pop_front() {
        if node == goal {
            let mut steps = Vec::new();
            let mut at = goal;
            while let Some((prev, edge)) = parent[at] {
                steps.push(edge);
                at = prev;
            }
            steps.reverse();
            return Ok(Walk::new(steps));
        }
        for &(next, edge) in &adjacency[node] {
            if !seen[next] {
                seen[next] = true;
                parent[next] = Some((node, edge));
                queue.push_back(next);
            }
        }
    }
    Ok(None)
}

/// The nodes a walk visits, starting node first.
pub fn walk_nodes<C: Coding + ?Sized>(c: &C, w: &Walk) -> Vec<u64> {
    let pair_of = |k| c.pi_at(k);
    let mut nodes = vec![crate::walks::tau_with(w.steps()[0], pair_of)];
    nodes.extend(w.steps().iter().map(|&s| crate::walks::eta_with(s, pair_of)));
    nodes
}

pub fn f_witness<C: Coding + ?Sized>(
    c: &mut C,
    i: u64,
    j: u64,
) -> Result<Option<Witness>, CodingError> {
    let Some(w) = minimal_walk(c, i, j)? else {
        return Ok(None);
    };
    let nodes = walk_nodes(c, &w);
    Ok(Some(Witness::ConnectingWalk { steps: w.signed(), nodes }))
}

/// `F` decided the definitional way: exhaustively scan every walk code up
/// to the bound `2^(1 + s(s + 2))`, `s = max(2, i + j)`, for one that
/// decodes to a walk from `i` to `j` through *filled* entries. Extend the
/// table first: codes mentioning entries past the filled prefix are
/// rejected, so the verdict is relative to that prefix. The bound grows so
/// fast that only `i + j <= 4` is accepted; everything else is
/// [`DecideError::ScaleExceeded`].
pub fn in_f_formula<C: Coding + ?Sized>(c: &C, i: u64, j: u64) -> Result<bool, DecideError> {
    let s = i.checked_add(j).filter(|&s| s <= FORMULA_SUM_LIMIT).ok_or(
        DecideError::ScaleExceeded { i, j, limit: FORMULA_SUM_LIMIT },
    )?;
    let s = s.max(2);
    let bound = 1u64 << (1 + s * (2 + s));
    let filled = c.filled();
    let pair_of = |k| c.pi_at(k);
    for z in 2..=bound {
        let Some(items) = decode_items_u64(z) else {
            continue;
        };
        if items.iter().any(|&x| x.unsigned_abs() > filled) {
            continue;
        }
        let Some(w) = Walk::from_signed(&items) else {
            continue;
        };
        if w.connects_with(i, j, pair_of) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// The relations a merged double coding derives: `H` over the first half,
/// the bridge `J` over the second, and their union `G`. `J` joins exactly
/// the nodes `H`'s field misses, routing them through the second half's
/// entries, so `G` relates every node to something.
impl MergedCoding {
    /// `H` read from the first half.
    pub fn in_h(&mut self, i: u64, j: u64) -> Result<bool, CodingError> {
        in_h(&mut self.xi_side(), i, j)
    }

    pub fn h_witness(&mut self, i: u64, j: u64) -> Result<Option<Witness>, CodingError> {
        h_witness(&mut self.xi_side(), i, j)
    }

    /// Whether `i` is in `H`'s field: some first-half entry selected a pair
    /// with second coordinate `i`. Exact.
    pub fn in_field_h(&mut self, i: u64) -> Result<bool, CodingError> {
        second_witness(&mut self.xi_side(), i).map(|w| w.is_some())
    }

    /// `J`: both nodes lie outside `H`'s field and the second half's `F`
    /// joins them. Diagonal answers inherit [`in_f`]'s prefix-relativity.
    pub fn in_j(&mut self, i: u64, j: u64) -> Result<bool, CodingError> {
        if self.in_field_h(i)? || self.in_field_h(j)? {
            return Ok(false);
        }
        in_f(&mut self.zeta_side(), i, j)
    }

    /// A connecting walk through second-half entries backing [`Self::in_j`].
    pub fn j_witness(&mut self, i: u64, j: u64) -> Result<Option<Witness>, CodingError> {
        if self.in_field_h(i)? || self.in_field_h(j)? {
            return Ok(None);
        }
        f_witness(&mut self.zeta_side(), i, j)
    }

    /// `G = H ∪ J`.
    pub fn in_g(&mut self, i: u64, j: u64) -> Result<bool, CodingError> {
        Ok(self.in_h(i, j)? || self.in_j(i, j)?)
    }

    pub fn g_witness(&mut self, i: u64, j: u64) -> Result<Option<Witness>, CodingError> {
        if let Some(w) = self.h_witness(i, j)? {
            return Ok(Some(w));
        }
        self.j_witness(i, j)
    }
}
