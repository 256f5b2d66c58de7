//! A workbench for semi-decidable equivalence relations presented by
//! enumerations of generating pairs.
//!
//! The crate revolves around one construction: given an enumeration of node
//! pairs (the "edges" of an equivalence relation), select a sparse, fast
//! growing subsequence of it — a *coding table* — whose combinatorics make
//! several derived relations decidable, and recover the original relation
//! from those decidable pieces by composition and transitive closure. A
//! verification harness replays the constructions on concrete relations and
//! checks every claimed identity on finite windows.
//!
//! Start with the `examples/` directory; each example is a small guided tour
//! of one capability:
//!
//! - `relation_algebra` — finite relations, composition, closures, classes.
//! - `walks_and_edges` — signed edge indices and walks over an enumeration.
//! - `sequence_codec` — packing integer sequences into single naturals.
//! - `build_a_coding` — selecting a coding table and checking its laws.
//! - `merged_coding` — interleaving two codings fairly into one.
//! - `derived_deciders` — the decidable relations induced by a coding.
//! - `finite_class_relations` — small-class constructions and reductions.
//! - `verify_all` — the whole verification harness on several relations.
//!
//! A thin `ceer` binary exposes the same machinery for scripting; see the
//! README for the command surface.

pub mod builtins;
pub mod cli;
pub mod coding;
pub mod derived;
pub mod harness;
pub mod merged;
pub mod relation;
pub mod seq_codec;
pub mod walks;

pub use builtins::{
    adjacent_pairs_relation, diagonal_index, diagonal_pair, enumerator_from_decider,
    full_enumerator, full_relation, mod_relation, partition_relation, sweep_enumerator,
    triple_join_parts, triple_join_relation, ClassKind, GroundTruth, RelationSpec, SpecError,
};
pub use coding::{
    check_coding_conditions, fair_enumeration, fuel_from_env, pair_index, proj_exp, proj_odd,
    Coding, CodingError, CodingReport, CodingTable, ConditionCheck, DEFAULT_FUEL,
};
pub use harness::{
    run_all, verify_adjacent_pairs, verify_composition, verify_finite_classes,
    verify_join_decomposition, verify_small_class_closures, verify_spec, verify_triple_join,
    verify_walk_shapes, CheckResult, CheckStatus, RunManifest, VerificationReport, WindowConfig,
    DEFAULT_SEED,
};
pub use derived::{
    f_witness, h_witness, in_f, in_f_formula, in_h, in_r, in_s, in_t, minimal_walk, r_witness,
    s_witness, second_witness, t_witness, walk_nodes, DecideError, ReachIndex, Witness,
    FORMULA_SUM_LIMIT,
};
pub use merged::{cmp_packed, MergedCoding, XiSide, ZetaSide};
pub use relation::{FiniteRelation, NodePair, Partition, RelationError, UnionFind};
pub use seq_codec::{beta, decode_items, decode_seq, encode_seq, is_valid_code, CodecError, SeqCode};
pub use walks::{eta, eta_with, is_walk, tau, tau_with, Enumerator, SignedEdge, Walk};
