//! Knowledge-graph data model: vocabulary, triple store, entity typing,
//! relation semantics, dataset splitting and constraint-respecting sampling.

mod sampling;
mod semantics;
mod split;
mod store;
mod vocab;

pub use sampling::{
    corrupt_for_training, sample_negatives, Corruption, CorruptionBatch, CorruptionMode,
    NegativeSample, Side,
};
pub use semantics::{
    derive_lcwa, lcwa_semantics, resolve_schema_constraints, ConstraintDeclaration,
    LcwaConstraint, Provenance, RelationConstraint, RelationSemantics, TypeAssignment,
};
pub use split::{partition, split_dataset, Partition, SplitBundle, NEGATIVES_PER_POSITIVE};
pub use store::{load_graph, LoadedGraph, Triple, TripleStore};
pub use vocab::Vocabulary;
