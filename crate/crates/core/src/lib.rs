//! Latent-variable link prediction for knowledge graphs.
//!
//! Three models are provided (RESCAL trained by alternating least squares,
//! TransE and a multiway neural network trained by mini-batch SGD), each of
//! which can be trained under three relation semantics: unconstrained,
//! schema type-constraints (`rdfs:domain` / `rdfs:range`), or a local
//! closed-world assumption derived from the training triples.

pub mod clock;
pub mod error;
pub mod eval;
pub mod graph;
pub mod io;
pub mod linalg;
pub mod models;
pub mod pipeline;
pub mod rng;
pub mod synth;
pub mod train;

pub use error::{Error, Result};
pub use graph::{
    RelationSemantics, Provenance, SplitBundle, Triple, TripleStore, TypeAssignment, Vocabulary,
};
pub use models::{Hyperparams, ModelKind, ModelParams};
