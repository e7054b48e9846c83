use std::collections::HashSet;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{sample_negatives, RelationSemantics, Triple, TripleStore};
use crate::{rng, Error, Result};

/// Evaluation negatives drawn per positive.
pub const NEGATIVES_PER_POSITIVE: usize = 10;

/// Positive triples partitioned 70/10/20.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub train: Vec<Triple>,
    pub validation: Vec<Triple>,
    pub holdout: Vec<Triple>,
}

/// Uniformly shuffles the store and cuts it into train, validation and
/// holdout. Holdout takes `floor(0.2 N)` triples, validation
/// `floor(0.1 N)`, train the rest.
pub fn partition(store: &TripleStore, seed: u64) -> Partition {
    let mut triples = store.triples().to_vec();
    triples.shuffle(&mut rng::stream(seed, "partition"));
    let n = triples.len();
    let n_holdout = n / 5;
    let n_validation = n / 10;
    let train = triples.split_off(n_holdout + n_validation);
    let validation = triples.split_off(n_holdout);
    Partition {
        train,
        validation,
        holdout: triples,
    }
}

/// Train/validation/holdout positives plus disjoint evaluation negatives.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitBundle {
    pub train: Vec<Triple>,
    pub validation: Vec<Triple>,
    pub holdout: Vec<Triple>,
    pub validation_negatives: Vec<Triple>,
    pub holdout_negatives: Vec<Triple>,
    /// Early-stopping subsample of `train`.
    pub early_stop_probe: Vec<Triple>,
    pub probe_negatives: Vec<Triple>,
    pub split_seed: u64,
    /// Relations with no triple in `train`.
    pub relations_without_training: Vec<usize>,
    /// Negatives requested but not drawable, over all pools.
    pub negative_shortfall: usize,
}

impl SplitBundle {
    pub fn train_store(&self, like: &TripleStore) -> TripleStore {
        like.with_triples(self.train.iter().copied())
    }
}

/// Splits `store` (see [`partition`]), draws the early-stopping probe
/// (`ceil(0.05 |train|)` training triples) and samples ten negatives per
/// positive for holdout, validation and probe.
///
/// Negatives respect `semantics`, never coincide with an observed triple,
/// and are pairwise disjoint across the three pools.
pub fn split_dataset(
    store: &TripleStore,
    semantics: &RelationSemantics,
    seed: u64,
) -> Result<SplitBundle> {
    if store.is_empty() {
        return Err(Error::Input("cannot split an empty triple store".into()));
    }
    if semantics.num_relations() != store.num_relations()
        || semantics.num_entities() != store.num_entities()
    {
        return Err(Error::Config("semantics do not match the triple store".into()));
    }
    let Partition {
        train,
        validation,
        holdout,
    } = partition(store, seed);

    let n_probe = train.len().div_ceil(20);
    let mut probe = train.clone();
    probe.shuffle(&mut rng::stream(seed, "probe"));
    probe.truncate(n_probe);

    let mut covered = vec![false; store.num_relations()];
    for t in &train {
        covered[t.p] = true;
    }
    let relations_without_training: Vec<usize> =
        (0..covered.len()).filter(|&p| !covered[p]).collect();
    for p in &relations_without_training {
        log::warn!("relation {p} has no triple in the training split");
    }

    let mut forbidden: HashSet<Triple> = store.members().clone();
    let mut shortfall = 0;
    let mut draw = |positives: &[Triple], tag: &str| -> Result<Vec<Triple>> {
        let sample = sample_negatives(
            positives,
            semantics,
            NEGATIVES_PER_POSITIVE,
            &forbidden,
            rng::derive_seed(seed, tag),
        )?;
        shortfall += sample.shortfall;
        forbidden.extend(sample.triples.iter().copied());
        Ok(sample.triples)
    };
    let holdout_negatives = draw(&holdout, "holdout-negatives")?;
    let validation_negatives = draw(&validation, "validation-negatives")?;
    let probe_negatives = draw(&probe, "probe-negatives")?;

    Ok(SplitBundle {
        train,
        validation,
        holdout,
        validation_negatives,
        holdout_negatives,
        early_stop_probe: probe,
        probe_negatives,
        split_seed: seed,
        relations_without_training,
        negative_shortfall: shortfall,
    })
}
