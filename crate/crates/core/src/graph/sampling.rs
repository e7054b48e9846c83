use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{RelationSemantics, Triple};
use crate::{rng, Error, Result};

/// Negatives drawn for evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NegativeSample {
    pub triples: Vec<Triple>,
    /// Requested negatives that could not be drawn because the admissible
    /// pool was exhausted.
    pub shortfall: usize,
}

/// Above this many admissible pairs rejection sampling is always used.
const ENUMERATION_LIMIT: usize = 1 << 22;

/// Draws up to `count_per_positive` negatives per positive.
///
/// A negative keeps the positive's predicate and takes a subject from
/// `domain_p` and an object from `range_p`. Triples in `forbidden` and
/// negatives already emitted by this call are never returned. When the
/// admissible pool runs dry the remaining slots are counted as shortfall.
pub fn sample_negatives(
    positives: &[Triple],
    semantics: &RelationSemantics,
    count_per_positive: usize,
    forbidden: &HashSet<Triple>,
    seed: u64,
) -> Result<NegativeSample> {
    if count_per_positive == 0 {
        return Err(Error::Config("count_per_positive must be at least 1".into()));
    }
    let mut rng = rng::seeded(seed);
    let mut emitted: HashSet<Triple> = HashSet::new();
    let mut triples = Vec::with_capacity(positives.len() * count_per_positive);
    let mut shortfall = 0;
    let taken = |t: &Triple, emitted: &HashSet<Triple>| forbidden.contains(t) || emitted.contains(t);

    for pos in positives {
        let domain = semantics.domain(pos.p);
        let range = semantics.range(pos.p);
        let pool = domain.len() * range.len();
        let mut need = count_per_positive;
        let mut attempts = 0;
        let max_attempts = 20 * count_per_positive + 20;
        while need > 0 && pool > 0 && attempts < max_attempts {
            attempts += 1;
            let cand = Triple::new(
                domain[rng.random_range(0..domain.len())],
                pos.p,
                range[rng.random_range(0..range.len())],
            );
            if !taken(&cand, &emitted) {
                emitted.insert(cand);
                triples.push(cand);
                need -= 1;
            }
        }
        if need > 0 && pool > 0 && pool <= ENUMERATION_LIMIT {
            // dense pool: enumerate what is left and draw without replacement
            let mut rest: Vec<Triple> = domain
                .iter()
                .flat_map(|&s| range.iter().map(move |&o| Triple::new(s, pos.p, o)))
                .filter(|t| !taken(t, &emitted))
                .collect();
            rest.shuffle(&mut rng);
            for cand in rest.into_iter().take(need) {
                emitted.insert(cand);
                triples.push(cand);
                need -= 1;
            }
        }
        shortfall += need;
    }
    if shortfall > 0 {
        log::warn!("negative sampling fell {shortfall} short of the requested count");
    }
    Ok(NegativeSample { triples, shortfall })
}

/// Which side of a triple a training corruption replaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Subject,
    Object,
}

/// How training corruptions are generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorruptionMode {
    /// `count` subject corruptions and `count` object corruptions per positive.
    SubjectAndObject,
    /// `count` object corruptions per positive.
    ObjectOnly,
}

/// One corrupted copy of `batch[positive]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Corruption {
    pub positive: usize,
    pub triple: Triple,
    pub side: Side,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CorruptionBatch {
    pub corruptions: Vec<Corruption>,
    /// Slots left empty because the admissible pool was empty.
    pub skipped: usize,
}

/// Corrupts training triples by drawing replacement subjects uniformly from
/// `domain_p` and replacement objects uniformly from `range_p`.
///
/// Observed triples are not filtered out, so a draw may reproduce the
/// positive itself or another known fact.
pub fn corrupt_for_training<R: Rng + ?Sized>(
    batch: &[Triple],
    semantics: &RelationSemantics,
    mode: CorruptionMode,
    count: usize,
    rng: &mut R,
) -> CorruptionBatch {
    let mut out = CorruptionBatch::default();
    for (i, pos) in batch.iter().enumerate() {
        if mode == CorruptionMode::SubjectAndObject {
            let domain = semantics.domain(pos.p);
            for _ in 0..count {
                if domain.is_empty() {
                    out.skipped += 1;
                    continue;
                }
                let s = domain[rng.random_range(0..domain.len())];
                out.corruptions.push(Corruption {
                    positive: i,
                    triple: Triple::new(s, pos.p, pos.o),
                    side: Side::Subject,
                });
            }
        }
        let range = semantics.range(pos.p);
        for _ in 0..count {
            if range.is_empty() {
                out.skipped += 1;
                continue;
            }
            let o = range[rng.random_range(0..range.len())];
            out.corruptions.push(Corruption {
                positive: i,
                triple: Triple::new(pos.s, pos.p, o),
                side: Side::Object,
            });
        }
    }
    if out.skipped > 0 {
        log::debug!("{} corruption slots skipped: empty admissible pool", out.skipped);
    }
    out
}
