//! Synthetic typed knowledge graphs with planted relation signatures.

use std::collections::HashSet;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

use crate::io::{write_constraints, write_triples, write_types, ConstraintRecord};
use crate::{rng, Error, Result};

/// Generator parameters.
///
/// Entities are split evenly into `classes`; each class is further split
/// into `communities`. Relation `k` has the planted signature
/// `signatures[k] = (domain class, range class)`, and every domain
/// community is linked to `links` communities of the range class, each
/// range community receiving exactly `links` incoming links. A true
/// triple picks a subject from the domain class and an object from one of
/// the subject community's linked communities. A `noise` fraction of each
/// relation's triples is drawn uniformly over all entities instead.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    pub classes: usize,
    pub entities_per_class: usize,
    pub signatures: Vec<(usize, usize)>,
    pub triples_per_relation: usize,
    pub noise: f64,
    pub communities: usize,
    pub links: usize,
    pub seed: u64,
}

impl SyntheticSpec {
    /// Spec with `relations` signatures assigned cyclically, so that every
    /// class appears as domain and as range. Uses up to ten communities
    /// per class with two links each, fewer when a relation would not have
    /// room for its planted triples.
    pub fn new(
        classes: usize,
        entities_per_class: usize,
        relations: usize,
        triples_per_relation: usize,
        noise: f64,
        seed: u64,
    ) -> Self {
        let mut spec = Self {
            classes,
            entities_per_class,
            signatures: cyclic_signatures(classes, relations),
            triples_per_relation,
            noise,
            communities: 10.min(entities_per_class.max(1)),
            links: 2.min(entities_per_class.max(1)),
            seed,
        };
        while spec.communities > spec.links && spec.true_count() > spec.true_capacity() {
            spec.communities -= 1;
        }
        spec
    }

    pub fn num_entities(&self) -> usize {
        self.classes * self.entities_per_class
    }

    pub fn num_relations(&self) -> usize {
        self.signatures.len()
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Config(m));
        if self.classes == 0 || self.entities_per_class == 0 {
            return fail("need at least one class with one entity".into());
        }
        if !(0.0..1.0).contains(&self.noise) {
            return fail(format!("noise rate {} outside [0, 1)", self.noise));
        }
        if self.communities == 0 || self.communities > self.entities_per_class {
            return fail("communities must lie in [1, entities_per_class]".into());
        }
        if self.links == 0 || self.links > self.communities {
            return fail("links must lie in [1, communities]".into());
        }
        for (k, &(d, r)) in self.signatures.iter().enumerate() {
            if d >= self.classes || r >= self.classes {
                return fail(format!("relation {k} refers to a class that does not exist"));
            }
        }
        let capacity = self.true_capacity();
        if self.true_count() > capacity {
            return fail(format!(
                "{} planted triples per relation requested but only {capacity} exist",
                self.true_count()
            ));
        }
        Ok(())
    }

    fn noise_count(&self) -> usize {
        (self.noise * self.triples_per_relation as f64).round() as usize
    }

    fn true_count(&self) -> usize {
        self.triples_per_relation - self.noise_count()
    }

    /// Distinct planted triples available to one relation (lower bound when
    /// community sizes are uneven).
    fn true_capacity(&self) -> usize {
        let smallest = self.entities_per_class / self.communities;
        self.entities_per_class * self.links * smallest
    }

    pub fn entity_label(&self, class: usize, index: usize) -> String {
        format!("c{class}_e{index}")
    }

    pub fn class_label(class: usize) -> String {
        format!("C{class}")
    }

    pub fn relation_label(k: usize) -> String {
        format!("r{k}")
    }
}

fn cyclic_signatures(classes: usize, relations: usize) -> Vec<(usize, usize)> {
    (0..relations)
        .map(|k| {
            if classes <= 1 {
                return (0, 0);
            }
            let d = k % classes;
            let shift = 1 + (k / classes) % (classes - 1);
            (d, (d + shift) % classes)
        })
        .collect()
}

/// Generated files in memory.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticCorpus {
    pub triples: Vec<[String; 3]>,
    pub types: Vec<(String, Vec<String>)>,
    pub constraints: Vec<ConstraintRecord>,
}

/// Paths written by [`SyntheticCorpus::write_to`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusFiles {
    pub triples: PathBuf,
    pub types: PathBuf,
    pub constraints: PathBuf,
}

impl SyntheticCorpus {
    pub fn write_to(&self, dir: &Path) -> Result<CorpusFiles> {
        fs::create_dir_all(dir).map_err(|source| Error::File {
            path: dir.to_owned(),
            source,
        })?;
        let files = CorpusFiles {
            triples: dir.join("triples.tsv"),
            types: dir.join("types.tsv"),
            constraints: dir.join("constraints.tsv"),
        };
        let create = |p: &Path| {
            File::create(p).map(BufWriter::new).map_err(|source| Error::File {
                path: p.to_owned(),
                source,
            })
        };
        write_triples(create(&files.triples)?, &self.triples)?;
        write_types(create(&files.types)?, &self.types)?;
        write_constraints(create(&files.constraints)?, &self.constraints)?;
        Ok(files)
    }
}

/// Draws a corpus with exactly `triples_per_relation` distinct triples per
/// relation. Deterministic in `spec.seed`.
pub fn generate(spec: &SyntheticSpec) -> Result<SyntheticCorpus> {
    spec.validate()?;
    let mut rng = rng::stream(spec.seed, "synth");
    let per_class = spec.entities_per_class;
    let n = spec.num_entities();
    let label = |e: usize| spec.entity_label(e / per_class, e % per_class);
    // Community c of a class holds local indices i with i % communities == c.
    let community_members = |class: usize, c: usize| -> Vec<usize> {
        (c..per_class)
            .step_by(spec.communities)
            .map(|i| class * per_class + i)
            .collect()
    };

    let mut triples = Vec::with_capacity(spec.num_relations() * spec.triples_per_relation);
    for (k, &(dom, ran)) in spec.signatures.iter().enumerate() {
        // Balanced links: domain community c reaches range communities
        // perm[c], perm[c+1], ..., so every range community is reachable.
        let mut perm: Vec<usize> = (0..spec.communities).collect();
        perm.shuffle(&mut rng);
        let linked: Vec<Vec<usize>> = (0..spec.communities)
            .map(|c| (0..spec.links).map(|j| perm[(c + j) % spec.communities]).collect())
            .collect();
        let range_groups: Vec<Vec<usize>> = (0..spec.communities).map(|c| community_members(ran, c)).collect();

        let mut seen: HashSet<(usize, usize)> = HashSet::new();
        let mut emit = |s: usize, o: usize, triples: &mut Vec<[String; 3]>| {
            if seen.insert((s, o)) {
                triples.push([label(s), SyntheticSpec::relation_label(k), label(o)]);
                true
            } else {
                false
            }
        };

        let mut planted = 0;
        while planted < spec.true_count() {
            let local = rng.random_range(0..per_class);
            let s = dom * per_class + local;
            let community = *linked[local % spec.communities].choose(&mut rng).expect("links >= 1");
            let o = *range_groups[community].choose(&mut rng).expect("non-empty community");
            planted += usize::from(emit(s, o, &mut triples));
        }

        if spec.true_count() + spec.noise_count() > n * n {
            return Err(Error::Config(format!("relation {k}: not enough entity pairs for the noise triples")));
        }
        let mut noisy = 0;
        while noisy < spec.noise_count() {
            let s = rng.random_range(0..n);
            let o = rng.random_range(0..n);
            noisy += usize::from(emit(s, o, &mut triples));
        }
    }

    let types = (0..n)
        .map(|e| (label(e), vec![SyntheticSpec::class_label(e / per_class)]))
        .collect();
    let constraints = spec
        .signatures
        .iter()
        .enumerate()
        .map(|(k, &(d, r))| ConstraintRecord {
            relation: SyntheticSpec::relation_label(k),
            domain_classes: vec![SyntheticSpec::class_label(d)],
            range_classes: vec![SyntheticSpec::class_label(r)],
        })
        .collect();
    Ok(SyntheticCorpus {
        triples,
        types,
        constraints,
    })
}
