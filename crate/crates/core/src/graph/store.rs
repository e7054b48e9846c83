use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::Vocabulary;
use crate::{Error, Result};

/// A (subject, predicate, object) fact over integer-coded ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Triple {
    pub s: usize,
    pub p: usize,
    pub o: usize,
}

impl Triple {
    pub const fn new(s: usize, p: usize, o: usize) -> Self {
        Self { s, p, o }
    }
}

/// Deduplicated set of triples with per-relation and per-entity indexes.
///
/// Triples keep their first-insertion order; the per-relation subject and
/// object lists are sorted ascending.
#[derive(Debug, Clone)]
pub struct TripleStore {
    num_entities: usize,
    num_relations: usize,
    triples: Vec<Triple>,
    members: HashSet<Triple>,
    by_relation: Vec<Vec<Triple>>,
    subjects: Vec<Vec<usize>>,
    objects: Vec<Vec<usize>>,
    incidence: Vec<usize>,
}

impl TripleStore {
    /// Builds a store, dropping duplicates. Returns the store and the number
    /// of duplicates dropped.
    pub fn new(
        num_entities: usize,
        num_relations: usize,
        triples: impl IntoIterator<Item = Triple>,
    ) -> Result<(Self, usize)> {
        let mut store = Self {
            num_entities,
            num_relations,
            triples: Vec::new(),
            members: HashSet::new(),
            by_relation: vec![Vec::new(); num_relations],
            subjects: vec![Vec::new(); num_relations],
            objects: vec![Vec::new(); num_relations],
            incidence: vec![0; num_entities],
        };
        let mut duplicates = 0;
        for t in triples {
            if t.s >= num_entities || t.o >= num_entities || t.p >= num_relations {
                return Err(Error::Input(format!(
                    "triple {t:?} out of range for {num_entities} entities and {num_relations} relations"
                )));
            }
            if !store.members.insert(t) {
                duplicates += 1;
                continue;
            }
            store.triples.push(t);
            store.by_relation[t.p].push(t);
            store.subjects[t.p].push(t.s);
            store.objects[t.p].push(t.o);
            store.incidence[t.s] += 1;
            if t.o != t.s {
                store.incidence[t.o] += 1;
            }
        }
        for list in store.subjects.iter_mut().chain(store.objects.iter_mut()) {
            list.sort_unstable();
            list.dedup();
        }
        Ok((store, duplicates))
    }

    /// A store over the same id space holding only `triples`.
    pub fn with_triples(&self, triples: impl IntoIterator<Item = Triple>) -> Self {
        Self::new(self.num_entities, self.num_relations, triples)
            .expect("ids already validated")
            .0
    }

    pub fn num_entities(&self) -> usize {
        self.num_entities
    }

    pub fn num_relations(&self) -> usize {
        self.num_relations
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }

    pub fn contains(&self, t: &Triple) -> bool {
        self.members.contains(t)
    }

    pub fn members(&self) -> &HashSet<Triple> {
        &self.members
    }

    pub fn relation_triples(&self, p: usize) -> &[Triple] {
        &self.by_relation[p]
    }

    /// Entities observed as subject of `p`, ascending.
    pub fn subjects_of(&self, p: usize) -> &[usize] {
        &self.subjects[p]
    }

    /// Entities observed as object of `p`, ascending.
    pub fn objects_of(&self, p: usize) -> &[usize] {
        &self.objects[p]
    }

    /// Number of triples the entity takes part in.
    pub fn incidence(&self, entity: usize) -> usize {
        self.incidence[entity]
    }
}

/// Result of [`load_graph`].
#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub vocab: Vocabulary,
    pub store: TripleStore,
    pub duplicates: usize,
}

/// Interns labels in first-appearance order and builds a deduplicated store.
pub fn load_graph<I, S>(records: I) -> Result<LoadedGraph>
where
    I: IntoIterator<Item = [S; 3]>,
    S: AsRef<str>,
{
    let mut vocab = Vocabulary::new();
    let mut triples = Vec::new();
    for (idx, record) in records.into_iter().enumerate() {
        let [s, p, o] = record.each_ref().map(|x| x.as_ref());
        if s.is_empty() || p.is_empty() || o.is_empty() {
            return Err(Error::Input(format!("record {} has an empty label", idx + 1)));
        }
        let s = vocab.intern_entity(s);
        let p = vocab.intern_relation(p);
        let o = vocab.intern_entity(o);
        triples.push(Triple { s, p, o });
    }
    if triples.is_empty() {
        return Err(Error::Input("no triples supplied".into()));
    }
    let (store, duplicates) =
        TripleStore::new(vocab.num_entities(), vocab.num_relations(), triples)?;
    if duplicates > 0 {
        log::info!("dropped {duplicates} duplicate triples");
    }
    Ok(LoadedGraph {
        vocab,
        store,
        duplicates,
    })
}
