use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{Triple, TripleStore};

/// Classes assigned to each entity. Untyped entities have an empty set.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeAssignment {
    classes: Vec<BTreeSet<String>>,
}

impl TypeAssignment {
    pub fn new(num_entities: usize) -> Self {
        Self {
            classes: vec![BTreeSet::new(); num_entities],
        }
    }

    pub fn assign(&mut self, entity: usize, class: impl Into<String>) {
        self.classes[entity].insert(class.into());
    }

    pub fn classes(&self, entity: usize) -> &BTreeSet<String> {
        &self.classes[entity]
    }

    pub fn num_entities(&self) -> usize {
        self.classes.len()
    }

    fn has_any(&self, entity: usize, wanted: &[String]) -> bool {
        wanted.iter().any(|c| self.classes[entity].contains(c))
    }
}

/// Where a relation's domain and range came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Schema,
    Lcwa,
    Unconstrained,
}

/// Admissible subjects and objects of one relation, ascending by id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationConstraint {
    pub domain: Vec<usize>,
    pub range: Vec<usize>,
    pub provenance: Provenance,
}

impl RelationConstraint {
    pub fn admits_subject(&self, e: usize) -> bool {
        self.domain.binary_search(&e).is_ok()
    }

    pub fn admits_object(&self, e: usize) -> bool {
        self.range.binary_search(&e).is_ok()
    }
}

/// Per-relation domain and range sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationSemantics {
    num_entities: usize,
    relations: Vec<RelationConstraint>,
}

impl RelationSemantics {
    /// Every relation admits every entity on both sides.
    pub fn unconstrained(num_entities: usize, num_relations: usize) -> Self {
        let all: Vec<usize> = (0..num_entities).collect();
        Self {
            num_entities,
            relations: (0..num_relations)
                .map(|_| RelationConstraint {
                    domain: all.clone(),
                    range: all.clone(),
                    provenance: Provenance::Unconstrained,
                })
                .collect(),
        }
    }

    /// Builds semantics from explicit constraints, sorting and deduplicating
    /// each set. Panics if an id is out of range.
    pub fn from_constraints(num_entities: usize, mut relations: Vec<RelationConstraint>) -> Self {
        for rc in &mut relations {
            for set in [&mut rc.domain, &mut rc.range] {
                set.sort_unstable();
                set.dedup();
                assert!(set.last().is_none_or(|&e| e < num_entities), "entity id out of range");
            }
        }
        Self {
            num_entities,
            relations,
        }
    }

    pub fn num_entities(&self) -> usize {
        self.num_entities
    }

    pub fn num_relations(&self) -> usize {
        self.relations.len()
    }

    pub fn relation(&self, p: usize) -> &RelationConstraint {
        &self.relations[p]
    }

    pub fn relations(&self) -> &[RelationConstraint] {
        &self.relations
    }

    pub fn domain(&self, p: usize) -> &[usize] {
        &self.relations[p].domain
    }

    pub fn range(&self, p: usize) -> &[usize] {
        &self.relations[p].range
    }

    pub fn provenance(&self, p: usize) -> Provenance {
        self.relations[p].provenance
    }

    /// True when `t.s` is in the domain and `t.o` in the range of `t.p`.
    pub fn admits(&self, t: &Triple) -> bool {
        let rc = &self.relations[t.p];
        rc.admits_subject(t.s) && rc.admits_object(t.o)
    }

    /// True when every relation admits every entity.
    pub fn is_unconstrained(&self) -> bool {
        self.relations
            .iter()
            .all(|rc| rc.domain.len() == self.num_entities && rc.range.len() == self.num_entities)
    }
}

/// Declared domain and range classes for one relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintDeclaration {
    pub relation: usize,
    pub domain_classes: Vec<String>,
    pub range_classes: Vec<String>,
}

/// Resolves class-level declarations to entity sets.
///
/// `domain_k` holds every entity carrying at least one declared domain class
/// of `k`, plus every entity observed as a subject of `k` in `store` (the
/// observed triple is taken as evidence of missing typing). Ranges are
/// resolved the same way. Relations without a declaration stay
/// unconstrained.
pub fn resolve_schema_constraints(
    store: &TripleStore,
    types: &TypeAssignment,
    declarations: &[ConstraintDeclaration],
) -> RelationSemantics {
    let n = store.num_entities();
    let mut semantics = RelationSemantics::unconstrained(n, store.num_relations());
    for decl in declarations {
        let p = decl.relation;
        let mut domain: BTreeSet<usize> = (0..n)
            .filter(|&e| e < types.num_entities() && types.has_any(e, &decl.domain_classes))
            .collect();
        let mut range: BTreeSet<usize> = (0..n)
            .filter(|&e| e < types.num_entities() && types.has_any(e, &decl.range_classes))
            .collect();
        let mut repaired = 0usize;
        for t in store.relation_triples(p) {
            let fresh_s = domain.insert(t.s);
            let fresh_o = range.insert(t.o);
            repaired += usize::from(fresh_s) + usize::from(fresh_o);
        }
        if repaired > 0 {
            log::debug!("relation {p}: {repaired} entities added to domain/range from observed triples");
        }
        semantics.relations[p] = RelationConstraint {
            domain: domain.into_iter().collect(),
            range: range.into_iter().collect(),
            provenance: Provenance::Schema,
        };
    }
    semantics
}

/// Domain and range of one relation under the local closed-world assumption.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LcwaConstraint {
    pub domain: Vec<usize>,
    pub range: Vec<usize>,
    /// The relation has no triples in the supplied store.
    pub empty: bool,
}

/// Entities observed as subject (domain) and object (range) of `relation`.
///
/// Callers must pass the training triples only.
pub fn derive_lcwa(store: &TripleStore, relation: usize) -> LcwaConstraint {
    let domain = store.subjects_of(relation).to_vec();
    let range = store.objects_of(relation).to_vec();
    let empty = domain.is_empty();
    LcwaConstraint {
        domain,
        range,
        empty,
    }
}

/// [`derive_lcwa`] for every relation.
pub fn lcwa_semantics(train: &TripleStore) -> RelationSemantics {
    let relations = (0..train.num_relations())
        .map(|p| {
            let c = derive_lcwa(train, p);
            if c.empty {
                log::warn!("relation {p} has no training triples; its LCWA domain and range are empty");
            }
            RelationConstraint {
                domain: c.domain,
                range: c.range,
                provenance: Provenance::Lcwa,
            }
        })
        .collect();
    RelationSemantics {
        num_entities: train.num_entities(),
        relations,
    }
}
