use std::collections::HashMap;

use crate::{Error, Result};

/// Bijection between surface labels and dense integer ids.
///
/// Ids are assigned in first-appearance order, so identical input order
/// yields identical ids.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Vocabulary {
    entities: Vec<String>,
    relations: Vec<String>,
    entity_ids: HashMap<String, usize>,
    relation_ids: HashMap<String, usize>,
}

impl Vocabulary {
    pub fn new() -> Self {
        Self::default()
    }

    /// Rebuilds a vocabulary from persisted label lists.
    pub fn from_labels(entities: Vec<String>, relations: Vec<String>) -> Result<Self> {
        let mut vocab = Self::new();
        for label in entities {
            if vocab.entity_ids.contains_key(&label) {
                return Err(Error::Input(format!("duplicate entity label {label:?}")));
            }
            vocab.intern_entity(&label);
        }
        for label in relations {
            if vocab.relation_ids.contains_key(&label) {
                return Err(Error::Input(format!("duplicate relation label {label:?}")));
            }
            vocab.intern_relation(&label);
        }
        Ok(vocab)
    }

    pub fn intern_entity(&mut self, label: &str) -> usize {
        intern(&mut self.entities, &mut self.entity_ids, label)
    }

    pub fn intern_relation(&mut self, label: &str) -> usize {
        intern(&mut self.relations, &mut self.relation_ids, label)
    }

    pub fn entity_id(&self, label: &str) -> Option<usize> {
        self.entity_ids.get(label).copied()
    }

    pub fn relation_id(&self, label: &str) -> Option<usize> {
        self.relation_ids.get(label).copied()
    }

    pub fn entity_label(&self, id: usize) -> &str {
        &self.entities[id]
    }

    pub fn relation_label(&self, id: usize) -> &str {
        &self.relations[id]
    }

    pub fn entity_labels(&self) -> &[String] {
        &self.entities
    }

    pub fn relation_labels(&self) -> &[String] {
        &self.relations
    }

    pub fn num_entities(&self) -> usize {
        self.entities.len()
    }

    pub fn num_relations(&self) -> usize {
        self.relations.len()
    }
}

fn intern(labels: &mut Vec<String>, ids: &mut HashMap<String, usize>, label: &str) -> usize {
    if let Some(&id) = ids.get(label) {
        return id;
    }
    let id = labels.len();
    labels.push(label.to_owned());
    ids.insert(label.to_owned(), id);
    id
}
