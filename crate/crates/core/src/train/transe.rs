use std::collections::BTreeMap;

use rand::Rng;

use crate::graph::{corrupt_for_training, CorruptionMode, RelationSemantics};
use crate::linalg;
use crate::models::{Distance, Hyperparams, TransEParams};
use crate::Triple;

/// Sparse gradient of the TransE margin loss, keyed by row id.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TransEGradient {
    pub entities: BTreeMap<usize, Vec<f64>>,
    pub relations: BTreeMap<usize, Vec<f64>>,
}

impl TransEGradient {
    fn add(map: &mut BTreeMap<usize, Vec<f64>>, row: usize, dim: usize, v: &[f64], sign: f64) {
        let acc = map.entry(row).or_insert_with(|| vec![0.0; dim]);
        for (a, x) in acc.iter_mut().zip(v) {
            *a += sign * x;
        }
    }

    /// Adds `sign · ∂δ(s,p,o)`.
    fn add_distance(&mut self, t: &Triple, dir: &[f64], sign: f64) {
        let d = dir.len();
        Self::add(&mut self.entities, t.s, d, dir, sign);
        Self::add(&mut self.relations, t.p, d, dir, sign);
        Self::add(&mut self.entities, t.o, d, dir, -sign);
    }
}

/// `∂δ/∂v` at the residual `v`; zero at kinks.
fn distance_direction(kind: Distance, v: &[f64]) -> Vec<f64> {
    match kind {
        Distance::L1 => v
            .iter()
            .map(|&x| if x > 0.0 { 1.0 } else if x < 0.0 { -1.0 } else { 0.0 })
            .collect(),
        Distance::L2 => {
            let norm = linalg::norm2(v);
            if norm == 0.0 {
                vec![0.0; v.len()]
            } else {
                v.iter().map(|x| x / norm).collect()
            }
        }
    }
}

/// Margin loss `Σ [γ + θ(corrupted) − θ(positive)]₊` over `(positive,
/// corrupted)` pairs and its (sub)gradient. Inactive hinges contribute
/// nothing.
pub fn transe_loss_and_gradient(
    params: &TransEParams,
    pairs: &[(Triple, Triple)],
    gamma: f64,
) -> (f64, TransEGradient) {
    let mut loss = 0.0;
    let mut grad = TransEGradient::default();
    for (pos, neg) in pairs {
        let v_pos = params.residual(pos.s, pos.p, pos.o);
        let v_neg = params.residual(neg.s, neg.p, neg.o);
        let d_pos = crate::models::transe::distance(params.distance, &v_pos);
        let d_neg = crate::models::transe::distance(params.distance, &v_neg);
        // θ = −δ, so the hinge is γ + δ(pos) − δ(neg)
        let margin = gamma + d_pos - d_neg;
        if margin > 0.0 {
            loss += margin;
            grad.add_distance(pos, &distance_direction(params.distance, &v_pos), 1.0);
            grad.add_distance(neg, &distance_direction(params.distance, &v_neg), -1.0);
        }
    }
    (loss, grad)
}

/// Outcome of one mini-batch update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOutcome {
    /// Batch loss before the update.
    pub loss: f64,
    pub skipped_corruptions: usize,
}

/// One SGD step on a batch: one subject and one object corruption per
/// positive, drawn from the relation's domain and range, then unit-norm
/// projection of every touched entity row.
pub fn transe_batch_step<R: Rng + ?Sized>(
    params: &mut TransEParams,
    batch: &[Triple],
    semantics: &RelationSemantics,
    hp: &Hyperparams,
    rng: &mut R,
) -> StepOutcome {
    let corrupted = corrupt_for_training(batch, semantics, CorruptionMode::SubjectAndObject, 1, rng);
    let pairs: Vec<(Triple, Triple)> = corrupted
        .corruptions
        .iter()
        .map(|c| (batch[c.positive], c.triple))
        .collect();
    let (loss, grad) = transe_loss_and_gradient(params, &pairs, hp.gamma);
    apply_sgd(params, &grad, hp.learning_rate);
    StepOutcome {
        loss,
        skipped_corruptions: corrupted.skipped,
    }
}

pub(crate) fn apply_sgd(params: &mut TransEParams, grad: &TransEGradient, lr: f64) {
    for (&r, g) in &grad.relations {
        for (x, gx) in params.relations.row_mut(r).iter_mut().zip(g) {
            *x -= lr * gx;
        }
    }
    for (&e, g) in &grad.entities {
        let row = params.entities.row_mut(e);
        for (x, gx) in row.iter_mut().zip(g) {
            *x -= lr * gx;
        }
        if !linalg::normalize(row) {
            log::warn!("entity {e} collapsed to the zero vector");
        }
    }
}
