use std::collections::BTreeMap;

use rand::Rng;

use super::transe::StepOutcome;
use crate::graph::{corrupt_for_training, CorruptionMode, RelationSemantics};
use crate::linalg::Matrix;
use crate::models::{Hyperparams, MwnnForward, MwnnParams, WeightMask};
use crate::Triple;

const PROB_FLOOR: f64 = 1e-12;

/// Gradient of the regularized Bernoulli loss. Embedding rows are sparse,
/// network weights dense.
#[derive(Debug, Clone, PartialEq)]
pub struct MwnnGradient {
    pub entities: BTreeMap<usize, Vec<f64>>,
    pub relations: BTreeMap<usize, Vec<f64>>,
    pub hidden: Vec<f64>,
    pub output: Vec<f64>,
}

impl MwnnGradient {
    fn zeros_like(params: &MwnnParams) -> Self {
        Self {
            entities: BTreeMap::new(),
            relations: BTreeMap::new(),
            hidden: vec![0.0; params.hidden.as_slice().len()],
            output: vec![0.0; params.output.len()],
        }
    }
}

fn accumulate(map: &mut BTreeMap<usize, Vec<f64>>, row: usize, g: &[f64]) {
    let acc = map.entry(row).or_insert_with(|| vec![0.0; g.len()]);
    for (a, x) in acc.iter_mut().zip(g) {
        *a += x;
    }
}

fn elastic_net(w: f64, l1: f64, l2: f64) -> (f64, f64) {
    let value = l1 * w.abs() + l2 * w * w;
    let sign = if w > 0.0 { 1.0 } else if w < 0.0 { -1.0 } else { 0.0 };
    (value, l1 * sign + 2.0 * l2 * w)
}

/// `−Σ log θ(pos) − Σ log(1 − θ(neg)) + λ1(‖W‖₁ + ‖β‖₁) + λ2(‖W‖² + ‖β‖²)`
/// and its gradient. `mask` multiplies `W` entry-wise (DropConnect); `None`
/// uses `W` unmasked. Probabilities are clamped to `[1e-12, 1 − 1e-12]`
/// before the log; a clamped term has zero gradient.
pub fn mwnn_loss_and_gradient(
    params: &MwnnParams,
    examples: &[(Triple, bool)],
    mask: Option<&[f64]>,
    l1: f64,
    l2: f64,
) -> (f64, MwnnGradient) {
    let d = params.dim();
    let cols = 3 * d;
    let h = params.hidden_width();
    let mut grad = MwnnGradient::zeros_like(params);
    let mut loss = 0.0;
    let weight_mask = mask.map_or(WeightMask::None, WeightMask::Entries);
    let w = params.hidden.as_slice();
    let effective = |j: usize, i: usize| {
        let idx = j * cols + i;
        mask.map_or(w[idx], |m| w[idx] * m[idx])
    };
    for (t, positive) in examples {
        let fwd = MwnnForward::compute(params, t, weight_mask);
        let theta = fwd.probability;
        let (target, clamped) = if *positive {
            (theta.max(PROB_FLOOR), theta < PROB_FLOOR)
        } else {
            (1.0 - theta.min(1.0 - PROB_FLOOR), theta > 1.0 - PROB_FLOOR)
        };
        loss -= target.ln();
        if clamped {
            continue;
        }
        // ∂loss/∂logit
        let g_logit = if *positive { theta - 1.0 } else { theta };
        let mut g_input = vec![0.0; cols];
        for j in 0..h {
            let act = fwd.activations[j];
            grad.output[j] += g_logit * act;
            let g_pre = g_logit * params.output[j] * (1.0 - act * act);
            if g_pre == 0.0 {
                continue;
            }
            for i in 0..cols {
                let idx = j * cols + i;
                let m = mask.map_or(1.0, |m| m[idx]);
                grad.hidden[idx] += g_pre * fwd.input[i] * m;
                g_input[i] += g_pre * effective(j, i);
            }
        }
        accumulate(&mut grad.entities, t.s, &g_input[..d]);
        accumulate(&mut grad.relations, t.p, &g_input[d..2 * d]);
        accumulate(&mut grad.entities, t.o, &g_input[2 * d..]);
    }
    if l1 > 0.0 || l2 > 0.0 {
        for (g, &wv) in grad.hidden.iter_mut().zip(w) {
            let (value, slope) = elastic_net(wv, l1, l2);
            loss += value;
            *g += slope;
        }
        for (g, &bv) in grad.output.iter_mut().zip(&params.output) {
            let (value, slope) = elastic_net(bv, l1, l2);
            loss += value;
            *g += slope;
        }
    }
    (loss, grad)
}

/// Per-coordinate AdaGrad state for every mwNN parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaGrad {
    learning_rate: f64,
    eps: f64,
    entities: Matrix,
    relations: Matrix,
    hidden: Vec<f64>,
    output: Vec<f64>,
}

impl AdaGrad {
    pub fn new(params: &MwnnParams, learning_rate: f64, eps: f64) -> Self {
        Self {
            learning_rate,
            eps,
            entities: Matrix::zeros(params.entities.rows(), params.entities.cols()),
            relations: Matrix::zeros(params.relations.rows(), params.relations.cols()),
            hidden: vec![0.0; params.hidden.as_slice().len()],
            output: vec![0.0; params.output.len()],
        }
    }

    fn update(lr: f64, eps: f64, values: &mut [f64], accum: &mut [f64], grad: &[f64]) {
        for ((x, a), g) in values.iter_mut().zip(accum.iter_mut()).zip(grad) {
            *a += g * g;
            *x -= lr * g / (*a + eps).sqrt();
        }
    }

    pub fn apply(&mut self, params: &mut MwnnParams, grad: &MwnnGradient) {
        let (lr, eps) = (self.learning_rate, self.eps);
        for (&e, g) in &grad.entities {
            Self::update(lr, eps, params.entities.row_mut(e), self.entities.row_mut(e), g);
        }
        for (&r, g) in &grad.relations {
            Self::update(lr, eps, params.relations.row_mut(r), self.relations.row_mut(r), g);
        }
        Self::update(lr, eps, params.hidden.as_mut_slice(), &mut self.hidden, &grad.hidden);
        Self::update(lr, eps, &mut params.output, &mut self.output, &grad.output);
    }
}

/// Samples a DropConnect mask: each weight kept (1) with probability
/// `1 − p_drop`, dropped (0) otherwise.
pub(crate) fn sample_mask<R: Rng + ?Sized>(len: usize, p_drop: f64, rng: &mut R) -> Vec<f64> {
    (0..len)
        .map(|_| if rng.random::<f64>() < p_drop { 0.0 } else { 1.0 })
        .collect()
}

/// One AdaGrad step on a batch: `c` object corruptions per positive from
/// the relation's range, a fresh DropConnect mask on `W`, elastic net on
/// `W` and `β`.
pub fn mwnn_batch_step<R: Rng + ?Sized>(
    params: &mut MwnnParams,
    optimizer: &mut AdaGrad,
    batch: &[Triple],
    semantics: &RelationSemantics,
    hp: &Hyperparams,
    rng: &mut R,
) -> StepOutcome {
    let corrupted = corrupt_for_training(batch, semantics, CorruptionMode::ObjectOnly, hp.corruptions, rng);
    let mut examples: Vec<(Triple, bool)> = batch.iter().map(|&t| (t, true)).collect();
    examples.extend(corrupted.corruptions.iter().map(|c| (c.triple, false)));
    let mask = sample_mask(params.hidden.as_slice().len(), params.dropconnect, rng);
    let (loss, grad) = mwnn_loss_and_gradient(params, &examples, Some(&mask), hp.l1, hp.l2);
    optimizer.apply(params, &grad);
    StepOutcome {
        loss,
        skipped_corruptions: corrupted.skipped,
    }
}
