use serde::{Deserialize, Serialize};

use crate::linalg::{dot, Matrix};
use crate::Triple;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Tanh,
}

/// Multiway neural network: entity and relation embeddings feeding one
/// hidden layer `W` (h × 3d) and a logistic output through `β`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MwnnParams {
    pub entities: Matrix,
    pub relations: Matrix,
    pub hidden: Matrix,
    pub output: Vec<f64>,
    pub activation: Activation,
    /// DropConnect probability used in training; evaluation scales `W` by
    /// `1 - dropconnect`.
    pub dropconnect: f64,
}

impl MwnnParams {
    pub fn dim(&self) -> usize {
        self.entities.cols()
    }

    pub fn hidden_width(&self) -> usize {
        self.hidden.rows()
    }

    /// Multiplier applied to every weight of `W` at evaluation time.
    pub fn keep_probability(&self) -> f64 {
        1.0 - self.dropconnect
    }

    /// Per-entry mask equal to the keep probability.
    pub fn expected_mask(&self) -> Vec<f64> {
        vec![self.keep_probability(); self.hidden.as_slice().len()]
    }
}

/// Weights applied to `W` for one forward pass.
#[derive(Debug, Clone, Copy)]
pub enum WeightMask<'a> {
    None,
    Scale(f64),
    Entries(&'a [f64]),
}

/// Intermediate values of one forward pass, kept for backpropagation.
#[derive(Debug, Clone)]
pub struct MwnnForward {
    /// `[a_s; r_p; a_o]`
    pub input: Vec<f64>,
    /// `φ(W x)`
    pub activations: Vec<f64>,
    pub logit: f64,
    pub probability: f64,
}

impl MwnnForward {
    pub fn compute(params: &MwnnParams, t: &Triple, mask: WeightMask<'_>) -> Self {
        let d = params.dim();
        let mut input = Vec::with_capacity(3 * d);
        input.extend_from_slice(params.entities.row(t.s));
        input.extend_from_slice(params.relations.row(t.p));
        input.extend_from_slice(params.entities.row(t.o));
        let cols = 3 * d;
        let activations: Vec<f64> = (0..params.hidden_width())
            .map(|j| {
                let w = params.hidden.row(j);
                let z = match mask {
                    WeightMask::None => dot(w, &input),
                    WeightMask::Scale(c) => c * dot(w, &input),
                    WeightMask::Entries(m) => {
                        let m = &m[j * cols..(j + 1) * cols];
                        (0..cols).map(|i| w[i] * m[i] * input[i]).sum()
                    }
                };
                match params.activation {
                    Activation::Tanh => z.tanh(),
                }
            })
            .collect();
        let logit = dot(&params.output, &activations);
        Self {
            input,
            activations,
            logit,
            probability: logistic(logit),
        }
    }
}

pub(crate) fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `σ(βᵀ φ(W [a_s; r_p; a_o]))`. `mask`, when given, multiplies `W`
/// entry-wise (row-major, same layout as `W`).
pub fn mwnn_score(params: &MwnnParams, s: usize, p: usize, o: usize, mask: Option<&[f64]>) -> f64 {
    let mask = mask.map_or(WeightMask::None, WeightMask::Entries);
    MwnnForward::compute(params, &Triple::new(s, p, o), mask).probability
}
