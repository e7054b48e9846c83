use serde::{Deserialize, Serialize};

use super::{Distance, ModelKind};
use crate::{Error, Result};

/// Training and model hyper-parameters shared by all three models. Fields a
/// model does not use are ignored by it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hyperparams {
    /// Embedding length `d`.
    pub dim: usize,
    /// RESCAL ridge on `A`.
    pub lambda_a: f64,
    /// RESCAL ridge on each `R_k`.
    pub lambda_r: f64,
    /// TransE margin.
    pub gamma: f64,
    /// mwNN object corruptions per positive.
    pub corruptions: usize,
    pub learning_rate: f64,
    pub batch_size: usize,
    pub max_epochs: usize,
    /// Elastic-net L1 weight on the mwNN network weights.
    pub l1: f64,
    /// Elastic-net L2 weight on the mwNN network weights.
    pub l2: f64,
    pub dropconnect: f64,
    pub init_std: f64,
    /// mwNN hidden width; `None` means `dim`.
    pub hidden: Option<usize>,
    pub distance: Distance,
    /// Early stopping: epochs without an AUPRC gain of `tolerance`.
    pub patience: usize,
    pub tolerance: f64,
    pub adagrad_eps: f64,
    pub seed: u64,
}

impl Hyperparams {
    pub fn defaults_for(kind: ModelKind) -> Self {
        let base = Self {
            dim: 10,
            lambda_a: 0.1,
            lambda_r: 0.1,
            gamma: 2.0,
            corruptions: 5,
            learning_rate: 0.01,
            batch_size: 128,
            max_epochs: 200,
            l1: 1e-5,
            l2: 1e-4,
            dropconnect: 0.1,
            init_std: 0.1,
            hidden: None,
            distance: Distance::L2,
            patience: 3,
            tolerance: 1e-4,
            adagrad_eps: 1e-8,
            seed: 0,
        };
        match kind {
            ModelKind::Rescal => base,
            ModelKind::TransE => Self {
                learning_rate: 0.02,
                ..base
            },
            ModelKind::Mwnn => Self {
                learning_rate: 0.2,
                batch_size: 32,
                init_std: 0.3,
                ..base
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::Config(msg.to_owned()));
        if self.dim == 0 {
            return fail("dim must be at least 1");
        }
        if !(self.lambda_a >= 0.0 && self.lambda_r >= 0.0) {
            return fail("lambda_a and lambda_r must be non-negative");
        }
        if !(self.gamma > 0.0) {
            return fail("gamma must be positive");
        }
        if self.corruptions == 0 {
            return fail("corruptions must be at least 1");
        }
        if !(self.learning_rate > 0.0) {
            return fail("learning rate must be positive");
        }
        if self.batch_size == 0 {
            return fail("batch size must be at least 1");
        }
        if !(self.l1 >= 0.0 && self.l2 >= 0.0) {
            return fail("elastic-net weights must be non-negative");
        }
        if !(0.0..=1.0).contains(&self.dropconnect) {
            return fail("dropconnect must lie in [0, 1]");
        }
        if !(self.init_std >= 0.0 && self.init_std.is_finite()) {
            return fail("init_std must be finite and non-negative");
        }
        if self.hidden == Some(0) {
            return fail("hidden width must be at least 1");
        }
        if !(self.tolerance >= 0.0 && self.adagrad_eps > 0.0) {
            return fail("tolerance must be non-negative and adagrad_eps positive");
        }
        Ok(())
    }
}
