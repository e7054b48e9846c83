//! Parameter containers, scoring functions and initialization for RESCAL,
//! TransE and the multiway neural network (mwNN).

mod checkpoint;
mod hyper;
mod mwnn;
mod rescal;
pub(crate) mod transe;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use checkpoint::{Checkpoint, CHECKPOINT_FORMAT_VERSION};
pub use hyper::Hyperparams;
pub use mwnn::{mwnn_score, Activation, MwnnForward, MwnnParams, WeightMask};
pub use rescal::{rescal_score, RescalParams};
pub use transe::{transe_score, Distance, TransEParams};

use crate::linalg::{self, Matrix};
use crate::{rng, Error, Result, Triple};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Rescal,
    TransE,
    Mwnn,
}

impl ModelKind {
    pub const ALL: [ModelKind; 3] = [ModelKind::Rescal, ModelKind::TransE, ModelKind::Mwnn];

    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Rescal => "rescal",
            ModelKind::TransE => "transe",
            ModelKind::Mwnn => "mwnn",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rescal" => Ok(ModelKind::Rescal),
            "transe" => Ok(ModelKind::TransE),
            "mwnn" => Ok(ModelKind::Mwnn),
            other => Err(Error::Config(format!("unknown model {other:?}"))),
        }
    }
}

/// Trained or initial parameters of one of the three models.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ModelParams {
    Rescal(RescalParams),
    #[serde(rename = "transe")]
    TransE(TransEParams),
    Mwnn(MwnnParams),
}

impl ModelParams {
    pub fn kind(&self) -> ModelKind {
        match self {
            ModelParams::Rescal(_) => ModelKind::Rescal,
            ModelParams::TransE(_) => ModelKind::TransE,
            ModelParams::Mwnn(_) => ModelKind::Mwnn,
        }
    }

    pub fn entities(&self) -> &Matrix {
        match self {
            ModelParams::Rescal(p) => &p.entities,
            ModelParams::TransE(p) => &p.entities,
            ModelParams::Mwnn(p) => &p.entities,
        }
    }

    pub fn dim(&self) -> usize {
        self.entities().cols()
    }

    pub fn num_entities(&self) -> usize {
        self.entities().rows()
    }

    pub fn num_relations(&self) -> usize {
        match self {
            ModelParams::Rescal(p) => p.relations.len(),
            ModelParams::TransE(p) => p.relations.rows(),
            ModelParams::Mwnn(p) => p.relations.rows(),
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            ModelParams::Rescal(p) => p.entities.is_finite() && p.relations.iter().all(Matrix::is_finite),
            ModelParams::TransE(p) => p.entities.is_finite() && p.relations.is_finite(),
            ModelParams::Mwnn(p) => {
                p.entities.is_finite()
                    && p.relations.is_finite()
                    && p.hidden.is_finite()
                    && p.output.iter().all(|x| x.is_finite())
            }
        }
    }

    /// Evaluation-time score; higher means more plausible. mwNN uses its
    /// expected (unmasked, keep-probability scaled) weights.
    pub fn score(&self, t: &Triple) -> f64 {
        match self {
            ModelParams::Rescal(p) => rescal_score(p, t.s, t.p, t.o),
            ModelParams::TransE(p) => transe_score(p, t.s, t.p, t.o),
            ModelParams::Mwnn(p) => {
                MwnnForward::compute(p, t, WeightMask::Scale(p.keep_probability())).probability
            }
        }
    }
}

/// Draws every parameter tensor i.i.d. from N(0, init_std²) under
/// `hp.seed`. TransE entity rows are then projected onto the unit sphere.
pub fn init_params(kind: ModelKind, n: usize, m: usize, hp: &Hyperparams) -> Result<ModelParams> {
    if n == 0 || m == 0 || hp.dim == 0 {
        return Err(Error::Config("entity count, relation count and dim must be positive".into()));
    }
    let d = hp.dim;
    let std = hp.init_std;
    let mut rng = rng::stream(hp.seed, "init");
    let params = match kind {
        ModelKind::Rescal => {
            let entities = Matrix::random_normal(n, d, std, &mut rng);
            let relations = (0..m).map(|_| Matrix::random_normal(d, d, std, &mut rng)).collect();
            ModelParams::Rescal(RescalParams { entities, relations })
        }
        ModelKind::TransE => {
            let mut entities = Matrix::random_normal(n, d, std, &mut rng);
            let relations = Matrix::random_normal(m, d, std, &mut rng);
            let mut zero_rows = 0;
            for i in 0..n {
                if !linalg::normalize(entities.row_mut(i)) {
                    zero_rows += 1;
                }
            }
            if zero_rows > 0 {
                log::warn!("{zero_rows} TransE entity rows are zero and were left unnormalized");
            }
            ModelParams::TransE(TransEParams {
                entities,
                relations,
                distance: hp.distance,
            })
        }
        ModelKind::Mwnn => {
            let h = hp.hidden.unwrap_or(d);
            let entities = Matrix::random_normal(n, d, std, &mut rng);
            let relations = Matrix::random_normal(m, d, std, &mut rng);
            let hidden = Matrix::random_normal(h, 3 * d, std, &mut rng);
            let output = Matrix::random_normal(1, h, std, &mut rng).as_slice().to_vec();
            ModelParams::Mwnn(MwnnParams {
                entities,
                relations,
                hidden,
                output,
                activation: Activation::Tanh,
                dropconnect: hp.dropconnect,
            })
        }
    };
    Ok(params)
}
