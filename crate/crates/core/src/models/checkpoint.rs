use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Hyperparams, ModelKind, ModelParams};
use crate::{Error, Result};

pub const CHECKPOINT_FORMAT_VERSION: u32 = 1;

/// Self-describing JSON container for trained parameters.
///
/// Layout: `format_version`, `model`, `num_entities`, `num_relations`,
/// `dim`, `seed`, `config_hash`, `hyperparams` and `params`. Matrices are
/// stored row-major as `{ "rows", "cols", "data" }`. Floats are written in
/// shortest round-trip form, so save followed by load is lossless.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub format_version: u32,
    pub model: ModelKind,
    pub num_entities: usize,
    pub num_relations: usize,
    pub dim: usize,
    pub seed: u64,
    pub config_hash: String,
    pub hyperparams: Hyperparams,
    pub params: ModelParams,
}

impl Checkpoint {
    pub fn new(params: ModelParams, hyperparams: Hyperparams, config_hash: String) -> Self {
        Self {
            format_version: CHECKPOINT_FORMAT_VERSION,
            model: params.kind(),
            num_entities: params.num_entities(),
            num_relations: params.num_relations(),
            dim: params.dim(),
            seed: hyperparams.seed,
            config_hash,
            hyperparams,
            params,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let ckpt: Self = serde_json::from_str(text)?;
        if ckpt.format_version != CHECKPOINT_FORMAT_VERSION {
            return Err(Error::Config(format!(
                "unsupported checkpoint format version {}",
                ckpt.format_version
            )));
        }
        let p = &ckpt.params;
        if p.kind() != ckpt.model
            || p.num_entities() != ckpt.num_entities
            || p.num_relations() != ckpt.num_relations
            || p.dim() != ckpt.dim
        {
            return Err(Error::Config("checkpoint header does not match its parameters".into()));
        }
        Ok(ckpt)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()?).map_err(|source| Error::File {
            path: path.to_owned(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::File {
            path: path.to_owned(),
            source,
        })?;
        Self::from_json(&text)
    }
}
