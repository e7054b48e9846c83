use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::models::{Hyperparams, ModelKind};
use crate::{Error, Result};

/// Which relation semantics drive training-time corruption.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    None,
    Schema,
    Lcwa,
}

impl Regime {
    pub const ALL: [Regime; 3] = [Regime::None, Regime::Schema, Regime::Lcwa];

    pub fn as_str(self) -> &'static str {
        match self {
            Regime::None => "none",
            Regime::Schema => "schema",
            Regime::Lcwa => "lcwa",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "none" => Ok(Regime::None),
            "schema" => Ok(Regime::Schema),
            "lcwa" => Ok(Regime::Lcwa),
            other => Err(Error::Config(format!("unknown regime {other:?}"))),
        }
    }
}

/// Everything one prepare/train/evaluate run needs.
///
/// Serialized as a flat `key=value` text file (see [`RunConfig::to_kv`]);
/// the run seed is `hyperparams.seed`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: ModelKind,
    pub regime: Regime,
    pub triples: PathBuf,
    pub types: Option<PathBuf>,
    pub constraints: Option<PathBuf>,
    pub out: PathBuf,
    pub hyperparams: Hyperparams,
}

/// Keys accepted by [`RunConfig::set`], in file order.
pub const CONFIG_KEYS: [&str; 24] = [
    "model",
    "regime",
    "dim",
    "triples",
    "types",
    "constraints",
    "out",
    "seed",
    "epochs",
    "lr",
    "batch",
    "gamma",
    "lambda_a",
    "lambda_r",
    "corruptions",
    "dropconnect",
    "l1",
    "l2",
    "init_std",
    "hidden",
    "distance",
    "patience",
    "tolerance",
    "adagrad_eps",
];

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("invalid value {value:?} for {key}")))
}

/// Splits `key=value` lines, skipping blanks and `#` comments.
pub fn parse_kv(text: &str) -> Result<Vec<(String, String)>> {
    let mut pairs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(Error::Parse {
                source_name: "config".into(),
                line: i + 1,
                message: "expected key=value".into(),
            });
        };
        pairs.push((k.trim().to_owned(), v.trim().to_owned()));
    }
    Ok(pairs)
}

fn optional_path(value: &str) -> Option<PathBuf> {
    (!value.is_empty()).then(|| PathBuf::from(value))
}

impl RunConfig {
    /// Model defaults, no type information.
    pub fn new(model: ModelKind, regime: Regime, triples: impl Into<PathBuf>, out: impl Into<PathBuf>) -> Self {
        Self {
            model,
            regime,
            triples: triples.into(),
            types: None,
            constraints: None,
            out: out.into(),
            hyperparams: Hyperparams::defaults_for(model),
        }
    }

    /// Builds a config from `key=value` pairs. `model` is applied first so
    /// that its defaults can be overridden by the remaining keys.
    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Result<Self> {
        let pairs: Vec<(&str, &str)> = pairs.into_iter().collect();
        let model = match pairs.iter().rev().find(|(k, _)| *k == "model") {
            Some((_, v)) => v.parse()?,
            None => return Err(Error::Config("missing key model".into())),
        };
        let mut cfg = Self::new(model, Regime::None, "", ".");
        for (k, v) in pairs {
            if k != "model" {
                cfg.set(k, v)?;
            }
        }
        if cfg.triples.as_os_str().is_empty() {
            return Err(Error::Config("missing key triples".into()));
        }
        Ok(cfg)
    }

    /// Parses the flat `key=value` format. Blank lines and `#` comments are
    /// skipped; unknown keys are errors.
    pub fn from_kv(text: &str) -> Result<Self> {
        let pairs = parse_kv(text)?;
        Self::from_pairs(pairs.iter().map(|(k, v)| (k.as_str(), v.as_str())))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::File {
            path: path.to_owned(),
            source,
        })?;
        Self::from_kv(&text)
    }

    /// Sets one key. Numeric values use Rust's float syntax.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let hp = &mut self.hyperparams;
        match key {
            "model" => {
                let model: ModelKind = value.parse()?;
                if model != self.model {
                    return Err(Error::Config("model must be set before other keys".into()));
                }
            }
            "regime" => self.regime = value.parse()?,
            "dim" => hp.dim = parse(key, value)?,
            "triples" => self.triples = PathBuf::from(value),
            "types" => self.types = optional_path(value),
            "constraints" => self.constraints = optional_path(value),
            "out" => self.out = PathBuf::from(value),
            "seed" => hp.seed = parse(key, value)?,
            "epochs" => hp.max_epochs = parse(key, value)?,
            "lr" => hp.learning_rate = parse(key, value)?,
            "batch" => hp.batch_size = parse(key, value)?,
            "gamma" => hp.gamma = parse(key, value)?,
            "lambda_a" => hp.lambda_a = parse(key, value)?,
            "lambda_r" => hp.lambda_r = parse(key, value)?,
            "corruptions" => hp.corruptions = parse(key, value)?,
            "dropconnect" => hp.dropconnect = parse(key, value)?,
            "l1" => hp.l1 = parse(key, value)?,
            "l2" => hp.l2 = parse(key, value)?,
            "init_std" => hp.init_std = parse(key, value)?,
            "hidden" => {
                hp.hidden = if value.is_empty() { None } else { Some(parse(key, value)?) };
            }
            "distance" => hp.distance = value.parse()?,
            "patience" => hp.patience = parse(key, value)?,
            "tolerance" => hp.tolerance = parse(key, value)?,
            "adagrad_eps" => hp.adagrad_eps = parse(key, value)?,
            other => return Err(Error::Config(format!("unknown config key {other:?}"))),
        }
        Ok(())
    }

    fn value_of(&self, key: &str) -> String {
        let hp = &self.hyperparams;
        let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string()).unwrap_or_default();
        match key {
            "model" => self.model.to_string(),
            "regime" => self.regime.to_string(),
            "dim" => hp.dim.to_string(),
            "triples" => self.triples.display().to_string(),
            "types" => path(&self.types),
            "constraints" => path(&self.constraints),
            "out" => self.out.display().to_string(),
            "seed" => hp.seed.to_string(),
            "epochs" => hp.max_epochs.to_string(),
            "lr" => hp.learning_rate.to_string(),
            "batch" => hp.batch_size.to_string(),
            "gamma" => hp.gamma.to_string(),
            "lambda_a" => hp.lambda_a.to_string(),
            "lambda_r" => hp.lambda_r.to_string(),
            "corruptions" => hp.corruptions.to_string(),
            "dropconnect" => hp.dropconnect.to_string(),
            "l1" => hp.l1.to_string(),
            "l2" => hp.l2.to_string(),
            "init_std" => hp.init_std.to_string(),
            "hidden" => hp.hidden.map(|h| h.to_string()).unwrap_or_default(),
            "distance" => hp.distance.to_string(),
            "patience" => hp.patience.to_string(),
            "tolerance" => hp.tolerance.to_string(),
            "adagrad_eps" => hp.adagrad_eps.to_string(),
            _ => unreachable!("key list and accessor out of sync"),
        }
    }

    /// Every key, one `key=value` line each, in [`CONFIG_KEYS`] order.
    pub fn to_kv(&self) -> String {
        CONFIG_KEYS
            .iter()
            .map(|k| format!("{k}={}\n", self.value_of(k)))
            .collect()
    }

    /// SHA-256 of the `key=value` text without `out`, so that relocating a
    /// run does not change its identity.
    pub fn config_hash(&self) -> String {
        let body: String = CONFIG_KEYS
            .iter()
            .filter(|&&k| k != "out")
            .map(|k| format!("{k}={}\n", self.value_of(k)))
            .collect();
        hex::encode(Sha256::digest(body.as_bytes()))
    }

    /// Keys that determine the prepared artifacts.
    pub(crate) fn prepare_key(&self) -> String {
        ["regime", "seed", "triples", "types", "constraints"]
            .iter()
            .map(|k| format!("{k}={}\n", self.value_of(k)))
            .collect()
    }

    pub fn seed(&self) -> u64 {
        self.hyperparams.seed
    }

    /// File stem of the triples file.
    pub fn dataset_name(&self) -> String {
        self.triples
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "dataset".into())
    }

    pub fn validate(&self) -> Result<()> {
        self.hyperparams.validate()?;
        if self.regime == Regime::Schema && (self.types.is_none() || self.constraints.is_none()) {
            return Err(Error::Config("the schema regime requires types and constraints files".into()));
        }
        if self.types.is_some() != self.constraints.is_some() {
            return Err(Error::Config("types and constraints files must be given together".into()));
        }
        Ok(())
    }
}
