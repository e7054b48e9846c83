//! File-based experiment pipeline: prepare → train → evaluate, plus grid
//! orchestration and synthetic corpus generation.
//!
//! A run directory holds:
//!
//! | file | written by |
//! |---|---|
//! | `config.txt` | every command |
//! | `vocab.json`, `split.json`, `semantics.json`, `manifest.json` | prepare |
//! | `checkpoint.json`, `train_log.csv` | train |
//! | `report.json`, `results.csv` (appended) | evaluate |

mod config;
mod grid;

use std::collections::BTreeMap;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub use config::{parse_kv, Regime, RunConfig, CONFIG_KEYS};
pub use grid::{cmd_grid, GridCell, GridFailure, GridOutcome, GridSpec};

use crate::eval::{evaluate, ComparisonRow, EvalReport, EvalSplit, RunMeta};
use crate::graph::{
    lcwa_semantics, load_graph, resolve_schema_constraints, split_dataset, RelationSemantics, SplitBundle,
    TripleStore, Vocabulary,
};
use crate::io;
use crate::models::Checkpoint;
use crate::synth::{self, CorpusFiles, SyntheticSpec};
use crate::train::{fit_model, TrainingLog};
use crate::{Error, Result};

pub const MANIFEST_VERSION: u32 = 1;

/// Checksums tying prepared artifacts to their inputs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub format_version: u32,
    /// SHA-256 over the prepare-relevant config keys and input file digests.
    pub inputs_hash: String,
    /// File name → SHA-256 of its bytes.
    pub artifacts: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct VocabFile {
    entities: Vec<String>,
    relations: Vec<String>,
}

/// In-memory view of a prepared run directory.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub vocab: Vocabulary,
    pub store: TripleStore,
    pub split: SplitBundle,
    /// Training-time semantics for the configured regime.
    pub semantics: RelationSemantics,
}

impl Prepared {
    pub fn train_store(&self) -> TripleStore {
        self.split.train_store(&self.store)
    }
}

const PREPARED_FILES: [&str; 3] = ["vocab.json", "split.json", "semantics.json"];

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|source| Error::File {
        path: path.to_owned(),
        source,
    })
}

fn write_file(path: &Path, bytes: impl AsRef<[u8]>) -> Result<()> {
    fs::write(path, bytes).map_err(|source| Error::File {
        path: path.to_owned(),
        source,
    })
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|source| Error::File {
        path: dir.to_owned(),
        source,
    })
}

fn inputs_hash(cfg: &RunConfig) -> Result<String> {
    let mut text = cfg.prepare_key();
    for path in [Some(&cfg.triples), cfg.types.as_ref(), cfg.constraints.as_ref()]
        .into_iter()
        .flatten()
    {
        text.push_str(&sha256_hex(&read_bytes(path)?));
        text.push('\n');
    }
    Ok(sha256_hex(text.as_bytes()))
}

/// Schema semantics when types and constraints are configured, otherwise
/// unconstrained. Evaluation negatives are always drawn under these, so all
/// regimes of a dataset and seed share one test set.
fn evaluation_semantics(cfg: &RunConfig, vocab: &Vocabulary, store: &TripleStore) -> Result<RelationSemantics> {
    match (&cfg.types, &cfg.constraints) {
        (Some(types), Some(constraints)) => {
            let types = io::type_assignment(vocab, &io::read_types_file(types)?);
            let declarations = io::constraint_declarations(vocab, &io::read_constraints_file(constraints)?);
            Ok(resolve_schema_constraints(store, &types, &declarations))
        }
        _ => Ok(RelationSemantics::unconstrained(store.num_entities(), store.num_relations())),
    }
}

/// Loads the inputs, splits, resolves the regime's semantics and persists
/// everything under `cfg.out` with a checksum manifest.
pub fn cmd_prepare(cfg: &RunConfig) -> Result<Prepared> {
    cfg.validate()?;
    let graph = load_graph(io::read_triples_file(&cfg.triples)?)?;
    if graph.duplicates > 0 {
        log::info!("{} duplicate triples dropped", graph.duplicates);
    }
    let eval_semantics = evaluation_semantics(cfg, &graph.vocab, &graph.store)?;
    let split = split_dataset(&graph.store, &eval_semantics, cfg.seed())?;
    let semantics = match cfg.regime {
        Regime::None => RelationSemantics::unconstrained(graph.store.num_entities(), graph.store.num_relations()),
        Regime::Schema => eval_semantics,
        Regime::Lcwa => lcwa_semantics(&split.train_store(&graph.store)),
    };

    ensure_dir(&cfg.out)?;
    write_file(&cfg.out.join("config.txt"), cfg.to_kv())?;
    let vocab_file = VocabFile {
        entities: graph.vocab.entity_labels().to_vec(),
        relations: graph.vocab.relation_labels().to_vec(),
    };
    let contents = [
        serde_json::to_vec(&vocab_file)?,
        serde_json::to_vec(&split)?,
        serde_json::to_vec(&semantics)?,
    ];
    let mut artifacts = BTreeMap::new();
    for (name, bytes) in PREPARED_FILES.iter().zip(&contents) {
        write_file(&cfg.out.join(name), bytes)?;
        artifacts.insert(name.to_string(), sha256_hex(bytes));
    }
    let manifest = Manifest {
        format_version: MANIFEST_VERSION,
        inputs_hash: inputs_hash(cfg)?,
        artifacts,
    };
    write_file(&cfg.out.join("manifest.json"), serde_json::to_vec_pretty(&manifest)?)?;
    Ok(Prepared {
        vocab: graph.vocab,
        store: graph.store,
        split,
        semantics,
    })
}

fn stale(path: PathBuf, reason: impl Into<String>) -> Error {
    Error::StaleArtifact {
        path,
        reason: reason.into(),
    }
}

/// Reads prepared artifacts, verifying the manifest against the current
/// config, input files and artifact bytes.
pub fn load_prepared(cfg: &RunConfig) -> Result<Prepared> {
    let manifest_path = cfg.out.join("manifest.json");
    let manifest: Manifest = serde_json::from_slice(&read_bytes(&manifest_path)?)?;
    if manifest.format_version != MANIFEST_VERSION {
        return Err(stale(manifest_path, "unsupported manifest version"));
    }
    if manifest.inputs_hash != inputs_hash(cfg)? {
        return Err(stale(
            manifest_path,
            "inputs or prepare settings changed since prepare; rerun prepare",
        ));
    }
    let mut contents = Vec::new();
    for name in PREPARED_FILES {
        let path = cfg.out.join(name);
        let bytes = read_bytes(&path)?;
        if manifest.artifacts.get(name) != Some(&sha256_hex(&bytes)) {
            return Err(stale(path, "checksum does not match the manifest"));
        }
        contents.push(bytes);
    }
    let vocab_file: VocabFile = serde_json::from_slice(&contents[0])?;
    let split: SplitBundle = serde_json::from_slice(&contents[1])?;
    let semantics: RelationSemantics = serde_json::from_slice(&contents[2])?;
    let vocab = Vocabulary::from_labels(vocab_file.entities, vocab_file.relations)?;
    let all = split.train.iter().chain(&split.validation).chain(&split.holdout).copied();
    let (store, _) = TripleStore::new(vocab.num_entities(), vocab.num_relations(), all)?;
    Ok(Prepared {
        vocab,
        store,
        split,
        semantics,
    })
}

/// Trains on the prepared train split and writes `checkpoint.json` and
/// `train_log.csv`.
pub fn cmd_train(cfg: &RunConfig) -> Result<(Checkpoint, TrainingLog)> {
    cfg.validate()?;
    let prepared = load_prepared(cfg)?;
    let train = prepared.train_store();
    let (params, log) = fit_model(cfg.model, &train, &prepared.semantics, &prepared.split, &cfg.hyperparams)?;
    let checkpoint = Checkpoint::new(params, cfg.hyperparams.clone(), cfg.config_hash());
    write_file(&cfg.out.join("config.txt"), cfg.to_kv())?;
    checkpoint.save(&cfg.out.join("checkpoint.json"))?;
    write_file(&cfg.out.join("train_log.csv"), log.to_csv())?;
    Ok((checkpoint, log))
}

/// Scores the holdout split, writes `report.json` and appends one row to
/// `results.csv`.
pub fn cmd_evaluate(cfg: &RunConfig) -> Result<EvalReport> {
    let prepared = load_prepared(cfg)?;
    let ckpt_path = cfg.out.join("checkpoint.json");
    let checkpoint = Checkpoint::load(&ckpt_path)?;
    if checkpoint.config_hash != cfg.config_hash() {
        return Err(stale(ckpt_path, "checkpoint was trained under a different config"));
    }
    if checkpoint.num_entities != prepared.vocab.num_entities()
        || checkpoint.num_relations != prepared.vocab.num_relations()
    {
        return Err(Error::Config("checkpoint does not match the prepared vocabulary".into()));
    }
    let meta = RunMeta {
        regime: cfg.regime.to_string(),
        seed: cfg.seed(),
    };
    let report = evaluate(&checkpoint.params, &prepared.split, EvalSplit::Holdout, &meta)?;
    write_file(&cfg.out.join("report.json"), serde_json::to_vec_pretty(&report)?)?;
    append_results(&cfg.out.join("results.csv"), &ComparisonRow::from_report(&cfg.dataset_name(), &report))?;
    Ok(report)
}

/// Appends `row`, writing the header first if the file is new or empty.
pub fn append_results(path: &Path, row: &ComparisonRow) -> Result<()> {
    let fresh = fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let mut file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|source| Error::File {
            path: path.to_owned(),
            source,
        })?;
    if fresh {
        writeln!(file, "{}", ComparisonRow::HEADER)?;
    }
    writeln!(file, "{}", row.to_csv())?;
    Ok(())
}

/// prepare, train and evaluate in sequence.
pub fn run_pipeline(cfg: &RunConfig) -> Result<EvalReport> {
    cmd_prepare(cfg)?;
    cmd_train(cfg)?;
    cmd_evaluate(cfg)
}

/// Generates a synthetic corpus into `out`.
pub fn cmd_synth(spec: &SyntheticSpec, out: &Path) -> Result<CorpusFiles> {
    synth::generate(spec)?.write_to(out)
}
