use rand::seq::SliceRandom;

use super::mwnn::{mwnn_batch_step, AdaGrad};
use super::transe::transe_batch_step;
use super::{als, probe_auprc, EarlyStopping, LogRecord, TrainingLog};
use crate::clock::Stopwatch;
use crate::graph::{CorruptionMode, RelationSemantics, TripleStore};
use crate::models::{init_params, Hyperparams, ModelKind, ModelParams};
use crate::{rng, Error, Result, SplitBundle};

/// Mini-batch settings of the SGD-trained models.
#[derive(Debug, Clone, PartialEq)]
pub struct SgdConfig {
    pub learning_rate: f64,
    pub batch_size: usize,
    pub adagrad_eps: f64,
    pub max_epochs: usize,
    pub patience: usize,
    pub tolerance: f64,
    pub mode: CorruptionMode,
    pub corruptions: usize,
    pub seed: u64,
}

impl SgdConfig {
    pub fn for_model(kind: ModelKind, hp: &Hyperparams) -> Result<Self> {
        let (mode, corruptions) = match kind {
            ModelKind::TransE => (CorruptionMode::SubjectAndObject, 1),
            ModelKind::Mwnn => (CorruptionMode::ObjectOnly, hp.corruptions),
            ModelKind::Rescal => {
                return Err(Error::Config("RESCAL is trained by ALS, not SGD".into()));
            }
        };
        Ok(Self {
            learning_rate: hp.learning_rate,
            batch_size: hp.batch_size,
            adagrad_eps: hp.adagrad_eps,
            max_epochs: hp.max_epochs,
            patience: hp.patience,
            tolerance: hp.tolerance,
            mode,
            corruptions,
            seed: hp.seed,
        })
    }
}

/// Trains TransE or mwNN on `train`. An epoch is one shuffled pass in
/// mini-batches; after each epoch the probe AUPRC drives early stopping and
/// the best-probe parameters are returned.
pub fn fit_sgd(
    kind: ModelKind,
    train: &TripleStore,
    semantics: &RelationSemantics,
    split: &SplitBundle,
    hp: &Hyperparams,
) -> Result<(ModelParams, TrainingLog)> {
    hp.validate()?;
    let cfg = SgdConfig::for_model(kind, hp)?;
    if semantics.num_relations() != train.num_relations() || semantics.num_entities() != train.num_entities() {
        return Err(Error::Config("semantics do not match the triple store".into()));
    }
    let mut current = init_params(kind, train.num_entities(), train.num_relations(), hp)?;
    let mut best = current.clone();
    let mut log = TrainingLog::default();
    let mut stopper = EarlyStopping::new(cfg.patience, cfg.tolerance);
    let mut rng = rng::stream(cfg.seed, "sgd");
    let mut order = train.triples().to_vec();
    let mut adagrad = match &current {
        ModelParams::Mwnn(p) => Some(AdaGrad::new(p, cfg.learning_rate, cfg.adagrad_eps)),
        _ => None,
    };
    let clock = Stopwatch::start();

    for epoch in 1..=cfg.max_epochs {
        order.shuffle(&mut rng);
        let mut epoch_loss = 0.0;
        for batch in order.chunks(cfg.batch_size) {
            let outcome = match &mut current {
                ModelParams::TransE(p) => transe_batch_step(p, batch, semantics, hp, &mut rng),
                ModelParams::Mwnn(p) => {
                    let opt = adagrad.as_mut().expect("created for mwNN");
                    mwnn_batch_step(p, opt, batch, semantics, hp, &mut rng)
                }
                ModelParams::Rescal(_) => unreachable!("rejected by SgdConfig"),
            };
            epoch_loss += outcome.loss;
        }
        if !current.is_finite() {
            return Err(Error::Config(format!(
                "{kind} parameters diverged in epoch {epoch}; lower the learning rate"
            )));
        }
        let auprc = probe_auprc(&current, split)?;
        log.records.push(LogRecord {
            epoch,
            loss: epoch_loss,
            probe_auprc: auprc,
            wall_time_s: clock.elapsed_secs(),
        });
        if stopper.observe(epoch, auprc) {
            best = current.clone();
            log.best_epoch = epoch;
        }
        if stopper.should_stop() {
            log.stopped_early = epoch < cfg.max_epochs;
            break;
        }
    }
    Ok((best, log))
}

/// Dispatches to ALS (RESCAL) or SGD (TransE, mwNN).
pub fn fit_model(
    kind: ModelKind,
    train: &TripleStore,
    semantics: &RelationSemantics,
    split: &SplitBundle,
    hp: &Hyperparams,
) -> Result<(ModelParams, TrainingLog)> {
    match kind {
        ModelKind::Rescal => {
            let (params, log) = als::fit_rescal(train, semantics, split, hp)?;
            Ok((ModelParams::Rescal(params), log))
        }
        _ => fit_sgd(kind, train, semantics, split, hp),
    }
}
