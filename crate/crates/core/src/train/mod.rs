//! Trainers: alternating least squares for RESCAL, mini-batch SGD for
//! TransE and mwNN, and the early-stopping loop they share.

mod als;
mod log;
mod mwnn;
mod sgd;
mod transe;

pub use self::log::{LogRecord, TrainingLog};
pub use als::{als_sweep, fit_rescal, rescal_loss, rescal_relation_loss, AlsState};
pub use mwnn::{mwnn_batch_step, mwnn_loss_and_gradient, AdaGrad, MwnnGradient};
pub use sgd::{fit_model, fit_sgd, SgdConfig};
pub use transe::{transe_batch_step, transe_loss_and_gradient, TransEGradient};

use crate::eval::average_precision;
use crate::{ModelParams, Result, SplitBundle};

/// Stops once `patience` consecutive epochs fail to raise the best probe
/// AUPRC by more than `tolerance`.
#[derive(Debug, Clone)]
pub struct EarlyStopping {
    patience: usize,
    tolerance: f64,
    best: f64,
    best_epoch: usize,
    stale: usize,
}

impl EarlyStopping {
    pub fn new(patience: usize, tolerance: f64) -> Self {
        Self {
            patience,
            tolerance,
            best: f64::NEG_INFINITY,
            best_epoch: 0,
            stale: 0,
        }
    }

    /// Records the probe AUPRC of `epoch`. Returns true when it is a new best.
    pub fn observe(&mut self, epoch: usize, value: f64) -> bool {
        if value > self.best + self.tolerance {
            self.stale = 0;
        } else {
            self.stale += 1;
        }
        if value > self.best {
            self.best = value;
            self.best_epoch = epoch;
            true
        } else {
            false
        }
    }

    pub fn should_stop(&self) -> bool {
        self.stale >= self.patience
    }

    pub fn best(&self) -> f64 {
        self.best
    }

    pub fn best_epoch(&self) -> usize {
        self.best_epoch
    }
}

/// AUPRC of the early-stopping probe against its negatives.
pub fn probe_auprc(params: &ModelParams, split: &SplitBundle) -> Result<f64> {
    let pos = crate::eval::score_all(params, &split.early_stop_probe)?;
    let neg = crate::eval::score_all(params, &split.probe_negatives)?;
    let pairs: Vec<(f64, bool)> = pos
        .into_iter()
        .map(|s| (s, true))
        .chain(neg.into_iter().map(|s| (s, false)))
        .collect();
    average_precision(&pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stops_after_patience_at_plateau() {
        let mut es = EarlyStopping::new(3, 1e-4);
        let series = [0.5, 0.9, 1.0, 1.0, 1.0, 1.0, 1.0];
        let mut stopped_at = None;
        for (epoch, v) in series.iter().enumerate() {
            es.observe(epoch + 1, *v);
            if es.should_stop() {
                stopped_at = Some(epoch + 1);
                break;
            }
        }
        assert_eq!(stopped_at, Some(6));
        assert_eq!(es.best_epoch(), 3);
        assert_eq!(es.best(), 1.0);
    }

    #[test]
    fn small_gains_count_as_stale_but_update_best() {
        let mut es = EarlyStopping::new(2, 0.01);
        assert!(es.observe(1, 0.5));
        assert!(es.observe(2, 0.505));
        assert!(!es.should_stop());
        assert!(!es.observe(3, 0.4));
        assert!(es.should_stop());
        assert_eq!(es.best_epoch(), 2);
    }
}
