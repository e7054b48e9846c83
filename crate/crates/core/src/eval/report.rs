use serde::{Deserialize, Serialize};

use super::metrics::{auprc, auroc, Label, ScoredExample};
use crate::clock::Stopwatch;
use crate::{Error, ModelParams, Result, SplitBundle, Triple};

/// Scores `triples` in order with the model's evaluation-time scorer.
pub fn score_all(params: &ModelParams, triples: &[Triple]) -> Result<Vec<f64>> {
    let (n, m) = (params.num_entities(), params.num_relations());
    triples
        .iter()
        .map(|t| {
            if t.s >= n || t.o >= n || t.p >= m {
                return Err(Error::Config(format!(
                    "triple {t:?} outside a {} model over {n} entities and {m} relations",
                    params.kind()
                )));
            }
            Ok(params.score(t))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EvalSplit {
    Validation,
    Holdout,
}

/// Run metadata stamped onto a report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunMeta {
    pub regime: String,
    pub seed: u64,
}

/// Metrics of one model on one evaluation split.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub auprc: f64,
    pub auroc: f64,
    pub model: String,
    pub regime: String,
    pub dim: usize,
    pub seed: u64,
    pub n_pos: usize,
    pub n_neg: usize,
    pub wall_time_s: f64,
}

/// Scores the positives of `which` against its dedicated negative pool.
pub fn evaluate(
    params: &ModelParams,
    split: &SplitBundle,
    which: EvalSplit,
    meta: &RunMeta,
) -> Result<EvalReport> {
    let clock = Stopwatch::start();
    let (positives, negatives) = match which {
        EvalSplit::Validation => (&split.validation, &split.validation_negatives),
        EvalSplit::Holdout => (&split.holdout, &split.holdout_negatives),
    };
    let scored = label_and_score(params, positives, negatives)?;
    Ok(EvalReport {
        auprc: auprc(&scored)?,
        auroc: auroc(&scored)?,
        model: params.kind().to_string(),
        regime: meta.regime.clone(),
        dim: params.dim(),
        seed: meta.seed,
        n_pos: positives.len(),
        n_neg: negatives.len(),
        wall_time_s: clock.elapsed_secs(),
    })
}

pub(crate) fn label_and_score(
    params: &ModelParams,
    positives: &[Triple],
    negatives: &[Triple],
) -> Result<Vec<ScoredExample>> {
    let pos = score_all(params, positives)?;
    let neg = score_all(params, negatives)?;
    let make = |triples: &[Triple], scores: Vec<f64>, label| {
        triples
            .iter()
            .zip(scores)
            .map(move |(&triple, score)| ScoredExample { triple, score, label })
            .collect::<Vec<_>>()
    };
    let mut scored = make(positives, pos, Label::Positive);
    scored.extend(make(negatives, neg, Label::Negative));
    Ok(scored)
}

/// One line of a results table: `dataset,model,regime,d,auprc,auroc`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub dataset: String,
    pub model: String,
    pub regime: String,
    pub d: usize,
    pub auprc: f64,
    pub auroc: f64,
}

impl ComparisonRow {
    pub const HEADER: &'static str = "dataset,model,regime,d,auprc,auroc";

    pub fn from_report(dataset: &str, report: &EvalReport) -> Self {
        Self {
            dataset: dataset.to_owned(),
            model: report.model.clone(),
            regime: report.regime.clone(),
            d: report.dim,
            auprc: report.auprc,
            auroc: report.auroc,
        }
    }

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{:.6},{:.6}",
            self.dataset, self.model, self.regime, self.d, self.auprc, self.auroc
        )
    }

    pub fn parse_csv(line: &str) -> Result<Self> {
        let fields: Vec<&str> = line.trim_end().split(',').collect();
        let bad = || Error::Input(format!("malformed results row {line:?}"));
        let [dataset, model, regime, d, auprc, auroc] = fields.as_slice() else {
            return Err(bad());
        };
        Ok(Self {
            dataset: dataset.to_string(),
            model: model.to_string(),
            regime: regime.to_string(),
            d: d.parse().map_err(|_| bad())?,
            auprc: auprc.parse().map_err(|_| bad())?,
            auroc: auroc.parse().map_err(|_| bad())?,
        })
    }
}
