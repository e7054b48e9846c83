//! Link-prediction evaluation: scoring, AUPRC and AUROC, and reports.

mod metrics;
mod report;

pub use metrics::{
    auprc, auroc, average_precision, pr_curve, roc_auc, roc_curve, Label, ScoredExample,
};
pub use report::{evaluate, score_all, ComparisonRow, EvalReport, EvalSplit, RunMeta};
