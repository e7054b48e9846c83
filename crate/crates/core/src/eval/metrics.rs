//! Ranking metrics with deterministic tie handling.
//!
//! AUPRC is average precision computed step-wise over distinct score
//! thresholds: a block of tied scores enters the ranking at once, and every
//! positive in the block is credited the precision reached after the whole
//! block. AUROC is the probability that a random positive outscores a
//! random negative, with ties counted as one half.

use serde::{Deserialize, Serialize};

use crate::{Error, Result, Triple};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Positive,
    Negative,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoredExample {
    pub triple: Triple,
    pub score: f64,
    pub label: Label,
}

fn pairs(scored: &[ScoredExample]) -> Vec<(f64, bool)> {
    scored
        .iter()
        .map(|e| (e.score, e.label == Label::Positive))
        .collect()
}

pub fn auprc(scored: &[ScoredExample]) -> Result<f64> {
    average_precision(&pairs(scored))
}

pub fn auroc(scored: &[ScoredExample]) -> Result<f64> {
    roc_auc(&pairs(scored))
}

/// Sorts by score descending and returns `(positives, negatives)` per tie
/// block, highest block first.
fn tie_blocks(examples: &[(f64, bool)]) -> Result<Vec<(u64, u64)>> {
    let (pos, neg) = examples.iter().fold((0u64, 0u64), |(p, n), &(_, y)| {
        if y {
            (p + 1, n)
        } else {
            (p, n + 1)
        }
    });
    if pos == 0 {
        return Err(Error::UndefinedMetric("no positive examples".into()));
    }
    if neg == 0 {
        return Err(Error::UndefinedMetric("no negative examples".into()));
    }
    if let Some((s, _)) = examples.iter().find(|(s, _)| !s.is_finite()) {
        return Err(Error::UndefinedMetric(format!("non-finite score {s}")));
    }
    let mut sorted = examples.to_vec();
    sorted.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut blocks: Vec<(u64, u64)> = Vec::new();
    let mut last = f64::NAN;
    for (score, y) in sorted {
        // -0.0 and 0.0 tie
        if blocks.is_empty() || score != last {
            blocks.push((0, 0));
            last = score;
        }
        let b = blocks.last_mut().expect("pushed above");
        if y {
            b.0 += 1;
        } else {
            b.1 += 1;
        }
    }
    Ok(blocks)
}

/// Average precision over `(score, is_positive)` pairs.
pub fn average_precision(examples: &[(f64, bool)]) -> Result<f64> {
    let blocks = tie_blocks(examples)?;
    let total_pos: u64 = blocks.iter().map(|b| b.0).sum();
    let (mut tp, mut fp) = (0u64, 0u64);
    let mut ap = 0.0;
    for (p, n) in blocks {
        tp += p;
        fp += n;
        if p > 0 {
            ap += (p as f64 / total_pos as f64) * (tp as f64 / (tp + fp) as f64);
        }
    }
    Ok(ap)
}

/// Area under the ROC curve over `(score, is_positive)` pairs.
///
/// Computed from integer pair counts, so the result is exactly
/// `(wins + ties / 2) / (P N)` rounded once.
pub fn roc_auc(examples: &[(f64, bool)]) -> Result<f64> {
    let blocks = tie_blocks(examples)?;
    let total_pos: u64 = blocks.iter().map(|b| b.0).sum();
    let total_neg: u64 = blocks.iter().map(|b| b.1).sum();
    // walk from the lowest block up, counting negatives strictly below
    let mut neg_below = 0u128;
    let mut twice_wins = 0u128;
    for &(p, n) in blocks.iter().rev() {
        twice_wins += 2 * u128::from(p) * neg_below + u128::from(p) * u128::from(n);
        neg_below += u128::from(n);
    }
    Ok(twice_wins as f64 / (2 * u128::from(total_pos) * u128::from(total_neg)) as f64)
}

/// `(recall, precision)` after each tie block, highest scores first.
pub fn pr_curve(examples: &[(f64, bool)]) -> Result<Vec<(f64, f64)>> {
    let blocks = tie_blocks(examples)?;
    let total_pos: u64 = blocks.iter().map(|b| b.0).sum();
    let (mut tp, mut fp) = (0u64, 0u64);
    Ok(blocks
        .into_iter()
        .map(|(p, n)| {
            tp += p;
            fp += n;
            (tp as f64 / total_pos as f64, tp as f64 / (tp + fp) as f64)
        })
        .collect())
}

/// `(false positive rate, true positive rate)` starting at the origin.
pub fn roc_curve(examples: &[(f64, bool)]) -> Result<Vec<(f64, f64)>> {
    let blocks = tie_blocks(examples)?;
    let total_pos: u64 = blocks.iter().map(|b| b.0).sum();
    let total_neg: u64 = blocks.iter().map(|b| b.1).sum();
    let (mut tp, mut fp) = (0u64, 0u64);
    let mut out = vec![(0.0, 0.0)];
    for (p, n) in blocks {
        tp += p;
        fp += n;
        out.push((fp as f64 / total_neg as f64, tp as f64 / total_pos as f64));
    }
    Ok(out)
}
