//! Batch-hard triplet loss, identity (cross-entropy) loss and their sum,
//! computed over externally supplied features and class probabilities.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::features::{check_probs, FeatureRecord};

pub const DEFAULT_MARGIN: f64 = 0.3;
/// Probabilities are clamped to this floor before taking the log.
pub const PROB_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TripletSelection {
    pub anchor: usize,
    pub positive: usize,
    pub negative: usize,
    pub d_pos: f64,
    pub d_neg: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LossBreakdown {
    pub triplet: f64,
    pub id: f64,
    pub total: f64,
}

/// Euclidean distance.
pub fn pairwise_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    Ok(euclidean(a, b))
}

#[inline]
fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn check_dimensions(batch: &[FeatureRecord]) -> Result<usize> {
    let dims = batch.first().map_or(0, |r| r.feature.len());
    for r in batch {
        if r.feature.len() != dims {
            return Err(Error::DimensionMismatch {
                expected: dims,
                actual: r.feature.len(),
            });
        }
    }
    Ok(dims)
}

/// For every anchor picks the farthest same-label sample and the nearest
/// different-label sample. Ties go to the smallest index.
pub fn mine_hard_triplets(batch: &[FeatureRecord]) -> Result<Vec<TripletSelection>> {
    check_dimensions(batch)?;
    let mut counts: HashMap<i64, usize> = HashMap::new();
    for r in batch {
        *counts.entry(r.identity).or_default() += 1;
    }
    if counts.len() < 2 {
        return Err(Error::DegenerateBatch(format!(
            "need at least 2 identities, found {}",
            counts.len()
        )));
    }
    if let Some((id, _)) = counts.iter().find(|(_, &c)| c < 2) {
        return Err(Error::DegenerateBatch(format!(
            "identity {id} has a single record"
        )));
    }

    let n = batch.len();
    let mut dist = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let d = euclidean(&batch[i].feature, &batch[j].feature);
            dist[i * n + j] = d;
            dist[j * n + i] = d;
        }
    }

    let selections = (0..n)
        .map(|i| {
            let row = &dist[i * n..(i + 1) * n];
            let mut pos: Option<(usize, f64)> = None;
            let mut neg: Option<(usize, f64)> = None;
            for (j, &d) in row.iter().enumerate() {
                if j == i {
                    continue;
                }
                if batch[j].identity == batch[i].identity {
                    if pos.is_none_or(|(_, best)| d > best) {
                        pos = Some((j, d));
                    }
                } else if neg.is_none_or(|(_, best)| d < best) {
                    neg = Some((j, d));
                }
            }
            let (positive, d_pos) = pos.expect("every identity has >= 2 records");
            let (negative, d_neg) = neg.expect("batch has >= 2 identities");
            TripletSelection {
                anchor: i,
                positive,
                negative,
                d_pos,
                d_neg,
            }
        })
        .collect();
    Ok(selections)
}

fn check_margin(margin: f64) -> Result<()> {
    if margin >= 0.0 && margin.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!("margin {margin} must be >= 0")))
    }
}

/// Mean hinge `max(0, margin + d_pos - d_neg)`. Empty input gives 0.
pub fn triplet_loss(selections: &[TripletSelection], margin: f64) -> Result<f64> {
    check_margin(margin)?;
    Ok(mean(selections.iter().map(|s| (margin + s.d_pos - s.d_neg).max(0.0))))
}

/// The unhinged `margin + d_pos + d_neg` average, for comparison runs only.
/// It grows with the negative distance and is not a usable training signal.
pub fn triplet_loss_literal(selections: &[TripletSelection], margin: f64) -> Result<f64> {
    check_margin(margin)?;
    Ok(mean(selections.iter().map(|s| margin + s.d_pos + s.d_neg)))
}

fn mean(values: impl ExactSizeIterator<Item = f64>) -> f64 {
    let n = values.len();
    if n == 0 {
        0.0
    } else {
        values.sum::<f64>() / n as f64
    }
}

/// Mean negative natural log of each record's true-class probability.
pub fn id_loss(batch: &[FeatureRecord]) -> Result<f64> {
    let mut terms = Vec::with_capacity(batch.len());
    for (index, r) in batch.iter().enumerate() {
        let probs = r.probs.as_ref().ok_or(Error::MissingProbs(index))?;
        check_probs(probs).map_err(|message| Error::InvalidProbs { index, message })?;
        let label = usize::try_from(r.identity)
            .ok()
            .filter(|&l| l < probs.len())
            .ok_or(Error::LabelOutOfRange {
                index,
                label: r.identity,
                classes: probs.len(),
            })?;
        terms.push(-probs[label].max(PROB_FLOOR).ln());
    }
    Ok(mean(terms.into_iter()))
}

/// Hard-mined triplet loss plus ID loss.
pub fn total_loss(batch: &[FeatureRecord], margin: f64) -> Result<LossBreakdown> {
    let triplet = triplet_loss(&mine_hard_triplets(batch)?, margin)?;
    let id = id_loss(batch)?;
    Ok(LossBreakdown {
        triplet,
        id,
        total: triplet + id,
    })
}
