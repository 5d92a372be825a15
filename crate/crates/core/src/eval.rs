//! CMC and mAP over query/gallery feature sets.
//!
//! The gallery is ranked by ascending Euclidean distance (ties by gallery
//! index). Gallery entries with a distractor label (< 1) are junk and
//! removed from every ranking; with the camera filter on, entries sharing
//! both identity and camera with the query are removed as well. A query
//! with no remaining positive is skipped.

use rayon::prelude::*;
use serde::Serialize;

use crate::dataset::is_distractor;
use crate::error::{Error, Result};
use crate::features::FeatureRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalOptions {
    pub max_rank: usize,
    pub cam_filter: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            max_rank: 50,
            cam_filter: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RetrievalResult {
    pub map: f64,
    /// `cmc[k - 1]` is the fraction of valid queries matched within the top k.
    pub cmc: Vec<f64>,
    pub valid_queries: usize,
    /// Per query, `None` when the query was skipped.
    #[serde(skip)]
    pub average_precisions: Vec<Option<f64>>,
}

struct QueryScore {
    ap: f64,
    /// Zero-based rank of the first positive in the filtered list.
    first_hit: usize,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn score_query(query: &FeatureRecord, gallery: &[FeatureRecord], cam_filter: bool) -> Option<QueryScore> {
    // squared distance gives the same order as the distance itself
    let mut order: Vec<(f64, usize)> = gallery
        .iter()
        .enumerate()
        .map(|(i, g)| (sq_dist(&query.feature, &g.feature), i))
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut rank = 0usize;
    let mut hits = 0usize;
    let mut precision_sum = 0.0;
    let mut first_hit = None;
    for &(_, i) in &order {
        let g = &gallery[i];
        if is_distractor(g.identity) {
            continue;
        }
        let same_id = g.identity == query.identity;
        if cam_filter && same_id && g.camera == query.camera {
            continue;
        }
        rank += 1;
        if same_id {
            hits += 1;
            precision_sum += hits as f64 / rank as f64;
            first_hit.get_or_insert(rank - 1);
        }
    }
    first_hit.map(|first_hit| QueryScore {
        ap: precision_sum / hits as f64,
        first_hit,
    })
}

pub fn evaluate(queries: &[FeatureRecord], gallery: &[FeatureRecord], opts: &EvalOptions) -> Result<RetrievalResult> {
    if opts.max_rank == 0 {
        return Err(Error::InvalidConfig("max_rank must be >= 1".into()));
    }
    let dims = queries
        .first()
        .or(gallery.first())
        .map_or(0, |r| r.feature.len());
    if let Some(bad) = queries.iter().chain(gallery).find(|r| r.feature.len() != dims) {
        return Err(Error::DimensionMismatch {
            expected: dims,
            actual: bad.feature.len(),
        });
    }

    let scores: Vec<Option<QueryScore>> = queries
        .par_iter()
        .map(|q| score_query(q, gallery, opts.cam_filter))
        .collect();

    let ranks = opts.max_rank.min(gallery.len());
    let mut cmc_hits = vec![0usize; ranks];
    let mut ap_sum = 0.0;
    let mut valid = 0usize;
    for s in scores.iter().flatten() {
        valid += 1;
        ap_sum += s.ap;
        for slot in cmc_hits.iter_mut().skip(s.first_hit) {
            *slot += 1;
        }
    }
    if valid == 0 {
        return Err(Error::NoValidQueries);
    }
    Ok(RetrievalResult {
        map: ap_sum / valid as f64,
        cmc: cmc_hits.iter().map(|&h| h as f64 / valid as f64).collect(),
        valid_queries: valid,
        average_precisions: scores.iter().map(|s| s.as_ref().map(|s| s.ap)).collect(),
    })
}
