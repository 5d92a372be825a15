//! Straightforward reference implementations used to check the library.
//! Each one is written for clarity, not speed, and shares no code with the
//! crate under test.

#![allow(dead_code)]

use rcd_core::features::FeatureRecord;
use rcd_core::RngStream;

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..a.len() {
        let d = a[i] - b[i];
        s += d * d;
    }
    s.sqrt()
}

/// (anchor, positive, negative) for every anchor, by enumerating every
/// candidate triplet and keeping the first one found with the largest
/// positive distance and, among those, the smallest negative distance.
pub fn brute_force_mining(batch: &[FeatureRecord]) -> Vec<(usize, usize, usize)> {
    let n = batch.len();
    let mut out = Vec::new();
    for a in 0..n {
        let mut best: Option<(usize, usize, f64, f64)> = None;
        for p in 0..n {
            if p == a || batch[p].identity != batch[a].identity {
                continue;
            }
            for q in 0..n {
                if batch[q].identity == batch[a].identity {
                    continue;
                }
                let dp = dist(&batch[a].feature, &batch[p].feature);
                let dn = dist(&batch[a].feature, &batch[q].feature);
                let better = match best {
                    None => true,
                    Some((_, _, bp, bn)) => dp > bp || (dp == bp && dn < bn),
                };
                if better {
                    best = Some((p, q, dp, dn));
                }
            }
        }
        let (p, q, _, _) = best.expect("every anchor has a positive and a negative");
        out.push((a, p, q));
    }
    out
}

/// Mean hinge over anchors, hardest positive and negative found by scan.
pub fn triplet_oracle(batch: &[FeatureRecord], margin: f64) -> f64 {
    let n = batch.len();
    let mut total = 0.0;
    for a in 0..n {
        let mut far = f64::NEG_INFINITY;
        let mut near = f64::INFINITY;
        for j in 0..n {
            let d = dist(&batch[a].feature, &batch[j].feature);
            if batch[j].identity == batch[a].identity {
                if j != a && d > far {
                    far = d;
                }
            } else if d < near {
                near = d;
            }
        }
        let v = margin + far - near;
        total += if v > 0.0 { v } else { 0.0 };
    }
    total / n as f64
}

pub fn id_oracle(batch: &[FeatureRecord]) -> f64 {
    let mut total = 0.0;
    for r in batch {
        let p = r.probs.as_ref().unwrap()[r.identity as usize];
        total -= if p < 1e-12 { 1e-12f64 } else { p }.ln();
    }
    total / batch.len() as f64
}

pub struct EvalOracle {
    pub map: f64,
    pub cmc: Vec<f64>,
    pub valid: usize,
}

/// Quadratic-time retrieval metrics: each kept gallery item's rank is the
/// number of kept items ordered before it.
pub fn eval_oracle(
    queries: &[FeatureRecord],
    gallery: &[FeatureRecord],
    max_rank: usize,
    cam_filter: bool,
) -> Option<EvalOracle> {
    let cmc_len = max_rank.min(gallery.len());
    let mut cmc = vec![0.0; cmc_len];
    let mut ap_total = 0.0;
    let mut valid = 0;
    for q in queries {
        let kept: Vec<usize> = (0..gallery.len())
            .filter(|&i| {
                let g = &gallery[i];
                g.identity >= 1 && !(cam_filter && g.identity == q.identity && g.camera == q.camera)
            })
            .collect();
        let d: Vec<f64> = gallery.iter().map(|g| dist(&q.feature, &g.feature)).collect();
        let rank_of = |i: usize| -> usize {
            1 + kept
                .iter()
                .filter(|&&j| d[j] < d[i] || (d[j] == d[i] && j < i))
                .count()
        };
        let mut pos_ranks: Vec<usize> = kept
            .iter()
            .filter(|&&i| gallery[i].identity == q.identity)
            .map(|&i| rank_of(i))
            .collect();
        if pos_ranks.is_empty() {
            continue;
        }
        pos_ranks.sort();
        valid += 1;
        let mut ap = 0.0;
        for (k, &r) in pos_ranks.iter().enumerate() {
            ap += (k + 1) as f64 / r as f64;
        }
        ap_total += ap / pos_ranks.len() as f64;
        for (k, slot) in cmc.iter_mut().enumerate() {
            if pos_ranks[0] <= k + 1 {
                *slot += 1.0;
            }
        }
    }
    if valid == 0 {
        return None;
    }
    Some(EvalOracle {
        map: ap_total / valid as f64,
        cmc: cmc.iter().map(|c| c / valid as f64).collect(),
        valid,
    })
}

/// Majority-vote error by counting agreeing and disagreeing votes.
pub fn vote_count_error(votes: &[Vec<i8>], expected: &[i8]) -> f64 {
    let mut errors = 0.0;
    for j in 0..expected.len() {
        let agree = votes.iter().filter(|v| v[j] == expected[j]).count();
        let disagree = votes.len() - agree;
        if disagree > agree {
            errors += 1.0;
        } else if disagree == agree {
            errors += 0.5;
        }
    }
    errors / expected.len() as f64
}

pub fn component_error_oracle(row: &[i8], expected: &[i8]) -> f64 {
    let wrong = row.iter().zip(expected).filter(|(a, b)| a != b).count();
    wrong as f64 / expected.len() as f64
}

pub fn random_votes(rng: &mut RngStream, n: usize, m: usize) -> (Vec<Vec<i8>>, Vec<i8>) {
    let pm = |rng: &mut RngStream| if rng.below(2) == 0 { -1i8 } else { 1 };
    let expected = (0..m).map(|_| pm(rng)).collect();
    let votes = (0..n).map(|_| (0..m).map(|_| pm(rng)).collect()).collect();
    (votes, expected)
}

/// K identities with M samples each, features on a coarse grid so that
/// distance ties actually happen.
pub fn random_batch(rng: &mut RngStream, k: usize, m: usize, dims: usize) -> Vec<FeatureRecord> {
    let mut out = Vec::with_capacity(k * m);
    for id in 0..k {
        for _ in 0..m {
            let f = (0..dims).map(|_| rng.below(5) as f64 * 0.5 - 1.0).collect();
            out.push(FeatureRecord::new(id as i64, f));
        }
    }
    // interleave identities
    let mut idx: Vec<usize> = (0..out.len()).collect();
    for i in (1..idx.len()).rev() {
        idx.swap(i, rng.below_usize(i + 1));
    }
    idx.into_iter().map(|i| out[i].clone()).collect()
}

/// Adds softmax-like class probabilities over `classes` classes.
pub fn with_random_probs(rng: &mut RngStream, batch: Vec<FeatureRecord>, classes: usize) -> Vec<FeatureRecord> {
    batch
        .into_iter()
        .map(|r| {
            let raw: Vec<f64> = (0..classes).map(|_| rng.unit() + 1e-3).collect();
            let s: f64 = raw.iter().sum();
            r.with_probs(raw.iter().map(|x| x / s).collect())
        })
        .collect()
}

/// Query/gallery split with identities in 1..=ids, a few junk entries and
/// `cams` cameras.
pub fn random_split(
    rng: &mut RngStream,
    queries: usize,
    gallery: usize,
    ids: u32,
    cams: u32,
    dims: usize,
) -> (Vec<FeatureRecord>, Vec<FeatureRecord>) {
    let make = |rng: &mut RngStream, junk: bool| {
        let id = if junk && rng.below(10) == 0 {
            rng.below(2) as i64 - 1
        } else {
            rng.below(ids) as i64 + 1
        };
        let f = (0..dims).map(|_| rng.below(7) as f64 * 0.25).collect();
        FeatureRecord::new(id, f).with_camera(rng.below(cams) as i64 + 1)
    };
    let q = (0..queries).map(|_| make(rng, false)).collect();
    let g = (0..gallery).map(|_| make(rng, true)).collect();
    (q, g)
}
