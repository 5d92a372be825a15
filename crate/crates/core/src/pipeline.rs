//! Corpus-level driving of the transforms: per-image augmentation with
//! output manifests, and empirical firing-rate statistics.

use std::collections::HashSet;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::Manifest;
use crate::error::{Error, Result};
use crate::imgcore::{load_image, save_image, ImageBuffer, RectRegion, RngStream};
use crate::transforms::{augment, augment_in_batch, ggt, lgt, AugmentConfig, TransformKind};

/// Stream ids at or above this value carry per-batch decisions; per-image
/// streams use the corpus index.
pub const BATCH_STREAM_BASE: u64 = 1 << 63;

/// One line of the output manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AugmentRecord {
    /// Output file name, relative to the output directory.
    pub path: String,
    pub source: String,
    pub identity: i64,
    pub camera: i64,
    pub applied: bool,
    pub kind: TransformKind,
    pub region: Option<RectRegion>,
    pub seed: u64,
    pub stream: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusOptions {
    pub out_dir: PathBuf,
    /// `Some(n)`: one global decision per consecutive group of `n` images.
    pub per_batch: Option<usize>,
}

fn output_name(source: &str) -> String {
    let stem = Path::new(source)
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("image");
    format!("{stem}.png")
}

/// Augments every record of `manifest` into `opts.out_dir` as PNG. Image
/// `i` uses stream `i` of `cfg.seed`, so the result does not depend on the
/// thread count. Records come back in manifest order.
pub fn augment_corpus(manifest: &Manifest, cfg: &AugmentConfig, opts: &CorpusOptions) -> Result<Vec<AugmentRecord>> {
    cfg.validate()?;
    if opts.per_batch == Some(0) {
        return Err(Error::InvalidConfig("batch size must be >= 1".into()));
    }
    let names: Vec<String> = manifest.records().iter().map(|r| output_name(&r.path)).collect();
    let mut seen = HashSet::new();
    for (name, r) in names.iter().zip(manifest.records()) {
        if !seen.insert(name) {
            return Err(Error::DuplicatePath(format!("{} -> {name}", r.path)));
        }
    }

    let batch_fires: Vec<bool> = match opts.per_batch {
        Some(size) => (0..manifest.len().div_ceil(size))
            .map(|b| RngStream::with_stream(cfg.seed, BATCH_STREAM_BASE + b as u64).chance(cfg.p))
            .collect(),
        None => Vec::new(),
    };

    manifest
        .records()
        .par_iter()
        .zip(names.par_iter())
        .map(|(rec, name)| {
            let img = load_image(&rec.path)?;
            let stream = rec.index as u64;
            let mut rng = RngStream::with_stream(cfg.seed, stream);
            let outcome = match opts.per_batch {
                Some(size) => augment_in_batch(&img, cfg, &mut rng, batch_fires[rec.index / size]),
                None => augment(&img, cfg, &mut rng),
            };
            let out_path = opts.out_dir.join(name);
            save_image(&outcome.image, &out_path)?;
            Ok(AugmentRecord {
                path: name.clone(),
                source: rec.path.clone(),
                identity: rec.identity,
                camera: rec.camera,
                applied: outcome.applied,
                kind: outcome.kind,
                region: outcome.region,
                seed: cfg.seed,
                stream,
            })
        })
        .collect()
}

pub fn write_augment_manifest<W: Write>(records: &[AugmentRecord], mut writer: W) -> Result<()> {
    for r in records {
        let line = serde_json::to_string(r).map_err(|e| Error::io("<manifest>", e.into()))?;
        writeln!(writer, "{line}").map_err(|e| Error::io("<manifest>", e))?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiringRate {
    pub transform: &'static str,
    pub configured_p: f64,
    pub empirical_p: f64,
    pub trials: usize,
    /// Half-width of the normal-approximation 95% interval around `configured_p`.
    pub ci95: f64,
}

impl FiringRate {
    pub fn within_ci(&self) -> bool {
        (self.empirical_p - self.configured_p).abs() <= self.ci95
    }
}

pub const STATS_CSV_HEADER: &str = "transform,configured_p,empirical_p,trials,ci95";

/// Runs each transform `trials` times, trial `t` on `images[t % len]` with
/// stream `t`, and reports how often it fired. `rcd` is the combined
/// transform with configured rate `p + (1 - p) p_r`.
pub fn firing_rates(images: &[ImageBuffer], cfg: &AugmentConfig, trials: usize) -> Result<Vec<FiringRate>> {
    cfg.validate()?;
    if trials == 0 {
        return Ok(Vec::new());
    }
    if images.is_empty() {
        return Err(Error::InvalidConfig("no images to run statistics on".into()));
    }
    type Op = fn(&ImageBuffer, &AugmentConfig, &mut RngStream) -> crate::transforms::TransformOutcome;
    let ops: [(&'static str, f64, Op); 3] = [
        ("ggt", cfg.p, ggt),
        ("lgt", cfg.p_r, lgt),
        ("rcd", cfg.p + (1.0 - cfg.p) * cfg.p_r, crate::transforms::rcd),
    ];
    Ok(ops
        .iter()
        .map(|&(name, configured, op)| {
            let fired = (0..trials)
                .into_par_iter()
                .filter(|&t| {
                    let mut rng = RngStream::with_stream(cfg.seed, t as u64);
                    op(&images[t % images.len()], cfg, &mut rng).applied
                })
                .count();
            FiringRate {
                transform: name,
                configured_p: configured,
                empirical_p: fired as f64 / trials as f64,
                trials,
                ci95: 1.96 * (configured * (1.0 - configured) / trials as f64).sqrt(),
            }
        })
        .collect())
}

pub fn write_stats_csv<W: Write>(rows: &[FiringRate], mut writer: W) -> Result<()> {
    let io = |e| Error::io("<stats>", e);
    writeln!(writer, "{STATS_CSV_HEADER}").map_err(io)?;
    for r in rows {
        writeln!(
            writer,
            "{},{},{},{},{}",
            r.transform, r.configured_p, r.empirical_p, r.trials, r.ci95
        )
        .map_err(io)?;
    }
    Ok(())
}
