//! Random color dropout: global and local replacement of color pixels by a
//! grayscale or sketch rendering of the same image.

mod color;
mod config;

pub use color::{luma, to_grayscale, to_sketch};
pub use config::{
    AugmentConfig, ColorMode, DEFAULT_P, DEFAULT_P_R, DEFAULT_RETRY_CAP, DEFAULT_R_1,
    DEFAULT_R_2, DEFAULT_S_H, DEFAULT_S_L,
};

use serde::{Deserialize, Serialize};

use crate::imgcore::{ImageBuffer, RectRegion, RngStream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TransformKind {
    #[serde(rename = "none")]
    None,
    #[serde(rename = "global")]
    Global,
    #[serde(rename = "local")]
    Local,
    #[serde(rename = "global+local")]
    GlobalLocal,
}

impl TransformKind {
    pub fn includes_global(self) -> bool {
        matches!(self, TransformKind::Global | TransformKind::GlobalLocal)
    }

    pub fn includes_local(self) -> bool {
        matches!(self, TransformKind::Local | TransformKind::GlobalLocal)
    }

    fn from_parts(global: bool, local: bool) -> Self {
        match (global, local) {
            (false, false) => TransformKind::None,
            (true, false) => TransformKind::Global,
            (false, true) => TransformKind::Local,
            (true, true) => TransformKind::GlobalLocal,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformOutcome {
    pub image: ImageBuffer,
    pub applied: bool,
    /// Set iff a local transform fired.
    pub region: Option<RectRegion>,
    pub kind: TransformKind,
}

impl TransformOutcome {
    fn unchanged(img: &ImageBuffer) -> Self {
        Self {
            image: img.clone(),
            applied: false,
            region: None,
            kind: TransformKind::None,
        }
    }
}

/// Whole-image conversion for the configured mode.
pub fn convert(img: &ImageBuffer, mode: ColorMode) -> ImageBuffer {
    match mode {
        ColorMode::Grayscale => to_grayscale(img),
        ColorMode::Sketch => to_sketch(img),
    }
}

/// Global transform: with probability `cfg.p` the whole image is converted.
pub fn ggt(img: &ImageBuffer, cfg: &AugmentConfig, rng: &mut RngStream) -> TransformOutcome {
    let fire = rng.chance(cfg.p);
    global_with_decision(img, cfg, fire)
}

/// Global transform with the firing decision made by the caller, e.g. once
/// per batch.
pub fn global_with_decision(img: &ImageBuffer, cfg: &AugmentConfig, fire: bool) -> TransformOutcome {
    if !fire {
        return TransformOutcome::unchanged(img);
    }
    TransformOutcome {
        image: convert(img, cfg.mode),
        applied: true,
        region: None,
        kind: TransformKind::Global,
    }
}

/// Rejection-samples a rectangle whose area fraction is drawn from
/// `[s_l, s_h)` and height/width ratio from `[r_1, r_2)`. Side lengths are
/// rounded to the nearest pixel (minimum 1) and the top-left corner is an
/// integer in `[0, w) x [0, h)`. Returns `None` after `retry_cap` misses.
pub fn sample_rect(w: u32, h: u32, cfg: &AugmentConfig, rng: &mut RngStream) -> Option<RectRegion> {
    assert!(w >= 1 && h >= 1);
    let area = w as f64 * h as f64;
    for _ in 0..cfg.retry_cap {
        let target = rng.uniform_closed(cfg.s_l, cfg.s_h) * area;
        let ratio = rng.uniform_closed(cfg.r_1, cfg.r_2);
        let rect_h = (target * ratio).sqrt().round().max(1.0);
        let rect_w = (target / ratio).sqrt().round().max(1.0);
        let x = rng.below(w);
        let y = rng.below(h);
        if x as f64 + rect_w <= w as f64 && y as f64 + rect_h <= h as f64 {
            return Some(RectRegion::new(x, y, rect_w as u32, rect_h as u32));
        }
    }
    None
}

/// Local transform: with probability `cfg.p_r` a random rectangle is
/// replaced by the converted image's pixels. Sampler exhaustion leaves the
/// image unchanged.
pub fn lgt(img: &ImageBuffer, cfg: &AugmentConfig, rng: &mut RngStream) -> TransformOutcome {
    if !rng.chance(cfg.p_r) {
        return TransformOutcome::unchanged(img);
    }
    let Some(region) = sample_rect(img.width(), img.height(), cfg, rng) else {
        return TransformOutcome::unchanged(img);
    };
    let mut out = img.clone();
    match cfg.mode {
        // luma is per-pixel, only the region needs converting
        ColorMode::Grayscale => out.map_region(region, color::gray_pixel),
        ColorMode::Sketch => out.copy_region_from(&to_sketch(img), region),
    }
    TransformOutcome {
        image: out,
        applied: true,
        region: Some(region),
        kind: TransformKind::Local,
    }
}

/// Global pass first; the local pass runs on the original only when the
/// global one did not fire.
pub fn rcd(img: &ImageBuffer, cfg: &AugmentConfig, rng: &mut RngStream) -> TransformOutcome {
    let global = ggt(img, cfg, rng);
    if global.applied {
        global
    } else {
        lgt(img, cfg, rng)
    }
}

/// Global then local, each with its own independent draw. Both may fire.
pub fn chained(img: &ImageBuffer, cfg: &AugmentConfig, rng: &mut RngStream) -> TransformOutcome {
    let global = ggt(img, cfg, rng);
    chain_local(global, cfg, rng)
}

fn chain_local(global: TransformOutcome, cfg: &AugmentConfig, rng: &mut RngStream) -> TransformOutcome {
    let local = lgt(&global.image, cfg, rng);
    TransformOutcome {
        applied: global.applied || local.applied,
        kind: TransformKind::from_parts(global.applied, local.applied),
        region: local.region,
        image: local.image,
    }
}

/// Entry point used by the corpus pipeline: `rcd` when `cfg.combine`,
/// otherwise [`chained`].
pub fn augment(img: &ImageBuffer, cfg: &AugmentConfig, rng: &mut RngStream) -> TransformOutcome {
    if cfg.combine {
        rcd(img, cfg, rng)
    } else {
        chained(img, cfg, rng)
    }
}

/// Like [`augment`], but the global decision was already drawn for the
/// whole batch. The per-image stream only drives the local pass.
pub fn augment_in_batch(
    img: &ImageBuffer,
    cfg: &AugmentConfig,
    rng: &mut RngStream,
    batch_global: bool,
) -> TransformOutcome {
    let global = global_with_decision(img, cfg, batch_global);
    if cfg.combine {
        if global.applied {
            global
        } else {
            lgt(img, cfg, rng)
        }
    } else {
        chain_local(global, cfg, rng)
    }
}

#[cfg(test)]
mod tests;
