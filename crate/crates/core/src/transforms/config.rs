use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which color-free image replaces the original pixels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColorMode {
    #[default]
    Grayscale,
    Sketch,
}

impl std::str::FromStr for ColorMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "grayscale" | "gray" => Ok(ColorMode::Grayscale),
            "sketch" => Ok(ColorMode::Sketch),
            other => Err(Error::InvalidConfig(format!("unknown mode {other:?}"))),
        }
    }
}

/// Knobs for the global and local color dropout transforms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AugmentConfig {
    /// Probability of the global (whole-image) transform.
    pub p: f64,
    /// Probability of the local (rectangle) transform.
    pub p_r: f64,
    /// Rectangle area as a fraction of the image area, lower bound.
    pub s_l: f64,
    /// Rectangle area fraction, upper bound.
    pub s_h: f64,
    /// Height/width aspect ratio range of the rectangle.
    pub r_1: f64,
    pub r_2: f64,
    pub mode: ColorMode,
    /// Global first, local only when the global pass did not fire.
    /// When false the two passes are chained independently.
    pub combine: bool,
    /// Rectangle placement attempts before the local pass gives up.
    pub retry_cap: u32,
    pub seed: u64,
}

pub const DEFAULT_P: f64 = 0.05;
pub const DEFAULT_P_R: f64 = 0.4;
pub const DEFAULT_S_L: f64 = 0.02;
pub const DEFAULT_S_H: f64 = 0.4;
pub const DEFAULT_R_1: f64 = 0.3;
pub const DEFAULT_R_2: f64 = 1.0 / 0.3;
pub const DEFAULT_RETRY_CAP: u32 = 100;

impl Default for AugmentConfig {
    fn default() -> Self {
        Self {
            p: DEFAULT_P,
            p_r: DEFAULT_P_R,
            s_l: DEFAULT_S_L,
            s_h: DEFAULT_S_H,
            r_1: DEFAULT_R_1,
            r_2: DEFAULT_R_2,
            mode: ColorMode::Grayscale,
            combine: true,
            retry_cap: DEFAULT_RETRY_CAP,
            seed: 0,
        }
    }
}

impl AugmentConfig {
    /// 5% global and 70% local sketch replacement.
    pub fn sketch_preset() -> Self {
        Self {
            p: 0.05,
            p_r: 0.7,
            mode: ColorMode::Sketch,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        for (name, v) in [("p", self.p), ("p_r", self.p_r)] {
            if !(0.0..=1.0).contains(&v) {
                return bad(format!("{name} = {v} must lie in [0, 1]"));
            }
        }
        if !(self.s_l > 0.0 && self.s_l <= self.s_h && self.s_h < 1.0) {
            return bad(format!(
                "need 0 < s_l <= s_h < 1, got s_l = {}, s_h = {}",
                self.s_l, self.s_h
            ));
        }
        if !(self.r_1 > 0.0 && self.r_1 <= self.r_2 && self.r_2.is_finite()) {
            return bad(format!(
                "need 0 < r_1 <= r_2, got r_1 = {}, r_2 = {}",
                self.r_1, self.r_2
            ));
        }
        if self.retry_cap == 0 {
            return bad("retry_cap must be >= 1".into());
        }
        Ok(())
    }
}
