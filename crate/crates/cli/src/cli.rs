use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rcd_core::transforms::{
    AugmentConfig, ColorMode, DEFAULT_RETRY_CAP, DEFAULT_R_1, DEFAULT_R_2, DEFAULT_S_H, DEFAULT_S_L,
};

#[derive(Debug, Parser)]
#[command(name = "rcd", version, about = "Random color dropout augmentation and metric-learning tooling")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Apply global/local color dropout to a corpus and write an output manifest.
    Augment(AugmentArgs),
    /// Draw identity-balanced PK batches from a manifest (JSON lines on stdout).
    Batch(BatchArgs),
    /// Hard-mined triplet loss, ID loss and their sum for a feature CSV.
    Loss(LossArgs),
    /// CMC and mAP for query/gallery feature CSVs.
    Eval(EvalArgs),
    /// Majority-vote analysis of a vote-matrix file, optionally with one component swapped.
    Ensemble(EnsembleArgs),
    /// Monte-Carlo table of how often swapping in a deviated component helps.
    Sweep(SweepArgs),
    /// Empirical firing rates of the transforms under a configuration.
    Stats(StatsArgs),
}

#[derive(Debug, Clone, Args)]
pub struct TransformArgs {
    /// Color-free intermediary: grayscale or sketch [default: grayscale]
    #[arg(long, value_parser = ["grayscale", "sketch"])]
    pub mode: Option<String>,
    /// Global transform probability; 0.05 gave the best retrieval accuracy in a probability sweep [default: 0.05]
    #[arg(long)]
    pub p: Option<f64>,
    /// Local transform probability; 0.4 gave the best retrieval accuracy in a probability sweep [default: 0.4]
    #[arg(long = "pr")]
    pub p_r: Option<f64>,
    /// Minimum rectangle area as a fraction of the image.
    #[arg(long = "sl", default_value_t = DEFAULT_S_L)]
    pub s_l: f64,
    /// Maximum rectangle area as a fraction of the image.
    #[arg(long = "sh", default_value_t = DEFAULT_S_H)]
    pub s_h: f64,
    /// Minimum rectangle height/width ratio.
    #[arg(long = "r1", default_value_t = DEFAULT_R_1)]
    pub r_1: f64,
    /// Maximum rectangle height/width ratio.
    #[arg(long = "r2", default_value_t = DEFAULT_R_2)]
    pub r_2: f64,
    /// Rectangle placement attempts before the local transform gives up.
    #[arg(long, default_value_t = DEFAULT_RETRY_CAP)]
    pub retry_cap: u32,
    /// Global first, local only if global did not fire; `false` chains them independently.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    pub combine: bool,
    /// Sketch preset: 5% global, 70% local, sketch mode. Explicit --p/--pr/--mode override it.
    #[arg(long)]
    pub sketch_preset: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl TransformArgs {
    pub fn config(&self) -> AugmentConfig {
        let base = if self.sketch_preset {
            AugmentConfig::sketch_preset()
        } else {
            AugmentConfig::default()
        };
        let mode: ColorMode = match &self.mode {
            Some(m) => m.parse().expect("restricted by clap"),
            None => base.mode,
        };
        AugmentConfig {
            p: self.p.unwrap_or(base.p),
            p_r: self.p_r.unwrap_or(base.p_r),
            s_l: self.s_l,
            s_h: self.s_h,
            r_1: self.r_1,
            r_2: self.r_2,
            mode,
            combine: self.combine,
            retry_cap: self.retry_cap,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Args)]
pub struct AugmentArgs {
    /// Directory of Market1501-named images (`<pid>_c<cam>...`).
    #[arg(long, conflicts_with = "manifest", required_unless_present = "manifest")]
    pub input_dir: Option<PathBuf>,
    /// JSON-lines manifest of input images.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Draw the global decision once per batch of `--batch-size` consecutive images.
    #[arg(long)]
    pub per_batch: bool,
    #[arg(long, default_value_t = 64)]
    pub batch_size: usize,
    #[command(flatten)]
    pub transform: TransformArgs,
}

#[derive(Debug, Args)]
pub struct BatchArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// Identities per batch.
    #[arg(short = 'k', long, default_value_t = 4)]
    pub k: usize,
    /// Images per identity.
    #[arg(short = 'm', long, default_value_t = 4)]
    pub m: usize,
    /// Number of batches to draw.
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct LossArgs {
    /// Feature CSV (`identity,camera,path,f0..[,p0..]`).
    #[arg(long)]
    pub features: PathBuf,
    #[arg(long, default_value_t = rcd_core::losses::DEFAULT_MARGIN)]
    pub margin: f64,
    /// Also report the unhinged `margin + d_pos + d_neg` variant.
    #[arg(long)]
    pub paper_literal: bool,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub query: PathBuf,
    #[arg(long)]
    pub gallery: PathBuf,
    #[arg(long, default_value_t = 50)]
    pub max_rank: usize,
    /// Keep gallery entries that share identity and camera with the query.
    #[arg(long)]
    pub no_cam_filter: bool,
}

#[derive(Debug, Args)]
pub struct EnsembleArgs {
    /// Vote file: expected outputs on line 1, one component per following line.
    #[arg(long)]
    pub votes: PathBuf,
    /// Component index to replace.
    #[arg(long, requires = "with")]
    pub swap: Option<usize>,
    /// Replacement votes, space separated (e.g. "1 -1 1").
    #[arg(long, requires = "swap", allow_hyphen_values = true)]
    pub with: Option<String>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Component counts, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [3usize, 5, 7])]
    pub components: Vec<usize>,
    /// Instances per trial.
    #[arg(long, default_value_t = 10)]
    pub instances: usize,
    /// Error rates of the original components.
    #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.2, 0.3, 0.4])]
    pub rates: Vec<f64>,
    /// Error rates of the replacement component (defaults to --rates).
    #[arg(long, value_delimiter = ',')]
    pub dev_rates: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write CSV here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// Images to cycle through; a random synthetic image is used when absent.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    /// Synthetic image width.
    #[arg(long, default_value_t = 64)]
    pub width: u32,
    /// Synthetic image height.
    #[arg(long, default_value_t = 128)]
    pub height: u32,
    #[command(flatten)]
    pub transform: TransformArgs,
}
