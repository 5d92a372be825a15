//! Random color dropout toolkit.
//!
//! Grayscale and sketch based color dropout transforms applied globally or
//! inside a random rectangle, identity-balanced (PK) batch sampling,
//! hard-mining triplet and ID loss kernels over externally computed
//! features, CMC/mAP retrieval evaluation, and a majority-vote ensemble
//! error analysis with a Monte-Carlo sweep.
//!
//! Every random decision goes through an explicitly seeded [`RngStream`];
//! per-image streams make parallel processing reproducible.

pub mod dataset;
pub mod ensemble;
pub mod error;
pub mod eval;
pub mod features;
pub mod imgcore;
pub mod losses;
pub mod pipeline;
pub mod sampler;
pub mod transforms;

pub use dataset::{Manifest, SampleRecord};
pub use ensemble::{EnsembleReport, SweepConfig, SweepRow, VoteMatrix};
pub use error::{Error, Result};
pub use eval::{evaluate, EvalOptions, RetrievalResult};
pub use features::FeatureRecord;
pub use imgcore::{load_image, save_image, ImageBuffer, RectRegion, RngStream};
pub use losses::{LossBreakdown, TripletSelection};
pub use sampler::{sample_batch, Batch, BatchEntry, BatchSpec};
pub use transforms::{AugmentConfig, ColorMode, TransformKind, TransformOutcome};
