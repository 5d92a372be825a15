//! Synthetic fixtures shared by the criterion benches.

pub use rcd_core::{AugmentConfig, FeatureRecord, ImageBuffer, RngStream, VoteMatrix};

pub fn random_image(rng: &mut RngStream, w: u32, h: u32) -> ImageBuffer {
    let raw: Vec<u8> = (0..w * h * 3).map(|_| rng.below(256) as u8).collect();
    ImageBuffer::from_raw(w, h, &raw).expect("length matches")
}

/// `ids` identities x `per_id` rows of `dims`-dimensional features,
/// each identity clustered around its own random center.
pub fn clustered_features(rng: &mut RngStream, ids: usize, per_id: usize, dims: usize) -> Vec<FeatureRecord> {
    let mut out = Vec::with_capacity(ids * per_id);
    for id in 0..ids {
        let center: Vec<f64> = (0..dims).map(|_| rng.uniform(-1.0, 1.0).unwrap()).collect();
        for j in 0..per_id {
            let f = center
                .iter()
                .map(|c| c + rng.uniform(-0.3, 0.3).unwrap())
                .collect();
            out.push(FeatureRecord::new(id as i64 + 1, f).with_camera((j % 6) as i64));
        }
    }
    out
}

pub fn random_votes(rng: &mut RngStream, n: usize, m: usize) -> VoteMatrix {
    let sign = |rng: &mut RngStream| if rng.below(2) == 0 { -1 } else { 1 };
    let expected = (0..m).map(|_| sign(rng)).collect();
    let votes = (0..n).map(|_| (0..m).map(|_| sign(rng)).collect()).collect();
    VoteMatrix::new(votes, expected).expect("all entries are +-1")
}
