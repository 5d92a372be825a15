//! Identity-balanced (PK) batch construction: `identities` labels per batch,
//! `per_identity` images each.

use serde::Serialize;

use crate::dataset::{Manifest, SampleRecord};
use crate::error::{Error, Result};
use crate::imgcore::RngStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BatchSpec {
    /// K: distinct identities per batch.
    pub identities: usize,
    /// M: images per identity.
    pub per_identity: usize,
    pub seed: u64,
}

impl BatchSpec {
    pub fn new(identities: usize, per_identity: usize, seed: u64) -> Result<Self> {
        if identities < 2 || per_identity < 2 {
            return Err(Error::InvalidConfig(format!(
                "need K >= 2 and M >= 2, got K = {identities}, M = {per_identity}"
            )));
        }
        Ok(Self {
            identities,
            per_identity,
            seed,
        })
    }

    pub fn batch_size(&self) -> usize {
        self.identities * self.per_identity
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BatchEntry {
    pub slot: usize,
    #[serde(flatten)]
    pub record: SampleRecord,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Batch {
    pub entries: Vec<BatchEntry>,
}

/// Draws K identities without replacement, then M images per identity;
/// identities with fewer than M images are sampled with replacement.
/// Entries for one identity occupy consecutive slots.
pub fn sample_batch(manifest: &Manifest, spec: &BatchSpec, rng: &mut RngStream) -> Result<Batch> {
    let groups: Vec<Vec<usize>> = manifest.identity_groups().into_values().collect();
    if groups.len() < spec.identities {
        return Err(Error::InsufficientIdentities {
            needed: spec.identities,
            available: groups.len(),
        });
    }
    let records = manifest.records();
    let mut entries = Vec::with_capacity(spec.batch_size());
    for g in rng.choose_distinct(groups.len(), spec.identities) {
        let members = &groups[g];
        let picks: Vec<usize> = if members.len() >= spec.per_identity {
            rng.choose_distinct(members.len(), spec.per_identity)
        } else {
            (0..spec.per_identity)
                .map(|_| rng.below_usize(members.len()))
                .collect()
        };
        for p in picks {
            entries.push(BatchEntry {
                slot: entries.len(),
                record: records[members[p]].clone(),
            });
        }
    }
    Ok(Batch { entries })
}
