//! Per-channel statistical features, grouped into three nested complexity
//! levels.
//!
//! Level 1 is the single cheapest feature (signal amplitude), level 2 adds
//! mean and standard deviation, level 3 is the full nine-feature set. Every
//! feature costs one unit per sample in the cost model, so the levels order
//! exactly by compute.

use ndarray::ArrayView1;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::signal::Segment;

/// The nine per-channel statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FeatureId {
    /// Peak magnitude: max of absolute sample values.
    Amp,
    /// Median (mean of the two middle values for even length).
    Med,
    /// Arithmetic mean.
    MnValue,
    Max,
    Min,
    /// Peak to peak: max minus min.
    P2p,
    /// Population standard deviation (divide by n).
    Std,
    /// Root mean square.
    Rms,
    /// Start-to-end difference: last sample minus first.
    S2e,
}

impl FeatureId {
    pub const ALL: [FeatureId; 9] = [
        FeatureId::Amp,
        FeatureId::Med,
        FeatureId::MnValue,
        FeatureId::Max,
        FeatureId::Min,
        FeatureId::P2p,
        FeatureId::Std,
        FeatureId::Rms,
        FeatureId::S2e,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FeatureId::Amp => "AMP",
            FeatureId::Med => "MED",
            FeatureId::MnValue => "MNVALUE",
            FeatureId::Max => "MAX",
            FeatureId::Min => "MIN",
            FeatureId::P2p => "P2P",
            FeatureId::Std => "STD",
            FeatureId::Rms => "RMS",
            FeatureId::S2e => "S2E",
        }
    }
}

impl std::fmt::Display for FeatureId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Nested feature subsets ordered by computational cost: L1 ⊂ L2 ⊂ L3.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub enum FeatureLevel {
    L1,
    L2,
    L3,
}

const L1_SET: [FeatureId; 1] = [FeatureId::Amp];
const L2_SET: [FeatureId; 3] = [FeatureId::Amp, FeatureId::MnValue, FeatureId::Std];

impl FeatureLevel {
    pub const ALL: [FeatureLevel; 3] = [FeatureLevel::L1, FeatureLevel::L2, FeatureLevel::L3];

    /// The features computed at this level, in output order.
    pub fn feature_set(self) -> &'static [FeatureId] {
        match self {
            FeatureLevel::L1 => &L1_SET,
            FeatureLevel::L2 => &L2_SET,
            FeatureLevel::L3 => &FeatureId::ALL,
        }
    }

    pub fn feature_count(self) -> usize {
        self.feature_set().len()
    }

    pub fn name(self) -> &'static str {
        match self {
            FeatureLevel::L1 => "L1",
            FeatureLevel::L2 => "L2",
            FeatureLevel::L3 => "L3",
        }
    }
}

impl std::fmt::Display for FeatureLevel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Per-channel features concatenated in channel-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    values: Vec<f64>,
    level: FeatureLevel,
    channel_count: usize,
}

impl FeatureVector {
    fn new(values: Vec<f64>, level: FeatureLevel, channel_count: usize) -> Self {
        debug_assert_eq!(values.len(), channel_count * level.feature_count());
        Self {
            values,
            level,
            channel_count,
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn level(&self) -> FeatureLevel {
        self.level
    }

    pub fn channel_count(&self) -> usize {
        self.channel_count
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Computes one statistic over one channel. The channel must be non-empty;
/// samples are assumed finite (guaranteed when they come from a [`Segment`]).
pub fn compute_feature(id: FeatureId, channel: ArrayView1<'_, f64>) -> Result<f64> {
    let n = channel.len();
    if n == 0 {
        return Err(CoreError::EmptyChannel);
    }
    let value = match id {
        FeatureId::Amp => channel.iter().fold(0.0f64, |m, &v| m.max(v.abs())),
        FeatureId::Med => {
            let mut sorted: Vec<f64> = channel.iter().copied().collect();
            sorted.sort_unstable_by(f64::total_cmp);
            if n % 2 == 1 {
                sorted[n / 2]
            } else {
                (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
            }
        }
        FeatureId::MnValue => channel.sum() / n as f64,
        FeatureId::Max => channel.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v)),
        FeatureId::Min => channel.iter().fold(f64::INFINITY, |m, &v| m.min(v)),
        FeatureId::P2p => {
            compute_feature(FeatureId::Max, channel)? - compute_feature(FeatureId::Min, channel)?
        }
        FeatureId::Std => {
            let mean = channel.sum() / n as f64;
            let var = channel.iter().map(|&v| (v - mean) * (v - mean)).sum::<f64>() / n as f64;
            var.sqrt()
        }
        FeatureId::Rms => {
            (channel.iter().map(|&v| v * v).sum::<f64>() / n as f64).sqrt()
        }
        FeatureId::S2e => channel[n - 1] - channel[0],
    };
    Ok(value)
}

/// Extracts the level's feature set from every channel of a segment.
///
/// Output order is channel-major: all features of channel 0, then channel 1,
/// and so on, each in the level's feature order.
pub fn extract(seg: &Segment, level: FeatureLevel) -> Result<FeatureVector> {
    let set = level.feature_set();
    let mut values = Vec::with_capacity(seg.channel_count() * set.len());
    for c in 0..seg.channel_count() {
        let channel = seg.channel(c);
        for &id in set {
            values.push(compute_feature(id, channel)?);
        }
    }
    Ok(FeatureVector::new(values, level, seg.channel_count()))
}

/// Instruction count of extracting `level` from `seg` under the unit-cost
/// model: one instruction per feature per sample per channel.
pub fn feature_op_count(level: FeatureLevel, seg: &Segment) -> u64 {
    level.feature_count() as u64 * seg.channel_count() as u64 * seg.rows() as u64
}
