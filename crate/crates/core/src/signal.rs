//! Raw multichannel signal segments, activity labels and rate conversion.
//!
//! A [`Segment`] is one fixed-duration window of samples: rows are time
//! steps, columns are channels. Rate reduction is pure index-selection
//! decimation ([`decimate`]), which models sensing at a lower frequency
//! without inventing values. [`segment_stream`] splits a long recording into
//! consecutive non-overlapping windows.

use ndarray::{Array2, ArrayView1, Axis};
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};

/// Samples per second. Always positive.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(try_from = "u32", into = "u32")]
pub struct SamplingRate {
    hz: u32,
}

impl SamplingRate {
    pub fn new(hz: u32) -> Result<Self> {
        if hz == 0 {
            return Err(CoreError::ZeroRate);
        }
        Ok(Self { hz })
    }

    pub fn hz(self) -> u32 {
        self.hz
    }
}

impl TryFrom<u32> for SamplingRate {
    type Error = CoreError;

    fn try_from(hz: u32) -> Result<Self> {
        Self::new(hz)
    }
}

impl From<SamplingRate> for u32 {
    fn from(rate: SamplingRate) -> u32 {
        rate.hz
    }
}

impl std::fmt::Display for SamplingRate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} Hz", self.hz)
    }
}

/// Movement-vigor tier of an activity. Ordered `Low < Medium < High`.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "lowercase")]
pub enum IntensityClass {
    Low,
    Medium,
    High,
}

impl IntensityClass {
    pub const ALL: [IntensityClass; 3] = [
        IntensityClass::Low,
        IntensityClass::Medium,
        IntensityClass::High,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IntensityClass::Low => "low",
            IntensityClass::Medium => "medium",
            IntensityClass::High => "high",
        }
    }
}

impl std::fmt::Display for IntensityClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// One activity in the label space. Every label belongs to exactly one
/// intensity class; ids must be unique within a cascade.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ActivityLabel {
    pub id: u32,
    pub name: String,
    pub intensity: IntensityClass,
}

impl ActivityLabel {
    pub fn new(id: u32, name: impl Into<String>, intensity: IntensityClass) -> Self {
        Self {
            id,
            name: name.into(),
            intensity,
        }
    }
}

/// A fixed-duration window of multichannel samples at a known rate.
///
/// Rows are time steps, columns are channels. The row count always equals
/// `rate * duration_s`; the duration is derived from the sample count at
/// construction so the relation holds exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    channels: Array2<f64>,
    rate: SamplingRate,
    duration_s: f64,
}

impl Segment {
    /// Wraps a rows-by-channels sample matrix recorded at `rate`.
    ///
    /// Rejects empty matrices and non-finite samples.
    pub fn new(channels: Array2<f64>, rate: SamplingRate) -> Result<Self> {
        if channels.nrows() == 0 || channels.ncols() == 0 {
            return Err(CoreError::EmptySegment);
        }
        for ((row, channel), &v) in channels.indexed_iter() {
            if !v.is_finite() {
                return Err(CoreError::NonFiniteSample { row, channel });
            }
        }
        let duration_s = channels.nrows() as f64 / rate.hz() as f64;
        Ok(Self {
            channels,
            rate,
            duration_s,
        })
    }

    pub fn rows(&self) -> usize {
        self.channels.nrows()
    }

    pub fn channel_count(&self) -> usize {
        self.channels.ncols()
    }

    pub fn rate(&self) -> SamplingRate {
        self.rate
    }

    pub fn duration_s(&self) -> f64 {
        self.duration_s
    }

    pub fn samples(&self) -> &Array2<f64> {
        &self.channels
    }

    pub fn channel(&self, c: usize) -> ArrayView1<'_, f64> {
        self.channels.column(c)
    }
}

/// A segment together with its ground-truth activity.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSegment {
    pub segment: Segment,
    pub label: ActivityLabel,
}

/// Number of rows a segment of `duration_s` seconds holds at `rate`.
///
/// Shared by [`decimate`] and the cost ledger so sample accounting and the
/// actual decimated data can never disagree.
pub fn rows_at_rate(rate: SamplingRate, duration_s: f64) -> usize {
    (rate.hz() as f64 * duration_s).round() as usize
}

/// Reduces a segment to `target` rate by index selection.
///
/// Output row `j` is input row `round(j * source_hz / target_hz)`, clamped to
/// the last input row. No filtering or interpolation: every output sample is
/// one of the input samples. Decimating to the segment's own rate is the
/// identity.
pub fn decimate(seg: &Segment, target: SamplingRate) -> Result<Segment> {
    let source = seg.rate();
    if target.hz() > source.hz() {
        return Err(CoreError::RateAboveSource {
            source_hz: source.hz(),
            target_hz: target.hz(),
        });
    }
    if target == source {
        return Ok(seg.clone());
    }

    let out_rows = rows_at_rate(target, seg.duration_s());
    if out_rows == 0 {
        return Err(CoreError::EmptySegment);
    }
    let ratio = source.hz() as f64 / target.hz() as f64;
    let last = seg.rows() - 1;
    let indices: Vec<usize> = (0..out_rows)
        .map(|j| ((j as f64 * ratio).round() as usize).min(last))
        .collect();
    let picked = seg.samples().select(Axis(0), &indices);
    Segment::new(picked, target)
}

/// Splits a recording into consecutive non-overlapping windows of
/// `window_s` seconds. A trailing partial window is discarded.
///
/// `window_s * rate` must be a whole number of samples. An empty sample
/// matrix yields an empty sequence.
pub fn segment_stream(
    samples: &Array2<f64>,
    rate: SamplingRate,
    window_s: f64,
) -> Result<Vec<Segment>> {
    let exact = rate.hz() as f64 * window_s;
    let window_rows = exact.round();
    if window_s <= 0.0 || window_rows < 1.0 || (exact - window_rows).abs() > 1e-9 {
        return Err(CoreError::NonIntegralWindow {
            window_s,
            hz: rate.hz(),
        });
    }
    let window_rows = window_rows as usize;

    if samples.nrows() == 0 {
        return Ok(Vec::new());
    }
    let count = samples.nrows() / window_rows;
    (0..count)
        .map(|i| {
            let start = i * window_rows;
            let window = samples
                .slice(ndarray::s![start..start + window_rows, ..])
                .to_owned();
            Segment::new(window, rate)
        })
        .collect()
}
