//! Unit-cost accounting of sensing and feature computation, plus budget
//! checks for power, error and memory bounds.
//!
//! The cost model charges one unit per sensed sample and one unit per
//! feature-per-sample instruction; classifier arithmetic, radio and idle
//! power are out of scope. A monolithic recognizer senses at the highest
//! rate and extracts the full feature set all the time; the cascade charges
//! each intensity branch at its own rate with that branch's gate and leaf
//! feature levels.

use std::collections::BTreeMap;

use crate::cascade::CascadeSpec;
use crate::error::{CoreError, Result};
use crate::features::FeatureLevel;
use crate::signal::{rows_at_rate, IntensityClass, SamplingRate};

/// Sensing and compute cost in abstract units.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CostBreakdown {
    pub sensing: f64,
    pub compute: f64,
}

impl CostBreakdown {
    pub fn total(&self) -> f64 {
        self.sensing + self.compute
    }
}

/// Accumulated counts for one intensity branch.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BranchTally {
    pub duration_s: f64,
    pub sensed_samples: u64,
    pub feature_ops: u64,
}

/// Cumulative sensing and computation counts, kept per intensity branch.
/// Totals are always the sum over branches, and counters only grow.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CostLedger {
    branches: BTreeMap<IntensityClass, BranchTally>,
}

impl CostLedger {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds one segment's worth of accounting to a branch.
    pub fn charge(
        &mut self,
        branch: IntensityClass,
        duration_s: f64,
        sensed_samples: u64,
        feature_ops: u64,
    ) {
        let tally = self.branches.entry(branch).or_default();
        tally.duration_s += duration_s;
        tally.sensed_samples += sensed_samples;
        tally.feature_ops += feature_ops;
    }

    /// Folds another ledger in. Merging is commutative and associative.
    pub fn merge(&mut self, other: &CostLedger) {
        for (&branch, tally) in &other.branches {
            self.charge(
                branch,
                tally.duration_s,
                tally.sensed_samples,
                tally.feature_ops,
            );
        }
    }

    pub fn sensed_samples(&self) -> u64 {
        self.branches.values().map(|t| t.sensed_samples).sum()
    }

    pub fn feature_ops(&self) -> u64 {
        self.branches.values().map(|t| t.feature_ops).sum()
    }

    pub fn total_units(&self) -> u64 {
        self.sensed_samples() + self.feature_ops()
    }

    pub fn duration_s(&self) -> f64 {
        self.branches.values().map(|t| t.duration_s).sum()
    }

    pub fn branch(&self, branch: IntensityClass) -> Option<&BranchTally> {
        self.branches.get(&branch)
    }

    /// Branches in intensity order.
    pub fn branches(&self) -> impl Iterator<Item = (IntensityClass, &BranchTally)> {
        self.branches.iter().map(|(&b, t)| (b, t))
    }

    /// Accumulated duration per branch, the mix consumed by [`cascade_cost`].
    pub fn mix(&self) -> BTreeMap<IntensityClass, f64> {
        self.branches
            .iter()
            .map(|(&b, t)| (b, t.duration_s))
            .collect()
    }
}

/// Cost of sensing at `rate` and always extracting `level`, the
/// single-classifier baseline: `duration * rate * channels * (1 + features)`.
pub fn monolithic_cost(
    rate: SamplingRate,
    level: FeatureLevel,
    channels: usize,
    duration_s: f64,
) -> CostBreakdown {
    let samples = duration_s * rate.hz() as f64 * channels as f64;
    CostBreakdown {
        sensing: samples,
        compute: samples * level.feature_count() as f64,
    }
}

/// Cost of the cascade over a per-intensity duration mix.
///
/// Each branch term is `duration * branch_rate * channels * (1 + gate
/// features + leaf features)`; the high branch has no gate of its own, so it
/// pays only its leaf features. Equals the ledger accumulated by
/// `classify` whenever routing is correct and every segment holds a whole
/// number of samples at its branch rate.
pub fn cascade_cost(
    spec: &CascadeSpec,
    mix: &BTreeMap<IntensityClass, f64>,
    channels: usize,
) -> CostBreakdown {
    let mut out = CostBreakdown::default();
    for (&branch, &duration_s) in mix {
        let samples = duration_s * spec.branch_rate(branch).hz() as f64 * channels as f64;
        out.sensing += samples;
        out.compute += samples * spec.branch_feature_count(branch) as f64;
    }
    out
}

/// Exact integer charge for one segment routed to `branch`: sensed sample
/// count and feature-op count. Row counts follow the decimation rule, so the
/// ledger agrees with what the cascade actually extracts.
pub fn branch_charge(
    spec: &CascadeSpec,
    branch: IntensityClass,
    duration_s: f64,
    channels: usize,
) -> (u64, u64) {
    let rows = rows_at_rate(spec.branch_rate(branch), duration_s) as u64;
    let sensed = rows * channels as u64;
    (sensed, sensed * spec.branch_feature_count(branch) as u64)
}

/// Resource bounds: maximum cost units per second, maximum cumulative
/// classification errors, and maximum observation-window blocks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BudgetSpec {
    pub theta: f64,
    pub epsilon: u64,
    pub k: usize,
}

impl BudgetSpec {
    pub fn new(theta: f64, epsilon: u64, k: usize) -> Result<Self> {
        if !(theta > 0.0 && theta.is_finite()) {
            return Err(CoreError::InvalidParameter(format!(
                "theta must be positive and finite, got {theta}"
            )));
        }
        if epsilon == 0 {
            return Err(CoreError::InvalidParameter(
                "epsilon must be positive".into(),
            ));
        }
        if k == 0 {
            return Err(CoreError::InvalidParameter("k must be positive".into()));
        }
        Ok(Self { theta, epsilon, k })
    }
}

/// Outcome of checking a run against its budgets. All bounds are inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BudgetReport {
    pub power_ok: bool,
    pub error_ok: bool,
    pub memory_ok: bool,
}

impl BudgetReport {
    pub fn all_ok(&self) -> bool {
        self.power_ok && self.error_ok && self.memory_ok
    }
}

/// Checks average power, cumulative errors and window length against the
/// budgets. `elapsed_s` must be positive.
pub fn check_budgets(
    ledger: &CostLedger,
    budgets: &BudgetSpec,
    elapsed_s: f64,
    errors_seen: u64,
    window_len: usize,
) -> BudgetReport {
    assert!(elapsed_s > 0.0, "elapsed_s must be positive");
    BudgetReport {
        power_ok: ledger.total_units() as f64 / elapsed_s <= budgets.theta,
        error_ok: errors_seen <= budgets.epsilon,
        memory_ok: window_len <= budgets.k,
    }
}

/// Monolithic-versus-cascade comparison over one duration mix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SavingsReport {
    pub monolithic: CostBreakdown,
    pub cascade: CostBreakdown,
    pub sensing_savings_pct: f64,
    pub compute_savings_pct: f64,
}

fn savings_pct(cascade: f64, monolithic: f64) -> f64 {
    if monolithic > 0.0 {
        100.0 * (1.0 - cascade / monolithic)
    } else {
        0.0
    }
}

/// Evaluates both cost models on the same mix. The monolithic baseline runs
/// at the cascade's high rate with the full feature set.
pub fn savings(
    spec: &CascadeSpec,
    mix: &BTreeMap<IntensityClass, f64>,
    channels: usize,
) -> SavingsReport {
    let total_duration: f64 = mix.values().sum();
    let monolithic = monolithic_cost(
        spec.rates().high,
        FeatureLevel::L3,
        channels,
        total_duration,
    );
    let cascade = cascade_cost(spec, mix, channels);
    SavingsReport {
        monolithic,
        cascade,
        sensing_savings_pct: savings_pct(cascade.sensing, monolithic.sensing),
        compute_savings_pct: savings_pct(cascade.compute, monolithic.compute),
    }
}
