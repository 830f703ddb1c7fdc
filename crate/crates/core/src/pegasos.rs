//! Online binary linear SVM trained by stochastic subgradient descent over a
//! bounded sliding window.
//!
//! The model keeps only the `k` most recent observations. Each [`step`]
//! evaluates the subgradient of the regularized hinge objective on that
//! window with step size `1/(lambda * t)` and updates the weights in place.
//! The window bound is the memory contract: no operation ever stores more
//! than `k` observations.
//!
//! [`step`]: PegasosModel::step

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};

/// Class label of a binary training pair, mapped to +1 / -1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BinaryLabel {
    Positive,
    Negative,
}

impl BinaryLabel {
    pub fn from_bool(positive: bool) -> Self {
        if positive {
            BinaryLabel::Positive
        } else {
            BinaryLabel::Negative
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            BinaryLabel::Positive => 1.0,
            BinaryLabel::Negative => -1.0,
        }
    }

    pub fn is_positive(self) -> bool {
        matches!(self, BinaryLabel::Positive)
    }
}

impl std::fmt::Display for BinaryLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BinaryLabel::Positive => "+1",
            BinaryLabel::Negative => "-1",
        })
    }
}

/// Hyperparameters of one Pegasos classifier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PegasosConfig {
    /// Regularization strength. Must be positive.
    pub lambda: f64,
    /// Observation window capacity; doubles as the memory budget in
    /// segment-sized blocks.
    pub k: usize,
    /// Optionally re-project the weights onto the ball of radius
    /// `1/sqrt(lambda)` after each step. Off by default: the streaming
    /// variant omits it.
    pub use_projection: bool,
    /// Input dimension.
    pub dim: usize,
}

impl PegasosConfig {
    pub fn new(lambda: f64, k: usize, use_projection: bool, dim: usize) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(CoreError::InvalidParameter(format!(
                "lambda must be positive and finite, got {lambda}"
            )));
        }
        if k == 0 {
            return Err(CoreError::InvalidParameter("k must be at least 1".into()));
        }
        if dim == 0 {
            return Err(CoreError::InvalidParameter("dim must be at least 1".into()));
        }
        Ok(Self {
            lambda,
            k,
            use_projection,
            dim,
        })
    }
}

/// Prediction of a linear classifier: signed margin and thresholded label.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub label: BinaryLabel,
    pub margin: f64,
}

/// Linear SVM state: weights, iteration counter and the sliding window of
/// the `k` most recent observations.
///
/// Mutating operations take `&mut self`; a model instance is single-writer.
/// Distinct instances train independently.
#[derive(Debug, Clone, PartialEq)]
pub struct PegasosModel {
    config: PegasosConfig,
    w: Vec<f64>,
    t: u64,
    window: VecDeque<(Vec<f64>, BinaryLabel)>,
}

impl PegasosModel {
    /// Fresh model with zero weights and an empty window.
    pub fn new(config: PegasosConfig) -> Self {
        Self {
            w: vec![0.0; config.dim],
            t: 0,
            window: VecDeque::with_capacity(config.k),
            config,
        }
    }

    /// Rebuilds a model from persisted state. Window entries are oldest
    /// first.
    pub fn from_parts(
        config: PegasosConfig,
        t: u64,
        w: Vec<f64>,
        window: Vec<(Vec<f64>, BinaryLabel)>,
    ) -> Result<Self> {
        if w.len() != config.dim {
            return Err(CoreError::DimensionMismatch {
                expected: config.dim,
                got: w.len(),
            });
        }
        if w.iter().any(|v| !v.is_finite()) {
            return Err(CoreError::InvalidParameter(
                "weights must be finite".into(),
            ));
        }
        if window.len() > config.k {
            return Err(CoreError::InvalidParameter(format!(
                "window holds {} observations but k = {}",
                window.len(),
                config.k
            )));
        }
        for (x, _) in &window {
            if x.len() != config.dim {
                return Err(CoreError::DimensionMismatch {
                    expected: config.dim,
                    got: x.len(),
                });
            }
        }
        Ok(Self {
            w,
            t,
            window: window.into(),
            config,
        })
    }

    pub fn config(&self) -> &PegasosConfig {
        &self.config
    }

    pub fn weights(&self) -> &[f64] {
        &self.w
    }

    /// Number of subgradient steps taken so far.
    pub fn iterations(&self) -> u64 {
        self.t
    }

    pub fn window_len(&self) -> usize {
        self.window.len()
    }

    /// Window contents, oldest first.
    pub fn window(&self) -> impl Iterator<Item = (&[f64], BinaryLabel)> {
        self.window.iter().map(|(x, y)| (x.as_slice(), *y))
    }

    /// Buffers one observation. When the window is full the oldest entry is
    /// evicted first; weights and iteration counter are untouched.
    pub fn observe(&mut self, x: Vec<f64>, y: BinaryLabel) -> Result<()> {
        if x.len() != self.config.dim {
            return Err(CoreError::DimensionMismatch {
                expected: self.config.dim,
                got: x.len(),
            });
        }
        if self.window.len() == self.config.k {
            self.window.pop_front();
        }
        self.window.push_back((x, y));
        Ok(())
    }

    /// One subgradient step on the current window.
    ///
    /// Advances `t`, takes step size `1/(lambda*t)` along the negative
    /// subgradient `lambda*w - mean(y*x over margin violators)`, where a
    /// violator satisfies the strict inequality `y*<w,x> < 1`.
    pub fn step(&mut self) -> Result<()> {
        let n = self.window.len();
        if n == 0 {
            return Err(CoreError::EmptyWindow);
        }
        self.t += 1;
        let lambda = self.config.lambda;
        let eta = 1.0 / (lambda * self.t as f64);

        let mut violator_sum = vec![0.0; self.config.dim];
        for (x, y) in &self.window {
            let margin = y.sign() * dot(&self.w, x);
            if margin < 1.0 {
                let sign = y.sign();
                for (acc, &xi) in violator_sum.iter_mut().zip(x) {
                    *acc += sign * xi;
                }
            }
        }

        let shrink = 1.0 - eta * lambda;
        let scale = eta / n as f64;
        for (wi, vi) in self.w.iter_mut().zip(&violator_sum) {
            *wi = shrink * *wi + scale * vi;
        }

        if self.config.use_projection {
            let norm = dot(&self.w, &self.w).sqrt();
            let radius = 1.0 / lambda.sqrt();
            if norm > radius {
                let factor = radius / norm;
                for wi in &mut self.w {
                    *wi *= factor;
                }
            }
        }
        Ok(())
    }

    /// Regularized hinge objective of the current weights over `data`:
    /// `lambda/2 * |w|^2 + mean(max(0, 1 - y*<w,x>))`.
    pub fn objective(&self, data: &[(Vec<f64>, BinaryLabel)]) -> Result<f64> {
        if data.is_empty() {
            return Err(CoreError::EmptyWindow);
        }
        let mut hinge = 0.0;
        for (x, y) in data {
            if x.len() != self.config.dim {
                return Err(CoreError::DimensionMismatch {
                    expected: self.config.dim,
                    got: x.len(),
                });
            }
            hinge += (1.0 - y.sign() * dot(&self.w, x)).max(0.0);
        }
        Ok(self.config.lambda / 2.0 * dot(&self.w, &self.w) + hinge / data.len() as f64)
    }

    /// Signed margin `<w,x>` and its thresholded label. A margin of exactly
    /// zero predicts positive, so an untrained model is deterministic.
    pub fn predict(&self, x: &[f64]) -> Result<Prediction> {
        if x.len() != self.config.dim {
            return Err(CoreError::DimensionMismatch {
                expected: self.config.dim,
                got: x.len(),
            });
        }
        let margin = dot(&self.w, x);
        Ok(Prediction {
            label: BinaryLabel::from_bool(margin >= 0.0),
            margin,
        })
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn config(lambda: f64, k: usize, dim: usize) -> PegasosConfig {
        PegasosConfig::new(lambda, k, false, dim).unwrap()
    }

    fn pos() -> BinaryLabel {
        BinaryLabel::Positive
    }

    fn neg() -> BinaryLabel {
        BinaryLabel::Negative
    }

    #[test]
    fn config_rejects_bad_parameters() {
        assert!(PegasosConfig::new(0.0, 1, false, 1).is_err());
        assert!(PegasosConfig::new(-1.0, 1, false, 1).is_err());
        assert!(PegasosConfig::new(1.0, 0, false, 1).is_err());
        assert!(PegasosConfig::new(1.0, 1, false, 0).is_err());
    }

    #[test]
    fn observe_evicts_oldest_when_full() {
        let mut m = PegasosModel::new(config(1.0, 2, 1));
        m.observe(vec![1.0], pos()).unwrap();
        m.observe(vec![2.0], neg()).unwrap();
        m.observe(vec![3.0], pos()).unwrap();
        let window: Vec<_> = m.window().map(|(x, y)| (x[0], y)).collect();
        assert_eq!(window, vec![(2.0, neg()), (3.0, pos())]);
    }

    #[test]
    fn observe_grows_until_capacity() {
        let mut m = PegasosModel::new(config(1.0, 10, 1));
        m.observe(vec![1.0], pos()).unwrap();
        assert_eq!(m.window_len(), 1);
    }

    #[test]
    fn observe_with_k_one_keeps_only_newest() {
        let mut m = PegasosModel::new(config(1.0, 1, 1));
        for i in 0..5 {
            m.observe(vec![i as f64], pos()).unwrap();
            assert_eq!(m.window_len(), 1);
            assert_eq!(m.window().next().unwrap().0[0], i as f64);
        }
    }

    #[test]
    fn observe_rejects_wrong_dimension() {
        let mut m = PegasosModel::new(config(1.0, 2, 3));
        assert!(matches!(
            m.observe(vec![1.0], pos()),
            Err(CoreError::DimensionMismatch { expected: 3, got: 1 })
        ));
    }

    #[test]
    fn single_violator_step_from_zero_weights() {
        let mut m = PegasosModel::new(config(1.0, 4, 2));
        m.observe(vec![1.0, 0.0], pos()).unwrap();
        m.step().unwrap();
        assert_eq!(m.iterations(), 1);
        assert_eq!(m.weights(), &[1.0, 0.0]);
    }

    #[test]
    fn satisfied_window_only_shrinks_weights() {
        // All margins >= 1, so the subgradient is lambda*w and the update is
        // w * (1 - 1/t).
        let cfg = config(0.5, 4, 2);
        let mut m = PegasosModel::from_parts(cfg, 1, vec![4.0, 0.0], vec![]).unwrap();
        m.observe(vec![1.0, 0.0], pos()).unwrap();
        m.observe(vec![-2.0, 0.0], neg()).unwrap();
        m.step().unwrap();
        // t = 2 -> w * (1 - 1/2)
        assert_eq!(m.weights(), &[2.0, 0.0]);
    }

    #[test]
    fn symmetric_violators_average() {
        let mut m = PegasosModel::new(config(1.0, 2, 2));
        m.observe(vec![1.0, 0.0], pos()).unwrap();
        m.observe(vec![-1.0, 0.0], neg()).unwrap();
        m.step().unwrap();
        assert_eq!(m.weights(), &[1.0, 0.0]);
    }

    #[test]
    fn step_on_empty_window_is_an_error() {
        let mut m = PegasosModel::new(config(1.0, 2, 2));
        assert!(matches!(m.step(), Err(CoreError::EmptyWindow)));
    }

    #[test]
    fn objective_of_zero_weights_is_one() {
        let m = PegasosModel::new(config(1.0, 2, 2));
        let data = vec![
            (vec![3.0, -1.0], pos()),
            (vec![0.5, 2.0], neg()),
            (vec![-7.0, 0.1], pos()),
        ];
        assert_eq!(m.objective(&data).unwrap(), 1.0);
    }

    #[test]
    fn objective_with_satisfied_margin() {
        let m = PegasosModel::from_parts(config(1.0, 2, 2), 0, vec![1.0, 0.0], vec![]).unwrap();
        let data = vec![(vec![1.0, 0.0], pos())];
        assert_eq!(m.objective(&data).unwrap(), 0.5);
    }

    #[test]
    fn predict_zero_weights_ties_to_positive() {
        let m = PegasosModel::new(config(1.0, 2, 2));
        let p = m.predict(&[-3.0, 9.0]).unwrap();
        assert_eq!(p.label, pos());
        assert_eq!(p.margin, 0.0);
    }

    #[test]
    fn predict_reports_signed_margin() {
        let m = PegasosModel::from_parts(config(1.0, 2, 2), 0, vec![1.0, 0.0], vec![]).unwrap();
        let p = m.predict(&[-2.0, 5.0]).unwrap();
        assert_eq!(p.label, neg());
        assert_eq!(p.margin, -2.0);
    }

    #[test]
    fn step_counter_matches_schedule() {
        let mut m = PegasosModel::new(config(0.1, 3, 1));
        m.observe(vec![1.0], pos()).unwrap();
        for expected in 1..=17u64 {
            m.step().unwrap();
            assert_eq!(m.iterations(), expected);
        }
    }

    /// Brute-force restatement of the subgradient update, kept free of the
    /// implementation's algebraic shortcuts.
    fn oracle_step(
        lambda: f64,
        t_before: u64,
        w: &[f64],
        window: &[(Vec<f64>, BinaryLabel)],
    ) -> Vec<f64> {
        let t = t_before + 1;
        let eta = 1.0 / (lambda * t as f64);
        let mut grad: Vec<f64> = w.iter().map(|wi| lambda * wi).collect();
        for (x, y) in window {
            let dot: f64 = w.iter().zip(x).map(|(a, b)| a * b).sum();
            if y.sign() * dot < 1.0 {
                for (g, &xi) in grad.iter_mut().zip(x) {
                    *g -= y.sign() * xi / window.len() as f64;
                }
            }
        }
        w.iter().zip(&grad).map(|(wi, gi)| wi - eta * gi).collect()
    }

    proptest! {
        #[test]
        fn window_never_exceeds_k(
            k in 1usize..12,
            ops in proptest::collection::vec(any::<bool>(), 0..200),
        ) {
            let mut m = PegasosModel::new(config(0.3, k, 2));
            let mut i = 0.0;
            for observe in ops {
                if observe {
                    m.observe(vec![i, -i], if i as u64 % 2 == 0 { pos() } else { neg() }).unwrap();
                    i += 1.0;
                } else if m.window_len() > 0 {
                    m.step().unwrap();
                }
                prop_assert!(m.window_len() <= k);
            }
        }

        #[test]
        fn step_matches_brute_force_oracle(
            dim in 1usize..6,
            lambda in 0.01f64..10.0,
            t_before in 0u64..50,
            seed in 0u64..10_000,
            window_len in 1usize..11,
        ) {
            // Deterministic pseudo-random instance from the seed.
            let val = |i: u64| ((seed.wrapping_mul(6364136223846793005).wrapping_add(i * 2654435761)) % 2000) as f64 / 100.0 - 10.0;
            let w: Vec<f64> = (0..dim as u64).map(val).collect();
            let window: Vec<(Vec<f64>, BinaryLabel)> = (0..window_len as u64)
                .map(|j| {
                    let x: Vec<f64> = (0..dim as u64).map(|d| val(100 + j * 10 + d)).collect();
                    (x, if val(500 + j) >= 0.0 { pos() } else { neg() })
                })
                .collect();
            let expected = oracle_step(lambda, t_before, &w, &window);

            let cfg = config(lambda, window_len, dim);
            let mut m = PegasosModel::from_parts(cfg, t_before, w, window).unwrap();
            m.step().unwrap();
            for (got, want) in m.weights().iter().zip(&expected) {
                let tol = 1e-12 * want.abs().max(1.0);
                prop_assert!((got - want).abs() <= tol, "got {got}, want {want}");
            }
        }

        #[test]
        fn projection_caps_weight_norm(
            lambda in 0.01f64..4.0,
            steps in 1usize..40,
        ) {
            let cfg = PegasosConfig::new(lambda, 4, true, 2).unwrap();
            let mut m = PegasosModel::new(cfg);
            m.observe(vec![100.0, -3.0], pos()).unwrap();
            m.observe(vec![90.0, 5.0], neg()).unwrap();
            for _ in 0..steps {
                m.step().unwrap();
                let norm = m.weights().iter().map(|v| v * v).sum::<f64>().sqrt();
                prop_assert!(norm <= 1.0 / lambda.sqrt() + 1e-12);
            }
        }

        #[test]
        fn prediction_is_scale_invariant(
            wx in -10.0f64..10.0, wy in -10.0f64..10.0,
            x in -10.0f64..10.0, y in -10.0f64..10.0,
            c in 0.001f64..100.0,
        ) {
            let base = PegasosModel::from_parts(config(1.0, 1, 2), 0, vec![wx, wy], vec![]).unwrap();
            let scaled = PegasosModel::from_parts(config(1.0, 1, 2), 0, vec![c * wx, c * wy], vec![]).unwrap();
            let input = [x, y];
            prop_assert_eq!(
                base.predict(&input).unwrap().label,
                scaled.predict(&input).unwrap().label
            );
        }
    }
}
