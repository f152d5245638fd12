//! Dyadic refinement profiles and trend verdicts.
//!
//! Membership in a function space is not decidable from finite data, so every
//! norm-like quantity is reported together with its behaviour along dyadic
//! truncations (or dyadic grid refinements). A profile plus the verdict of
//! [`DyadicProfile::classify`] is the computable substitute.

use crate::scalar::{as_f64, Scalar};

/// Values of a quantity along dyadic parameters (truncation orders or grid
/// sizes). `params` is strictly increasing.
#[derive(Clone, Debug)]
pub struct DyadicProfile<T> {
    pub params: Vec<usize>,
    pub values: Vec<T>,
}

/// Three-way trend verdict for a refinement profile.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Trend {
    Cauchy,
    Divergent,
    Inconclusive,
}

impl std::fmt::Display for Trend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Trend::Cauchy => write!(f, "cauchy"),
            Trend::Divergent => write!(f, "divergent"),
            Trend::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

/// Thresholds for trend classification.
///
/// The per-step rule decides clear cases: Cauchy when the last relative
/// increment is below `cauchy_rel`, divergent when the last three increments
/// all sit above `diverge_rel` (or keep growing). Profiles whose increments
/// land between the two bands are decided by the span ratio
/// `S(K_max)/S(ratio_base)` against `ratio_cauchy`/`ratio_diverge`; purely
/// logarithmic tails (the counterexample-family profiles) are separable only
/// in ratio terms at desk-scale depth.
#[derive(Clone, Copy, Debug)]
pub struct TrendConfig {
    pub cauchy_rel: f64,
    pub diverge_rel: f64,
    pub ratio_cauchy: f64,
    pub ratio_diverge: f64,
    pub ratio_base: usize,
}

impl Default for TrendConfig {
    fn default() -> Self {
        TrendConfig {
            cauchy_rel: 1e-3,
            diverge_rel: 1e-2,
            ratio_cauchy: 1.10,
            ratio_diverge: 1.5,
            ratio_base: 256,
        }
    }
}

impl<T: Scalar> DyadicProfile<T> {
    pub fn new(params: Vec<usize>, values: Vec<T>) -> Self {
        assert_eq!(params.len(), values.len());
        DyadicProfile { params, values }
    }

    pub fn last(&self) -> T {
        *self.values.last().expect("non-empty profile")
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Relative increments (v_i - v_{i-1}) / v_i, one per step.
    pub fn rel_increments(&self) -> Vec<T> {
        self.values
            .windows(2)
            .map(|w| {
                if w[1] == T::zero() {
                    T::zero()
                } else {
                    (w[1] - w[0]) / w[1]
                }
            })
            .collect()
    }

    pub fn classify(&self, cfg: &TrendConfig) -> Trend {
        if self.len() < 2 {
            return Trend::Inconclusive;
        }
        let incs = self.rel_increments();
        let last = as_f64(*incs.last().unwrap());
        if last.abs() < cfg.cauchy_rel {
            return Trend::Cauchy;
        }
        let tail: Vec<f64> = incs.iter().rev().take(3).map(|&x| as_f64(x)).collect();
        if tail.len() >= 3 {
            let all_large = tail.iter().all(|&r| r >= cfg.diverge_rel);
            let growing = tail[0] > tail[1] && tail[1] > tail[2];
            if all_large || growing {
                return Trend::Divergent;
            }
        }
        // increments in the ambiguous band: decide by span ratio
        let base_idx = self
            .params
            .iter()
            .position(|&p| p >= cfg.ratio_base)
            .unwrap_or(0);
        let base = as_f64(self.values[base_idx]);
        let top = as_f64(self.last());
        if base == 0.0 {
            return if top == 0.0 { Trend::Cauchy } else { Trend::Divergent };
        }
        let ratio = top / base;
        if ratio < cfg.ratio_cauchy {
            Trend::Cauchy
        } else if ratio > cfg.ratio_diverge {
            Trend::Divergent
        } else {
            Trend::Inconclusive
        }
    }

    /// (param, value) pairs as f64, for reports.
    pub fn as_pairs(&self) -> Vec<(usize, f64)> {
        self.params
            .iter()
            .zip(&self.values)
            .map(|(&p, &v)| (p, as_f64(v)))
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "params": self.params,
            "values": self.values.iter().map(|&v| as_f64(v)).collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_profile_is_cauchy() {
        let p = DyadicProfile::new(vec![8, 16, 32, 64], vec![1.0, 1.0, 1.0, 1.0]);
        assert_eq!(p.classify(&TrendConfig::default()), Trend::Cauchy);
    }

    #[test]
    fn zero_profile_is_cauchy() {
        let p = DyadicProfile::new(vec![8, 16, 32], vec![0.0, 0.0, 0.0]);
        assert_eq!(p.classify(&TrendConfig::default()), Trend::Cauchy);
    }

    #[test]
    fn log_growth_is_divergent() {
        // S(K) ~ sqrt(2 H_K), the log sin profile
        let params: Vec<usize> = (3..15).map(|e| 1usize << e).collect();
        let values: Vec<f64> = params
            .iter()
            .map(|&k| (2.0 * (1..=k).map(|n| 1.0 / n as f64).sum::<f64>()).sqrt())
            .collect();
        let p = DyadicProfile::new(params, values);
        assert_eq!(p.classify(&TrendConfig::default()), Trend::Divergent);
    }

    #[test]
    fn fast_convergence_is_cauchy() {
        let params: Vec<usize> = (3..10).map(|e| 1usize << e).collect();
        let values: Vec<f64> = params.iter().map(|&k| 1.0 - 0.5f64.powi(k as i32 / 8)).collect();
        let p = DyadicProfile::new(params, values);
        assert_eq!(p.classify(&TrendConfig::default()), Trend::Cauchy);
    }
}
