use nalgebra::{DVector, SVD};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmat::RealMatrix;
use crate::series::TimeSeries;

/// Relative singular-value cutoff of the capacity projection, measured
/// against the largest singular value of the uncentered feature matrix.
pub const DEFAULT_REL_THRESHOLD: f64 = 1e-10;

/// Memory functions at or below this value do not count towards
/// `max_linear_delay`.
pub const MEMORY_FLOOR: f64 = 1e-4;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CapacityConfig {
    /// Rows discarded before fitting. Must cover the largest delay used.
    pub washout: usize,
    /// Time-shuffled copies per component; `0` disables thresholding.
    pub surrogate_count: usize,
    pub surrogate_seed: u64,
    pub rel_threshold: f64,
}

impl Default for CapacityConfig {
    fn default() -> Self {
        CapacityConfig {
            washout: 30_000,
            surrogate_count: 100,
            surrogate_seed: 0x5eed,
            rel_threshold: DEFAULT_REL_THRESHOLD,
        }
    }
}

/// SplitMix64 finalizer, used to derive independent stream seeds.
pub fn mix_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Orthonormal basis of the centered feature columns on rows `start..`.
///
/// The capacity of a target `v` is `‖Qᵀ v_c‖² / ‖v_c‖²`, which equals
/// `cov(v, x) cov(x, x)⁺ cov(x, v) / Var(v)` with centered `x` and `v`.
#[derive(Clone, Debug)]
pub struct CapacityEstimator {
    basis: RealMatrix,
    start: usize,
    surrogate_count: usize,
    surrogate_seed: u64,
}

impl CapacityEstimator {
    pub fn new(features: &TimeSeries, cfg: &CapacityConfig) -> Result<Self> {
        if features.len() <= cfg.washout + 1 {
            return Err(Error::InsufficientHistory {
                window: cfg.washout,
                index: features.len(),
                needed: cfg.washout + 2,
            });
        }
        let raw = features.to_matrix_from(cfg.washout);
        let raw_max = crate::qmat::singular_values(&raw).first().copied().unwrap_or(0.0);
        let mut centered = raw;
        let n = centered.nrows() as f64;
        for mut col in centered.column_iter_mut() {
            let mean = col.sum() / n;
            col.add_scalar_mut(-mean);
        }
        let cutoff = cfg.rel_threshold * raw_max;
        let svd = SVD::new(centered, true, false);
        let u = svd.u.expect("requested U");
        let keep: Vec<usize> = (0..svd.singular_values.len())
            .filter(|&k| raw_max > 0.0 && svd.singular_values[k] > cutoff)
            .collect();
        let basis = RealMatrix::from_fn(u.nrows(), keep.len(), |i, j| u[(i, keep[j])]);
        Ok(CapacityEstimator {
            basis,
            start: cfg.washout,
            surrogate_count: cfg.surrogate_count,
            surrogate_seed: cfg.surrogate_seed,
        })
    }

    /// Number of retained feature directions.
    pub fn rank(&self) -> usize {
        self.basis.ncols()
    }

    pub fn start(&self) -> usize {
        self.start
    }

    /// Rows used in every estimate.
    pub fn len(&self) -> usize {
        self.basis.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.nrows() == 0
    }

    fn centered_target(&self, target: &[f64]) -> Result<DVector<f64>> {
        if target.len() != self.len() {
            return Err(Error::LengthMismatch(format!(
                "capacity target of length {} for {} post-washout rows",
                target.len(),
                self.len()
            )));
        }
        let mut v = DVector::from_column_slice(target);
        let mean = v.mean();
        v.add_scalar_mut(-mean);
        if v.norm_squared() == 0.0 {
            return Err(Error::ConstantTarget);
        }
        Ok(v)
    }

    fn raw_capacity(&self, v: &DVector<f64>, norm2: f64) -> f64 {
        (self.basis.tr_mul(v).norm_squared() / norm2).clamp(0.0, 1.0)
    }

    /// Capacity for a target aligned with the post-washout rows, unthresholded.
    pub fn capacity(&self, target: &[f64]) -> Result<f64> {
        let v = self.centered_target(target)?;
        Ok(self.raw_capacity(&v, v.norm_squared()))
    }

    fn permutation(&self, index: usize) -> Vec<usize> {
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(self.surrogate_seed, index as u64));
        let mut p: Vec<usize> = (0..self.len()).collect();
        p.shuffle(&mut rng);
        p
    }

    /// Largest capacity over the shuffle surrogates of `target`. Stops early
    /// and returns the first surrogate value reaching `stop_at`.
    pub fn surrogate_threshold(&self, target: &[f64], stop_at: f64) -> Result<f64> {
        let v = self.centered_target(target)?;
        let norm2 = v.norm_squared();
        let mut best = 0.0_f64;
        for s in 0..self.surrogate_count {
            let p = self.permutation(s);
            let shuffled = DVector::from_fn(v.len(), |i, _| v[p[i]]);
            best = best.max(self.raw_capacity(&shuffled, norm2));
            if best >= stop_at {
                break;
            }
        }
        Ok(best)
    }

    /// Capacity set to zero unless it beats every shuffle surrogate.
    pub fn thresholded_capacity(&self, target: &[f64]) -> Result<f64> {
        let c = self.capacity(target)?;
        if self.surrogate_count == 0 || c == 0.0 {
            return Ok(c);
        }
        let threshold = self.surrogate_threshold(target, c)?;
        Ok(if c > threshold { c } else { 0.0 })
    }
}

fn check_inputs(inputs: &[f64], features: &TimeSeries) -> Result<()> {
    if inputs.len() != features.len() {
        return Err(Error::LengthMismatch(format!(
            "{} inputs for {} feature rows",
            inputs.len(),
            features.len()
        )));
    }
    Ok(())
}

fn delayed(inputs: &[f64], start: usize, k: usize) -> Result<&[f64]> {
    if k > start {
        return Err(Error::InsufficientHistory {
            window: k,
            index: start,
            needed: k,
        });
    }
    Ok(&inputs[start - k..inputs.len() - k])
}

/// Thresholded capacity of reconstructing `u_{t-k}` from row `t`.
pub fn memory_function(
    inputs: &[f64],
    features: &TimeSeries,
    k: usize,
    cfg: &CapacityConfig,
) -> Result<f64> {
    check_inputs(inputs, features)?;
    let est = CapacityEstimator::new(features, cfg)?;
    est.thresholded_capacity(delayed(inputs, est.start(), k)?)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McResult {
    /// `C_k` for `k = 0..=max_delay`.
    pub memory_functions: Vec<f64>,
    pub total: f64,
    /// Largest `k` with `C_k > MEMORY_FLOOR`, `0` if there is none.
    pub max_linear_delay: usize,
    pub even_sum: f64,
    pub odd_sum: f64,
    /// `Σ_{k ≥ 2} C_k`
    pub tail_sum_2plus: f64,
    pub feature_rank: usize,
}

impl McResult {
    fn from_functions(memory_functions: Vec<f64>, feature_rank: usize) -> Self {
        let mut even_sum = 0.0;
        let mut odd_sum = 0.0;
        for (k, c) in memory_functions.iter().enumerate() {
            if k % 2 == 0 {
                even_sum += c;
            } else {
                odd_sum += c;
            }
        }
        McResult {
            total: memory_functions.iter().sum(),
            max_linear_delay: memory_functions
                .iter()
                .rposition(|&c| c > MEMORY_FLOOR)
                .unwrap_or(0),
            tail_sum_2plus: memory_functions.iter().skip(2).sum(),
            even_sum,
            odd_sum,
            memory_functions,
            feature_rank,
        }
    }

    /// Even-delay sum without the `k = 0` term.
    pub fn even_sum_positive(&self) -> f64 {
        self.even_sum - self.memory_functions.first().copied().unwrap_or(0.0)
    }
}

pub fn mc_report(
    inputs: &[f64],
    features: &TimeSeries,
    max_delay: usize,
    cfg: &CapacityConfig,
) -> Result<McResult> {
    if max_delay == 0 {
        return Err(Error::Parameter {
            name: "max_delay",
            value: 0.0,
            expected: ">= 1",
        });
    }
    check_inputs(inputs, features)?;
    let est = CapacityEstimator::new(features, cfg)?;
    delayed(inputs, est.start(), max_delay)?;
    if est.rank() == 0 {
        return Ok(McResult::from_functions(vec![0.0; max_delay + 1], 0));
    }
    let functions = (0..=max_delay)
        .into_par_iter()
        .map(|k| est.thresholded_capacity(delayed(inputs, est.start(), k)?))
        .collect::<Result<Vec<f64>>>()?;
    Ok(McResult::from_functions(functions, est.rank()))
}
