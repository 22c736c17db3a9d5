use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::capacity::{CapacityConfig, CapacityEstimator};
use crate::error::{Error, Result};
use crate::series::TimeSeries;

/// Orthogonal family used for the nonlinear targets.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolynomialBasis {
    /// `sqrt(2n + 1) P_n`, orthonormal under the uniform measure on `[-1, 1]`.
    #[default]
    Legendre,
}

/// `sqrt(2n + 1) P_n(x)` by the three-term recurrence.
pub fn normalized_legendre(n: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, x);
    if n == 0 {
        return 1.0;
    }
    for m in 1..n {
        let m = m as f64;
        let next = ((2.0 * m + 1.0) * x * cur - m * prev) / (m + 1.0);
        prev = cur;
        cur = next;
    }
    cur * ((2 * n + 1) as f64).sqrt()
}

/// One factor `Y_degree(u_{t - delay})` of a target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Term {
    pub delay: usize,
    pub degree: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IpcConfig {
    /// `(degree, max_delay)` pairs; every target of that total degree with
    /// all delays in `0..=max_delay` is evaluated.
    pub budget: Vec<(usize, usize)>,
    pub basis: PolynomialBasis,
    /// Support of the input distribution, mapped affinely onto `[-1, 1]`.
    pub input_low: f64,
    pub input_high: f64,
    pub capacity: CapacityConfig,
}

impl Default for IpcConfig {
    fn default() -> Self {
        IpcConfig {
            budget: vec![(1, 300), (2, 100), (3, 30), (4, 10), (5, 10)],
            basis: PolynomialBasis::Legendre,
            input_low: -1.0,
            input_high: 1.0,
            capacity: CapacityConfig::default(),
        }
    }
}

impl IpcConfig {
    pub fn validate(&self) -> Result<()> {
        if self.budget.is_empty() {
            return Err(Error::Config("IPC budget is empty".into()));
        }
        if let Some(&(d, _)) = self.budget.iter().find(|(d, _)| *d == 0) {
            return Err(Error::Parameter {
                name: "degree",
                value: d as f64,
                expected: ">= 1",
            });
        }
        if self.input_low.is_nan() || self.input_high.is_nan() || self.input_low >= self.input_high {
            return Err(Error::Config(format!(
                "input support [{}, {}] is empty",
                self.input_low, self.input_high
            )));
        }
        Ok(())
    }

    pub fn max_delay(&self) -> usize {
        self.budget.iter().map(|&(_, k)| k).max().unwrap_or(0)
    }

    fn normalize(&self, u: f64) -> f64 {
        (2.0 * u - (self.input_low + self.input_high)) / (self.input_high - self.input_low)
    }
}

/// All targets of total `degree` with delays in `0..=max_delay`: sets of
/// distinct delays with positive degrees, sorted by delay.
pub fn enumerate_terms(degree: usize, max_delay: usize) -> Vec<Vec<Term>> {
    fn extend(
        remaining: usize,
        next_delay: usize,
        max_delay: usize,
        acc: &mut Vec<Term>,
        out: &mut Vec<Vec<Term>>,
    ) {
        if remaining == 0 {
            out.push(acc.clone());
            return;
        }
        for delay in next_delay..=max_delay {
            for degree in 1..=remaining {
                acc.push(Term { delay, degree });
                extend(remaining - degree, delay + 1, max_delay, acc, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    if degree > 0 {
        extend(degree, 0, max_delay, &mut Vec::new(), &mut out);
    }
    out
}

/// `v_t = Π_i Y_{d_i}(u_{t - k_i})` for `t` in `start..inputs.len()`, with
/// inputs normalized onto `[-1, 1]` by `cfg`.
pub fn ipc_targets(
    inputs: &[f64],
    degree: usize,
    terms: &[Term],
    start: usize,
    cfg: &IpcConfig,
) -> Result<Vec<f64>> {
    let got: usize = terms.iter().map(|t| t.degree).sum();
    if got != degree || terms.is_empty() {
        return Err(Error::DegreeMismatch {
            terms: terms.iter().map(|t| (t.delay, t.degree)).collect(),
            got,
            expected: degree,
        });
    }
    if let Some(t) = terms.iter().find(|t| t.delay > start) {
        return Err(Error::InsufficientHistory {
            window: t.delay,
            index: start,
            needed: t.delay,
        });
    }
    let normalized: Vec<f64> = inputs.iter().map(|&u| cfg.normalize(u)).collect();
    Ok((start..inputs.len())
        .map(|t| {
            terms
                .iter()
                .map(|term| match cfg.basis {
                    PolynomialBasis::Legendre => {
                        normalized_legendre(term.degree, normalized[t - term.delay])
                    }
                })
                .product()
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IpcComponent {
    pub terms: Vec<Term>,
    pub capacity: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeCapacity {
    pub degree: usize,
    pub max_delay: usize,
    pub targets: usize,
    pub total: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IpcReport {
    pub per_degree: Vec<DegreeCapacity>,
    pub total: f64,
    /// Components that survived thresholding, in enumeration order.
    pub components: Vec<IpcComponent>,
    pub feature_rank: usize,
}

impl IpcReport {
    pub fn degree_total(&self, degree: usize) -> f64 {
        self.per_degree
            .iter()
            .filter(|d| d.degree == degree)
            .map(|d| d.total)
            .sum()
    }
}

pub fn ipc_report(inputs: &[f64], features: &TimeSeries, cfg: &IpcConfig) -> Result<IpcReport> {
    cfg.validate()?;
    if inputs.len() != features.len() {
        return Err(Error::LengthMismatch(format!(
            "{} inputs for {} feature rows",
            inputs.len(),
            features.len()
        )));
    }
    let est = CapacityEstimator::new(features, &cfg.capacity)?;
    if cfg.max_delay() > est.start() {
        return Err(Error::InsufficientHistory {
            window: cfg.max_delay(),
            index: est.start(),
            needed: cfg.max_delay(),
        });
    }
    let mut per_degree = Vec::new();
    let mut components = Vec::new();
    for &(degree, max_delay) in &cfg.budget {
        let all = enumerate_terms(degree, max_delay);
        let caps: Vec<f64> = if est.rank() == 0 {
            vec![0.0; all.len()]
        } else {
            all.par_iter()
                .map(|terms| {
                    let v = ipc_targets(inputs, degree, terms, est.start(), cfg)?;
                    est.thresholded_capacity(&v)
                })
                .collect::<Result<_>>()?
        };
        per_degree.push(DegreeCapacity {
            degree,
            max_delay,
            targets: all.len(),
            total: caps.iter().sum(),
        });
        components.extend(
            all.into_iter()
                .zip(caps)
                .filter(|(_, c)| *c > 0.0)
                .map(|(terms, capacity)| IpcComponent { terms, capacity }),
        );
    }
    Ok(IpcReport {
        total: per_degree.iter().map(|d| d.total).sum(),
        per_degree,
        components,
        feature_rank: est.rank(),
    })
}
