//! Classical echo-state reference systems with explicit time scaling or
//! drift, used as ground truth for the non-stationary indicators.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TimeSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassicalKind {
    /// `y_{t+1} = c^{t+1} f(y_t / c^t, u_t)`
    Scaled,
    /// `y_{t+1} = f(y_t - b t, u_t) + b (t + 1)`
    Biased,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassicalRefConfig {
    pub kind: ClassicalKind,
    pub rate: f64,
    pub size: usize,
    pub spectral_radius: f64,
    pub seed: u64,
}

impl ClassicalRefConfig {
    pub fn scaled(rate: f64) -> Self {
        ClassicalRefConfig {
            kind: ClassicalKind::Scaled,
            rate,
            ..Self::default()
        }
    }

    pub fn biased(rate: f64) -> Self {
        ClassicalRefConfig {
            kind: ClassicalKind::Biased,
            rate,
            ..Self::default()
        }
    }
}

impl Default for ClassicalRefConfig {
    fn default() -> Self {
        ClassicalRefConfig {
            kind: ClassicalKind::Scaled,
            rate: 1.0,
            size: 20,
            spectral_radius: 0.9,
            seed: 7,
        }
    }
}

/// `f(x, u) = tanh(W x + w_in u + b)` with `ρ(W)` set to the configured
/// spectral radius.
#[derive(Clone, Debug)]
pub struct InnerMap {
    weights: DMatrix<f64>,
    input_weights: DVector<f64>,
    bias: DVector<f64>,
}

impl InnerMap {
    pub fn new(size: usize, spectral_radius: f64, seed: u64) -> Result<Self> {
        if size == 0 {
            return Err(Error::Config("inner reservoir size must be positive".into()));
        }
        if !(spectral_radius > 0.0 && spectral_radius < 1.0) {
            return Err(Error::Parameter {
                name: "spectral_radius",
                value: spectral_radius,
                expected: "in (0, 1)",
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let raw = DMatrix::from_fn(size, size, |_, _| rng.random_range(-1.0..1.0));
        let radius = spectral_radius_of(&raw);
        let weights = raw.scale(spectral_radius / radius);
        let input_weights = DVector::from_fn(size, |_, _| rng.random_range(-1.0..1.0));
        let bias = DVector::from_fn(size, |_, _| rng.random_range(-0.2..0.2));
        Ok(InnerMap {
            weights,
            input_weights,
            bias,
        })
    }

    pub fn from_config(cfg: &ClassicalRefConfig) -> Result<Self> {
        Self::new(cfg.size, cfg.spectral_radius, cfg.seed)
    }

    pub fn size(&self) -> usize {
        self.bias.len()
    }

    pub fn spectral_radius(&self) -> f64 {
        spectral_radius_of(&self.weights)
    }

    pub fn apply(&self, x: &DVector<f64>, u: f64) -> DVector<f64> {
        (&self.weights * x + &self.input_weights * u + &self.bias).map(f64::tanh)
    }

    /// Plain trajectory `x_{t+1} = f(x_t, u_t)`; row `t` holds `x_{t+1}`.
    pub fn run(&self, inputs: &[f64], x0: &[f64]) -> Result<TimeSeries> {
        let mut x = self.initial(x0)?;
        let mut out = TimeSeries::with_capacity(self.size(), inputs.len());
        for &u in inputs {
            x = self.apply(&x, u);
            out.push(x.as_slice())?;
        }
        Ok(out)
    }

    fn initial(&self, x0: &[f64]) -> Result<DVector<f64>> {
        if x0.len() != self.size() {
            return Err(Error::LengthMismatch(format!(
                "initial state of length {} for reservoir of size {}",
                x0.len(),
                self.size()
            )));
        }
        Ok(DVector::from_column_slice(x0))
    }
}

fn spectral_radius_of(m: &DMatrix<f64>) -> f64 {
    m.complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// Runs the scaled or biased reference system; row `t` holds `y_{t+1}`.
pub fn run_classical_reference(
    cfg: &ClassicalRefConfig,
    inputs: &[f64],
    y0: &[f64],
) -> Result<TimeSeries> {
    let map = InnerMap::from_config(cfg)?;
    run_with_map(&map, cfg.kind, cfg.rate, inputs, y0)
}

pub fn run_with_map(
    map: &InnerMap,
    kind: ClassicalKind,
    rate: f64,
    inputs: &[f64],
    y0: &[f64],
) -> Result<TimeSeries> {
    if kind == ClassicalKind::Scaled && (rate.is_nan() || rate <= 0.0) {
        return Err(Error::Parameter {
            name: "rate",
            value: rate,
            expected: "> 0 for the scaled system",
        });
    }
    let mut y = map.initial(y0)?;
    let mut out = TimeSeries::with_capacity(map.size(), inputs.len());
    for (t, &u) in inputs.iter().enumerate() {
        y = match kind {
            ClassicalKind::Scaled => {
                let now = rate.powi(t as i32);
                let next = rate.powi(t as i32 + 1);
                if !now.is_finite() || !next.is_finite() || now == 0.0 || next == 0.0 {
                    return Err(Error::Overflow {
                        what: "scale factor c^t",
                        step: t,
                    });
                }
                map.apply(&y.unscale(now), u).scale(next)
            }
            ClassicalKind::Biased => {
                let shift = rate * t as f64;
                map.apply(&y.add_scalar(-shift), u).add_scalar(rate * (t + 1) as f64)
            }
        };
        out.push(y.as_slice())?;
    }
    Ok(out)
}

/// Shift-register reservoir of dimension `dim`: row `t` holds
/// `(u_{t-1}, ..., u_{t-dim})`, zero before the first input.
pub fn delay_line(inputs: &[f64], dim: usize) -> TimeSeries {
    let mut out = TimeSeries::with_capacity(dim, inputs.len());
    let mut row = vec![0.0; dim];
    for t in 0..inputs.len() {
        for (k, r) in row.iter_mut().enumerate() {
            *r = if t > k { inputs[t - 1 - k] } else { 0.0 };
        }
        out.push(&row).expect("row width is dim");
    }
    out
}
