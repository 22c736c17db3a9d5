use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `y_t = a y_{t-1} + b y_{t-1} Σ_{i=t-k}^{t-1} y_i + c u_{t-1} u_{t-k} + d`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NarmaConfig {
    pub order: usize,
    pub coefficients: [f64; 4],
    pub input_low: f64,
    pub input_high: f64,
}

/// Magnitude beyond which a NARMA sequence is considered divergent.
pub const NARMA_BLOWUP: f64 = 1e3;

impl NarmaConfig {
    pub fn new(order: usize) -> Self {
        NarmaConfig {
            order,
            coefficients: [0.3, 0.05, 1.5, 0.1],
            input_low: 0.0,
            input_high: 0.5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.order < 2 {
            return Err(Error::Parameter {
                name: "order",
                value: self.order as f64,
                expected: ">= 2",
            });
        }
        if !(-1.0 <= self.input_low && self.input_low < self.input_high && self.input_high <= 1.0) {
            return Err(Error::Config(format!(
                "NARMA input range [{}, {}] must be a nonempty part of [-1, 1]",
                self.input_low, self.input_high
            )));
        }
        Ok(())
    }

    pub fn draw_inputs(&self, len: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..len)
            .map(|_| rng.random_range(self.input_low..self.input_high))
            .collect()
    }
}

impl Default for NarmaConfig {
    fn default() -> Self {
        Self::new(2)
    }
}

/// `y_0 ..= y_{len-1}` with `y_0 = 0` and every term of negative index zero.
fn narma_series(inputs: &[f64], cfg: &NarmaConfig, len: usize) -> Result<Vec<f64>> {
    cfg.validate()?;
    let k = cfg.order;
    let [a, b, c, d] = cfg.coefficients;
    let u = |i: isize| if i < 0 { 0.0 } else { inputs[i as usize] };
    let mut y = vec![0.0; len];
    // Running Σ_{i=t-k}^{t-1} y_i.
    let mut window = 0.0;
    for t in 1..len {
        let ti = t as isize;
        window += y[t - 1];
        if t > k {
            window -= y[t - 1 - k];
        }
        let next = a * y[t - 1] + b * y[t - 1] * window + c * u(ti - 1) * u(ti - k as isize) + d;
        if !next.is_finite() || next.abs() > NARMA_BLOWUP {
            return Err(Error::NarmaDiverged {
                order: k,
                step: t,
                value: next.abs(),
            });
        }
        y[t] = next;
    }
    Ok(y)
}

/// The NARMA sequence driven by `inputs`, one value per input.
pub fn narma_generate(inputs: &[f64], cfg: &NarmaConfig) -> Result<Vec<f64>> {
    narma_series(inputs, cfg, inputs.len())
}

/// Targets aligned with reservoir readouts: the readout taken after
/// consuming `u_t` is paired with `y_{t+1}`, the first value that depends
/// on `u_t`.
pub fn narma_targets(inputs: &[f64], cfg: &NarmaConfig) -> Result<Vec<f64>> {
    let mut y = narma_series(inputs, cfg, inputs.len() + 1)?;
    y.remove(0);
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(u: &[f64], k: usize) -> Vec<f64> {
        let n = u.len();
        let mut y = vec![0.0; n];
        for t in 1..n {
            let s: f64 = y[t.saturating_sub(k)..t].iter().sum();
            let late = if t >= k { u[t - k] } else { 0.0 };
            y[t] = 0.3 * y[t - 1] + 0.05 * y[t - 1] * s + 1.5 * u[t - 1] * late + 0.1;
        }
        y
    }

    #[test]
    fn zero_input_reaches_fixed_point() {
        let y = narma_generate(&[0.0; 201], &NarmaConfig::new(2)).unwrap();
        let fixed = (0.7 - 0.45f64.sqrt()) / 0.2;
        assert!((y[200] - fixed).abs() < 1e-9);
        assert!((fixed - 0.145898).abs() < 1e-6);
    }

    #[test]
    fn early_outputs_ignore_inputs() {
        let cfg = NarmaConfig::new(10);
        let a = narma_generate(&cfg.draw_inputs(50, 1), &cfg).unwrap();
        let b = narma_generate(&cfg.draw_inputs(50, 2), &cfg).unwrap();
        assert_eq!(a[..10], b[..10]);
        assert_ne!(a[10], b[10]);
        assert_eq!(a[0], 0.0);
        assert_eq!(a[1], 0.1);
    }

    #[test]
    fn matches_direct_recursion() {
        for k in [2, 5, 10] {
            let cfg = NarmaConfig::new(k);
            let u = cfg.draw_inputs(500, k as u64);
            let y = narma_generate(&u, &cfg).unwrap();
            for (p, q) in y.iter().zip(naive(&u, k)) {
                assert!((p - q).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let cfg = NarmaConfig::new(2);
        let u = cfg.draw_inputs(1000, 3);
        assert!(u.iter().all(|&x| (0.0..0.5).contains(&x)));
        assert_eq!(narma_generate(&u, &cfg).unwrap(), narma_generate(&cfg.draw_inputs(1000, 3), &cfg).unwrap());
    }

    #[test]
    fn perturbation_enters_one_step_later() {
        let cfg = NarmaConfig::new(2);
        let u = cfg.draw_inputs(100, 4);
        let y = narma_generate(&u, &cfg).unwrap();
        let mut v = u.clone();
        v[40] += 0.1;
        let z = narma_generate(&v, &cfg).unwrap();
        assert_eq!(y[..=40], z[..=40]);
        assert_ne!(y[41], z[41]);
    }

    #[test]
    fn targets_are_shifted_sequence() {
        let cfg = NarmaConfig::new(2);
        let u = cfg.draw_inputs(100, 5);
        let y = narma_generate(&u, &cfg).unwrap();
        let t = narma_targets(&u, &cfg).unwrap();
        assert_eq!(t.len(), 100);
        assert_eq!(t[..99], y[1..]);
    }

    #[test]
    fn divergence_is_reported() {
        let mut cfg = NarmaConfig::new(2);
        cfg.coefficients = [1.5, 0.05, 1.5, 0.1];
        let err = narma_generate(&[0.4; 100], &cfg).unwrap_err();
        assert!(matches!(err, Error::NarmaDiverged { order: 2, .. }));
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(narma_generate(&[0.1; 10], &NarmaConfig::new(1)).is_err());
        let mut cfg = NarmaConfig::new(2);
        cfg.input_high = 2.0;
        assert!(cfg.validate().is_err());
    }
}
