//! Windowed statistics and echo-state diagnostics on readout trajectories.
//!
//! Row `t` of a trajectory is the readout after `t + 1` inputs. The
//! non-stationary indicator uses the window ending at row `w` as its
//! reference, so it is defined for rows `t >= w`.

mod ensemble;
mod selection;

pub use ensemble::{
    ensemble_from_parts, indicator_ensemble, multi_selection_ensemble, subset_indicator_ensemble,
    EnsembleConfig, IndicatorTrace, SummaryMode,
};
pub use selection::SubsetSelection;

use crate::error::{Error, Result};
use crate::series::TimeSeries;

/// Below this variance norm the non-stationary indicator reports the
/// sentinel instead of dividing.
pub const VARIANCE_FLOOR: f64 = 1e-30;

#[derive(Clone, Debug, PartialEq)]
pub struct WindowStats {
    pub window: usize,
    pub mean: Vec<f64>,
    /// Population variance per component.
    pub variance: Vec<f64>,
}

impl WindowStats {
    pub fn variance_norm(&self) -> f64 {
        euclidean(&self.variance)
    }
}

/// Mean and variance of rows `t - w + 1 ..= t`.
pub fn windowed_stats(series: &TimeSeries, t: usize, w: usize) -> Result<WindowStats> {
    if w == 0 {
        return Err(Error::Parameter {
            name: "window",
            value: 0.0,
            expected: ">= 1",
        });
    }
    if t + 1 < w || t >= series.len() {
        return Err(Error::InsufficientHistory {
            window: w,
            index: t,
            needed: w - 1,
        });
    }
    let n = series.width();
    let rows = t + 1 - w..=t;
    let mut mean = vec![0.0; n];
    for r in rows.clone() {
        for (m, x) in mean.iter_mut().zip(series.row(r)) {
            *m += x;
        }
    }
    mean.iter_mut().for_each(|m| *m /= w as f64);
    let mut variance = vec![0.0; n];
    for r in rows {
        for ((v, x), m) in variance.iter_mut().zip(series.row(r)).zip(&mean) {
            *v += (x - m) * (x - m);
        }
    }
    variance.iter_mut().for_each(|v| *v /= w as f64);
    Ok(WindowStats {
        window: w,
        mean,
        variance,
    })
}

pub fn euclidean(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn euclidean_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn check_pair(a: &TimeSeries, b: &TimeSeries, t: usize) -> Result<()> {
    if a.width() != b.width() || a.len() != b.len() {
        return Err(Error::LengthMismatch(format!(
            "trajectories of shape {}x{} and {}x{}",
            a.len(),
            a.width(),
            b.len(),
            b.width()
        )));
    }
    if t >= a.len() {
        return Err(Error::InsufficientHistory {
            window: 1,
            index: t,
            needed: a.len().saturating_sub(1),
        });
    }
    Ok(())
}

fn check_s0(s0_dist: f64) -> Result<()> {
    if s0_dist == 0.0 {
        return Err(Error::IdenticalInitialStates);
    }
    if !(s0_dist > 0.0 && s0_dist.is_finite()) {
        return Err(Error::Parameter {
            name: "s0_dist",
            value: s0_dist,
            expected: "finite and > 0",
        });
    }
    Ok(())
}

/// `‖x_t - x'_t‖ / s0_dist`
pub fn esp_indicator(a: &TimeSeries, b: &TimeSeries, s0_dist: f64, t: usize) -> Result<f64> {
    check_s0(s0_dist)?;
    check_pair(a, b, t)?;
    Ok(euclidean_distance(a.row(t), b.row(t)) / s0_dist)
}

/// Value of the non-stationary indicator, with a flag for the `+∞` sentinel
/// returned when the current windowed variance vanishes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NsValue {
    pub value: f64,
    pub sentinel: bool,
}

/// `esp(t) · sqrt(min ‖Var_w at w‖) / sqrt(min ‖Var_w at t‖)`, the minima taken
/// over the two trajectories.
pub fn ns_esp_indicator(
    a: &TimeSeries,
    b: &TimeSeries,
    s0_dist: f64,
    w: usize,
    t: usize,
) -> Result<NsValue> {
    if t < w {
        return Err(Error::InsufficientHistory {
            window: w,
            index: t,
            needed: w,
        });
    }
    let esp = esp_indicator(a, b, s0_dist, t)?;
    let reference = windowed_stats(a, w, w)?
        .variance_norm()
        .min(windowed_stats(b, w, w)?.variance_norm());
    let current = windowed_stats(a, t, w)?
        .variance_norm()
        .min(windowed_stats(b, t, w)?.variance_norm());
    if current < VARIANCE_FLOOR {
        return Ok(NsValue {
            value: f64::INFINITY,
            sentinel: true,
        });
    }
    Ok(NsValue {
        value: esp * (reference / current).sqrt(),
        sentinel: false,
    })
}
