use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One grid coordinate; `index` is the row-major position.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub index: usize,
    pub u: f64,
    pub v: f64,
}

fn check_counts(u_count: usize, v_count: usize) -> Result<()> {
    if u_count < 2 || v_count < 2 {
        return Err(Error::Config(format!(
            "grid {u_count}x{v_count}: both counts must be >= 2"
        )));
    }
    Ok(())
}

/// `n` points from `lo` to `hi`, both ends exact.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

/// Bloch-sphere axes as a flattened map: one row per polar angle from `0`
/// (north, first row) to `π` (south, last row), azimuth `2π j / count`
/// across each row.
pub fn flatten_sphere(azimuth_count: usize, polar_count: usize) -> Result<Vec<GridPoint>> {
    check_counts(azimuth_count, polar_count)?;
    let polar = linspace(0.0, PI, polar_count);
    let azimuth: Vec<f64> = (0..azimuth_count)
        .map(|j| TAU * j as f64 / azimuth_count as f64)
        .collect();
    Ok(rows_of(&azimuth, &polar))
}

/// Row-major grid over `[u_lo, u_hi] × [v_lo, v_hi]`, rows along `v`.
pub fn plane_grid(
    u_range: (f64, f64),
    u_count: usize,
    v_range: (f64, f64),
    v_count: usize,
) -> Result<Vec<GridPoint>> {
    check_counts(u_count, v_count)?;
    Ok(rows_of(
        &linspace(u_range.0, u_range.1, u_count),
        &linspace(v_range.0, v_range.1, v_count),
    ))
}

fn rows_of(us: &[f64], vs: &[f64]) -> Vec<GridPoint> {
    vs.iter()
        .flat_map(|&v| us.iter().map(move |&u| (u, v)))
        .enumerate()
        .map(|(index, (u, v))| GridPoint { index, u, v })
        .collect()
}
