use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmat::singular_values;
use crate::series::TimeSeries;

/// Default `rel_threshold` of [`trajectory_rank`].
pub const DEFAULT_RANK_THRESHOLD: f64 = 1e-6;

/// Significant singular values of a trajectory, counted against
/// `rel_threshold × σ_max` of the uncentered post-washout matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrajectoryRank {
    /// Rank after subtracting the column means.
    pub centered: usize,
    /// Rank of the rows as recorded.
    pub raw: usize,
}

pub fn trajectory_rank(
    features: &TimeSeries,
    washout: usize,
    rel_threshold: f64,
) -> Result<TrajectoryRank> {
    if features.len() <= washout {
        return Err(Error::Empty(format!(
            "no rows left after a washout of {washout} on a length-{} trajectory",
            features.len()
        )));
    }
    let raw = features.to_matrix_from(washout);
    let raw_sv = singular_values(&raw);
    let sigma_max = raw_sv.first().copied().unwrap_or(0.0);
    let count = |sv: &[f64]| {
        if sigma_max == 0.0 {
            0
        } else {
            sv.iter().filter(|&&s| s > rel_threshold * sigma_max).count()
        }
    };
    let mut centered = raw;
    let n = centered.nrows() as f64;
    for mut col in centered.column_iter_mut() {
        let mean = col.sum() / n;
        col.add_scalar_mut(-mean);
    }
    Ok(TrajectoryRank {
        centered: count(&singular_values(&centered)),
        raw: count(&raw_sv),
    })
}
