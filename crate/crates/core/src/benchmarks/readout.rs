use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmat::{numerical_rank, pseudo_inverse, RealMatrix};
use crate::series::TimeSeries;

/// Washout, train and test segments of a sequence.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub washout_fraction: f64,
    pub train_fraction: f64,
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec {
            washout_fraction: 0.5,
            train_fraction: 0.8,
        }
    }
}

/// Row boundaries `washout ≤ train_end < len` of a split.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Segments {
    pub washout: usize,
    pub train_end: usize,
    pub len: usize,
}

impl SplitSpec {
    pub fn segments(&self, len: usize) -> Result<Segments> {
        for (name, v) in [
            ("washout_fraction", self.washout_fraction),
            ("train_fraction", self.train_fraction),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::Parameter {
                    name: if name == "washout_fraction" {
                        "washout_fraction"
                    } else {
                        "train_fraction"
                    },
                    value: v,
                    expected: "in (0, 1)",
                });
            }
        }
        let washout = (len as f64 * self.washout_fraction).round() as usize;
        let rest = len - washout;
        let train = (rest as f64 * self.train_fraction).round() as usize;
        let seg = Segments {
            washout,
            train_end: washout + train,
            len,
        };
        if train == 0 || seg.train_end >= len {
            return Err(Error::Empty(format!(
                "split of a length-{len} sequence leaves an empty train or test segment"
            )));
        }
        Ok(seg)
    }
}

/// Relative singular-value cutoff of the least-squares pseudo-inverse.
pub const LSTSQ_REL_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct ReadoutFit {
    pub weights: Vec<f64>,
    pub segments: Segments,
    pub train_prediction: Vec<f64>,
    pub test_prediction: Vec<f64>,
    /// Set when `ridge = 0` and the train features are rank deficient, so the
    /// minimum-norm least-squares solution was returned.
    pub degenerate: bool,
}

impl ReadoutFit {
    pub fn test_rnmse(&self, target: &[f64]) -> Result<f64> {
        rnmse(&target[self.segments.train_end..], &self.test_prediction)
    }

    pub fn train_rnmse(&self, target: &[f64]) -> Result<f64> {
        rnmse(
            &target[self.segments.washout..self.segments.train_end],
            &self.train_prediction,
        )
    }
}

/// Fits `w` minimizing `‖X w - y‖² + ridge ‖w‖²` on the train segment.
///
/// No intercept is added; readouts that include the identity string carry a
/// constant column.
pub fn train_linear_readout(
    features: &TimeSeries,
    target: &[f64],
    split: &SplitSpec,
    ridge: f64,
) -> Result<ReadoutFit> {
    if features.len() != target.len() {
        return Err(Error::LengthMismatch(format!(
            "{} feature rows for {} targets",
            features.len(),
            target.len()
        )));
    }
    if !(ridge >= 0.0 && ridge.is_finite()) {
        return Err(Error::Parameter {
            name: "ridge",
            value: ridge,
            expected: "finite and >= 0",
        });
    }
    let seg = split.segments(target.len())?;
    let x = features.to_matrix();
    let x_train = x.rows(seg.washout, seg.train_end - seg.washout).into_owned();
    let y_train = DVector::from_column_slice(&target[seg.washout..seg.train_end]);

    let (weights, degenerate) = if ridge == 0.0 {
        let rank = numerical_rank(&x_train, LSTSQ_REL_TOL);
        let w = pseudo_inverse(&x_train, LSTSQ_REL_TOL) * &y_train;
        (w, rank < x_train.ncols())
    } else {
        let gram = x_train.transpose() * &x_train + RealMatrix::identity(x.ncols(), x.ncols()) * ridge;
        let rhs = x_train.transpose() * &y_train;
        let chol = gram
            .cholesky()
            .ok_or_else(|| Error::Config("ridge system is not positive definite".into()))?;
        (chol.solve(&rhs), false)
    };
    let predict = |m: RealMatrix| -> Vec<f64> { (m * &weights).iter().copied().collect() };
    let train_prediction = predict(x_train);
    let test_prediction = predict(x.rows(seg.train_end, seg.len - seg.train_end).into_owned());
    Ok(ReadoutFit {
        weights: weights.iter().copied().collect(),
        segments: seg,
        train_prediction,
        test_prediction,
        degenerate,
    })
}

/// `sqrt(mean((ŷ - y)²) / Var(y))` with the population variance.
pub fn rnmse(target: &[f64], prediction: &[f64]) -> Result<f64> {
    if target.len() != prediction.len() {
        return Err(Error::LengthMismatch(format!(
            "{} targets against {} predictions",
            target.len(),
            prediction.len()
        )));
    }
    if target.is_empty() {
        return Err(Error::Empty("RNMSE of an empty sequence".into()));
    }
    let n = target.len() as f64;
    let mean = target.iter().sum::<f64>() / n;
    let var = target.iter().map(|y| (y - mean) * (y - mean)).sum::<f64>() / n;
    if var == 0.0 {
        return Err(Error::ConstantTarget);
    }
    let mse = target
        .iter()
        .zip(prediction)
        .map(|(y, p)| (p - y) * (p - y))
        .sum::<f64>()
        / n;
    Ok((mse / var).sqrt())
}
