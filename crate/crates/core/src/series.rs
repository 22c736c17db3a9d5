use crate::error::{Error, Result};
use crate::qmat::RealMatrix;

/// Time-major table of real observations: one row per time step.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeSeries {
    width: usize,
    data: Vec<f64>,
}

impl TimeSeries {
    pub fn new(width: usize) -> Self {
        TimeSeries {
            width,
            data: Vec::new(),
        }
    }

    pub fn with_capacity(width: usize, rows: usize) -> Self {
        TimeSeries {
            width,
            data: Vec::with_capacity(width * rows),
        }
    }

    pub fn from_rows<R: AsRef<[f64]>>(width: usize, rows: &[R]) -> Result<Self> {
        let mut s = Self::with_capacity(width, rows.len());
        for r in rows {
            s.push(r.as_ref())?;
        }
        Ok(s)
    }

    pub fn push(&mut self, row: &[f64]) -> Result<()> {
        if row.len() != self.width {
            return Err(Error::LengthMismatch(format!(
                "row of length {} pushed into series of width {}",
                row.len(),
                self.width
            )));
        }
        self.data.extend_from_slice(row);
        Ok(())
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.data.len().checked_div(self.width).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn row(&self, t: usize) -> &[f64] {
        &self.data[t * self.width..(t + 1) * self.width]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.width.max(1))
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows().map(|r| r[j]).collect()
    }

    pub fn select_columns(&self, columns: &[usize]) -> TimeSeries {
        let mut out = TimeSeries::with_capacity(columns.len(), self.len());
        for r in self.rows() {
            out.data.extend(columns.iter().map(|&j| r[j]));
        }
        out
    }

    /// Applies `f` to every row, producing a series of width `width`.
    pub fn map_rows(&self, width: usize, mut f: impl FnMut(&[f64]) -> Vec<f64>) -> Result<Self> {
        let mut out = TimeSeries::with_capacity(width, self.len());
        for r in self.rows() {
            out.push(&f(r))?;
        }
        Ok(out)
    }

    /// Rows `start..` as a dense matrix.
    pub fn to_matrix_from(&self, start: usize) -> RealMatrix {
        let rows = self.len().saturating_sub(start);
        RealMatrix::from_row_slice(rows, self.width, &self.data[start * self.width..])
    }

    pub fn to_matrix(&self) -> RealMatrix {
        self.to_matrix_from(0)
    }

    pub fn scaled(&self, alpha: f64) -> TimeSeries {
        TimeSeries {
            width: self.width,
            data: self.data.iter().map(|v| v * alpha).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn push_and_slice() {
        let s = TimeSeries::from_rows(2, &[[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]]).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.row(1), &[3.0, 4.0]);
        assert_eq!(s.column(1), vec![2.0, 4.0, 6.0]);
        assert_eq!(s.select_columns(&[1]).row(2), &[6.0]);
        let m = s.to_matrix_from(1);
        assert_eq!(m.shape(), (2, 2));
        assert_eq!(m[(1, 0)], 5.0);
        assert!(TimeSeries::new(2).push(&[1.0]).is_err());
    }
}
