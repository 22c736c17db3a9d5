use crate::error::{Error, Result};
use crate::qmat::{PauliString, RealMatrix};
use crate::series::TimeSeries;

/// Restricts indicators to a subset of readout columns or a linear subspace.
#[derive(Clone, Debug, PartialEq)]
pub enum SubsetSelection {
    All,
    Columns(Vec<usize>),
    /// Square idempotent matrix acting on readout rows.
    Projection(RealMatrix),
}

const IDEMPOTENCE_TOL: f64 = 1e-10;

impl SubsetSelection {
    pub fn columns(columns: Vec<usize>) -> Result<Self> {
        if columns.is_empty() {
            return Err(Error::Empty("subset selection has no columns".into()));
        }
        Ok(SubsetSelection::Columns(columns))
    }

    pub fn projection(p: RealMatrix) -> Result<Self> {
        if !p.is_square() || p.nrows() == 0 {
            return Err(Error::BadDimension {
                rows: p.nrows(),
                cols: p.ncols(),
            });
        }
        let residual = (&p * &p - &p).amax();
        if residual > IDEMPOTENCE_TOL {
            return Err(Error::Config(format!(
                "projection is not idempotent (max |P² - P| = {residual:e})"
            )));
        }
        if p.amax() == 0.0 {
            return Err(Error::Empty("projection onto the zero subspace".into()));
        }
        Ok(SubsetSelection::Projection(p))
    }

    fn by_predicate(basis: &[PauliString], keep: impl Fn(&PauliString) -> bool) -> Result<Self> {
        let cols: Vec<usize> = basis
            .iter()
            .enumerate()
            .filter(|(_, p)| keep(p))
            .map(|(i, _)| i)
            .collect();
        Self::columns(cols)
    }

    /// Strings acting as the identity on every qubit outside `qubits`.
    pub fn supported_on(basis: &[PauliString], qubits: &[usize]) -> Result<Self> {
        Self::by_predicate(basis, |p| p.supported_within(qubits))
    }

    /// Observables of the damped qubit 0.
    pub fn damping_subsystem(basis: &[PauliString]) -> Result<Self> {
        Self::supported_on(basis, &[0])
    }

    /// Observables of qubit 1.
    pub fn non_damping_subsystem(basis: &[PauliString]) -> Result<Self> {
        Self::supported_on(basis, &[1])
    }

    /// Strings with a non-identity letter on every qubit.
    pub fn entangling(basis: &[PauliString]) -> Result<Self> {
        Self::by_predicate(basis, PauliString::is_full_weight)
    }

    pub fn validate(&self, width: usize) -> Result<()> {
        match self {
            SubsetSelection::All => Ok(()),
            SubsetSelection::Columns(cols) => {
                if cols.is_empty() {
                    return Err(Error::Empty("subset selection has no columns".into()));
                }
                match cols.iter().find(|&&c| c >= width) {
                    Some(c) => Err(Error::Config(format!(
                        "selected column {c} is outside a readout of width {width}"
                    ))),
                    None => Ok(()),
                }
            }
            SubsetSelection::Projection(p) => {
                if p.ncols() != width {
                    return Err(Error::BadDimension {
                        rows: p.nrows(),
                        cols: p.ncols(),
                    });
                }
                Ok(())
            }
        }
    }

    pub fn apply(&self, series: &TimeSeries) -> Result<TimeSeries> {
        self.validate(series.width())?;
        Ok(match self {
            SubsetSelection::All => series.clone(),
            SubsetSelection::Columns(cols) => series.select_columns(cols),
            SubsetSelection::Projection(p) => {
                let projected = series.to_matrix() * p.transpose();
                let rows: Vec<Vec<f64>> = projected
                    .row_iter()
                    .map(|r| r.iter().copied().collect())
                    .collect();
                TimeSeries::from_rows(p.nrows(), &rows)?
            }
        })
    }
}
