use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::benchmarks::DEFAULT_RANK_THRESHOLD;
use crate::error::{Error, Result};
use crate::reservoir::{ClassicalKind, HamiltonianPreset, DEFAULT_U0_SEED, DEFAULT_U1_SEED};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    /// Input rotation axis over the Bloch sphere; `u` azimuth, `v` polar.
    #[default]
    NsEspAxisGrid,
    /// Damped two-qubit model; `u` CNOT exponent, `v` damping rate.
    SubsetGammaPGrid,
    /// Classical scaled or biased reference; `u` rate, `v` spectral radius.
    ClassicalReference,
}

impl Experiment {
    pub fn parse(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| Error::Config(format!("unknown experiment {s:?}")))
    }

    fn default_grid(self) -> (usize, usize) {
        match self {
            Experiment::NsEspAxisGrid => (60, 30),
            Experiment::SubsetGammaPGrid => (21, 21),
            Experiment::ClassicalReference => (11, 11),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Esp,
    NsEsp,
    Narma2,
    Narma10,
    Mc,
    Ipc,
    Rank,
    SubsetIndicators,
}

impl Metric {
    pub fn parse(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.trim().to_string()))
            .map_err(|_| Error::Config(format!("unknown metric {s:?}")))
    }

    /// Output columns written for this metric.
    pub fn columns(self) -> &'static [&'static str] {
        match self {
            Metric::Esp => &["esp"],
            Metric::NsEsp => &["ns_esp"],
            Metric::Narma2 => &["narma2"],
            Metric::Narma10 => &["narma10"],
            Metric::Mc => &["mc", "mc_max_delay"],
            Metric::Ipc => &["ipc", "ipc_nonlinear"],
            Metric::Rank => &["rank"],
            Metric::SubsetIndicators => &["ns_q0", "ns_q1", "ns_entangling"],
        }
    }
}

/// Readout columns used by the indicator and task metrics.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReadoutSubset {
    #[default]
    All,
    /// Strings supported on qubit 0.
    Q0,
    /// Strings supported on qubit 1.
    Q1,
    /// Strings with a non-identity letter on both qubits.
    Entangling,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Lengths {
    pub indicator: usize,
    pub window: usize,
    pub n_inputs: usize,
    pub n_states: usize,
    pub narma: usize,
    pub narma_sequences: usize,
    pub capacity: usize,
    pub capacity_washout: usize,
    pub mc_max_delay: usize,
    pub rank: usize,
    pub rank_washout: usize,
}

impl Default for Lengths {
    fn default() -> Self {
        Lengths {
            indicator: 200,
            window: 10,
            n_inputs: 4,
            n_states: 3,
            narma: 20_000,
            narma_sequences: 5,
            capacity: 100_000,
            capacity_washout: 30_000,
            mc_max_delay: 300,
            rank: 10_000,
            rank_washout: 3_000,
        }
    }
}

/// Upper bound on every sequence length.
pub const MAX_LENGTH: usize = 10_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub experiment: Experiment,
    /// Points along `u`; experiment default when absent.
    pub u_count: Option<usize>,
    /// Points along `v`; experiment default when absent.
    pub v_count: Option<usize>,
    pub metrics: Vec<Metric>,
    pub preset: HamiltonianPreset,
    pub u0_seed: u64,
    pub u1_seed: u64,
    pub classical_kind: ClassicalKind,
    pub classical_size: usize,
    /// Range of the classical rate along `u`.
    pub rate_range: (f64, f64),
    /// Range of the inner spectral radius along `v`.
    pub radius_range: (f64, f64),
    pub readout: ReadoutSubset,
    pub lengths: Lengths,
    pub ridge: f64,
    pub ipc_budget: Vec<(usize, usize)>,
    pub surrogate_count: usize,
    pub rank_threshold: f64,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    /// Worker threads; `0` uses every available core.
    pub workers: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            experiment: Experiment::NsEspAxisGrid,
            u_count: None,
            v_count: None,
            metrics: vec![Metric::Esp, Metric::NsEsp],
            preset: HamiltonianPreset::H1,
            u0_seed: DEFAULT_U0_SEED,
            u1_seed: DEFAULT_U1_SEED,
            classical_kind: ClassicalKind::Scaled,
            classical_size: 20,
            rate_range: (0.9, 1.1),
            radius_range: (0.1, 0.9),
            readout: ReadoutSubset::All,
            lengths: Lengths::default(),
            ridge: 0.0,
            ipc_budget: vec![(1, 300), (2, 100), (3, 30), (4, 10), (5, 10)],
            surrogate_count: 100,
            rank_threshold: DEFAULT_RANK_THRESHOLD,
            seed: 0,
            out: None,
            format: OutputFormat::Csv,
            workers: 0,
        }
    }
}

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

impl SweepConfig {
    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| config_err(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| Error::Json {
            path: path.to_path_buf(),
            source,
        })
    }

    /// `(u_count, v_count)` with experiment defaults filled in.
    pub fn grid(&self) -> (usize, usize) {
        let (u, v) = self.experiment.default_grid();
        (self.u_count.unwrap_or(u), self.v_count.unwrap_or(v))
    }

    /// Copy with grid defaults made explicit and metrics deduplicated.
    pub fn resolved(&self) -> Result<Self> {
        let mut cfg = self.clone();
        let (u, v) = self.grid();
        cfg.u_count = Some(u);
        cfg.v_count = Some(v);
        let mut seen = Vec::new();
        for m in &self.metrics {
            if !seen.contains(m) {
                seen.push(*m);
            }
        }
        cfg.metrics = seen;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let (u, v) = self.grid();
        if u < 2 || v < 2 {
            return Err(config_err(format!("grid {u}x{v}: both counts must be >= 2")));
        }
        if self.metrics.is_empty() {
            return Err(config_err("metric set is empty"));
        }
        if self.experiment == Experiment::ClassicalReference {
            if let Some(m) = self.metrics.iter().find(|m| !matches!(m, Metric::Esp | Metric::NsEsp)) {
                return Err(config_err(format!(
                    "metric {m:?} is not available for the classical reference"
                )));
            }
            let (lo, hi) = self.rate_range;
            let positive = self.classical_kind == ClassicalKind::Biased || lo > 0.0;
            if !(lo < hi && lo.is_finite() && hi.is_finite() && positive) {
                return Err(config_err(format!("rate range ({lo}, {hi}) is invalid")));
            }
            let (lo, hi) = self.radius_range;
            if !(0.0 < lo && lo < hi && hi < 1.0) {
                return Err(config_err(format!("spectral radius range ({lo}, {hi}) is invalid")));
            }
            if self.classical_size == 0 {
                return Err(config_err("classical_size must be >= 1"));
            }
        }
        let l = &self.lengths;
        for (name, value) in [
            ("indicator", l.indicator),
            ("narma", l.narma),
            ("capacity", l.capacity),
            ("rank", l.rank),
        ] {
            if value > MAX_LENGTH {
                return Err(config_err(format!("length {name} = {value} exceeds {MAX_LENGTH}")));
            }
        }
        if l.window == 0 || l.indicator <= l.window {
            return Err(config_err(format!(
                "indicator length {} must exceed the window {} (>= 1)",
                l.indicator, l.window
            )));
        }
        if l.n_inputs == 0 || l.n_states < 2 {
            return Err(config_err("indicators need n_inputs >= 1 and n_states >= 2"));
        }
        if l.narma < 100 || l.narma_sequences == 0 {
            return Err(config_err("NARMA needs length >= 100 and at least one sequence"));
        }
        let max_delay = self
            .ipc_budget
            .iter()
            .map(|&(_, k)| k)
            .chain(std::iter::once(l.mc_max_delay))
            .max()
            .unwrap_or(0);
        if l.mc_max_delay == 0 || l.capacity_washout < max_delay || l.capacity <= l.capacity_washout + 1 {
            return Err(config_err(format!(
                "capacity washout {} must cover the largest delay {max_delay} and leave rows of the length {}",
                l.capacity_washout, l.capacity
            )));
        }
        if self.metrics.contains(&Metric::Ipc) && (self.ipc_budget.is_empty() || self.ipc_budget.iter().any(|&(d, _)| d == 0)) {
            return Err(config_err("IPC budget must be nonempty with degrees >= 1"));
        }
        if l.rank <= l.rank_washout {
            return Err(config_err("rank length must exceed its washout"));
        }
        if !(self.ridge >= 0.0 && self.ridge.is_finite()) {
            return Err(config_err(format!("ridge {} must be finite and >= 0", self.ridge)));
        }
        if !(self.rank_threshold > 0.0 && self.rank_threshold < 1.0) {
            return Err(config_err(format!("rank threshold {} must be in (0, 1)", self.rank_threshold)));
        }
        Ok(())
    }

    /// Output columns in order, after `u` and `v`.
    pub fn columns(&self) -> Vec<String> {
        self.metrics
            .iter()
            .flat_map(|m| m.columns().iter().map(|c| c.to_string()))
            .collect()
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// SHA-256 of the canonical JSON of the resolved config, without the
    /// output path, format and worker count.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.out = None;
        c.format = OutputFormat::Csv;
        c.workers = 0;
        let digest = Sha256::digest(serde_json::to_vec(&c).expect("config serializes"));
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_gives_defaults() {
        let cfg = SweepConfig::from_json_str("{}").unwrap();
        assert_eq!(cfg, SweepConfig::default());
        assert_eq!(cfg.grid(), (60, 30));
        let sub = SweepConfig::from_json_str(r#"{"experiment": "subset_gamma_p_grid"}"#).unwrap();
        assert_eq!(sub.grid(), (21, 21));
    }

    #[test]
    fn resolved_round_trips() {
        let cfg = SweepConfig::from_json_str(
            r#"{"metrics": ["esp", "mc", "esp"], "u_count": 4, "lengths": {"window": 5}}"#,
        )
        .unwrap()
        .resolved()
        .unwrap();
        assert_eq!(cfg.metrics, vec![Metric::Esp, Metric::Mc]);
        assert_eq!(cfg.v_count, Some(30));
        assert_eq!(cfg.lengths.window, 5);
        assert_eq!(cfg.lengths.indicator, 200);
        let back = SweepConfig::from_json_str(&cfg.to_json_pretty()).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(cfg.columns(), vec!["esp", "mc", "mc_max_delay"]);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        for doc in [
            r#"{"metrics": []}"#,
            r#"{"u_count": 1}"#,
            r#"{"lengths": {"indicator": 10, "window": 10}}"#,
            r#"{"lengths": {"capacity_washout": 100}}"#,
            r#"{"experiment": "classical_reference", "metrics": ["narma2"]}"#,
            r#"{"ridge": -1.0}"#,
        ] {
            let cfg = SweepConfig::from_json_str(doc).unwrap();
            assert!(cfg.resolved().is_err(), "{doc}");
        }
        assert!(SweepConfig::from_json_str(r#"{"metric": ["esp"]}"#).is_err());
        assert!(SweepConfig::from_json_str(r#"{"metrics": ["bogus"]}"#).is_err());
    }

    #[test]
    fn hash_ignores_output_plumbing() {
        let a = SweepConfig::default();
        let mut b = a.clone();
        b.workers = 8;
        b.out = Some("x.csv".into());
        b.format = OutputFormat::Json;
        assert_eq!(a.hash(), b.hash());
        b.seed = 1;
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
    }

    #[test]
    fn names_parse() {
        assert_eq!(Metric::parse("ns_esp").unwrap(), Metric::NsEsp);
        assert_eq!(Experiment::parse("subset_gamma_p_grid").unwrap(), Experiment::SubsetGammaPGrid);
        assert!(Metric::parse("nsesp").is_err());
    }
}
