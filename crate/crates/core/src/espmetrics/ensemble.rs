use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{esp_indicator, euclidean_distance, ns_esp_indicator, SubsetSelection};
use crate::error::{Error, Result};
use crate::qmat::{haar_random_pure_state, DensityMatrix, PauliString};
use crate::reservoir::{pauli_expectations, run_reservoir, QuantumReservoir};
use crate::series::TimeSeries;

/// How a trace is reduced to a single field value.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SummaryMode {
    /// Value at the last time step.
    #[default]
    Final,
    /// Mean over the last `n` defined time steps.
    TailMean(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    pub n_inputs: usize,
    pub n_states: usize,
    pub seq_len: usize,
    pub window: usize,
    pub seed: u64,
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        EnsembleConfig {
            n_inputs: 4,
            n_states: 3,
            seq_len: 200,
            window: 10,
            seed: 0,
        }
    }
}

impl EnsembleConfig {
    pub fn n_pairs(&self) -> usize {
        self.n_inputs * self.n_states * self.n_states.saturating_sub(1) / 2
    }

    fn validate(&self) -> Result<()> {
        if self.n_states < 2 {
            return Err(Error::Config("an indicator ensemble needs at least 2 initial states".into()));
        }
        if self.n_inputs == 0 {
            return Err(Error::Config("an indicator ensemble needs at least 1 input sequence".into()));
        }
        if self.window == 0 || self.seq_len <= self.window {
            return Err(Error::Config(format!(
                "sequence length {} must exceed the window {}",
                self.seq_len, self.window
            )));
        }
        Ok(())
    }

    /// Input sequences from `Uniform[-1, 1]` followed by Haar initial states,
    /// all drawn from one stream seeded by `seed`.
    pub fn draw(&self, n_qubits: usize) -> (Vec<Vec<f64>>, Vec<DensityMatrix>) {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let inputs = (0..self.n_inputs)
            .map(|_| (0..self.seq_len).map(|_| rng.random_range(-1.0..=1.0)).collect())
            .collect();
        let states = (0..self.n_states)
            .map(|_| haar_random_pure_state(n_qubits, &mut rng))
            .collect();
        (inputs, states)
    }
}

/// Ensemble-averaged indicators at rows `window..seq_len`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndicatorTrace {
    pub window: usize,
    pub times: Vec<usize>,
    pub esp: Vec<f64>,
    pub ns: Vec<f64>,
    /// Number of pairs whose non-stationary value hit the sentinel.
    pub sentinel_pairs: Vec<usize>,
    pub pairs: usize,
}

impl IndicatorTrace {
    pub fn final_esp(&self) -> f64 {
        *self.esp.last().expect("trace is never empty")
    }

    pub fn final_ns(&self) -> f64 {
        *self.ns.last().expect("trace is never empty")
    }

    pub fn final_sentinel(&self) -> bool {
        *self.sentinel_pairs.last().expect("trace is never empty") > 0
    }

    /// `(esp, ns)` reduced according to `mode`.
    pub fn summary(&self, mode: SummaryMode) -> (f64, f64) {
        match mode {
            SummaryMode::Final => (self.final_esp(), self.final_ns()),
            SummaryMode::TailMean(n) => {
                let n = n.clamp(1, self.esp.len());
                let tail = |v: &[f64]| v[v.len() - n..].iter().sum::<f64>() / n as f64;
                (tail(&self.esp), tail(&self.ns))
            }
        }
    }
}

pub fn indicator_ensemble<M: QuantumReservoir + ?Sized>(
    model: &M,
    cfg: &EnsembleConfig,
) -> Result<IndicatorTrace> {
    subset_indicator_ensemble(model, &SubsetSelection::All, cfg)
}

pub fn subset_indicator_ensemble<M: QuantumReservoir + ?Sized>(
    model: &M,
    selection: &SubsetSelection,
    cfg: &EnsembleConfig,
) -> Result<IndicatorTrace> {
    let mut traces = multi_selection_ensemble(model, std::slice::from_ref(selection), cfg)?;
    Ok(traces.remove(0))
}

/// Runs the ensemble once and evaluates it under several selections.
pub fn multi_selection_ensemble<M: QuantumReservoir + ?Sized>(
    model: &M,
    selections: &[SubsetSelection],
    cfg: &EnsembleConfig,
) -> Result<Vec<IndicatorTrace>> {
    cfg.validate()?;
    let (inputs, states) = cfg.draw(model.n_qubits());
    ensemble_from_parts(model, &inputs, &states, cfg.window, selections)
}

/// Indicators for every input sequence and unordered pair of `states`,
/// averaged in a fixed order: input-major, then pairs `(i, j)` with `i < j`.
pub fn ensemble_from_parts<M: QuantumReservoir + ?Sized>(
    model: &M,
    inputs: &[Vec<f64>],
    states: &[DensityMatrix],
    window: usize,
    selections: &[SubsetSelection],
) -> Result<Vec<IndicatorTrace>> {
    if states.len() < 2 || inputs.is_empty() {
        return Err(Error::Config(
            "an indicator ensemble needs at least 2 states and 1 input sequence".into(),
        ));
    }
    let seq_len = inputs[0].len();
    if inputs.iter().any(|u| u.len() != seq_len) {
        return Err(Error::LengthMismatch("input sequences differ in length".into()));
    }
    if window == 0 || seq_len <= window {
        return Err(Error::Config(format!(
            "sequence length {seq_len} must exceed the window {window}"
        )));
    }
    let basis = PauliString::all(model.n_qubits());
    for s in selections {
        s.validate(basis.len())?;
    }
    let initial: Vec<Vec<f64>> = states
        .iter()
        .map(|s| pauli_expectations(s, &basis))
        .collect::<Result<_>>()?;

    let jobs: Vec<(usize, usize)> = (0..inputs.len())
        .flat_map(|i| (0..states.len()).map(move |s| (i, s)))
        .collect();
    let trajectories: Vec<TimeSeries> = jobs
        .par_iter()
        .map(|&(i, s)| run_reservoir(model, &inputs[i], &states[s], &basis).map(|t| t.series))
        .collect::<Result<_>>()?;

    let mut pairs = Vec::new();
    for i in 0..inputs.len() {
        for a in 0..states.len() {
            for b in a + 1..states.len() {
                let s0 = euclidean_distance(&initial[a], &initial[b]);
                if s0 == 0.0 {
                    return Err(Error::IdenticalInitialStates);
                }
                pairs.push((i * states.len() + a, i * states.len() + b, s0));
            }
        }
    }

    selections
        .iter()
        .map(|sel| {
            let selected: Vec<TimeSeries> = trajectories
                .iter()
                .map(|t| sel.apply(t))
                .collect::<Result<_>>()?;
            let per_pair: Vec<Vec<(f64, f64, bool)>> = pairs
                .par_iter()
                .map(|&(a, b, s0)| pair_trace(&selected[a], &selected[b], s0, window))
                .collect::<Result<_>>()?;
            Ok(average(&per_pair, window, seq_len))
        })
        .collect()
}

fn pair_trace(
    a: &TimeSeries,
    b: &TimeSeries,
    s0: f64,
    window: usize,
) -> Result<Vec<(f64, f64, bool)>> {
    (window..a.len())
        .map(|t| {
            let esp = esp_indicator(a, b, s0, t)?;
            let ns = ns_esp_indicator(a, b, s0, window, t)?;
            Ok((esp, ns.value, ns.sentinel))
        })
        .collect()
}

fn average(per_pair: &[Vec<(f64, f64, bool)>], window: usize, seq_len: usize) -> IndicatorTrace {
    let n = per_pair.len();
    let len = seq_len - window;
    let mut esp = vec![0.0; len];
    let mut ns = vec![0.0; len];
    let mut sentinel_pairs = vec![0; len];
    for trace in per_pair {
        for (k, &(e, v, s)) in trace.iter().enumerate() {
            esp[k] += e;
            ns[k] += v;
            sentinel_pairs[k] += s as usize;
        }
    }
    esp.iter_mut().for_each(|x| *x /= n as f64);
    ns.iter_mut().for_each(|x| *x /= n as f64);
    IndicatorTrace {
        window,
        times: (window..seq_len).collect(),
        esp,
        ns,
        sentinel_pairs,
        pairs: n,
    }
}
