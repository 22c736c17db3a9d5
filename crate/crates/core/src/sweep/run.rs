use std::collections::BTreeMap;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::checkpoint;
use super::config::{Experiment, Metric, ReadoutSubset, SweepConfig};
use super::grid::{flatten_sphere, plane_grid, GridPoint};
use crate::benchmarks::{
    mc_report, mix_seed, ipc_report, narma_targets, train_linear_readout, trajectory_rank,
    CapacityConfig, IpcConfig, NarmaConfig, SplitSpec, DEFAULT_REL_THRESHOLD,
};
use crate::error::{Error, Result};
use crate::espmetrics::{
    esp_indicator, euclidean_distance, multi_selection_ensemble, ns_esp_indicator,
    EnsembleConfig, SubsetSelection,
};
use crate::qmat::{DensityMatrix, PauliString};
use crate::reservoir::{
    run_full_readout, run_with_map, AxisConfig, InnerMap, NsModel, NsModelConfig,
    QuantumReservoir, SkHamiltonianConfig, SubsetModel, SubsetModelConfig,
};
use crate::series::TimeSeries;

/// Sub-stream indices under a point seed.
const STREAM_ENSEMBLE: u64 = 0;
const STREAM_CAPACITY_INPUTS: u64 = 1;
const STREAM_RANK_INPUTS: u64 = 2;
const STREAM_SURROGATES: u64 = 3;
const STREAM_CLASSICAL_MAP: u64 = 4;
const STREAM_NARMA: u64 = 100;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointResult {
    pub index: usize,
    pub u: f64,
    pub v: f64,
    pub seed: u64,
    /// One value per output column; `NaN` when the point failed.
    pub values: Vec<f64>,
    /// Error code of a failed point.
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FieldResult {
    /// Resolved configuration the field was computed from.
    pub config: SweepConfig,
    pub config_hash: String,
    pub columns: Vec<String>,
    pub points: Vec<PointResult>,
}

impl FieldResult {
    pub fn failures(&self) -> usize {
        self.points.iter().filter(|p| p.error.is_some()).count()
    }

    /// Values of one output column in grid order.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.points.iter().map(|p| p.values[j]).collect())
    }
}

pub fn grid_points(cfg: &SweepConfig) -> Result<Vec<GridPoint>> {
    let (nu, nv) = cfg.grid();
    match cfg.experiment {
        Experiment::NsEspAxisGrid => flatten_sphere(nu, nv),
        Experiment::SubsetGammaPGrid => plane_grid((0.0, 1.0), nu, (0.0, 1.0), nv),
        Experiment::ClassicalReference => plane_grid(cfg.rate_range, nu, cfg.radius_range, nv),
    }
}

/// Per-point seed, independent of the grid size.
pub fn point_seed(master: u64, index: usize) -> u64 {
    mix_seed(master, index as u64)
}

fn selection(subset: ReadoutSubset, basis: &[PauliString]) -> Result<SubsetSelection> {
    match subset {
        ReadoutSubset::All => Ok(SubsetSelection::All),
        ReadoutSubset::Q0 => SubsetSelection::supported_on(basis, &[0]),
        ReadoutSubset::Q1 => SubsetSelection::supported_on(basis, &[1]),
        ReadoutSubset::Entangling => SubsetSelection::entangling(basis),
    }
}

fn uniform_inputs(len: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| rng.random_range(-1.0..=1.0)).collect()
}

/// Features of one driven trajectory from `|0…0⟩`.
fn features<M: QuantumReservoir>(model: &M, inputs: &[f64], sel: &SubsetSelection) -> Result<TimeSeries> {
    let rho0 = DensityMatrix::zero_state(model.n_qubits());
    sel.apply(&run_full_readout(model, inputs, &rho0)?.series)
}

fn narma_rnmse<M: QuantumReservoir>(
    model: &M,
    cfg: &SweepConfig,
    sel: &SubsetSelection,
    order: usize,
    seed: u64,
) -> Result<f64> {
    let narma = NarmaConfig::new(order);
    let n = cfg.lengths.narma_sequences;
    let mut sum = 0.0;
    for j in 0..n {
        let inputs = narma.draw_inputs(cfg.lengths.narma, mix_seed(seed, STREAM_NARMA + j as u64));
        let target = narma_targets(&inputs, &narma)?;
        let x = features(model, &inputs, sel)?;
        let fit = train_linear_readout(&x, &target, &SplitSpec::default(), cfg.ridge)?;
        sum += fit.test_rnmse(&target)?;
    }
    Ok(sum / n as f64)
}

fn quantum_point<M: QuantumReservoir>(model: &M, cfg: &SweepConfig, seed: u64) -> Result<Vec<f64>> {
    let basis = PauliString::all(model.n_qubits());
    let sel = selection(cfg.readout, &basis)?;
    let l = &cfg.lengths;

    let mut values: BTreeMap<Metric, Vec<f64>> = BTreeMap::new();
    let wants = |m: Metric| cfg.metrics.contains(&m);

    if wants(Metric::Esp) || wants(Metric::NsEsp) || wants(Metric::SubsetIndicators) {
        let ecfg = EnsembleConfig {
            n_inputs: l.n_inputs,
            n_states: l.n_states,
            seq_len: l.indicator,
            window: l.window,
            seed: mix_seed(seed, STREAM_ENSEMBLE),
        };
        let mut sels = vec![sel.clone()];
        if wants(Metric::SubsetIndicators) {
            sels.push(SubsetSelection::supported_on(&basis, &[0])?);
            sels.push(SubsetSelection::supported_on(&basis, &[1])?);
            sels.push(SubsetSelection::entangling(&basis)?);
        }
        let traces = multi_selection_ensemble(model, &sels, &ecfg)?;
        values.insert(Metric::Esp, vec![traces[0].final_esp()]);
        values.insert(Metric::NsEsp, vec![traces[0].final_ns()]);
        if wants(Metric::SubsetIndicators) {
            values.insert(Metric::SubsetIndicators, traces[1..].iter().map(|t| t.final_ns()).collect());
        }
    }
    if wants(Metric::Narma2) {
        values.insert(Metric::Narma2, vec![narma_rnmse(model, cfg, &sel, 2, seed)?]);
    }
    if wants(Metric::Narma10) {
        values.insert(Metric::Narma10, vec![narma_rnmse(model, cfg, &sel, 10, seed)?]);
    }
    if wants(Metric::Mc) || wants(Metric::Ipc) {
        let inputs = uniform_inputs(l.capacity, mix_seed(seed, STREAM_CAPACITY_INPUTS));
        let x = features(model, &inputs, &sel)?;
        let capacity = CapacityConfig {
            washout: l.capacity_washout,
            surrogate_count: cfg.surrogate_count,
            surrogate_seed: mix_seed(seed, STREAM_SURROGATES),
            rel_threshold: DEFAULT_REL_THRESHOLD,
        };
        if wants(Metric::Mc) {
            let mc = mc_report(&inputs, &x, l.mc_max_delay, &capacity)?;
            values.insert(Metric::Mc, vec![mc.total, mc.max_linear_delay as f64]);
        }
        if wants(Metric::Ipc) {
            let ipc = ipc_report(
                &inputs,
                &x,
                &IpcConfig {
                    budget: cfg.ipc_budget.clone(),
                    capacity,
                    ..IpcConfig::default()
                },
            )?;
            values.insert(Metric::Ipc, vec![ipc.total, ipc.total - ipc.degree_total(1)]);
        }
    }
    if wants(Metric::Rank) {
        let inputs = uniform_inputs(l.rank, mix_seed(seed, STREAM_RANK_INPUTS));
        let x = features(model, &inputs, &sel)?;
        let r = trajectory_rank(&x, l.rank_washout, cfg.rank_threshold)?;
        values.insert(Metric::Rank, vec![r.raw as f64]);
    }
    Ok(cfg
        .metrics
        .iter()
        .flat_map(|m| values.remove(m).expect("every requested metric is computed"))
        .collect())
}

fn classical_point(cfg: &SweepConfig, point: &GridPoint, seed: u64) -> Result<Vec<f64>> {
    let l = &cfg.lengths;
    let map = InnerMap::new(cfg.classical_size, point.v, mix_seed(seed, STREAM_CLASSICAL_MAP))?;
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, STREAM_ENSEMBLE));
    let inputs: Vec<Vec<f64>> = (0..l.n_inputs)
        .map(|_| (0..l.indicator).map(|_| rng.random_range(-1.0..=1.0)).collect())
        .collect();
    let states: Vec<Vec<f64>> = (0..l.n_states)
        .map(|_| (0..cfg.classical_size).map(|_| rng.random_range(-1.0..=1.0)).collect())
        .collect();
    let t = l.indicator - 1;
    let (mut esp, mut ns, mut pairs) = (0.0, 0.0, 0usize);
    for u in &inputs {
        let runs: Vec<TimeSeries> = states
            .iter()
            .map(|y0| run_with_map(&map, cfg.classical_kind, point.u, u, y0))
            .collect::<Result<_>>()?;
        for a in 0..states.len() {
            for b in a + 1..states.len() {
                let s0 = euclidean_distance(&states[a], &states[b]);
                esp += esp_indicator(&runs[a], &runs[b], s0, t)?;
                ns += ns_esp_indicator(&runs[a], &runs[b], s0, l.window, t)?.value;
                pairs += 1;
            }
        }
    }
    let mut out = Vec::new();
    for m in &cfg.metrics {
        match m {
            Metric::Esp => out.push(esp / pairs as f64),
            Metric::NsEsp => out.push(ns / pairs as f64),
            _ => unreachable!("validated config"),
        }
    }
    Ok(out)
}

/// Metric values of one grid point of a resolved config.
pub fn evaluate_point(cfg: &SweepConfig, point: &GridPoint) -> Result<Vec<f64>> {
    let seed = point_seed(cfg.seed, point.index);
    match cfg.experiment {
        Experiment::NsEspAxisGrid => {
            let model = NsModel::new(&NsModelConfig::new(
                SkHamiltonianConfig::preset(cfg.preset, 2),
                AxisConfig::new(point.u, point.v)?,
            ))?;
            quantum_point(&model, cfg, seed)
        }
        Experiment::SubsetGammaPGrid => {
            let model = SubsetModel::new(&SubsetModelConfig {
                damping_rate: point.v,
                cnot_exponent: point.u,
                u0_seed: cfg.u0_seed,
                u1_seed: cfg.u1_seed,
            })?;
            quantum_point(&model, cfg, seed)
        }
        Experiment::ClassicalReference => classical_point(cfg, point, seed),
    }
}

fn run_point(cfg: &SweepConfig, point: &GridPoint, width: usize) -> PointResult {
    let seed = point_seed(cfg.seed, point.index);
    let (values, error) = match evaluate_point(cfg, point) {
        Ok(v) => (v, None),
        Err(e) => (vec![f64::NAN; width], Some(e.code().to_string())),
    };
    PointResult {
        index: point.index,
        u: point.u,
        v: point.v,
        seed,
        values,
        error,
    }
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start {workers} workers: {e}")))
}

/// Evaluates every grid point in memory.
pub fn run_sweep(cfg: &SweepConfig) -> Result<FieldResult> {
    run_sweep_resumable(cfg, None).map(|(field, _)| field)
}

/// Points evaluated between checkpoint rewrites.
pub const CHECKPOINT_BATCH: usize = 8;

/// Evaluates the grid, flushing finished points to `checkpoint` after every
/// batch and skipping points already recorded there for the same config.
/// Returns the field and the number of resumed points.
pub fn run_sweep_resumable(
    cfg: &SweepConfig,
    checkpoint: Option<&Path>,
) -> Result<(FieldResult, usize)> {
    let cfg = cfg.resolved()?;
    let hash = cfg.hash();
    let columns = cfg.columns();
    let points = grid_points(&cfg)?;
    let mut done: BTreeMap<usize, PointResult> = match checkpoint {
        Some(path) => checkpoint::load(path, &hash, points.len())?,
        None => BTreeMap::new(),
    };
    done.retain(|i, p| *i < points.len() && p.values.len() == columns.len());
    let resumed = done.len();
    let todo: Vec<GridPoint> = points.iter().filter(|p| !done.contains_key(&p.index)).copied().collect();

    let pool = pool(cfg.workers)?;
    let batch = CHECKPOINT_BATCH.max(pool.current_num_threads());
    for chunk in todo.chunks(batch) {
        let fresh: Vec<PointResult> =
            pool.install(|| chunk.par_iter().map(|p| run_point(&cfg, p, columns.len())).collect());
        for r in fresh {
            done.insert(r.index, r);
        }
        if let Some(path) = checkpoint {
            checkpoint::save(path, &hash, points.len(), &done)?;
        }
    }
    Ok((
        FieldResult {
            config: cfg,
            config_hash: hash,
            columns,
            points: done.into_values().collect(),
        },
        resumed,
    ))
}
