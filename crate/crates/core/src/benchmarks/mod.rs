//! Task-level evaluation of reservoir trajectories.

pub mod capacity;
pub mod ipc;
pub mod narma;
pub mod rank;
pub mod readout;

pub use capacity::{
    mc_report, memory_function, mix_seed, CapacityConfig, CapacityEstimator, McResult,
    DEFAULT_REL_THRESHOLD, MEMORY_FLOOR,
};
pub use ipc::{
    enumerate_terms, ipc_report, ipc_targets, normalized_legendre, DegreeCapacity, IpcComponent,
    IpcConfig, IpcReport, PolynomialBasis, Term,
};
pub use narma::{narma_generate, narma_targets, NarmaConfig, NARMA_BLOWUP};
pub use rank::{trajectory_rank, TrajectoryRank, DEFAULT_RANK_THRESHOLD};
pub use readout::{rnmse, train_linear_readout, ReadoutFit, Segments, SplitSpec};
