//! Parameter-grid sweeps producing CSV or JSON fields.

pub mod checkpoint;
pub mod config;
pub mod emit;
pub mod grid;
pub mod run;

pub use checkpoint::checkpoint_path;
pub use config::{Experiment, Lengths, Metric, OutputFormat, ReadoutSubset, SweepConfig};
pub use emit::{config_sidecar, emit_field, format_value, parse_csv, to_csv_string, to_json_value, CsvField};
pub use grid::{flatten_sphere, linspace, plane_grid, GridPoint};
pub use run::{
    evaluate_point, grid_points, point_seed, run_sweep, run_sweep_resumable, FieldResult,
    PointResult,
};
