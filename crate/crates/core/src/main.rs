use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qrc_esp::sweep::{
    checkpoint_path, emit_field, run_sweep_resumable, Experiment, Metric, OutputFormat,
    SweepConfig,
};
use qrc_esp::Error;

/// Echo-state diagnostics and benchmark sweeps over few-qubit reservoirs.
///
/// Exit codes: 0 success, 1 configuration or I/O error, 2 when some grid
/// points failed (their rows carry an error code).
#[derive(Parser, Debug)]
#[command(version, args_conflicts_with_subcommands = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the resolved configuration as JSON and exit.
    PrintConfig(RunArgs),
}

#[derive(clap::Args, Debug, Default)]
struct RunArgs {
    /// JSON configuration; fields absent from it take their defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// ns_esp_axis_grid, subset_gamma_p_grid or classical_reference.
    #[arg(long)]
    experiment: Option<String>,
    /// Comma-separated metrics, e.g. `esp,ns_esp,narma2`.
    #[arg(long)]
    metrics: Option<String>,
    /// Output file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(long)]
    workers: Option<usize>,
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn resolve(args: &RunArgs) -> Result<SweepConfig, Error> {
    let mut cfg = match &args.config {
        Some(path) => SweepConfig::load(path)?,
        None => SweepConfig::default(),
    };
    if let Some(e) = &args.experiment {
        cfg.experiment = Experiment::parse(e)?;
    }
    if let Some(m) = &args.metrics {
        cfg.metrics = m.split(',').filter(|s| !s.trim().is_empty()).map(Metric::parse).collect::<Result<_, _>>()?;
    }
    if let Some(out) = &args.out {
        cfg.out = Some(out.clone());
    }
    if let Some(w) = args.workers {
        cfg.workers = w;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(f) = args.format {
        cfg.format = match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        };
    }
    cfg.resolved()
}

fn run(args: &RunArgs) -> Result<ExitCode, Error> {
    let cfg = resolve(args)?;
    let out = cfg
        .out
        .clone()
        .ok_or_else(|| Error::Config("no output path (use --out or the `out` field)".into()))?;
    let checkpoint = checkpoint_path(&out);
    let (field, resumed) = run_sweep_resumable(&cfg, Some(&checkpoint))?;
    if resumed > 0 {
        eprintln!("resumed {resumed} points from {}", checkpoint.display());
    }
    emit_field(&field, &out, cfg.format)?;
    if checkpoint.exists() {
        std::fs::remove_file(&checkpoint).map_err(|source| Error::Io {
            path: checkpoint.clone(),
            source,
        })?;
    }
    let failed = field.failures();
    eprintln!(
        "wrote {} points to {} ({failed} failed)",
        field.points.len(),
        out.display()
    );
    Ok(if failed > 0 { ExitCode::from(2) } else { ExitCode::SUCCESS })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Some(Command::PrintConfig(args)) => resolve(args).map(|cfg| {
            println!("{}", cfg.to_json_pretty());
            ExitCode::SUCCESS
        }),
        None => run(&cli.run),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::from(1)
    })
}
