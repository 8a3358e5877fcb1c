//! `swarmphase`: simulate, classify, sweep and render.
//!
//! Exit status: 0 when the behavior is observed, 2 when it is absent, 1 on
//! any error. `sweep` and `render` exit 0 on success.

mod config;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;
use swarmphase::dynamics::{default_record_stride, run_with_stride};
use swarmphase::phasediag::{write_cells_csv, ColorRule, PhaseDiagram};
use swarmphase::sweep::{init_connected_with, run_grid, CellsReport, GridConfig, ParamGrid};
use swarmphase::{classify_trajectory, Behavior, Classification, Controller, Trajectory};

use crate::config::RunConfig;

#[derive(Parser, Debug)]
#[command(name = "swarmphase", version, about = "Binary-sensor swarm simulation and phase diagrams")]
struct Cli {
    /// JSON file with defaults for any flag (keys use underscores, e.g. `omega_deg`)
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,
    /// Worker threads for sweeps
    #[arg(long, global = true, env = "SWARMPHASE_WORKERS", value_name = "K")]
    workers: Option<usize>,
    /// Output directory (default: current directory)
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one simulation, save its trajectory and print the classification
    Simulate {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        thresholds: ThresholdArgs,
    },
    /// Classify a recorded trajectory file without simulating
    Classify {
        trajectory: Option<PathBuf>,
        /// Behavior to test (default: the one the recorded controller targets)
        #[arg(long)]
        behavior: Option<Behavior>,
        /// Evaluation window override, s
        #[arg(long)]
        eval_window: Option<f64>,
        #[command(flatten)]
        thresholds: ThresholdArgs,
    },
    /// Run a parameter grid; resumes from an existing trial file
    Sweep {
        /// Grid config JSON
        grid: Option<PathBuf>,
    },
    /// Draw the phase diagram of a sweep
    Render {
        /// cells.json written by `sweep`
        cells: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// success/failure colors, e.g. `green/red` or `#0000ff/#ff8800`
        #[arg(long)]
        palette: Option<String>,
        /// Only write the CSV (works for one-axis sweeps)
        #[arg(long)]
        csv_only: bool,
    },
}

#[derive(Args, Debug, Default)]
struct ParamArgs {
    #[arg(long)]
    controller: Option<Controller>,
    #[arg(long)]
    n: Option<usize>,
    /// Speed, m/s
    #[arg(long)]
    v: Option<f64>,
    /// Turning rate, deg/s
    #[arg(long)]
    omega_deg: Option<f64>,
    /// Sensor range, m
    #[arg(long)]
    gamma: Option<f64>,
    /// Sensor opening angle, deg
    #[arg(long)]
    phi_deg: Option<f64>,
    #[arg(long)]
    body_radius: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    horizon: Option<f64>,
    #[arg(long)]
    eval_window: Option<f64>,
    /// Steps between recorded frames (default: one frame per 0.1 s)
    #[arg(long)]
    record_stride: Option<usize>,
    /// Initial disk radius factor
    #[arg(long)]
    init_spread: Option<f64>,
    #[arg(long)]
    init_max_attempts: Option<usize>,
}

#[derive(Args, Debug, Default)]
struct ThresholdArgs {
    #[arg(long)]
    circliness_max: Option<f64>,
    /// Relative speed band for milling
    #[arg(long)]
    speed_tol: Option<f64>,
    #[arg(long)]
    nn_variance_max: Option<f64>,
    /// Fraction of window frames that must meet the shape bound
    #[arg(long)]
    min_sustained: Option<f64>,
}

impl Cli {
    /// Flag values as a config layer.
    fn flag_layer(&self) -> RunConfig {
        let mut c = RunConfig {
            seed: self.seed,
            workers: self.workers,
            out: self.out.clone(),
            ..Default::default()
        };
        let thresholds = |c: &mut RunConfig, t: &ThresholdArgs| {
            c.circliness_max = t.circliness_max;
            c.speed_tol = t.speed_tol;
            c.nn_variance_max = t.nn_variance_max;
            c.min_sustained = t.min_sustained;
        };
        match &self.command {
            Command::Simulate { params: p, thresholds: t } => {
                c.controller = p.controller;
                c.n = p.n;
                c.v = p.v;
                c.omega_deg = p.omega_deg;
                c.gamma = p.gamma;
                c.phi_deg = p.phi_deg;
                c.body_radius = p.body_radius;
                c.dt = p.dt;
                c.horizon = p.horizon;
                c.eval_window = p.eval_window;
                c.record_stride = p.record_stride;
                c.init_spread = p.init_spread;
                c.init_max_attempts = p.init_max_attempts;
                thresholds(&mut c, t);
            }
            Command::Classify { trajectory, behavior, eval_window, thresholds: t } => {
                c.trajectory = trajectory.clone();
                c.behavior = *behavior;
                c.eval_window = *eval_window;
                thresholds(&mut c, t);
            }
            Command::Sweep { grid } => c.grid = grid.clone(),
            Command::Render { cells, svg, csv, palette, csv_only } => {
                c.cells = cells.clone();
                c.svg = svg.clone();
                c.csv = csv.clone();
                c.palette = palette.clone();
                c.csv_only = csv_only.then_some(true);
            }
        }
        c
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(cli: &Cli) -> Result<ExitCode> {
    let file = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let cfg = file.overlay(&cli.flag_layer());
    match cli.command {
        Command::Simulate { .. } => simulate(&cfg),
        Command::Classify { .. } => classify(&cfg),
        Command::Sweep { .. } => sweep(&cfg),
        Command::Render { .. } => render(&cfg),
    }
}

fn behavior_exit(c: &Classification) -> ExitCode {
    if c.value {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))
}

fn print_line(text: &str) -> Result<()> {
    let mut out = io::stdout().lock();
    writeln!(out, "{text}")?;
    out.flush()?;
    Ok(())
}

fn simulate(cfg: &RunConfig) -> Result<ExitCode> {
    let spec = cfg.params_spec()?;
    let params = spec.to_params()?;
    let eta = cfg.thresholds().structure_set(params.controller.behavior())?;
    let init_cfg = cfg.init();
    let seed = cfg.seed.unwrap_or(0);
    let stride = cfg
        .record_stride
        .unwrap_or_else(|| default_record_stride(params.dt));

    let init = init_connected_with(&params, seed, &init_cfg)?;
    let traj = run_with_stride(&params, seed, init, stride)?;
    let classification = classify_trajectory(&traj, &eta)?;

    let dir = cfg.out_dir();
    ensure_dir(&dir)?;
    let traj_path = dir.join("trajectory.jsonl");
    traj.save(&traj_path)
        .with_context(|| format!("cannot write {}", traj_path.display()))?;

    let report: serde_json::Value = serde_json::from_str(&classification.to_json())?;
    let effective = RunConfig {
        seed: Some(seed),
        record_stride: Some(stride),
        init_spread: Some(init_cfg.spread),
        init_max_attempts: Some(init_cfg.max_attempts),
        ..cfg.clone()
    };
    let report_path = dir.join("classification.json");
    let saved = json!({ "config": effective, "classification": report });
    fs::write(&report_path, format!("{}\n", serde_json::to_string_pretty(&saved)?))
        .with_context(|| format!("cannot write {}", report_path.display()))?;

    print_line(&classification.to_json())?;
    Ok(behavior_exit(&classification))
}

fn classify(cfg: &RunConfig) -> Result<ExitCode> {
    let Some(path) = &cfg.trajectory else {
        bail!("missing trajectory file");
    };
    let mut traj = Trajectory::load(path)?;
    if let Some(window) = cfg.eval_window {
        let mut params = *traj.params();
        params.eval_window = window;
        params.validate()?;
        traj = Trajectory::from_frames(params, traj.seed(), traj.record_stride(), traj.frames().to_vec())?;
    }
    let behavior = cfg
        .behavior
        .unwrap_or_else(|| traj.params().controller.behavior());
    let eta = cfg.thresholds().structure_set(behavior)?;
    let classification = classify_trajectory(&traj, &eta)?;
    print_line(&classification.to_json())?;
    Ok(behavior_exit(&classification))
}

fn sweep(cfg: &RunConfig) -> Result<ExitCode> {
    let Some(path) = &cfg.grid else {
        bail!("missing grid config file");
    };
    let grid_cfg = GridConfig::load(path)?;
    let grid = ParamGrid::from_config(&grid_cfg)?;
    let workers = match cfg.workers {
        Some(0) => bail!("invalid `workers`: must be at least 1"),
        Some(k) => k,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let dir = cfg.out_dir();
    ensure_dir(&dir)?;
    let trials_path = dir.join("trials.jsonl");
    let outcome = run_grid(&grid, workers, Some(&trials_path))?;
    let cells_path = dir.join("cells.json");
    CellsReport::new(&grid, outcome.cells.clone())
        .save(&cells_path)
        .with_context(|| format!("cannot write {}", cells_path.display()))?;
    let failed = outcome.records.iter().filter(|r| r.error.is_some()).count();
    eprintln!(
        "{} points x {} trials: {} run now, {} reused, {} without a classification; wrote {} and {}",
        grid.point_count(),
        grid.trials_per_point,
        outcome.executed,
        outcome.records.len() - outcome.executed,
        failed,
        trials_path.display(),
        cells_path.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn render(cfg: &RunConfig) -> Result<ExitCode> {
    let Some(path) = &cfg.cells else {
        bail!("missing cells file");
    };
    let report = CellsReport::load(path)?;
    let dir = cfg.out_dir();
    let csv_path = cfg.csv.clone().unwrap_or_else(|| dir.join("phase.csv"));

    if cfg.csv_only.unwrap_or(false) {
        if let Some(parent) = csv_path.parent() {
            ensure_dir(parent)?;
        }
        if report.axes.len() == 2 {
            PhaseDiagram::from_report(&report, ColorRule::for_behavior(report.behavior))?
                .export_matrix(&csv_path)?;
        } else {
            let file = fs::File::create(&csv_path)
                .with_context(|| format!("cannot write {}", csv_path.display()))?;
            write_cells_csv(&report, io::BufWriter::new(file))?;
        }
        eprintln!("wrote {}", csv_path.display());
        return Ok(ExitCode::SUCCESS);
    }

    if report.axes.len() != 2 {
        bail!(
            "render needs a 2-axis sweep but {} has {} axis; rerun with --csv-only for a CSV export",
            path.display(),
            report.axes.len()
        );
    }
    let palette = match &cfg.palette {
        Some(p) => ColorRule::parse(p)?,
        None => ColorRule::for_behavior(report.behavior),
    };
    let diagram = PhaseDiagram::from_report(&report, palette)?;
    let svg_path = cfg.svg.clone().unwrap_or_else(|| dir.join("phase.svg"));
    for p in [&svg_path, &csv_path] {
        if let Some(parent) = p.parent() {
            ensure_dir(parent)?;
        }
    }
    diagram
        .render(&svg_path)
        .with_context(|| format!("cannot write {}", svg_path.display()))?;
    diagram
        .export_matrix(&csv_path)
        .with_context(|| format!("cannot write {}", csv_path.display()))?;
    eprintln!("wrote {} and {}", svg_path.display(), csv_path.display());
    Ok(ExitCode::SUCCESS)
}
