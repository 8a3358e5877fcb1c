//! Parameter-grid sweeps with repeated seeded trials.
//!
//! A grid is one or two swept axes over a base parameter set. Every
//! `(point, trial)` pair is an independent unit of work whose seed is derived
//! from the base seed, so results do not depend on scheduling. Trial records
//! are streamed to a JSON Lines file as they complete:
//!
//! ```text
//! {"grid": {...effective grid config...}}
//! {"point": 0, "coords": {"N": 4.0, "phi": 10.0}, "trial": 0, "seed": ..., "value": 0, ...}
//! ```
//!
//! Re-running against an existing file skips the pairs already recorded.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::TAU;
use std::fmt;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::run;
use crate::error::{Error, Result};
use crate::macrostate::{classify_trajectory, Classification, StructureSet, ThresholdOverrides};
use crate::params::{Behavior, ParamsSpec, SimParams};
use crate::seed::split_seed;
use crate::swarm::{r_disk_connected, AgentState, Microstate};

pub const DEFAULT_TRIALS: usize = 10;
pub const DEFAULT_INIT_SPREAD: f64 = 0.75;
pub const DEFAULT_INIT_ATTEMPTS: usize = 1000;

/// Initial placement settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitConfig {
    /// Disk radius is `spread · max(γ, 2·body_radius·√N) · √N`.
    #[serde(default = "default_spread")]
    pub spread: f64,
    #[serde(default = "default_attempts")]
    pub max_attempts: usize,
}

fn default_spread() -> f64 {
    DEFAULT_INIT_SPREAD
}
fn default_attempts() -> usize {
    DEFAULT_INIT_ATTEMPTS
}

impl Default for InitConfig {
    fn default() -> Self {
        InitConfig {
            spread: DEFAULT_INIT_SPREAD,
            max_attempts: DEFAULT_INIT_ATTEMPTS,
        }
    }
}

impl InitConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.spread.is_finite() && self.spread > 0.0) {
            return Err(Error::invalid(
                "init.spread",
                format!("must be > 0, got {}", self.spread),
            ));
        }
        if self.max_attempts == 0 {
            return Err(Error::invalid("init.max_attempts", "must be at least 1"));
        }
        Ok(())
    }

    pub fn disk_radius(&self, params: &SimParams) -> f64 {
        let root_n = (params.n_agents as f64).sqrt();
        params
            .sensor
            .range
            .max(2.0 * params.body_radius * root_n)
            * self.spread
            * root_n
    }
}

pub fn init_connected(params: &SimParams, seed: u64) -> Result<Microstate> {
    init_connected_with(params, seed, &InitConfig::default())
}

/// Samples positions uniformly in a disk and headings uniformly, retrying
/// until the r-disk graph at radius γ is connected and no bodies overlap.
pub fn init_connected_with(params: &SimParams, seed: u64, cfg: &InitConfig) -> Result<Microstate> {
    params.validate()?;
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let radius = cfg.disk_radius(params);
    let min_sep = 2.0 * params.body_radius;
    for _ in 0..cfg.max_attempts {
        let agents: Vec<AgentState> = (0..params.n_agents)
            .map(|_| {
                let r = radius * rng.random::<f64>().sqrt();
                let a = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
                let heading = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
                AgentState::new(r * a.cos(), r * a.sin(), heading)
            })
            .collect();
        let state = Microstate::from_parts(agents, 0.0);
        if overlaps(&state, min_sep) {
            continue;
        }
        if r_disk_connected(&state, params.sensor.range) {
            return Ok(state);
        }
    }
    Err(Error::InfeasibleInit {
        attempts: cfg.max_attempts,
    })
}

fn overlaps(state: &Microstate, min_sep: f64) -> bool {
    if min_sep <= 0.0 {
        return false;
    }
    let a = state.agents();
    (0..a.len()).any(|i| ((i + 1)..a.len()).any(|j| a[i].distance_to(&a[j]) < min_sep))
}

/// A parameter that can be swept. Angles are in degrees on the axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AxisName {
    N,
    #[serde(rename = "v")]
    Speed,
    #[serde(rename = "omega")]
    TurnRate,
    #[serde(rename = "gamma")]
    Range,
    #[serde(rename = "phi")]
    Opening,
}

impl AxisName {
    pub fn as_str(self) -> &'static str {
        match self {
            AxisName::N => "N",
            AxisName::Speed => "v",
            AxisName::TurnRate => "omega",
            AxisName::Range => "gamma",
            AxisName::Opening => "phi",
        }
    }

    /// Axis label with units, for plots.
    pub fn label(self) -> &'static str {
        match self {
            AxisName::N => "N (agents)",
            AxisName::Speed => "v (m/s)",
            AxisName::TurnRate => "omega (deg/s)",
            AxisName::Range => "gamma (m)",
            AxisName::Opening => "phi (deg)",
        }
    }

    /// Sets this parameter on `params`, converting degrees to radians.
    pub fn apply(self, params: &mut SimParams, value: f64) -> Result<()> {
        match self {
            AxisName::N => {
                if !(value.is_finite() && value >= 1.0 && value.fract() == 0.0) {
                    return Err(Error::invalid(
                        "axes.N",
                        format!("agent count must be a positive integer, got {value}"),
                    ));
                }
                params.n_agents = value as usize;
            }
            AxisName::Speed => params.speed = value,
            AxisName::TurnRate => params.turn_rate = value.to_radians(),
            AxisName::Range => params.sensor.range = value,
            AxisName::Opening => {
                params.sensor.opening = if value == 360.0 {
                    TAU
                } else {
                    value.to_radians()
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for AxisName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Values of one axis, either listed or as an inclusive evenly spaced range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AxisValues {
    List { values: Vec<f64> },
    Range { min: f64, max: f64, steps: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisSpec {
    pub name: AxisName,
    #[serde(flatten)]
    pub values: AxisValues,
}

/// A resolved axis: a parameter and its strictly increasing values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub name: AxisName,
    pub values: Vec<f64>,
}

impl AxisSpec {
    pub fn resolve(&self) -> Result<Axis> {
        let key = format!("axes.{}", self.name);
        let values = match &self.values {
            AxisValues::List { values } => values.clone(),
            AxisValues::Range { min, max, steps } => {
                if *steps == 0 {
                    return Err(Error::invalid(key, "steps must be at least 1"));
                }
                if *steps == 1 {
                    vec![*min]
                } else {
                    let last = (*steps - 1) as f64;
                    (0..*steps)
                        .map(|k| min + (max - min) * k as f64 / last)
                        .collect()
                }
            }
        };
        let axis = Axis {
            name: self.name,
            values,
        };
        axis.validate()?;
        Ok(axis)
    }
}

impl Axis {
    pub fn validate(&self) -> Result<()> {
        let key = format!("axes.{}", self.name);
        if self.values.is_empty() {
            return Err(Error::invalid(key, "needs at least one value"));
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid(key, "values must be finite"));
        }
        if self.values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid(key, "values must be strictly increasing"));
        }
        Ok(())
    }

    fn to_spec(&self) -> AxisSpec {
        AxisSpec {
            name: self.name,
            values: AxisValues::List {
                values: self.values.clone(),
            },
        }
    }
}

/// Grid config file layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub base_params: ParamsSpec,
    pub axes: Vec<AxisSpec>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default)]
    pub thresholds: ThresholdOverrides,
    #[serde(default)]
    pub init: InitConfig,
}

fn default_trials() -> usize {
    DEFAULT_TRIALS
}

impl GridConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: e.line(),
            message: e.to_string(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParamGrid {
    pub base: SimParams,
    pub axes: Vec<Axis>,
    pub trials_per_point: usize,
    pub base_seed: u64,
    pub structure: StructureSet,
    pub init: InitConfig,
}

impl ParamGrid {
    pub fn new(base: SimParams, axes: Vec<Axis>, trials_per_point: usize, base_seed: u64) -> Result<Self> {
        let grid = ParamGrid {
            base,
            axes,
            trials_per_point,
            base_seed,
            structure: StructureSet::for_behavior(base.controller.behavior()),
            init: InitConfig::default(),
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn from_config(cfg: &GridConfig) -> Result<Self> {
        let base = cfg.base_params.to_params()?;
        let axes = cfg.axes.iter().map(AxisSpec::resolve).collect::<Result<Vec<_>>>()?;
        let grid = ParamGrid {
            base,
            axes,
            trials_per_point: cfg.trials,
            base_seed: cfg.base_seed,
            structure: cfg.thresholds.structure_set(base.controller.behavior())?,
            init: cfg.init,
        };
        grid.validate()?;
        Ok(grid)
    }

    /// The effective config, with ranges expanded and all defaults explicit.
    pub fn to_config(&self) -> GridConfig {
        GridConfig {
            base_params: self.base.to_spec(),
            axes: self.axes.iter().map(Axis::to_spec).collect(),
            trials: self.trials_per_point,
            base_seed: self.base_seed,
            thresholds: ThresholdOverrides {
                circliness_max: Some(self.structure.circliness_max),
                speed_tol: Some(self.structure.speed_rel_tol),
                nn_variance_max: Some(self.structure.nn_variance_max),
                min_sustained: Some(self.structure.min_sustained),
            },
            init: self.init,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        self.structure.validate()?;
        self.init.validate()?;
        if self.structure.behavior != self.base.controller.behavior() {
            return Err(Error::invalid(
                "thresholds",
                format!(
                    "structure set is for {}, controller is {}",
                    self.structure.behavior, self.base.controller
                ),
            ));
        }
        if !(1..=2).contains(&self.axes.len()) {
            return Err(Error::invalid(
                "axes",
                format!("need 1 or 2 axes, got {}", self.axes.len()),
            ));
        }
        if self.axes.len() == 2 && self.axes[0].name == self.axes[1].name {
            return Err(Error::invalid(
                "axes",
                format!("axis `{}` appears twice", self.axes[0].name),
            ));
        }
        if self.trials_per_point == 0 {
            return Err(Error::invalid("trials", "must be at least 1"));
        }
        for axis in &self.axes {
            axis.validate()?;
            for &value in &axis.values {
                let mut p = self.base;
                axis.name.apply(&mut p, value)?;
                p.validate().map_err(|e| match e {
                    Error::InvalidParam { reason, .. } => Error::invalid(
                        format!("axes.{}", axis.name),
                        format!("value {value}: {reason}"),
                    ),
                    other => other,
                })?;
            }
        }
        Ok(())
    }

    pub fn behavior(&self) -> Behavior {
        self.structure.behavior
    }

    pub fn point_count(&self) -> usize {
        self.axes.iter().map(|a| a.values.len()).product()
    }

    /// Axis indices of a point; row-major with the first axis outermost.
    pub fn point_indices(&self, point: usize) -> Vec<usize> {
        let mut rest = point;
        let mut idx = vec![0; self.axes.len()];
        for (k, axis) in self.axes.iter().enumerate().rev() {
            idx[k] = rest % axis.values.len();
            rest /= axis.values.len();
        }
        idx
    }

    pub fn point_coords(&self, point: usize) -> BTreeMap<String, f64> {
        self.point_indices(point)
            .into_iter()
            .zip(&self.axes)
            .map(|(i, axis)| (axis.name.to_string(), axis.values[i]))
            .collect()
    }

    pub fn point_params(&self, point: usize) -> Result<SimParams> {
        let mut p = self.base;
        for (i, axis) in self.point_indices(point).into_iter().zip(&self.axes) {
            axis.name.apply(&mut p, axis.values[i])?;
        }
        Ok(p)
    }

    pub fn seed(&self, point: usize, trial: usize) -> u64 {
        split_seed(self.base_seed, point as u64, trial as u64)
    }
}

/// Outcome of one seeded trial at one grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub point: usize,
    pub coords: BTreeMap<String, f64>,
    pub trial: usize,
    pub seed: u64,
    #[serde(with = "crate::macrostate::bit")]
    pub value: bool,
    #[serde(default)]
    pub classification: Option<Classification>,
    /// Why the trial produced no classification (e.g. infeasible initialization).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub wall_time: f64,
}

impl TrialRecord {
    /// Equality ignoring `wall_time`, which is the only field that depends on
    /// the machine and schedule.
    pub fn same_outcome(&self, other: &TrialRecord) -> bool {
        TrialRecord {
            wall_time: 0.0,
            ..self.clone()
        } == TrialRecord {
            wall_time: 0.0,
            ..other.clone()
        }
    }
}

/// Aggregated outcome of all trials at one grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseCell {
    pub point: usize,
    pub coords: BTreeMap<String, f64>,
    pub trials: usize,
    pub successes: usize,
}

impl PhaseCell {
    pub fn fraction(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.successes as f64 / self.trials as f64
        }
    }
}

/// Runs one trial. Failures (infeasible start, divergence) become a
/// behavior-absent record carrying the error text; a sweep never aborts on them.
pub fn run_trial(
    params: &SimParams,
    eta: &StructureSet,
    init: &InitConfig,
    seed: u64,
) -> (bool, Option<Classification>, Option<String>) {
    let outcome = init_connected_with(params, seed, init)
        .and_then(|start| run(params, seed, start))
        .and_then(|traj| classify_trajectory(&traj, eta));
    match outcome {
        Ok(c) => (c.value, Some(c), None),
        Err(e) => (false, None, Some(e.to_string())),
    }
}

fn trial_record(grid: &ParamGrid, point: usize, trial: usize) -> Result<TrialRecord> {
    let started = Instant::now();
    let params = grid.point_params(point)?;
    let seed = grid.seed(point, trial);
    let (value, classification, error) = run_trial(&params, &grid.structure, &grid.init, seed);
    Ok(TrialRecord {
        point,
        coords: grid.point_coords(point),
        trial,
        seed,
        value,
        classification,
        error,
        wall_time: started.elapsed().as_secs_f64(),
    })
}

/// All trials of one grid point, in trial order.
pub fn run_point(grid: &ParamGrid, point: usize) -> Result<Vec<TrialRecord>> {
    if point >= grid.point_count() {
        return Err(Error::Usage(format!(
            "point {point} outside grid of {} points",
            grid.point_count()
        )));
    }
    (0..grid.trials_per_point)
        .into_par_iter()
        .map(|t| trial_record(grid, point, t))
        .collect()
}

/// Counts successes per point. Records must cover every `(point, trial)` pair.
pub fn aggregate_cells(grid: &ParamGrid, records: &[TrialRecord]) -> Vec<PhaseCell> {
    let mut cells: Vec<PhaseCell> = (0..grid.point_count())
        .map(|p| PhaseCell {
            point: p,
            coords: grid.point_coords(p),
            trials: 0,
            successes: 0,
        })
        .collect();
    for r in records {
        if let Some(cell) = cells.get_mut(r.point) {
            cell.trials += 1;
            cell.successes += r.value as usize;
        }
    }
    cells
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    /// Every record of the grid, sorted by `(point, trial)`.
    pub records: Vec<TrialRecord>,
    pub cells: Vec<PhaseCell>,
    /// Trials run by this call (the rest were loaded from the trial file).
    pub executed: usize,
}

#[derive(Serialize, Deserialize)]
struct TrialFileHeader {
    grid: GridConfig,
}

/// Evaluates the whole grid on `workers` threads.
///
/// With a `trials_path`, records are appended to that JSON Lines file as they
/// complete and pairs already present are not re-run. A torn final line left
/// by an interrupted run is discarded. When the grid is complete the file is
/// rewritten in `(point, trial)` order. An I/O error stops the job; records
/// written so far stay on disk.
pub fn run_grid(grid: &ParamGrid, workers: usize, trials_path: Option<&Path>) -> Result<SweepOutcome> {
    grid.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Usage(format!("cannot start worker pool: {e}")))?;

    let config = grid.to_config();
    let (mut records, sink) = match trials_path {
        Some(path) => {
            let existing = load_or_create_trials(path, &config)?;
            let file = OpenOptions::new().append(true).open(path)?;
            (existing, Some(Mutex::new(BufWriter::new(file))))
        }
        None => (Vec::new(), None),
    };
    records.retain(|r| r.point < grid.point_count() && r.trial < grid.trials_per_point);

    let done: BTreeSet<(usize, usize)> = records.iter().map(|r| (r.point, r.trial)).collect();
    records.sort_by_key(|r| (r.point, r.trial));
    records.dedup_by_key(|r| (r.point, r.trial));
    let pending: Vec<(usize, usize)> = (0..grid.point_count())
        .flat_map(|p| (0..grid.trials_per_point).map(move |t| (p, t)))
        .filter(|pair| !done.contains(pair))
        .collect();

    let fresh: Mutex<Vec<TrialRecord>> = Mutex::new(Vec::with_capacity(pending.len()));
    pool.install(|| {
        pending.par_iter().try_for_each(|&(p, t)| -> Result<()> {
            let record = trial_record(grid, p, t)?;
            if let Some(sink) = &sink {
                let mut line = serde_json::to_vec(&record)?;
                line.push(b'\n');
                let mut w = sink.lock().unwrap_or_else(|e| e.into_inner());
                w.write_all(&line)?;
                w.flush()?;
            }
            fresh.lock().unwrap_or_else(|e| e.into_inner()).push(record);
            Ok(())
        })
    })?;
    drop(sink);

    let fresh = fresh.into_inner().unwrap_or_else(|e| e.into_inner());
    let executed = fresh.len();
    records.extend(fresh);
    records.sort_by_key(|r| (r.point, r.trial));

    if let Some(path) = trials_path {
        if executed > 0 {
            rewrite_trials(path, &config, &records)?;
        }
    }
    let cells = aggregate_cells(grid, &records);
    Ok(SweepOutcome {
        records,
        cells,
        executed,
    })
}

/// Reads the records of a trial file, creating the file with its header if
/// absent. Fails when the file was written for a different grid.
fn load_or_create_trials(path: &Path, config: &GridConfig) -> Result<Vec<TrialRecord>> {
    if !path.exists() {
        let mut f = File::create(path)?;
        write_header(&mut f, config)?;
        f.sync_all()?;
        return Ok(Vec::new());
    }
    let bytes = fs::read(path)?;
    let complete = match bytes.iter().rposition(|&b| b == b'\n') {
        Some(i) => i + 1,
        None => 0,
    };
    if complete < bytes.len() {
        // interrupted mid-line: drop the partial record
        OpenOptions::new()
            .write(true)
            .open(path)?
            .set_len(complete as u64)?;
    }
    if complete == 0 {
        let mut f = File::create(path)?;
        write_header(&mut f, config)?;
        return Ok(Vec::new());
    }
    let (header, records) = read_trials(&bytes[..complete], path)?;
    if serde_json::to_value(&header)? != serde_json::to_value(config)? {
        return Err(Error::Usage(format!(
            "{} was written for a different grid config; use a new output path",
            path.display()
        )));
    }
    Ok(records)
}

fn write_header<W: Write>(out: &mut W, config: &GridConfig) -> Result<()> {
    serde_json::to_writer(
        &mut *out,
        &TrialFileHeader {
            grid: config.clone(),
        },
    )?;
    out.write_all(b"\n")?;
    Ok(())
}

fn rewrite_trials(path: &Path, config: &GridConfig, records: &[TrialRecord]) -> Result<()> {
    let tmp = sibling(path, "tmp");
    {
        let mut w = BufWriter::new(File::create(&tmp)?);
        write_trials(&mut w, config, records)?;
        w.into_inner().map_err(|e| e.into_error())?.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

fn sibling(path: &Path, ext: &str) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".");
    name.push(ext);
    path.with_file_name(name)
}

/// Writes a complete trial file: header line, then one record per line.
pub fn write_trials<W: Write>(out: &mut W, config: &GridConfig, records: &[TrialRecord]) -> Result<()> {
    write_header(out, config)?;
    for r in records {
        serde_json::to_writer(&mut *out, r)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

fn read_trials(bytes: &[u8], path: &Path) -> Result<(GridConfig, Vec<TrialRecord>)> {
    let mut header = None;
    let mut records = Vec::new();
    for (idx, line) in BufReader::new(bytes).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parse_err = |e: serde_json::Error| Error::Parse {
            path: path.to_path_buf(),
            line: idx + 1,
            message: e.to_string(),
        };
        if header.is_none() {
            let h: TrialFileHeader = serde_json::from_str(&line).map_err(parse_err)?;
            header = Some(h.grid);
        } else {
            records.push(serde_json::from_str(&line).map_err(parse_err)?);
        }
    }
    let header = header.ok_or_else(|| Error::Parse {
        path: path.to_path_buf(),
        line: 1,
        message: "missing header line".into(),
    })?;
    Ok((header, records))
}

/// Loads a trial file written by [`run_grid`].
pub fn load_trials(path: &Path) -> Result<(GridConfig, Vec<TrialRecord>)> {
    read_trials(&fs::read(path)?, path)
}

/// Aggregated sweep output, consumed by the renderer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellsReport {
    pub grid: GridConfig,
    pub behavior: Behavior,
    pub axes: Vec<Axis>,
    pub cells: Vec<PhaseCell>,
}

impl CellsReport {
    pub fn new(grid: &ParamGrid, cells: Vec<PhaseCell>) -> Self {
        CellsReport {
            grid: grid.to_config(),
            behavior: grid.behavior(),
            axes: grid.axes.clone(),
            cells,
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        serde_json::to_writer_pretty(&mut w, self)?;
        w.write_all(b"\n")?;
        w.flush()?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: e.line(),
            message: e.to_string(),
        })
    }
}
