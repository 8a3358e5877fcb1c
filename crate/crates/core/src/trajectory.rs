//! Recorded trajectories and their JSON Lines file format.
//!
//! ```text
//! {"params": {...}, "seed": 7, "record_stride": 10}
//! {"t": 0.0, "agents": [[x, y, theta], ...]}
//! {"t": 0.1, "agents": [[x, y, theta], ...]}
//! ```
//!
//! The first line is a header carrying the full parameters (angles in degrees,
//! as in config files). Every following line is one frame; agent headings are
//! in radians. Externally recorded data can be classified by converting it to
//! this layout; `record_stride` may then be omitted.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{ParamsSpec, SimParams};
use crate::swarm::{AgentState, Microstate};

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    params: SimParams,
    seed: u64,
    record_stride: usize,
    frames: Vec<Microstate>,
}

impl Trajectory {
    pub(crate) fn new(
        params: SimParams,
        seed: u64,
        record_stride: usize,
        frames: Vec<Microstate>,
    ) -> Self {
        Trajectory {
            params,
            seed,
            record_stride,
            frames,
        }
    }

    /// Builds a trajectory from externally supplied frames. Frames must be
    /// non-empty, share one agent count and have strictly increasing times.
    pub fn from_frames(
        params: SimParams,
        seed: u64,
        record_stride: usize,
        frames: Vec<Microstate>,
    ) -> Result<Self> {
        let first = frames
            .first()
            .ok_or_else(|| Error::Usage("a trajectory needs at least one frame".into()))?;
        let n = first.len();
        for (k, pair) in frames.windows(2).enumerate() {
            if pair[1].len() != n {
                return Err(Error::Usage(format!(
                    "frame {} has {} agents, expected {n}",
                    k + 1,
                    pair[1].len()
                )));
            }
            if pair[1].time() <= pair[0].time() {
                return Err(Error::Usage(format!(
                    "frame {} time {} does not increase",
                    k + 1,
                    pair[1].time()
                )));
            }
        }
        Ok(Trajectory::new(params, seed, record_stride.max(1), frames))
    }

    pub fn params(&self) -> &SimParams {
        &self.params
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn record_stride(&self) -> usize {
        self.record_stride
    }

    pub fn frames(&self) -> &[Microstate] {
        &self.frames
    }

    /// Time span covered by the recorded frames.
    pub fn duration(&self) -> f64 {
        match (self.frames.first(), self.frames.last()) {
            (Some(a), Some(b)) => b.time() - a.time(),
            _ => 0.0,
        }
    }

    pub fn write_jsonl<W: Write>(&self, mut out: W) -> Result<()> {
        let header = Header {
            params: self.params.to_spec(),
            seed: self.seed,
            record_stride: Some(self.record_stride),
        };
        serde_json::to_writer(&mut out, &header)?;
        out.write_all(b"\n")?;
        for frame in &self.frames {
            let line = FrameLine {
                t: frame.time(),
                agents: frame.agents().iter().map(|a| [a.x, a.y, a.theta]).collect(),
            };
            serde_json::to_writer(&mut out, &line)?;
            out.write_all(b"\n")?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = File::create(path)?;
        self.write_jsonl(BufWriter::new(file))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = File::open(path)?;
        Self::read_jsonl(BufReader::new(file), path)
    }

    /// Parses the JSON Lines layout; `origin` only labels error messages.
    pub fn read_jsonl<R: BufRead>(reader: R, origin: &Path) -> Result<Self> {
        let parse_err = |line: usize, message: String| Error::Parse {
            path: origin.to_path_buf(),
            line,
            message,
        };

        let mut header: Option<(SimParams, u64, Option<usize>)> = None;
        let mut frames: Vec<Microstate> = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let lineno = idx + 1;
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            if header.is_none() {
                let h: Header = serde_json::from_str(&line)
                    .map_err(|e| parse_err(lineno, format!("bad header: {e}")))?;
                let params = h
                    .params
                    .to_params()
                    .map_err(|e| parse_err(lineno, e.to_string()))?;
                header = Some((params, h.seed, h.record_stride));
                continue;
            }
            let f: FrameLine = serde_json::from_str(&line)
                .map_err(|e| parse_err(lineno, format!("bad frame: {e}")))?;
            let agents = f
                .agents
                .iter()
                .map(|a| AgentState::new(a[0], a[1], a[2]))
                .collect();
            let frame =
                Microstate::new(agents, f.t).map_err(|e| parse_err(lineno, e.to_string()))?;
            if let Some(prev) = frames.last() {
                if frame.len() != prev.len() {
                    return Err(parse_err(
                        lineno,
                        format!("{} agents, expected {}", frame.len(), prev.len()),
                    ));
                }
                if frame.time() <= prev.time() {
                    return Err(parse_err(lineno, format!("time {} does not increase", frame.time())));
                }
            }
            frames.push(frame);
        }

        let (params, seed, stride) =
            header.ok_or_else(|| parse_err(1, "missing header line".into()))?;
        if frames.is_empty() {
            return Err(parse_err(2, "no frames".into()));
        }
        let stride = stride.unwrap_or_else(|| infer_stride(&frames, params.dt));
        Trajectory::from_frames(params, seed, stride, frames)
    }
}

fn infer_stride(frames: &[Microstate], dt: f64) -> usize {
    match frames {
        [a, b, ..] => ((b.time() - a.time()) / dt).round().max(1.0) as usize,
        _ => 1,
    }
}

#[derive(Serialize, Deserialize)]
struct Header {
    params: ParamsSpec,
    seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    record_stride: Option<usize>,
}

#[derive(Serialize, Deserialize)]
struct FrameLine {
    t: f64,
    agents: Vec<[f64; 3]>,
}
