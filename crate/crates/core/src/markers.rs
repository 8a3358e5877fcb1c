//! Information markers an external observer can measure from positions alone:
//! average speed, circliness and nearest-neighbor variance.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::swarm::Microstate;
use crate::trajectory::Trajectory;

/// Minimum centroid distance below which circliness is undefined.
pub const CIRCLINESS_EPS: f64 = 1e-9;

/// Markers measured at one recorded frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarkerSample {
    pub time: f64,
    pub avg_speed: f64,
    pub circliness: f64,
    pub nn_variance: f64,
}

/// Markers averaged over an evaluation window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarkerVector {
    pub window: (f64, f64),
    #[serde(rename = "v_bar", with = "crate::float_or_null")]
    pub avg_speed: f64,
    #[serde(rename = "c_bar", with = "crate::float_or_null")]
    pub circliness: f64,
    #[serde(rename = "delta_bar", with = "crate::float_or_null")]
    pub nn_variance: f64,
}

pub fn centroid(state: &Microstate) -> (f64, f64) {
    let n = state.len() as f64;
    let (sx, sy) = state
        .agents()
        .iter()
        .fold((0.0, 0.0), |(sx, sy), a| (sx + a.x, sy + a.y));
    (sx / n, sy / n)
}

/// `(max_i |q_i − μ| − min_i |q_i − μ|) / min_i |q_i − μ|`; zero for a perfect ring.
///
/// Returns `+∞` when the closest agent sits within [`CIRCLINESS_EPS`] of the
/// centroid (including every single-agent swarm), which no milling threshold
/// accepts.
pub fn circliness(state: &Microstate) -> f64 {
    let (mx, my) = centroid(state);
    let (lo, hi) = state
        .agents()
        .iter()
        .map(|a| (a.x - mx).hypot(a.y - my))
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), r| (lo.min(r), hi.max(r)));
    if lo < CIRCLINESS_EPS {
        return f64::INFINITY;
    }
    (hi - lo) / lo
}

/// Mean positional speed between two frames, by finite differences.
pub fn avg_speed(prev: &Microstate, next: &Microstate) -> Result<f64> {
    if prev.len() != next.len() {
        return Err(Error::Usage(format!(
            "frames have {} and {} agents",
            prev.len(),
            next.len()
        )));
    }
    let gap = next.time() - prev.time();
    if gap <= 0.0 {
        return Err(Error::Usage(format!(
            "speed needs increasing frame times, got gap {gap}"
        )));
    }
    let total: f64 = prev
        .agents()
        .iter()
        .zip(next.agents())
        .map(|(a, b)| a.distance_to(b))
        .sum();
    Ok(total / prev.len() as f64 / gap)
}

/// Per-agent distance to the nearest other agent.
pub fn nearest_neighbor_distances(state: &Microstate) -> Vec<f64> {
    let agents = state.agents();
    let n = agents.len();
    let mut nearest = vec![f64::INFINITY; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = agents[i].distance_to(&agents[j]);
            nearest[i] = nearest[i].min(d);
            nearest[j] = nearest[j].min(d);
        }
    }
    nearest
}

/// Population variance of nearest-neighbor distances.
///
/// A single agent has no neighbor; the variance is then reported as `+∞` so
/// that it never satisfies a diffusion threshold.
pub fn nn_variance(state: &Microstate) -> f64 {
    if state.len() < 2 {
        return f64::INFINITY;
    }
    let d = nearest_neighbor_distances(state);
    let n = d.len() as f64;
    let mean = d.iter().sum::<f64>() / n;
    d.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n
}

/// One sample per frame after the first; speed uses the preceding frame.
pub fn sample_series(traj: &Trajectory) -> Result<Vec<MarkerSample>> {
    traj.frames()
        .windows(2)
        .map(|w| {
            Ok(MarkerSample {
                time: w[1].time(),
                avg_speed: avg_speed(&w[0], &w[1])?,
                circliness: circliness(&w[1]),
                nn_variance: nn_variance(&w[1]),
            })
        })
        .collect()
}

/// Arithmetic mean of each marker over samples whose time lies in `window`
/// (inclusive). At least two samples must fall inside.
pub fn aggregate(samples: &[MarkerSample], window: (f64, f64)) -> Result<MarkerVector> {
    let (t0, t1) = window;
    let tol = 1e-9 * t1.abs().max(1.0);
    let inside: Vec<&MarkerSample> = samples
        .iter()
        .filter(|s| s.time >= t0 - tol && s.time <= t1 + tol)
        .collect();
    if inside.len() < 2 {
        return Err(Error::Usage(format!(
            "window [{t0}, {t1}] holds {} marker samples, need at least 2",
            inside.len()
        )));
    }
    let n = inside.len() as f64;
    let mean = |f: fn(&MarkerSample) -> f64| inside.iter().map(|s| f(s)).sum::<f64>() / n;
    Ok(MarkerVector {
        window,
        avg_speed: mean(|s| s.avg_speed),
        circliness: mean(|s| s.circliness),
        nn_variance: mean(|s| s.nn_variance),
    })
}

/// Writes `t,avg_speed,circliness,nn_variance` rows.
pub fn write_csv<W: Write>(samples: &[MarkerSample], mut out: W) -> Result<()> {
    writeln!(out, "t,avg_speed,circliness,nn_variance")?;
    for s in samples {
        writeln!(
            out,
            "{},{},{},{}",
            s.time, s.avg_speed, s.circliness, s.nn_variance
        )?;
    }
    out.flush()?;
    Ok(())
}
