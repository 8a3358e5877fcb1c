//! Agent state, microstates and the binary cone sensor.
//!
//! Positions are in meters, headings in radians normalized to `[-π, π)`.
//! Every distance-based quantity in this crate is computed on positions only;
//! headings never enter a distance.

use std::f64::consts::{PI, TAU};

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Wraps `theta` into `[-π, π)`. Rejects NaN and infinities.
pub fn normalize_angle(theta: f64) -> Result<f64> {
    if !theta.is_finite() {
        return Err(Error::Domain(format!("cannot normalize angle {theta}")));
    }
    Ok(wrap_angle(theta))
}

/// Infallible variant for values already known to be finite.
#[inline]
pub(crate) fn wrap_angle(theta: f64) -> f64 {
    if (-PI..PI).contains(&theta) {
        return theta;
    }
    let wrapped = (theta + PI).rem_euclid(TAU) - PI;
    // rem_euclid may round up to exactly TAU
    if wrapped >= PI {
        wrapped - TAU
    } else {
        wrapped
    }
}

/// Observable state of one agent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgentState {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

impl AgentState {
    /// Builds a state with the heading wrapped into `[-π, π)`.
    pub fn new(x: f64, y: f64, theta: f64) -> Self {
        AgentState {
            x,
            y,
            theta: wrap_angle(theta),
        }
    }

    pub fn position(&self) -> (f64, f64) {
        (self.x, self.y)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.theta.is_finite()
    }

    #[inline]
    pub fn distance_to(&self, other: &AgentState) -> f64 {
        (other.x - self.x).hypot(other.y - self.y)
    }
}

/// All agent states at one instant. Agent identity is the index; the number of
/// agents is fixed once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Microstate {
    agents: Vec<AgentState>,
    time: f64,
}

impl Microstate {
    pub fn new(agents: Vec<AgentState>, time: f64) -> Result<Self> {
        if agents.is_empty() {
            return Err(Error::Usage("a microstate needs at least one agent".into()));
        }
        if !(time.is_finite() && time >= 0.0) {
            return Err(Error::Domain(format!("microstate time must be finite and >= 0, got {time}")));
        }
        if let Some(i) = agents.iter().position(|a| !a.is_finite()) {
            return Err(Error::Domain(format!("agent {i} has a non-finite state")));
        }
        Ok(Microstate { agents, time })
    }

    /// Skips validation; used on hot paths where inputs are already checked.
    pub(crate) fn from_parts(agents: Vec<AgentState>, time: f64) -> Self {
        Microstate { agents, time }
    }

    pub fn len(&self) -> usize {
        self.agents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.agents.is_empty()
    }

    pub fn agents(&self) -> &[AgentState] {
        &self.agents
    }

    /// Mutable access to the agents; the slice cannot change the agent count.
    pub fn agents_mut(&mut self) -> &mut [AgentState] {
        &mut self.agents
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub(crate) fn agents_mut_vec(&mut self) -> &mut Vec<AgentState> {
        &mut self.agents
    }

    pub(crate) fn set_time(&mut self, time: f64) {
        self.time = time;
    }

    pub fn into_agents(self) -> Vec<AgentState> {
        self.agents
    }
}

/// Forward-facing cone sensor: range `gamma` (m) and full opening angle `phi` (rad).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensorSpec {
    pub range: f64,
    pub opening: f64,
}

impl SensorSpec {
    pub fn new(range: f64, opening: f64) -> Result<Self> {
        let sensor = SensorSpec { range, opening };
        sensor.validate()?;
        Ok(sensor)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.range.is_finite() && self.range > 0.0) {
            return Err(Error::invalid("gamma", format!("must be > 0, got {}", self.range)));
        }
        if !(self.opening > 0.0 && self.opening <= TAU) {
            return Err(Error::invalid(
                "phi_deg",
                format!("must be in (0, 360], got {}", self.opening.to_degrees()),
            ));
        }
        Ok(())
    }
}

/// True when `target` lies inside the observer's field of view: distance in
/// `(0, range]` and absolute bearing off the heading at most `opening / 2`.
/// Both bounds are inclusive; a coincident target is never detected.
#[inline]
pub fn in_fov(observer: &AgentState, target: (f64, f64), sensor: &SensorSpec) -> bool {
    let dx = target.0 - observer.x;
    let dy = target.1 - observer.y;
    let d2 = dx * dx + dy * dy;
    if d2 == 0.0 || d2.sqrt() > sensor.range {
        return false;
    }
    if sensor.opening >= TAU {
        return true;
    }
    let bearing = wrap_angle(dy.atan2(dx) - observer.theta);
    bearing.abs() <= 0.5 * sensor.opening
}

/// Binary sensor reading of agent `i`: does any other agent's center lie in its FOV?
pub fn sense(i: usize, state: &Microstate, sensor: &SensorSpec) -> Result<bool> {
    if i >= state.len() {
        return Err(Error::Usage(format!(
            "agent index {i} out of range for {} agents",
            state.len()
        )));
    }
    Ok(sense_unchecked(i, state.agents(), sensor))
}

#[inline]
pub(crate) fn sense_unchecked(i: usize, agents: &[AgentState], sensor: &SensorSpec) -> bool {
    let me = &agents[i];
    agents
        .iter()
        .enumerate()
        .any(|(j, other)| j != i && in_fov(me, other.position(), sensor))
}

/// Whether the r-disk graph (edge when two agents are within `radius`) is connected.
pub fn r_disk_connected(state: &Microstate, radius: f64) -> bool {
    let agents = state.agents();
    let n = agents.len();
    let mut components = UnionFind::<usize>::new(n);
    let mut merges = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            if agents[i].distance_to(&agents[j]) <= radius && components.union(i, j) {
                merges += 1;
                if merges + 1 == n {
                    return true;
                }
            }
        }
    }
    merges + 1 >= n
}
