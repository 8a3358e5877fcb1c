//! Unicycle kinematics driven by the binary milling and diffusion controllers.
//!
//! Each step senses on the current microstate, chooses every agent's control
//! from that snapshot, integrates the unicycle model exactly over one step
//! (the motion under constant controls is a circular arc), and then separates
//! overlapping bodies.

use crate::error::{Error, Result};
use crate::params::{Controller, SimParams};
use crate::swarm::{sense_unchecked, wrap_angle, AgentState, Microstate};
use crate::trajectory::Trajectory;

/// Maximum number of sweeps over all pairs when separating bodies.
pub const MAX_COLLISION_PASSES: usize = 16;

/// Default spacing between recorded frames, seconds.
pub const DEFAULT_FRAME_INTERVAL: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlInput {
    /// m/s, negative when reversing.
    pub forward_speed: f64,
    /// rad/s, positive is counter-clockwise.
    pub turn_rate: f64,
}

pub fn milling_control(h: bool, params: &SimParams) -> ControlInput {
    ControlInput {
        forward_speed: params.speed,
        turn_rate: if h { params.turn_rate } else { -params.turn_rate },
    }
}

pub fn diffusion_control(h: bool, params: &SimParams) -> ControlInput {
    if h {
        ControlInput {
            forward_speed: -params.speed,
            turn_rate: 0.0,
        }
    } else {
        ControlInput {
            forward_speed: 0.0,
            turn_rate: params.turn_rate,
        }
    }
}

/// Control law selected by `params.controller`.
#[inline]
pub fn control(h: bool, params: &SimParams) -> ControlInput {
    match params.controller {
        Controller::Milling => milling_control(h, params),
        Controller::Diffusion => diffusion_control(h, params),
    }
}

/// Exact solution of the unicycle model for constant `u` over `dt`.
///
/// Written in chord form: the displacement has length
/// `2 (v/ω) sin(ω dt / 2)` along the mid-arc heading `θ + ω dt / 2`, which is
/// algebraically the arc update and stays well conditioned as ω → 0.
#[inline]
pub fn integrate(agent: &AgentState, u: ControlInput, dt: f64) -> AgentState {
    let v = u.forward_speed;
    let w = u.turn_rate;
    if w == 0.0 {
        return AgentState {
            x: agent.x + v * dt * agent.theta.cos(),
            y: agent.y + v * dt * agent.theta.sin(),
            theta: agent.theta,
        };
    }
    let half = 0.5 * w * dt;
    let chord = 2.0 * v * half.sin() / w;
    let mid = agent.theta + half;
    AgentState {
        x: agent.x + chord * mid.cos(),
        y: agent.y + chord * mid.sin(),
        theta: wrap_angle(agent.theta + w * dt),
    }
}

/// Advances the whole swarm by one `params.dt`.
pub fn step(state: &Microstate, params: &SimParams) -> Microstate {
    let mut next = state.agents().to_vec();
    step_into(state.agents(), &mut next, params);
    let mut out = Microstate::from_parts(next, state.time() + params.dt);
    resolve_collisions_in_place(out.agents_mut(), params.body_radius);
    out
}

/// Sense on `current`, integrate into `next`. No collision handling.
fn step_into(current: &[AgentState], next: &mut [AgentState], params: &SimParams) {
    for (i, slot) in next.iter_mut().enumerate() {
        let h = sense_unchecked(i, current, &params.sensor);
        *slot = integrate(&current[i], control(h, params), params.dt);
    }
}

/// Pushes overlapping bodies apart along their center line.
///
/// Returns the separated microstate; headings are untouched. With
/// `body_radius == 0` the input is returned unchanged.
pub fn resolve_collisions(state: &Microstate, body_radius: f64) -> Microstate {
    let mut out = state.clone();
    resolve_collisions_in_place(out.agents_mut(), body_radius);
    out
}

pub(crate) fn resolve_collisions_in_place(agents: &mut [AgentState], body_radius: f64) {
    if body_radius <= 0.0 {
        return;
    }
    let min_sep = 2.0 * body_radius;
    let min_sep2 = min_sep * min_sep;
    let n = agents.len();
    for _ in 0..MAX_COLLISION_PASSES {
        let mut moved = false;
        for i in 0..n {
            for j in (i + 1)..n {
                let dx = agents[j].x - agents[i].x;
                let dy = agents[j].y - agents[i].y;
                let d2 = dx * dx + dy * dy;
                if d2 >= min_sep2 {
                    continue;
                }
                let d = d2.sqrt();
                let (ux, uy) = if d > 1e-12 {
                    (dx / d, dy / d)
                } else {
                    coincident_direction(i, j)
                };
                let push = 0.5 * (min_sep - d);
                agents[i].x -= push * ux;
                agents[i].y -= push * uy;
                agents[j].x += push * ux;
                agents[j].y += push * uy;
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
}

/// Deterministic unit vector for separating a coincident pair `(i, j)`.
fn coincident_direction(i: usize, j: usize) -> (f64, f64) {
    let key = ((i as u64) << 32) | j as u64;
    let bits = crate::seed::mix64(key);
    // top 53 bits as a fraction of a turn
    let angle = (bits >> 11) as f64 / (1u64 << 53) as f64 * std::f64::consts::TAU;
    (angle.cos(), angle.sin())
}

/// Default record stride: the number of steps per 0.1 s frame (at least 1).
pub fn default_record_stride(dt: f64) -> usize {
    ((DEFAULT_FRAME_INTERVAL / dt).round() as usize).max(1)
}

/// Runs a full simulation with the default frame spacing.
pub fn run(params: &SimParams, seed: u64, init: Microstate) -> Result<Trajectory> {
    run_with_stride(params, seed, init, default_record_stride(params.dt))
}

/// Applies [`step`] `params.step_count()` times, recording the initial state
/// and every `record_stride`-th state after it.
///
/// The seed is carried into the trajectory for provenance; the dynamics
/// themselves are deterministic given the initial microstate.
pub fn run_with_stride(
    params: &SimParams,
    seed: u64,
    init: Microstate,
    record_stride: usize,
) -> Result<Trajectory> {
    params.validate()?;
    if record_stride == 0 {
        return Err(Error::invalid("record_stride", "must be at least 1"));
    }
    if init.len() != params.n_agents {
        return Err(Error::Usage(format!(
            "initial microstate has {} agents but n = {}",
            init.len(),
            params.n_agents
        )));
    }

    let steps = params.step_count();
    let mut frames = Vec::with_capacity(steps / record_stride + 1);
    let mut current = Microstate::from_parts(init.into_agents(), 0.0);
    let mut scratch = current.agents().to_vec();
    frames.push(current.clone());

    for k in 1..=steps {
        step_into(current.agents(), &mut scratch, params);
        resolve_collisions_in_place(&mut scratch, params.body_radius);
        if scratch.iter().any(|a| !a.is_finite()) {
            return Err(Error::Diverged { step: k });
        }
        std::mem::swap(current.agents_mut_vec(), &mut scratch);
        // times are products, not sums, so frame spacing stays exact
        current.set_time(k as f64 * params.dt);
        if k % record_stride == 0 {
            frames.push(current.clone());
        }
    }

    Ok(Trajectory::new(*params, seed, record_stride, frames))
}
