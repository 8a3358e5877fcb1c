//! Simulation parameters: one point of the swept parameter space.
//!
//! [`SimParams`] is the internal, SI/radian form. [`ParamsSpec`] is the
//! serialized form used in config files and trajectory headers; it carries
//! angles in degrees and uses the key names the CLI exposes.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::swarm::SensorSpec;

pub const DEFAULT_DT: f64 = 0.01;
pub const DEFAULT_BODY_RADIUS: f64 = 0.08;
pub const DEFAULT_HORIZON: f64 = 120.0;
pub const DEFAULT_EVAL_WINDOW: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Controller {
    /// Turn toward +ω when something is seen, −ω otherwise; always drive forward.
    Milling,
    /// Back straight away when something is seen, rotate in place otherwise.
    Diffusion,
}

impl Controller {
    /// The macrostate this controller is studied for.
    pub fn behavior(self) -> Behavior {
        match self {
            Controller::Milling => Behavior::Milling,
            Controller::Diffusion => Behavior::Diffusion,
        }
    }
}

impl FromStr for Controller {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "milling" => Ok(Controller::Milling),
            "diffusion" => Ok(Controller::Diffusion),
            other => Err(Error::invalid(
                "controller",
                format!("expected `milling` or `diffusion`, got `{other}`"),
            )),
        }
    }
}

impl fmt::Display for Controller {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Controller::Milling => "milling",
            Controller::Diffusion => "diffusion",
        })
    }
}

/// A named group behavior that can be detected from information markers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Behavior {
    Milling,
    Diffusion,
}

impl FromStr for Behavior {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "milling" => Ok(Behavior::Milling),
            "diffusion" => Ok(Behavior::Diffusion),
            other => Err(Error::invalid(
                "behavior",
                format!("expected `milling` or `diffusion`, got `{other}`"),
            )),
        }
    }
}

impl fmt::Display for Behavior {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Behavior::Milling => "milling",
            Behavior::Diffusion => "diffusion",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimParams {
    pub n_agents: usize,
    /// Forward (milling) or reverse (diffusion) speed, m/s.
    pub speed: f64,
    /// Turning rate, rad/s.
    pub turn_rate: f64,
    pub sensor: SensorSpec,
    pub controller: Controller,
    /// Collision radius of each body, m. Zero means point agents.
    pub body_radius: f64,
    pub dt: f64,
    pub horizon: f64,
    /// Length of the evaluation window at the end of the run, s.
    pub eval_window: f64,
}

impl SimParams {
    /// Parameters with the default time step, body size, horizon and window.
    pub fn new(
        controller: Controller,
        n_agents: usize,
        speed: f64,
        turn_rate: f64,
        sensor: SensorSpec,
    ) -> Self {
        SimParams {
            n_agents,
            speed,
            turn_rate,
            sensor,
            controller,
            body_radius: DEFAULT_BODY_RADIUS,
            dt: DEFAULT_DT,
            horizon: DEFAULT_HORIZON,
            eval_window: DEFAULT_EVAL_WINDOW,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_agents < 1 {
            return Err(Error::invalid("n", "must be at least 1"));
        }
        positive("v", self.speed)?;
        positive("omega_deg", self.turn_rate)?;
        self.sensor.validate()?;
        if !(self.body_radius.is_finite() && self.body_radius >= 0.0) {
            return Err(Error::invalid(
                "body_radius",
                format!("must be >= 0, got {}", self.body_radius),
            ));
        }
        positive("dt", self.dt)?;
        positive("horizon", self.horizon)?;
        positive("eval_window", self.eval_window)?;
        if self.eval_window > self.horizon {
            return Err(Error::invalid(
                "eval_window",
                format!(
                    "window {} s exceeds horizon {} s",
                    self.eval_window, self.horizon
                ),
            ));
        }
        Ok(())
    }

    /// Number of integration steps covering the horizon, `ceil(T / dt)`.
    pub fn step_count(&self) -> usize {
        let ratio = self.horizon / self.dt;
        // absorb representation error such as 120 / 0.01 = 12000.000000000002
        let rounded = ratio.round();
        if (ratio - rounded).abs() <= 1e-9 * rounded.max(1.0) {
            rounded as usize
        } else {
            ratio.ceil() as usize
        }
    }

    pub fn to_spec(&self) -> ParamsSpec {
        ParamsSpec {
            controller: self.controller,
            n: self.n_agents,
            v: self.speed,
            omega_deg: self.turn_rate.to_degrees(),
            gamma: self.sensor.range,
            phi_deg: self.sensor.opening.to_degrees(),
            body_radius: self.body_radius,
            dt: self.dt,
            horizon: self.horizon,
            eval_window: self.eval_window,
        }
    }
}

fn positive(key: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(key, format!("must be > 0, got {value}")))
    }
}

fn default_body_radius() -> f64 {
    DEFAULT_BODY_RADIUS
}
fn default_dt() -> f64 {
    DEFAULT_DT
}
fn default_horizon() -> f64 {
    DEFAULT_HORIZON
}
fn default_eval_window() -> f64 {
    DEFAULT_EVAL_WINDOW
}

/// Serialized parameters; angles in degrees.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSpec {
    pub controller: Controller,
    pub n: usize,
    pub v: f64,
    pub omega_deg: f64,
    pub gamma: f64,
    pub phi_deg: f64,
    #[serde(default = "default_body_radius")]
    pub body_radius: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_horizon")]
    pub horizon: f64,
    #[serde(default = "default_eval_window")]
    pub eval_window: f64,
}

impl ParamsSpec {
    pub fn to_params(&self) -> Result<SimParams> {
        if !(self.phi_deg > 0.0 && self.phi_deg <= 360.0) {
            return Err(Error::invalid(
                "phi_deg",
                format!("must be in (0, 360], got {}", self.phi_deg),
            ));
        }
        // 360 degrees must map to exactly TAU so that the full-circle sensor is a pure range test
        let opening = if self.phi_deg == 360.0 {
            TAU
        } else {
            self.phi_deg.to_radians()
        };
        let params = SimParams {
            n_agents: self.n,
            speed: self.v,
            turn_rate: self.omega_deg.to_radians(),
            sensor: SensorSpec {
                range: self.gamma,
                opening,
            },
            controller: self.controller,
            body_radius: self.body_radius,
            dt: self.dt,
            horizon: self.horizon,
            eval_window: self.eval_window,
        };
        params.validate()?;
        Ok(params)
    }
}

impl TryFrom<ParamsSpec> for SimParams {
    type Error = Error;

    fn try_from(spec: ParamsSpec) -> Result<Self> {
        spec.to_params()
    }
}
