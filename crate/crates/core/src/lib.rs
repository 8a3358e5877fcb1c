//! Simulation and analysis of minimal binary-sensor swarms.
//!
//! Agents are unicycles with a single forward cone sensor. Two binary
//! controllers are provided (milling and diffusion). Recorded trajectories are
//! reduced to information markers, markers are tested against structure sets
//! to decide whether a macrostate is present, and repeated seeded trials over
//! a grid of parameters are summarized as frequency-colored phase diagrams.

pub mod dynamics;
pub mod error;
pub mod macrostate;
pub mod markers;
pub mod params;
pub mod phasediag;
pub mod seed;
pub mod swarm;
pub mod sweep;
pub mod trajectory;

pub use dynamics::{run, run_with_stride, step, ControlInput};
pub use error::{Error, Result};
pub use macrostate::{classify_trajectory, Classification, StructureSet, ThresholdOverrides};
pub use markers::{MarkerSample, MarkerVector};
pub use params::{Behavior, Controller, ParamsSpec, SimParams};
pub use phasediag::{color_for, ColorRule, PhaseDiagram, Rgb};
pub use sweep::{run_grid, CellsReport, GridConfig, ParamGrid, PhaseCell, TrialRecord};
pub use swarm::{AgentState, Microstate, SensorSpec};
pub use trajectory::Trajectory;

/// Serde adapter writing non-finite floats as `null` and reading `null` back
/// as `+∞` (the sentinel used for undefined markers).
pub(crate) mod float_or_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}
