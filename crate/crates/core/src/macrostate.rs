//! Structure sets and behavior indicators.
//!
//! A behavior is present (`B = 1`) exactly when its marker vector falls in
//! the behavior's structure set:
//!
//! * milling: `c̄ < circliness_max` and `|v̄ − v| ≤ speed_rel_tol · v`
//! * diffusion: `δ̄ < nn_variance_max`
//!
//! Both upper bounds are strict. For whole trajectories the per-frame marker
//! must additionally stay inside its bound for at least `min_sustained` of
//! the frames in the evaluation window.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::markers::{aggregate, sample_series, MarkerSample, MarkerVector};
use crate::params::Behavior;
use crate::trajectory::Trajectory;

pub const DEFAULT_CIRCLINESS_MAX: f64 = 0.01;
pub const DEFAULT_NN_VARIANCE_MAX: f64 = 0.005;
pub const DEFAULT_SPEED_REL_TOL: f64 = 0.02;
pub const DEFAULT_MIN_SUSTAINED: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureSet {
    pub behavior: Behavior,
    #[serde(default = "default_circliness_max")]
    pub circliness_max: f64,
    #[serde(default = "default_speed_rel_tol")]
    pub speed_rel_tol: f64,
    #[serde(default = "default_nn_variance_max")]
    pub nn_variance_max: f64,
    /// Fraction of window frames that must individually meet the shape bound.
    #[serde(default = "default_min_sustained")]
    pub min_sustained: f64,
}

fn default_circliness_max() -> f64 {
    DEFAULT_CIRCLINESS_MAX
}
fn default_speed_rel_tol() -> f64 {
    DEFAULT_SPEED_REL_TOL
}
fn default_nn_variance_max() -> f64 {
    DEFAULT_NN_VARIANCE_MAX
}
fn default_min_sustained() -> f64 {
    DEFAULT_MIN_SUSTAINED
}

impl StructureSet {
    pub fn milling() -> Self {
        Self::for_behavior(Behavior::Milling)
    }

    pub fn diffusion() -> Self {
        Self::for_behavior(Behavior::Diffusion)
    }

    pub fn for_behavior(behavior: Behavior) -> Self {
        StructureSet {
            behavior,
            circliness_max: DEFAULT_CIRCLINESS_MAX,
            speed_rel_tol: DEFAULT_SPEED_REL_TOL,
            nn_variance_max: DEFAULT_NN_VARIANCE_MAX,
            min_sustained: DEFAULT_MIN_SUSTAINED,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (key, value) in [
            ("circliness_max", self.circliness_max),
            ("speed_tol", self.speed_rel_tol),
            ("nn_variance_max", self.nn_variance_max),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::invalid(key, format!("must be > 0, got {value}")));
            }
        }
        if !(0.0..=1.0).contains(&self.min_sustained) {
            return Err(Error::invalid(
                "min_sustained",
                format!("must be in [0, 1], got {}", self.min_sustained),
            ));
        }
        Ok(())
    }

    fn milling_shape_ok(&self, circliness: f64) -> bool {
        circliness < self.circliness_max
    }

    fn diffusion_shape_ok(&self, nn_variance: f64) -> bool {
        nn_variance < self.nn_variance_max
    }

    fn speed_ok(&self, avg_speed: f64, v_set: f64) -> bool {
        (avg_speed - v_set).abs() <= self.speed_rel_tol * v_set
    }
}

/// Optional threshold overrides as they appear in config files and flags.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThresholdOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub circliness_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub speed_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nn_variance_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_sustained: Option<f64>,
}

impl ThresholdOverrides {
    /// Default structure set for `behavior` with these overrides applied and validated.
    pub fn structure_set(&self, behavior: Behavior) -> Result<StructureSet> {
        let mut eta = StructureSet::for_behavior(behavior);
        if let Some(v) = self.circliness_max {
            eta.circliness_max = v;
        }
        if let Some(v) = self.speed_tol {
            eta.speed_rel_tol = v;
        }
        if let Some(v) = self.nn_variance_max {
            eta.nn_variance_max = v;
        }
        if let Some(v) = self.min_sustained {
            eta.min_sustained = v;
        }
        eta.validate()?;
        Ok(eta)
    }

    /// Overrides from `other` win over those already set here.
    pub fn merged_with(&self, other: &ThresholdOverrides) -> ThresholdOverrides {
        ThresholdOverrides {
            circliness_max: other.circliness_max.or(self.circliness_max),
            speed_tol: other.speed_tol.or(self.speed_tol),
            nn_variance_max: other.nn_variance_max.or(self.nn_variance_max),
            min_sustained: other.min_sustained.or(self.min_sustained),
        }
    }
}

/// Outcome of testing one behavior, with the evidence used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub behavior: Behavior,
    #[serde(with = "bit")]
    pub value: bool,
    pub markers: MarkerVector,
    pub thresholds: StructureSet,
    /// Fraction of window frames meeting the per-frame bound, when a
    /// trajectory was classified.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sustained: Option<f64>,
}

impl Classification {
    pub fn to_json(&self) -> String {
        // all fields are plain data; serialization cannot fail
        serde_json::to_string(&Report::from(self)).expect("classification serializes")
    }
}

/// Flat export layout: the window is hoisted next to the markers.
#[derive(Serialize)]
struct Report<'a> {
    behavior: Behavior,
    value: u8,
    markers: ReportMarkers,
    window: [f64; 2],
    thresholds: &'a StructureSet,
    #[serde(skip_serializing_if = "Option::is_none")]
    sustained: Option<f64>,
}

#[derive(Serialize)]
struct ReportMarkers {
    #[serde(with = "crate::float_or_null")]
    v_bar: f64,
    #[serde(with = "crate::float_or_null")]
    c_bar: f64,
    #[serde(with = "crate::float_or_null")]
    delta_bar: f64,
}

impl<'a> From<&'a Classification> for Report<'a> {
    fn from(c: &'a Classification) -> Self {
        Report {
            behavior: c.behavior,
            value: c.value as u8,
            markers: ReportMarkers {
                v_bar: c.markers.avg_speed,
                c_bar: c.markers.circliness,
                delta_bar: c.markers.nn_variance,
            },
            window: [c.markers.window.0, c.markers.window.1],
            thresholds: &c.thresholds,
            sustained: c.sustained,
        }
    }
}

pub(crate) mod bit {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &bool, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u8(*v as u8)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<bool, D::Error> {
        Ok(u8::deserialize(d)? != 0)
    }
}

fn expect_behavior(eta: &StructureSet, wanted: Behavior) -> Result<()> {
    if eta.behavior == wanted {
        Ok(())
    } else {
        Err(Error::Usage(format!(
            "structure set is for {}, expected {wanted}",
            eta.behavior
        )))
    }
}

/// Milling indicator from aggregated markers: circle-shaped and moving at the set speed.
pub fn classify_milling(m: &MarkerVector, eta: &StructureSet, v_set: f64) -> Result<Classification> {
    expect_behavior(eta, Behavior::Milling)?;
    Ok(Classification {
        behavior: Behavior::Milling,
        value: eta.milling_shape_ok(m.circliness) && eta.speed_ok(m.avg_speed, v_set),
        markers: *m,
        thresholds: *eta,
        sustained: None,
    })
}

/// Diffusion indicator from aggregated markers: evenly spaced neighbors.
pub fn classify_diffusion(m: &MarkerVector, eta: &StructureSet) -> Result<Classification> {
    expect_behavior(eta, Behavior::Diffusion)?;
    Ok(Classification {
        behavior: Behavior::Diffusion,
        value: eta.diffusion_shape_ok(m.nn_variance),
        markers: *m,
        thresholds: *eta,
        sustained: None,
    })
}

/// End-to-end classification of a recorded trajectory over its final
/// evaluation window `[t_end − W, t_end]`.
pub fn classify_trajectory(traj: &Trajectory, eta: &StructureSet) -> Result<Classification> {
    let window = traj.params().eval_window;
    let frames = traj.frames();
    let duration = traj.duration();
    if duration + 1e-9 * window.max(1.0) < window {
        return Err(Error::Usage(format!(
            "trajectory covers {duration} s, shorter than the {window} s evaluation window"
        )));
    }
    let t_end = frames.last().map(|f| f.time()).unwrap_or(0.0);
    let bounds = (t_end - window, t_end);
    let samples = sample_series(traj)?;
    classify_samples(&samples, bounds, eta, traj.params().speed)
}

/// Classifies a marker time series over `window`, applying the sustained rule.
pub fn classify_samples(
    samples: &[MarkerSample],
    window: (f64, f64),
    eta: &StructureSet,
    v_set: f64,
) -> Result<Classification> {
    let markers = aggregate(samples, window)?;
    let tol = 1e-9 * window.1.abs().max(1.0);
    let inside = samples
        .iter()
        .filter(|s| s.time >= window.0 - tol && s.time <= window.1 + tol);
    let (hits, total) = inside.fold((0usize, 0usize), |(h, t), s| {
        let ok = match eta.behavior {
            Behavior::Milling => eta.milling_shape_ok(s.circliness),
            Behavior::Diffusion => eta.diffusion_shape_ok(s.nn_variance),
        };
        (h + ok as usize, t + 1)
    });
    let sustained = hits as f64 / total as f64;

    let mut c = match eta.behavior {
        Behavior::Milling => classify_milling(&markers, eta, v_set)?,
        Behavior::Diffusion => classify_diffusion(&markers, eta)?,
    };
    c.value = c.value && sustained >= eta.min_sustained;
    c.sustained = Some(sustained);
    Ok(c)
}
