//! Operational macro/meso classification by visual resolution.
//!
//! Two states are macroscopically distinct when the displacement between
//! them can be resolved by the unaided eye within the observation window,
//! and mesoscopically distinct when it can be resolved only under some
//! magnification `M > 1`. A magnification `M` corresponds to a length scale
//! factor `X = 1/M`. Thresholds are closed: a displacement exactly at the
//! resolution limit counts as resolved.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Unaided-eye resolution limit, cm.
pub const DEFAULT_MIN_RESOLVABLE_LENGTH: f64 = 1.5e-4;
/// Observation window, s.
pub const DEFAULT_MAX_OBSERVATION_TIME: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DistinctnessError {
    #[error("duration must be positive, got {0}")]
    NonpositiveDuration(f64),
    #[error("displacement must be non-negative, got {0}")]
    NegativeDisplacement(f64),
    #[error("available magnification must be at least 1, got {0}")]
    InvalidMagnification(f64),
    #[error("resolution criterion values must be positive")]
    InvalidCriterion,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResolutionCriterion {
    /// cm
    pub min_resolvable_length: f64,
    /// s
    pub max_observation_time: f64,
}

impl Default for ResolutionCriterion {
    fn default() -> Self {
        Self {
            min_resolvable_length: DEFAULT_MIN_RESOLVABLE_LENGTH,
            max_observation_time: DEFAULT_MAX_OBSERVATION_TIME,
        }
    }
}

impl ResolutionCriterion {
    pub fn new(min_resolvable_length: f64, max_observation_time: f64) -> Result<Self, DistinctnessError> {
        let ok = |x: f64| x.is_finite() && x > 0.0;
        if !ok(min_resolvable_length) || !ok(max_observation_time) {
            return Err(DistinctnessError::InvalidCriterion);
        }
        Ok(Self {
            min_resolvable_length,
            max_observation_time,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Distinctness {
    Macroscopic,
    Mesoscopic { required_magnification: f64 },
    Unresolvable,
}

impl Distinctness {
    pub fn is_resolvable(&self) -> bool {
        !matches!(self, Distinctness::Unresolvable)
    }

    /// Ordering used by the monotonicity checks: higher is "more distinct".
    pub fn rank(&self) -> u8 {
        match self {
            Distinctness::Unresolvable => 0,
            Distinctness::Mesoscopic { .. } => 1,
            Distinctness::Macroscopic => 2,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Distinctness::Macroscopic => "macroscopic".to_string(),
            Distinctness::Mesoscopic {
                required_magnification,
            } => format!("mesoscopic (magnification {required_magnification:.3})"),
            Distinctness::Unresolvable => "unresolvable".to_string(),
        }
    }
}

/// Classifies a displacement (cm) accumulated over `duration` (s).
pub fn classify(
    displacement: f64,
    duration: f64,
    available_magnification: f64,
    criterion: &ResolutionCriterion,
) -> Result<Distinctness, DistinctnessError> {
    if !(duration > 0.0) {
        return Err(DistinctnessError::NonpositiveDuration(duration));
    }
    if !(displacement >= 0.0) {
        return Err(DistinctnessError::NegativeDisplacement(displacement));
    }
    if !(available_magnification >= 1.0) {
        return Err(DistinctnessError::InvalidMagnification(available_magnification));
    }
    if duration > criterion.max_observation_time || displacement == 0.0 {
        return Ok(Distinctness::Unresolvable);
    }
    let limit = criterion.min_resolvable_length;
    if displacement >= limit {
        Ok(Distinctness::Macroscopic)
    } else if displacement * available_magnification >= limit {
        Ok(Distinctness::Mesoscopic {
            required_magnification: limit / displacement,
        })
    } else {
        Ok(Distinctness::Unresolvable)
    }
}
