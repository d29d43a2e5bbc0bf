//! Fiber-longitudinal power profile: optical power versus distance.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// How the samples of a [`PowerProfile`] relate to amplifier positions.
///
/// A profile is a sampled piecewise-linear (in dB) curve with jumps at
/// amplifiers; the fitting code must know where an amplifier sits relative
/// to the two samples that straddle its jump.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProfileSampling {
    /// Samples lie on step boundaries; the sample at an amplifier position
    /// holds the post-gain power. Ground-truth profiles use this.
    PostJump,
    /// Samples are step midpoints; an amplifier sits halfway between the
    /// two samples around its jump. Learned profiles use this because each
    /// learned weight represents the power over one model step.
    StepMidpoint,
}

#[derive(Debug, Error)]
pub enum ProfileError {
    #[error("profile needs at least 2 samples, got {0}")]
    TooShort(usize),
    #[error("distance grid must be strictly increasing (index {0})")]
    NonMonotonic(usize),
    #[error("distance and power vectors differ in length: {0} vs {1}")]
    LengthMismatch(usize, usize),
}

/// Sampled optical power along a link.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerProfile {
    /// Distance grid in km, strictly increasing.
    pub distance_km: Vec<f64>,
    /// Power in dBm at each grid point.
    pub power_dbm: Vec<f64>,
    /// Sampling convention (see [`ProfileSampling`]).
    pub sampling: ProfileSampling,
}

impl PowerProfile {
    pub fn new(
        distance_km: Vec<f64>,
        power_dbm: Vec<f64>,
        sampling: ProfileSampling,
    ) -> Result<Self, ProfileError> {
        if distance_km.len() != power_dbm.len() {
            return Err(ProfileError::LengthMismatch(
                distance_km.len(),
                power_dbm.len(),
            ));
        }
        if distance_km.len() < 2 {
            return Err(ProfileError::TooShort(distance_km.len()));
        }
        for i in 1..distance_km.len() {
            if distance_km[i] <= distance_km[i - 1] {
                return Err(ProfileError::NonMonotonic(i));
            }
        }
        Ok(Self {
            distance_km,
            power_dbm,
            sampling,
        })
    }

    pub fn len(&self) -> usize {
        self.distance_km.len()
    }

    pub fn is_empty(&self) -> bool {
        self.distance_km.is_empty()
    }

    /// Serialize as `distance_km,power_dbm` CSV rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("distance_km,power_dbm\n");
        for (d, p) in self.distance_km.iter().zip(&self.power_dbm) {
            out.push_str(&format!("{d:.6},{p:.6}\n"));
        }
        out
    }
}
