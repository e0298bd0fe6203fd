//! Regime calculator for gravity-mediated-entanglement parameters (SI units in, verdict out).
//!
//! Gravity enters through an effective scalar coupling `λ² = π G m1 m2 / (ħ c)`. The qc
//! description is indistinguishable from a field-mediated one when the retrocausal share
//! `L / (cT)`, the gapless coupling bound `λ² / (4π)` and the light-crossing time `L / c`
//! are all below what the experiment resolves.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Dimension, SetupGeometry};

/// Newton's constant, m³ kg⁻¹ s⁻².
pub const G: f64 = 6.674e-11;
/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.0546e-34;
/// Speed of light, m s⁻¹.
pub const C: f64 = 2.998e8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GmeParameters {
    pub m1: f64,
    pub m2: f64,
    /// Separation in metres.
    #[serde(rename = "L")]
    pub separation: f64,
    /// Interaction time in seconds.
    #[serde(rename = "T")]
    pub duration: f64,
    pub epsilon: f64,
    /// Experimental time resolution in seconds.
    pub resolution: f64,
}

impl GmeParameters {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("m1", self.m1),
            ("m2", self.m2),
            ("L", self.separation),
            ("T", self.duration),
            ("resolution", self.resolution),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::param(name, format!("must be positive, got {v}")));
            }
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::param("epsilon", format!("must lie in (0, 1), got {}", self.epsilon)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GmeReport {
    pub lambda_sq: f64,
    #[serde(rename = "T_over_Lc")]
    pub t_over_lc: f64,
    /// Light-crossing time `L / c` in seconds.
    pub required_resolution: f64,
    /// `L / (cT)`, the 3+1 retrocausal share at large `T`.
    pub retro_ratio: f64,
    /// `λ² / (4π)`.
    pub coupling_bound: f64,
    pub qc_indistinguishable: bool,
    pub params: GmeParameters,
}

/// `λA λB = π G m1 m2 / (ħ c)`.
pub fn effective_coupling(m1: f64, m2: f64) -> Result<f64> {
    if !(m1 >= 0.0 && m2 >= 0.0 && m1.is_finite() && m2.is_finite()) {
        return Err(Error::param("mass", format!("masses must be non-negative, got {m1}, {m2}")));
    }
    Ok(PI * G * m1 * m2 / (HBAR * C))
}

/// Metres to natural time units (seconds, `c = 1`).
pub fn meters_to_seconds(length: f64) -> f64 {
    length / C
}

pub fn seconds_to_meters(time: f64) -> f64 {
    time * C
}

/// The 3+1 canonical layout in natural units (seconds).
pub fn natural_setup(params: &GmeParameters) -> Result<SetupGeometry> {
    SetupGeometry::new(
        Dimension::ThreePlusOne,
        meters_to_seconds(params.separation),
        params.duration,
        0.0,
        0.0,
    )
}

pub fn regime_report(params: &GmeParameters) -> Result<GmeReport> {
    params.validate()?;
    let lambda_sq = effective_coupling(params.m1, params.m2)?;
    let crossing = meters_to_seconds(params.separation);
    let retro_ratio = crossing / params.duration;
    let coupling_bound = lambda_sq / (4.0 * PI);
    Ok(GmeReport {
        lambda_sq,
        t_over_lc: params.duration / crossing,
        required_resolution: crossing,
        retro_ratio,
        coupling_bound,
        qc_indistinguishable: retro_ratio < params.epsilon
            && coupling_bound < params.epsilon
            && params.resolution > crossing,
        params: *params,
    })
}
