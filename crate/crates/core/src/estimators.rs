//! Signalling estimator `C_a = Δ(Λa, Λb)` and its split over B's causal and retrocausal windows.
//!
//! Closed forms for the canonical layouts (window `T` for A, `T + 2L + S` for B):
//!
//! ```text
//! 3+1   C   = T / (2πL)
//!       C_c = [T + (T - 2L) Θ(T - 2L)] / (4πL)
//!       C_r = [T + (2L - T) Θ(T - 2L)] / (4πL)
//! 1+1   C   = T (T + S) / 2
//!       C_c = T²/4 + (T - 2L)² Θ(T - 2L) / 4
//!       C_r = T (T + 2S)/4 - (T - 2L)² Θ(T - 2L) / 4
//! ```
//!
//! `Θ(0)` is taken as 0; every expression is continuous at the kink.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Dimension, SetupGeometry};
use crate::propagators::smeared_symmetric;
use crate::smearing::Smearing;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EstimatorReport {
    #[serde(rename = "C_total")]
    pub c_total: f64,
    #[serde(rename = "C_causal")]
    pub c_causal: f64,
    #[serde(rename = "C_retro")]
    pub c_retro: f64,
    /// `C_r / C_c`, `None` when `C_c = 0`.
    pub ratio_rc: Option<f64>,
    /// `C_r / C`, `None` when `C = 0`.
    pub ratio_rtotal: Option<f64>,
    pub dim: Dimension,
    pub setup: SetupGeometry,
}

/// `C_a(Λa, Λb) = Δ(Λa, Λb)`.
pub fn signalling_estimator(a: &Smearing, b: &Smearing, dim: Dimension) -> Result<f64> {
    smeared_symmetric(a, b, dim)
}

fn ratio(num: f64, den: f64) -> Option<f64> {
    (den != 0.0).then(|| num / den)
}

pub fn estimator_split(setup: &SetupGeometry) -> EstimatorReport {
    let (l, t, s) = (setup.separation, setup.duration, setup.extra);
    let past_kink = t > 2.0 * l;
    let (c_total, c_causal, c_retro) = match setup.dim {
        Dimension::ThreePlusOne => {
            let n = 4.0 * PI * l;
            if past_kink {
                (t / (2.0 * PI * l), (2.0 * t - 2.0 * l) / n, 2.0 * l / n)
            } else {
                (t / (2.0 * PI * l), t / n, t / n)
            }
        }
        Dimension::OnePlusOne => {
            let k2 = if past_kink { (t - 2.0 * l).powi(2) } else { 0.0 };
            (0.5 * t * (t + s), 0.25 * (t * t + k2), 0.25 * (t * (t + 2.0 * s) - k2))
        }
    };
    EstimatorReport {
        c_total,
        c_causal,
        c_retro,
        ratio_rc: ratio(c_retro, c_causal),
        ratio_rtotal: ratio(c_retro, c_total),
        dim: setup.dim,
        setup: *setup,
    }
}

/// `(C_r / C_c, C_r / C)` in closed form; only stated for `T > 2L`.
pub fn ratios(setup: &SetupGeometry) -> Result<(f64, f64)> {
    let (l, t, s) = (setup.separation, setup.duration, setup.extra);
    if t <= 2.0 * l {
        return Err(Error::OutOfDomain(format!("ratios require T > 2L (T = {t}, L = {l})")));
    }
    Ok(match setup.dim {
        Dimension::ThreePlusOne => (l / (t - l), l / t),
        Dimension::OnePlusOne => {
            let num = t * (2.0 * l + s) - 2.0 * l * l;
            (num / (l * l + (l - t).powi(2)), num / (t * (t + s)))
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ToleranceTime {
    /// Duration beyond which `C_r / C < ε` in 3+1.
    pub t_min: f64,
    /// Whether `t_min > 2L`, where the ratio formulas apply.
    pub in_ratio_domain: bool,
}

/// `T > L / ε` keeps the retrocausal share below `ε` (3+1).
pub fn tolerance_time(epsilon: f64, separation: f64) -> Result<ToleranceTime> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::param("epsilon", format!("must lie in (0, 1), got {epsilon}")));
    }
    if !(separation.is_finite() && separation > 0.0) {
        return Err(Error::param("L", format!("must be positive, got {separation}")));
    }
    let t_min = separation / epsilon;
    Ok(ToleranceTime {
        t_min,
        in_ratio_domain: t_min > 2.0 * separation,
    })
}

/// Leading large-`T` term `(2L + S) / T` shared by both 1+1 ratios.
pub fn asymptotic_1p1(setup: &SetupGeometry) -> Result<f64> {
    if setup.dim != Dimension::OnePlusOne {
        return Err(Error::Unsupported("the large-T expansion is a 1+1 result".into()));
    }
    if setup.duration == 0.0 {
        return Err(Error::param("T", "must be positive"));
    }
    Ok((2.0 * setup.separation + setup.extra) / setup.duration)
}

/// `steps` evenly spaced values from `t_min` to `t_max` inclusive.
pub fn time_grid(t_min: f64, t_max: f64, steps: usize) -> Result<Vec<f64>> {
    if !(t_min.is_finite() && t_max.is_finite() && t_min < t_max) {
        return Err(Error::param("T_max", format!("need T_min < T_max, got [{t_min}, {t_max}]")));
    }
    if steps < 2 {
        return Err(Error::param("steps", format!("must be at least 2, got {steps}")));
    }
    let h = (t_max - t_min) / (steps - 1) as f64;
    Ok((0..steps)
        .map(|k| if k + 1 == steps { t_max } else { t_min + k as f64 * h })
        .collect())
}

/// [`estimator_split`] over a list of durations, in input order.
pub fn estimator_sweep(base: &SetupGeometry, durations: &[f64]) -> Result<Vec<EstimatorReport>> {
    durations
        .par_iter()
        .map(|&t| base.with_duration(t).map(|s| estimator_split(&s)))
        .collect()
}
