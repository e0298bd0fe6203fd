//! Exact evolution of two gapless detectors.
//!
//! With `Ω = 0` the monopoles are time independent and commute, so the qc interaction
//! exponentiates to `U = exp(-(i/2) Δ_ab μA ⊗ μB)` with `Δ_ab = λ² Δ(Λa, Λb)`. In the
//! monopole eigenbasis `|++⟩, |+−⟩, |−+⟩, |−−⟩` (eigenvalues `μ = 1, −1, −1, 1`) this only
//! rephases matrix entries: `ρ_jk → ρ_jk e^{-(i/2) Δ_ab (μ_j − μ_k)}`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Dimension, SetupGeometry};
use crate::propagators::smeared_symmetric;
use crate::smearing::Smearing;
use crate::states::{partial_trace_b, Basis, Op2, Op4, PairState, QubitState};

const MU: [f64; 4] = [1.0, -1.0, -1.0, 1.0];

/// `Δ_ab = λ² Δ(Λa, Λb)`.
pub fn delta_ab(coupling: f64, a: &Smearing, b: &Smearing, dim: Dimension) -> Result<f64> {
    Ok(coupling * coupling * smeared_symmetric(a, b, dim)?)
}

/// Exact final joint state; returned in the basis of `rho0`.
pub fn evolve(delta: f64, rho0: &PairState) -> PairState {
    let m = rho0.to_basis(Basis::Monopole);
    let mut out = *m.matrix();
    for j in 0..4 {
        for k in 0..4 {
            let phase = -0.5 * delta * (MU[j] - MU[k]);
            if phase != 0.0 {
                out[(j, k)] *= num_complex::Complex64::from_polar(1.0, phase);
            }
        }
    }
    PairState::unchecked(out, Basis::Monopole).to_basis(rho0.basis())
}

/// Reduced state of A.
pub fn reduce_a(rho: &PairState) -> Result<QubitState> {
    QubitState::new(partial_trace_b(rho.matrix()), rho.basis())
}

/// Change of A's state in the monopole basis:
/// `(e^{-iΔ} − 1)[[0, ρ13], [ρ42, 0]] + (e^{iΔ} − 1)[[0, ρ24], [ρ31, 0]]` (1-based indices).
pub fn state_change_a(delta: f64, rho0: &PairState) -> Op2 {
    let m: Op4 = *rho0.to_basis(Basis::Monopole).matrix();
    let minus = num_complex::Complex64::from_polar(1.0, -delta) - 1.0;
    let plus = num_complex::Complex64::from_polar(1.0, delta) - 1.0;
    let zero = num_complex::Complex64::new(0.0, 0.0);
    Op2::new(zero, m[(0, 2)], m[(3, 1)], zero) * minus + Op2::new(zero, m[(1, 3)], m[(2, 0)], zero) * plus
}

/// `N_a = |sin(Δ_ab / 2)|`.
pub fn norm_estimator(delta: f64) -> f64 {
    (0.5 * delta).sin().abs()
}

/// `θ_a = Δ_ab`, unreduced.
pub fn arg_estimator(delta: f64) -> f64 {
    delta
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NonPertReport {
    #[serde(rename = "Delta_ab")]
    pub delta_ab: f64,
    #[serde(rename = "Delta_c")]
    pub delta_c: f64,
    #[serde(rename = "Delta_r")]
    pub delta_r: f64,
    #[serde(rename = "N_a")]
    pub n_a: f64,
    #[serde(rename = "N_a_causal")]
    pub n_a_causal: f64,
    pub theta_a: f64,
    #[serde(rename = "theta_c")]
    pub theta_a_causal: f64,
    #[serde(rename = "theta_r")]
    pub theta_a_retro: f64,
    /// `T_p = 8π² L / λ²`; infinite at zero coupling.
    #[serde(rename = "T_p")]
    pub period: f64,
    /// `δT = L`.
    #[serde(rename = "delta_T")]
    pub shift: f64,
    pub setup: SetupGeometry,
    pub coupling: f64,
}

/// Causal/retrocausal split of the gapless estimators in 3+1 for `T > 2L`:
/// `θ_c = λ² T / (2πL)`, `θ_r = λ² / (2π)`, `N_a = |sin((θ_c + θ_r)/2)|`, `N_a^(c) = |sin(θ_c/2)|`.
///
/// These are the phases of a layout whose causal window matches A's duration `T` exactly,
/// so `N_a(T) = N_a^(c)(T + L)`.
pub fn np_split(setup: &SetupGeometry, coupling: f64) -> Result<NonPertReport> {
    if setup.dim != Dimension::ThreePlusOne {
        return Err(Error::Unsupported("the gapless split is a 3+1 result".into()));
    }
    let (l, t) = (setup.separation, setup.duration);
    if t <= 2.0 * l {
        return Err(Error::OutOfDomain(format!("the split requires T > 2L (T = {t}, L = {l})")));
    }
    if !coupling.is_finite() {
        return Err(Error::param("lambda", "must be finite"));
    }
    let l2 = coupling * coupling;
    let theta_c = l2 * t / (2.0 * PI * l);
    let theta_r = l2 / (2.0 * PI);
    let delta = theta_c + theta_r;
    Ok(NonPertReport {
        delta_ab: delta,
        delta_c: theta_c,
        delta_r: theta_r,
        n_a: norm_estimator(delta),
        n_a_causal: norm_estimator(theta_c),
        theta_a: arg_estimator(delta),
        theta_a_causal: theta_c,
        theta_a_retro: theta_r,
        period: if l2 == 0.0 { f64::INFINITY } else { 8.0 * PI * PI * l / l2 },
        shift: l,
        setup: *setup,
        coupling,
    })
}

/// [`np_split`] over a list of durations, in input order.
pub fn np_sweep(base: &SetupGeometry, coupling: f64, durations: &[f64]) -> Result<Vec<NonPertReport>> {
    use rayon::prelude::*;
    durations
        .par_iter()
        .map(|&t| np_split(&base.with_duration(t)?, coupling))
        .collect()
}

/// `λ² / (4π) ≤ ε`: sufficient for `|N_a − N_a^(c)| ≲ ε` at small `ε`.
pub fn coupling_tolerance(coupling: f64, epsilon: f64) -> Result<bool> {
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::param("epsilon", format!("must be positive, got {epsilon}")));
    }
    Ok(coupling * coupling / (4.0 * PI) <= epsilon)
}

/// Strong-coupling exception: the retrocausal phase is close to a multiple of `2π`,
/// `|λ²/(4π) − 2nπ| < ε` for some integer `n ≥ 0`.
pub fn near_identity_window(coupling: f64, epsilon: f64) -> bool {
    let x = coupling * coupling / (4.0 * PI);
    let n = (x / (2.0 * PI)).round().max(0.0);
    (x - 2.0 * PI * n).abs() < epsilon
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResolutionReport {
    /// `δT = L`.
    pub shift: f64,
    /// `T_p = 8π² L / λ²`.
    pub period: f64,
    /// The finer of the two scales.
    pub discernibility_scale: f64,
}

pub fn resolution_report(separation: f64, coupling: f64) -> Result<ResolutionReport> {
    if !(separation.is_finite() && separation > 0.0) {
        return Err(Error::param("L", format!("must be positive, got {separation}")));
    }
    if coupling == 0.0 || !coupling.is_finite() {
        return Err(Error::OutOfDomain("zero coupling: the period is infinite".into()));
    }
    let period = 8.0 * PI * PI * separation / (coupling * coupling);
    Ok(ResolutionReport {
        shift: separation,
        period,
        discernibility_scale: separation.min(period),
    })
}
