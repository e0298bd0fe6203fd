//! Smeared retarded, advanced, symmetric and causal kernels of the massless scalar field.
//!
//! Kernels, with `r = |x - x'|`:
//!
//! * 3+1: `G_R(x, x') = δ(t - t' - r) / (4π r)`
//! * 1+1: `G_R(x, x') = Θ(t - t' - r) / 2`
//!
//! `G_A(f, g) = G_R(g, f)`, `Δ = G_R + G_A`, `E = G_R - G_A`. Pointlike detectors with window
//! switchings are evaluated in closed form; anything else goes through [`oracle`].

mod closed_form;
mod field;
pub mod oracle;
pub mod quadrature;
mod special;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{distance, Dimension};
use crate::smearing::Smearing;

pub use field::{hdiff, hdiff_with_box, sourced_field, HdiffOptions};
pub use oracle::{quadrature_oracle, quadrature_oracle_with, OracleEstimate, OracleOptions, SwitchingTreatment};

/// Base panel count used when a non-elementary smearing falls back to quadrature.
pub const DEFAULT_RESOLUTION: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelKind {
    Retarded,
    Advanced,
    Symmetric,
    Causal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KernelSpec {
    pub kind: KernelKind,
    pub dim: Dimension,
}

impl KernelSpec {
    pub fn new(kind: KernelKind, dim: Dimension) -> Self {
        Self { kind, dim }
    }
}

/// `K(Λa, Λb)` for the given kernel.
pub fn smeared(kernel: KernelSpec, a: &Smearing, b: &Smearing) -> Result<f64> {
    Ok(phase_weighted(kernel, a, b, 0.0, 0.0)?.re)
}

pub fn smeared_retarded(a: &Smearing, b: &Smearing, dim: Dimension) -> Result<f64> {
    smeared(KernelSpec::new(KernelKind::Retarded, dim), a, b)
}

pub fn smeared_advanced(a: &Smearing, b: &Smearing, dim: Dimension) -> Result<f64> {
    smeared(KernelSpec::new(KernelKind::Advanced, dim), a, b)
}

/// `Δ(Λa, Λb) = G_R(Λa, Λb) + G_R(Λb, Λa)`.
pub fn smeared_symmetric(a: &Smearing, b: &Smearing, dim: Dimension) -> Result<f64> {
    smeared(KernelSpec::new(KernelKind::Symmetric, dim), a, b)
}

/// `E(Λa, Λb) = G_R(Λa, Λb) - G_R(Λb, Λa)`.
pub fn smeared_causal(a: &Smearing, b: &Smearing, dim: Dimension) -> Result<f64> {
    smeared(KernelSpec::new(KernelKind::Causal, dim), a, b)
}

/// `∫∫ K(x, x') Λa(x) Λb(x') e^{iωa t} e^{iωb t'}`.
///
/// With both phases zero this is the plain smeared kernel. The phases are what the
/// perturbative dynamics needs for gapped detectors.
pub fn phase_weighted(kernel: KernelSpec, a: &Smearing, b: &Smearing, omega_a: f64, omega_b: f64) -> Result<Complex64> {
    a.validate()?;
    b.validate()?;
    a.check_dim(kernel.dim)?;
    b.check_dim(kernel.dim)?;
    if !(a.is_elementary() && b.is_elementary()) {
        let opts = OracleOptions::new(DEFAULT_RESOLUTION);
        return Ok(oracle::phase_weighted_numeric(a, b, kernel, omega_a, omega_b, &opts)?.0);
    }
    let (Some(wa), Some(wb)) = (a.window(), b.window()) else {
        unreachable!("elementary smearings carry windows");
    };
    let l = distance(a.spatial.center(), b.spatial.center());
    if kernel.dim == Dimension::ThreePlusOne && l == 0.0 {
        return Err(Error::SingularKernel);
    }
    let ret = |wx, wy, ox, oy| closed_form::retarded_windows(kernel.dim, wx, wy, l, ox, oy);
    let v = match kernel.kind {
        KernelKind::Retarded => ret(wa, wb, omega_a, omega_b),
        KernelKind::Advanced => ret(wb, wa, omega_b, omega_a),
        KernelKind::Symmetric => ret(wa, wb, omega_a, omega_b) + ret(wb, wa, omega_b, omega_a),
        KernelKind::Causal => ret(wa, wb, omega_a, omega_b) - ret(wb, wa, omega_b, omega_a),
    };
    Ok(v * (a.amplitude * b.amplitude))
}
