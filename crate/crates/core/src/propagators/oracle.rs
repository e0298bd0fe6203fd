//! Numerical evaluation of smeared kernels for arbitrary smearings.
//!
//! Pointlike spatial profiles are collapsed analytically; gaussian ones are reduced to a
//! one-dimensional integral over the separation `x_a - x_b`, which is gaussian with
//! variance `σa² + σb²` per axis. The remaining time integrals are done with adaptive
//! Gauss–Kronrod quadrature directly on the switching functions.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::quadrature::{integrate, AdaptiveOptions, Integral};
use super::{KernelKind, KernelSpec};
use crate::error::{Error, Result};
use crate::geometry::{distance, Dimension, Interval};
use crate::smearing::{Smearing, Switching};

const SEPARATION_CUTOFF: f64 = 10.0;
const SIGMOID_CUTOFF: f64 = 40.0;

/// How window switchings are fed to the quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SwitchingTreatment {
    /// Sharp indicators, resolved by adaptive refinement at the jumps.
    Exact,
    /// Logistic edges of width `h` (default `(t_off - t_on) / 1000`) with Richardson
    /// extrapolation over `h, h/2, h/4`.
    Smoothed { h: Option<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleOptions {
    pub resolution: usize,
    pub treatment: SwitchingTreatment,
}

impl OracleOptions {
    pub fn new(resolution: usize) -> Self {
        Self {
            resolution,
            treatment: SwitchingTreatment::Exact,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleEstimate {
    pub value: f64,
    pub error: f64,
}

/// Evaluates `kernel(Λa, Λb)` numerically. `resolution` is the number of base panels (≥ 16).
pub fn quadrature_oracle(a: &Smearing, b: &Smearing, kernel: KernelSpec, resolution: usize) -> Result<OracleEstimate> {
    quadrature_oracle_with(a, b, kernel, &OracleOptions::new(resolution))
}

pub fn quadrature_oracle_with(
    a: &Smearing,
    b: &Smearing,
    kernel: KernelSpec,
    opts: &OracleOptions,
) -> Result<OracleEstimate> {
    let (v, e) = phase_weighted_numeric(a, b, kernel, 0.0, 0.0, opts)?;
    Ok(OracleEstimate { value: v.re, error: e })
}

/// `∫∫ K(x, x') Λa(x) Λb(x') e^{iωa t} e^{iωb t'}` by quadrature.
pub(crate) fn phase_weighted_numeric(
    a: &Smearing,
    b: &Smearing,
    kernel: KernelSpec,
    omega_a: f64,
    omega_b: f64,
    opts: &OracleOptions,
) -> Result<(Complex64, f64)> {
    if opts.resolution < 16 {
        return Err(Error::param("resolution", format!("must be at least 16, got {}", opts.resolution)));
    }
    a.validate()?;
    b.validate()?;
    a.check_dim(kernel.dim)?;
    b.check_dim(kernel.dim)?;
    let ret = |x: &Smearing, y: &Smearing, wx: f64, wy: f64| retarded_treated(x, y, kernel.dim, wx, wy, opts);
    let (val, err) = match kernel.kind {
        KernelKind::Retarded => ret(a, b, omega_a, omega_b)?,
        KernelKind::Advanced => ret(b, a, omega_b, omega_a)?,
        KernelKind::Symmetric => {
            let (r, er) = ret(a, b, omega_a, omega_b)?;
            let (v, ev) = ret(b, a, omega_b, omega_a)?;
            (r + v, er + ev)
        }
        KernelKind::Causal => {
            let (r, er) = ret(a, b, omega_a, omega_b)?;
            let (v, ev) = ret(b, a, omega_b, omega_a)?;
            (r - v, er + ev)
        }
    };
    Ok((val * a.amplitude * b.amplitude, err * (a.amplitude * b.amplitude).abs()))
}

/// A switching as seen by the integrator: a pointwise profile and its support.
#[derive(Clone, Copy)]
struct Profile {
    kind: ProfileKind,
    support: Interval,
}

#[derive(Clone, Copy)]
enum ProfileKind {
    Sharp(Switching),
    Logistic { on: f64, off: f64, h: f64 },
    Zero,
}

impl Profile {
    fn sharp(s: &Switching) -> Self {
        Self {
            kind: ProfileKind::Sharp(*s),
            support: s.support(),
        }
    }

    fn value(&self, t: f64) -> f64 {
        match self.kind {
            ProfileKind::Sharp(s) => s.value(t),
            ProfileKind::Logistic { on, off, h } => logistic((t - on) / h) * logistic((off - t) / h),
            ProfileKind::Zero => 0.0,
        }
    }
}

fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

fn smoothed(s: &Switching, h: Option<f64>, scale: f64) -> Profile {
    match *s {
        Switching::Window(w) if w.length() == 0.0 => Profile {
            kind: ProfileKind::Zero,
            support: w,
        },
        Switching::Window(w) => {
            let h = h.unwrap_or(w.length() / 1000.0) * scale;
            Profile {
                kind: ProfileKind::Logistic {
                    on: w.start,
                    off: w.end,
                    h,
                },
                support: Interval {
                    start: w.start - SIGMOID_CUTOFF * h,
                    end: w.end + SIGMOID_CUTOFF * h,
                },
            }
        }
        Switching::Gaussian { .. } => Profile::sharp(s),
    }
}

fn retarded_treated(
    a: &Smearing,
    b: &Smearing,
    dim: Dimension,
    omega_a: f64,
    omega_b: f64,
    opts: &OracleOptions,
) -> Result<(Complex64, f64)> {
    match opts.treatment {
        SwitchingTreatment::Exact => {
            retarded_numeric(a, b, dim, Profile::sharp(&a.switching), Profile::sharp(&b.switching), omega_a, omega_b, opts)
        }
        SwitchingTreatment::Smoothed { h } => {
            let mut levels = [Complex64::new(0.0, 0.0); 3];
            let mut err = 0.0;
            for (k, scale) in [1.0, 0.5, 0.25].into_iter().enumerate() {
                let (v, e) = retarded_numeric(
                    a,
                    b,
                    dim,
                    smoothed(&a.switching, h, scale),
                    smoothed(&b.switching, h, scale),
                    omega_a,
                    omega_b,
                    opts,
                )?;
                levels[k] = v;
                err += e;
            }
            // Eliminates the O(h) and O(h²) terms.
            let extrapolated = (levels[2] * 8.0 - levels[1] * 6.0 + levels[0]) / 3.0;
            Ok((extrapolated, err + (extrapolated - levels[2]).norm()))
        }
    }
}

/// Distribution of the spatial separation between the two profiles.
enum Separation {
    Fixed(f64),
    Gaussian { mean: f64, sigma: f64 },
}

fn separation(a: &Smearing, b: &Smearing, dim: Dimension) -> Separation {
    let sigma = (a.spatial.width().powi(2) + b.spatial.width().powi(2)).sqrt();
    let ca = a.spatial.center();
    let cb = b.spatial.center();
    if sigma == 0.0 {
        return Separation::Fixed(distance(ca, cb));
    }
    let mean = match dim {
        // Signed separation; the kernel only depends on |u|.
        Dimension::OnePlusOne => ca[0] - cb[0],
        Dimension::ThreePlusOne => distance(ca, cb),
    };
    Separation::Gaussian { mean, sigma }
}

#[allow(clippy::too_many_arguments)]
fn retarded_numeric(
    a: &Smearing,
    b: &Smearing,
    dim: Dimension,
    pa: Profile,
    pb: Profile,
    omega_a: f64,
    omega_b: f64,
    opts: &OracleOptions,
) -> Result<(Complex64, f64)> {
    let outer = AdaptiveOptions {
        base_panels: opts.resolution,
        ..AdaptiveOptions::default()
    };
    let spatial = AdaptiveOptions {
        base_panels: 32,
        abs_tol: 1e-13,
        rel_tol: 1e-11,
        ..AdaptiveOptions::default()
    };
    let time_part = |r: f64| -> Result<Integral> {
        match dim {
            Dimension::ThreePlusOne => light_cone_time_integral(pa, pb, r, omega_a, omega_b, &outer),
            Dimension::OnePlusOne => step_time_integral(pa, pb, r.abs(), omega_a, omega_b, &outer),
        }
    };
    match (separation(a, b, dim), dim) {
        (Separation::Fixed(l), Dimension::ThreePlusOne) => {
            if l == 0.0 {
                return Err(Error::SingularKernel);
            }
            let t = time_part(l)?;
            Ok((t.value / (4.0 * PI * l), t.error / (4.0 * PI * l)))
        }
        (Separation::Fixed(l), Dimension::OnePlusOne) => {
            let t = time_part(l)?;
            Ok((t.value * 0.5, t.error * 0.5))
        }
        (Separation::Gaussian { mean, sigma }, Dimension::ThreePlusOne) => {
            let lo = (mean - SEPARATION_CUTOFF * sigma).max(0.0);
            let hi = mean + SEPARATION_CUTOFF * sigma;
            let mut failure = None;
            let mut inner_err = 0.0;
            let res = integrate(
                |r| {
                    if r <= 0.0 {
                        return Complex64::new(0.0, 0.0);
                    }
                    match time_part(r) {
                        Ok(t) => {
                            let w = radial_density_over_r(r, mean, sigma) / (4.0 * PI);
                            inner_err += t.error * w;
                            t.value * w
                        }
                        Err(e) => {
                            failure.get_or_insert(e);
                            Complex64::new(0.0, 0.0)
                        }
                    }
                },
                lo,
                hi,
                &spatial,
            )?;
            if let Some(e) = failure {
                return Err(e);
            }
            Ok((res.value, res.error + inner_err * (hi - lo) / res.evaluations.max(1) as f64))
        }
        (Separation::Gaussian { mean, sigma }, Dimension::OnePlusOne) => {
            let lo = mean - SEPARATION_CUTOFF * sigma;
            let hi = mean + SEPARATION_CUTOFF * sigma;
            let norm = 1.0 / (sigma * (2.0 * PI).sqrt());
            let mut failure = None;
            let mut inner_err = 0.0;
            let res = integrate(
                |u| match time_part(u) {
                    Ok(t) => {
                        let z = (u - mean) / sigma;
                        let w = 0.5 * norm * (-0.5 * z * z).exp();
                        inner_err += t.error * w;
                        t.value * w
                    }
                    Err(e) => {
                        failure.get_or_insert(e);
                        Complex64::new(0.0, 0.0)
                    }
                },
                lo,
                hi,
                &spatial,
            )?;
            if let Some(e) = failure {
                return Err(e);
            }
            Ok((res.value, res.error + inner_err * (hi - lo) / res.evaluations.max(1) as f64))
        }
    }
}

/// `p(r) / r` for `r = |u|`, `u` gaussian in 3 dimensions with mean length `d` and per-axis `σ`.
fn radial_density_over_r(r: f64, d: f64, sigma: f64) -> f64 {
    let s2 = sigma * sigma;
    if d < 1e-8 * sigma {
        // Maxwell distribution.
        (2.0 / PI).sqrt() * r / (s2 * sigma) * (-0.5 * r * r / s2).exp()
    } else {
        let g = |x: f64| (-0.5 * x * x / s2).exp();
        (g(r - d) - g(r + d)) / (d * sigma * (2.0 * PI).sqrt())
    }
}

/// `∫ dt χa(t) χb(t - r) e^{iωa t} e^{iωb (t - r)}`.
fn light_cone_time_integral(
    pa: Profile,
    pb: Profile,
    r: f64,
    omega_a: f64,
    omega_b: f64,
    opts: &AdaptiveOptions,
) -> Result<Integral> {
    let lo = pa.support.start.max(pb.support.start + r);
    let hi = pa.support.end.min(pb.support.end + r);
    integrate(
        |t| {
            let w = pa.value(t) * pb.value(t - r);
            if w == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::from_polar(w, omega_a * t + omega_b * (t - r))
            }
        },
        lo,
        hi,
        opts,
    )
}

/// `∫ dt χa(t) e^{iωa t} ∫ dt' χb(t') e^{iωb t'} Θ(t - t' - r)`, without the ½.
fn step_time_integral(
    pa: Profile,
    pb: Profile,
    r: f64,
    omega_a: f64,
    omega_b: f64,
    opts: &AdaptiveOptions,
) -> Result<Integral> {
    let inner_opts = AdaptiveOptions {
        base_panels: 4,
        ..*opts
    };
    let mut failure = None;
    let mut inner_err = 0.0;
    let lo = pa.support.start.max(pb.support.start + r);
    let hi = pa.support.end;
    let res = integrate(
        |t| {
            let xa = pa.value(t);
            if xa == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let upper = pb.support.end.min(t - r);
            match integrate(
                |tp| Complex64::from_polar(pb.value(tp), omega_b * tp),
                pb.support.start,
                upper,
                &inner_opts,
            ) {
                Ok(inner) => {
                    inner_err += inner.error * xa;
                    inner.value * Complex64::from_polar(xa, omega_a * t)
                }
                Err(e) => {
                    failure.get_or_insert(e);
                    Complex64::new(0.0, 0.0)
                }
            }
        },
        lo,
        hi,
        opts,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    let span = (hi - lo).max(0.0);
    Ok(Integral {
        value: res.value,
        error: res.error + inner_err * span / res.evaluations.max(1) as f64,
        evaluations: res.evaluations,
    })
}
