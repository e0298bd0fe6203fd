//! Classical field sourced by a smeared 1+1 detector, and the `H_diff` diagnostic.
//!
//! With the step kernel the field is `φ(t, x) = ½ ∫dx' F(x') X(t - |x - x'|)` where `X` is the
//! running integral of the switching. Time derivatives only hit `X`, so
//! `∂tφ = ½ ∫F χ(·)` and `∂t²φ = ½ ∫F χ'(·)`.

use serde::{Deserialize, Serialize};

use super::quadrature::{integrate_real, AdaptiveOptions};
use crate::error::{Error, Result};
use crate::geometry::{Dimension, Interval, SpacetimePoint};
use crate::smearing::{Smearing, SpatialProfile, Switching, GAUSSIAN_CUTOFF};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HdiffOptions {
    /// Half-width of the spatial integration box around the source centre.
    pub half_width: f64,
}

impl Default for HdiffOptions {
    fn default() -> Self {
        Self { half_width: 0.05 }
    }
}

#[derive(Clone, Copy)]
struct Profile {
    center: f64,
    width: f64,
    /// Peak value of χ.
    peak: f64,
}

impl Profile {
    fn chi(&self, t: f64) -> f64 {
        let u = (t - self.center) / self.width;
        self.peak * (-0.5 * u * u).exp()
    }

    fn chi_dot(&self, t: f64) -> f64 {
        let u = (t - self.center) / self.width;
        -self.peak * u / self.width * (-0.5 * u * u).exp()
    }

    /// `∫_{-∞}^τ χ`.
    fn running(&self, tau: f64) -> Result<f64> {
        let lo = self.center - GAUSSIAN_CUTOFF * self.width;
        if tau <= lo {
            return Ok(0.0);
        }
        let opts = AdaptiveOptions {
            base_panels: 4,
            ..AdaptiveOptions::default()
        };
        let hi = tau.min(self.center + GAUSSIAN_CUTOFF * self.width);
        Ok(integrate_real(|t| self.chi(t), lo, hi, &opts)?.value.re)
    }
}

/// Field value and its first two time derivatives at `(t, x)`.
fn field_parts(p: &Profile, spatial: &SpatialProfile, t: f64, x: f64) -> Result<[f64; 3]> {
    let at = |xs: f64| -> Result<[f64; 3]> {
        let tau = t - (x - xs).abs();
        Ok([0.5 * p.running(tau)?, 0.5 * p.chi(tau), 0.5 * p.chi_dot(tau)])
    };
    match spatial {
        SpatialProfile::Pointlike { position } => at(position[0]),
        SpatialProfile::Gaussian { center, width } => {
            let c = center[0];
            let norm = 1.0 / (width * (2.0 * std::f64::consts::PI).sqrt());
            let lo = c - GAUSSIAN_CUTOFF * width;
            let hi = c + GAUSSIAN_CUTOFF * width;
            let opts = AdaptiveOptions {
                base_panels: 8,
                abs_tol: 1e-13,
                rel_tol: 1e-10,
                ..AdaptiveOptions::default()
            };
            let mut out = [0.0; 3];
            for (k, slot) in out.iter_mut().enumerate() {
                let mut failure = None;
                let mut f = |xs: f64| {
                    let z = (xs - c) / width;
                    match at(xs) {
                        Ok(v) => norm * (-0.5 * z * z).exp() * v[k],
                        Err(e) => {
                            failure.get_or_insert(e);
                            0.0
                        }
                    }
                };
                // Split at the kink of |x - x'|.
                let mid = x.clamp(lo, hi);
                let v = integrate_real(&mut f, lo, mid, &opts)?.value.re + integrate_real(&mut f, mid, hi, &opts)?.value.re;
                if let Some(e) = failure {
                    return Err(e);
                }
                *slot = v;
            }
            Ok(out)
        }
    }
}

fn smooth_profile(source: &Smearing) -> Result<(f64, f64)> {
    match source.switching {
        Switching::Gaussian { center, width } => Ok((center, width)),
        Switching::Window(_) => Err(Error::Unsupported(
            "window switchings have distributional derivatives; use a gaussian switching".into(),
        )),
    }
}

fn check_1p1(source: &Smearing) -> Result<()> {
    source.validate()?;
    source.check_dim(Dimension::OnePlusOne)
}

/// Retarded field of `source` at `p` (1+1 only).
pub fn sourced_field(source: &Smearing, p: &SpacetimePoint) -> Result<f64> {
    check_1p1(source)?;
    if p.x.len() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: p.x.len(),
        });
    }
    let (center, width) = smooth_profile(source)?;
    if source.amplitude == 0.0 {
        return Ok(0.0);
    }
    let prof = Profile {
        center,
        width,
        peak: source.amplitude,
    };
    Ok(field_parts(&prof, &source.spatial, p.t, p.x[0])?[0])
}

/// `H_diff` for the switching shape of `source` stretched to timescale `timescale`.
///
/// The source's gaussian switching (centre `c`, width `w`) is the unit-timescale shape `g`.
/// At timescale `T` the switching is `g(t / T) / T`, so its time integral (and the field it
/// leaves behind) is independent of `T`. The diagnostic is evaluated at the profile's peak,
/// `t = c T`, over the box `[x_s - X, x_s + X]`. For `T ≫ X` it falls off as `1 / T²`.
pub fn hdiff(timescale: f64, source: &Smearing) -> Result<f64> {
    hdiff_with_box(timescale, source, &HdiffOptions::default())
}

pub fn hdiff_with_box(timescale: f64, source: &Smearing, opts: &HdiffOptions) -> Result<f64> {
    check_1p1(source)?;
    if !(timescale.is_finite() && timescale > 0.0) {
        return Err(Error::param("T", format!("timescale must be positive, got {timescale}")));
    }
    let x = opts.half_width;
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::param("half_width", format!("must be positive, got {x}")));
    }
    let (center, width) = smooth_profile(source)?;
    let xs = source.spatial.center()[0];
    let spatial_support = match source.spatial {
        SpatialProfile::Pointlike { .. } => Interval { start: xs, end: xs },
        SpatialProfile::Gaussian { width, .. } => Interval {
            start: xs - GAUSSIAN_CUTOFF * width,
            end: xs + GAUSSIAN_CUTOFF * width,
        },
    };
    let bx = Interval {
        start: xs - x,
        end: xs + x,
    };
    if spatial_support.start < bx.start || spatial_support.end > bx.end {
        return Err(Error::BoxTooSmall(format!(
            "box [{}, {}] does not contain the source support [{}, {}]",
            bx.start, bx.end, spatial_support.start, spatial_support.end
        )));
    }
    if source.amplitude == 0.0 {
        return Ok(0.0);
    }
    let prof = Profile {
        center: center * timescale,
        width: width * timescale,
        peak: source.amplitude / timescale,
    };
    let t = prof.center;
    let iopts = AdaptiveOptions {
        base_panels: 16,
        abs_tol: 1e-18,
        rel_tol: 1e-9,
        ..AdaptiveOptions::default()
    };
    let mut failure = None;
    let mut density = |xp: f64| match field_parts(&prof, &source.spatial, t, xp) {
        Ok([phi, dphi, ddphi]) => dphi * dphi - phi * ddphi,
        Err(e) => {
            failure.get_or_insert(e);
            0.0
        }
    };
    let total = integrate_real(&mut density, bx.start, xs, &iopts)?.value.re
        + integrate_real(&mut density, xs, bx.end, &iopts)?.value.re;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(0.5 * total)
}
