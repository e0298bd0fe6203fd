//! Spacetime smearings `Λ(t, x) = amplitude · χ(t) · F(x)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Dimension, Interval};

/// Gaussian tails beyond this many widths are dropped by the numerical routes.
pub(crate) const GAUSSIAN_CUTOFF: f64 = 12.0;

/// Temporal profile χ(t).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Switching {
    /// Indicator of `[start, end]`.
    Window(Interval),
    /// `exp(-(t - center)^2 / (2 width^2))`, unit peak.
    Gaussian { center: f64, width: f64 },
}

impl Switching {
    pub fn gaussian(center: f64, width: f64) -> Result<Self> {
        if !(width.is_finite() && width > 0.0) {
            return Err(Error::param("width", format!("must be positive, got {width}")));
        }
        Ok(Switching::Gaussian { center, width })
    }

    pub fn value(&self, t: f64) -> f64 {
        match *self {
            Switching::Window(w) => {
                if t >= w.start && t <= w.end {
                    1.0
                } else {
                    0.0
                }
            }
            Switching::Gaussian { center, width } => {
                let u = (t - center) / width;
                (-0.5 * u * u).exp()
            }
        }
    }

    /// Time derivative; only defined for smooth profiles.
    pub fn derivative(&self, t: f64) -> Option<f64> {
        match *self {
            Switching::Window(_) => None,
            Switching::Gaussian { center, width } => {
                let u = (t - center) / width;
                Some(-u / width * (-0.5 * u * u).exp())
            }
        }
    }

    /// Interval outside of which χ vanishes (or is negligible).
    pub fn support(&self) -> Interval {
        match *self {
            Switching::Window(w) => w,
            Switching::Gaussian { center, width } => Interval {
                start: center - GAUSSIAN_CUTOFF * width,
                end: center + GAUSSIAN_CUTOFF * width,
            },
        }
    }

    pub fn is_window(&self) -> bool {
        matches!(self, Switching::Window(_))
    }
}

/// Spatial profile F(x).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpatialProfile {
    /// Dirac delta at `position`.
    Pointlike { position: Vec<f64> },
    /// Normalized isotropic gaussian.
    Gaussian { center: Vec<f64>, width: f64 },
}

impl SpatialProfile {
    pub fn center(&self) -> &[f64] {
        match self {
            SpatialProfile::Pointlike { position } => position,
            SpatialProfile::Gaussian { center, .. } => center,
        }
    }

    /// Standard deviation per axis (0 for pointlike).
    pub fn width(&self) -> f64 {
        match self {
            SpatialProfile::Pointlike { .. } => 0.0,
            SpatialProfile::Gaussian { width, .. } => *width,
        }
    }

    pub fn is_pointlike(&self) -> bool {
        matches!(self, SpatialProfile::Pointlike { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Smearing {
    pub spatial: SpatialProfile,
    pub switching: Switching,
    #[serde(default = "unit")]
    pub amplitude: f64,
}

fn unit() -> f64 {
    1.0
}

impl Smearing {
    pub fn new(spatial: SpatialProfile, switching: Switching) -> Result<Self> {
        let s = Self {
            spatial,
            switching,
            amplitude: 1.0,
        };
        s.validate()?;
        Ok(s)
    }

    /// Pointlike detector with window switching (the default pair).
    pub fn pointlike_window(position: Vec<f64>, window: Interval) -> Self {
        Self {
            spatial: SpatialProfile::Pointlike { position },
            switching: Switching::Window(window),
            amplitude: 1.0,
        }
    }

    pub fn with_amplitude(mut self, amplitude: f64) -> Self {
        self.amplitude = amplitude;
        self
    }

    pub fn validate(&self) -> Result<()> {
        match self.switching {
            Switching::Window(w) => {
                Interval::new(w.start, w.end)?;
            }
            Switching::Gaussian { width, center } => {
                if !(width.is_finite() && width > 0.0 && center.is_finite()) {
                    return Err(Error::param("switching", "gaussian width must be positive"));
                }
            }
        }
        if let SpatialProfile::Gaussian { width, .. } = self.spatial {
            if !(width.is_finite() && width > 0.0) {
                return Err(Error::param("spatial", "gaussian width must be positive"));
            }
        }
        if self.spatial.center().iter().any(|x| !x.is_finite()) {
            return Err(Error::param("spatial", "position must be finite"));
        }
        if !self.amplitude.is_finite() {
            return Err(Error::param("amplitude", "must be finite"));
        }
        Ok(())
    }

    pub fn check_dim(&self, dim: Dimension) -> Result<()> {
        let got = self.spatial.center().len();
        if got != dim.spatial() {
            return Err(Error::DimensionMismatch {
                expected: dim.spatial(),
                got,
            });
        }
        Ok(())
    }

    /// Pointlike spatial profile with a window switching.
    pub fn is_elementary(&self) -> bool {
        self.spatial.is_pointlike() && self.switching.is_window()
    }

    /// Window of a window-switched smearing.
    pub fn window(&self) -> Option<Interval> {
        match self.switching {
            Switching::Window(w) => Some(w),
            Switching::Gaussian { .. } => None,
        }
    }

    /// Same smearing with its window switching replaced by `window`.
    pub fn with_window(&self, window: Interval) -> Self {
        Self {
            spatial: self.spatial.clone(),
            switching: Switching::Window(window),
            amplitude: self.amplitude,
        }
    }

    /// Restriction of a window-switched smearing to `region`; `None` if the overlap is empty.
    pub fn restricted_to(&self, region: &Interval) -> Result<Option<Self>> {
        let w = self
            .window()
            .ok_or_else(|| Error::Unsupported("restriction requires a window switching".into()))?;
        Ok(w.intersect(region).map(|i| self.with_window(i)))
    }
}
