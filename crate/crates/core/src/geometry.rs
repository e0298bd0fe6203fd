//! Spacetime points, detector windows and the causal/retrocausal split of B's support.
//!
//! Units are natural (c = 1). Detectors are static and comoving with the inertial time
//! coordinate; A sits at the spatial origin and B at distance `L` along the first axis.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::smearing::Smearing;

/// Ambient spacetime dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dimension {
    #[serde(rename = "1p1")]
    OnePlusOne,
    #[serde(rename = "3p1")]
    ThreePlusOne,
}

impl Dimension {
    pub fn spatial(self) -> usize {
        match self {
            Dimension::OnePlusOne => 1,
            Dimension::ThreePlusOne => 3,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Dimension::OnePlusOne => "1p1",
            Dimension::ThreePlusOne => "3p1",
        }
    }

    /// Spatial vector of length `spatial()` with `x` in the first slot.
    pub fn along_axis(self, x: f64) -> Vec<f64> {
        let mut v = vec![0.0; self.spatial()];
        v[0] = x;
        v
    }
}

impl std::fmt::Display for Dimension {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for Dimension {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1p1" | "1+1" => Ok(Dimension::OnePlusOne),
            "3p1" | "3+1" => Ok(Dimension::ThreePlusOne),
            other => Err(Error::param("dim", format!("expected 1p1 or 3p1, got `{other}`"))),
        }
    }
}

/// An event `(t, x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpacetimePoint {
    pub t: f64,
    pub x: Vec<f64>,
}

impl SpacetimePoint {
    pub fn new(t: f64, x: Vec<f64>) -> Self {
        Self { t, x }
    }

    /// Point in 1+1 dimensions.
    pub fn line(t: f64, x: f64) -> Self {
        Self { t, x: vec![x] }
    }

    pub fn spatial_dim(&self) -> usize {
        self.x.len()
    }

    pub(crate) fn spatial_distance(&self, other: &SpacetimePoint) -> f64 {
        distance(&self.x, &other.x)
    }
}

pub(crate) fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(p, q)| (p - q) * (p - q))
        .sum::<f64>()
        .sqrt()
}

/// Position of `q` relative to `p` in the Minkowski light cone structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CausalRelation {
    TimelikePast,
    NullPast,
    Spacelike,
    NullFuture,
    TimelikeFuture,
}

/// Classifies `q` relative to `p`. Coincident points count as null.
pub fn causal_relation(p: &SpacetimePoint, q: &SpacetimePoint) -> Result<CausalRelation> {
    if p.spatial_dim() != q.spatial_dim() {
        return Err(Error::DimensionMismatch {
            expected: p.spatial_dim(),
            got: q.spatial_dim(),
        });
    }
    let dt = q.t - p.t;
    let r = p.spatial_distance(q);
    let tol = 1e-12 * (1.0 + dt.abs().max(r));
    let gap = dt.abs() - r;
    Ok(if gap.abs() <= tol {
        if dt >= 0.0 {
            CausalRelation::NullFuture
        } else {
            CausalRelation::NullPast
        }
    } else if gap < 0.0 {
        CausalRelation::Spacelike
    } else if dt > 0.0 {
        CausalRelation::TimelikeFuture
    } else {
        CausalRelation::TimelikePast
    })
}

/// Closed time interval `[start, end]`; zero length is allowed.
///
/// Where intervals tile a window the shared endpoint belongs to the later one,
/// which has no effect on any integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub start: f64,
    pub end: f64,
}

impl Interval {
    pub fn new(start: f64, end: f64) -> Result<Self> {
        if !(start.is_finite() && end.is_finite()) {
            return Err(Error::param("interval", "endpoints must be finite"));
        }
        if end < start {
            return Err(Error::param(
                "interval",
                format!("end {end} precedes start {start}"),
            ));
        }
        Ok(Self { start, end })
    }

    pub fn length(&self) -> f64 {
        self.end - self.start
    }

    pub fn shifted(&self, dt: f64) -> Self {
        Self {
            start: self.start + dt,
            end: self.end + dt,
        }
    }

    /// Intersection, or `None` when the overlap has zero measure.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let start = self.start.max(other.start);
        let end = self.end.min(other.end);
        (end > start).then_some(Interval { start, end })
    }

    pub fn overlap_length(&self, other: &Interval) -> f64 {
        self.intersect(other).map_or(0.0, |i| i.length())
    }
}

/// Which canonical configuration a [`SetupGeometry`] encodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SetupKind {
    /// A in the future light cone of B; B runs for `T + 2L` (3+1 worst case).
    Fig2,
    /// As `Fig2` but B runs for an additional `S` (1+1).
    Fig4,
}

impl std::str::FromStr for SetupKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig2" => Ok(SetupKind::Fig2),
            "fig4" => Ok(SetupKind::Fig4),
            other => Err(Error::param("geometry", format!("unknown setup `{other}`"))),
        }
    }
}

/// Canonical two-detector layout.
///
/// A's window is `[t_b_on + L, t_b_on + L + T]`, B's window is
/// `[t_b_on, t_b_on + T + 2L + S]`, and the detectors are a distance `L` apart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SetupGeometry {
    pub dim: Dimension,
    #[serde(rename = "L")]
    pub separation: f64,
    #[serde(rename = "T")]
    pub duration: f64,
    #[serde(rename = "S")]
    pub extra: f64,
    pub t_b_on: f64,
}

impl SetupGeometry {
    pub fn new(dim: Dimension, separation: f64, duration: f64, extra: f64, t_b_on: f64) -> Result<Self> {
        if !(separation.is_finite() && separation > 0.0) {
            return Err(Error::param("L", format!("must be positive and finite, got {separation}")));
        }
        if !(duration.is_finite() && duration >= 0.0) {
            return Err(Error::param("T", format!("must be non-negative and finite, got {duration}")));
        }
        if !(extra.is_finite() && extra >= 0.0) {
            return Err(Error::param("S", format!("must be non-negative and finite, got {extra}")));
        }
        if dim == Dimension::ThreePlusOne && extra != 0.0 {
            return Err(Error::param("S", "must be 0 in 3+1 dimensions"));
        }
        if !t_b_on.is_finite() {
            return Err(Error::param("t_b_on", "must be finite"));
        }
        Ok(Self {
            dim,
            separation,
            duration,
            extra,
            t_b_on,
        })
    }

    pub fn window_a(&self) -> Interval {
        let on = self.t_b_on + self.separation;
        Interval {
            start: on,
            end: on + self.duration,
        }
    }

    pub fn window_b(&self) -> Interval {
        Interval {
            start: self.t_b_on,
            end: self.t_b_on + self.duration + 2.0 * self.separation + self.extra,
        }
    }

    pub fn position_a(&self) -> Vec<f64> {
        self.dim.along_axis(0.0)
    }

    pub fn position_b(&self) -> Vec<f64> {
        self.dim.along_axis(self.separation)
    }

    /// Pointlike detector A with a window switching.
    pub fn smearing_a(&self) -> Smearing {
        Smearing::pointlike_window(self.position_a(), self.window_a())
    }

    /// Pointlike detector B with a window switching.
    pub fn smearing_b(&self) -> Smearing {
        Smearing::pointlike_window(self.position_b(), self.window_b())
    }

    /// Same geometry with A's duration replaced.
    pub fn with_duration(&self, duration: f64) -> Result<Self> {
        Self::new(self.dim, self.separation, duration, self.extra, self.t_b_on)
    }

    pub fn shifted(&self, dt: f64) -> Result<Self> {
        Self::new(self.dim, self.separation, self.duration, self.extra, self.t_b_on + dt)
    }
}

/// B's window split into the part that signals to A and the part that does not.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionSplit {
    pub window_c: Interval,
    pub window_r: Interval,
}

/// Splits B's switching at `t_b_on + T`.
pub fn split_switching(setup: &SetupGeometry) -> RegionSplit {
    let b = setup.window_b();
    let cut = setup.t_b_on + setup.duration;
    RegionSplit {
        window_c: Interval {
            start: b.start,
            end: cut,
        },
        window_r: Interval {
            start: cut,
            end: b.end,
        },
    }
}

/// Canonical geometry with `t_b_on = 0`. `Fig2` lives in 3+1 and ignores `S`; `Fig4` lives in 1+1.
pub fn standard_setup(kind: SetupKind, separation: f64, duration: f64, extra: f64) -> Result<SetupGeometry> {
    if extra < 0.0 {
        return Err(Error::param("S", format!("must be non-negative, got {extra}")));
    }
    match kind {
        SetupKind::Fig2 => SetupGeometry::new(Dimension::ThreePlusOne, separation, duration, 0.0, 0.0),
        SetupKind::Fig4 => SetupGeometry::new(Dimension::OnePlusOne, separation, duration, extra, 0.0),
    }
}
