//! Retrocausality audit.
//!
//! A model is non-retrocausal when A's state never depends on the part of B that A cannot
//! receive signals from but can send signals to. The audit looks for such a retro
//! subregion among time sub-intervals of B's window and then measures how much A's state
//! changes when B is switched off there.
//!
//! The search is sound but incomplete: only intervals on a grid (refined at the ends) are
//! considered.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics_nonpert::state_change_a;
use crate::dynamics_pert::{qc_second_order, qft_signal_term, Detector};
use crate::error::{Error, Result};
use crate::geometry::{Dimension, Interval};
use crate::propagators::{smeared_retarded, smeared_symmetric};
use crate::smearing::Smearing;
use crate::states::{operator_norm2, Basis, Op2, PairState};

/// Relative threshold below which a smeared propagator counts as zero.
pub const ZERO_THRESHOLD: f64 = 1e-12;
/// States closer than this in operator norm count as equal.
pub const STATE_TOLERANCE: f64 = 1e-10;

const BISECTION_STEPS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Qc,
    Qft,
}

impl std::str::FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "qc" => Ok(ModelKind::Qc),
            "qft" => Ok(ModelKind::Qft),
            other => Err(Error::param("model", format!("unknown model `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GeometryClass {
    NoRetroSubregion,
    RetroSubregionInert,
    RetroSubregionActive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AuditVerdict {
    pub model: ModelKind,
    pub geometry_class: GeometryClass,
    pub witness_norm: f64,
    pub retro_region: Option<Interval>,
}

/// B switched on as A's past cone closes: A can signal to B, B cannot signal to A.
///
/// A sits at the origin over `[0, T]`; B sits at distance `L` over `[T − L, T + L]`.
pub fn trailing_layout(dim: Dimension, separation: f64, duration: f64) -> Result<(Smearing, Smearing)> {
    if !(separation > 0.0 && separation.is_finite()) {
        return Err(Error::param("L", format!("must be positive, got {separation}")));
    }
    let a = Smearing::pointlike_window(dim.along_axis(0.0), Interval::new(0.0, duration)?);
    let b = Smearing::pointlike_window(
        dim.along_axis(separation),
        Interval::new(duration - separation, duration + separation)?,
    );
    Ok((a, b))
}

/// Largest grid-aligned (then end-refined) interval `R` of B's window with
/// `G_R(Λa, Λb|R) = 0` and `G_R(Λb|R, Λa) ≠ 0`.
pub fn find_retro_subregion(a: &Smearing, b: &Smearing, dim: Dimension, grid_n: usize) -> Result<Option<Interval>> {
    if grid_n < 16 {
        return Err(Error::param("grid_n", format!("must be at least 16, got {grid_n}")));
    }
    let wb = b
        .window()
        .ok_or_else(|| Error::Unsupported("the subregion search needs a window switching for B".into()))?;
    let scale = smeared_retarded(a, b, dim)?.abs() + smeared_retarded(b, a, dim)?.abs();
    if scale == 0.0 || wb.length() == 0.0 {
        return Ok(None);
    }
    let tol = ZERO_THRESHOLD * scale;
    let h = wb.length() / grid_n as f64;
    let edge = |k: usize| if k == grid_n { wb.end } else { wb.start + k as f64 * h };
    let into_a = |lo: f64, hi: f64| -> Result<f64> {
        match b.restricted_to(&Interval { start: lo, end: hi })? {
            Some(piece) => smeared_retarded(a, &piece, dim),
            None => Ok(0.0),
        }
    };
    let from_a = |lo: f64, hi: f64| -> Result<f64> {
        match b.restricted_to(&Interval { start: lo, end: hi })? {
            Some(piece) => smeared_retarded(&piece, a, dim),
            None => Ok(0.0),
        }
    };
    let silent: Vec<bool> = (0..grid_n)
        .into_par_iter()
        .map(|k| into_a(edge(k), edge(k + 1)).map(|v| v.abs() <= tol))
        .collect::<Result<_>>()?;

    // Runs of cells that do not reach A, kept if B can be reached from A there.
    let mut best: Option<(usize, usize)> = None;
    let mut k = 0;
    while k < grid_n {
        if !silent[k] {
            k += 1;
            continue;
        }
        let start = k;
        while k < grid_n && silent[k] {
            k += 1;
        }
        let reached = from_a(edge(start), edge(k))?.abs() > tol;
        if reached && best.is_none_or(|(s, e)| k - start > e - s) {
            best = Some((start, k));
        }
    }
    let Some((s, e)) = best else {
        return Ok(None);
    };

    // The ends are pushed into the neighbouring cells as far as B stays exactly silent; the
    // smeared kernel can vanish quadratically, so a relative threshold would stop short.
    let mut lo = edge(s);
    if s > 0 {
        let (mut bad, mut good) = (edge(s - 1), lo);
        for _ in 0..BISECTION_STEPS {
            let mid = 0.5 * (bad + good);
            if into_a(mid, lo)? == 0.0 {
                good = mid;
            } else {
                bad = mid;
            }
        }
        lo = good;
    }
    let mut hi = edge(e);
    if e < grid_n {
        let (mut good, mut bad) = (hi, edge(e + 1));
        for _ in 0..BISECTION_STEPS {
            let mid = 0.5 * (bad + good);
            if into_a(hi, mid)? == 0.0 {
                good = mid;
            } else {
                bad = mid;
            }
        }
        hi = good;
    }
    Ok(Some(Interval { start: lo, end: hi }))
}

fn with_smearing(det: &Detector, smearing: Smearing) -> Detector {
    Detector {
        smearing,
        ..det.clone()
    }
}

/// Pieces of B's window outside `region`.
fn complement(b: &Detector, region: &Interval) -> Result<Vec<Detector>> {
    let w = b
        .smearing
        .window()
        .ok_or_else(|| Error::Unsupported("restriction requires a window switching".into()))?;
    let mut out = Vec::new();
    for piece in [
        Interval {
            start: w.start,
            end: region.start.min(w.end),
        },
        Interval {
            start: region.end.max(w.start),
            end: w.end,
        },
    ] {
        if let Some(s) = b.smearing.restricted_to(&piece)? {
            out.push(with_smearing(b, s));
        }
    }
    Ok(out)
}

/// Operator-norm difference between A's final state with B fully on and with B switched off on
/// `region`. Zero when there is no region.
pub fn witness(model: ModelKind, a: &Detector, b: &Detector, dim: Dimension, region: Option<Interval>) -> Result<f64> {
    let Some(region) = region else {
        return Ok(0.0);
    };
    let rest = complement(b, &region)?;
    let diff: Op2 = match model {
        ModelKind::Qc if a.gap == 0.0 && b.gap == 0.0 => {
            // Exact gapless evolution; Δ is additive over the pieces of B.
            let rho0 = PairState::product(&a.initial_state()?, &b.initial_state()?).to_basis(Basis::Monopole);
            let lam2 = a.coupling * b.coupling;
            let sym = |bd: &Detector| smeared_symmetric(&a.smearing, &bd.smearing, dim);
            let full = lam2 * sym(b)?;
            let mut partial = 0.0;
            for piece in &rest {
                partial += lam2 * sym(piece)?;
            }
            state_change_a(full, &rho0) - state_change_a(partial, &rho0)
        }
        _ => {
            let term = |bd: &Detector| -> Result<Op2> {
                Ok(match model {
                    ModelKind::Qc => qc_second_order(a, bd, dim)?.change,
                    ModelKind::Qft => qft_signal_term(a, bd, dim)?.change,
                })
            };
            let mut d = term(b)?;
            for piece in &rest {
                d -= term(piece)?;
            }
            d
        }
    };
    Ok(operator_norm2(&diff))
}

pub fn audit(model: ModelKind, a: &Detector, b: &Detector, dim: Dimension, grid_n: usize) -> Result<AuditVerdict> {
    let region = find_retro_subregion(&a.smearing, &b.smearing, dim, grid_n)?;
    let w = witness(model, a, b, dim, region)?;
    let (geometry_class, witness_norm) = match region {
        None => (GeometryClass::NoRetroSubregion, 0.0),
        Some(_) if w <= STATE_TOLERANCE => (GeometryClass::RetroSubregionInert, 0.0),
        Some(_) => (GeometryClass::RetroSubregionActive, w),
    };
    Ok(AuditVerdict {
        model,
        geometry_class,
        witness_norm,
        retro_region: region,
    })
}

/// Detector pair sharing one coupling; states are `(α, β)` in the energy basis.
pub fn audit_detectors(
    a: Smearing,
    b: Smearing,
    gaps: (f64, f64),
    coupling: f64,
    state_a: (f64, Complex64),
    state_b: (f64, Complex64),
) -> Result<(Detector, Detector)> {
    Ok((
        Detector::new(gaps.0, coupling, a, state_a.0, state_a.1)?,
        Detector::new(gaps.1, coupling, b, state_b.0, state_b.1)?,
    ))
}
