//! Exact smeared kernels for pointlike detectors with window switchings.
//!
//! The general object is the phase-weighted retarded bi-integral
//!
//! ```text
//! Φ_R(ωa, ωb) = ∫∫ dt dt' G_R(t, xa; t', xb) χa(t) χb(t') e^{iωa t} e^{iωb t'}
//! ```
//!
//! which reduces to interval overlaps in 3+1 (the kernel lives on the light cone)
//! and to a polygon integral in 1+1 (the kernel is a step on the causal future).
//! At `ωa = ωb = 0` these are the plain smeared propagators.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::special::{exp_integral, tri};
use crate::geometry::{Dimension, Interval};

/// `Φ_R` with A receiving at `t` from B emitting at `t'`.
pub(crate) fn retarded_windows(
    dim: Dimension,
    a: Interval,
    b: Interval,
    separation: f64,
    omega_a: f64,
    omega_b: f64,
) -> Complex64 {
    match dim {
        Dimension::ThreePlusOne => retarded_3p1(a, b, separation, omega_a, omega_b),
        Dimension::OnePlusOne => retarded_1p1(a, b, separation, omega_a, omega_b),
    }
}

/// `G_R = δ(t' - t + L) / (4πL)`.
fn retarded_3p1(a: Interval, b: Interval, l: f64, omega_a: f64, omega_b: f64) -> Complex64 {
    let Some(overlap) = a.intersect(&b.shifted(l)) else {
        return Complex64::new(0.0, 0.0);
    };
    let phase = Complex64::from_polar(1.0, -omega_b * l);
    phase * exp_integral(omega_a + omega_b, overlap.start, overlap.end) / (4.0 * PI * l)
}

/// `G_R = Θ(t - t' - L) / 2`.
fn retarded_1p1(a: Interval, b: Interval, l: f64, omega_a: f64, omega_b: f64) -> Complex64 {
    let zero = Complex64::new(0.0, 0.0);
    // A-times whose past cone cuts B's window part-way.
    let p = a.start.max(b.start + l);
    let q = a.end.min(b.end + l);
    let partial = if q > p {
        let v0 = p - l - b.start;
        let v1 = q - l - b.start;
        let h = v1 - v0;
        let rect = exp_integral(omega_b, 0.0, v0) * exp_integral(omega_a, v0, v1);
        let triangle = Complex64::from_polar(h * h, (omega_a + omega_b) * v0)
            * tri(Complex64::new(0.0, omega_a * h), Complex64::new(0.0, omega_b * h));
        Complex64::from_polar(1.0, omega_a * (l + b.start) + omega_b * b.start) * (rect + triangle)
    } else {
        zero
    };
    // A-times whose past cone contains all of B's window.
    let full = exp_integral(omega_b, b.start, b.end) * exp_integral(omega_a, a.start.max(b.end + l), a.end);
    0.5 * (partial + full)
}
