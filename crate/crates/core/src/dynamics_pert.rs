//! Leading-order dynamics of two gapped two-level detectors.
//!
//! Each detector couples through its monopole `m(t) = σ⁺ e^{iΩt} + σ⁻ e^{-iΩt}`. To second
//! order in the couplings the joint state changes by `-i [K, ρ0]` with
//!
//! ```text
//! K = (λA λB / 2) Σ_{s,s' = ±} D(s, s') σ^s ⊗ σ^{s'},   D(s, s') = Φ_Δ(sΩA, s'ΩB)
//! ```
//!
//! where `Φ` is the phase-weighted smeared kernel. Each phase rides on its own detector's
//! time argument. Tracing out B of a product state leaves
//!
//! ```text
//! ρA^(2) = -i (λA λB / 2) Σ D(s, s') Tr(σ^{s'} ρB) [σ^s, ρA]
//! ```
//!
//! The QFT signalling term has the same shape with `Φ_R` in place of `Φ_Δ` and no `½`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{distance, Dimension, Interval};
use crate::propagators::{phase_weighted, KernelKind, KernelSpec};
use crate::smearing::Smearing;
use crate::states::{
    c, commutator, kron, operator_norm2, r, sigma_minus, sigma_plus, Basis, Op2, Op4, PairState, QubitState,
};

#[derive(Debug, Clone, PartialEq)]
pub struct Detector {
    pub gap: f64,
    pub coupling: f64,
    pub smearing: Smearing,
    pub alpha: f64,
    pub beta: Complex64,
}

impl Detector {
    pub fn new(gap: f64, coupling: f64, smearing: Smearing, alpha: f64, beta: Complex64) -> Result<Self> {
        if !(gap.is_finite() && gap >= 0.0) {
            return Err(Error::param("gap", format!("must be non-negative, got {gap}")));
        }
        if !coupling.is_finite() {
            return Err(Error::param("coupling", "must be finite"));
        }
        smearing.validate()?;
        QubitState::from_params(alpha, beta)?;
        Ok(Self {
            gap,
            coupling,
            smearing,
            alpha,
            beta,
        })
    }

    /// Initial state `[[α, β], [β*, 1 - α]]` in the energy basis.
    pub fn initial_state(&self) -> Result<QubitState> {
        QubitState::from_params(self.alpha, self.beta)
    }
}

/// `m(t) = σ⁺ e^{iΩt} + σ⁻ e^{-iΩt}`.
pub fn monopole(t: f64, gap: f64) -> Op2 {
    let ph = Complex64::from_polar(1.0, gap * t);
    sigma_plus() * ph + sigma_minus() * ph.conj()
}

/// Initial reduced state of A and its leading-order change.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedUpdate {
    pub initial: QubitState,
    pub change: Op2,
}

impl ReducedUpdate {
    pub fn final_matrix(&self) -> Op2 {
        self.initial.matrix() + self.change
    }

    /// The corrected state, validated (fails if the truncated series left the state space).
    pub fn final_state(&self) -> Result<QubitState> {
        QubitState::new(self.final_matrix(), Basis::Energy)
    }

    pub fn change_norm(&self) -> f64 {
        operator_norm2(&self.change)
    }
}

fn ladder(s: i8) -> Op2 {
    if s > 0 {
        sigma_plus()
    } else {
        sigma_minus()
    }
}

const SIGNS: [i8; 2] = [1, -1];

/// `prefactor · Σ Φ_K(sΩA, s'ΩB) Tr(σ^{s'} ρB) [σ^s, ρA]`.
fn reduced_change(a: &Detector, b: &Detector, dim: Dimension, kind: KernelKind, prefactor: Complex64) -> Result<ReducedUpdate> {
    let rho_a = a.initial_state()?;
    let rho_b = b.initial_state()?;
    let kernel = KernelSpec::new(kind, dim);
    let mut change = Op2::zeros();
    if a.coupling * b.coupling != 0.0 {
        for s in SIGNS {
            let comm = commutator(&ladder(s), rho_a.matrix());
            for sp in SIGNS {
                let tr = (ladder(sp) * rho_b.matrix()).trace();
                if tr == c(0.0, 0.0) {
                    continue;
                }
                let phi = phase_weighted(
                    kernel,
                    &a.smearing,
                    &b.smearing,
                    f64::from(s) * a.gap,
                    f64::from(sp) * b.gap,
                )?;
                change += comm * (phi * tr);
            }
        }
        change *= prefactor * (a.coupling * b.coupling);
    }
    Ok(ReducedUpdate {
        initial: rho_a,
        change,
    })
}

/// Second-order qc-model update of A's state.
pub fn qc_second_order(a: &Detector, b: &Detector, dim: Dimension) -> Result<ReducedUpdate> {
    reduced_change(a, b, dim, KernelKind::Symmetric, c(0.0, -0.5))
}

/// Retarded-only signalling term of the QFT model at the same order.
pub fn qft_signal_term(a: &Detector, b: &Detector, dim: Dimension) -> Result<ReducedUpdate> {
    reduced_change(a, b, dim, KernelKind::Retarded, c(0.0, -1.0))
}

/// `‖ρA^(2)‖ ≤ 2 λ² |C|` with `λ² = λA λB`.
pub fn norm_bound_check(coupling_sq: f64, c_total: f64, change: &Op2) -> bool {
    operator_norm2(change) <= 2.0 * coupling_sq.abs() * c_total.abs() + 1e-12
}

/// Brute-force second-order update of a joint state.
///
/// `D(s, s')` is assembled from midpoint Riemann sums over the time windows (pointlike
/// detectors with window switchings only) and the result is `ρ0 - i [K, ρ0]`.
pub fn dyson_oracle(a: &Detector, b: &Detector, rho0: &PairState, dim: Dimension, n_steps: usize) -> Result<PairState> {
    if n_steps < 64 {
        return Err(Error::param("n_steps", format!("must be at least 64, got {n_steps}")));
    }
    a.smearing.check_dim(dim)?;
    b.smearing.check_dim(dim)?;
    let (Some(wa), Some(wb)) = (a.smearing.window(), b.smearing.window()) else {
        return Err(Error::Unsupported("the Dyson oracle needs window switchings".into()));
    };
    if !(a.smearing.spatial.is_pointlike() && b.smearing.spatial.is_pointlike()) {
        return Err(Error::Unsupported("the Dyson oracle needs pointlike detectors".into()));
    }
    let l = distance(a.smearing.spatial.center(), b.smearing.spatial.center());
    if dim == Dimension::ThreePlusOne && l == 0.0 {
        return Err(Error::SingularKernel);
    }
    let amp = a.smearing.amplitude * b.smearing.amplitude;
    let basis = rho0.basis();
    let rho = rho0.to_basis(Basis::Energy);
    // Retarded sums in both directions; index [s][s'] with 0 ↔ +, 1 ↔ −.
    let ab = retarded_sums(dim, wa, wb, l, a.gap, b.gap, n_steps);
    let ba = retarded_sums(dim, wb, wa, l, b.gap, a.gap, n_steps);
    let mut k = Op4::zeros();
    for (i, s) in SIGNS.into_iter().enumerate() {
        for (j, sp) in SIGNS.into_iter().enumerate() {
            let d = (ab[i][j] + ba[j][i]) * amp;
            k += kron(&ladder(s), &ladder(sp)) * d;
        }
    }
    k *= r(0.5 * a.coupling * b.coupling);
    let m = rho.matrix();
    let i = c(0.0, 1.0);
    let out = m - (k * m - m * k) * i;
    Ok(PairState::unchecked(out, Basis::Energy).to_basis(basis))
}

/// Midpoint sums of `∫∫ G_R(t, t') χx(t) χy(t') e^{±iΩx t} e^{±iΩy t'}`, x receiving.
fn retarded_sums(dim: Dimension, x: Interval, y: Interval, l: f64, gx: f64, gy: f64, n: usize) -> [[Complex64; 2]; 2] {
    let zero = c(0.0, 0.0);
    let mut out = [[zero; 2]; 2];
    match dim {
        Dimension::ThreePlusOne => {
            // δ(t - t' - L): t' = t - L on x ∩ (y + L).
            let lo = x.start.max(y.start + l);
            let hi = x.end.min(y.end + l);
            if hi > lo {
                let h = (hi - lo) / n as f64;
                for (i, &s) in SIGNS.iter().enumerate() {
                    for (j, &sp) in SIGNS.iter().enumerate() {
                        let mut acc = zero;
                        for k in 0..n {
                            let t = lo + (k as f64 + 0.5) * h;
                            acc += Complex64::from_polar(1.0, f64::from(s) * gx * t + f64::from(sp) * gy * (t - l));
                        }
                        out[i][j] = acc * h / (4.0 * std::f64::consts::PI * l);
                    }
                }
            }
        }
        Dimension::OnePlusOne => {
            // Θ(t - t' - L) / 2; the outer range is cut where the inner range saturates.
            let kink = y.end + l;
            let pieces = [
                (x.start.max(y.start + l), x.end.min(kink)),
                (x.start.max(kink), x.end),
            ];
            for (lo, hi) in pieces {
                if hi <= lo {
                    continue;
                }
                let h = (hi - lo) / n as f64;
                let mut acc = [[zero; 2]; 2];
                for k in 0..n {
                    let t = lo + (k as f64 + 0.5) * h;
                    let upper = y.end.min(t - l);
                    // The e^{-iΩy t'} sum is the conjugate of the e^{+iΩy t'} one.
                    let inner = midpoint_phase_sum(y.start, upper, gy, n);
                    let ph = Complex64::from_polar(1.0, gx * t);
                    acc[0][0] += ph * inner;
                    acc[0][1] += ph * inner.conj();
                    acc[1][0] += ph.conj() * inner;
                    acc[1][1] += ph.conj() * inner.conj();
                }
                for (row, sums) in out.iter_mut().zip(acc) {
                    for (o, v) in row.iter_mut().zip(sums) {
                        *o += 0.5 * v * h;
                    }
                }
            }
        }
    }
    out
}

/// `Σ h e^{iω t_k}` over `n` midpoints of `[a, b]`, phases by recurrence.
fn midpoint_phase_sum(a: f64, b: f64, omega: f64, n: usize) -> Complex64 {
    if b <= a {
        return c(0.0, 0.0);
    }
    let h = (b - a) / n as f64;
    let step = Complex64::from_polar(1.0, omega * h);
    let mut ph = Complex64::from_polar(1.0, omega * (a + 0.5 * h));
    let mut acc = c(0.0, 0.0);
    for k in 0..n {
        acc += ph;
        ph *= step;
        // Re-anchor periodically to stop rounding drift.
        if k % 256 == 255 {
            ph = Complex64::from_polar(1.0, omega * (a + (k as f64 + 1.5) * h));
        }
    }
    acc * h
}
