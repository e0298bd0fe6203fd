//! Two-level and two-qubit density matrices.
//!
//! Single-qubit matrices are written in one of two bases:
//!
//! * [`Basis::Energy`]: `(|g⟩, |e⟩)`, eigenbasis of the free Hamiltonian `Ω σ⁺σ⁻` with
//!   `σ⁺ = |e⟩⟨g|`. Initial states are parametrized as `[[α, β], [β*, 1 - α]]` here.
//! * [`Basis::Monopole`]: `(|+⟩, |−⟩)`, eigenbasis of the monopole `m(0) = σ⁺ + σ⁻` with
//!   eigenvalues `±1`. Two-qubit matrices in this basis are ordered `|++⟩, |+−⟩, |−+⟩, |−−⟩`.

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Op2 = Matrix2<Complex64>;
pub type Op4 = Matrix4<Complex64>;

pub(crate) const TRACE_TOL: f64 = 1e-12;
pub(crate) const HERMITIAN_TOL: f64 = 1e-12;
pub(crate) const PSD_TOL: f64 = 1e-10;

pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub(crate) fn r(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    Energy,
    Monopole,
}

/// `σ⁺ = |e⟩⟨g|` in the energy basis.
pub fn sigma_plus() -> Op2 {
    Op2::new(r(0.0), r(0.0), r(1.0), r(0.0))
}

pub fn sigma_minus() -> Op2 {
    Op2::new(r(0.0), r(1.0), r(0.0), r(0.0))
}

pub fn sigma_x() -> Op2 {
    Op2::new(r(0.0), r(1.0), r(1.0), r(0.0))
}

/// Hadamard; maps energy-basis coordinates to monopole-basis coordinates and back.
pub fn hadamard() -> Op2 {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Op2::new(r(h), r(h), r(h), r(-h))
}

pub fn kron(a: &Op2, b: &Op2) -> Op4 {
    Op4::from_fn(|i, j| a[(i / 2, j / 2)] * b[(i % 2, j % 2)])
}

/// Trace over the second factor.
pub fn partial_trace_b(m: &Op4) -> Op2 {
    Op2::from_fn(|i, j| m[(2 * i, 2 * j)] + m[(2 * i + 1, 2 * j + 1)])
}

/// Trace over the first factor.
pub fn partial_trace_a(m: &Op4) -> Op2 {
    Op2::from_fn(|i, j| m[(i, j)] + m[(i + 2, j + 2)])
}

pub fn commutator(a: &Op2, b: &Op2) -> Op2 {
    a * b - b * a
}

/// Largest singular value.
pub fn operator_norm2(m: &Op2) -> f64 {
    m.singular_values().max()
}

pub fn operator_norm4(m: &Op4) -> f64 {
    m.singular_values().max()
}

fn hermiticity_defect2(m: &Op2) -> f64 {
    (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn hermiticity_defect4(m: &Op4) -> f64 {
    (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Eigenvalues of the hermitian part, ascending.
pub fn hermitian_eigenvalues2(m: &Op2) -> Vec<f64> {
    let h = (m + m.adjoint()) * r(0.5);
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

pub fn hermitian_eigenvalues4(m: &Op4) -> Vec<f64> {
    let h = (m + m.adjoint()) * r(0.5);
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// JSON-friendly complex number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexEntry {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexEntry {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

pub fn rows2(m: &Op2) -> Vec<Vec<ComplexEntry>> {
    (0..2).map(|i| (0..2).map(|j| m[(i, j)].into()).collect()).collect()
}

pub fn rows4(m: &Op4) -> Vec<Vec<ComplexEntry>> {
    (0..4).map(|i| (0..4).map(|j| m[(i, j)].into()).collect()).collect()
}

/// Validated single-qubit density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitState {
    matrix: Op2,
    basis: Basis,
}

impl QubitState {
    pub fn new(matrix: Op2, basis: Basis) -> Result<Self> {
        let herm = hermiticity_defect2(&matrix);
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("not hermitian (defect {herm:e})")));
        }
        let tr = matrix.trace();
        if (tr - r(1.0)).norm() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let min = hermitian_eigenvalues2(&matrix)[0];
        if min < -PSD_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self { matrix, basis })
    }

    /// `[[α, β], [β*, 1 - α]]` in the energy basis.
    pub fn from_params(alpha: f64, beta: Complex64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidState(format!("alpha {alpha} outside [0, 1]")));
        }
        if beta.norm_sqr() > alpha * (1.0 - alpha) + 1e-12 {
            return Err(Error::InvalidState(format!(
                "|beta|^2 = {} exceeds alpha(1 - alpha) = {}",
                beta.norm_sqr(),
                alpha * (1.0 - alpha)
            )));
        }
        Self::new(Op2::new(r(alpha), beta, beta.conj(), r(1.0 - alpha)), Basis::Energy)
    }

    pub fn matrix(&self) -> &Op2 {
        &self.matrix
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn to_basis(&self, basis: Basis) -> Self {
        if basis == self.basis {
            return self.clone();
        }
        let h = hadamard();
        Self {
            matrix: h * self.matrix * h,
            basis,
        }
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues2(&self.matrix)
    }
}

/// Validated two-qubit density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PairState {
    matrix: Op4,
    basis: Basis,
}

impl PairState {
    pub fn new(matrix: Op4, basis: Basis) -> Result<Self> {
        let herm = hermiticity_defect4(&matrix);
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("not hermitian (defect {herm:e})")));
        }
        let tr = matrix.trace();
        if (tr - r(1.0)).norm() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let min = hermitian_eigenvalues4(&matrix)[0];
        if min < -PSD_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self { matrix, basis })
    }

    /// Wraps a matrix produced by trusted arithmetic (perturbative series need not be PSD).
    pub(crate) fn unchecked(matrix: Op4, basis: Basis) -> Self {
        Self { matrix, basis }
    }

    pub fn product(a: &QubitState, b: &QubitState) -> Self {
        let b = b.to_basis(a.basis);
        Self {
            matrix: kron(&a.matrix, &b.matrix),
            basis: a.basis,
        }
    }

    pub fn matrix(&self) -> &Op4 {
        &self.matrix
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn to_basis(&self, basis: Basis) -> Self {
        if basis == self.basis {
            return self.clone();
        }
        let hh = kron(&hadamard(), &hadamard());
        Self {
            matrix: hh * self.matrix * hh,
            basis,
        }
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues4(&self.matrix)
    }
}

#[derive(Serialize)]
struct MatrixDoc {
    basis: Basis,
    matrix: Vec<Vec<ComplexEntry>>,
}

impl Serialize for QubitState {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixDoc {
            basis: self.basis,
            matrix: rows2(&self.matrix),
        }
        .serialize(s)
    }
}

impl Serialize for PairState {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixDoc {
            basis: self.basis,
            matrix: rows4(&self.matrix),
        }
        .serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parametrized_state_validation() {
        assert!(QubitState::from_params(0.5, c(0.5, 0.0)).is_ok());
        assert!(QubitState::from_params(0.5, c(0.6, 0.0)).is_err());
        assert!(QubitState::from_params(1.2, c(0.0, 0.0)).is_err());
    }

    #[test]
    fn ladder_traces_pick_out_beta() {
        let rho = QubitState::from_params(0.3, c(0.2, -0.1)).unwrap();
        let tp = (sigma_plus() * rho.matrix()).trace();
        let tm = (sigma_minus() * rho.matrix()).trace();
        assert!((tp - c(0.2, -0.1)).norm() < 1e-15);
        assert!((tm - c(0.2, 0.1)).norm() < 1e-15);
    }

    #[test]
    fn plus_state_is_diagonal_in_monopole_basis() {
        let plus = QubitState::from_params(0.5, c(0.5, 0.0)).unwrap();
        let m = plus.to_basis(Basis::Monopole);
        assert!((m.matrix()[(0, 0)] - r(1.0)).norm() < 1e-15);
        assert!(m.matrix()[(1, 1)].norm() < 1e-15);
        let back = m.to_basis(Basis::Energy);
        assert!((back.matrix() - plus.matrix()).norm() < 1e-15);
    }

    #[test]
    fn partial_traces_of_product() {
        let a = QubitState::from_params(0.3, c(0.1, 0.2)).unwrap();
        let b = QubitState::from_params(0.8, c(-0.2, 0.1)).unwrap();
        let ab = PairState::product(&a, &b);
        assert!((partial_trace_b(ab.matrix()) - a.matrix()).norm() < 1e-15);
        assert!((partial_trace_a(ab.matrix()) - b.matrix()).norm() < 1e-15);
    }

    #[test]
    fn norm_of_pauli() {
        assert!((operator_norm2(&sigma_x()) - 1.0).abs() < 1e-14);
        assert!((operator_norm2(&(sigma_plus() * r(3.0))) - 3.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = Op2::new(r(0.5), c(0.1, 0.0), c(0.2, 0.0), r(0.5));
        assert!(QubitState::new(m, Basis::Energy).is_err());
    }
}
