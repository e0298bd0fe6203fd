use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use qcc_core::dynamics_nonpert::{evolve, np_split, norm_estimator, state_change_a};
use qcc_core::dynamics_pert::{dyson_oracle, norm_bound_check, qc_second_order, qft_signal_term, Detector};
use qcc_core::propagators::smeared_symmetric;
use qcc_core::states::{operator_norm2, operator_norm4, partial_trace_b, Op2, Op4};
use qcc_core::{Basis, Dimension, PairState, SetupGeometry};

fn qubit() -> impl Strategy<Value = (f64, Complex64)> {
    (0.0..1.0f64, 0.0..1.0f64, 0.0..(2.0 * PI)).prop_map(|(alpha, r, phi)| {
        let mag = (alpha * (1.0 - alpha)).sqrt() * r;
        (alpha, Complex64::from_polar(mag, phi))
    })
}

fn geometry() -> impl Strategy<Value = SetupGeometry> {
    (any::<bool>(), 0.25..2.0f64, 0.0..6.0f64, 0.0..3.0f64, -3.0..3.0f64).prop_map(|(three, l, t, s, on)| {
        if three {
            SetupGeometry::new(Dimension::ThreePlusOne, l, t, 0.0, on).unwrap()
        } else {
            SetupGeometry::new(Dimension::OnePlusOne, l, t, s, on).unwrap()
        }
    })
}

fn pair() -> impl Strategy<Value = (SetupGeometry, Detector, Detector)> {
    (geometry(), 0.0..3.0f64, 0.0..3.0f64, 0.01..2.0f64, 0.01..2.0f64, qubit(), qubit()).prop_map(
        |(g, oa, ob, la, lb, (aa, ba), (ab, bb))| {
            let a = Detector::new(oa, la, g.smearing_a(), aa, ba).unwrap();
            let b = Detector::new(ob, lb, g.smearing_b(), ab, bb).unwrap();
            (g, a, b)
        },
    )
}

fn pair_state() -> impl Strategy<Value = PairState> {
    proptest::collection::vec(-1.0..1.0f64, 32).prop_map(|v| {
        let m = Op4::from_fn(|i, j| Complex64::new(v[2 * (4 * i + j)], v[2 * (4 * i + j) + 1]));
        let rho = m * m.adjoint();
        let tr = rho.trace();
        PairState::new(rho / tr, Basis::Monopole).unwrap()
    })
}

fn hermitian_traceless(m: &Op2) -> bool {
    let scale = operator_norm2(m).max(1.0);
    operator_norm2(&(m - m.adjoint())) <= 1e-12 * scale && m.trace().norm() <= 1e-12 * scale
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn corrections_are_hermitian_and_traceless((g, a, b) in pair()) {
        prop_assert!(hermitian_traceless(&qc_second_order(&a, &b, g.dim).unwrap().change));
        prop_assert!(hermitian_traceless(&qft_signal_term(&a, &b, g.dim).unwrap().change));
    }

    #[test]
    fn corrections_scale_with_each_coupling((g, a, b) in pair(), k in 0.1..5.0f64) {
        let base = qc_second_order(&a, &b, g.dim).unwrap().change;
        let scaled_a = Detector { coupling: k * a.coupling, ..a.clone() };
        let both = Detector { coupling: k * b.coupling, ..b.clone() };
        let once = qc_second_order(&scaled_a, &b, g.dim).unwrap().change;
        let twice = qc_second_order(&scaled_a, &both, g.dim).unwrap().change;
        let tol = 1e-12 * operator_norm2(&base).max(1e-300) * k * k;
        prop_assert!(operator_norm2(&(once - base * Complex64::from(k))) <= tol);
        prop_assert!(operator_norm2(&(twice - base * Complex64::from(k * k))) <= tol);
    }

    #[test]
    fn norm_bound_holds((g, a, b) in pair()) {
        let upd = qc_second_order(&a, &b, g.dim).unwrap();
        let c = smeared_symmetric(&a.smearing, &b.smearing, g.dim).unwrap();
        prop_assert!(norm_bound_check(a.coupling * b.coupling, c, &upd.change));
    }

    #[test]
    fn evolution_is_unitary(rho in pair_state(), delta in -30.0..30.0f64) {
        let out = evolve(delta, &rho);
        for (x, y) in rho.eigenvalues().iter().zip(out.eigenvalues()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn evolution_has_period_two_pi(rho in pair_state(), delta in -10.0..10.0f64) {
        let d = evolve(delta, &rho).matrix() - evolve(delta + 2.0 * PI, &rho).matrix();
        prop_assert!(operator_norm4(&d) < 1e-12);
    }

    #[test]
    fn closed_change_matches_evolved_trace(rho in pair_state(), delta in -10.0..10.0f64) {
        let out = evolve(delta, &rho);
        let direct = partial_trace_b(out.matrix()) - partial_trace_b(rho.matrix());
        prop_assert!(operator_norm2(&(direct - state_change_a(delta, &rho))) < 1e-12);
    }

    #[test]
    fn phases_add_but_visibility_does_not(l in 0.25..2.0f64, k in 2.01..30.0f64, lambda in 0.5..4.0f64) {
        let s = SetupGeometry::new(Dimension::ThreePlusOne, l, k * l, 0.0, 0.0).unwrap();
        let r = np_split(&s, lambda).unwrap();
        prop_assert!((r.theta_a - r.theta_a_causal - r.theta_a_retro).abs() <= 1e-12 * r.theta_a.max(1.0));
        prop_assert!((r.theta_a_retro / r.theta_a_causal - 1.0 / k).abs() < 1e-12);
        // θ_r is a fixed λ²/2π; N_a = N_a^(c) + N_a^(r) would need sin to be linear.
        let split = norm_estimator(r.theta_a_causal) + norm_estimator(r.theta_a_retro);
        prop_assert!(r.n_a <= split + 1e-12);
        let later = np_split(&s.with_duration(k * l + l).unwrap(), lambda).unwrap();
        prop_assert!((r.n_a - later.n_a_causal).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn second_order_matches_dyson((g, a, b) in pair()) {
        let upd = qc_second_order(&a, &b, g.dim).unwrap();
        let rho0 = PairState::product(&a.initial_state().unwrap(), &b.initial_state().unwrap());
        let joint = dyson_oracle(&a, &b, &rho0, g.dim, 1024).unwrap();
        let gap = operator_norm2(&(partial_trace_b(joint.matrix()) - upd.final_matrix()));
        let scale = a.coupling * b.coupling * (1.0 + g.duration).powi(2);
        prop_assert!(gap < 1e-5 * scale, "{}", gap);
    }
}

#[test]
fn visibility_is_not_additive_in_general() {
    let s = SetupGeometry::new(Dimension::ThreePlusOne, 1.0, 6.0, 0.0, 0.0).unwrap();
    let r = np_split(&s, 2.0).unwrap();
    let split = norm_estimator(r.theta_a_causal) + norm_estimator(r.theta_a_retro);
    assert!((r.n_a - split).abs() > 1e-3);
}

#[test]
fn dyson_oracle_converges_with_steps() {
    let g = SetupGeometry::new(Dimension::OnePlusOne, 1.0, 3.0, 1.0, 0.0).unwrap();
    let a = Detector::new(1.5, 0.5, g.smearing_a(), 0.6, Complex64::new(0.2, 0.3)).unwrap();
    let b = Detector::new(0.7, 0.5, g.smearing_b(), 0.3, Complex64::new(-0.2, 0.1)).unwrap();
    let target = qc_second_order(&a, &b, g.dim).unwrap().final_matrix();
    let rho0 = PairState::product(&a.initial_state().unwrap(), &b.initial_state().unwrap());
    let err = |n| operator_norm2(&(partial_trace_b(dyson_oracle(&a, &b, &rho0, g.dim, n).unwrap().matrix()) - target));
    let (e1, e2) = (err(128), err(512));
    assert!(e2 < e1 / 4.0, "{e1} {e2}");
}
