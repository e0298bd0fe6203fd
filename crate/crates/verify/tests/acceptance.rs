//! Acceptance checks. Runs every criterion, prints one PASS/FAIL line each, and exits non-zero
//! if any failed.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use qcc_core::audit::{audit_detectors, find_retro_subregion, trailing_layout, witness, ModelKind};
use qcc_core::dynamics_nonpert::{evolve, np_split};
use qcc_core::dynamics_pert::{dyson_oracle, norm_bound_check, qc_second_order, Detector};
use qcc_core::estimators::{estimator_split, estimator_sweep, ratios, time_grid};
use qcc_core::gme::{regime_report, GmeParameters};
use qcc_core::propagators::{hdiff, quadrature_oracle, smeared, smeared_symmetric, KernelKind, KernelSpec};
use qcc_core::states::{operator_norm2, partial_trace_b, Op2, Op4};
use qcc_core::{split_switching, Basis, Dimension, PairState, SetupGeometry, Smearing, SpatialProfile, Switching};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(n: u32, pass: bool, detail: &str) {
    println!("criterion {n}: {} ({detail})", if pass { "PASS" } else { "FAIL" });
}

fn random_setup(rng: &mut ChaCha8Rng, dim: Dimension) -> SetupGeometry {
    let l = rng.gen_range(0.25..2.0);
    let t = rng.gen_range(0.0..8.0);
    let s = match dim {
        Dimension::OnePlusOne => rng.gen_range(0.0..4.0),
        Dimension::ThreePlusOne => 0.0,
    };
    let on = rng.gen_range(-5.0..5.0);
    SetupGeometry::new(dim, l, t, s, on).unwrap()
}

fn random_qubit(rng: &mut ChaCha8Rng) -> (f64, Complex64) {
    let alpha: f64 = rng.gen_range(0.0..1.0);
    let r = (alpha * (1.0 - alpha)).sqrt() * rng.gen_range(0.0..1.0);
    (alpha, Complex64::from_polar(r, rng.gen_range(0.0..2.0 * PI)))
}

fn criterion_01_closed_form_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for k in 0..200 {
        let dim = if k % 2 == 0 { Dimension::ThreePlusOne } else { Dimension::OnePlusOne };
        let setup = random_setup(&mut rng, dim);
        let (a, b) = (setup.smearing_a(), setup.smearing_b());
        // E can vanish identically, so all kernels are compared on the scale of Δ.
        let scale = smeared_symmetric(&a, &b, dim).unwrap().abs();
        for kind in [KernelKind::Retarded, KernelKind::Symmetric, KernelKind::Causal] {
            let kernel = KernelSpec::new(kind, dim);
            let exact = smeared(kernel, &a, &b).unwrap();
            let num = quadrature_oracle(&a, &b, kernel, 2048).unwrap().value;
            let denom = exact.abs().max(scale);
            let rel = if denom == 0.0 { num.abs() } else { (num - exact).abs() / denom };
            worst = worst.max(rel);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = worst < 1e-6 && secs < 30.0;
    report(1, pass, &format!("max relative error {worst:.3e}, {secs:.1} s"));
    assert!(pass);
}

fn criterion_02_three_plus_one_sweep() {
    let l = 1.0;
    let base = SetupGeometry::new(Dimension::ThreePlusOne, l, 0.0, 0.0, 0.0).unwrap();
    let grid = time_grid(0.0, 10.0, 201).unwrap();
    let rows = estimator_sweep(&base, &grid).unwrap();
    let (mut e_total, mut e_plateau, mut e_ratio) = (0.0f64, 0.0f64, 0.0f64);
    for r in &rows {
        let t = r.setup.duration;
        e_total = e_total.max((r.c_total - t / (2.0 * PI * l)).abs());
        if t >= 2.0 * l {
            e_plateau = e_plateau.max((r.c_retro - 1.0 / (2.0 * PI)).abs());
        }
        if t > 2.0 * l {
            e_ratio = e_ratio.max((r.ratio_rtotal.unwrap() - l / t).abs());
        }
    }
    let pass = e_total < 1e-12 && e_plateau < 1e-12 && e_ratio < 1e-12;
    report(
        2,
        pass,
        &format!("C_total {e_total:.1e}, plateau {e_plateau:.1e}, ratio {e_ratio:.1e}"),
    );
    assert!(pass);
}

fn criterion_03_one_plus_one_estimators() {
    let l = 1.0;
    // Closed forms against direct polygon-area propagators on the split windows.
    let mut worst: f64 = 0.0;
    for &t in &[0.0, 0.5, 1.0, 2.0, 2.5, 4.0, 7.0, 12.0] {
        for &s in &[0.0, 0.3, 1.0, 3.0, 10.0] {
            let setup = SetupGeometry::new(Dimension::OnePlusOne, l, t, s, 0.0).unwrap();
            let rep = estimator_split(&setup);
            let split = split_switching(&setup);
            let a = setup.smearing_a();
            let b = setup.smearing_b();
            let d = Dimension::OnePlusOne;
            let c = smeared_symmetric(&a, &b, d).unwrap();
            let cc = smeared_symmetric(&a, &b.with_window(split.window_c), d).unwrap();
            let cr = smeared_symmetric(&a, &b.with_window(split.window_r), d).unwrap();
            for (x, y) in [(rep.c_total, c), (rep.c_causal, cc), (rep.c_retro, cr)] {
                worst = worst.max((x - y).abs() / y.abs().max(1.0));
            }
        }
    }
    let big_s = SetupGeometry::new(Dimension::OnePlusOne, l, 4.0 * l, 1e6 * l, 0.0).unwrap();
    let dominant = estimator_split(&big_s).ratio_rtotal.unwrap();
    let mut asym_worst: f64 = 0.0;
    for &s in &[0.0, 1.0, 3.0] {
        let t = 1e4 * (2.0 * l + s);
        let setup = SetupGeometry::new(Dimension::OnePlusOne, l, t, s, 0.0).unwrap();
        let lead = (2.0 * l + s) / t;
        let (rc, rt) = ratios(&setup).unwrap();
        for r in [rc, rt] {
            asym_worst = asym_worst.max((r - lead).abs() / lead);
        }
    }
    let grid_ok = worst < 1e-12;
    let dom_ok = (0.999..=1.0).contains(&dominant);
    let asym_ok = asym_worst < 1e-7;
    let pass = grid_ok && dom_ok && asym_ok;
    report(
        3,
        pass,
        &format!(
            "grid {worst:.1e}, S-dominated ratio {dominant:.7}, large-T relative deviation {asym_worst:.3e} vs 1e-7"
        ),
    );
    assert!(grid_ok && dom_ok, "closed forms or S-limit off");
    assert!(asym_ok, "large-T deviation {asym_worst:.3e} exceeds 1e-7 (O(1/T) correction)");
}

fn criterion_04_tolerance_law() {
    let l = 1.0;
    let delta = 1e-6;
    let mut pass = true;
    let mut detail = String::new();
    for eps in [0.1, 0.01, 0.001] {
        let t = l / eps;
        let at = |t: f64| {
            let s = SetupGeometry::new(Dimension::ThreePlusOne, l, t, 0.0, 0.0).unwrap();
            estimator_split(&s).ratio_rtotal.unwrap()
        };
        let above = at(t + delta);
        let below = at(t - delta);
        pass &= above < eps && below >= eps;
        detail.push_str(&format!("eps {eps}: {above:.9} / {below:.9}; "));
    }
    report(4, pass, detail.trim_end_matches("; "));
    assert!(pass);
}

fn criterion_05_dyson_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    let mut bound_ok = true;
    for k in 0..50 {
        let dim = if k % 2 == 0 { Dimension::ThreePlusOne } else { Dimension::OnePlusOne };
        let l = rng.gen_range(0.5..2.0);
        let t = rng.gen_range(0.5..4.0);
        let s = if dim == Dimension::OnePlusOne { rng.gen_range(0.0..2.0) } else { 0.0 };
        let setup = SetupGeometry::new(dim, l, t, s, rng.gen_range(-2.0..2.0)).unwrap();
        let lambda = rng.gen_range(0.05..0.5);
        let (aa, ba) = random_qubit(&mut rng);
        let (ab, bb) = random_qubit(&mut rng);
        let a = Detector::new(rng.gen_range(0.0..2.0), lambda, setup.smearing_a(), aa, ba).unwrap();
        let b = Detector::new(rng.gen_range(0.0..2.0), lambda, setup.smearing_b(), ab, bb).unwrap();
        let upd = qc_second_order(&a, &b, dim).unwrap();
        let rho0 = PairState::product(&a.initial_state().unwrap(), &b.initial_state().unwrap());
        let joint = dyson_oracle(&a, &b, &rho0, dim, 4096).unwrap();
        let diff = partial_trace_b(joint.matrix()) - upd.final_matrix();
        worst = worst.max(operator_norm2(&diff));
        let c = smeared_symmetric(&a.smearing, &b.smearing, dim).unwrap();
        bound_ok &= norm_bound_check(lambda * lambda, c, &upd.change);
    }
    let pass = worst < 1e-6 && bound_ok;
    report(5, pass, &format!("max operator-norm gap {worst:.3e}, norm bound held: {bound_ok}"));
    assert!(pass);
}

fn criterion_06_qft_is_not_retrocausal() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    for k in 0..1000 {
        let dim = if k % 2 == 0 { Dimension::ThreePlusOne } else { Dimension::OnePlusOne };
        let (sa, sb) = if k % 3 == 0 {
            trailing_layout(dim, rng.gen_range(0.25..2.0), rng.gen_range(0.0..6.0)).unwrap()
        } else {
            let s = random_setup(&mut rng, dim);
            (s.smearing_a(), s.smearing_b())
        };
        let gaps = (rng.gen_range(0.0..3.0), rng.gen_range(0.0..3.0));
        let (a, b) =
            audit_detectors(sa, sb, gaps, rng.gen_range(0.01..2.0), random_qubit(&mut rng), random_qubit(&mut rng))
                .unwrap();
        let region = find_retro_subregion(&a.smearing, &b.smearing, dim, 16).unwrap();
        worst = worst.max(witness(ModelKind::Qft, &a, &b, dim, region).unwrap());
    }
    let (sa, sb) = trailing_layout(Dimension::ThreePlusOne, 1.0, 4.0).unwrap();
    let (a, b) = audit_detectors(
        sa,
        sb,
        (1.0, 1.0),
        1.0,
        (1.0, Complex64::new(0.0, 0.0)),
        (0.5, Complex64::new(0.3, 0.2)),
    )
    .unwrap();
    let region = find_retro_subregion(&a.smearing, &b.smearing, Dimension::ThreePlusOne, 64).unwrap();
    let qc = witness(ModelKind::Qc, &a, &b, Dimension::ThreePlusOne, region).unwrap();
    let pass = worst <= 1e-12 && qc > 0.0;
    report(6, pass, &format!("max qft witness {worst:.1e} over 1000 draws, qc witness {qc:.4e}"));
    assert!(pass);
}

fn random_pair_state(rng: &mut ChaCha8Rng) -> PairState {
    let m = Op4::from_fn(|_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let rho = m * m.adjoint();
    let tr = rho.trace();
    PairState::new(rho / tr, Basis::Monopole).unwrap()
}

fn criterion_07_nonperturbative_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut spec_err: f64 = 0.0;
    for _ in 0..200 {
        let rho = random_pair_state(&mut rng);
        let out = evolve(rng.gen_range(-20.0..20.0), &rho);
        for (x, y) in rho.eigenvalues().iter().zip(out.eigenvalues()) {
            spec_err = spec_err.max((x - y).abs());
        }
    }

    let mut period_err: f64 = 0.0;
    let mut ratio_err: f64 = 0.0;
    for _ in 0..200 {
        let l = rng.gen_range(0.25..2.0);
        let lambda = rng.gen_range(0.3..3.0);
        let t = rng.gen_range(2.0 * l + 1e-3..50.0);
        let s = SetupGeometry::new(Dimension::ThreePlusOne, l, t, 0.0, 0.0).unwrap();
        let rep = np_split(&s, lambda).unwrap();
        let shifted = np_split(&s.with_duration(t + rep.period).unwrap(), lambda).unwrap();
        period_err = period_err.max((shifted.n_a - rep.n_a).abs());
        ratio_err = ratio_err.max((rep.theta_a_retro / rep.theta_a_causal - l / t).abs());
    }

    // Gapless second order versus the exact evolution at shrinking coupling.
    let setup = SetupGeometry::new(Dimension::ThreePlusOne, 1.0, 4.0, 0.0, 0.0).unwrap();
    let state_a = (0.7, Complex64::new(0.2, -0.3));
    let state_b = (0.4, Complex64::new(0.1, 0.25));
    let gap_at = |lambda: f64| {
        let (a, b) =
            audit_detectors(setup.smearing_a(), setup.smearing_b(), (0.0, 0.0), lambda, state_a, state_b).unwrap();
        let pert = qc_second_order(&a, &b, setup.dim).unwrap();
        let rho0 = PairState::product(&a.initial_state().unwrap(), &b.initial_state().unwrap());
        let delta = lambda * lambda * smeared_symmetric(&a.smearing, &b.smearing, setup.dim).unwrap();
        let exact: Op2 = partial_trace_b(evolve(delta, &rho0).matrix()) - partial_trace_b(rho0.matrix());
        operator_norm2(&(exact - pert.change))
    };
    let lambdas = [0.2, 0.1, 0.05, 0.025];
    let gaps: Vec<f64> = lambdas.iter().map(|&l| gap_at(l)).collect();
    let orders: Vec<f64> = gaps.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    let quartic = orders.iter().all(|o| (o - 4.0).abs() < 0.1);

    let pass = spec_err < 1e-10 && period_err < 1e-9 && ratio_err < 1e-12 && quartic;
    report(
        7,
        pass,
        &format!(
            "spectrum {spec_err:.1e}, period {period_err:.1e}, theta ratio {ratio_err:.1e}, orders {:?}",
            orders.iter().map(|o| format!("{o:.3}")).collect::<Vec<_>>()
        ),
    );
    assert!(pass);
}

fn criterion_08_gme_regime() {
    let p = GmeParameters {
        m1: 1e-14,
        m2: 1e-14,
        separation: 1e-6,
        duration: 1.0,
        epsilon: 1e-6,
        resolution: 1e-3,
    };
    let r = regime_report(&p).unwrap();
    let pass = (1e14..=1e15).contains(&r.t_over_lc)
        && (1e-14..=1e-12).contains(&r.lambda_sq)
        && (1e-15..=1e-14).contains(&r.required_resolution)
        && r.qc_indistinguishable;
    report(
        8,
        pass,
        &format!(
            "T/(L/c) {:.4e}, lambda^2 {:.4e}, resolution {:.4e} s, indistinguishable {}",
            r.t_over_lc, r.lambda_sq, r.required_resolution, r.qc_indistinguishable
        ),
    );
    assert!(pass);
}

fn criterion_09_hdiff_scaling() {
    let source = Smearing::new(
        SpatialProfile::Pointlike { position: vec![0.0] },
        Switching::gaussian(0.0, 1.0).unwrap(),
    )
    .unwrap();
    let mut ratios = Vec::new();
    for t in [1.0, 3.0, 10.0] {
        ratios.push(hdiff(2.0 * t, &source).unwrap() / hdiff(t, &source).unwrap());
    }
    let pass = ratios.iter().all(|r| (r - 0.25).abs() <= 0.25 * 0.05);
    report(9, pass, &format!("ratios {ratios:.5?}"));
    assert!(pass);
}

fn criterion_10_sweep_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let path = path.to_str().unwrap();
        qcc_cli::run_from([
            "qcc", "--dim", "3p1", "--out", path, "sweep", "--L", "1", "--T-min", "0", "--T-max", "10", "--steps", "200",
        ])
        .unwrap();
        std::fs::read(path).unwrap()
    };
    let first = run("a.csv");
    let second = run("b.csv");
    let pass = first == second && !first.is_empty();
    report(10, pass, &format!("{} bytes, identical: {}", first.len(), first == second));
    assert!(pass);
}

fn main() -> ExitCode {
    let criteria: [(u32, fn()); 10] = [
        (1, criterion_01_closed_form_matches_oracle),
        (2, criterion_02_three_plus_one_sweep),
        (3, criterion_03_one_plus_one_estimators),
        (4, criterion_04_tolerance_law),
        (5, criterion_05_dyson_equivalence),
        (6, criterion_06_qft_is_not_retrocausal),
        (7, criterion_07_nonperturbative_suite),
        (8, criterion_08_gme_regime),
        (9, criterion_09_hdiff_scaling),
        (10, criterion_10_sweep_is_deterministic),
    ];
    let mut failed = Vec::new();
    for (n, check) in criteria {
        if catch_unwind(AssertUnwindSafe(check)).is_err() {
            failed.push(n);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", criteria.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
