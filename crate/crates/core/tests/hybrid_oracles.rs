// SPDX-License-Identifier: Apache-2.0

use nalgebra::{Matrix2, SymmetricEigen, Vector2};
use nvscramble::analytic::propagate_nofeedback;
use nvscramble::hybrid::{integrate, Control, Feedback, HybridState, OscParams, Regime};
use nvscramble::spin_algebra::{embed, expm_hermitian, pauli, Axis, Site, SpinParams, SpinState, C64};

fn linear(k: f64) -> OscParams {
    OscParams {
        omega1: 1.0,
        omega2: 1.5,
        d: 0.0,
        xi: 0.0,
        gamma: 0.0,
        f: 0.0,
        drive_omega: 1.0,
    }
    .with_connectivity(k)
    .unwrap()
}

/// Closed-form trajectory of the free linear pair via its normal modes.
fn normal_modes(op: &OscParams, x0: Vector2<f64>, v0: Vector2<f64>) -> impl Fn(f64) -> (Vector2<f64>, Vector2<f64>) {
    let m = Matrix2::new(op.omega1 * op.omega1 + op.d, -op.d, -op.d, op.omega2 * op.omega2 + op.d);
    let eig = SymmetricEigen::new(m);
    let q = eig.eigenvectors;
    let w = eig.eigenvalues.map(f64::sqrt);
    let (q0, p0) = (q.transpose() * x0, q.transpose() * v0);
    move |t| {
        let x = Vector2::from_fn(|k, _| q0[k] * (w[k] * t).cos() + p0[k] / w[k] * (w[k] * t).sin());
        let v = Vector2::from_fn(|k, _| -q0[k] * w[k] * (w[k] * t).sin() + p0[k] * (w[k] * t).cos());
        (q * x, q * v)
    }
}

#[test]
fn uncoupled_spins_follow_normal_modes_and_precess() {
    for k in [0.1, 10.0] {
        let op = linear(k);
        let sp = SpinParams::new(1.5, 0.0, std::f64::consts::FRAC_PI_3);
        let psi0 = SpinState::phi_minus();
        let init = HybridState::new(0.0, 1.0, 0.2, -0.3, 0.0, psi0);
        let run = integrate(
            &init,
            &op,
            &sp,
            Some(Regime::AutonomousLinear),
            &Control::new(50.0, 0.5, 1e-10),
        )
        .unwrap();
        let exact = normal_modes(&op, Vector2::new(1.0, -0.3), Vector2::new(0.2, 0.0));
        let hz = (embed(&pauli(Axis::Z), Site::One) + embed(&pauli(Axis::Z), Site::Two)) * C64::from(0.75);
        for s in &run.states {
            let (x, v) = exact(s.t);
            let err = (s.x1 - x[0]).abs() + (s.x2 - x[1]).abs() + (s.v1 - v[0]).abs() + (s.v2 - v[1]).abs();
            assert!(err < 1e-6, "K = {k}, t = {}: {err:e}", s.t);
            let u = expm_hermitian(&hz, s.t).unwrap();
            assert!((s.u - u).norm() < 1e-6, "K = {k}, t = {}", s.t);
        }
        assert!(run.series.max_abs_otoc() < 1e-12);
    }
}

#[test]
fn feedback_off_matches_prescribed_trajectory_propagation() {
    let op = linear(0.1);
    let sp = SpinParams::new(1.5, 1.0, std::f64::consts::FRAC_PI_3);
    let psi0 = SpinState::up_down();
    let init = HybridState::new(0.0, 1.0, 0.0, 0.0, 0.0, psi0);
    let mut control = Control::new(30.0, 0.25, 1e-10);
    control.feedback = Feedback::Off;
    let run = integrate(&init, &op, &sp, None, &control).unwrap();
    let exact = normal_modes(&op, Vector2::new(1.0, 0.0), Vector2::zeros());
    let oracle = propagate_nofeedback(
        |t| {
            let (x, _) = exact(t);
            (x[0], x[1])
        },
        &sp,
        &psi0,
        0.0,
        30.0,
        0.25,
        1e-10,
    )
    .unwrap();
    assert_eq!(oracle.t.len(), run.states.len());
    for (s, c) in run.states.iter().zip(&oracle.c) {
        let err: f64 = s
            .psi
            .amplitudes()
            .iter()
            .zip(c)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-6, "t = {}: {err:e}", s.t);
    }
}

#[test]
fn halving_tolerance_keeps_trajectory_within_budget() {
    let op = linear(0.1);
    let sp = SpinParams::new(1.5, 1.0, std::f64::consts::FRAC_PI_3);
    let init = HybridState::new(0.0, 1.0, 0.0, 0.0, 0.0, SpinState::up_down());
    let tol = 1e-8;
    let run = |tol| integrate(&init, &op, &sp, None, &Control::new(100.0, 0.5, tol)).unwrap();
    let reference = run(tol / 100.0);
    let scale = reference
        .states
        .iter()
        .map(|s| s.x1.abs().max(s.x2.abs()))
        .fold(1.0, f64::max);
    for tol in [tol, tol / 2.0] {
        let r = run(tol);
        let defect = r
            .states
            .iter()
            .zip(&reference.states)
            .map(|(a, b)| (a.x1 - b.x1).abs().max((a.x2 - b.x2).abs()))
            .fold(0.0, f64::max);
        assert!(defect < 10.0 * tol * scale, "tol {tol:e}: defect {defect:e}");
    }
}

#[test]
fn regime_mismatch_is_rejected() {
    let op = linear(0.1);
    let sp = SpinParams::new(1.5, 1.0, 1.0);
    let init = HybridState::new(0.0, 1.0, 0.0, 0.0, 0.0, SpinState::up_down());
    let err = integrate(
        &init,
        &op,
        &sp,
        Some(Regime::DrivenNonlinear),
        &Control::new(1.0, 0.1, 1e-9),
    );
    assert!(err.is_err());
}
