// SPDX-License-Identifier: Apache-2.0

//! Mean-field dynamics of two NV spins riding on two coupled classical
//! oscillators.
//!
//! The oscillators feel the spins only through ⟨ψ|Ŝᶻ|ψ⟩ and the spins feel
//! the oscillators only through the instantaneous positions in Ĥ_s(x₁, x₂).
//! The spin Hamiltonian is a sum of single-site terms at every instant, so the
//! accumulated propagator factorizes as U = U₁ ⊗ U₂; the two local factors are
//! carried alongside U so the factorization can be checked numerically.

use nalgebra::{Matrix2, Matrix4, Vector4};
use serde::{Deserialize, Serialize};

use crate::correlators::{otoc_unchecked, two_point_unchecked, ProbePair};
use crate::error::{Error, Result};
use crate::ode::{Dopri5, OdeSystem, StepStats, Tolerances};
use crate::spin_algebra::{
    embed, expectation, kron, pauli, sz_nv, unitarity_defect, Axis, Operator2, Operator4, Site, SpinParams, SpinState,
    C64, I,
};

/// Smallest and largest accepted relative tolerance.
pub const TOL_RANGE: (f64, f64) = (1e-12, 1e-4);
/// Per-step norm drift above which ψ is renormalized.
pub const RENORM_THRESHOLD: f64 = 1e-12;
/// Cumulative renormalization budget before a run is declared broken.
pub const MAX_CUMULATIVE_DRIFT: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscParams {
    pub omega1: f64,
    pub omega2: f64,
    /// Linear coupling D.
    pub d: f64,
    /// Quartic nonlinearity ξ.
    pub xi: f64,
    /// Damping γ (the equations carry −2γẋ).
    pub gamma: f64,
    /// Drive amplitude F, common to both oscillators.
    pub f: f64,
    /// Drive angular frequency Ω.
    pub drive_omega: f64,
}

impl OscParams {
    /// Sets D from a target connectivity K = D / |ω₁² − ω₂²|.
    pub fn with_connectivity(mut self, k: f64) -> Result<Self> {
        let gap = (self.omega1 * self.omega1 - self.omega2 * self.omega2).abs();
        if gap == 0.0 {
            return Err(Error::DegenerateFrequencies(self.omega1));
        }
        self.d = k * gap;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma >= 0.0) {
            return Err(Error::OutOfRange {
                name: "gamma",
                value: self.gamma,
                expected: ">= 0",
            });
        }
        if !(self.f >= 0.0) {
            return Err(Error::OutOfRange {
                name: "F",
                value: self.f,
                expected: ">= 0",
            });
        }
        Ok(())
    }
}

/// K = D / |ω₁² − ω₂²|.
pub fn connectivity(op: &OscParams) -> Result<f64> {
    let gap = (op.omega1 * op.omega1 - op.omega2 * op.omega2).abs();
    if gap == 0.0 {
        return Err(Error::DegenerateFrequencies(op.omega1));
    }
    Ok(op.d / gap)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    AutonomousLinear,
    AutonomousNonlinear,
    DrivenLinear,
    DrivenNonlinear,
}

impl Regime {
    pub const ALL: [Regime; 4] = [
        Regime::AutonomousLinear,
        Regime::AutonomousNonlinear,
        Regime::DrivenLinear,
        Regime::DrivenNonlinear,
    ];

    /// Which of the four cases (F, γ, ξ) falls into, if any.
    pub fn classify(op: &OscParams) -> Result<Regime> {
        let driven = op.f != 0.0;
        let damped = op.gamma != 0.0;
        let nonlinear = op.xi != 0.0;
        match (driven, damped, nonlinear) {
            (false, false, false) => Ok(Regime::AutonomousLinear),
            (false, false, true) => Ok(Regime::AutonomousNonlinear),
            (true, true, false) => Ok(Regime::DrivenLinear),
            (true, true, true) => Ok(Regime::DrivenNonlinear),
            _ => Err(Error::InconsistentRegime(format!(
                "F = {}, gamma = {}, xi = {}: drive and damping must be both on or both off",
                op.f, op.gamma, op.xi
            ))),
        }
    }

    pub fn check(self, op: &OscParams) -> Result<()> {
        let actual = Regime::classify(op)?;
        if actual != self {
            return Err(Error::InconsistentRegime(format!(
                "parameters describe {actual} but {self} was requested"
            )));
        }
        Ok(())
    }

    pub fn is_autonomous(self) -> bool {
        matches!(self, Regime::AutonomousLinear | Regime::AutonomousNonlinear)
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::AutonomousLinear => "autonomous-linear",
            Regime::AutonomousNonlinear => "autonomous-nonlinear",
            Regime::DrivenLinear => "driven-linear",
            Regime::DrivenNonlinear => "driven-nonlinear",
        })
    }
}

impl std::str::FromStr for Regime {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Regime::ALL
            .into_iter()
            .find(|r| r.to_string() == s.trim())
            .ok_or_else(|| format!("unknown regime '{s}'"))
    }
}

/// Whether the spins push back on the oscillators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Feedback {
    #[default]
    MeanField,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HybridState {
    pub t: f64,
    pub x1: f64,
    pub v1: f64,
    pub x2: f64,
    pub v2: f64,
    pub psi: SpinState,
    /// Accumulated propagator, identity at the initial time.
    pub u: Operator4,
    /// Local propagators of spin 1 and spin 2.
    pub u1: Operator2,
    pub u2: Operator2,
}

const PACKED_LEN: usize = 4 + 8 + 32 + 8 + 8;
const PSI: usize = 4;
const U: usize = 12;
const U1: usize = 44;
const U2: usize = 52;

impl HybridState {
    pub fn new(t: f64, x1: f64, v1: f64, x2: f64, v2: f64, psi: SpinState) -> Self {
        HybridState {
            t,
            x1,
            v1,
            x2,
            v2,
            psi,
            u: Operator4::identity(),
            u1: Operator2::identity(),
            u2: Operator2::identity(),
        }
    }

    fn pack(&self) -> Vec<f64> {
        let mut y = vec![0.0; PACKED_LEN];
        y[..4].copy_from_slice(&[self.x1, self.v1, self.x2, self.v2]);
        write_complex(&mut y[PSI..U], self.psi.amplitudes().iter());
        write_complex(&mut y[U..U1], self.u.transpose().iter());
        write_complex(&mut y[U1..U2], self.u1.transpose().iter());
        write_complex(&mut y[U2..], self.u2.transpose().iter());
        y
    }

    fn unpack(t: f64, y: &[f64]) -> Self {
        let psi = read_psi(y);
        HybridState {
            t,
            x1: y[0],
            v1: y[1],
            x2: y[2],
            v2: y[3],
            psi: SpinState::from_raw([psi[0], psi[1], psi[2], psi[3]]),
            u: read_matrix4(&y[U..U1]),
            u1: read_matrix2(&y[U1..U2]),
            u2: read_matrix2(&y[U2..]),
        }
    }

    /// ‖U − U₁ ⊗ U₂‖ (Frobenius).
    pub fn separability_defect(&self) -> f64 {
        (self.u - kron(&self.u1, &self.u2)).norm()
    }
}

// row-major complex layout: re, im interleaved
fn write_complex<'a>(out: &mut [f64], values: impl Iterator<Item = &'a C64>) {
    for (chunk, z) in out.chunks_exact_mut(2).zip(values) {
        chunk[0] = z.re;
        chunk[1] = z.im;
    }
}

fn c(y: &[f64], k: usize) -> C64 {
    C64::new(y[2 * k], y[2 * k + 1])
}

fn read_psi(y: &[f64]) -> Vector4<C64> {
    let s = &y[PSI..U];
    Vector4::new(c(s, 0), c(s, 1), c(s, 2), c(s, 3))
}

fn read_matrix4(s: &[f64]) -> Operator4 {
    Matrix4::from_fn(|r, col| c(s, 4 * r + col))
}

fn read_matrix2(s: &[f64]) -> Operator2 {
    Matrix2::from_fn(|r, col| c(s, 2 * r + col))
}

/// ½ω₀σᶻ + g·x·Ŝᶻ for one spin.
pub fn local_spin_hamiltonian(x: f64, sp: &SpinParams) -> Operator2 {
    pauli(Axis::Z) * C64::from(0.5 * sp.omega0) + sz_nv(sp.alpha) * C64::from(sp.g * x)
}

/// Ĥ_s = ½ω₀(σ₁ᶻ + σ₂ᶻ) + g x₁ Ŝ₁ᶻ + g x₂ Ŝ₂ᶻ.
pub fn build_spin_hamiltonian(x1: f64, x2: f64, sp: &SpinParams) -> Operator4 {
    embed(&local_spin_hamiltonian(x1, sp), Site::One) + embed(&local_spin_hamiltonian(x2, sp), Site::Two)
}

/// Time derivative of every component of a [`HybridState`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HybridRates {
    pub dx1: f64,
    pub dv1: f64,
    pub dx2: f64,
    pub dv2: f64,
    pub dpsi: Vector4<C64>,
    pub du: Operator4,
    pub du1: Operator2,
    pub du2: Operator2,
}

fn feedback_terms(psi: &SpinState, sp: &SpinParams, feedback: Feedback) -> (f64, f64) {
    match feedback {
        Feedback::Off => (0.0, 0.0),
        Feedback::MeanField => {
            let s = sz_nv(sp.alpha);
            (
                sp.g * expectation(psi, &embed(&s, Site::One)).re,
                sp.g * expectation(psi, &embed(&s, Site::Two)).re,
            )
        }
    }
}

fn accelerations(t: f64, x1: f64, v1: f64, x2: f64, v2: f64, op: &OscParams, fb: (f64, f64)) -> (f64, f64) {
    let drive = op.f * (op.drive_omega * t).cos();
    let spring = op.d * (x1 - x2);
    let a1 = -2.0 * op.gamma * v1 - op.xi * x1.powi(3) + drive - op.omega1 * op.omega1 * x1 - spring - fb.0;
    let a2 = -2.0 * op.gamma * v2 - op.xi * x2.powi(3) + drive - op.omega2 * op.omega2 * x2 + spring - fb.1;
    (a1, a2)
}

pub fn derivative(s: &HybridState, op: &OscParams, sp: &SpinParams, feedback: Feedback) -> HybridRates {
    let fb = feedback_terms(&s.psi, sp, feedback);
    let (dv1, dv2) = accelerations(s.t, s.x1, s.v1, s.x2, s.v2, op, fb);
    let h1 = local_spin_hamiltonian(s.x1, sp) * -I;
    let h2 = local_spin_hamiltonian(s.x2, sp) * -I;
    let h = embed(&h1, Site::One) + embed(&h2, Site::Two);
    HybridRates {
        dx1: s.v1,
        dv1,
        dx2: s.v2,
        dv2,
        dpsi: h * s.psi.vector(),
        du: h * s.u,
        du1: h1 * s.u1,
        du2: h2 * s.u2,
    }
}

struct HybridSystem<'a> {
    op: &'a OscParams,
    sp: &'a SpinParams,
    feedback: Feedback,
}

impl OdeSystem for HybridSystem<'_> {
    fn dimension(&self) -> usize {
        PACKED_LEN
    }

    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]) {
        let s = HybridState::unpack(t, y);
        let r = derivative(&s, self.op, self.sp, self.feedback);
        dy[..4].copy_from_slice(&[r.dx1, r.dv1, r.dx2, r.dv2]);
        write_complex(&mut dy[PSI..U], r.dpsi.iter());
        write_complex(&mut dy[U..U1], r.du.transpose().iter());
        write_complex(&mut dy[U1..U2], r.du1.transpose().iter());
        write_complex(&mut dy[U2..], r.du2.transpose().iter());
    }
}

/// H₀ = ½(v₁² + v₂²) + ½ω₁²x₁² + ½ω₂²x₂² + ¼ξ(x₁⁴ + x₂⁴) + ½D(x₁ − x₂)².
pub fn classical_energy(s: &HybridState, op: &OscParams) -> f64 {
    0.5 * (s.v1 * s.v1 + s.v2 * s.v2)
        + 0.5 * op.omega1 * op.omega1 * s.x1 * s.x1
        + 0.5 * op.omega2 * op.omega2 * s.x2 * s.x2
        + 0.25 * op.xi * (s.x1.powi(4) + s.x2.powi(4))
        + 0.5 * op.d * (s.x1 - s.x2).powi(2)
}

/// ⟨H_NV⟩ = ⟨ψ|½ω₀(σ₁ᶻ + σ₂ᶻ)|ψ⟩.
pub fn spin_energy(s: &HybridState, sp: &SpinParams) -> f64 {
    let z = pauli(Axis::Z);
    let h = (embed(&z, Site::One) + embed(&z, Site::Two)) * C64::from(0.5 * sp.omega0);
    expectation(&s.psi, &h).re
}

/// ⟨V⟩ = g x₁⟨Ŝ₁ᶻ⟩ + g x₂⟨Ŝ₂ᶻ⟩.
pub fn interaction_energy(s: &HybridState, sp: &SpinParams) -> f64 {
    let (f1, f2) = feedback_terms(&s.psi, sp, Feedback::MeanField);
    s.x1 * f1 + s.x2 * f2
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Control {
    pub t_end: f64,
    pub dt_out: f64,
    pub tol: f64,
    pub feedback: Feedback,
    pub probes: ProbePair,
}

impl Control {
    pub fn new(t_end: f64, dt_out: f64, tol: f64) -> Self {
        Control {
            t_end,
            dt_out,
            tol,
            feedback: Feedback::MeanField,
            probes: ProbePair::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeRecord {
    pub t: f64,
    pub x1: f64,
    pub v1: f64,
    pub x2: f64,
    pub v2: f64,
    /// ⟨σ₁ˣ⟩, ⟨σ₁ʸ⟩, ⟨σ₁ᶻ⟩
    pub s1: [f64; 3],
    pub s2: [f64; 3],
    pub otoc: f64,
    pub two_point: C64,
    pub h0: f64,
    pub h_nv: f64,
    pub v_int: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    pub records: Vec<TimeRecord>,
}

impl TimeSeries {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn max_abs_otoc(&self) -> f64 {
        self.records.iter().map(|r| r.otoc.abs()).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub steps: StepStats,
    /// Largest |‖ψ‖ − 1| seen at an output time.
    pub max_norm_drift: f64,
    /// Sum of per-step drifts removed by renormalization.
    pub cumulative_renorm_drift: f64,
    pub renormalizations: usize,
    pub max_unitarity_defect: f64,
    pub max_separability_defect: f64,
}

#[derive(Debug, Clone)]
pub struct HybridRun {
    pub series: TimeSeries,
    /// Full state at every output time.
    pub states: Vec<HybridState>,
    /// State at `t_end`, which need not lie on the output grid.
    pub final_state: HybridState,
    pub diagnostics: Diagnostics,
}

pub(crate) fn observe(
    s: &HybridState,
    psi0: &SpinState,
    op: &OscParams,
    sp: &SpinParams,
    probes: &ProbePair,
) -> TimeRecord {
    let spin = |site: Site| [Axis::X, Axis::Y, Axis::Z].map(|a| expectation(&s.psi, &embed(&pauli(a), site)).re);
    let (w, v) = probes.operators();
    let (_, otoc) = otoc_unchecked(&s.u, psi0, &w, &v);
    TimeRecord {
        t: s.t,
        x1: s.x1,
        v1: s.v1,
        x2: s.x2,
        v2: s.v2,
        s1: spin(Site::One),
        s2: spin(Site::Two),
        otoc,
        two_point: two_point_unchecked(&s.u, psi0, &w, &v),
        h0: classical_energy(s, op),
        h_nv: spin_energy(s, sp),
        v_int: interaction_energy(s, sp),
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if !(TOL_RANGE.0..=TOL_RANGE.1).contains(&tol) {
        return Err(Error::OutOfRange {
            name: "tol",
            value: tol,
            expected: "[1e-12, 1e-4]",
        });
    }
    Ok(())
}

/// Renormalizes ψ inside a packed state when its drift exceeds the threshold.
fn renormalize(y: &mut [f64]) -> Option<f64> {
    let norm = y[PSI..U].iter().map(|v| v * v).sum::<f64>().sqrt();
    let drift = (norm - 1.0).abs();
    if drift > RENORM_THRESHOLD {
        y[PSI..U].iter_mut().for_each(|v| *v /= norm);
        Some(drift)
    } else {
        None
    }
}

struct Driver<'a> {
    stepper: Dopri5<'a, HybridSystem<'a>>,
    cumulative: f64,
    renormalizations: usize,
    scratch: Vec<f64>,
}

impl<'a> Driver<'a> {
    fn new(system: &'a HybridSystem<'a>, initial: &HybridState, t_target: f64, tol: f64) -> Self {
        let y0 = initial.pack();
        Driver {
            stepper: Dopri5::new(
                system,
                initial.t,
                &y0,
                t_target,
                Tolerances::over_span(tol, t_target - initial.t),
            ),
            cumulative: 0.0,
            renormalizations: 0,
            scratch: y0,
        }
    }

    fn step(&mut self, t_target: f64) -> Result<f64> {
        let t = self.stepper.step(t_target)?;
        self.scratch.copy_from_slice(self.stepper.y());
        if let Some(drift) = renormalize(&mut self.scratch) {
            self.cumulative += drift;
            self.renormalizations += 1;
            if self.cumulative > MAX_CUMULATIVE_DRIFT {
                return Err(Error::NormDrift {
                    t,
                    drift: self.cumulative,
                });
            }
            self.stepper.set_state(&self.scratch);
        }
        Ok(t)
    }
}

/// Integrates the coupled system and samples it every `dt_out`.
///
/// `regime`, when given, is checked against the oscillator parameters; `None`
/// runs whatever combination of drive, damping and nonlinearity is supplied.
pub fn integrate(
    initial: &HybridState,
    op: &OscParams,
    sp: &SpinParams,
    regime: Option<Regime>,
    control: &Control,
) -> Result<HybridRun> {
    op.validate()?;
    if let Some(r) = regime {
        r.check(op)?;
    }
    check_tol(control.tol)?;
    if !(control.dt_out > 0.0) {
        return Err(Error::OutOfRange {
            name: "dt_out",
            value: control.dt_out,
            expected: "> 0",
        });
    }
    if !(control.t_end >= initial.t) {
        return Err(Error::OutOfRange {
            name: "t_end",
            value: control.t_end,
            expected: ">= initial time",
        });
    }
    let psi0 = initial.psi;
    let n_out = ((control.t_end - initial.t) / control.dt_out + 1e-9).floor() as usize;
    let out_time = |k: usize| initial.t + k as f64 * control.dt_out;

    let system = HybridSystem {
        op,
        sp,
        feedback: control.feedback,
    };
    let mut diag = Diagnostics::default();
    let mut states = Vec::with_capacity(n_out + 1);
    let mut record = |s: HybridState, diag: &mut Diagnostics| {
        diag.max_norm_drift = diag.max_norm_drift.max((s.psi.norm() - 1.0).abs());
        diag.max_unitarity_defect = diag.max_unitarity_defect.max(unitarity_defect(&s.u));
        diag.max_separability_defect = diag.max_separability_defect.max(s.separability_defect());
        states.push(s);
    };
    record(*initial, &mut diag);

    let mut final_state = *initial;
    if control.t_end > initial.t {
        let mut driver = Driver::new(&system, initial, control.t_end, control.tol);
        let mut next = 1;
        let mut buf = vec![0.0; PACKED_LEN];
        while driver.stepper.t() < control.t_end {
            let t_old = driver.stepper.t();
            let t_new = driver.step(control.t_end)?;
            // the continuous extension survives renormalization of the endpoint
            while next <= n_out && out_time(next) <= t_new {
                let tk = out_time(next).max(t_old);
                driver.stepper.dense(tk, &mut buf);
                record(HybridState::unpack(tk, &buf), &mut diag);
                next += 1;
            }
        }
        // the last grid point can be lost to rounding in out_time
        while next <= n_out {
            let tk = out_time(next);
            driver.stepper.dense(tk, &mut buf);
            record(HybridState::unpack(tk, &buf), &mut diag);
            next += 1;
        }
        final_state = HybridState::unpack(driver.stepper.t(), driver.stepper.y());
        diag.steps = driver.stepper.stats();
        diag.cumulative_renorm_drift = driver.cumulative;
        diag.renormalizations = driver.renormalizations;
    }

    let series = TimeSeries {
        records: states
            .iter()
            .map(|s| observe(s, &psi0, op, sp, &control.probes))
            .collect(),
    };
    Ok(HybridRun {
        series,
        states,
        final_state,
        diagnostics: diag,
    })
}

/// Evolves a state to `t_target`, forwards or backwards, without sampling.
pub fn evolve(
    initial: &HybridState,
    op: &OscParams,
    sp: &SpinParams,
    feedback: Feedback,
    t_target: f64,
    tol: f64,
) -> Result<HybridState> {
    op.validate()?;
    check_tol(tol)?;
    if t_target == initial.t {
        return Ok(*initial);
    }
    let system = HybridSystem { op, sp, feedback };
    let mut driver = Driver::new(&system, initial, t_target, tol);
    while (t_target - driver.stepper.t()) * (t_target - initial.t).signum() > 0.0 {
        driver.step(t_target)?;
    }
    Ok(HybridState::unpack(driver.stepper.t(), driver.stepper.y()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyBudget {
    pub t: Vec<f64>,
    pub h_nv: Vec<f64>,
    pub v_int: Vec<f64>,
    pub h0: Vec<f64>,
    /// max − min of each series
    pub depth_h_nv: f64,
    pub depth_v_int: f64,
    pub depth_h0: f64,
    /// max |E(t) − E(0)| / |E(0)| for E = H₀ + ⟨V⟩ + ⟨H_NV⟩; only
    /// meaningful for autonomous runs.
    pub total_relative_drift: f64,
}

fn depth(v: &[f64]) -> f64 {
    let (lo, hi) = v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
        (lo.min(x), hi.max(x))
    });
    if v.is_empty() {
        0.0
    } else {
        hi - lo
    }
}

pub fn energy_budget(series: &TimeSeries) -> EnergyBudget {
    let pick = |f: fn(&TimeRecord) -> f64| series.records.iter().map(f).collect::<Vec<_>>();
    let h_nv = pick(|r| r.h_nv);
    let v_int = pick(|r| r.v_int);
    let h0 = pick(|r| r.h0);
    let total: Vec<f64> = (0..h0.len()).map(|k| h0[k] + v_int[k] + h_nv[k]).collect();
    let total_relative_drift = match total.first() {
        Some(&e0) => {
            let scale = if e0.abs() > 0.0 { e0.abs() } else { 1.0 };
            total.iter().map(|e| (e - e0).abs()).fold(0.0, f64::max) / scale
        }
        None => 0.0,
    };
    EnergyBudget {
        t: pick(|r| r.t),
        depth_h_nv: depth(&h_nv),
        depth_v_int: depth(&v_int),
        depth_h0: depth(&h0),
        h_nv,
        v_int,
        h0,
        total_relative_drift,
    }
}
