// SPDX-License-Identifier: Apache-2.0

//! Reference solution without quantum feedback: the closed-form forced
//! response of the oscillator pair, spin propagation along a prescribed
//! trajectory, and the spin expectations reconstructed from the four basis
//! coefficients.
//!
//! [`forced_response`] evaluates the quoted steady-state formula term for
//! term. It mixes squared and unsquared frequencies and puts γ unsquared
//! under the root, so it is exposed as a formula evaluator only; the linear
//! regime is checked elsewhere against the exact normal-mode solution.

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hybrid::{connectivity, local_spin_hamiltonian, OscParams};
use crate::ode::{Dopri5, Tolerances};
use crate::spin_algebra::{embed, expectation, pauli, Axis, Site, SpinParams, SpinState, C64, I};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyticParams {
    pub osc: OscParams,
    /// Induced oscillation amplitudes entering the nonlinear shifts.
    pub a1: f64,
    pub a2: f64,
}

impl AnalyticParams {
    /// Amplitudes default to the exact linear steady-state response
    /// |X₁|, |X₂| of the damped pair driven by F cos Ωt.
    pub fn new(osc: OscParams) -> Result<Self> {
        let (a1, a2) = linear_response_amplitudes(&osc)?;
        Ok(AnalyticParams { osc, a1, a2 })
    }

    pub fn with_amplitudes(osc: OscParams, a1: f64, a2: f64) -> Self {
        AnalyticParams { osc, a1, a2 }
    }

    /// ν₁,₂ = ω₁² + ω₂² + 2D ∓ ½|ω₂² − ω₁²|√(1 + K²), so ν₁ ≤ ν₂.
    pub fn normal_frequencies(&self) -> Result<(f64, f64)> {
        let o = &self.osc;
        let k = connectivity(o)?;
        let (w1, w2) = (o.omega1 * o.omega1, o.omega2 * o.omega2);
        let base = w1 + w2 + 2.0 * o.d;
        let split = 0.5 * (w2 - w1).abs() * (1.0 + k * k).sqrt();
        Ok((base - split, base + split))
    }

    /// Nonlinear corrections δ₁, δ₂.
    pub fn shifts(&self) -> (f64, f64) {
        let o = &self.osc;
        let amp = self.a1 * self.a1 + self.a2 * self.a2;
        let w = o.omega1 * o.omega1 + o.omega2 * o.omega2;
        let pre = 3.0 * o.xi / 8.0;
        (pre * (2.0 / w).sqrt() * amp, pre * (2.0 / (w + 4.0 * o.d)).sqrt() * amp)
    }
}

/// Steady-state amplitudes of x'' + 2γx' + Kx = F cos Ωt (1, 1)ᵀ.
pub fn linear_response_amplitudes(o: &OscParams) -> Result<(f64, f64)> {
    let diag = |w: f64| {
        C64::new(
            w * w + o.d - o.drive_omega * o.drive_omega,
            2.0 * o.gamma * o.drive_omega,
        )
    };
    let m = Matrix2::new(diag(o.omega1), C64::from(-o.d), C64::from(-o.d), diag(o.omega2));
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    if det.norm() < 1e-14 {
        return Err(Error::VanishingDenominator("linear response at resonance"));
    }
    let f = C64::from(o.f);
    let x1 = (m[(1, 1)] * f - m[(0, 1)] * f) / det;
    let x2 = (m[(0, 0)] * f - m[(1, 0)] * f) / det;
    Ok((x1.norm(), x2.norm()))
}

/// Published steady-state forced response (x₁(t), x₂(t)).
pub fn forced_response(p: &AnalyticParams, t: f64) -> Result<(f64, f64)> {
    let o = &p.osc;
    let (nu1, nu2) = p.normal_frequencies()?;
    let (d1, d2) = p.shifts();
    let denom = 4.0
        * nu1
        * nu2
        * ((nu1 + d1 - o.drive_omega).powi(2) + o.gamma).sqrt()
        * ((nu2 + d2 - o.drive_omega).powi(2) + o.gamma).sqrt();
    if !(denom.abs() > 1e-300) || !denom.is_finite() {
        return Err(Error::VanishingDenominator("forced response"));
    }
    let w = o.drive_omega;
    let drive = o.f * (w * t).cos() / denom;
    Ok((
        drive * (o.omega2 * o.omega2 - w * w + 2.0 * o.d),
        drive * (o.omega1 * o.omega1 - w * w + 2.0 * o.d),
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSeries {
    pub t: Vec<f64>,
    /// C₁..C₄ at each time.
    pub c: Vec<[C64; 4]>,
}

/// ψ(t) = T exp(−i∫Ĥ_s(x₁(τ), x₂(τ))dτ) ψ₀ along a prescribed trajectory,
/// sampled on `t0 + k·dt_out`.
pub fn propagate_nofeedback<F>(
    traj: F,
    sp: &SpinParams,
    psi0: &SpinState,
    t0: f64,
    t_end: f64,
    dt_out: f64,
    tol: f64,
) -> Result<CoefficientSeries>
where
    F: Fn(f64) -> (f64, f64),
{
    if !(dt_out > 0.0) || !(t_end >= t0) {
        return Err(Error::OutOfRange {
            name: "dt_out / t_end",
            value: dt_out,
            expected: "dt_out > 0 and t_end >= t0",
        });
    }
    let rhs = |t: f64, y: &[f64], dy: &mut [f64]| {
        let (x1, x2) = traj(t);
        let h = embed(&local_spin_hamiltonian(x1, sp), Site::One) + embed(&local_spin_hamiltonian(x2, sp), Site::Two);
        let psi = nalgebra::Vector4::from_fn(|k, _| C64::new(y[2 * k], y[2 * k + 1]));
        let d = h * psi * -I;
        for k in 0..4 {
            dy[2 * k] = d[k].re;
            dy[2 * k + 1] = d[k].im;
        }
    };
    let system = (8usize, rhs);
    let amps = psi0.amplitudes();
    let y0: Vec<f64> = amps.iter().flat_map(|z| [z.re, z.im]).collect();
    let unpack = |y: &[f64]| std::array::from_fn(|k| C64::new(y[2 * k], y[2 * k + 1]));

    let n_out = ((t_end - t0) / dt_out + 1e-9).floor() as usize;
    let mut out = CoefficientSeries {
        t: vec![t0],
        c: vec![amps],
    };
    if n_out == 0 {
        return Ok(out);
    }
    let mut stepper = Dopri5::new(&system, t0, &y0, t_end, Tolerances::over_span(tol, t_end - t0));
    let mut buf = [0.0; 8];
    let mut next = 1;
    while stepper.t() < t_end {
        let t_old = stepper.t();
        let t_new = stepper.step(t_end)?;
        while next <= n_out && t0 + next as f64 * dt_out <= t_new {
            let tk = (t0 + next as f64 * dt_out).max(t_old);
            stepper.dense(tk, &mut buf);
            out.t.push(tk);
            out.c.push(unpack(&buf));
            next += 1;
        }
    }
    while next <= n_out {
        let tk = t0 + next as f64 * dt_out;
        stepper.dense(tk, &mut buf);
        out.t.push(tk);
        out.c.push(unpack(&buf));
        next += 1;
    }
    Ok(out)
}

/// Six spin projections in the order σ₁ˣ, σ₁ʸ, σ₁ᶻ, σ₂ˣ, σ₂ʸ, σ₂ᶻ.
pub type SpinProjections = [f64; 6];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpinReconstruction {
    /// The quoted coefficient formulas, evaluated verbatim.
    pub formula: SpinProjections,
    /// Direct ⟨ψ|σ|ψ⟩ in the {|00⟩,|01⟩,|10⟩,|11⟩} basis with spin 1 on the left.
    pub direct: SpinProjections,
    pub max_disagreement: f64,
}

/// Reconstructs spin projections from C₁..C₄, returning the quoted
/// formulas alongside direct expectations.
///
/// The quoted formulas assign sites the other way round from the basis
/// ordering (and flip the sign of ⟨σ₁ʸ⟩), so the two sets generally differ;
/// the disagreement is reported rather than repaired.
pub fn spin_expectations_from_coefficients(c: [C64; 4]) -> Result<SpinReconstruction> {
    let norm: f64 = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-8 {
        return Err(Error::NotNormalized { norm });
    }
    let [c1, c2, c3, c4] = c;
    let a = c1.conj() * c2 + c3.conj() * c4;
    let b = c1 * c3.conj() + c2 * c4.conj();
    let formula = [
        2.0 * a.re,
        -2.0 * a.im,
        c1.norm_sqr() + c3.norm_sqr() - c2.norm_sqr() - c4.norm_sqr(),
        2.0 * b.re,
        -2.0 * b.im,
        c1.norm_sqr() + c2.norm_sqr() - c3.norm_sqr() - c4.norm_sqr(),
    ];
    let psi = SpinState::from_raw(c);
    let mut direct = [0.0; 6];
    for (i, site) in [Site::One, Site::Two].into_iter().enumerate() {
        for (j, axis) in [Axis::X, Axis::Y, Axis::Z].into_iter().enumerate() {
            direct[3 * i + j] = expectation(&psi, &embed(&pauli(axis), site)).re;
        }
    }
    let max_disagreement = formula
        .iter()
        .zip(&direct)
        .map(|(p, d)| (p - d).abs())
        .fold(0.0, f64::max);
    Ok(SpinReconstruction {
        formula,
        direct,
        max_disagreement,
    })
}
