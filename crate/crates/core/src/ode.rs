// SPDX-License-Identifier: Apache-2.0

//! Dormand–Prince 5(4) integrator with PI step-size control and the
//! standard 4th-order continuous extension.
//!
//! The stepper is deliberately low level: callers drive it one accepted step
//! at a time, may interpolate inside the last step, and may project the state
//! (e.g. renormalize a wavefunction) between steps.

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// b5 − b4
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

// dense output
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// Right-hand side y' = f(t, y).
pub trait OdeSystem {
    fn dimension(&self) -> usize;
    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]);
}

impl<F> OdeSystem for (usize, F)
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    fn dimension(&self) -> usize {
        self.0
    }

    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]) {
        (self.1)(t, y, dy)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
    /// When set, the local error allowed in a step of size h is scaled by
    /// |h| / span (error per unit step), so that the errors committed over
    /// the whole span add up to roughly the tolerance.
    pub per_unit_span: Option<f64>,
}

impl Tolerances {
    pub fn uniform(tol: f64) -> Self {
        Tolerances {
            rtol: tol,
            atol: tol,
            per_unit_span: None,
        }
    }

    pub fn over_span(tol: f64, span: f64) -> Self {
        Tolerances {
            per_unit_span: Some(span.abs()),
            ..Self::uniform(tol)
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

pub struct Dopri5<'a, S: OdeSystem> {
    system: &'a S,
    tol: Tolerances,
    max_steps: usize,
    t: f64,
    y: Vec<f64>,
    h: f64,
    direction: f64,
    k: [Vec<f64>; 7],
    y_stage: Vec<f64>,
    y_new: Vec<f64>,
    // continuous extension of the last accepted step
    t_old: f64,
    h_old: f64,
    cont: [Vec<f64>; 5],
    facold: f64,
    last_rejected: bool,
    stats: StepStats,
}

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;
const BETA: f64 = 0.04;
const EXPO1: f64 = 0.2 - BETA * 0.75;

impl<'a, S: OdeSystem> Dopri5<'a, S> {
    /// Starts at (t0, y0) heading towards `t_target` (only its direction is used).
    pub fn new(system: &'a S, t0: f64, y0: &[f64], t_target: f64, tol: Tolerances) -> Self {
        let n = system.dimension();
        assert_eq!(y0.len(), n, "initial state has wrong dimension");
        let direction = if t_target >= t0 { 1.0 } else { -1.0 };
        let zeros = || vec![0.0; n];
        let mut stepper = Dopri5 {
            system,
            tol,
            max_steps: 10_000_000,
            t: t0,
            y: y0.to_vec(),
            h: 0.0,
            direction,
            k: std::array::from_fn(|_| zeros()),
            y_stage: zeros(),
            y_new: zeros(),
            t_old: t0,
            h_old: 0.0,
            cont: std::array::from_fn(|_| zeros()),
            facold: 1e-4,
            last_rejected: false,
            stats: StepStats::default(),
        };
        stepper.system.rhs(t0, &stepper.y, &mut stepper.k[0]);
        stepper.stats.evaluations += 1;
        stepper.h = stepper.initial_step((t_target - t0).abs());
        stepper
    }

    pub fn with_max_steps(mut self, max_steps: usize) -> Self {
        self.max_steps = max_steps;
        self
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn stats(&self) -> StepStats {
        self.stats
    }

    // Hairer–Wanner starting step heuristic.
    fn initial_step(&mut self, span: f64) -> f64 {
        let n = self.y.len() as f64;
        let (mut dnf, mut dny) = (0.0, 0.0);
        for i in 0..self.y.len() {
            let sk = self.tol.atol + self.tol.rtol * self.y[i].abs();
            dnf += (self.k[0][i] / sk).powi(2);
            dny += (self.y[i] / sk).powi(2);
        }
        let mut h = if dnf <= 1e-10 || dny <= 1e-10 {
            1e-6
        } else {
            (dny / dnf).sqrt() * 0.01
        };
        if span > 0.0 {
            h = h.min(span);
        }
        for i in 0..self.y.len() {
            self.y_stage[i] = self.y[i] + self.direction * h * self.k[0][i];
        }
        let mut f1 = vec![0.0; self.y.len()];
        self.system.rhs(self.t + self.direction * h, &self.y_stage, &mut f1);
        self.stats.evaluations += 1;
        let der2: f64 = self
            .y
            .iter()
            .zip(&f1)
            .zip(&self.k[0])
            .map(|((y, f), k)| ((f - k) / (self.tol.atol + self.tol.rtol * y.abs())).powi(2))
            .sum();
        let der2 = (der2 / n).sqrt() / h;
        let der12 = der2.max((dnf / n).sqrt());
        let h1 = if der12 <= 1e-15 {
            (h * 1e-3).max(1e-6)
        } else {
            (0.01 / der12).powf(0.2)
        };
        let mut h0 = (100.0 * h).min(h1);
        if span > 0.0 {
            h0 = h0.min(span);
        }
        h0
    }

    /// Takes one accepted step without passing `t_bound`. Returns the new time.
    pub fn step(&mut self, t_bound: f64) -> Result<f64> {
        let n = self.y.len();
        loop {
            if self.stats.accepted + self.stats.rejected >= self.max_steps {
                return Err(Error::TooManySteps {
                    steps: self.max_steps,
                    t: self.t,
                });
            }
            let remaining = (t_bound - self.t) * self.direction;
            let mut h_abs = self.h.abs();
            let last = h_abs >= remaining;
            if last {
                h_abs = remaining;
            }
            if h_abs <= 16.0 * f64::EPSILON * self.t.abs().max(1.0) {
                return Err(Error::StepSizeUnderflow { t: self.t });
            }
            let h = h_abs * self.direction;
            let t = self.t;
            let sys = self.system;
            let (y, k, ys) = (&self.y, &mut self.k, &mut self.y_stage);

            for i in 0..n {
                ys[i] = y[i] + h * A21 * k[0][i];
            }
            sys.rhs(t + C2 * h, ys, &mut k[1]);
            for i in 0..n {
                ys[i] = y[i] + h * (A31 * k[0][i] + A32 * k[1][i]);
            }
            sys.rhs(t + C3 * h, ys, &mut k[2]);
            for i in 0..n {
                ys[i] = y[i] + h * (A41 * k[0][i] + A42 * k[1][i] + A43 * k[2][i]);
            }
            sys.rhs(t + C4 * h, ys, &mut k[3]);
            for i in 0..n {
                ys[i] = y[i] + h * (A51 * k[0][i] + A52 * k[1][i] + A53 * k[2][i] + A54 * k[3][i]);
            }
            sys.rhs(t + C5 * h, ys, &mut k[4]);
            for i in 0..n {
                ys[i] = y[i] + h * (A61 * k[0][i] + A62 * k[1][i] + A63 * k[2][i] + A64 * k[3][i] + A65 * k[4][i]);
            }
            sys.rhs(t + h, ys, &mut k[5]);
            let y_new = &mut self.y_new;
            for i in 0..n {
                y_new[i] = y[i] + h * (A71 * k[0][i] + A73 * k[2][i] + A74 * k[3][i] + A75 * k[4][i] + A76 * k[5][i]);
            }
            sys.rhs(t + h, y_new, &mut k[6]);
            self.stats.evaluations += 6;

            let mut err = 0.0;
            for i in 0..n {
                let e = h * (E1 * k[0][i] + E3 * k[2][i] + E4 * k[3][i] + E5 * k[4][i] + E6 * k[5][i] + E7 * k[6][i]);
                let sk = self.tol.atol + self.tol.rtol * y[i].abs().max(y_new[i].abs());
                err += (e / sk).powi(2);
            }
            let mut err = (err / n as f64).sqrt();
            if let Some(span) = self.tol.per_unit_span {
                err *= span / h_abs;
            }

            let fac11 = err.powf(EXPO1);
            if err <= 1.0 {
                let fac = (fac11 / self.facold.powf(BETA) / SAFETY).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
                let mut h_new = h_abs / fac;
                if self.last_rejected {
                    h_new = h_new.min(h_abs);
                }
                self.facold = err.max(1e-4);
                self.last_rejected = false;
                self.stats.accepted += 1;

                for i in 0..n {
                    let dy = y_new[i] - y[i];
                    let bspl = h * k[0][i] - dy;
                    self.cont[0][i] = y[i];
                    self.cont[1][i] = dy;
                    self.cont[2][i] = bspl;
                    self.cont[3][i] = dy - h * k[6][i] - bspl;
                    self.cont[4][i] =
                        h * (D1 * k[0][i] + D3 * k[2][i] + D4 * k[3][i] + D5 * k[4][i] + D6 * k[5][i] + D7 * k[6][i]);
                }
                self.t_old = t;
                self.h_old = h;
                std::mem::swap(&mut self.y, &mut self.y_new);
                self.k.swap(0, 6);
                self.t = if last { t_bound } else { t + h };
                self.h = h_new;
                return Ok(self.t);
            }
            self.stats.rejected += 1;
            self.last_rejected = true;
            self.h = h_abs / (1.0 / FAC_MIN).min(fac11 / SAFETY);
        }
    }

    /// Evaluates the continuous extension of the last accepted step at `t`.
    pub fn dense(&self, t: f64, out: &mut [f64]) {
        let theta = if self.h_old == 0.0 {
            1.0
        } else {
            (t - self.t_old) / self.h_old
        };
        let theta1 = 1.0 - theta;
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.cont[0][i]
                + theta
                    * (self.cont[1][i]
                        + theta1 * (self.cont[2][i] + theta * (self.cont[3][i] + theta1 * self.cont[4][i])));
        }
    }

    /// Replaces the current state (after a projection) and refreshes the
    /// first-stage derivative.
    pub fn set_state(&mut self, y: &[f64]) {
        self.y.copy_from_slice(y);
        self.system.rhs(self.t, &self.y, &mut self.k[0]);
        self.stats.evaluations += 1;
    }

    /// Integrates straight to `t_end` and returns the final state.
    pub fn run_to(&mut self, t_end: f64) -> Result<Vec<f64>> {
        while (t_end - self.t) * self.direction > 0.0 {
            self.step(t_end)?;
        }
        Ok(self.y.clone())
    }
}
