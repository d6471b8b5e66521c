// SPDX-License-Identifier: Apache-2.0

//! Out-of-time-ordered and two-point correlators evaluated from an
//! accumulated propagator U and an initial two-spin state.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spin_algebra::{embed, expectation, pauli, unitarity_defect, Axis, Operator4, Site, SpinState, C64};

/// Maximum ‖U†U − I‖ accepted by the checked entry points.
pub const UNITARITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelatorRecord {
    pub t: f64,
    /// ⟨W(t)†V†W(t)V⟩
    pub f: C64,
    /// 1 − Re F
    pub c: f64,
    /// ⟨W(t)V⟩
    pub g2: C64,
}

/// Local probe pair: W on spin 1, V on spin 2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbePair {
    pub w: Axis,
    pub v: Axis,
}

impl Default for ProbePair {
    fn default() -> Self {
        ProbePair { w: Axis::Z, v: Axis::Z }
    }
}

impl ProbePair {
    pub fn operators(&self) -> (Operator4, Operator4) {
        (embed(&pauli(self.w), Site::One), embed(&pauli(self.v), Site::Two))
    }
}

fn check_unitary(u: &Operator4) -> Result<()> {
    let defect = unitarity_defect(u);
    if defect > UNITARITY_TOL {
        return Err(Error::NotUnitary { defect });
    }
    Ok(())
}

/// Heisenberg-picture W(t) = U†WU.
pub fn heisenberg(u: &Operator4, w: &Operator4) -> Operator4 {
    u.adjoint() * w * u
}

pub(crate) fn otoc_unchecked(u: &Operator4, psi0: &SpinState, w: &Operator4, v: &Operator4) -> (C64, f64) {
    let wt = heisenberg(u, w);
    let chain = wt.adjoint() * v.adjoint() * wt * v;
    let f = expectation(psi0, &chain);
    (f, 1.0 - f.re)
}

pub(crate) fn two_point_unchecked(u: &Operator4, psi0: &SpinState, w: &Operator4, v: &Operator4) -> C64 {
    expectation(psi0, &(heisenberg(u, w) * v))
}

/// Product form: F = ⟨ψ₀|W(t)†V†W(t)V|ψ₀⟩, C = 1 − Re F.
pub fn otoc_product(u: &Operator4, psi0: &SpinState, w: &Operator4, v: &Operator4) -> Result<CorrelatorRecord> {
    check_unitary(u)?;
    let (f, c) = otoc_unchecked(u, psi0, w, v);
    Ok(CorrelatorRecord {
        t: f64::NAN,
        f,
        c,
        g2: two_point_unchecked(u, psi0, w, v),
    })
}

/// Commutator form: ½⟨[W(t),V]†[W(t),V]⟩.
pub fn otoc_commutator(u: &Operator4, psi0: &SpinState, w: &Operator4, v: &Operator4) -> Result<f64> {
    check_unitary(u)?;
    let wt = heisenberg(u, w);
    let comm = wt * v - v * wt;
    Ok(0.5 * expectation(psi0, &(comm.adjoint() * comm)).re)
}

/// Time-ordered two-point correlator ⟨ψ₀|W(t)V|ψ₀⟩.
pub fn two_point(u: &Operator4, psi0: &SpinState, w: &Operator4, v: &Operator4) -> Result<C64> {
    check_unitary(u)?;
    Ok(two_point_unchecked(u, psi0, w, v))
}
