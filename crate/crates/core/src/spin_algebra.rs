// SPDX-License-Identifier: Apache-2.0

//! Dense one- and two-qubit operator algebra.
//!
//! The two-spin basis is ordered {|00⟩, |01⟩, |10⟩, |11⟩} with spin 1 as the
//! left tensor factor, and |0⟩ is the σᶻ = +1 state. ħ = 1 everywhere.

use nalgebra::{Matrix2, Matrix4, SymmetricEigen, Vector4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type Operator2 = Matrix2<C64>;
pub type Operator4 = Matrix4<C64>;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const I: C64 = C64::new(0.0, 1.0);

/// Tolerance on ‖H − H†‖ accepted by [`expm_hermitian`].
pub const HERMITIAN_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
    Plus,
    Minus,
}

impl std::str::FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "x" => Ok(Axis::X),
            "y" => Ok(Axis::Y),
            "z" => Ok(Axis::Z),
            "plus" | "+" => Ok(Axis::Plus),
            "minus" | "-" => Ok(Axis::Minus),
            other => Err(format!("unknown Pauli axis '{other}'")),
        }
    }
}

impl std::fmt::Display for Axis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
            Axis::Plus => "plus",
            Axis::Minus => "minus",
        })
    }
}

/// Pauli matrices with σ± = ½(σˣ ± iσʸ), so σ⁺ = |0⟩⟨1|.
pub fn pauli(axis: Axis) -> Operator2 {
    match axis {
        Axis::X => Matrix2::new(ZERO, ONE, ONE, ZERO),
        Axis::Y => Matrix2::new(ZERO, -I, I, ZERO),
        Axis::Z => Matrix2::new(ONE, ZERO, ZERO, -ONE),
        Axis::Plus => Matrix2::new(ZERO, ONE, ZERO, ZERO),
        Axis::Minus => Matrix2::new(ZERO, ZERO, ONE, ZERO),
    }
}

/// Spin projection of the NV center in its dressed eigenbasis,
/// ½(cos α σᶻ + sin α (σ⁺ + σ⁻)).
pub fn sz_nv(alpha: f64) -> Operator2 {
    let (s, c) = alpha.sin_cos();
    (pauli(Axis::Z) * C64::from(c) + (pauli(Axis::Plus) + pauli(Axis::Minus)) * C64::from(s)) * C64::from(0.5)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Site {
    One,
    Two,
}

impl TryFrom<usize> for Site {
    type Error = Error;

    fn try_from(index: usize) -> Result<Self> {
        match index {
            1 => Ok(Site::One),
            2 => Ok(Site::Two),
            other => Err(Error::InvalidSite(other)),
        }
    }
}

/// Kronecker product a ⊗ b.
pub fn kron(a: &Operator2, b: &Operator2) -> Operator4 {
    Operator4::from_fn(|r, c| a[(r / 2, c / 2)] * b[(r % 2, c % 2)])
}

/// op ⊗ I for site 1, I ⊗ op for site 2.
pub fn embed(op: &Operator2, site: Site) -> Operator4 {
    let id = Operator2::identity();
    match site {
        Site::One => kron(op, &id),
        Site::Two => kron(&id, op),
    }
}

/// [`embed`] with a numeric site index.
pub fn embed_at(op: &Operator2, site: usize) -> Result<Operator4> {
    Ok(embed(op, Site::try_from(site)?))
}

pub fn commutator(a: &Operator4, b: &Operator4) -> Operator4 {
    a * b - b * a
}

/// Largest elementwise |A − A†|.
pub fn hermiticity_defect(a: &Operator4) -> f64 {
    (a - a.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Frobenius norm of U†U − I.
pub fn unitarity_defect(u: &Operator4) -> f64 {
    (u.adjoint() * u - Operator4::identity()).norm()
}

pub fn unitarity_defect2(u: &Operator2) -> f64 {
    (u.adjoint() * u - Operator2::identity()).norm()
}

/// Two-spin pure state, amplitudes C₁..C₄ over {|00⟩,|01⟩,|10⟩,|11⟩}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpinState {
    amplitudes: [C64; 4],
}

impl SpinState {
    /// Accepts amplitudes whose norm is 1 within 1e-10.
    pub fn new(amplitudes: [C64; 4]) -> Result<Self> {
        let state = SpinState { amplitudes };
        let norm = state.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized { norm });
        }
        Ok(state)
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amplitudes: [C64; 4]) -> Result<Self> {
        let mut state = SpinState { amplitudes };
        let norm = state.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::NotNormalized { norm });
        }
        state.scale(1.0 / norm);
        Ok(state)
    }

    /// Computational basis state from its index (0 = |00⟩ … 3 = |11⟩).
    pub fn basis(index: usize) -> Self {
        let mut amplitudes = [ZERO; 4];
        amplitudes[index] = ONE;
        SpinState { amplitudes }
    }

    /// |01⟩, the default initial state.
    pub fn up_down() -> Self {
        Self::basis(1)
    }

    /// Φ⁻ = (|01⟩ − |10⟩)/√2.
    pub fn phi_minus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        SpinState {
            amplitudes: [ZERO, C64::from(h), C64::from(-h), ZERO],
        }
    }

    pub(crate) fn from_raw(amplitudes: [C64; 4]) -> Self {
        SpinState { amplitudes }
    }

    pub fn amplitudes(&self) -> [C64; 4] {
        self.amplitudes
    }

    pub fn vector(&self) -> Vector4<C64> {
        Vector4::from(self.amplitudes)
    }

    pub fn from_vector(v: &Vector4<C64>) -> Self {
        SpinState {
            amplitudes: [v[0], v[1], v[2], v[3]],
        }
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub(crate) fn scale(&mut self, factor: f64) {
        for c in &mut self.amplitudes {
            *c *= factor;
        }
    }

    pub fn apply(&self, op: &Operator4) -> Self {
        Self::from_vector(&(op * self.vector()))
    }

    /// |ψ⟩⟨ψ|
    pub fn projector(&self) -> Operator4 {
        let v = self.vector();
        v * v.adjoint()
    }
}

/// ⟨ψ|op|ψ⟩
pub fn expectation(state: &SpinState, op: &Operator4) -> C64 {
    let v = state.vector();
    v.dotc(&(op * v))
}

/// exp(−i·h·t) for Hermitian h, via its spectral decomposition.
pub fn expm_hermitian(h: &Operator4, t: f64) -> Result<Operator4> {
    let deviation = hermiticity_defect(h);
    if deviation > HERMITIAN_TOL * h.norm().max(1.0) {
        return Err(Error::NotHermitian { deviation });
    }
    let sym = (h + h.adjoint()) * C64::from(0.5);
    let eig = SymmetricEigen::new(sym);
    let phases = Vector4::from_fn(|k, _| C64::from_polar(1.0, -eig.eigenvalues[k] * t));
    let v = &eig.eigenvectors;
    Ok(v * Operator4::from_diagonal(&phases) * v.adjoint())
}

/// exp(−i·h·t) for a 2×2 Hermitian h.
pub fn expm_hermitian2(h: &Operator2, t: f64) -> Operator2 {
    let sym = (h + h.adjoint()) * C64::from(0.5);
    let eig = SymmetricEigen::new(sym);
    let phases = nalgebra::Vector2::from_fn(|k, _| C64::from_polar(1.0, -eig.eigenvalues[k] * t));
    let v = &eig.eigenvectors;
    v * Operator2::from_diagonal(&phases) * v.adjoint()
}

/// Spin parameters of the two NV centers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpinParams {
    pub omega0: f64,
    pub g: f64,
    /// Mixing angle, tan α = −ω_R/δ.
    pub alpha: f64,
}

impl SpinParams {
    pub fn new(omega0: f64, g: f64, alpha: f64) -> Self {
        SpinParams { omega0, g, alpha }
    }

    /// Derives ω₀ = √(ω_R² + δ²) and α from the Rabi frequency and detuning.
    pub fn from_rabi(omega_r: f64, delta: f64, g: f64) -> Result<Self> {
        if omega_r == 0.0 && delta == 0.0 {
            return Err(Error::OutOfRange {
                name: "omega_R, delta",
                value: 0.0,
                expected: "not both zero",
            });
        }
        Ok(SpinParams {
            omega0: omega_r.hypot(delta),
            g,
            alpha: (-omega_r).atan2(delta),
        })
    }
}
