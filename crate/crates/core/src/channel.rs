// SPDX-License-Identifier: Apache-2.0

//! Oscillator-mediated quantum channel between the two spins.
//!
//! After eliminating the oscillator at fixed mean occupation n and rescaling
//! by 2n+1, the spins see
//!
//! H_tot = (ω₀R + Ω₀)(σ₁ᶻ + σ₂ᶻ) + Ω_n(σ₁⁺σ₂⁻ + σ₁⁻σ₂⁺)
//!
//! with Ω₀ = g²/(ω₀ − ω), Ω_n = Ω₀/(2n+1) and ω₀R = ω₀/(2n+1). Note the full
//! ω₀σᶻ Zeeman term here, against ½ω₀σᶻ in the hybrid model.

use nalgebra::{SymmetricEigen, Vector4};
use serde::{Deserialize, Serialize};

use crate::correlators::{otoc_product, ProbePair};
use crate::error::{Error, Result};
use crate::spin_algebra::{expm_hermitian, hermiticity_defect, kron, pauli, Axis, Operator4, SpinState, C64};

/// Smallest |ω₀ − ω| accepted before Ω₀ is treated as divergent.
pub const RESONANCE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantumChannelParams {
    pub omega0: f64,
    /// Oscillator frequency ω.
    pub omega: f64,
    pub g: f64,
    /// Mean occupation ⟨a⁺a⟩.
    pub n: f64,
    /// Inverse temperature.
    pub beta: f64,
}

impl QuantumChannelParams {
    pub fn new(omega0: f64, omega: f64, g: f64, n: f64, beta: f64) -> Result<Self> {
        let p = QuantumChannelParams {
            omega0,
            omega,
            g,
            n,
            beta,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("omega0", self.omega0), ("omega", self.omega), ("g", self.g)] {
            if !v.is_finite() {
                return Err(Error::OutOfRange {
                    name,
                    value: v,
                    expected: "finite",
                });
            }
        }
        if !(self.n >= 0.0) || !self.n.is_finite() {
            return Err(Error::OutOfRange {
                name: "n",
                value: self.n,
                expected: "finite n >= 0",
            });
        }
        if !(self.beta >= 0.0) {
            return Err(Error::OutOfRange {
                name: "beta",
                value: self.beta,
                expected: "beta >= 0",
            });
        }
        if (self.omega0 - self.omega).abs() < RESONANCE_TOL {
            return Err(Error::ResonantChannel(self.omega0 - self.omega));
        }
        Ok(())
    }

    /// Ω₀ = g²/(ω₀ − ω)
    pub fn coupling0(&self) -> f64 {
        self.g * self.g / (self.omega0 - self.omega)
    }

    /// Ω_n = Ω₀/(2n+1)
    pub fn coupling_n(&self) -> f64 {
        self.coupling0() / (2.0 * self.n + 1.0)
    }

    /// ω₀R = ω₀/(2n+1)
    pub fn zeeman_r(&self) -> f64 {
        self.omega0 / (2.0 * self.n + 1.0)
    }

    /// Ω₀ + ω₀R, half the outer eigenvalue.
    fn outer(&self) -> f64 {
        self.coupling0() + self.zeeman_r()
    }
}

pub fn h_total(p: &QuantumChannelParams) -> Result<Operator4> {
    p.validate()?;
    let e = C64::from(2.0 * p.outer());
    let w = C64::from(p.coupling_n());
    let z = C64::from(0.0);
    Ok(Operator4::new(
        e, z, z, z, //
        z, z, w, z, //
        z, w, z, z, //
        z, z, z, -e,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Eigenpair {
    pub energy: f64,
    pub vector: SpinState,
}

/// Closed-form eigenpairs in the order |00⟩, Ψ⁺, Ψ⁻ ∝ |10⟩ − |01⟩, |11⟩.
pub fn eigensystem(p: &QuantumChannelParams) -> Result<[Eigenpair; 4]> {
    p.validate()?;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let c = |a: [f64; 4]| SpinState::from_raw(a.map(C64::from));
    let (e, w) = (2.0 * p.outer(), p.coupling_n());
    Ok([
        Eigenpair {
            energy: e,
            vector: c([1.0, 0.0, 0.0, 0.0]),
        },
        Eigenpair {
            energy: w,
            vector: c([0.0, h, h, 0.0]),
        },
        Eigenpair {
            energy: -w,
            vector: c([0.0, -h, h, 0.0]),
        },
        Eigenpair {
            energy: -e,
            vector: c([0.0, 0.0, 0.0, 1.0]),
        },
    ])
}

/// The quoted closed form C(t) = 2 sin²(4Ω_n t) for Φ⁻; see [`otoc_bell_exact`].
pub fn otoc_analytic(p: &QuantumChannelParams, t: f64) -> f64 {
    2.0 * (4.0 * p.coupling_n() * t).sin().powi(2)
}

/// 1 − cos(4Ω_n t), the value the operator chain actually gives on Φ⁻.
pub fn otoc_bell_exact(p: &QuantumChannelParams, t: f64) -> f64 {
    1.0 - (4.0 * p.coupling_n() * t).cos()
}

/// C(t) = 1 − Re⟨σ₁ᶻ(t)σ₂ᶻσ₁ᶻ(t)σ₂ᶻ⟩ with U = exp(−iH_tot t).
pub fn otoc_numeric(p: &QuantumChannelParams, t: f64, psi0: &SpinState) -> Result<f64> {
    let u = expm_hermitian(&h_total(p)?, t)?;
    let (w, v) = ProbePair::default().operators();
    Ok(otoc_product(&u, psi0, &w, &v)?.c)
}

/// Tolerances on density-matrix validity.
pub const TRACE_TOL: f64 = 1e-12;
pub const POSITIVITY_TOL: f64 = 1e-10;

/// Validated two-spin density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix4(Operator4);

impl DensityMatrix4 {
    pub fn new(m: Operator4) -> Result<Self> {
        let dev = hermiticity_defect(&m);
        if dev > 1e-12 {
            return Err(Error::InvalidDensityMatrix(format!("not Hermitian (defect {dev:.3e})")));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr} differs from 1")));
        }
        let min = SymmetricEigen::new(m).eigenvalues.min();
        if min < -POSITIVITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(DensityMatrix4(m))
    }

    pub fn pure(psi: &SpinState) -> Self {
        DensityMatrix4(psi.projector())
    }

    pub fn matrix(&self) -> &Operator4 {
        &self.0
    }

    /// U ρ U†
    pub fn evolve(&self, u: &Operator4) -> Result<Self> {
        Self::new(u * self.0 * u.adjoint())
    }
}

/// Gibbs weights e^{−βEᵢ}/Z in eigensystem order, scaled to avoid overflow.
fn gibbs_weights(p: &QuantumChannelParams, pairs: &[Eigenpair; 4]) -> [f64; 4] {
    let exps = pairs.map(|e| -p.beta * e.energy);
    let m = exps.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let w = exps.map(|x| (x - m).exp());
    let z: f64 = w.iter().sum();
    w.map(|x| x / z)
}

/// ρ = Σ e^{−βEᵢ}/Z |eᵢ⟩⟨eᵢ| in the computational basis.
pub fn thermal_density(p: &QuantumChannelParams) -> Result<DensityMatrix4> {
    let pairs = eigensystem(p)?;
    let w = gibbs_weights(p, &pairs);
    let mut rho = Operator4::zeros();
    for (pair, wk) in pairs.iter().zip(w) {
        rho += pair.vector.projector() * C64::from(wk);
    }
    DensityMatrix4::new(rho)
}

/// The same quantity from a closed form and from an independent route.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossChecked {
    pub closed_form: f64,
    pub numeric: f64,
}

impl CrossChecked {
    pub fn discrepancy(&self) -> f64 {
        (self.closed_form - self.numeric).abs()
    }
}

/// (cosh a·e^{−m}, cosh b·e^{−m}, sinh b·e^{−m}, e^{−m}) with m = max(|a|,|b|).
fn scaled_hyperbolics(a: f64, b: f64) -> (f64, f64, f64, f64) {
    let m = a.abs().max(b.abs());
    let ch = |x: f64| 0.5 * ((x - m).exp() + (-x - m).exp());
    let sh = 0.5 * ((b - m).exp() - (-b - m).exp());
    (ch(a), ch(b), sh, (-m).exp())
}

/// Thermally averaged OTOC
/// C_ρ = 1 − [cosh 2βX + cos(4Ω_n t) cosh βΩ_n] / [cosh 2βX + cosh βΩ_n], X = Ω₀ + ω₀R,
/// alongside 1 − Re Tr{ρ σ₁ᶻ(t)σ₂ᶻσ₁ᶻ(t)σ₂ᶻ}.
pub fn thermal_otoc(p: &QuantumChannelParams, t: f64) -> Result<CrossChecked> {
    let wn = p.coupling_n();
    let (cha, chb, _, _) = scaled_hyperbolics(2.0 * p.beta * p.outer(), p.beta * wn);
    let closed_form = 1.0 - (cha + (4.0 * wn * t).cos() * chb) / (cha + chb);

    let rho = thermal_density(p)?;
    let u = expm_hermitian(&h_total(p)?, t)?;
    let (w, v) = ProbePair::default().operators();
    let wt = u.adjoint() * w * u;
    let chain = wt * v * wt * v;
    let numeric = 1.0 - (rho.matrix() * chain).trace().re;
    Ok(CrossChecked { closed_form, numeric })
}

fn psd_sqrt(m: &Operator4) -> Operator4 {
    let eig = SymmetricEigen::new((m + m.adjoint()) * C64::from(0.5));
    let roots = Vector4::from_fn(|k, _| C64::from(eig.eigenvalues[k].max(0.0).sqrt()));
    let v = &eig.eigenvectors;
    v * Operator4::from_diagonal(&roots) * v.adjoint()
}

/// Wootters concurrence max(0, R₁ − R₂ − R₃ − R₄).
///
/// The Rᵢ are the square roots of the eigenvalues of ρ(σʸ⊗σʸ)ρ*(σʸ⊗σʸ),
/// obtained here as the singular values of √ρ·√ρ̃.
pub fn concurrence(rho: &DensityMatrix4) -> Result<f64> {
    let m = rho.matrix();
    let yy = kron(&pauli(Axis::Y), &pauli(Axis::Y));
    let min = SymmetricEigen::new(*m).eigenvalues.min();
    if min < -POSITIVITY_TOL {
        return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {min:.3e}")));
    }
    let s = psd_sqrt(m);
    let s_tilde = yy * s.conjugate() * yy;
    let mut r: Vec<f64> = (s * s_tilde).singular_values().iter().cloned().collect();
    r.sort_by(|a, b| b.total_cmp(a));
    Ok((r[0] - r[1] - r[2] - r[3]).max(0.0))
}

/// Geometric measure of entanglement (1 − √(1 − C))/2.
pub fn gme(c: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&c) {
        return Err(Error::OutOfRange {
            name: "concurrence",
            value: c,
            expected: "0 <= c <= 1",
        });
    }
    Ok(0.5 * (1.0 - (1.0 - c).sqrt()))
}

/// C_ρ = 2·max(0, (|sinh βΩ_n| − 1)/Z), Z = 2cosh 2βX + 2cosh βΩ_n, alongside
/// the concurrence of the thermal state evolved to t.
pub fn thermal_concurrence(p: &QuantumChannelParams, t: f64) -> Result<CrossChecked> {
    let (cha, chb, sh, em) = scaled_hyperbolics(2.0 * p.beta * p.outer(), p.beta * p.coupling_n());
    let closed_form = 2.0 * ((sh.abs() - em) / (2.0 * cha + 2.0 * chb)).max(0.0);
    let u = expm_hermitian(&h_total(p)?, t)?;
    let numeric = concurrence(&thermal_density(p)?.evolve(&u)?)?;
    Ok(CrossChecked { closed_form, numeric })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitRow {
    pub n: f64,
    pub coupling_n: f64,
    /// max C(t) on Φ⁻ over the sampled window.
    pub otoc_max: f64,
    /// max − min of the thermal OTOC over the same window.
    pub thermal_amplitude: f64,
}

/// Scans occupation numbers to show the correlator signature fading as
/// Ω_n → 0 at fixed observation window [0, t_max].
pub fn classical_limit_report(
    p: &QuantumChannelParams,
    t_max: f64,
    n_grid: &[f64],
    samples: usize,
) -> Result<Vec<LimitRow>> {
    if n_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::OutOfRange {
            name: "n_grid",
            value: f64::NAN,
            expected: "strictly increasing occupation numbers",
        });
    }
    if !(t_max > 0.0) || samples < 2 {
        return Err(Error::OutOfRange {
            name: "t_max",
            value: t_max,
            expected: "t_max > 0 with at least two samples",
        });
    }
    let phi = SpinState::phi_minus();
    n_grid
        .iter()
        .map(|&n| {
            let q = QuantumChannelParams { n, ..*p };
            q.validate()?;
            let mut otoc_max = 0.0f64;
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for k in 0..samples {
                let t = t_max * k as f64 / (samples - 1) as f64;
                otoc_max = otoc_max.max(otoc_numeric(&q, t, &phi)?);
                let c = thermal_otoc(&q, t)?.closed_form;
                lo = lo.min(c);
                hi = hi.max(c);
            }
            Ok(LimitRow {
                n,
                coupling_n: q.coupling_n(),
                otoc_max,
                thermal_amplitude: hi - lo,
            })
        })
        .collect()
}
