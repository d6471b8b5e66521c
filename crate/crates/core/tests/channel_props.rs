// SPDX-License-Identifier: Apache-2.0

use nvscramble::channel::{
    concurrence, eigensystem, h_total, otoc_bell_exact, otoc_numeric, thermal_concurrence, thermal_density,
    thermal_otoc, DensityMatrix4, QuantumChannelParams,
};
use nvscramble::spin_algebra::{hermiticity_defect, SpinState, C64};
use proptest::prelude::*;

fn params() -> impl Strategy<Value = QuantumChannelParams> {
    (
        0.5f64..5.0,
        0.2f64..3.0,
        prop::bool::ANY,
        0.1f64..2.0,
        0.0f64..1000.0,
        0.0f64..5.0,
    )
        .prop_map(|(omega0, detuning, above, g, n, beta)| {
            let omega = if above { omega0 + detuning } else { omega0 - detuning };
            QuantumChannelParams::new(omega0, omega, g, n.floor(), beta).unwrap()
        })
}

fn c64() -> impl Strategy<Value = C64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| C64::new(re, im))
}

fn state() -> impl Strategy<Value = SpinState> {
    prop::array::uniform4(c64())
        .prop_filter("nonzero", |a| a.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-3)
        .prop_map(|a| SpinState::normalized(a).unwrap())
}

proptest! {
    #[test]
    fn eigenpairs_diagonalize_the_hamiltonian(p in params()) {
        let h = h_total(&p).unwrap();
        prop_assert!(hermiticity_defect(&h) < 1e-14);
        for e in eigensystem(&p).unwrap() {
            let v = e.vector.vector();
            prop_assert!((h * v - v * C64::from(e.energy)).norm() < 1e-12 * (1.0 + e.energy.abs()));
        }
    }

    #[test]
    fn bell_otoc_oscillates_at_four_omega_n(p in params(), t in 0.0f64..20.0) {
        let expected = 1.0 - (4.0 * p.coupling_n() * t).cos();
        let numeric = otoc_numeric(&p, t, &SpinState::phi_minus()).unwrap();
        prop_assert!((numeric - expected).abs() < 1e-10);
        prop_assert!((otoc_bell_exact(&p, t) - expected).abs() < 1e-12);
    }

    #[test]
    fn thermal_state_is_a_density_matrix(p in params()) {
        let rho = thermal_density(&p).unwrap();
        let m = rho.matrix();
        prop_assert!((m.trace() - C64::from(1.0)).norm() < 1e-12);
        prop_assert!(DensityMatrix4::new(*m).is_ok());
    }

    #[test]
    fn thermal_closed_forms_match_traces(p in params(), t in 0.0f64..20.0) {
        let o = thermal_otoc(&p, t).unwrap();
        prop_assert!(o.discrepancy() < 1e-10);
        prop_assert!((-1e-12..=2.0 + 1e-12).contains(&o.closed_form));
        let c = thermal_concurrence(&p, t).unwrap();
        prop_assert!(c.discrepancy() < 1e-10);
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&c.closed_form));
    }

    #[test]
    fn pure_state_concurrence_is_twice_the_determinant(psi in state()) {
        let [a, b, c, d] = psi.amplitudes();
        let expected = 2.0 * (a * d - b * c).norm();
        let got = concurrence(&DensityMatrix4::pure(&psi)).unwrap();
        prop_assert!((got - expected).abs() < 1e-10, "{got} vs {expected}");
    }

    #[test]
    fn product_states_are_unentangled(a in prop::array::uniform2(c64()), b in prop::array::uniform2(c64())) {
        prop_assume!(a.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-3);
        prop_assume!(b.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-3);
        let psi = SpinState::normalized([a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]]).unwrap();
        prop_assert!(concurrence(&DensityMatrix4::pure(&psi)).unwrap() < 1e-10);
    }
}
