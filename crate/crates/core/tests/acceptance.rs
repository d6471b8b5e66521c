// SPDX-License-Identifier: Apache-2.0

//! Acceptance checks. Each criterion prints one PASS/FAIL line; the process
//! exits non-zero when any criterion fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use nalgebra::{Matrix4, SymmetricEigen};
use nvscramble::channel::{
    concurrence, eigensystem, gme, h_total, otoc_analytic, otoc_numeric, thermal_concurrence, thermal_otoc,
    DensityMatrix4, QuantumChannelParams,
};
use nvscramble::correlators::{otoc_commutator, otoc_product};
use nvscramble::hybrid::{energy_budget, evolve, integrate, Control, HybridRun, HybridState};
use nvscramble::runner::{run_scenario, Payload, ScenarioConfig, HYBRID_DT_OUT};
use nvscramble::spin_algebra::{embed, expm_hermitian, pauli, Axis, Operator4, Site, SpinState, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const HYBRID: [&str; 8] = [
    "fig2",
    "fig3",
    "fig4",
    "an-strong",
    "dl-weak",
    "dl-strong",
    "fig5",
    "fig6",
];
const AUTONOMOUS: [&str; 4] = ["fig2", "fig3", "fig4", "an-strong"];

struct Outcome {
    id: u8,
    title: &'static str,
    pass: bool,
    detail: String,
}

fn hybrid(name: &str, psi: SpinState, tol: f64) -> (HybridRun, Duration) {
    let cfg = ScenarioConfig::preset(name).unwrap();
    let op = cfg.osc.params().unwrap();
    let regime = cfg.run.regime.resolve(&op).unwrap();
    let i = &cfg.initial;
    let init = HybridState::new(0.0, i.x1, i.v1, i.x2, i.v2, psi);
    let start = Instant::now();
    let run = integrate(
        &init,
        &op,
        &cfg.spin,
        regime,
        &Control::new(cfg.run.t_end, HYBRID_DT_OUT, tol),
    )
    .unwrap();
    (run, start.elapsed())
}

struct HybridSummary {
    name: &'static str,
    psi: &'static str,
    max_c: f64,
    separability: f64,
    norm_drift: f64,
    unitarity: f64,
    energy_drift: f64,
    wall: Duration,
}

fn hybrid_summaries() -> Vec<HybridSummary> {
    let jobs: Vec<(&'static str, &'static str)> = HYBRID.iter().flat_map(|&n| [(n, "|01>"), (n, "Phi-")]).collect();
    jobs.par_iter()
        .map(|&(name, label)| {
            let psi = if label == "Phi-" {
                SpinState::phi_minus()
            } else {
                SpinState::up_down()
            };
            let (run, wall) = hybrid(name, psi, 1e-9);
            let stride = (run.states.len() - 1) / 50;
            let separability = (1..=50)
                .map(|k| run.states[k * stride].separability_defect())
                .fold(0.0, f64::max);
            HybridSummary {
                name,
                psi: label,
                max_c: run.series.max_abs_otoc(),
                separability,
                norm_drift: run.diagnostics.max_norm_drift,
                unitarity: run.diagnostics.max_unitarity_defect,
                energy_drift: energy_budget(&run.series).total_relative_drift,
                wall,
            }
        })
        .collect()
}

fn worst(runs: &[HybridSummary], f: impl Fn(&HybridSummary) -> f64) -> (f64, &HybridSummary) {
    runs.iter()
        .map(|r| (f(r), r))
        .fold((f64::NEG_INFINITY, &runs[0]), |a, b| if b.0 > a.0 { b } else { a })
}

fn criterion1(runs: &[HybridSummary]) -> Outcome {
    let (c, r) = worst(runs, |r| r.max_c);
    let wall = runs.iter().map(|r| r.wall).max().unwrap();
    Outcome {
        id: 1,
        title: "classical-channel null result",
        pass: c <= 1e-8,
        detail: format!(
            "max|C| = {c:.2e} ({} {}) over {} runs, limit 1e-8; slowest run {wall:.2?}",
            r.name,
            r.psi,
            runs.len()
        ),
    }
}

fn criterion2(runs: &[HybridSummary]) -> Outcome {
    let (d, r) = worst(runs, |r| r.separability);
    Outcome {
        id: 2,
        title: "mean-field separability",
        pass: d <= 1e-8,
        detail: format!(
            "max ||U - U1 (x) U2|| = {d:.2e} ({} {}) at 50 samples per run, limit 1e-8",
            r.name, r.psi
        ),
    }
}

fn random_channel(rng: &mut ChaCha8Rng) -> QuantumChannelParams {
    let omega0 = rng.random_range(1.0..5.0);
    let detuning = rng.random_range(0.3..3.0) * if rng.random::<bool>() { 1.0 } else { -1.0 };
    let g = rng.random_range(0.2..2.0);
    let n = rng.random_range(0..1000) as f64;
    QuantumChannelParams::new(omega0, omega0 + detuning, g, n, 0.0).unwrap()
}

fn criterion3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut sets = vec![QuantumChannelParams::new(3.0, 2.0, 1.0, 10.0, 0.0).unwrap()];
    sets.extend((0..19).map(|_| random_channel(&mut rng)));
    let (mut dev, mut dev_cos) = (0.0f64, 0.0f64);
    for p in &sets {
        let period = PI / (2.0 * p.coupling_n());
        for k in 0..100 {
            let t = 4.0 * period * k as f64 / 99.0;
            let numeric = otoc_numeric(p, t, &SpinState::phi_minus()).unwrap();
            dev = dev.max((numeric - otoc_analytic(p, t)).abs());
            dev_cos = dev_cos.max((numeric - (1.0 - (4.0 * p.coupling_n() * t).cos())).abs());
        }
    }
    Outcome {
        id: 3,
        title: "quantum-channel analytic match",
        pass: dev <= 1e-10,
        detail: format!(
            "max |numeric - 2 sin^2(4 W_n t)| = {dev:.2e}, limit 1e-10 (20 sets x 100 t); max |numeric - (1 - cos 4 W_n t)| = {dev_cos:.2e}"
        ),
    }
}

fn criterion4() -> Outcome {
    let mut otoc_dev = 0.0f64;
    let mut conc_dev = 0.0f64;
    let mut t0_ok = true;
    let mut t0_trace = 0.0f64;
    for beta in [0.0, 0.01, 0.1, 1.0, 5.0, 20.0, 100.0] {
        for n in [0.0, 1.0, 10.0, 100.0, 1000.0] {
            let p = QuantumChannelParams::new(3.0, 2.0, 1.0, n, beta).unwrap();
            let t0 = thermal_otoc(&p, 0.0).unwrap();
            t0_ok &= t0.closed_form == 0.0;
            t0_trace = t0_trace.max(t0.numeric.abs());
            for k in 0..60 {
                let t = 0.37 * k as f64;
                otoc_dev = otoc_dev.max(thermal_otoc(&p, t).unwrap().discrepancy());
                conc_dev = conc_dev.max(thermal_concurrence(&p, t).unwrap().discrepancy());
            }
        }
    }
    let fig8 = run_scenario(&ScenarioConfig::preset("fig8").unwrap()).unwrap();
    let Payload::Channel { rows } = &fig8.payload else {
        unreachable!("fig8 is a channel scenario")
    };
    let amplitudes: Vec<(f64, f64)> = [10.0, 100.0, 1000.0, 10000.0]
        .iter()
        .map(|&n| {
            let (lo, hi) = rows
                .iter()
                .filter(|r| r.n == n)
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
                    (lo.min(r.thermal_otoc), hi.max(r.thermal_otoc))
                });
            (n, hi - lo)
        })
        .collect();
    let monotone = amplitudes.windows(2).all(|w| w[1].1 < w[0].1);
    let ratio = amplitudes[3].1 / amplitudes[0].1;
    let listing: Vec<String> = amplitudes.iter().map(|(n, a)| format!("n={n}: {a:.3e}")).collect();
    Outcome {
        id: 4,
        title: "thermal closed forms",
        pass: otoc_dev <= 1e-10 && conc_dev <= 1e-10 && t0_ok && monotone && ratio < 0.01,
        detail: format!(
            "OTOC dev {otoc_dev:.2e}, concurrence dev {conc_dev:.2e} (limit 1e-10); t=0 exactly zero: {t0_ok} (trace route {t0_trace:.1e}); \
             amplitudes [{}] strictly decreasing: {monotone}, n=10000/n=10 = {ratio:.2e} (< 1e-2)",
            listing.join(", ")
        ),
    }
}

fn basis(a: [f64; 4]) -> nalgebra::Vector4<C64> {
    nalgebra::Vector4::from_fn(|k, _| C64::from(a[k]))
}

fn criterion5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut sets: Vec<QuantumChannelParams> = [0.0, 10.0, 100.0, 1000.0]
        .iter()
        .map(|&n| QuantumChannelParams::new(3.0, 2.0, 1.0, n, 0.0).unwrap())
        .collect();
    sets.extend((0..20).map(|_| random_channel(&mut rng)));
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let (mut e_dev, mut v_dev, mut listed_dev) = (0.0f64, 0.0f64, 0.0f64);
    let mut checked = 0;
    for p in &sets {
        let x = p.coupling0() + p.zeeman_r();
        let on = p.coupling_n();
        let listed = [
            (2.0 * x, basis([1.0, 0.0, 0.0, 0.0])),
            (on, basis([0.0, h, h, 0.0])),
            (-on, basis([0.0, -h, h, 0.0])),
            (-2.0 * x, basis([0.0, 0.0, 0.0, 1.0])),
        ];
        let mut energies: Vec<f64> = listed.iter().map(|l| l.0).collect();
        energies.sort_by(f64::total_cmp);
        let gap = energies.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
        if gap < 1e-3 {
            continue;
        }
        checked += 1;
        let eig = SymmetricEigen::new(h_total(p).unwrap());
        let mut numeric: Vec<(f64, nalgebra::Vector4<C64>)> = (0..4)
            .map(|k| (eig.eigenvalues[k], eig.eigenvectors.column(k).into_owned()))
            .collect();
        numeric.sort_by(|a, b| a.0.total_cmp(&b.0));
        for (e, v) in &listed {
            let (en, vn) = numeric
                .iter()
                .min_by(|a, b| (a.0 - e).abs().total_cmp(&(b.0 - e).abs()))
                .unwrap();
            e_dev = e_dev.max((en - e).abs());
            let overlap = vn.dotc(v);
            let aligned = vn * (overlap / overlap.norm());
            v_dev = v_dev.max((aligned - v).norm());
        }
        for (pair, (e, v)) in eigensystem(p).unwrap().iter().zip(&listed) {
            listed_dev = listed_dev
                .max((pair.energy - e).abs())
                .max((pair.vector.vector() - v).norm());
        }
    }
    Outcome {
        id: 5,
        title: "eigensystem",
        pass: e_dev <= 1e-12 && v_dev <= 1e-12 && listed_dev <= 1e-12 && checked > 0,
        detail: format!(
            "{checked} parameter sets: numeric vs listed energies {e_dev:.2e}, eigenvectors {v_dev:.2e}, \
             library eigensystem vs listed {listed_dev:.2e}; limit 1e-12"
        ),
    }
}

fn criterion6() -> Outcome {
    let mut c_dev = 0.0f64;
    let mut g_dev = 0.0f64;
    for n in [0.0, 10.0, 1000.0] {
        let p = QuantumChannelParams::new(3.0, 2.0, 1.0, n, 0.0).unwrap();
        let h = h_total(&p).unwrap();
        let rho0 = DensityMatrix4::pure(&SpinState::phi_minus());
        for k in 0..200 {
            let t = 0.1 * k as f64;
            let rho = rho0.evolve(&expm_hermitian(&h, t).unwrap()).unwrap();
            let c = concurrence(&rho).unwrap();
            c_dev = c_dev.max((c - 1.0).abs());
            g_dev = g_dev.max((gme(c).unwrap() - 0.5).abs());
        }
    }
    Outcome {
        id: 6,
        title: "entanglement constants",
        pass: c_dev <= 1e-10 && g_dev <= 1e-10,
        detail: format!("max |C - 1| = {c_dev:.2e}, max |GME - 0.5| = {g_dev:.2e} over t in [0, 20); limit 1e-10"),
    }
}

fn state_distance(a: &HybridState, b: &HybridState) -> f64 {
    let osc = [a.x1 - b.x1, a.v1 - b.v1, a.x2 - b.x2, a.v2 - b.v2]
        .iter()
        .fold(0.0f64, |m, d| m.max(d.abs()));
    let psi = a
        .psi
        .amplitudes()
        .iter()
        .zip(b.psi.amplitudes().iter())
        .fold(0.0f64, |m, (x, y)| m.max((x - y).norm()));
    osc.max(psi)
}

fn trajectory_defect(a: &HybridRun, b: &HybridRun) -> f64 {
    a.states
        .iter()
        .zip(&b.states)
        .map(|(x, y)| state_distance(x, y))
        .fold(0.0, f64::max)
}

fn criterion7(runs: &[HybridSummary]) -> Outcome {
    let autonomous: Vec<&HybridSummary> = runs.iter().filter(|r| AUTONOMOUS.contains(&r.name)).collect();
    let energy = autonomous.iter().map(|r| r.energy_drift).fold(0.0, f64::max);
    let norm = runs.iter().map(|r| r.norm_drift).fold(0.0, f64::max);
    let unitarity = runs.iter().map(|r| r.unitarity).fold(0.0, f64::max);

    let reversal = AUTONOMOUS
        .par_iter()
        .map(|&name| {
            let cfg = ScenarioConfig::preset(name).unwrap();
            let op = cfg.osc.params().unwrap();
            let i = &cfg.initial;
            let init = HybridState::new(0.0, i.x1, i.v1, i.x2, i.v2, SpinState::up_down());
            let fwd = evolve(&init, &op, &cfg.spin, cfg.run.feedback, cfg.run.t_end, 1e-9).unwrap();
            let back = evolve(&fwd, &op, &cfg.spin, cfg.run.feedback, 0.0, 1e-9).unwrap();
            state_distance(&back, &init)
        })
        .reduce(|| 0.0, f64::max);

    let tol = 1e-9;
    let ratios: Vec<(&str, f64)> = ["fig2", "fig3"]
        .par_iter()
        .map(|&name| {
            let reference = hybrid(name, SpinState::up_down(), tol / 100.0).0;
            let coarse = trajectory_defect(&hybrid(name, SpinState::up_down(), tol).0, &reference);
            let fine = trajectory_defect(&hybrid(name, SpinState::up_down(), tol / 2.0).0, &reference);
            (name, coarse / fine)
        })
        .collect();
    let min_ratio = ratios.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    let listing: Vec<String> = ratios.iter().map(|(n, r)| format!("{n} {r:.2}")).collect();

    Outcome {
        id: 7,
        title: "conservation and numerics",
        pass: energy <= 1e-6 && norm <= 1e-8 && unitarity <= 1e-8 && reversal <= 1e-6 && min_ratio >= 4.0,
        detail: format!(
            "energy drift {energy:.2e} (<= 1e-6), norm drift {norm:.2e}, unitarity {unitarity:.2e} (<= 1e-8), \
             reversal {reversal:.2e} (<= 1e-6), tol-halving defect ratio [{}] (>= 4)",
            listing.join(", ")
        ),
    }
}

fn random_unitary(rng: &mut ChaCha8Rng) -> Operator4 {
    let g = Matrix4::from_fn(|_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    g.qr().q()
}

fn random_state(rng: &mut ChaCha8Rng) -> SpinState {
    SpinState::normalized(std::array::from_fn(|_| {
        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    }))
    .unwrap()
}

fn criterion8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let axes = [Axis::X, Axis::Y, Axis::Z];
    let mut dev = 0.0f64;
    for _ in 0..1000 {
        let u = random_unitary(&mut rng);
        let psi = random_state(&mut rng);
        let w = embed(&pauli(axes[rng.random_range(0..3)]), Site::One);
        let v = embed(&pauli(axes[rng.random_range(0..3)]), Site::Two);
        let product = otoc_product(&u, &psi, &w, &v).unwrap().c;
        let comm = otoc_commutator(&u, &psi, &w, &v).unwrap();
        dev = dev.max((product - comm).abs());
    }
    Outcome {
        id: 8,
        title: "commutator/product OTOC equivalence",
        pass: dev <= 1e-10,
        detail: format!("max |product - commutator| = {dev:.2e} over 1000 samples, limit 1e-10"),
    }
}

fn late_spin(run: &HybridRun) -> (f64, f64) {
    let z: Vec<f64> = run.series.records[run.series.len() / 2..]
        .iter()
        .map(|r| r.s1[2])
        .collect();
    let mean = z.iter().sum::<f64>() / z.len() as f64;
    let var = z.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / z.len() as f64;
    (mean, var.sqrt())
}

fn correlation(run: &HybridRun) -> f64 {
    let r = &run.series.records;
    let n = r.len() as f64;
    let (m1, m2) = (
        r.iter().map(|r| r.x1).sum::<f64>() / n,
        r.iter().map(|r| r.x2).sum::<f64>() / n,
    );
    let cov = r.iter().map(|r| (r.x1 - m1) * (r.x2 - m2)).sum::<f64>() / n;
    let s1 = (r.iter().map(|r| (r.x1 - m1).powi(2)).sum::<f64>() / n).sqrt();
    let s2 = (r.iter().map(|r| (r.x2 - m2).powi(2)).sum::<f64>() / n).sqrt();
    cov / (s1 * s2)
}

// late-half mean and standard deviation of <s1z>, tol = 1e-9
const SPIN_SNAPSHOTS: [(&str, f64, f64); 3] = [
    ("dl-strong", 0.270783475163, 0.439150874173),
    ("fig6", -0.237711925978, 0.407799141626),
    ("fig5", -0.801062366612, 0.139565786223),
];

fn criterion9() -> Outcome {
    let runs: Vec<(&str, HybridRun)> = ["fig2", "fig4", "dl-strong", "fig6", "fig5", "fig7"]
        .par_iter()
        .map(|&n| (n, hybrid(n, SpinState::up_down(), 1e-9).0))
        .collect();
    let get = |name: &str| &runs.iter().find(|r| r.0 == name).unwrap().1;

    // envelope of |x1| over windows of ten time units
    let modulation = |run: &HybridRun| {
        let env: Vec<f64> = run
            .series
            .records
            .chunks(200)
            .map(|c| c.iter().map(|r| r.x1.abs()).fold(0.0, f64::max))
            .collect();
        env.iter().copied().fold(f64::INFINITY, f64::min) / env.iter().copied().fold(0.0, f64::max)
    };
    let weak = [modulation(get("fig2")), modulation(get("fig4"))];
    let sync = [correlation(get("dl-strong")), correlation(get("fig6"))];
    let snapshot_dev = SPIN_SNAPSHOTS
        .iter()
        .map(|(name, mean, sd)| {
            let (m, s) = late_spin(get(name));
            (m - mean).abs().max((s - sd).abs())
        })
        .fold(0.0, f64::max);
    let (fig5_mean, fig5_sd) = late_spin(get("fig5"));

    let fig7 = get("fig7");
    let budget = energy_budget(&fig7.series);
    let ratio = fig7.series.records.iter().map(|r| (r.h_nv / r.h0).abs()).sum::<f64>() / fig7.series.len() as f64;
    let identity = fig7.series.records.iter().zip(&budget.h0).all(|(r, h0)| r.h0 == *h0);

    Outcome {
        id: 9,
        title: "qualitative behaviour",
        pass: weak.iter().all(|m| *m < 0.5)
            && sync.iter().all(|c| *c > 0.9)
            && snapshot_dev <= 1e-6
            && budget.total_relative_drift <= 1e-6
            && identity,
        detail: format!(
            "weak-K envelope min/max {:.2}, {:.2} (< 0.5); driven strong-K x1/x2 correlation {:.3}, {:.3} (> 0.9); \
             spin snapshots within {snapshot_dev:.1e}; fig5 late <s1z> {fig5_mean:.2} +- {fig5_sd:.2}; \
             fig7 mean |<H_NV>/H0| = {ratio:.3}, depths <H_NV> {:.2}, H0 {:.2}, energy drift {:.1e}",
            weak[0], weak[1], sync[0], sync[1], budget.depth_h_nv, budget.depth_h0, budget.total_relative_drift
        ),
    }
}

fn main() {
    let start = Instant::now();
    let runs = hybrid_summaries();
    let outcomes = [
        criterion1(&runs),
        criterion2(&runs),
        criterion3(),
        criterion4(),
        criterion5(),
        criterion6(),
        criterion7(&runs),
        criterion8(),
        criterion9(),
    ];
    for o in &outcomes {
        println!(
            "{} criterion {}: {}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.id,
            o.title,
            o.detail
        );
    }
    let failed = outcomes.iter().filter(|o| !o.pass).count();
    println!(
        "acceptance: {} passed, {failed} failed ({:.1?})",
        outcomes.len() - failed,
        start.elapsed()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
