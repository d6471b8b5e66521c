// SPDX-License-Identifier: Apache-2.0

//! Scenario runner: configuration, dispatch to the hybrid integrator or the
//! quantum-channel evaluator, parameter sweeps and file output.

pub mod config;
pub mod output;

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{otoc_analytic, otoc_numeric, thermal_concurrence, thermal_otoc};
use crate::error::{Error, Result};
use crate::hybrid::{integrate, Control, Diagnostics, HybridState, TimeSeries};

pub use config::{
    parse_config, parse_config_over, preset_name, Coupling, InitialSpin, Model, OutputFormat, RegimeMode,
    ScenarioConfig, Temperature, HYBRID_DT_OUT, PRESETS,
};
pub use output::{
    read_csv, read_json, read_series, write_output, write_output_to, CsvTable, JsonOutput, CHANNEL_HEADER,
    HYBRID_HEADER,
};

/// One sample of the quantum-channel scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelRow {
    pub n: f64,
    pub t: f64,
    /// Numeric OTOC on the configured initial state.
    pub otoc: f64,
    /// Quoted closed form 2 sin²(4Ω_n t).
    pub otoc_closed_form: f64,
    pub thermal_otoc: f64,
    pub thermal_otoc_trace: f64,
    pub thermal_concurrence: f64,
    pub thermal_concurrence_wootters: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Payload {
    Hybrid {
        series: TimeSeries,
        diagnostics: Diagnostics,
    },
    Channel {
        rows: Vec<ChannelRow>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub config: ScenarioConfig,
    pub payload: Payload,
    pub wall_time: Duration,
}

impl RunResult {
    /// Config text that reproduces this run.
    pub fn echo(&self) -> String {
        self.config.to_text()
    }

    pub fn series(&self) -> Option<&TimeSeries> {
        match &self.payload {
            Payload::Hybrid { series, .. } => Some(series),
            Payload::Channel { .. } => None,
        }
    }

    pub fn diagnostics(&self) -> Option<&Diagnostics> {
        match &self.payload {
            Payload::Hybrid { diagnostics, .. } => Some(diagnostics),
            Payload::Channel { .. } => None,
        }
    }
}

fn invalid((key, message): (&'static str, String)) -> Error {
    Error::Config {
        line: 0,
        message: format!("{key}: {message}"),
    }
}

/// Output grid 0, dt, 2dt, … up to t_end.
fn grid(t_end: f64, dt: f64) -> Vec<f64> {
    let n = (t_end / dt + 1e-9).floor() as usize;
    (0..=n).map(|k| k as f64 * dt).collect()
}

/// Channel dt_out default: one hundredth of the slowest-n coupling period scale 1/Ω_n.
pub fn channel_dt_out(cfg: &ScenarioConfig) -> Result<f64> {
    if let Some(dt) = cfg.run.dt_out {
        return Ok(dt);
    }
    let mut fastest = 0.0f64;
    for &n in &cfg.channel.n {
        fastest = fastest.max(cfg.channel.params(n)?.coupling_n().abs());
    }
    Ok(if fastest > 0.0 { 0.01 / fastest } else { HYBRID_DT_OUT })
}

pub fn run_scenario(cfg: &ScenarioConfig) -> Result<RunResult> {
    cfg.validate().map_err(invalid)?;
    let start = Instant::now();
    let payload = match cfg.model {
        Model::Hybrid => {
            let op = cfg.osc.params()?;
            let regime = cfg.run.regime.resolve(&op)?;
            let i = &cfg.initial;
            let initial = HybridState::new(0.0, i.x1, i.v1, i.x2, i.v2, i.state.state()?);
            let control = Control {
                t_end: cfg.run.t_end,
                dt_out: cfg.run.dt_out.unwrap_or(HYBRID_DT_OUT),
                tol: cfg.run.tol,
                feedback: cfg.run.feedback,
                probes: cfg.run.probes,
            };
            let run = integrate(&initial, &op, &cfg.spin, regime, &control)?;
            Payload::Hybrid {
                series: run.series,
                diagnostics: run.diagnostics,
            }
        }
        Model::Channel => {
            let dt = channel_dt_out(cfg)?;
            let psi0 = cfg.initial.state.state()?;
            let times = grid(cfg.run.t_end, dt);
            let mut rows = Vec::with_capacity(times.len() * cfg.channel.n.len());
            for &n in &cfg.channel.n {
                let p = cfg.channel.params(n)?;
                for &t in &times {
                    let th = thermal_otoc(&p, t)?;
                    let tc = thermal_concurrence(&p, t)?;
                    rows.push(ChannelRow {
                        n,
                        t,
                        otoc: otoc_numeric(&p, t, &psi0)?,
                        otoc_closed_form: otoc_analytic(&p, t),
                        thermal_otoc: th.closed_form,
                        thermal_otoc_trace: th.numeric,
                        thermal_concurrence: tc.closed_form,
                        thermal_concurrence_wootters: tc.numeric,
                    });
                }
            }
            Payload::Channel { rows }
        }
    };
    Ok(RunResult {
        config: cfg.clone(),
        payload,
        wall_time: start.elapsed(),
    })
}

/// Runs `cfg` once per value of the numeric parameter `param`, in parallel,
/// returning results in the order of `values`.
pub fn sweep(cfg: &ScenarioConfig, param: &str, values: &[f64]) -> Result<Vec<RunResult>> {
    let (section, key) = cfg
        .resolve_key(param)
        .map_err(|_| Error::SweepTarget(param.to_string()))?;
    if !ScenarioConfig::is_numeric_key(section, key) {
        return Err(Error::SweepTarget(param.to_string()));
    }
    let qualified = format!("{section}.{key}");
    let configs = values
        .iter()
        .map(|v| {
            let mut c = cfg.clone();
            c.apply_override(&qualified, &format!("{v:?}"))?;
            c.validate().map_err(invalid)?;
            Ok(c)
        })
        .collect::<Result<Vec<_>>>()?;
    configs.par_iter().map(run_scenario).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn short(name: &str, t_end: f64) -> ScenarioConfig {
        let mut c = ScenarioConfig::preset(name).unwrap();
        c.run.t_end = t_end;
        c
    }

    #[test]
    fn zero_length_run_has_single_record() {
        let r = run_scenario(&short("fig2", 0.0)).unwrap();
        let s = r.series().unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.records[0].t, 0.0);
        assert_eq!(s.records[0].x1, 1.0);
    }

    #[test]
    fn runs_are_deterministic() {
        let c = short("fig5", 5.0);
        let a = run_scenario(&c).unwrap();
        let b = run_scenario(&c).unwrap();
        assert_eq!(a.payload, b.payload);
    }

    #[test]
    fn echo_reproduces_results() {
        let c = short("fig4", 3.0);
        let a = run_scenario(&c).unwrap();
        let b = run_scenario(&parse_config(&a.echo()).unwrap()).unwrap();
        assert_eq!(a.payload, b.payload);
    }

    #[test]
    fn channel_preset_rows_cover_every_n() {
        let r = run_scenario(&short("fig8", 5.0)).unwrap();
        let Payload::Channel { rows } = &r.payload else {
            panic!("expected channel rows")
        };
        for n in [10.0, 100.0, 1000.0, 10000.0] {
            assert!(rows.iter().any(|row| row.n == n));
        }
        for row in rows {
            assert!((row.thermal_otoc - row.thermal_otoc_trace).abs() < 1e-10);
            assert!((row.thermal_concurrence - row.thermal_concurrence_wootters).abs() < 1e-10);
        }
    }

    #[test]
    fn sweep_preserves_order_and_rejects_bad_targets() {
        let base = short("fig2", 2.0);
        let out = sweep(&base, "K", &[10.0, 0.1, 1.0]).unwrap();
        let ks: Vec<Coupling> = out.iter().map(|r| r.config.osc.coupling).collect();
        assert_eq!(ks, vec![Coupling::K(10.0), Coupling::K(0.1), Coupling::K(1.0)]);
        assert!(sweep(&base, "K", &[]).unwrap().is_empty());
        assert!(matches!(
            sweep(&base, "initial.state", &[1.0]),
            Err(Error::SweepTarget(_))
        ));
        assert!(matches!(sweep(&base, "nope", &[1.0]), Err(Error::SweepTarget(_))));
    }

    #[test]
    fn sweep_over_occupation() {
        let base = short("fig8", 1.0);
        let out = sweep(&base, "n", &[10.0, 100.0]).unwrap();
        assert_eq!(out[0].config.channel.n, vec![10.0]);
        assert_eq!(out[1].config.channel.n, vec![100.0]);
    }

    #[test]
    fn sweep_reports_regime_errors() {
        let base = short("fig2", 1.0);
        let err = sweep(&base, "F", &[0.5]).unwrap_err();
        assert_eq!(err.category(), "config");
    }
}
