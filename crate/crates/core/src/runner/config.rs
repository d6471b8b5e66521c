// SPDX-License-Identifier: Apache-2.0

//! Scenario configuration: TOML-style sections of `key = value` pairs laid
//! over a named preset.
//!
//! ```text
//! scenario = "fig2"
//!
//! [oscillators]
//! K = 10
//!
//! [run]
//! t_end = 50.0
//! ```
//!
//! Numbers may also be given as simple products of `pi` and literals, e.g.
//! `alpha = "pi/3"`.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use toml_edit::{Item, Value};

use crate::channel::QuantumChannelParams;
use crate::correlators::ProbePair;
use crate::error::{Error, Result};
use crate::hybrid::{Feedback, OscParams, Regime, TOL_RANGE};
use crate::spin_algebra::{SpinParams, SpinState, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Hybrid,
    Channel,
}

/// Oscillator coupling given either as connectivity K or directly as D.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Coupling {
    K(f64),
    D(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Temperature {
    T(f64),
    Beta(f64),
}

impl Temperature {
    pub fn beta(&self) -> f64 {
        match *self {
            Temperature::T(t) => 1.0 / t,
            Temperature::Beta(b) => b,
        }
    }
}

/// How the (F, γ, ξ) combination is policed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegimeMode {
    /// Must be one of the four regimes.
    Auto,
    /// Any combination accepted.
    Off,
    /// Must be exactly this regime.
    Expect(Regime),
}

impl RegimeMode {
    fn parse(s: &str) -> std::result::Result<Self, String> {
        let r = match s.trim() {
            "auto" => return Ok(RegimeMode::Auto),
            "off" | "none" => return Ok(RegimeMode::Off),
            "al" => Regime::AutonomousLinear,
            "an" => Regime::AutonomousNonlinear,
            "dl" => Regime::DrivenLinear,
            "dn" => Regime::DrivenNonlinear,
            other => other.parse::<Regime>()?,
        };
        Ok(RegimeMode::Expect(r))
    }

    /// Regime to enforce during integration.
    pub fn resolve(&self, op: &OscParams) -> Result<Option<Regime>> {
        match *self {
            RegimeMode::Auto => Regime::classify(op).map(Some),
            RegimeMode::Off => Ok(None),
            RegimeMode::Expect(r) => r.check(op).map(|_| Some(r)),
        }
    }
}

impl std::fmt::Display for RegimeMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RegimeMode::Auto => f.write_str("auto"),
            RegimeMode::Off => f.write_str("off"),
            RegimeMode::Expect(r) => write!(f, "{r}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum InitialSpin {
    /// Computational basis state by index, 0 = |00⟩ … 3 = |11⟩.
    Basis(usize),
    PhiMinus,
    /// Amplitudes, normalized on use.
    Custom([C64; 4]),
}

const BASIS_LABELS: [&str; 4] = ["00", "01", "10", "11"];

impl InitialSpin {
    pub fn state(&self) -> Result<SpinState> {
        match self {
            InitialSpin::Basis(i) => Ok(SpinState::basis(*i)),
            InitialSpin::PhiMinus => Ok(SpinState::phi_minus()),
            InitialSpin::Custom(a) => SpinState::normalized(*a),
        }
    }

    fn label(&self) -> &'static str {
        match self {
            InitialSpin::Basis(i) => BASIS_LABELS[*i],
            InitialSpin::PhiMinus => "phi-minus",
            InitialSpin::Custom(_) => "custom",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown output format '{other}' (csv or json)")),
        }
    }
}

impl std::fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscSettings {
    pub omega1: f64,
    pub omega2: f64,
    pub coupling: Coupling,
    pub xi: f64,
    pub gamma: f64,
    pub f: f64,
    pub drive_omega: f64,
}

impl OscSettings {
    pub fn params(&self) -> Result<OscParams> {
        let base = OscParams {
            omega1: self.omega1,
            omega2: self.omega2,
            d: 0.0,
            xi: self.xi,
            gamma: self.gamma,
            f: self.f,
            drive_omega: self.drive_omega,
        };
        match self.coupling {
            Coupling::D(d) => Ok(OscParams { d, ..base }),
            Coupling::K(k) => base.with_connectivity(k),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialSettings {
    pub state: InitialSpin,
    pub x1: f64,
    pub v1: f64,
    pub x2: f64,
    pub v2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelSettings {
    pub omega0: f64,
    pub omega: f64,
    pub g: f64,
    pub n: Vec<f64>,
    pub temperature: Temperature,
}

impl ChannelSettings {
    pub fn params(&self, n: f64) -> Result<QuantumChannelParams> {
        QuantumChannelParams::new(self.omega0, self.omega, self.g, n, self.temperature.beta())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunSettings {
    pub t_end: f64,
    /// Output spacing; a model-dependent default when absent.
    pub dt_out: Option<f64>,
    pub tol: f64,
    pub feedback: Feedback,
    pub regime: RegimeMode,
    pub probes: ProbePair,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputSettings {
    pub path: Option<PathBuf>,
    pub format: OutputFormat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub scenario: String,
    pub note: Option<String>,
    pub model: Model,
    pub spin: SpinParams,
    pub osc: OscSettings,
    pub initial: InitialSettings,
    pub channel: ChannelSettings,
    pub run: RunSettings,
    pub output: OutputSettings,
}

/// Hybrid dt_out default.
pub const HYBRID_DT_OUT: f64 = 0.05;

const UNSET: f64 = f64::NAN;

const DRIVE_NOTE: &str = "one drive F acts on both oscillators";

pub struct Preset {
    pub name: &'static str,
    pub aliases: &'static [&'static str],
    pub description: &'static str,
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "fig2",
        aliases: &["al-weak"],
        description: "autonomous linear, K = 0.1",
    },
    Preset {
        name: "fig3",
        aliases: &["al-strong"],
        description: "autonomous linear, K = 10",
    },
    Preset {
        name: "fig4",
        aliases: &["an-weak"],
        description: "autonomous nonlinear, K = 0.1",
    },
    Preset {
        name: "an-strong",
        aliases: &[],
        description: "autonomous nonlinear, K = 10",
    },
    Preset {
        name: "dl-weak",
        aliases: &[],
        description: "driven linear, K = 0.1",
    },
    Preset {
        name: "dl-strong",
        aliases: &[],
        description: "driven linear, K = 10",
    },
    Preset {
        name: "fig5",
        aliases: &["dn-weak"],
        description: "driven nonlinear, K = 0.1",
    },
    Preset {
        name: "fig6",
        aliases: &["dn-strong"],
        description: "driven nonlinear, K = 10",
    },
    Preset {
        name: "fig7",
        aliases: &["energy"],
        description: "energy budget, autonomous linear, K = 10",
    },
    Preset {
        name: "fig8",
        aliases: &["thermal"],
        description: "thermal OTOC, g = 1, omega0 = 3, omega = 2, T = 100, n = 10..10000",
    },
];

/// Canonical preset name for a name or alias.
pub fn preset_name(name: &str) -> Option<&'static str> {
    PRESETS
        .iter()
        .find(|p| p.name == name || p.aliases.contains(&name))
        .map(|p| p.name)
}

impl ScenarioConfig {
    /// A configuration with every parameter of `model` unset; fields the
    /// other model uses are zeroed.
    pub fn custom(model: Model) -> Self {
        let mut c = ScenarioConfig {
            scenario: "custom".into(),
            note: None,
            model,
            spin: SpinParams::new(UNSET, UNSET, UNSET),
            osc: OscSettings {
                omega1: UNSET,
                omega2: UNSET,
                coupling: Coupling::D(UNSET),
                xi: 0.0,
                gamma: 0.0,
                f: 0.0,
                drive_omega: 1.0,
            },
            initial: InitialSettings {
                state: match model {
                    Model::Hybrid => InitialSpin::Basis(1),
                    Model::Channel => InitialSpin::PhiMinus,
                },
                x1: 1.0,
                v1: 0.0,
                x2: 0.0,
                v2: 0.0,
            },
            channel: ChannelSettings {
                omega0: UNSET,
                omega: UNSET,
                g: UNSET,
                n: Vec::new(),
                temperature: Temperature::Beta(UNSET),
            },
            run: RunSettings {
                t_end: UNSET,
                dt_out: None,
                tol: 1e-9,
                feedback: Feedback::MeanField,
                regime: RegimeMode::Auto,
                probes: ProbePair::default(),
            },
            output: OutputSettings {
                path: None,
                format: OutputFormat::Csv,
            },
        };
        match model {
            Model::Hybrid => {
                c.channel = ChannelSettings {
                    omega0: 0.0,
                    omega: 0.0,
                    g: 0.0,
                    n: Vec::new(),
                    temperature: Temperature::Beta(0.0),
                }
            }
            Model::Channel => {
                c.spin = SpinParams::new(0.0, 0.0, 0.0);
                c.osc.omega1 = 0.0;
                c.osc.omega2 = 0.0;
                c.osc.coupling = Coupling::D(0.0);
            }
        }
        c
    }

    pub fn preset(name: &str) -> Result<Self> {
        let canonical = preset_name(name).ok_or_else(|| Error::Config {
            line: 0,
            message: format!("unknown scenario '{name}'"),
        })?;
        if canonical == "fig8" {
            let mut c = Self::custom(Model::Channel);
            c.scenario = canonical.into();
            c.channel = ChannelSettings {
                omega0: 3.0,
                omega: 2.0,
                g: 1.0,
                n: vec![10.0, 100.0, 1000.0, 10000.0],
                temperature: Temperature::T(100.0),
            };
            c.run.t_end = 100.0;
            return Ok(c);
        }
        let (k, xi, driven) = match canonical {
            "fig2" | "fig7" => (0.1, 0.0, false),
            "fig3" => (10.0, 0.0, false),
            "fig4" => (0.1, 1.0, false),
            "an-strong" => (10.0, 1.0, false),
            "dl-weak" => (0.1, 0.0, true),
            "dl-strong" => (10.0, 0.0, true),
            "fig5" => (0.1, 1.0, true),
            "fig6" => (10.0, 1.0, true),
            _ => unreachable!("preset table and match arms disagree"),
        };
        let k = if canonical == "fig7" { 10.0 } else { k };
        let mut c = Self::custom(Model::Hybrid);
        c.scenario = canonical.into();
        c.spin = SpinParams::new(1.5, 1.0, std::f64::consts::FRAC_PI_3);
        c.osc = OscSettings {
            omega1: 1.0,
            omega2: 1.5,
            coupling: Coupling::K(k),
            xi,
            gamma: if driven { 0.15 } else { 0.0 },
            f: if driven { 0.5 } else { 0.0 },
            drive_omega: 1.0,
        };
        if driven {
            c.note = Some(DRIVE_NOTE.into());
        }
        c.run.t_end = 100.0;
        Ok(c)
    }

    /// Checks completeness and consistency; errors name the offending key.
    pub fn validate(&self) -> std::result::Result<(), (&'static str, String)> {
        let need = |key: &'static str, v: f64| {
            if v.is_nan() {
                Err((key, format!("missing required field '{key}'")))
            } else if !v.is_finite() {
                Err((key, format!("'{key}' must be finite")))
            } else {
                Ok(())
            }
        };
        fn wrap<T>(key: &'static str, r: Result<T>) -> std::result::Result<T, (&'static str, String)> {
            r.map_err(|e| (key, e.to_string()))
        }
        need("run.t_end", self.run.t_end)?;
        if !(self.run.t_end >= 0.0) {
            return Err(("run.t_end", "t_end must be >= 0".into()));
        }
        if let Some(dt) = self.run.dt_out {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(("run.dt_out", "dt_out must be > 0".into()));
            }
        }
        if !(TOL_RANGE.0..=TOL_RANGE.1).contains(&self.run.tol) {
            return Err((
                "run.tol",
                format!("tol must lie in [{:e}, {:e}]", TOL_RANGE.0, TOL_RANGE.1),
            ));
        }
        wrap("initial.amplitudes", self.initial.state.state().map(|_| ()))?;
        match self.model {
            Model::Hybrid => {
                need("spin.omega0", self.spin.omega0)?;
                need("spin.g", self.spin.g)?;
                need("spin.alpha", self.spin.alpha)?;
                need("oscillators.omega1", self.osc.omega1)?;
                need("oscillators.omega2", self.osc.omega2)?;
                match self.osc.coupling {
                    Coupling::K(k) => need("oscillators.K", k)?,
                    Coupling::D(d) => need("oscillators.D", d)?,
                }
                for (key, v) in [
                    ("oscillators.xi", self.osc.xi),
                    ("oscillators.gamma", self.osc.gamma),
                    ("oscillators.F", self.osc.f),
                    ("oscillators.Omega", self.osc.drive_omega),
                    ("initial.x1", self.initial.x1),
                    ("initial.v1", self.initial.v1),
                    ("initial.x2", self.initial.x2),
                    ("initial.v2", self.initial.v2),
                ] {
                    need(key, v)?;
                }
                let key = match self.osc.coupling {
                    Coupling::K(_) => "oscillators.K",
                    Coupling::D(_) => "oscillators.D",
                };
                let op = wrap(key, self.osc.params())?;
                wrap("oscillators.gamma", op.validate())?;
                let regime_key = if self.osc.f != 0.0 {
                    "oscillators.F"
                } else {
                    "oscillators.gamma"
                };
                wrap(regime_key, self.run.regime.resolve(&op).map(|_| ()))?;
            }
            Model::Channel => {
                need("channel.omega0", self.channel.omega0)?;
                need("channel.omega", self.channel.omega)?;
                need("channel.g", self.channel.g)?;
                let tkey = match self.channel.temperature {
                    Temperature::T(t) => {
                        need("channel.T", t)?;
                        if !(t > 0.0) {
                            return Err(("channel.T", "T must be > 0".into()));
                        }
                        "channel.T"
                    }
                    Temperature::Beta(b) => {
                        need("channel.beta", b)?;
                        "channel.beta"
                    }
                };
                if self.channel.n.is_empty() {
                    return Err(("channel.n", "missing required field 'channel.n'".into()));
                }
                for &n in &self.channel.n {
                    let key = if n >= 0.0 { tkey } else { "channel.n" };
                    wrap(key, self.channel.params(n).map(|_| ()))?;
                }
            }
        }
        Ok(())
    }

    /// Canonical text form; parsing it reproduces this configuration.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let num = |v: f64| format!("{v:?}");
        let _ = writeln!(s, "scenario = {}", quote(&self.scenario));
        let _ = writeln!(
            s,
            "model = \"{}\"",
            match self.model {
                Model::Hybrid => "hybrid",
                Model::Channel => "channel",
            }
        );
        if let Some(note) = &self.note {
            let _ = writeln!(s, "note = {}", quote(note));
        }
        match self.model {
            Model::Hybrid => {
                let _ = writeln!(s, "\n[spin]");
                let _ = writeln!(s, "omega0 = {}", num(self.spin.omega0));
                let _ = writeln!(s, "g = {}", num(self.spin.g));
                let _ = writeln!(s, "alpha = {}", num(self.spin.alpha));
                let o = &self.osc;
                let _ = writeln!(s, "\n[oscillators]");
                let _ = writeln!(s, "omega1 = {}", num(o.omega1));
                let _ = writeln!(s, "omega2 = {}", num(o.omega2));
                match o.coupling {
                    Coupling::K(k) => writeln!(s, "K = {}", num(k)),
                    Coupling::D(d) => writeln!(s, "D = {}", num(d)),
                }
                .ok();
                let _ = writeln!(s, "xi = {}", num(o.xi));
                let _ = writeln!(s, "gamma = {}", num(o.gamma));
                let _ = writeln!(s, "F = {}", num(o.f));
                let _ = writeln!(s, "Omega = {}", num(o.drive_omega));
            }
            Model::Channel => {
                let c = &self.channel;
                let _ = writeln!(s, "\n[channel]");
                let _ = writeln!(s, "omega0 = {}", num(c.omega0));
                let _ = writeln!(s, "omega = {}", num(c.omega));
                let _ = writeln!(s, "g = {}", num(c.g));
                let ns: Vec<String> = c.n.iter().map(|&n| num(n)).collect();
                let _ = writeln!(s, "n = [{}]", ns.join(", "));
                match c.temperature {
                    Temperature::T(t) => writeln!(s, "T = {}", num(t)),
                    Temperature::Beta(b) => writeln!(s, "beta = {}", num(b)),
                }
                .ok();
            }
        }
        let i = &self.initial;
        let _ = writeln!(s, "\n[initial]");
        let _ = writeln!(s, "state = \"{}\"", i.state.label());
        if let InitialSpin::Custom(a) = &i.state {
            let parts: Vec<String> = a.iter().flat_map(|z| [num(z.re), num(z.im)]).collect();
            let _ = writeln!(s, "amplitudes = [{}]", parts.join(", "));
        }
        if self.model == Model::Hybrid {
            let _ = writeln!(s, "x1 = {}", num(i.x1));
            let _ = writeln!(s, "v1 = {}", num(i.v1));
            let _ = writeln!(s, "x2 = {}", num(i.x2));
            let _ = writeln!(s, "v2 = {}", num(i.v2));
        }
        let r = &self.run;
        let _ = writeln!(s, "\n[run]");
        let _ = writeln!(s, "t_end = {}", num(r.t_end));
        if let Some(dt) = r.dt_out {
            let _ = writeln!(s, "dt_out = {}", num(dt));
        }
        if self.model == Model::Hybrid {
            let _ = writeln!(s, "tol = {}", num(r.tol));
            let fb = match r.feedback {
                Feedback::MeanField => "mean-field",
                Feedback::Off => "off",
            };
            let _ = writeln!(s, "feedback = \"{fb}\"");
            let _ = writeln!(s, "regime = \"{}\"", r.regime);
            let _ = writeln!(s, "probe_w = \"{}\"", r.probes.w);
            let _ = writeln!(s, "probe_v = \"{}\"", r.probes.v);
        }
        let _ = writeln!(s, "\n[output]");
        if let Some(p) = &self.output.path {
            let _ = writeln!(s, "path = {}", quote(&p.to_string_lossy()));
        }
        let _ = writeln!(s, "format = \"{}\"", self.output.format);
        s
    }

    /// Applies `section.key = value` (or a bare key when unambiguous), with
    /// the value written as in a config file.
    pub fn apply_override(&mut self, key: &str, value: &str) -> Result<()> {
        let (section, name) = self
            .resolve_key(key)
            .map_err(|m| Error::Config { line: 0, message: m })?;
        let raw = value
            .trim()
            .parse::<Value>()
            .map(|v| Raw::from_value(&v))
            .unwrap_or_else(|_| Ok(Raw::Str(value.trim().to_string())))
            .map_err(|m| Error::Config { line: 0, message: m })?;
        self.set(section, name, &raw).map_err(|m| Error::Config {
            line: 0,
            message: format!("{key}: {m}"),
        })
    }

    /// Maps a possibly bare key to its (section, key) pair.
    pub fn resolve_key(&self, key: &str) -> std::result::Result<(&'static str, &'static str), String> {
        let (section, name) = match key.split_once('.') {
            Some((s, k)) => (Some(s), k),
            None => (None, key),
        };
        let candidates: Vec<(&'static str, &'static str)> = KEYS
            .iter()
            .filter(|(s, k, _)| *k == name && section.is_none_or(|sec| sec == *s))
            .map(|(s, k, _)| (*s, *k))
            .collect();
        let preferred = match self.model {
            Model::Hybrid => "spin",
            Model::Channel => "channel",
        };
        match candidates.as_slice() {
            [] => Err(format!("unknown key '{key}'")),
            [one] => Ok(*one),
            many => many
                .iter()
                .find(|(s, _)| *s == preferred)
                .copied()
                .ok_or_else(|| format!("ambiguous key '{key}'; qualify it with a section")),
        }
    }

    pub fn is_numeric_key(section: &str, key: &str) -> bool {
        KEYS.iter()
            .any(|(s, k, numeric)| *s == section && *k == key && *numeric)
    }

    fn set(&mut self, section: &str, key: &str, v: &Raw) -> std::result::Result<(), String> {
        match (section, key) {
            ("", "scenario") | ("", "model") => return Err("only allowed at the top of a config file".into()),
            ("", "note") => self.note = Some(v.string()?),
            ("spin", "omega0") => self.spin.omega0 = v.num()?,
            ("spin", "g") => self.spin.g = v.num()?,
            ("spin", "alpha") => self.spin.alpha = v.num()?,
            ("oscillators", "omega1") => self.osc.omega1 = v.num()?,
            ("oscillators", "omega2") => self.osc.omega2 = v.num()?,
            ("oscillators", "K") => self.osc.coupling = Coupling::K(v.num()?),
            ("oscillators", "D") => self.osc.coupling = Coupling::D(v.num()?),
            ("oscillators", "xi") => self.osc.xi = v.num()?,
            ("oscillators", "gamma") => self.osc.gamma = v.num()?,
            ("oscillators", "F") => self.osc.f = v.num()?,
            ("oscillators", "Omega") => self.osc.drive_omega = v.num()?,
            ("initial", "state") => {
                let s = v.string()?;
                self.initial.state = match s.as_str() {
                    "phi-minus" => InitialSpin::PhiMinus,
                    "custom" => match self.initial.state {
                        InitialSpin::Custom(a) => InitialSpin::Custom(a),
                        _ => InitialSpin::Custom([C64::from(UNSET); 4]),
                    },
                    label => InitialSpin::Basis(
                        BASIS_LABELS
                            .iter()
                            .position(|l| *l == label)
                            .ok_or_else(|| format!("unknown state '{label}' (00, 01, 10, 11, phi-minus, custom)"))?,
                    ),
                };
            }
            ("initial", "amplitudes") => {
                let xs = v.list()?;
                if xs.len() != 8 {
                    return Err("amplitudes needs 8 numbers: re, im for each of |00>, |01>, |10>, |11>".into());
                }
                self.initial.state = InitialSpin::Custom(std::array::from_fn(|k| C64::new(xs[2 * k], xs[2 * k + 1])));
            }
            ("initial", "x1") => self.initial.x1 = v.num()?,
            ("initial", "v1") => self.initial.v1 = v.num()?,
            ("initial", "x2") => self.initial.x2 = v.num()?,
            ("initial", "v2") => self.initial.v2 = v.num()?,
            ("channel", "omega0") => self.channel.omega0 = v.num()?,
            ("channel", "omega") => self.channel.omega = v.num()?,
            ("channel", "g") => self.channel.g = v.num()?,
            ("channel", "n") => self.channel.n = v.list()?,
            ("channel", "T") => self.channel.temperature = Temperature::T(v.num()?),
            ("channel", "beta") => self.channel.temperature = Temperature::Beta(v.num()?),
            ("run", "t_end") => self.run.t_end = v.num()?,
            ("run", "dt_out") => self.run.dt_out = Some(v.num()?),
            ("run", "tol") => self.run.tol = v.num()?,
            ("run", "feedback") => {
                self.run.feedback = match v {
                    Raw::Bool(true) => Feedback::MeanField,
                    Raw::Bool(false) => Feedback::Off,
                    _ => match v.string()?.as_str() {
                        "mean-field" | "on" => Feedback::MeanField,
                        "off" => Feedback::Off,
                        other => return Err(format!("unknown feedback '{other}' (mean-field or off)")),
                    },
                }
            }
            ("run", "regime") => self.run.regime = RegimeMode::parse(&v.string()?)?,
            ("run", "probe_w") => self.run.probes.w = v.string()?.parse()?,
            ("run", "probe_v") => self.run.probes.v = v.string()?.parse()?,
            ("output", "path") => self.output.path = Some(PathBuf::from(v.string()?)),
            ("output", "format") => self.output.format = v.string()?.parse()?,
            _ => return Err(format!("unknown key '{key}' in [{section}]")),
        }
        Ok(())
    }
}

/// (section, key, numeric)
const KEYS: &[(&str, &str, bool)] = &[
    ("", "scenario", false),
    ("", "model", false),
    ("", "note", false),
    ("spin", "omega0", true),
    ("spin", "g", true),
    ("spin", "alpha", true),
    ("oscillators", "omega1", true),
    ("oscillators", "omega2", true),
    ("oscillators", "K", true),
    ("oscillators", "D", true),
    ("oscillators", "xi", true),
    ("oscillators", "gamma", true),
    ("oscillators", "F", true),
    ("oscillators", "Omega", true),
    ("initial", "state", false),
    ("initial", "amplitudes", false),
    ("initial", "x1", true),
    ("initial", "v1", true),
    ("initial", "x2", true),
    ("initial", "v2", true),
    ("channel", "omega0", true),
    ("channel", "omega", true),
    ("channel", "g", true),
    ("channel", "n", true),
    ("channel", "T", true),
    ("channel", "beta", true),
    ("run", "t_end", true),
    ("run", "dt_out", true),
    ("run", "tol", true),
    ("run", "feedback", false),
    ("run", "regime", false),
    ("run", "probe_w", false),
    ("run", "probe_v", false),
    ("output", "path", false),
    ("output", "format", false),
];

fn quote(s: &str) -> String {
    Value::from(s).to_string().trim().to_string()
}

#[derive(Debug, Clone, PartialEq)]
enum Raw {
    Num(f64),
    List(Vec<f64>),
    Str(String),
    Bool(bool),
}

impl Raw {
    fn from_value(v: &Value) -> std::result::Result<Raw, String> {
        Ok(match v {
            Value::Integer(i) => Raw::Num(*i.value() as f64),
            Value::Float(f) => Raw::Num(*f.value()),
            Value::String(s) => Raw::Str(s.value().clone()),
            Value::Boolean(b) => Raw::Bool(*b.value()),
            Value::Array(a) => Raw::List(
                a.iter()
                    .map(|x| match Raw::from_value(x)? {
                        Raw::Num(n) => Ok(n),
                        Raw::Str(s) => eval_number(&s),
                        _ => Err("array entries must be numbers".to_string()),
                    })
                    .collect::<std::result::Result<_, _>>()?,
            ),
            other => return Err(format!("unsupported value type {}", other.type_name())),
        })
    }

    fn num(&self) -> std::result::Result<f64, String> {
        match self {
            Raw::Num(n) => Ok(*n),
            Raw::Str(s) => eval_number(s),
            Raw::List(l) if l.len() == 1 => Ok(l[0]),
            _ => Err("expected a number".into()),
        }
    }

    fn list(&self) -> std::result::Result<Vec<f64>, String> {
        match self {
            Raw::List(l) => Ok(l.clone()),
            other => other.num().map(|n| vec![n]),
        }
    }

    fn string(&self) -> std::result::Result<String, String> {
        match self {
            Raw::Str(s) => Ok(s.clone()),
            _ => Err("expected a string".into()),
        }
    }
}

/// Evaluates a product/quotient of literals and `pi`, e.g. `-2*pi/3`.
pub fn eval_number(s: &str) -> std::result::Result<f64, String> {
    let text = s.trim();
    let (sign, body) = match text.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, text),
    };
    let mut acc = 1.0;
    let mut op = '*';
    let mut start = 0;
    let bytes: Vec<char> = body.chars().collect();
    for i in 0..=bytes.len() {
        if i < bytes.len() && bytes[i] != '*' && bytes[i] != '/' {
            continue;
        }
        let token: String = bytes[start..i].iter().collect();
        let token = token.trim();
        let value = match token {
            "pi" | "π" => std::f64::consts::PI,
            t => t.parse::<f64>().map_err(|_| format!("cannot read '{s}' as a number"))?,
        };
        acc = if op == '*' { acc * value } else { acc / value };
        if i < bytes.len() {
            op = bytes[i];
        }
        start = i + 1;
    }
    Ok(sign * acc)
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// Parses a config, starting from the preset named by `scenario` (or a blank
/// custom configuration), and validates the result.
pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    parse_config_over(text, None)
}

/// As [`parse_config`], with `base` naming the starting preset. A config
/// that also names a scenario must agree with it.
pub fn parse_config_over(text: &str, base: Option<&str>) -> Result<ScenarioConfig> {
    let doc = toml_edit::Document::parse(text).map_err(|e| Error::Config {
        line: e.span().map(|s| line_of(text, s.start)).unwrap_or(1),
        message: e.message().to_string(),
    })?;
    let root = doc.as_table();
    let cfg_err = |line: usize, message: String| Error::Config { line, message };
    let key_line = |table: &toml_edit::Table, k: &str| {
        table
            .key(k)
            .and_then(|key| key.span())
            .map(|s| line_of(text, s.start))
            .unwrap_or(1)
    };
    let string_at = |k: &str| -> Result<Option<String>> {
        match root.get(k) {
            None => Ok(None),
            Some(item) => item
                .as_str()
                .map(|s| Some(s.to_string()))
                .ok_or_else(|| cfg_err(key_line(root, k), format!("'{k}' must be a string"))),
        }
    };

    let named = string_at("scenario")?;
    let canonical = |s: &str| preset_name(s).unwrap_or(s).to_string();
    let scenario = match (base, &named) {
        (Some(b), Some(n)) if canonical(b) != canonical(n) => {
            return Err(cfg_err(
                key_line(root, "scenario"),
                format!("config names scenario '{n}' but '{b}' was requested"),
            ))
        }
        (Some(b), _) => Some(b.to_string()),
        (None, n) => n.clone(),
    };
    let model = match string_at("model")? {
        None => None,
        Some(m) => Some(match m.as_str() {
            "hybrid" => Model::Hybrid,
            "channel" => Model::Channel,
            other => {
                return Err(cfg_err(
                    key_line(root, "model"),
                    format!("unknown model '{other}' (hybrid or channel)"),
                ))
            }
        }),
    };
    let mut cfg = match scenario.as_deref() {
        None | Some("custom") => ScenarioConfig::custom(model.unwrap_or(Model::Hybrid)),
        Some(name) => {
            let c = ScenarioConfig::preset(name).map_err(|e| match e {
                Error::Config { message, .. } => cfg_err(key_line(root, "scenario"), message),
                other => other,
            })?;
            if let Some(m) = model {
                if m != c.model {
                    return Err(cfg_err(
                        key_line(root, "model"),
                        format!("scenario '{name}' is a {:?} model", c.model).to_lowercase(),
                    ));
                }
            }
            c
        }
    };

    let mut lines: HashMap<String, usize> = HashMap::new();
    let mut exclusive: HashMap<&str, (&str, usize)> = HashMap::new();
    for (name, item) in root.iter() {
        match item {
            Item::Table(table) => {
                if !KEYS.iter().any(|(s, _, _)| *s == name && !s.is_empty()) {
                    let line = table.span().map(|s| line_of(text, s.start)).unwrap_or(1);
                    return Err(cfg_err(line, format!("unknown section [{name}]")));
                }
                for (k, v) in table.iter() {
                    let line = key_line(table, k);
                    let value = v
                        .as_value()
                        .ok_or_else(|| cfg_err(line, format!("'{k}' must be a plain value")))?;
                    if !KEYS.iter().any(|(s, kk, _)| *s == name && *kk == k) {
                        return Err(cfg_err(line, format!("unknown key '{k}' in [{name}]")));
                    }
                    let group = match (name, k) {
                        ("oscillators", "K" | "D") => Some("coupling"),
                        ("channel", "T" | "beta") => Some("temperature"),
                        _ => None,
                    };
                    if let Some(g) = group {
                        if let Some((other, _)) = exclusive.insert(g, (k, line)) {
                            return Err(cfg_err(line, format!("'{k}' conflicts with '{other}'; give only one")));
                        }
                    }
                    let raw = Raw::from_value(value).map_err(|m| cfg_err(line, format!("{k}: {m}")))?;
                    cfg.set(name, k, &raw).map_err(|m| cfg_err(line, format!("{k}: {m}")))?;
                    lines.insert(format!("{name}.{k}"), line);
                }
            }
            Item::Value(value) => {
                let line = key_line(root, name);
                match name {
                    "scenario" | "model" => {}
                    "note" => {
                        let raw = Raw::from_value(value).map_err(|m| cfg_err(line, m))?;
                        cfg.set("", "note", &raw).map_err(|m| cfg_err(line, m))?;
                    }
                    other => {
                        return Err(cfg_err(
                            line,
                            format!("unknown top-level key '{other}' (scenario, model, note or a [section])"),
                        ))
                    }
                }
            }
            _ => return Err(cfg_err(key_line(root, name), format!("unsupported entry '{name}'"))),
        }
    }
    let end = text.lines().count().max(1);
    cfg.validate().map_err(|(key, message)| {
        let line = lines.get(key).copied().unwrap_or(end);
        cfg_err(line, message)
    })?;
    Ok(cfg)
}
