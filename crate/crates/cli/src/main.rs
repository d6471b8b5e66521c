// SPDX-License-Identifier: Apache-2.0

//! `nvscramble` command line: run presets or config files, sweep a
//! parameter, list presets.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nvscramble::runner::{
    parse_config_over, run_scenario, sweep, write_output, write_output_to, OutputFormat, Payload, RunResult,
    ScenarioConfig, PRESETS,
};
use nvscramble::Error;

#[derive(Parser)]
#[command(
    name = "nvscramble",
    version,
    about = "OTOC and entanglement diagnostics for two NV spins coupled through oscillators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write its time series.
    Run(Common),
    /// Run a scenario once per value of a numeric parameter.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Parameter to vary, e.g. K, oscillators.F, channel.n.
        #[arg(long)]
        param: String,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        values: Vec<f64>,
    },
    /// Scenario presets.
    Presets {
        #[command(subcommand)]
        action: PresetAction,
    },
}

#[derive(Subcommand)]
enum PresetAction {
    /// Print preset names and descriptions.
    List,
    /// Print the full configuration of a preset.
    Show { name: String },
}

#[derive(Args)]
struct Common {
    /// Config file (sections of key = value pairs).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Preset to start from.
    #[arg(long)]
    scenario: Option<String>,
    /// Override a config entry, e.g. --set oscillators.K=10.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Output file; CSV goes to stdout for `run` when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<OutputFormat>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long = "t-end")]
    t_end: Option<f64>,
}

impl Common {
    fn load(&self) -> Result<ScenarioConfig, Error> {
        let mut cfg = match (&self.config, &self.scenario) {
            (Some(path), base) => {
                let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
                    path: path.display().to_string(),
                    source,
                })?;
                parse_config_over(&text, base.as_deref()).map_err(|e| match e {
                    Error::Config { line, message } => Error::Config {
                        line,
                        message: format!("{}: {message}", path.display()),
                    },
                    other => other,
                })?
            }
            (None, Some(name)) => ScenarioConfig::preset(name)?,
            (None, None) => {
                return Err(Error::Config {
                    line: 0,
                    message: "give --config or --scenario".into(),
                })
            }
        };
        for o in &self.overrides {
            let (k, v) = o.split_once('=').ok_or_else(|| Error::Config {
                line: 0,
                message: format!("--set expects KEY=VALUE, got '{o}'"),
            })?;
            cfg.apply_override(k.trim(), v)?;
        }
        if let Some(tol) = self.tol {
            cfg.run.tol = tol;
        }
        if let Some(t) = self.t_end {
            cfg.run.t_end = t;
        }
        if let Some(f) = self.format {
            cfg.output.format = f;
        }
        if let Some(out) = &self.out {
            cfg.output.path = Some(out.clone());
        }
        Ok(cfg)
    }
}

fn summary(r: &RunResult) -> String {
    match &r.payload {
        Payload::Hybrid { series, diagnostics } => format!(
            "{}: {} records, max|C| = {:.3e}, steps = {}, norm drift = {:.3e}, unitarity defect = {:.3e}, {:.2?}",
            r.config.scenario,
            series.len(),
            series.max_abs_otoc(),
            diagnostics.steps.accepted,
            diagnostics.max_norm_drift,
            diagnostics.max_unitarity_defect,
            r.wall_time
        ),
        Payload::Channel { rows } => {
            let max_dev = rows
                .iter()
                .map(|row| (row.thermal_otoc - row.thermal_otoc_trace).abs())
                .fold(0.0, f64::max);
            format!(
                "{}: {} rows, max |thermal closed form - trace| = {:.3e}, {:.2?}",
                r.config.scenario,
                rows.len(),
                max_dev,
                r.wall_time
            )
        }
    }
}

/// `dir/base.ext` → `dir/base_<param>_<index>.ext`
fn member_path(base: &Path, param: &str, index: usize) -> PathBuf {
    let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("sweep");
    let safe: String = param
        .chars()
        .map(|c| if c.is_alphanumeric() { c } else { '_' })
        .collect();
    let name = match base.extension().and_then(|e| e.to_str()) {
        Some(ext) => format!("{stem}_{safe}_{index}.{ext}"),
        None => format!("{stem}_{safe}_{index}"),
    };
    base.with_file_name(name)
}

fn execute(cli: Cli) -> Result<(), Error> {
    let stdout = std::io::stdout();
    let io = |source| Error::Io {
        path: "<stdout>".into(),
        source,
    };
    match cli.command {
        Command::Presets {
            action: PresetAction::List,
        } => {
            let mut out = stdout.lock();
            for p in PRESETS {
                let aliases = if p.aliases.is_empty() {
                    String::new()
                } else {
                    format!(" (alias {})", p.aliases.join(", "))
                };
                writeln!(out, "{:<10} {}{}", p.name, p.description, aliases).map_err(io)?;
            }
        }
        Command::Presets {
            action: PresetAction::Show { name },
        } => {
            write!(stdout.lock(), "{}", ScenarioConfig::preset(&name)?.to_text()).map_err(io)?;
        }
        Command::Run(common) => {
            let cfg = common.load()?;
            let result = run_scenario(&cfg)?;
            match &cfg.output.path {
                Some(path) => write_output(&result, cfg.output.format, path)?,
                None => write_output_to(&result, cfg.output.format, stdout.lock())?,
            }
            eprintln!("{}", summary(&result));
        }
        Command::Sweep { common, param, values } => {
            let cfg = common.load()?;
            let results = sweep(&cfg, &param, &values)?;
            let mut out = stdout.lock();
            for (k, (v, r)) in values.iter().zip(&results).enumerate() {
                if let Some(base) = &cfg.output.path {
                    let path = member_path(base, &param, k);
                    write_output(r, cfg.output.format, &path)?;
                    writeln!(out, "{param} = {v:?} -> {}", path.display()).map_err(io)?;
                }
                eprintln!("{param} = {v:?}  {}", summary(r));
            }
        }
    }
    Ok(())
}

fn exit_code(e: &Error) -> u8 {
    match e.category() {
        "config" => 2,
        "io" => 3,
        "integration" => 4,
        _ => 5,
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.category());
            ExitCode::from(exit_code(&e))
        }
    }
}
