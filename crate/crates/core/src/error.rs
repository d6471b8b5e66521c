// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Everything that can go wrong in the library, grouped so a caller (or the
/// CLI exit code) can tell configuration mistakes from numerical failures.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid site index {0}: expected 1 or 2")]
    InvalidSite(usize),

    #[error("operator is not Hermitian (max |H - H†| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("operator is not unitary (‖U†U - I‖ = {defect:e})")]
    NotUnitary { defect: f64 },

    #[error("state is not normalized (‖ψ‖ = {norm})")]
    NotNormalized { norm: f64 },

    #[error("degenerate oscillator frequencies: ω1 = ω2 = {0}")]
    DegenerateFrequencies(f64),

    #[error("spin and oscillator frequencies coincide (ω0 = ω = {0})")]
    ResonantChannel(f64),

    #[error("vanishing denominator in {0}")]
    VanishingDenominator(&'static str),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("{name} = {value} is out of range ({expected})")]
    OutOfRange {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("parameters do not match any dynamical regime: {0}")]
    InconsistentRegime(String),

    #[error("step size underflow at t = {t}")]
    StepSizeUnderflow { t: f64 },

    #[error("step limit of {steps} reached at t = {t}")]
    TooManySteps { steps: usize, t: f64 },

    #[error("cumulative wavefunction norm drift {drift:e} exceeded limit at t = {t}")]
    NormDrift { t: f64, drift: f64 },

    /// `line` is 1-based; 0 when the problem is not tied to a config line.
    #[error("{}", config_message(*line, message))]
    Config { line: usize, message: String },

    #[error("sweep target '{0}' is not a numeric parameter")]
    SweepTarget(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed output file: {0}")]
    Format(String),
}

fn config_message(line: usize, message: &str) -> String {
    if line == 0 {
        format!("config: {message}")
    } else {
        format!("config line {line}: {message}")
    }
}

impl Error {
    /// Stable, machine-readable category used for process exit reporting.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Config { .. } | Error::SweepTarget(_) | Error::InconsistentRegime(_) => "config",
            Error::StepSizeUnderflow { .. } | Error::TooManySteps { .. } | Error::NormDrift { .. } => "integration",
            Error::Io { .. } | Error::Format(_) => "io",
            _ => "domain",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
